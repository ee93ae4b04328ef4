"""Blocks, edge multisets, and exact-decomposition verification on complete graphs.

A block is a clique given by its sorted vertex set (size 3, 4, or 5).  A block
list decomposes K_v exactly when every unordered pair of 1..v is covered by
exactly one block.  Vertices are 1-based throughout, pairs are canonicalized
as (min, max), and every iteration order is lexicographic so that all derived
counts are reproducible across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

Block = tuple[int, ...]
Pair = tuple[int, int]

MIN_BLOCK_SIZE = 3
MAX_BLOCK_SIZE = 5


class InvalidBlockError(ValueError):
    """A block violates the sortedness, size, or vertex-range invariants."""


def make_block(vertices: Iterable[int]) -> Block:
    """Return the canonical (strictly increasing) form of a block."""
    block = tuple(sorted(vertices))
    if len(set(block)) != len(block):
        raise InvalidBlockError(f"repeated vertex in block {block}")
    if not MIN_BLOCK_SIZE <= len(block) <= MAX_BLOCK_SIZE:
        raise InvalidBlockError(f"block size {len(block)} outside 3..5: {block}")
    return block


def validate_block(v: int, block: Sequence[int]) -> Block:
    """Check a block against graph order v and return its canonical form."""
    canon = make_block(block)
    if canon[0] < 1 or canon[-1] > v:
        raise InvalidBlockError(f"vertex out of range 1..{v} in block {canon}")
    return canon


def all_pairs(v: int) -> list[Pair]:
    """All unordered pairs of 1..v in lexicographic order."""
    return list(combinations(range(1, v + 1), 2))


def block_pairs(block: Sequence[int]) -> list[Pair]:
    """The C(k,2) pairs inside a block, lexicographic."""
    return list(combinations(sorted(block), 2))


@dataclass
class EdgeMultiset:
    """Pair -> multiplicity map over K_v; pairs absent from `mult` have count 0."""

    v: int
    mult: dict[Pair, int] = field(default_factory=dict)

    def count(self, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        return self.mult.get((a, b), 0)

    def total(self) -> int:
        return sum(self.mult.values())

    def pairs_with_count(self, predicate) -> list[Pair]:
        """All pairs of K_v whose multiplicity satisfies `predicate`, sorted."""
        return [p for p in all_pairs(self.v) if predicate(self.mult.get(p, 0))]


def edge_multiset(v: int, blocks: Iterable[Sequence[int]]) -> EdgeMultiset:
    """Multiplicity of each pair of K_v over the given block list."""
    mult: dict[Pair, int] = {}
    for raw in blocks:
        block = validate_block(v, raw)
        for p in block_pairs(block):
            mult[p] = mult.get(p, 0) + 1
    return EdgeMultiset(v=v, mult=mult)


@dataclass
class DecompositionReport:
    """Verdict of verify_decomposition: exact, or the offending pairs."""

    v: int
    exact: bool
    uncovered: list[Pair]
    overcovered: list[tuple[Pair, int]]

    def __bool__(self) -> bool:
        return self.exact


def verify_decomposition(v: int, blocks: Iterable[Sequence[int]]) -> DecompositionReport:
    """Exact iff every pair of K_v has multiplicity exactly 1."""
    ms = edge_multiset(v, blocks)
    uncovered = ms.pairs_with_count(lambda c: c == 0)
    overcovered = [(p, c) for p, c in sorted(ms.mult.items()) if c > 1]
    return DecompositionReport(
        v=v,
        exact=not uncovered and not overcovered,
        uncovered=uncovered,
        overcovered=overcovered,
    )


# ---------------------------------------------------------------------------
# Block-list file formats: plain text (one block per line, ascending ids,
# space-separated) and a JSON mirror {"v": int, "blocks": [[int]]}.
# ---------------------------------------------------------------------------

def parse_block_lines(text: str) -> list[Block]:
    """Parse the plain text block-list format; blank lines are ignored."""
    blocks = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            ids = [int(tok) for tok in line.split()]
        except ValueError as exc:
            raise InvalidBlockError(f"line {lineno}: non-integer token") from exc
        blocks.append(make_block(ids))
    return blocks


def format_block_lines(blocks: Iterable[Sequence[int]]) -> str:
    return "\n".join(" ".join(str(x) for x in sorted(b)) for b in blocks) + "\n"


def load_block_json(text: str) -> tuple[int, list[Block]]:
    data = json.loads(text)
    v = int(data["v"])
    blocks = [validate_block(v, b) for b in data["blocks"]]
    return v, blocks


def dump_block_json(v: int, blocks: Iterable[Sequence[int]]) -> str:
    return json.dumps({"v": v, "blocks": [list(sorted(b)) for b in blocks]})
