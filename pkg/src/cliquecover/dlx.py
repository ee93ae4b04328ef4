"""Quota-aware dancing-links exact cover.

Columns are edges of a host graph (all primary, demand 1); rows are candidate
blocks.  Rows may carry a class label with an exact per-class quota (e.g.
exactly 6 triangles among the selected rows).  Column choice is min-size with
ties broken by lowest column id, so search statistics are reproducible.

Quotas are enforced at row selection (a class at its quota contributes no
further rows) and by pruning when a class can no longer reach its quota:
per-class availability counters are updated as rows are hidden and restored
by the link dance.

The "checks" statistic counts row-node unlink operations, the dominant unit
of work of the dance.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .core import all_pairs


@dataclass
class CoverInstance:
    columns: list  # column names (e.g. edge pairs), index = column id
    rows: list[tuple]  # row payloads (e.g. blocks)
    row_columns: list[list[int]]  # column ids per row
    row_class: list[str | None] = field(default_factory=list)
    quotas: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.row_class:
            self.row_class = [None] * len(self.rows)
        ncols = len(self.columns)
        for cols in self.row_columns:
            for c in cols:
                if not 0 <= c < ncols:
                    raise ValueError(f"row references undefined column {c}")
        classes = {c for c in self.row_class if c is not None}
        for cls in self.quotas:
            if cls not in classes:
                raise ValueError(f"quota references undefined class {cls!r}")


@dataclass
class SearchStats:
    nodes: int = 0
    checks: int = 0
    best_depth: int = 0
    elapsed: float = 0.0


@dataclass
class CoverResult:
    status: str  # "solution" | "unsat" | "budget-exhausted" | "count"
    solution: list | None = None
    count: int | None = None
    stats: SearchStats = field(default_factory=SearchStats)


def blocks_cover_instance(
    v: int,
    blocks: Iterable[Sequence[int]],
    classes: dict[int, str] | None = None,
    quotas: dict[str, int] | None = None,
    edges: list | None = None,
) -> CoverInstance:
    """Instance whose columns are the edges of K_v (or a given edge list) and
    whose rows are the blocks; classes may be assigned by block size."""
    columns = edges if edges is not None else all_pairs(v)
    col_id = {e: i for i, e in enumerate(columns)}
    rows = []
    row_columns = []
    row_class = []
    for b in blocks:
        b = tuple(sorted(b))
        rows.append(b)
        row_columns.append([col_id[p] for p in combinations(b, 2)])
        row_class.append(None if not classes else classes.get(len(b)))
    return CoverInstance(columns, rows, row_columns, row_class, quotas or {})


class _Dlx:
    """Toroidal doubly-linked structure over flat lists."""

    def __init__(self, inst: CoverInstance):
        ncols = len(inst.columns)
        self.ncols = ncols
        self.root = ncols
        total = ncols + 1 + sum(len(c) for c in inst.row_columns)
        self.L = [0] * total
        self.R = [0] * total
        self.U = [0] * total
        self.D = [0] * total
        self.C = [0] * total
        self.node_row = [-1] * total
        self.size = [0] * ncols
        for c in range(ncols + 1):
            self.L[c] = c - 1 if c else self.root
            self.R[c] = c + 1 if c < ncols else 0
            self.U[c] = c
            self.D[c] = c
            self.C[c] = c
        self.L[0] = self.root
        self.R[self.root] = 0
        self.L[self.root] = ncols - 1 if ncols else self.root

        self.row_first: list[int] = []
        nxt = ncols + 1
        for ri, cols in enumerate(inst.row_columns):
            first = nxt
            self.row_first.append(first)
            prev = -1
            for c in cols:
                node = nxt
                nxt += 1
                self.C[node] = c
                self.node_row[node] = ri
                self.D[node] = c
                self.U[node] = self.U[c]
                self.D[self.U[c]] = node
                self.U[c] = node
                self.size[c] += 1
                if prev < 0:
                    self.L[node] = node
                    self.R[node] = node
                else:
                    self.L[node] = prev
                    self.R[node] = self.R[prev]
                    self.L[self.R[prev]] = node
                    self.R[prev] = node
                prev = node
        self.inst = inst
        self.avail: dict[str, int] = {}
        for cls in inst.quotas:
            self.avail[cls] = sum(1 for c in inst.row_class if c == cls)
        self.selected: dict[str, int] = {cls: 0 for cls in inst.quotas}
        self.stats = SearchStats()

    def structure_hash(self) -> int:
        return hash((tuple(self.L), tuple(self.R), tuple(self.U), tuple(self.D)))

    def _hide_row_counters(self, ri: int, delta: int) -> None:
        cls = self.inst.row_class[ri]
        if cls in self.avail:
            self.avail[cls] += delta

    def cover(self, c: int) -> None:
        L, R, U, D, C = self.L, self.R, self.U, self.D, self.C
        R[L[c]] = R[c]
        L[R[c]] = L[c]
        i = D[c]
        while i != c:
            j = R[i]
            while j != i:
                U[D[j]] = U[j]
                D[U[j]] = D[j]
                self.size[C[j]] -= 1
                self.stats.checks += 1
                j = R[j]
            self._hide_row_counters(self.node_row[i], -1)
            i = D[i]

    def uncover(self, c: int) -> None:
        L, R, U, D, C = self.L, self.R, self.U, self.D, self.C
        i = U[c]
        while i != c:
            self._hide_row_counters(self.node_row[i], +1)
            j = L[i]
            while j != i:
                self.size[C[j]] += 1
                U[D[j]] = j
                D[U[j]] = j
                j = L[j]
            i = U[i]
        R[L[c]] = c
        L[R[c]] = c

    def choose_column(self) -> int:
        best = -1
        best_size = 1 << 60
        c = self.R[self.root]
        while c != self.root:
            s = self.size[c]
            if s < best_size:
                best_size = s
                best = c
                if s == 0:
                    break
            c = self.R[c]
        return best

    def quota_dead(self) -> bool:
        for cls, quota in self.inst.quotas.items():
            if self.selected[cls] + self.avail[cls] < quota:
                return True
        return False

    def search(self, mode: str, node_budget: int | None, deadline: float | None):
        """Generator over solutions (lists of row ids); raises _Budget."""
        solution: list[int] = []

        def rec():
            self.stats.nodes += 1
            if node_budget is not None and self.stats.nodes > node_budget:
                raise _Budget()
            if deadline is not None and self.stats.nodes % 256 == 0 and time.monotonic() > deadline:
                raise _Budget()
            if self.R[self.root] == self.root:
                if all(self.selected[cls] == q for cls, q in self.inst.quotas.items()):
                    yield list(solution)
                return
            if self.quota_dead():
                return
            c = self.choose_column()
            if self.size[c] == 0:
                return
            self.cover(c)
            i = self.D[c]
            while i != c:
                ri = self.node_row[i]
                cls = self.inst.row_class[ri]
                if cls in self.selected and self.selected[cls] >= self.inst.quotas[cls]:
                    i = self.D[i]
                    continue
                solution.append(ri)
                if cls in self.selected:
                    self.selected[cls] += 1
                if len(solution) > self.stats.best_depth:
                    self.stats.best_depth = len(solution)
                j = self.R[i]
                while j != i:
                    self.cover(self.C[j])
                    j = self.R[j]
                yield from rec()
                j = self.L[i]
                while j != i:
                    self.uncover(self.C[j])
                    j = self.L[j]
                if cls in self.selected:
                    self.selected[cls] -= 1
                solution.pop()
                i = self.D[i]
            self.uncover(c)

        return rec()


class _Budget(Exception):
    pass


def solve_cover(
    inst: CoverInstance,
    mode: str = "first",
    node_budget: int | None = None,
    time_budget: float | None = None,
) -> CoverResult:
    """mode: "first" (one cover or unsat), "count" (number of covers), or
    "prove-unsat" (exhaust; unsat iff no cover exists)."""
    if mode not in ("first", "count", "prove-unsat"):
        raise ValueError(f"unknown mode {mode!r}")
    dlx = _Dlx(inst)
    before = dlx.structure_hash()
    deadline = time.monotonic() + time_budget if time_budget is not None else None
    start = time.monotonic()
    count = 0
    first_solution = None
    status = None
    try:
        for sol in dlx.search(mode, node_budget, deadline):
            count += 1
            if first_solution is None:
                first_solution = [inst.rows[ri] for ri in sol]
            if mode == "first" or mode == "prove-unsat":
                status = "solution"
                break
    except _Budget:
        status = "budget-exhausted"
    dlx.stats.elapsed = time.monotonic() - start
    if status is None:
        if mode == "count":
            status = "count"
        elif count:
            status = "solution"
        else:
            status = "unsat"
    if status != "budget-exhausted" and mode != "count":
        # the dance must have restored the structure exactly
        after = dlx.structure_hash()
        if mode == "prove-unsat" and status == "unsat" and after != before:
            raise AssertionError("link dance failed to restore the structure")
    return CoverResult(
        status=status,
        solution=first_solution,
        count=count if mode == "count" else None,
        stats=dlx.stats,
    )


# ---------------------------------------------------------------------------
# Benchmarks.
# ---------------------------------------------------------------------------


def triangle_rows(v: int) -> list[tuple[int, ...]]:
    return list(combinations(range(1, v + 1), 3))


def triangle_benchmark(n_list: Iterable[int], node_budget: int | None = None) -> list[dict]:
    """One triangle decomposition of K_n per valid n; CSV-ready records."""
    out = []
    for n in n_list:
        if n % 6 not in (1, 3):
            out.append({"n": n, "skipped": "n must be 1 or 3 mod 6"})
            continue
        inst = blocks_cover_instance(n, triangle_rows(n))
        res = solve_cover(inst, "first", node_budget=node_budget)
        rec = {
            "n": n,
            "blocks": len(res.solution) if res.solution else 0,
            "nodes": res.stats.nodes,
            "seconds": round(res.stats.elapsed, 6),
            "status": res.status,
        }
        out.append(rec)
    return out


def monolithic_k33_instance() -> CoverInstance:
    """The direct (6,0,51) exact-cover instance: all triangles and quintuples
    of K33 with an exact triangle quota of 6."""
    blocks = list(combinations(range(1, 34), 3)) + list(combinations(range(1, 34), 5))
    return blocks_cover_instance(
        33, blocks, classes={3: "K3", 5: "K5"}, quotas={"K3": 6, "K5": 51}
    )


def monolithic_k33_dlx(node_budget: int | None = None, time_budget: float | None = 60.0) -> CoverResult:
    inst = monolithic_k33_instance()
    return solve_cover(inst, "first", node_budget=node_budget, time_budget=time_budget)
