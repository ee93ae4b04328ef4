"""Local signatures of an outside vertex relative to a fixed triangle pattern.

For the K33 case (6 triangles + 51 quintuples), fix the pattern T on the
distinguished K9 and a set of type-3 triples.  A local signature of an
outside vertex x records which leftover type-2 pairs and which chosen type-3
triples share a quintuple with x; the K9 vertices in neither are x's type-1
singles.  All selected pairs and triples must be pairwise vertex-disjoint.

The derived local profile is
    n3 = #triples,  n2 = #pairs,  n1 = 9 - 2 n2 - 3 n3,  n0 = 8 - n1 - n2 - n3,
and a signature is admissible when n1 >= 0, n0 >= 0 and n0 <= n0_max (4 in
the cases with 1 <= n3 <= 3, otherwise the global type-0 count).

Signatures are enumerated in a fixed order: by profile (Table-3 lexicographic),
then by pair list, then by triple list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .arithmetic import Profile, global_type_counts
from .symmetry import K9_VERTICES, Pair, TrianglePattern, Triple


@dataclass(frozen=True)
class Type2PairSet:
    """The leftover K9 pairs once T-edges and chosen-triple edges are removed."""

    pairs: tuple[Pair, ...]
    chosen_triples: tuple[Triple, ...]


def type2_pairs(pattern: TrianglePattern, chosen_triples: tuple[Triple, ...]) -> Type2PairSet:
    """All K9 pairs outside E(T) and outside every chosen triple; size 18 - 3 n3."""
    from .symmetry import legal_type3_triples

    legal = set(legal_type3_triples(pattern))
    chosen = tuple(sorted(tuple(sorted(t)) for t in chosen_triples))
    if len(set(chosen)) != len(chosen):
        raise ValueError("chosen triples must be distinct")
    for t in chosen:
        if t not in legal:
            raise ValueError(f"triple {t} is not legal for the {pattern.kind} pattern")
    excluded = set(pattern.t_edges)
    for t in chosen:
        excluded.update(combinations(t, 2))
    pairs = tuple(p for p in combinations(K9_VERTICES, 2) if p not in excluded)
    return Type2PairSet(pairs=pairs, chosen_triples=chosen)


@dataclass(frozen=True)
class LocalSignature:
    pairs: tuple[Pair, ...]
    triples: tuple[Triple, ...]
    singles: tuple[int, ...]
    profile: Profile

    @property
    def support(self) -> frozenset[int]:
        """K9 vertices covered by the selected pairs and triples."""
        return frozenset(v for obj in self.pairs + self.triples for v in obj)

    @property
    def objects(self) -> frozenset[tuple[int, ...]]:
        """Selected pairs and triples as one set, for overlap tests."""
        return frozenset(self.pairs) | frozenset(self.triples)

    def as_dict(self) -> dict:
        return {
            "pairs": [list(p) for p in self.pairs],
            "triples": [list(t) for t in self.triples],
            "singles": list(self.singles),
            "profile": list(self.profile),
        }


def default_n0_cap(n_chosen: int) -> int:
    """n0(x) <= 4 in the 1 <= n3 <= 3 cases; otherwise the global n0."""
    if 1 <= n_chosen <= 3:
        return 4
    return global_type_counts(n_chosen)[0]


def enumerate_local_signatures(
    pattern: TrianglePattern,
    chosen_triples: tuple[Triple, ...],
    n0_max: int | None = None,
) -> list[LocalSignature]:
    """Every admissible local signature exactly once, in the fixed order."""
    pair_set = type2_pairs(pattern, chosen_triples)
    chosen = pair_set.chosen_triples
    if n0_max is None:
        n0_max = default_n0_cap(len(chosen))

    out: list[LocalSignature] = []
    for k in range(len(chosen) + 1):
        for triples in combinations(chosen, k):
            used = set(v for t in triples for v in t)
            if len(used) != 3 * k:
                continue  # overlapping triples cannot share one vertex's quintuples
            avail = [p for p in pair_set.pairs if not (set(p) & used)]
            _extend(avail, 0, [], used, triples, n0_max, out)
    order = {}
    for sig in out:
        order[sig] = (sig.profile, sig.pairs, sig.triples)
    out.sort(key=order.__getitem__)
    return out


def _extend(avail, start, picked, used, triples, n0_max, out):
    profile = _profile(len(picked), len(triples))
    if profile is not None and profile[0] <= n0_max:
        singles = tuple(v for v in K9_VERTICES if v not in used)
        out.append(LocalSignature(tuple(picked), triples, singles, profile))
    # upper bound: n1 >= 0 caps the number of pairs at (9 - 3 n3) // 2
    if 2 * (len(picked) + 1) + 3 * len(triples) > 9:
        return
    for i in range(start, len(avail)):
        p = avail[i]
        if set(p) & used:
            continue
        used.update(p)
        picked.append(p)
        _extend(avail, i + 1, picked, used, triples, n0_max, out)
        picked.pop()
        used.difference_update(p)


def _profile(n2: int, n3: int) -> Profile | None:
    n1 = 9 - 2 * n2 - 3 * n3
    n0 = 8 - n1 - n2 - n3
    if n1 < 0 or n0 < 0:
        return None
    return (n0, n1, n2, n3)


def dump_signatures_jsonl(signatures: list[LocalSignature]) -> str:
    return "\n".join(json.dumps(s.as_dict()) for s in signatures) + "\n"
