"""The type-0 geometry filter.

Type-0 quintuples live entirely outside the distinguished K9 and are pairwise
edge-disjoint, so two of them share at most one outside vertex.  Given a
global distribution, each outside vertex x must belong to exactly n0(x) of
the n0 type-0 blocks.  Writing a_i for the number of vertices with n0(x) = i,
the filter decides whether the vertices with n0(x) >= 2 can be packed into
block subsets so that

    * any two blocks share at most one assigned vertex,
    * no block receives more than 5 assigned vertices.

Vertices with n0(x) = 1 fill the remaining slots (sum of 5 - load_i equals
a_1 by the distribution equations), and vertices within one profile class are
interchangeable, so witnesses are generated over profile classes and then
expanded to labelled vertices (lowest labels to highest-n0 classes).
Witnesses are emitted exhaustively, deduplicated up to block relabeling.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, permutations

from .arithmetic import Profile
from .distributions import GlobalDistribution

BLOCK_CAPACITY = 5
FIRST_OUTSIDE_VERTEX = 10


def type0_profile_census(dist: GlobalDistribution) -> tuple[int, int, int, int, int]:
    """(a0..a4): counts of outside vertices by their n0(x) value."""
    a = [0] * 5
    for p, c in zip(dist.profiles, dist.counts):
        a[p[0]] += c
    return tuple(a)


def vertex_classes(dist: GlobalDistribution) -> list[tuple[Profile, int]]:
    """Profile classes sorted highest-n0 first (ties by profile), nonzero only."""
    classes = [(p, c) for p, c in zip(dist.profiles, dist.counts) if c]
    return sorted(classes, key=lambda pc: (-pc[0][0], pc[0]))


def labelled_vertices(dist: GlobalDistribution) -> dict[int, Profile]:
    """Outside labels 10..33 assigned to classes, lowest labels first."""
    out: dict[int, Profile] = {}
    label = FIRST_OUTSIDE_VERTEX
    for profile, count in vertex_classes(dist):
        for _ in range(count):
            out[label] = profile
            label += 1
    return out


@dataclass(frozen=True)
class Type0Geometry:
    """A witness assignment of multi-incidence vertices to type-0 blocks."""

    blocks: int
    theta: tuple[tuple[int, tuple[int, ...]], ...]  # (vertex label, block ids)

    @property
    def loads(self) -> tuple[int, ...]:
        loads = [0] * self.blocks
        for _, ids in self.theta:
            for i in ids:
                loads[i] += 1
        return tuple(loads)

    @property
    def singleton_counts_per_block(self) -> tuple[int, ...]:
        return tuple(BLOCK_CAPACITY - l for l in self.loads)

    def theta_map(self) -> dict[int, frozenset[int]]:
        return {v: frozenset(ids) for v, ids in self.theta}

    def as_dict(self) -> dict:
        return {
            "blocks": self.blocks,
            "theta": [[v, list(ids)] for v, ids in self.theta],
            "singleton_counts_per_block": list(self.singleton_counts_per_block),
        }


@dataclass
class FilterResult:
    accepted: bool
    reason: str
    witnesses: list[Type0Geometry]


def _class_assignments(multi: list[tuple[Profile, int]], n0: int) -> list[tuple[tuple[frozenset[int], ...], ...]]:
    """All class-level block assignments satisfying the packing constraints.

    Returns tuples (one entry per multi class) of sorted subset tuples,
    deduplicated up to block relabeling.
    """
    all_blocks = list(range(n0))
    pair_used: set[tuple[int, int]] = set()
    loads = [0] * n0
    per_class: list[list[frozenset[int]]] = [[] for _ in multi]
    results: list[tuple[tuple[frozenset[int], ...], ...]] = []

    flat: list[int] = []  # class index per vertex, classes in order
    for ci, (_, count) in enumerate(multi):
        flat.extend([ci] * count)

    subsets_by_size = {
        k: [tuple(s) for s in combinations(all_blocks, k)] for k in range(2, n0 + 1)
    }

    def place(vi: int) -> None:
        if vi == len(flat):
            results.append(tuple(tuple(c) for c in per_class))
            return
        ci = flat[vi]
        size = multi[ci][0][0]
        prev = per_class[ci][-1] if per_class[ci] else None
        for subset in subsets_by_size.get(size, []):
            fs = frozenset(subset)
            if prev is not None and tuple(sorted(fs)) < tuple(sorted(prev)):
                continue  # vertices within a class are interchangeable
            new_pairs = list(combinations(sorted(subset), 2))
            if any(p in pair_used for p in new_pairs):
                continue  # two blocks would share two vertices
            if any(loads[i] + 1 > BLOCK_CAPACITY for i in subset):
                continue
            pair_used.update(new_pairs)
            for i in subset:
                loads[i] += 1
            per_class[ci].append(fs)
            place(vi + 1)
            per_class[ci].pop()
            for i in subset:
                loads[i] -= 1
            pair_used.difference_update(new_pairs)

    place(0)

    # Deduplicate up to block relabeling: canonical form is the minimum over
    # all block permutations of the per-class sorted subset lists.
    canon: dict[tuple, tuple] = {}
    for assignment in results:
        best = None
        for perm in permutations(range(n0)):
            mapped = tuple(
                tuple(sorted(tuple(sorted(perm[i] for i in s)) for s in cls))
                for cls in assignment
            )
            if best is None or mapped < best:
                best = mapped
        if best not in canon:
            canon[best] = best
    return sorted(canon.values())


def type0_filter(dist: GlobalDistribution, n0: int) -> FilterResult:
    """Decide realizability of the distribution's type-0 incidences."""
    census = type0_profile_census(dist)
    expected = sum(i * a for i, a in enumerate(census))
    if expected != BLOCK_CAPACITY * n0:
        return FilterResult(False, "incidence total mismatch", [])
    if any(census[i] for i in range(n0 + 1, 5)):
        return FilterResult(False, f"a_k > 0 for k > n0={n0}", [])

    classes = vertex_classes(dist)
    multi = [(p, c) for p, c in classes if p[0] >= 2]

    assignments = _class_assignments(multi, n0)
    if not assignments:
        return FilterResult(False, "no packing of multi-incidence vertices", [])

    # Expand class-level assignments to labelled vertices: class members get
    # their subsets in sorted order, labels ascending.
    labels = labelled_vertices(dist)
    witnesses = []
    for assignment in assignments:
        theta = []
        label_iter = iter(sorted(labels))
        by_class = {p: list(cls) for (p, _), cls in zip(multi, assignment)}
        for label in sorted(labels):
            profile = labels[label]
            if profile[0] >= 2:
                subset = by_class[profile].pop(0)
                theta.append((label, tuple(sorted(subset))))
        witnesses.append(Type0Geometry(blocks=n0, theta=tuple(theta)))
    return FilterResult(True, "", witnesses)


def brute_force_type0_filter(dist: GlobalDistribution, n0: int) -> bool:
    """Oracle: exhaustive assignment over labelled multi vertices, no class
    symmetry and no block canonicalization.  Accept/reject verdicts must
    coincide with type0_filter."""
    census = type0_profile_census(dist)
    if sum(i * a for i, a in enumerate(census)) != BLOCK_CAPACITY * n0:
        return False
    if any(census[i] for i in range(n0 + 1, 5)):
        return False
    labels = labelled_vertices(dist)
    multi_labels = [v for v in sorted(labels) if labels[v][0] >= 2]

    pair_used: set[tuple[int, int]] = set()
    loads = [0] * n0

    def place(i: int) -> bool:
        if i == len(multi_labels):
            return True
        v = multi_labels[i]
        for subset in combinations(range(n0), labels[v][0]):
            pairs = list(combinations(subset, 2))
            if any(p in pair_used for p in pairs):
                continue
            if any(loads[b] + 1 > BLOCK_CAPACITY for b in subset):
                continue
            pair_used.update(pairs)
            for b in subset:
                loads[b] += 1
            if place(i + 1):
                for b in subset:
                    loads[b] -= 1
                pair_used.difference_update(pairs)
                return True
            for b in subset:
                loads[b] -= 1
            pair_used.difference_update(pairs)
        return False

    return place(0)


def canonical_fill(dist: GlobalDistribution, witness: Type0Geometry) -> dict[int, frozenset[int]]:
    """Extend the witness theta over the n0(x)=1 vertices: lowest labels fill
    the blocks in order, each block up to its singleton capacity.

    Vertices with equal n0 are interchangeable at this stage, so the fill is
    a canonical representative, not a choice.
    """
    theta = {v: frozenset(ids) for v, ids in witness.theta}
    capacity = list(witness.singleton_counts_per_block)
    labels = labelled_vertices(dist)
    block = 0
    for v in sorted(labels):
        if labels[v][0] != 1:
            continue
        while block < witness.blocks and capacity[block] == 0:
            block += 1
        if block >= witness.blocks:
            raise ValueError("singleton fill exceeds type-0 capacity")
        theta[v] = frozenset([block])
        capacity[block] -= 1
    return theta


def dump_witness_json(w: Type0Geometry) -> str:
    return json.dumps(w.as_dict())
