"""Triangle patterns on the distinguished K9, their automorphism groups and
orbits, plus small-graph canonicalization and constrained graph generation.

The six triangles of the 57-block case live on 9 vertices in one of two
labelled patterns (grid = K3 x K3, prism = line graph of the triangular
prism).  Automorphism groups are computed by brute force over all 9!
permutations rather than hard-coded, so they are self-verifying.

Canonical forms use equitable degree refinement with individualization
backtracking and discovered-automorphism pruning; they are exact for any
graph but intended for n <= 12.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Sequence

Pair = tuple[int, int]
Triple = tuple[int, int, int]

GRID_TRIANGLES: tuple[Triple, ...] = (
    (1, 2, 3), (4, 5, 6), (7, 8, 9), (1, 4, 7), (2, 5, 8), (3, 6, 9),
)
PRISM_TRIANGLES: tuple[Triple, ...] = (
    (1, 3, 7), (1, 2, 8), (2, 3, 9), (4, 6, 7), (4, 5, 8), (5, 6, 9),
)

K9_VERTICES = tuple(range(1, 10))


@dataclass(frozen=True)
class TrianglePattern:
    """Six edge-disjoint triangles whose union is 4-regular on 1..9."""

    kind: str
    triangles: tuple[Triple, ...]

    @property
    def t_edges(self) -> frozenset[Pair]:
        return frozenset(p for t in self.triangles for p in combinations(t, 2))

    def covered(self, a: int, b: int) -> bool:
        return ((a, b) if a < b else (b, a)) in self.t_edges


def pattern_triangles(kind: str) -> TrianglePattern:
    """The paper's two labelled triangle patterns."""
    if kind == "grid":
        return TrianglePattern("grid", GRID_TRIANGLES)
    if kind == "prism":
        return TrianglePattern("prism", PRISM_TRIANGLES)
    raise ValueError(f"unknown pattern kind: {kind!r}")


def automorphism_group(pattern: TrianglePattern) -> list[tuple[int, ...]]:
    """All permutations of 1..9 mapping the triangle set to itself.

    Brute force over 9! = 362,880 candidates; each permutation is returned
    as a length-9 image tuple (image[i] = image of vertex i+1), sorted.
    """
    tri_set = {frozenset(t) for t in pattern.triangles}
    # Index triangles through each vertex for a quick rejection test.
    group = []
    for perm in permutations(range(1, 10)):
        ok = True
        for t in pattern.triangles:
            if frozenset((perm[t[0] - 1], perm[t[1] - 1], perm[t[2] - 1])) not in tri_set:
                ok = False
                break
        if ok:
            group.append(perm)
    return sorted(group)


def apply_permutation(perm: Sequence[int], vertices: Iterable[int]) -> tuple[int, ...]:
    """Image of a sorted vertex set under an image-tuple permutation."""
    return tuple(sorted(perm[v - 1] for v in vertices))


def legal_type3_triples(pattern: TrianglePattern) -> list[Triple]:
    """All 3-subsets of 1..9 none of whose pairs lies on a pattern triangle."""
    edges = pattern.t_edges
    out = []
    for t in combinations(K9_VERTICES, 3):
        if all(p not in edges for p in combinations(t, 2)):
            out.append(t)
    return out


@dataclass(frozen=True)
class TripleSetOrbit:
    representative: tuple[Triple, ...]
    size: int
    members: tuple[tuple[Triple, ...], ...]

    @property
    def multiplicity_profile(self) -> tuple[int, ...]:
        """Per-vertex incidence counts of the representative's triples."""
        counts = [0] * 9
        for t in self.representative:
            for v in t:
                counts[v - 1] += 1
        return tuple(counts)


def orbits_on_triple_sets(pattern: TrianglePattern, n3: int) -> list[TripleSetOrbit]:
    """Partition the n3-subsets of legal type-3 triples into Aut(T)-orbits.

    Representatives are the lexicographic minima of their orbits; orbits are
    returned sorted by representative.
    """
    legal = legal_type3_triples(pattern)
    if not 1 <= n3 <= len(legal):
        raise ValueError(f"n3={n3} exceeds the {len(legal)} legal triples")
    group = automorphism_group(pattern)
    subsets = [tuple(sorted(s)) for s in combinations(legal, n3)]
    remaining = set(subsets)
    orbits = []
    for s in subsets:
        if s not in remaining:
            continue
        members = {tuple(sorted(apply_permutation(g, t) for t in s)) for g in group}
        remaining -= members
        orbits.append(
            TripleSetOrbit(representative=min(members), size=len(members), members=tuple(sorted(members)))
        )
    return sorted(orbits, key=lambda o: o.representative)


# ---------------------------------------------------------------------------
# Small graphs and canonical labeling.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmallGraph:
    """A simple graph on vertices 1..n with a frozen edge set."""

    n: int
    edges: frozenset[Pair]

    def __post_init__(self):
        for a, b in self.edges:
            if not (1 <= a < b <= self.n):
                raise ValueError(f"invalid edge ({a},{b}) for order {self.n}")

    def degree_sequence(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for a, b in self.edges:
            deg[a - 1] += 1
            deg[b - 1] += 1
        return tuple(deg)

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n + 1)]
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        adj = self.adjacency()
        seen = {1}
        stack = [1]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n


def graph_from_edges(n: int, edges: Iterable[Sequence[int]]) -> SmallGraph:
    return SmallGraph(n, frozenset((min(a, b), max(a, b)) for a, b in edges))


def permute_graph(g: SmallGraph, perm: Sequence[int]) -> SmallGraph:
    """Relabel by an image tuple (perm[i] = new label of vertex i+1)."""
    return graph_from_edges(g.n, ((perm[a - 1], perm[b - 1]) for a, b in g.edges))


def complement_graph(g: SmallGraph) -> SmallGraph:
    edges = frozenset(p for p in combinations(range(1, g.n + 1), 2) if p not in g.edges)
    return SmallGraph(g.n, edges)


def _refine(adj: list[set[int]], cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement: split cells by neighbor counts into other cells."""
    cells = [list(c) for c in cells]
    changed = True
    while changed:
        changed = False
        for target_idx in range(len(cells)):
            target = set(cells[target_idx])
            new_cells = []
            for cell in cells:
                if len(cell) == 1:
                    new_cells.append(cell)
                    continue
                buckets: dict[int, list[int]] = {}
                for v in cell:
                    k = len(adj[v] & target)
                    buckets.setdefault(k, []).append(v)
                if len(buckets) == 1:
                    new_cells.append(cell)
                else:
                    changed = True
                    for k in sorted(buckets):
                        new_cells.append(buckets[k])
            cells = new_cells
            if changed:
                break
    return cells


def _encode(g: SmallGraph, labeling: Sequence[int]) -> int:
    """Upper-triangle adjacency bits under new labels, packed as an int."""
    pos = {v: i for i, v in enumerate(labeling)}
    code = 0
    for a, b in g.edges:
        i, j = pos[a], pos[b]
        if i > j:
            i, j = j, i
        # bit index of pair (i,j) in row-major upper-triangle order
        code |= 1 << (i * g.n - i * (i + 1) // 2 + (j - i - 1))
    return code


def canonical_form(g: SmallGraph) -> tuple[int, tuple[Pair, ...]]:
    """Canonical (n, sorted edge tuple): equal iff the graphs are isomorphic.

    Equitable degree refinement with individualization backtracking; discovered
    automorphisms prune sibling branches, which keeps highly symmetric graphs
    (empty, complete, vertex-transitive) from exploding.
    """
    n = g.n
    if n == 0:
        return (0, ())
    adj = g.adjacency()
    initial = _refine(adj, [list(range(1, n + 1))])
    best: dict[str, object] = {"code": -1, "labeling": None}
    autos: list[dict[int, int]] = []

    def search(cells: list[list[int]], fixed: tuple[int, ...]) -> None:
        if all(len(c) == 1 for c in cells):
            labeling = [c[0] for c in cells]
            code = _encode(g, labeling)
            if code > best["code"]:
                best["code"] = code
                best["labeling"] = labeling
            elif code == best["code"]:
                ref = best["labeling"]
                autos.append({ref[i]: labeling[i] for i in range(n)})
            return
        idx = next(i for i, c in enumerate(cells) if len(c) > 1)
        cell = sorted(cells[idx])

        def cell_orbit_reps() -> set[int]:
            # Union-find closure of the cell under discovered automorphisms
            # that fix the individualized prefix pointwise.
            parent = {v: v for v in cell}

            def find(x: int) -> int:
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for a in autos:
                if all(a[f] == f for f in fixed):
                    for v in cell:
                        w = a[v]
                        if w in parent:
                            ra, rb = find(v), find(w)
                            if ra != rb:
                                parent[max(ra, rb)] = min(ra, rb)
            return {find(v) for v in cell}

        for v in cell:
            # Recompute orbits as automorphisms accumulate during the loop;
            # the representative of each orbit is its minimum, so a non-rep v
            # has already been covered by an earlier sibling.
            if v not in cell_orbit_reps():
                continue
            new_cells = cells[:idx] + [[v], [u for u in cell if u != v]] + cells[idx + 1 :]
            search(_refine(adj, new_cells), fixed + (v,))

    search(initial, ())
    labeling = best["labeling"]
    relabel = {v: i + 1 for i, v in enumerate(labeling)}
    edges = tuple(sorted(tuple(sorted((relabel[a], relabel[b]))) for a, b in g.edges))
    return (n, edges)


def canonical_graph(g: SmallGraph) -> SmallGraph:
    n, edges = canonical_form(g)
    return SmallGraph(n, frozenset(edges))


# ---------------------------------------------------------------------------
# Degree-constrained generation.
# ---------------------------------------------------------------------------


def _complete_regular(n: int, d: int) -> list[frozenset[Pair]]:
    """All d-regular edge sets on 0..n-1 vertices (labelled, pruned by the
    interchangeability of untouched vertices), as 1-based edge frozensets."""
    deficiency = [d] * n
    adj_bits = [0] * n  # bitmask of earlier-vertex adjacency, for class ids
    results: list[frozenset[Pair]] = []
    edges: list[Pair] = []

    def feasible(i: int) -> bool:
        rem = [j for j in range(i + 1, n) if deficiency[j] > 0]
        total = sum(deficiency[j] for j in rem)
        if total % 2:
            return False
        for j in rem:
            if deficiency[j] > len(rem) - 1 + (0):
                return False
        return True

    def extend(i: int) -> None:
        if i == n:
            if all(x == 0 for x in deficiency):
                results.append(frozenset(tuple(sorted((a + 1, b + 1))) for a, b in edges))
            return
        need = deficiency[i]
        later = [j for j in range(i + 1, n) if deficiency[j] > 0]
        if need > len(later):
            return
        # Group interchangeable later vertices: same earlier-adjacency bits.
        classes: dict[int, list[int]] = {}
        for j in later:
            classes.setdefault(adj_bits[j], []).append(j)
        class_list = [sorted(v) for _, v in sorted(classes.items())]

        def choose(ci: int, remaining: int, chosen: list[int]) -> None:
            if remaining == 0:
                for j in chosen:
                    deficiency[j] -= 1
                    adj_bits[j] |= 1 << i
                deficiency[i] = 0
                edges.extend((i, j) for j in chosen)
                if feasible(i):
                    extend(i + 1)
                del edges[len(edges) - len(chosen) :]
                deficiency[i] = need
                for j in chosen:
                    deficiency[j] += 1
                    adj_bits[j] &= ~(1 << i)
                return
            if ci == len(class_list):
                return
            cls = class_list[ci]
            for take in range(min(len(cls), remaining), -1, -1):
                choose(ci + 1, remaining - take, chosen + cls[:take])

        choose(0, need, [])

    extend(0)
    return results


def generate_regular_graphs(n: int, d: int, connected_only: bool = False) -> list[SmallGraph]:
    """One representative per isomorphism class of d-regular graphs of order n.

    Backtracking over later-neighbor sets with interchangeability pruning,
    then canonical-form deduplication.  Dense degrees are generated through
    the complement.
    """
    if n < 1 or d < 0 or d >= n:
        raise ValueError(f"invalid (n, d) = ({n}, {d})")
    if (n * d) % 2:
        raise ValueError(f"parity violation: n*d = {n * d} is odd")
    if d > (n - 1) // 2:
        complements = generate_regular_graphs(n, n - 1 - d, connected_only=False)
        graphs = [complement_graph(g) for g in complements]
    else:
        graphs = [SmallGraph(n, es) for es in _complete_regular(n, d)]
    reps: dict[tuple, SmallGraph] = {}
    for g in graphs:
        key = canonical_form(g)
        if key not in reps:
            reps[key] = SmallGraph(n, frozenset(key[1]))
    out = [reps[k] for k in sorted(reps)]
    if connected_only:
        out = [g for g in out if g.is_connected()]
    return out


def generate_even_graphs(n: int, m: int) -> list[SmallGraph]:
    """One representative per isomorphism class of graphs of order n, size m,
    with every vertex degree even.  Exhaustive over edge subsets (n <= 8)."""
    if n > 8:
        raise ValueError("even-graph generation is exhaustive; restricted to n <= 8")
    pairs = list(combinations(range(1, n + 1), 2))
    reps: dict[tuple, SmallGraph] = {}
    for subset in combinations(pairs, m):
        deg = [0] * (n + 1)
        for a, b in subset:
            deg[a] += 1
            deg[b] += 1
        if any(x % 2 for x in deg[1:]):
            continue
        g = SmallGraph(n, frozenset(subset))
        key = canonical_form(g)
        if key not in reps:
            reps[key] = SmallGraph(n, frozenset(key[1]))
    return [reps[k] for k in sorted(reps)]
