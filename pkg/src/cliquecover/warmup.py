"""The K18/K19 warm-up cases: forced triangle configurations, residual
K4-completion tests through the exact-cover engine, and graph6 ingestion.

Degree counting pins every vertex of a {K3,K4}-decomposition of K18 to
alpha_x in {1,4} for alpha <= 13, which forces a small family of triangle
configurations per alpha; each residual is then tested for K4-decomposability
and rejected.  For K19 the triangle-vertices all carry alpha_x = 3 and the
triangle union is a 6-regular graph, reducing alpha in {9,11} to a finite
graph list (4 types of order 9, 266 of order 11).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from importlib import resources
from itertools import combinations, permutations
from pathlib import Path
from typing import Iterable, Sequence

from . import dlx
from .core import all_pairs
from .symmetry import SmallGraph, canonical_form, generate_even_graphs, generate_regular_graphs, graph_from_edges

Triangle = tuple[int, int, int]

REGULAR_11_6_FILE = "regular_11_6.g6"
REGULAR_11_6_COUNT = 266
# sha256 of the shipped graph6 file; regenerate with generate_regular_graphs(11, 6)
REGULAR_11_6_SHA256 = "19eaca053c368fabd6d99aadfb25def9aa3256f6f94f4066d3526f301b460b43"


@dataclass
class TriangleConfiguration:
    v: int
    triangles: list[Triangle]
    provenance: str

    def alpha_census(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for t in self.triangles:
            for x in t:
                counts[x] = counts.get(x, 0) + 1
        return counts

    def validate(self, heavy_alpha: int, heavy_count: int) -> None:
        seen = set()
        for t in self.triangles:
            for p in combinations(sorted(t), 2):
                if p in seen:
                    raise ValueError(f"{self.provenance}: repeated edge {p}")
                seen.add(p)
        census = self.alpha_census()
        heavies = [x for x, c in census.items() if c == heavy_alpha]
        others = [x for x, c in census.items() if c not in (heavy_alpha, 1)]
        if len(heavies) != heavy_count or others:
            raise ValueError(
                f"{self.provenance}: alpha census {sorted(census.values())} "
                f"does not match {heavy_count} heavies of {heavy_alpha}"
            )


@dataclass
class ConfigVerdict:
    config_id: str
    triangles: list[Triangle]
    dlx_status: str
    nodes: int


@dataclass
class CaseReport:
    case: str
    configurations: list[ConfigVerdict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def all_infeasible(self) -> bool:
        return bool(self.configurations) and all(
            c.dlx_status == "unsat" for c in self.configurations
        )

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "all_infeasible": self.all_infeasible,
            "configurations": [
                {"id": c.config_id, "triangles": c.triangles, "dlx": c.dlx_status, "nodes": c.nodes}
                for c in self.configurations
            ],
            "notes": self.notes,
        }


def residual_k4_test(v: int, triangles: Sequence[Triangle]) -> dlx.CoverResult:
    """Exact-cover test: can K_v minus the triangle edges decompose into K4s?"""
    used = set()
    for t in triangles:
        for p in combinations(sorted(t), 2):
            used.add(p)
    residual_edges = [p for p in all_pairs(v) if p not in used]
    edge_set = set(residual_edges)
    adj = {x: set() for x in range(1, v + 1)}
    for a, b in residual_edges:
        adj[a].add(b)
        adj[b].add(a)
    rows = []
    for quad in combinations(range(1, v + 1), 4):
        if all(p in edge_set for p in combinations(quad, 2)):
            rows.append(quad)
    inst = dlx.blocks_cover_instance(v, rows, edges=residual_edges)
    return dlx.solve_cover(inst, "prove-unsat")


def _canonical_triangle_system(triangles: Iterable[Triangle], heavies: Sequence[int], v: int) -> tuple:
    """Canonical form of a triangle configuration under permutations of the
    heavy vertices with light labels normalized by first appearance."""
    best = None
    tris = [tuple(sorted(t)) for t in triangles]
    lights = sorted({x for t in tris for x in t} - set(heavies))
    for perm in permutations(heavies):
        mapping = {h: perm[i] for i, h in enumerate(heavies)}
        relabeled = []
        for t in tris:
            relabeled.append(tuple(sorted(mapping.get(x, x + 10 * v) for x in t)))
        relabeled.sort()
        # normalize lights in order of first appearance
        norm: dict[int, int] = {}
        out = []
        for t in relabeled:
            nt = []
            for x in t:
                if x > v:  # a light placeholder
                    if x not in norm:
                        norm[x] = v + len(norm) + 1
                    nt.append(norm[x])
                else:
                    nt.append(x)
            out.append(tuple(sorted(nt)))
        key = tuple(sorted(out))
        if best is None or key < best:
            best = key
    return best


# ---------------------------------------------------------------------------
# K18.
# ---------------------------------------------------------------------------


def k18_alpha7_configuration() -> TriangleConfiguration:
    """alpha=7: four triangles through one vertex plus three disjoint ones."""
    triangles = [(1, 2, 3), (1, 4, 5), (1, 6, 7), (1, 8, 9),
                 (10, 11, 12), (13, 14, 15), (16, 17, 18)]
    cfg = TriangleConfiguration(18, triangles, "K18 alpha=7")
    cfg.validate(heavy_alpha=4, heavy_count=1)
    return cfg


def k18_alpha9_configuration() -> TriangleConfiguration:
    """alpha=9: three heavy vertices pairwise sharing a triangle, each
    completed by two private triangles."""
    triangles = [(1, 2, 4), (1, 3, 5), (2, 3, 6),
                 (1, 7, 8), (1, 9, 10), (2, 11, 12), (2, 13, 14),
                 (3, 15, 16), (3, 17, 18)]
    cfg = TriangleConfiguration(18, triangles, "K18 alpha=9")
    cfg.validate(heavy_alpha=4, heavy_count=3)
    return cfg


def k18_alpha11_configurations() -> list[TriangleConfiguration]:
    """alpha=11: the forced pattern with an internal heavy triangle, plus the
    intersection patterns with no internal triangle (t >= 9 heavy pairs)."""
    main = TriangleConfiguration(
        18,
        [(1, 2, 3),
         (1, 4, 6), (2, 4, 7), (3, 4, 8), (1, 5, 9), (2, 5, 10), (3, 5, 11),
         (4, 5, 12),
         (1, 13, 14), (2, 15, 16), (3, 17, 18)],
        "K18 alpha=11 internal-triangle",
    )
    main.validate(heavy_alpha=4, heavy_count=5)
    out = [main]

    # No heavy triple forms a triangle: with t heavy pairs sharing a triangle,
    # counting forces (t, singles, outer) in {(9, 2, 0), (10, 0, 1)}.
    heavies = (1, 2, 3, 4, 5)
    seen: set[tuple] = set()
    candidates: list[TriangleConfiguration] = []
    all_heavy_pairs = list(combinations(heavies, 2))
    for t in (9, 10):
        for chosen in combinations(all_heavy_pairs, t):
            deg = {h: 0 for h in heavies}
            for a, b in chosen:
                deg[a] += 1
                deg[b] += 1
            if any(d > 4 for d in deg.values()):
                continue
            singles_needed = {h: 4 - deg[h] for h in heavies}
            if sum(singles_needed.values()) != 2 * (10 - t) - (2 if t == 9 else 0):
                # t=9: two singles; t=10: none (checked below anyway)
                pass
            if t == 9 and sorted(singles_needed.values()) != [0, 0, 0, 1, 1]:
                continue
            if t == 10 and any(singles_needed.values()):
                continue
            light = 6
            triangles = []
            for a, b in sorted(chosen):
                triangles.append((a, b, light))
                light += 1
            for h in sorted(h for h, s in singles_needed.items() if s):
                triangles.append(tuple(sorted((h, light, light + 1))))
                light += 2
            if t == 10:
                triangles.append((light, light + 1, light + 2))
                light += 3
            if light - 1 != 18:
                continue
            cfg = TriangleConfiguration(18, triangles, f"K18 alpha=11 t={t}")
            cfg.validate(heavy_alpha=4, heavy_count=5)
            key = _canonical_triangle_system(triangles, heavies, 18)
            if key not in seen:
                seen.add(key)
                candidates.append(cfg)
    return out + candidates


def k18_alpha13_t_vectors() -> list[tuple[int, int, int, int]]:
    """Solutions (t0,t1,t2,t3) of the alpha=13 incidence equations with the
    internal-edge bounds: triangles cover at most 21 - 2 internal edges."""
    out = []
    for t3 in range(8):
        for t2 in range(22):
            t1 = 28 - 2 * t2 - 3 * t3
            t0 = 13 - t1 - t2 - t3
            if t1 < 0 or t0 < 0:
                continue
            if 3 * t0 + 2 * t1 + t2 != 11:
                continue
            covered = 3 * t3 + t2
            if covered > 21:
                continue  # internal triangle edges are distinct
            if 21 - covered < 2:
                continue  # the K4s must cover at least 2 internal edges
            out.append((t0, t1, t2, t3))
    return sorted(out)


def _triangle_decompositions(g: SmallGraph, count_budget: int = 500000):
    """All decompositions of g into edge-disjoint triangles (DLX exhaustive)."""
    edges = sorted(g.edges)
    edge_set = set(edges)
    rows = []
    for t in combinations(range(1, g.n + 1), 3):
        if all(p in edge_set for p in combinations(t, 2)):
            rows.append(t)
    inst = dlx.blocks_cover_instance(g.n, rows, edges=edges)
    solver = dlx._Dlx(inst)
    sols = []
    for sol in solver.search("count", count_budget, None):
        sols.append([inst.rows[ri] for ri in sol])
    return sols


def k18_alpha13_configurations() -> list[TriangleConfiguration]:
    """Exhaustive completion search per t-vector: internal triangles from the
    even-graph complement screen, then the uncovered-internal-edge choice,
    with isomorphism dedup."""
    heavies = tuple(range(1, 8))
    internal_pairs = list(combinations(heavies, 2))
    configs: list[TriangleConfiguration] = []
    seen: set[tuple] = set()
    for t0, t1, t2, t3 in k18_alpha13_t_vectors():
        m_even = 21 - 3 * t3  # size of the even complement graph
        placements: list[list[Triangle]] = []
        placement_keys: set[tuple] = set()
        for h in generate_even_graphs(7, m_even):
            comp = [p for p in internal_pairs if p not in h.edges]
            comp_graph = graph_from_edges(7, comp)
            for dec in _triangle_decompositions(comp_graph):
                if len(dec) != t3:
                    continue
                key = _canonical_triangle_system(dec, heavies, 18)
                if key not in placement_keys:
                    placement_keys.add(key)
                    placements.append([tuple(t) for t in dec])
        for internal in placements:
            tri_deg = {h: 0 for h in heavies}
            used_pairs = set()
            for t in internal:
                for p in combinations(t, 2):
                    used_pairs.add(p)
                for x in t:
                    tri_deg[x] += 1
            h_edges = [p for p in internal_pairs if p not in used_pairs]
            # choose the edges left to the K4s (the rest get t2 triangles)
            leftover = len(h_edges) - t2
            for k4_edges in combinations(h_edges, leftover):
                t2_edges = [p for p in h_edges if p not in set(k4_edges)]
                deg2 = {h: 0 for h in heavies}
                for a, b in t2_edges:
                    deg2[a] += 1
                    deg2[b] += 1
                t1_need = {h: 4 - tri_deg[h] - deg2[h] for h in heavies}
                if any(x < 0 for x in t1_need.values()):
                    continue
                if sum(t1_need.values()) != t1:
                    continue
                light = 8
                triangles = [tuple(t) for t in internal]
                for a, b in sorted(t2_edges):
                    triangles.append(tuple(sorted((a, b, light))))
                    light += 1
                for h in sorted(heavies):
                    for _ in range(t1_need[h]):
                        triangles.append(tuple(sorted((h, light, light + 1))))
                        light += 2
                for _ in range(t0):
                    triangles.append((light, light + 1, light + 2))
                    light += 3
                if light - 1 != 18:
                    continue
                cfg = TriangleConfiguration(18, triangles, f"K18 alpha=13 t={t0, t1, t2, t3}")
                try:
                    cfg.validate(heavy_alpha=4, heavy_count=7)
                except ValueError:
                    continue
                key = _canonical_triangle_system(triangles, heavies, 18)
                if key not in seen:
                    seen.add(key)
                    configs.append(cfg)
    return configs


def k18_case(alpha: int) -> CaseReport:
    if alpha == 7:
        configs = [k18_alpha7_configuration()]
    elif alpha == 9:
        configs = [k18_alpha9_configuration()]
    elif alpha == 11:
        configs = k18_alpha11_configurations()
    elif alpha == 13:
        configs = k18_alpha13_configurations()
    else:
        raise ValueError("alpha must be one of 7, 9, 11, 13")
    report = CaseReport(case=f"K18 alpha={alpha}")
    if alpha == 13:
        report.notes.append(f"t-vectors: {k18_alpha13_t_vectors()}")
    for i, cfg in enumerate(configs, 1):
        res = residual_k4_test(18, cfg.triangles)
        report.configurations.append(
            ConfigVerdict(f"{cfg.provenance}#{i}", cfg.triangles, res.status, res.stats.nodes)
        )
    return report


# ---------------------------------------------------------------------------
# K19.
# ---------------------------------------------------------------------------


def k19_case(alpha: int, graphs: list[SmallGraph] | None = None) -> CaseReport:
    if alpha == 7:
        report = CaseReport(case="K19 alpha=7")
        report.notes.append(
            "excluded by the Rees-Stinson existence criterion for PBD(19,{4,7*},1); "
            "recorded as a literature fact, not recomputed"
        )
        return report
    if alpha not in (9, 11):
        raise ValueError("alpha must be one of 7, 9, 11")
    report = CaseReport(case=f"K19 alpha={alpha}")
    if alpha == 9:
        complements = generate_regular_graphs(9, 2)
        report.notes.append(f"2-regular complement types: {len(complements)}")
        supports = [complement_support(c) for c in complements]
    else:
        supports = graphs if graphs is not None else load_regular_11_6()
        report.notes.append(f"6-regular order-11 types: {len(supports)}")
    for i, h in enumerate(supports, 1):
        decompositions = _triangle_decompositions(h)
        expected = len(h.edges) // 3
        decomposable = any(len(d) == expected for d in decompositions)
        if not decomposable:
            report.configurations.append(
                ConfigVerdict(f"type {i} (no triangle decomposition)", sorted(h.edges), "unsat", 0)
            )
            continue
        res = _k19_residual_test(h)
        report.configurations.append(
            ConfigVerdict(f"type {i}", sorted(h.edges), res.status, res.stats.nodes)
        )
    return report


def complement_support(c: SmallGraph) -> SmallGraph:
    """The 6-regular triangle support K9 - C for a 2-regular complement C."""
    edges = frozenset(p for p in combinations(range(1, 10), 2) if p not in c.edges)
    return SmallGraph(9, edges)


def _k19_residual_test(h: SmallGraph) -> dlx.CoverResult:
    """K4-decomposability of K19 minus the support edges (support on 1..n)."""
    used = set(h.edges)
    residual_edges = [p for p in all_pairs(19) if p not in used]
    edge_set = set(residual_edges)
    rows = []
    for quad in combinations(range(1, 20), 4):
        if all(p in edge_set for p in combinations(quad, 2)):
            rows.append(quad)
    inst = dlx.blocks_cover_instance(19, rows, edges=residual_edges)
    return dlx.solve_cover(inst, "prove-unsat")


# ---------------------------------------------------------------------------
# graph6.
# ---------------------------------------------------------------------------


class Graph6Error(ValueError):
    pass


def parse_graph6(line: str) -> SmallGraph:
    """Decode one graph6 line (n <= 62)."""
    line = line.strip()
    if not line:
        raise Graph6Error("empty graph6 line")
    data = [ord(ch) - 63 for ch in line]
    if any(x < 0 or x > 63 for x in data):
        raise Graph6Error(f"invalid graph6 character in {line!r}")
    n = data[0]
    if n > 62:
        raise Graph6Error("orders above 62 are not supported")
    need = (n * (n - 1) // 2 + 5) // 6
    bits_data = data[1:]
    if len(bits_data) != need:
        raise Graph6Error(f"expected {need} payload characters, got {len(bits_data)}")
    bits = []
    for x in bits_data:
        for k in range(5, -1, -1):
            bits.append((x >> k) & 1)
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.append((i + 1, j + 1))
            idx += 1
    return graph_from_edges(n, edges)


def encode_graph6(g: SmallGraph) -> str:
    if g.n > 62:
        raise Graph6Error("orders above 62 are not supported")
    bits = []
    edge_set = g.edges
    for j in range(1, g.n):
        for i in range(j):
            bits.append(1 if (i + 1, j + 1) in edge_set else 0)
    while len(bits) % 6:
        bits.append(0)
    chars = [chr(g.n + 63)]
    for i in range(0, len(bits), 6):
        x = 0
        for b in bits[i : i + 6]:
            x = (x << 1) | b
        chars.append(chr(x + 63))
    return "".join(chars)


def load_regular_11_6(path: Path | None = None) -> list[SmallGraph]:
    """The 266 six-regular order-11 graphs from the shipped graph6 file."""
    if path is None:
        text = resources.files("cliquecover.data").joinpath(REGULAR_11_6_FILE).read_text()
    else:
        text = Path(path).read_text()
    digest = hashlib.sha256(text.encode()).hexdigest()
    graphs = [parse_graph6(line) for line in text.splitlines() if line.strip()]
    if len(graphs) != REGULAR_11_6_COUNT:
        raise Graph6Error(
            f"expected {REGULAR_11_6_COUNT} graphs in {REGULAR_11_6_FILE}, found {len(graphs)}"
        )
    for g in graphs:
        if g.degree_sequence() != (6,) * 11:
            raise Graph6Error("non-6-regular graph in the order-11 list")
    if REGULAR_11_6_SHA256 != "__REGENERATED__" and digest != REGULAR_11_6_SHA256:
        raise Graph6Error(f"graph6 file checksum mismatch: {digest}")
    return graphs
