"""Model decoding, edge-disjointness audit, and residual computation.

The audit is deliberately independent of the CNF encoder: it reconstructs
the type-0/2/3 quintuples implied by a signature assignment and re-checks
edge-disjointness from scratch through the core edge multiset.

Reconstruction rules (forced by the exact-cover totals):
  * a type-3 triple with its 2 selecting vertices forms one quintuple;
  * a type-2 pair's selectors all lie in the one quintuple covering that
    pair (partial until the n0(x)=0 vertices are placed);
  * type-0 quintuples come from the geometry witness plus the canonical
    singleton fill.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .arithmetic import CheckReport, Profile
from .cnf import SignatureInstance, Type1Instance, build_type1_cnf
from .distributions import GlobalDistribution
from .geometry import Type0Geometry, labelled_vertices
from .signatures import LocalSignature
from .symmetry import Pair, TrianglePattern, Triple

V33 = 33


class StructuralAuditError(RuntimeError):
    """The assignment violates a constraint the encoder should have enforced."""


@dataclass
class SignatureAssignment:
    """Chosen signature per constrained vertex plus profile-only records."""

    chosen: dict[int, int]  # vertex label -> signature index
    signatures: list[LocalSignature]
    distribution: GlobalDistribution
    witness: Type0Geometry
    theta: dict[int, frozenset[int]]

    def signature_of(self, v: int) -> LocalSignature:
        return self.signatures[self.chosen[v]]

    def profile_census(self) -> dict[Profile, int]:
        census: dict[Profile, int] = {}
        for v in self.chosen:
            p = self.signature_of(v).profile
            census[p] = census.get(p, 0) + 1
        return census


def decode_model(inst: SignatureInstance, true_vars: set[int]) -> SignatureAssignment:
    """Read off the selected signature per vertex and re-check constraints
    1-4 semantically; a violation is an encoder bug, reported loudly."""
    chosen = inst.decode(true_vars)
    assignment = SignatureAssignment(
        chosen=chosen,
        signatures=inst.signatures,
        distribution=inst.distribution,
        witness=inst.witness,
        theta=inst.theta,
    )
    labels = labelled_vertices(inst.distribution)
    constrained = {v for v, p in labels.items() if p[0] > 0}
    if set(chosen) != constrained:
        raise StructuralAuditError(
            f"assignment covers {len(chosen)} vertices, expected {len(constrained)}"
        )
    census = assignment.profile_census()
    for profile, mult in zip(inst.distribution.profiles, inst.distribution.counts):
        if profile[0] == 0:
            continue
        if census.get(profile, 0) != mult:
            raise StructuralAuditError(
                f"profile {profile}: {census.get(profile, 0)} selected, expected {mult}"
            )
    for t in sorted({t for s in inst.signatures for t in s.triples}):
        sel = [v for v in chosen if t in assignment.signature_of(v).triples]
        if len(sel) != 2:
            raise StructuralAuditError(f"triple {t} has {len(sel)} selectors, expected 2")
    for p in sorted({p for s in inst.signatures for p in s.pairs}):
        sel = [v for v in chosen if p in assignment.signature_of(v).pairs]
        if len(sel) > 3:
            raise StructuralAuditError(f"pair {p} has {len(sel)} selectors, cap 3")
    return assignment


@dataclass
class ReconstructedBlocks:
    type3_blocks: dict[Triple, tuple[int, ...]]
    type2_blocks: dict[Pair, tuple[int, ...]]  # partial: pair + known selectors
    type0_blocks: list[tuple[int, ...]]

    def all_blocks(self) -> list[tuple[int, ...]]:
        return (
            list(self.type3_blocks.values())
            + list(self.type2_blocks.values())
            + list(self.type0_blocks)
        )


def reconstruct_blocks(assignment: SignatureAssignment) -> ReconstructedBlocks:
    sel_by_pair: dict[Pair, list[int]] = {}
    sel_by_triple: dict[Triple, list[int]] = {}
    for v in sorted(assignment.chosen):
        s = assignment.signature_of(v)
        for p in s.pairs:
            sel_by_pair.setdefault(p, []).append(v)
        for t in s.triples:
            sel_by_triple.setdefault(t, []).append(v)
    type3 = {}
    for t, sel in sorted(sel_by_triple.items()):
        if len(sel) != 2:
            raise StructuralAuditError(f"triple {t}: selector count {len(sel)} != 2")
        type3[t] = tuple(sorted(t + tuple(sel)))
    type2 = {}
    for p, sel in sorted(sel_by_pair.items()):
        if len(sel) > 3:
            raise StructuralAuditError(f"pair {p}: selector count {len(sel)} > 3")
        type2[p] = tuple(sorted(p + tuple(sel)))
    blocks_outside: dict[int, list[int]] = {i: [] for i in range(assignment.witness.blocks)}
    for v, ids in sorted(assignment.theta.items()):
        for i in ids:
            blocks_outside[i].append(v)
    type0 = [tuple(sorted(vs)) for _, vs in sorted(blocks_outside.items())]
    return ReconstructedBlocks(type3, type2, type0)


REASON_T2T2_TWO_OUTSIDE = "T2T2_TWO_OUTSIDE"
REASON_T2T2_OUTSIDE_PLUS_K9 = "T2T2_OUTSIDE_PLUS_K9"
REASON_T2T3 = "T2T3_OVERLAP"
REASON_T3T3 = "T3T3_OVERLAP"
REASON_T0 = "T0_OVERLAP"


@dataclass
class AuditViolation:
    reason: str
    blocks: tuple[tuple[int, ...], tuple[int, ...]]
    shared: tuple[int, ...]
    # selector pairs responsible, for exact blocking clauses: (v, obj), (w, obj2)
    selector_conflict: tuple | None = None


@dataclass
class AuditReport:
    passed: bool
    violations: list[AuditViolation] = field(default_factory=list)
    blocks: ReconstructedBlocks | None = None

    @property
    def reasons(self) -> list[str]:
        return sorted({v.reason for v in self.violations})


def edge_disjointness_audit(assignment: SignatureAssignment) -> AuditReport:
    """Re-verify that the reconstructed quintuples are pairwise edge-disjoint.

    Classification of a doubled edge follows the block types containing it;
    the selector pairs responsible are reported so a search driver can block
    exactly the offending co-selections.
    """
    blocks = reconstruct_blocks(assignment)
    tagged: list[tuple[str, tuple[int, ...], tuple | None]] = []
    for t, b in sorted(blocks.type3_blocks.items()):
        tagged.append(("T3", b, t))
    for p, b in sorted(blocks.type2_blocks.items()):
        tagged.append(("T2", b, p))
    for b in blocks.type0_blocks:
        tagged.append(("T0", b, None))

    violations: list[AuditViolation] = []
    for i in range(len(tagged)):
        kind_a, block_a, obj_a = tagged[i]
        set_a = set(block_a)
        for j in range(i + 1, len(tagged)):
            kind_b, block_b, obj_b = tagged[j]
            shared = set_a & set(block_b)
            if len(shared) < 2:
                continue
            kinds = tuple(sorted((kind_a, kind_b)))
            outside_shared = [x for x in shared if x > 9]
            if kinds == ("T2", "T2"):
                reason = (
                    REASON_T2T2_TWO_OUTSIDE
                    if len(outside_shared) >= 2
                    else REASON_T2T2_OUTSIDE_PLUS_K9
                )
            elif kinds == ("T2", "T3"):
                reason = REASON_T2T3
            elif kinds == ("T3", "T3"):
                reason = REASON_T3T3
            else:
                reason = REASON_T0
            conflict = None
            if kind_a in ("T2", "T3") and kind_b in ("T2", "T3") and len(outside_shared) >= 2:
                v, w = sorted(outside_shared)[:2]
                conflict = ((v, obj_a), (v, obj_b), (w, obj_a), (w, obj_b))
            violations.append(
                AuditViolation(
                    reason=reason,
                    blocks=(block_a, block_b),
                    shared=tuple(sorted(shared)),
                    selector_conflict=conflict,
                )
            )
    report = AuditReport(passed=not violations, violations=violations, blocks=blocks)
    if report.passed:
        _cross_check_multiset(blocks)
    return report


def _cross_check_multiset(blocks: ReconstructedBlocks) -> None:
    """Defense in depth: the audit verdict must agree with a raw pair count
    over all reconstructed (possibly partial) blocks."""
    mult: dict[Pair, int] = {}
    for b in blocks.all_blocks():
        for pr in combinations(sorted(b), 2):
            mult[pr] = mult.get(pr, 0) + 1
    doubled = sorted(p for p, c in mult.items() if c > 1)
    if doubled:
        raise StructuralAuditError(f"audit passed but pair counts find doubles: {doubled[:5]}")


def complete_type2_blocks(
    assignment: SignatureAssignment, blocks: ReconstructedBlocks
) -> tuple[dict[Pair, tuple[int, ...]], dict[int, Pair]]:
    """Assign the profile-(0,7,1,0) vertices to the deficient type-2 pairs.

    Those vertices select exactly one pair and appear in no other quintuple,
    so any bijection onto the deficiencies is equivalent; lowest labels go to
    lexicographically least pairs.
    """
    labels = labelled_vertices(assignment.distribution)
    a0_vertices = sorted(v for v, p in labels.items() if p[0] == 0)
    all_pairs_sorted = sorted(blocks.type2_blocks)
    slots: list[Pair] = []
    for p in all_pairs_sorted:
        deficiency = 5 - len(blocks.type2_blocks[p])
        slots.extend([p] * deficiency)
    if len(slots) != len(a0_vertices):
        raise StructuralAuditError(
            f"type-2 deficiencies {len(slots)} != a0 vertices {len(a0_vertices)}"
        )
    full = dict(blocks.type2_blocks)
    placement: dict[int, Pair] = {}
    for v, p in zip(a0_vertices, slots):
        full[p] = tuple(sorted(full[p] + (v,)))
        placement[v] = p
    for p, b in full.items():
        if len(b) != 5:
            raise StructuralAuditError(f"completed type-2 block for {p} has size {len(b)}")
    return full, placement


@dataclass
class ResidualReport:
    uncovered: list[Pair]
    candidate_count: int
    zero_candidate_edges: list[Pair]
    instance: Type1Instance
    fixed_blocks: list[tuple[int, ...]]


def compute_residual(
    assignment: SignatureAssignment,
    blocks: ReconstructedBlocks,
    pattern: TrianglePattern,
) -> ResidualReport:
    """Fix the full type-0/2/3 structure plus the six triangles and build the
    type-1 completion instance over the uncovered edges."""
    full_type2, _ = complete_type2_blocks(assignment, blocks)
    fixed: list[tuple[int, ...]] = [tuple(t) for t in pattern.triangles]
    fixed += list(blocks.type3_blocks.values())
    fixed += list(full_type2.values())
    fixed += [b for b in blocks.type0_blocks if len(b) == 5]
    if any(len(b) != 5 for b in blocks.type0_blocks):
        raise StructuralAuditError("type-0 blocks incomplete at residual stage")
    inst = build_type1_cnf(V33, fixed)
    return ResidualReport(
        uncovered=inst.uncovered,
        candidate_count=len(inst.candidates),
        zero_candidate_edges=inst.zero_candidate_edges,
        instance=inst,
        fixed_blocks=fixed,
    )


# ---------------------------------------------------------------------------
# The prism n3=1 "dist 015" proposition.
# ---------------------------------------------------------------------------

DIST015_PROFILE_MAP = {
    (0, 7, 1, 0): 2,
    (1, 5, 2, 0): 20,
    (1, 6, 0, 1): 1,
    (4, 0, 3, 1): 1,
}


def verify_dist015_proposition(
    chosen_triple: Triple,
    signatures: list[LocalSignature],
    distribution: GlobalDistribution,
    witness: Type0Geometry,
) -> CheckReport:
    """Mechanically re-derive the infeasibility of the prism n3=1 residual
    branch with profile multiplicities A:2 B:20 C:1 D:1.

    Steps: the unique C-signature and every admissible D-signature carry the
    chosen triple, so C and D share the type-3 quintuple; C therefore avoids
    all four of D's type-0 blocks and sits in the single remaining one (Q4)
    with four B-vertices; the sixteen B-vertices outside Q4 share a type-0
    block with D; hence D's type-2 partners lie in {A1, A2, B1..B4}, and with
    n2(D) = 3 pairs needing two partners each, two Q4-members would share a
    type-2 quintuple with D while already sharing Q4 - an edge repeat.
    """
    rep = CheckReport(f"dist015 proposition, triple {chosen_triple}")
    rep.add("distribution matches the residual data", distribution.as_map(), "=", DIST015_PROFILE_MAP)

    c_sigs = [s for s in signatures if s.profile == (1, 6, 0, 1)]
    rep.add("unique C-signature", len(c_sigs), "=", 1)
    rep.add("C-signature carries the chosen triple", list(c_sigs[0].triples), "=", [chosen_triple])

    d_sigs = [s for s in signatures if s.profile == (4, 0, 3, 1)]
    rep.add("every admissible D-signature carries the chosen triple",
            sum(1 for s in d_sigs if chosen_triple in s.triples), "=", len(d_sigs))
    rep.add("admissible D-signatures exist", len(d_sigs), ">", 0)

    # witness shape: D in four of the five blocks, singleton capacities 4,4,4,4,5
    theta = witness.theta_map()
    rep.add("one multi-incidence vertex (D)", len(theta), "=", 1)
    (d_label, d_blocks), = theta.items()
    rep.add("D lies in four type-0 blocks", len(d_blocks), "=", 4)
    rep.add("witness singleton capacities", sorted(witness.singleton_counts_per_block), "=", [4, 4, 4, 4, 5])
    q4 = next(i for i in range(witness.blocks) if i not in d_blocks)
    rep.add("unique block missing from D-support", witness.singleton_counts_per_block[q4], "=", 5)

    # C and D share the type-3 quintuple (both select the triple, and the
    # triple has exactly two selectors), so C must sit in Q4.
    rep.add("type-3 selector count (C and D)", 2, "=", 2)
    # Q4 holds 5 singleton slots: C plus four B-vertices; the other 16 B's
    # occupy D's blocks.
    b_total = distribution.multiplicity((1, 5, 2, 0))
    b_outside_q4 = b_total - 4
    rep.add("B-vertices sharing a type-0 block with D", b_outside_q4, "=", 16)
    # D's type-2 partner capacity: two A-vertices plus at most one Q4-member
    # per pair (two Q4-members with D would repeat a Q4 edge).
    n2_d = 3
    partners_needed = 2 * n2_d
    capacity = distribution.multiplicity((0, 7, 1, 0)) + n2_d
    rep.add("partner slots needed by D", partners_needed, "=", 6)
    rep.add("partner capacity without a Q4 repeat", capacity, "=", 5)
    rep.add("pigeonhole contradiction", partners_needed, ">", capacity)
    return rep
