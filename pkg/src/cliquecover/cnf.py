"""CNF construction: cardinality encodings, branch instances, and DIMACS I/O.

Cardinality constraints use the sequential-counter encoding throughout
(at-most-one is its k=1 specialization with n-1 auxiliaries and 3n-4
clauses).  Variable numbering is reproducible: original atoms first in
lexicographic atom order, then auxiliaries in build order.

Clauses are stored in a single flat integer array (zero-terminated), which
keeps multi-million-clause instances (the monolithic benchmark encoding)
within desk-scale memory.
"""

from __future__ import annotations

import json
from array import array
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .distributions import GlobalDistribution
from .geometry import Type0Geometry, labelled_vertices
from .signatures import LocalSignature


class CnfFormula:
    """A CNF with a bidirectional atom <-> variable map for the originals."""

    def __init__(self):
        self.num_vars = 0
        self.num_clauses = 0
        self._flat = array("i")
        self.atom_to_var: dict = {}
        self.var_to_atom: dict = {}
        self.comments: list[str] = []
        self.trivially_false_reason: str | None = None

    # -- variables ----------------------------------------------------------

    def new_var(self, atom=None) -> int:
        self.num_vars += 1
        v = self.num_vars
        if atom is not None:
            if atom in self.atom_to_var:
                raise ValueError(f"atom registered twice: {atom!r}")
            self.atom_to_var[atom] = v
            self.var_to_atom[v] = atom
        return v

    def var(self, atom) -> int:
        return self.atom_to_var[atom]

    # -- clauses -------------------------------------------------------------

    def add_clause(self, lits: Sequence[int]) -> None:
        for lit in lits:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"literal {lit} out of range")
            self._flat.append(lit)
        self._flat.append(0)
        self.num_clauses += 1

    def iter_clauses(self) -> Iterator[list[int]]:
        clause: list[int] = []
        for lit in self._flat:
            if lit == 0:
                yield clause
                clause = []
            else:
                clause.append(lit)

    def clause_list(self) -> list[list[int]]:
        return list(self.iter_clauses())

    # -- cardinality encodings (sequential counter) --------------------------

    def at_most_k(self, lits: Sequence[int], k: int) -> None:
        n = len(lits)
        if k < 0:
            self.add_clause([lits[0]]) if lits else self._mark_false("at_most_k(-1) on empty")
            self.add_clause([-lits[0]]) if lits else None
            return
        if k >= n:
            return
        if k == 0:
            for lit in lits:
                self.add_clause([-lit])
            return
        # registers s[i][j]: among lits[0..i] at least j+1 are true (0-based)
        s = [[self.new_var() for _ in range(min(i + 1, k))] for i in range(n - 1)]
        self.add_clause([-lits[0], s[0][0]])
        for i in range(1, n - 1):
            self.add_clause([-lits[i], s[i][0]])
            self.add_clause([-s[i - 1][0], s[i][0]])
            for j in range(1, min(i + 1, k)):
                self.add_clause([-lits[i], -s[i - 1][j - 1], s[i][j]])
                if j < len(s[i - 1]):
                    self.add_clause([-s[i - 1][j], s[i][j]])
            if len(s[i - 1]) == k:
                self.add_clause([-lits[i], -s[i - 1][k - 1]])
        self.add_clause([-lits[n - 1], -s[n - 2][k - 1]])

    def _both_sided_counter(self, lits: Sequence[int], kmax: int) -> list[int]:
        """Registers r[j] ("at least j+1 of lits are true") for the full
        prefix, with implications in both directions, so each register is
        functionally determined by the lits."""
        prev: list[int] = []
        for i, x in enumerate(lits):
            width = min(i + 1, kmax)
            cur = [self.new_var() for _ in range(width)]
            self.add_clause([-x, cur[0]])
            if prev:
                self.add_clause([-prev[0], cur[0]])
                self.add_clause([-cur[0], x, prev[0]])
            else:
                self.add_clause([-cur[0], x])
            for j in range(1, width):
                self.add_clause([-x, -prev[j - 1], cur[j]])
                if j < len(prev):
                    self.add_clause([-prev[j], cur[j]])
                    self.add_clause([-cur[j], prev[j], x])
                    self.add_clause([-cur[j], prev[j], prev[j - 1]])
                else:
                    self.add_clause([-cur[j], x])
                    self.add_clause([-cur[j], prev[j - 1]])
            prev = cur
        return prev

    def at_least_k(self, lits: Sequence[int], k: int) -> None:
        n = len(lits)
        if k <= 0:
            return
        if k > n:
            self._mark_false(f"at_least_{k} of {n}")
            return
        if k == n:
            for lit in lits:
                self.add_clause([lit])
            return
        if k == 1:
            self.add_clause(list(lits))
            return
        if n - k < k:
            self.at_most_k([-lit for lit in lits], n - k)
            return
        regs = self._both_sided_counter(lits, k)
        self.add_clause([regs[k - 1]])

    def exactly_k(self, lits: Sequence[int], k: int) -> None:
        n = len(lits)
        if k < 0 or k > n:
            self._mark_false(f"exactly_{k} of {n}")
            return
        if k == 0:
            for lit in lits:
                self.add_clause([-lit])
            return
        if k == n:
            for lit in lits:
                self.add_clause([lit])
            return
        if n - k < k:
            self.exactly_k([-lit for lit in lits], n - k)
            return
        if k == 1:
            self.add_clause(list(lits))
            self.at_most_k(lits, 1)
            return
        regs = self._both_sided_counter(lits, k + 1)
        self.add_clause([regs[k - 1]])
        if k < len(regs):
            self.add_clause([-regs[k]])

    def exactly_one(self, lits: Sequence[int]) -> None:
        self.exactly_k(lits, 1)

    def _mark_false(self, reason: str) -> None:
        self.trivially_false_reason = reason
        if self.num_vars == 0:
            self.new_var()
        self.add_clause([1])
        self.add_clause([-1])


# ---------------------------------------------------------------------------
# DIMACS
# ---------------------------------------------------------------------------


def write_dimacs(f: CnfFormula, destination) -> None:
    """Write `p cnf V C` plus zero-terminated clauses; comments as `c ` lines."""

    def _write(handle):
        for comment in f.comments:
            handle.write(f"c {comment}\n")
        handle.write(f"p cnf {f.num_vars} {f.num_clauses}\n")
        buf = []
        for clause in f.iter_clauses():
            buf.append(" ".join(str(l) for l in clause) + " 0\n")
            if len(buf) >= 10000:
                handle.write("".join(buf))
                buf.clear()
        handle.write("".join(buf))

    if hasattr(destination, "write"):
        _write(destination)
    else:
        with open(destination, "w") as handle:
            _write(handle)


class DimacsError(ValueError):
    pass


def read_dimacs(source) -> CnfFormula:
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source) as handle:
            text = handle.read()
    f = CnfFormula()
    header = None
    pending: list[int] = []
    declared_clauses = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None or len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header")
            header = (int(parts[2]), int(parts[3]))
            f.num_vars = header[0]
            declared_clauses = header[1]
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                f.add_clause(pending)
                pending = []
            else:
                if abs(lit) > f.num_vars:
                    raise DimacsError(f"line {lineno}: literal {lit} exceeds {f.num_vars} vars")
                pending.append(lit)
    if pending:
        raise DimacsError("unterminated final clause")
    if header is None:
        raise DimacsError("missing header")
    if f.num_clauses != declared_clauses:
        raise DimacsError(f"header declares {declared_clauses} clauses, found {f.num_clauses}")
    return f


def write_var_map(f: CnfFormula, destination) -> None:
    data = {str(v): repr(atom) for v, atom in sorted(f.var_to_atom.items())}
    text = json.dumps(data, indent=0)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w") as handle:
            handle.write(text)


# ---------------------------------------------------------------------------
# Signature-feasibility instances.
#
# Variables x[(v, i)] say: outside vertex v carries signature index i.  The
# candidate set of v contains the signatures whose n0 equals v's type-0
# incidence count.  Constraints (numbering follows the pipeline stage):
#   1. exactly one signature per constrained vertex;
#   2. per-profile cardinality equals the distribution multiplicity;
#   3. each chosen type-3 triple is selected by exactly 2 vertices;
#   4. each type-2 pair is selected by at most 3 vertices;
#   5. two vertices sharing a type-0 block must not select a common pair or
#      triple (their quintuples would share an edge).
# Vertices with identical candidate sets and identical type-0 incidences are
# interchangeable; optional lexicographic chains break that symmetry without
# affecting satisfiability.
# ---------------------------------------------------------------------------


@dataclass
class SignatureInstance:
    formula: CnfFormula
    vertex_candidates: dict[int, list[int]]  # vertex label -> signature indices
    signatures: list[LocalSignature]
    distribution: GlobalDistribution
    witness: Type0Geometry
    theta: dict[int, frozenset[int]]  # vertex label -> type-0 block ids (known part)

    def decode(self, true_vars: set[int]) -> dict[int, int]:
        """Map each constrained vertex to its selected signature index."""
        chosen: dict[int, int] = {}
        for var in true_vars:
            atom = self.formula.var_to_atom.get(var)
            if not (isinstance(atom, tuple) and len(atom) == 2 and isinstance(atom[0], int)):
                continue  # indicator or auxiliary variable
            v, i = atom
            if v in chosen:
                raise ValueError(f"vertex {v} selects two signatures")
            chosen[v] = i
        return chosen


def build_signature_cnf(
    signatures: list[LocalSignature],
    distribution: GlobalDistribution,
    witness: Type0Geometry,
    symmetry_breaking: bool = True,
    theta: dict[int, frozenset[int]] | None = None,
    conflict_level: str = "object",
) -> SignatureInstance:
    labels = labelled_vertices(distribution)
    if theta is None:
        theta = witness.theta_map()
    f = CnfFormula()

    by_n0: dict[int, list[int]] = {}
    for i, s in enumerate(signatures):
        by_n0.setdefault(s.profile[0], []).append(i)

    candidates: dict[int, list[int]] = {}
    for v in sorted(labels):
        p0 = labels[v][0]
        if p0 == 0:
            continue
        cand = by_n0.get(p0, [])
        candidates[v] = cand
        if not cand:
            f.trivially_false_reason = f"vertex {v} (n0={p0}) has no candidate signature"

    inst = SignatureInstance(f, candidates, signatures, distribution, witness, theta)
    if f.trivially_false_reason:
        f._mark_false(f.trivially_false_reason)
        return inst

    for v in sorted(candidates):
        for i in candidates[v]:
            f.new_var((v, i))

    # (1) exactly one signature per vertex
    for v in sorted(candidates):
        f.exactly_one([f.var((v, i)) for i in candidates[v]])

    # Indicator variables keep the cardinality scopes at vertex granularity:
    # y[(v, p)] <-> v's signature has profile p; z[(v, obj)] <-> v's signature
    # selects the pair/triple obj.  Exact because of (1).
    profiles_pos = [p for p in distribution.profiles if p[0] > 0 and distribution.multiplicity(p) >= 0]
    objects = sorted({o for s in signatures for o in s.objects}, key=lambda o: (len(o), o))
    y: dict[tuple[int, Profile], int] = {}
    z: dict[tuple[int, tuple], int] = {}
    for v in sorted(candidates):
        sig_by_profile: dict[Profile, list[int]] = {}
        sig_by_obj: dict[tuple, list[int]] = {}
        for i in candidates[v]:
            sig_by_profile.setdefault(signatures[i].profile, []).append(i)
            for o in signatures[i].objects:
                sig_by_obj.setdefault(tuple(o), []).append(i)
        for p, idxs in sorted(sig_by_profile.items()):
            yv = f.new_var(("y", v, p))
            y[(v, p)] = yv
            for i in idxs:
                f.add_clause([-f.var((v, i)), yv])
            f.add_clause([-yv] + [f.var((v, i)) for i in idxs])
        for o, idxs in sorted(sig_by_obj.items()):
            zv = f.new_var(("z", v, o))
            z[(v, o)] = zv
            for i in idxs:
                f.add_clause([-f.var((v, i)), zv])
            f.add_clause([-zv] + [f.var((v, i)) for i in idxs])

    # (2) profile multiplicities over the constrained vertices
    for profile, mult in zip(distribution.profiles, distribution.counts):
        if profile[0] == 0:
            continue
        lits = [y[(v, profile)] for v in sorted(candidates) if (v, profile) in y]
        f.exactly_k(lits, mult)

    # (3) each chosen type-3 triple selected by exactly 2 vertices
    # (4) each type-2 pair selected by at most 3 vertices.  Pair counters are
    # two-sided so their registers are exact; their unary digits feed an
    # implied global total (the profile census fixes sum_v n2(v)), which lets
    # the solver see counting infeasibilities directly.
    pair_count_digits: list[int] = []
    for obj in objects:
        lits = [z[(v, tuple(obj))] for v in sorted(candidates) if (v, tuple(obj)) in z]
        if len(obj) == 3:
            f.exactly_k(lits, 2)
        else:
            if not lits:
                continue
            regs = f._both_sided_counter(lits, min(4, len(lits)))
            if len(regs) >= 4:
                f.add_clause([-regs[3]])
            pair_count_digits.extend(regs[:3])
    total_n2 = sum(
        mult * profile[2]
        for profile, mult in zip(distribution.profiles, distribution.counts)
        if profile[0] > 0
    )
    if pair_count_digits:
        f.exactly_k(pair_count_digits, total_n2)

    # (5) type-0 compatibility: vertices sharing a type-0 block must not
    # select a common pair or triple ("object"); the "support" variant also
    # forbids selections meeting in a K9 vertex.
    verts = sorted(candidates)
    for vi in range(len(verts)):
        v = verts[vi]
        tv = theta.get(v)
        if not tv:
            continue
        for wi in range(vi + 1, len(verts)):
            w = verts[wi]
            tw = theta.get(w)
            if not tw or not (tv & tw):
                continue
            if conflict_level == "object":
                for o in objects:
                    key = tuple(o)
                    if (v, key) in z and (w, key) in z:
                        f.add_clause([-z[(v, key)], -z[(w, key)]])
            elif conflict_level == "support":
                for i in candidates[v]:
                    si = signatures[i].support
                    for j in candidates[w]:
                        if si & signatures[j].support:
                            f.add_clause([-f.var((v, i)), -f.var((w, j))])
            else:
                raise ValueError(conflict_level)

    if symmetry_breaking:
        _add_lex_chains(f, candidates, theta)
    return inst


def _add_lex_chains(f: CnfFormula, candidates: dict[int, list[int]], theta: dict) -> None:
    """Order interchangeable vertices by selected signature index."""
    groups: dict[tuple, list[int]] = {}
    for v in sorted(candidates):
        key = (tuple(candidates[v]), tuple(sorted(theta.get(v, ()))))
        groups.setdefault(key, []).append(v)
    for (cand, _), verts in sorted(groups.items()):
        if len(verts) < 2 or len(cand) < 2:
            continue
        m = len(cand)
        prefix: dict[int, list[int]] = {}
        for v in verts:
            pv = [f.new_var() for _ in range(m - 1)]
            prefix[v] = pv
            f.add_clause([-f.var((v, cand[0])), pv[0]])
            for j in range(1, m - 1):
                f.add_clause([-pv[j - 1], pv[j]])
                f.add_clause([-f.var((v, cand[j])), pv[j]])
        for v, w in zip(verts, verts[1:]):
            for j in range(1, m):
                # w takes cand[j] => v takes some cand[i], i <= j
                if j - 1 < m - 1:
                    f.add_clause([-f.var((w, cand[j])), prefix[v][j - 1]])


# ---------------------------------------------------------------------------
# Type-1 completion instances.
# ---------------------------------------------------------------------------


@dataclass
class Type1Instance:
    formula: CnfFormula | None
    uncovered: list[tuple[int, int]]
    candidates: list[tuple[int, ...]]
    zero_candidate_edges: list[tuple[int, int]]

    @property
    def immediate_unsat(self) -> bool:
        return bool(self.zero_candidate_edges)


def build_type1_cnf(v: int, fixed_blocks: list[tuple[int, ...]], k9: Sequence[int] = range(1, 10)) -> Type1Instance:
    """Exactly-one cover of the residual uncovered edges by type-1 blocks
    (one K9 vertex plus four outside vertices, all ten pairs uncovered)."""
    from .core import edge_multiset, all_pairs

    ms = edge_multiset(v, fixed_blocks)
    over = [p for p, c in ms.mult.items() if c > 1]
    if over:
        raise ValueError(f"fixed blocks are not edge-disjoint: {sorted(over)[:5]}")
    covered = set(ms.mult)
    uncovered = [p for p in all_pairs(v) if p not in covered]
    uncovered_set = set(uncovered)
    k9set = set(k9)
    outside = [x for x in range(1, v + 1) if x not in k9set]

    # adjacency restricted to uncovered outside-outside edges
    adj: dict[int, set[int]] = {x: set() for x in outside}
    for a, b in uncovered:
        if a in adj and b in adj:
            adj[a].add(b)
            adj[b].add(a)

    candidates: list[tuple[int, ...]] = []
    for quad in _uncovered_k4s(outside, adj):
        for u in sorted(k9set):
            if all(tuple(sorted((u, x))) in uncovered_set for x in quad):
                candidates.append(tuple(sorted((u,) + quad)))
    candidates.sort()

    edge_to_cands: dict[tuple[int, int], list[int]] = {e: [] for e in uncovered}
    for idx, block in enumerate(candidates):
        for pr in combinations(block, 2):
            edge_to_cands[pr].append(idx)

    zero = [e for e in uncovered if not edge_to_cands[e]]
    if zero:
        return Type1Instance(None, uncovered, candidates, zero)

    f = CnfFormula()
    for idx, block in enumerate(candidates):
        f.new_var(("t1", block))
    for e in uncovered:
        f.exactly_one([f.var(("t1", candidates[i])) for i in edge_to_cands[e]])
    return Type1Instance(f, uncovered, candidates, [])


def _uncovered_k4s(outside: list[int], adj: dict[int, set[int]]) -> Iterator[tuple[int, ...]]:
    order = sorted(outside)
    for i, a in enumerate(order):
        na = adj[a]
        for b in sorted(na):
            if b <= a:
                continue
            nab = na & adj[b]
            for c in sorted(nab):
                if c <= b:
                    continue
                nabc = nab & adj[c]
                for d in sorted(nabc):
                    if d > c:
                        yield (a, b, c, d)


# ---------------------------------------------------------------------------
# Monolithic direct encoding for the (6,0,51) case.
# ---------------------------------------------------------------------------


def build_monolithic_cnf(v: int = 33, alpha: int = 6, gamma: int = 51, stats_only: bool = False):
    """One variable per candidate K5 plus `alpha` labelled triangle slots.

    Exact edge coverage is an exactly-one constraint per edge over the K5
    variables and the slot-triangle incidences; each slot selects exactly one
    triangle; no triangle repeats across slots.  With the sequential
    at-most-one encoding this reproduces the benchmark header sizes.

    With stats_only=True, only (num_vars, num_clauses) are computed.
    """
    vertices = range(1, v + 1)
    triangles = list(combinations(vertices, 3))
    quints = list(combinations(vertices, 5)) if gamma else []
    tri_index = {t: i for i, t in enumerate(triangles)}

    n_tri = len(triangles)
    n_q = len(quints)

    if stats_only:
        num_edge = v * (v - 1) // 2
        per_edge_lits = (len(list(combinations(range(v - 2), 3))) if gamma else 0) + alpha * (v - 2)
        nvars = n_q + alpha * n_tri
        ncls = 0
        nvars += num_edge * (per_edge_lits - 1)  # AMO aux per edge
        ncls += num_edge * (3 * per_edge_lits - 4 + 1)
        nvars += alpha * (n_tri - 1)  # per-slot exactly-one aux
        ncls += alpha * (3 * n_tri - 4 + 1)
        ncls += n_tri * (alpha * (alpha - 1) // 2)  # repeat exclusion
        return nvars, ncls

    f = CnfFormula()
    for q in quints:
        f.new_var(("K5", q))
    for slot in range(alpha):
        for t in triangles:
            f.new_var(("slot", slot, t))

    edge_lits: dict[tuple[int, int], list[int]] = {e: [] for e in combinations(vertices, 2)}
    for q in quints:
        var = f.var(("K5", q))
        for e in combinations(q, 2):
            edge_lits[e].append(var)
    for slot in range(alpha):
        for t in triangles:
            var = f.var(("slot", slot, t))
            for e in combinations(t, 2):
                edge_lits[e].append(var)

    for e in sorted(edge_lits):
        f.exactly_one(edge_lits[e])
    for slot in range(alpha):
        f.exactly_one([f.var(("slot", slot, t)) for t in triangles])
    for t in triangles:
        for s1, s2 in combinations(range(alpha), 2):
            f.add_clause([-f.var(("slot", s1, t)), -f.var(("slot", s2, t))])
    return f
