"""SAT deciding: an internal CDCL solver plus a bridge to external solvers.

The internal engine is a complete conflict-driven solver with two-watched
literals, first-UIP learning, VSIDS-style activities with phase saving, and
Luby restarts.  It is deterministic for a fixed seed (seed 0 = no
randomization) and verifies every model in-line before reporting sat.

The external bridge follows the de-facto convention: write DIMACS, invoke
the solver binary, interpret exit status 10/20, parse `v ` model lines.
A missing or crashed external solver raises, and is never reported as unsat.
"""

from __future__ import annotations

import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from heapq import heappush, heappop
from pathlib import Path

from .cnf import CnfFormula, write_dimacs


@dataclass
class SolverConfig:
    engine: str = "internal"  # "internal" or "external"
    external_path: str | None = None
    timeout: float = 3600.0
    seed: int = 0

    def __post_init__(self):
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


@dataclass
class SatResult:
    status: str  # "sat" | "unsat" | "timeout"
    model: set[int] | None = None  # true variables
    stats: dict = field(default_factory=dict)


class ExternalSolverError(RuntimeError):
    """The external solver was missing, crashed, or produced garbage."""


def verify_model(f: CnfFormula, true_vars: set[int]) -> bool:
    for clause in f.iter_clauses():
        if not any((l > 0) == (abs(l) in true_vars) for l in clause):
            return False
    return True


# ---------------------------------------------------------------------------
# Internal CDCL engine.
# ---------------------------------------------------------------------------


def _luby(x: int) -> int:
    """Luby restart sequence, 0-indexed: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ..."""
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) // 2
        seq -= 1
        x = x % size
    return 1 << seq


class _Cdcl:
    def __init__(self, num_vars: int, seed: int):
        n = num_vars
        self.n = n
        self.assign = [0] * (2 * n + 1)  # index literal + n -> 1/-1/0
        self.level = [0] * (n + 1)
        self.reason: list = [None] * (n + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.clauses: list = []
        self.watches: list[list[int]] = [[] for _ in range(2 * n + 1)]
        self.activity = [0.0] * (n + 1)
        self.var_inc = 1.0
        self.phase = [False] * (n + 1)
        self.heap: list[tuple[float, int]] = []
        self.units: list[int] = []
        self.first_learned = -1
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self.seed = seed
        if seed:
            import random

            rng = random.Random(seed)
            for v in range(1, n + 1):
                self.activity[v] = rng.random() * 1e-6
                self.phase[v] = rng.random() < 0.5
        for v in range(1, n + 1):
            heappush(self.heap, (-self.activity[v], v))

    # -- assignment ----------------------------------------------------------

    def _value(self, lit: int) -> int:
        return self.assign[lit + self.n]

    def _assign(self, lit: int, reason) -> None:
        v = abs(lit)
        self.assign[lit + self.n] = 1
        self.assign[-lit + self.n] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _unassign_to(self, lvl: int) -> None:
        target = self.trail_lim[lvl]
        for i in range(len(self.trail) - 1, target - 1, -1):
            lit = self.trail[i]
            v = abs(lit)
            self.phase[v] = lit > 0
            self.assign[lit + self.n] = 0
            self.assign[-lit + self.n] = 0
            self.reason[v] = None
            heappush(self.heap, (-self.activity[v], v))
        del self.trail[target:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    # -- clauses -------------------------------------------------------------

    def add_clause(self, lits: list[int]) -> bool:
        """Add a problem clause; returns False on immediate inconsistency."""
        lits = sorted(set(lits), key=abs)
        if any(-l in set(lits) for l in lits):
            return True  # tautology
        if not lits:
            return False
        if len(lits) == 1:
            self.units.append(lits[0])
            return True
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.watches[lits[0] + self.n].append(ci)
        self.watches[lits[1] + self.n].append(ci)
        return True

    def _attach_learned(self, lits: list[int]) -> int:
        ci = len(self.clauses)
        self.clauses.append(lits)
        self.watches[lits[0] + self.n].append(ci)
        self.watches[lits[1] + self.n].append(ci)
        return ci

    # -- propagation ---------------------------------------------------------

    def propagate(self):
        """Returns a conflicting clause index or None."""
        assign = self.assign
        clauses = self.clauses
        n = self.n
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            neg = -p
            wl = self.watches[neg + n]
            i = 0
            j = 0
            wlen = len(wl)
            while i < wlen:
                ci = wl[i]
                i += 1
                c = clauses[ci]
                if c is None:
                    continue
                if c[0] == neg:
                    c[0] = c[1]
                    c[1] = neg
                first = c[0]
                if assign[first + n] == 1:
                    wl[j] = ci
                    j += 1
                    continue
                found = False
                for k in range(2, len(c)):
                    lk = c[k]
                    if assign[lk + n] >= 0:
                        c[1] = lk
                        c[k] = neg
                        self.watches[lk + n].append(ci)
                        found = True
                        break
                if found:
                    continue
                wl[j] = ci
                j += 1
                if assign[first + n] == -1:
                    # conflict: keep remaining watchers
                    while i < wlen:
                        wl[j] = wl[i]
                        j += 1
                        i += 1
                    del wl[j:]
                    return ci
                self._assign(first, ci)
            del wl[j:]
        return None

    # -- conflict analysis ----------------------------------------------------

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.n + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
        heappush(self.heap, (-self.activity[v], v))

    def analyze(self, confl: int) -> tuple[list[int], int]:
        learnt = []
        seen = [False] * (self.n + 1)
        counter = 0
        p = None
        idx = len(self.trail) - 1
        cur_level = len(self.trail_lim)
        reason_lits = self.clauses[confl]
        while True:
            for q in reason_lits:
                if q == p:
                    continue
                v = abs(q)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if self.level[v] == cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(self.trail[idx])]:
                idx -= 1
            lit = self.trail[idx]
            v = abs(lit)
            idx -= 1
            seen[v] = False
            counter -= 1
            if counter == 0:
                p = -lit
                break
            reason_lits = self.clauses[self.reason[v]]
            p = lit
        learnt.insert(0, p)
        if len(learnt) == 1:
            return learnt, 0
        # backjump to the second-highest level in the clause
        levels = sorted((self.level[abs(l)] for l in learnt[1:]), reverse=True)
        bj = levels[0]
        # put a literal of level bj in watch position 1
        for k in range(1, len(learnt)):
            if self.level[abs(learnt[k])] == bj:
                learnt[1], learnt[k] = learnt[k], learnt[1]
                break
        return learnt, bj

    # -- learned clause management --------------------------------------------

    def _reduce_db(self) -> None:
        if self.first_learned < 0:
            return
        learned = range(self.first_learned, len(self.clauses))
        in_use = {self.reason[abs(l)] for l in self.trail if self.reason[abs(l)] is not None}
        cands = [ci for ci in learned if self.clauses[ci] is not None and ci not in in_use and len(self.clauses[ci]) > 2]
        cands.sort(key=lambda ci: len(self.clauses[ci]))
        for ci in cands[len(cands) // 2 :]:
            self.clauses[ci] = None
        for lidx in range(2 * self.n + 1):
            self.watches[lidx] = [ci for ci in self.watches[lidx] if self.clauses[ci] is not None]

    # -- main loop ------------------------------------------------------------

    def solve(self, deadline: float) -> SatResult:
        for u in self.units:
            if self._value(u) == -1:
                return SatResult("unsat", stats=self._stats())
            if self._value(u) == 0:
                self._assign(u, None)
        if self.propagate() is not None:
            return SatResult("unsat", stats=self._stats())

        self.first_learned = len(self.clauses)
        max_learned = max(4000, len(self.clauses) // 2)
        restart_idx = 1
        restart_limit = 128 * _luby(restart_idx)
        conflicts_since_restart = 0

        while True:
            confl = self.propagate()
            if confl is not None:
                self.conflicts += 1
                conflicts_since_restart += 1
                if not self.trail_lim:
                    return SatResult("unsat", stats=self._stats())
                learnt, bj = self.analyze(confl)
                self._unassign_to(bj)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    ci = self._attach_learned(learnt)
                    self._assign(learnt[0], ci)
                self.var_inc /= 0.95
                if self.conflicts % 512 == 0:
                    if time.monotonic() > deadline:
                        return SatResult("timeout", stats=self._stats())
                    if len(self.clauses) - self.first_learned > max_learned:
                        self._reduce_db()
                        max_learned += max_learned // 10
                continue

            if conflicts_since_restart >= restart_limit:
                conflicts_since_restart = 0
                restart_idx += 1
                restart_limit = 128 * _luby(restart_idx)
                if self.trail_lim:
                    self._unassign_to(0)
                continue

            # decide
            v = 0
            while self.heap:
                act, cand = heappop(self.heap)
                if self.assign[cand + self.n] == 0 and -act == self.activity[cand]:
                    v = cand
                    break
            if v == 0:
                # double-check without the heap (stale entries)
                for cand in range(1, self.n + 1):
                    if self.assign[cand + self.n] == 0:
                        v = cand
                        break
                if v == 0:
                    model = {x for x in range(1, self.n + 1) if self.assign[x + self.n] == 1}
                    return SatResult("sat", model=model, stats=self._stats())
            self.decisions += 1
            if self.decisions % 4096 == 0 and time.monotonic() > deadline:
                return SatResult("timeout", stats=self._stats())
            self.trail_lim.append(len(self.trail))
            self._assign(v if self.phase[v] else -v, None)

    def _stats(self) -> dict:
        return {
            "conflicts": self.conflicts,
            "decisions": self.decisions,
            "propagations": self.propagations,
        }


def solve_internal(f: CnfFormula, timeout: float = 3600.0, seed: int = 0) -> SatResult:
    start = time.monotonic()
    deadline = start + timeout
    solver = _Cdcl(f.num_vars, seed)
    count = 0
    for clause in f.iter_clauses():
        if not solver.add_clause(clause):
            return SatResult("unsat", stats={"conflicts": 0, "decisions": 0, "elapsed": time.monotonic() - start})
        count += 1
        if count % 100000 == 0 and time.monotonic() > deadline:
            res = SatResult("timeout", stats={"conflicts": 0, "decisions": 0})
            res.stats["elapsed"] = time.monotonic() - start
            return res
    res = solver.solve(deadline)
    res.stats["elapsed"] = time.monotonic() - start
    if res.status == "sat":
        assert verify_model(f, res.model), "internal solver returned a non-model"
    return res


def brute_force_solve(f: CnfFormula, max_vars: int = 24) -> SatResult:
    """Exhaustive truth-table search (with false-clause pruning); test oracle."""
    if f.num_vars > max_vars:
        raise ValueError(f"brute force limited to {max_vars} variables")
    clauses = f.clause_list()
    n = f.num_vars
    assign: dict[int, bool] = {}

    by_var: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for idx, c in enumerate(clauses):
        for l in c:
            by_var[abs(l)].append(idx)

    def clause_false(idx: int) -> bool:
        c = clauses[idx]
        for l in c:
            v = abs(l)
            if v not in assign:
                return False
            if (l > 0) == assign[v]:
                return False
        return True

    def rec(v: int):
        if v > n:
            return dict(assign)
        for val in (False, True):
            assign[v] = val
            if not any(clause_false(idx) for idx in by_var[v]):
                m = rec(v + 1)
                if m is not None:
                    return m
            del assign[v]
        return None

    start = time.monotonic()
    model = rec(1)
    elapsed = time.monotonic() - start
    if model is None:
        return SatResult("unsat", stats={"elapsed": elapsed})
    true_vars = {v for v, val in model.items() if val}
    assert verify_model(f, true_vars)
    return SatResult("sat", model=true_vars, stats={"elapsed": elapsed})


# ---------------------------------------------------------------------------
# External bridge.
# ---------------------------------------------------------------------------


def solve_external(f: CnfFormula, path: str, timeout: float = 3600.0) -> SatResult:
    with tempfile.NamedTemporaryFile("w", suffix=".cnf", delete=False) as handle:
        write_dimacs(f, handle)
        cnf_path = handle.name
    start = time.monotonic()
    try:
        proc = subprocess.run(
            [path, cnf_path], capture_output=True, text=True, timeout=timeout
        )
    except FileNotFoundError as exc:
        raise ExternalSolverError(f"external solver not found: {path}") from exc
    except subprocess.TimeoutExpired:
        return SatResult("timeout", stats={"elapsed": time.monotonic() - start})
    finally:
        Path(cnf_path).unlink(missing_ok=True)
    elapsed = time.monotonic() - start
    if proc.returncode == 20:
        return SatResult("unsat", stats={"elapsed": elapsed})
    if proc.returncode == 10:
        model: set[int] = set()
        for line in proc.stdout.splitlines():
            if line.startswith("v"):
                for tok in line[1:].split():
                    lit = int(tok)
                    if lit > 0:
                        model.add(lit)
        if not verify_model(f, model):
            raise ExternalSolverError("external solver model fails verification")
        return SatResult("sat", model=model, stats={"elapsed": elapsed})
    raise ExternalSolverError(
        f"external solver exit code {proc.returncode}; stderr: {proc.stderr[:500]}"
    )


def solve(f: CnfFormula, cfg: SolverConfig | None = None) -> SatResult:
    cfg = cfg or SolverConfig()
    if f.trivially_false_reason is not None:
        return SatResult("unsat", stats={"reason": f.trivially_false_reason, "elapsed": 0.0})
    if f.num_clauses == 0:
        return SatResult("sat", model=set(), stats={"elapsed": 0.0})
    if cfg.engine == "internal":
        return solve_internal(f, cfg.timeout, cfg.seed)
    if cfg.engine == "external":
        if not cfg.external_path:
            raise ExternalSolverError("external engine selected but no path configured")
        return solve_external(f, cfg.external_path, cfg.timeout)
    raise ValueError(f"unknown engine {cfg.engine!r}")
