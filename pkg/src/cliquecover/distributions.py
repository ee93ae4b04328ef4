"""Global distributions: multiplicity vectors over local profiles.

Summing the local type counts n_s(x) over the 24 outside vertices against the
global counts (n0, n1, n2, n3) gives five exact equations for the profile
multiplicities c_p:

    sum c_p = 24,   sum c_p p0 = 5 n0,   sum c_p p1 = 4 n1,
    sum c_p p2 = 3 n2,   sum c_p p3 = 2 n3.

Profiles are scanned in Table-3 (lexicographic) order restricted to the
profiles present among the enumerated signatures, with partial sums pruned
against all five targets; the output is therefore sorted lexicographically by
multiplicity vector, and "dist k" labels are the 1-based positions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .arithmetic import Profile

OUTSIDE_VERTICES = 24


@dataclass(frozen=True)
class GlobalDistribution:
    profiles: tuple[Profile, ...]
    counts: tuple[int, ...]

    def as_map(self) -> dict[Profile, int]:
        return {p: c for p, c in zip(self.profiles, self.counts) if c}

    def multiplicity(self, profile: Profile) -> int:
        try:
            return self.counts[self.profiles.index(profile)]
        except ValueError:
            return 0

    def as_dict(self) -> dict:
        return {"counts": [[list(p), c] for p, c in zip(self.profiles, self.counts) if c]}


def distribution_targets(type_counts: Profile) -> tuple[int, int, int, int, int]:
    n0, n1, n2, n3 = type_counts
    return (OUTSIDE_VERTICES, 5 * n0, 4 * n1, 3 * n2, 2 * n3)


def enumerate_global_distributions(
    profiles: list[Profile], type_counts: Profile
) -> list[GlobalDistribution]:
    """All solutions of the five target equations over the given profiles."""
    profiles = sorted(set(profiles))
    targets = distribution_targets(type_counts)
    k = len(profiles)
    # columns[j] = (1, p0, p1, p2, p3) contribution of one vertex of profile j
    columns = [(1,) + p for p in profiles]
    # max attainable contribution of profiles j.. for each coordinate
    suffix_max = [[0] * 5 for _ in range(k + 1)]
    for j in range(k - 1, -1, -1):
        for i in range(5):
            suffix_max[j][i] = suffix_max[j + 1][i] + columns[j][i] * OUTSIDE_VERTICES

    out: list[GlobalDistribution] = []
    counts = [0] * k

    def rec(j: int, remaining: tuple[int, ...]) -> None:
        if j == k:
            if all(r == 0 for r in remaining):
                out.append(GlobalDistribution(tuple(profiles), tuple(counts)))
            return
        col = columns[j]
        cmax = min(
            (remaining[i] // col[i] for i in range(5) if col[i]), default=remaining[0]
        )
        for c in range(cmax + 1):
            rest = tuple(remaining[i] - c * col[i] for i in range(5))
            # prune when the rest cannot be reached by later profiles
            if all(rest[i] <= suffix_max[j + 1][i] for i in range(5)):
                counts[j] = c
                rec(j + 1, rest)
        counts[j] = 0

    rec(0, targets)
    return out


def dump_distributions_jsonl(dists: list[GlobalDistribution]) -> str:
    lines = []
    for i, d in enumerate(dists, 1):
        lines.append(json.dumps({"index": i, **d.as_dict()}))
    return "\n".join(lines) + "\n"
