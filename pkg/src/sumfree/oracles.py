"""Independent brute-force baselines and small-scale checkers.

Everything here favors transparency over speed: the naive counter scans all
2^n subsets with the reference predicates and no pruning, the progression
checker recomputes sumsets from scratch, and the structure classifier works
in exact rational arithmetic so boundary cases cannot flip under floating
point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Optional

from .core import (
    ConfigCount,
    ConstraintProfile,
    IntSet,
    count_forbidden_k_subsets,
    is_sum_free,
    mask_layers_contain,
    mask_sigma_contains,
    mask_sum_free,
    outside_top_third,
    sumset,
)

__all__ = [
    "NAIVE_SCAN_CAP",
    "naive_count",
    "FreimanResult",
    "freiman_ap_check",
    "sumset_bound_check",
    "count_partitions_distinct",
    "StructureReport",
    "classify_large_sum_free",
    "StabilityProbe",
    "stability_probe",
]

NAIVE_SCAN_CAP = 22


def naive_count(n: int, profile: ConstraintProfile) -> int:
    """Count admissible subsets of [1, n] by testing every one of the 2^n
    subsets with the reference predicates.  No pruning, by design: this is
    the ground truth the search engine is measured against.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n > NAIVE_SCAN_CAP:
        raise ValueError(f"naive scan capped at n <= {NAIVE_SCAN_CAP}, got {n}")
    forbidden = profile.forbidden_sum
    layers = profile.layers
    require_sf = profile.require_sum_free
    count = 0
    for bits in range(1 << n):
        members = bits << 1  # bit v <-> value v, values start at 1
        if require_sf and not mask_sum_free(members):
            continue
        if layers is None:
            if mask_sigma_contains(members, forbidden):
                continue
        elif mask_layers_contain(members, layers, forbidden):
            continue
        count += 1
    return count


# ---------------------------------------------------------------------------
# small-doubling / progression cover


class FreimanResult(NamedTuple):
    applicable: bool  # |A+A| <= 3|A| - 4
    holds: bool  # shortest-AP length <= |A+A| - |A| + 1
    ap_length: int
    bound: int


def freiman_ap_check(a: IntSet) -> FreimanResult:
    """Shortest arithmetic progression containing ``a`` versus the
    small-doubling bound |A+A| - |A| + 1.

    Sets with |A+A| > 3|A| - 4 are reported as not applicable (the bound is
    then not promised).  Requires |a| >= 2 so the difference is defined.
    """
    members = a.members
    if len(members) < 2:
        raise ValueError("need at least 2 elements to define a progression")
    doubled = sumset(a, a, 2 * a.max()).values
    bound = len(doubled) - len(members) + 1
    d = 0
    lowest = members[0]
    for m in members[1:]:
        d = gcd(d, m - lowest)
    ap_length = (members[-1] - lowest) // d + 1
    return FreimanResult(
        applicable=len(doubled) <= 3 * len(members) - 4,
        holds=ap_length <= bound,
        ap_length=ap_length,
        bound=bound,
    )


def sumset_bound_check(a: IntSet, b: IntSet) -> bool:
    """|A+B| >= |A| + |B| - 1.  Always true; False would expose a sumset bug."""
    if not len(a) or not len(b):
        raise ValueError("both sets must be nonempty")
    total = sumset(a, b, a.max() + b.max()).values
    return len(total) >= len(a) + len(b) - 1


# ---------------------------------------------------------------------------
# partitions into distinct parts


def count_partitions_distinct(k: int, l: int) -> int:
    """Number of sets of ``l`` distinct positive integers with sum ``k``.

    Subtracting 0, 1, ..., l-1 from the sorted parts bijects these onto
    partitions of k - l(l-1)/2 into exactly l (not necessarily distinct)
    parts, which the table below counts.
    """
    if k < 1 or l < 1:
        raise ValueError("k and l must be >= 1")
    m = k - l * (l - 1) // 2
    if m < l:
        return 0
    # exact_parts[s][j]: partitions of s into exactly j parts
    exact = [[0] * (l + 1) for _ in range(m + 1)]
    exact[0][0] = 1
    for s in range(1, m + 1):
        for j in range(1, l + 1):
            exact[s][j] = exact[s - 1][j - 1] + (exact[s - j][j] if s >= j else 0)
    return exact[m][l]


# ---------------------------------------------------------------------------
# structure classifier for large sum-free sets


@dataclass(frozen=True)
class StructureReport:
    """Which of the five structural alternatives a large sum-free set meets.

    1: all members = 1 or 4 (mod 5);  2: all members = 2 or 3 (mod 5);
    3: all members odd;  4: min(A) >= |A|;  5: A within the two fringe
    intervals widened by 200*sqrt(eta)*n on each inner edge.
    """

    alternatives_satisfied: frozenset[int]
    eta: Fraction
    details: dict[int, str]


def _within_sqrt_margin(delta: Fraction, eta: Fraction) -> bool:
    # exact test for delta <= 200*sqrt(eta): compare squares when positive
    if delta <= 0:
        return True
    return delta * delta <= 40000 * eta


def classify_large_sum_free(a: IntSet, n: int, eta: Fraction) -> StructureReport:
    """Classify a sum-free set of density at least 2/5 - eta.

    Raises if ``a`` is not sum-free or smaller than the density threshold.
    Several alternatives may hold at once; at small n none may hold.
    """
    eta = Fraction(eta)
    if not is_sum_free(a):
        raise ValueError("set must be sum-free")
    if Fraction(len(a)) < (Fraction(2, 5) - eta) * n:
        raise ValueError(f"set of size {len(a)} below the (2/5 - eta)*n = "
                         f"{(Fraction(2, 5) - eta) * n} density threshold")
    members = a.members
    satisfied: set[int] = set()
    details: dict[int, str] = {}

    bad1 = [x for x in members if x % 5 not in (1, 4)]
    if not bad1:
        satisfied.add(1)
    details[1] = "all members are 1 or 4 mod 5" if not bad1 else f"violated by {bad1[0]}"

    bad2 = [x for x in members if x % 5 not in (2, 3)]
    if not bad2:
        satisfied.add(2)
    details[2] = "all members are 2 or 3 mod 5" if not bad2 else f"violated by {bad2[0]}"

    bad3 = [x for x in members if x % 2 == 0]
    if not bad3:
        satisfied.add(3)
    details[3] = "all members odd" if not bad3 else f"violated by {bad3[0]}"

    if not members or members[0] >= len(members):
        satisfied.add(4)
        details[4] = "min(A) >= |A|"
    else:
        details[4] = f"min {members[0]} < size {len(members)}"

    def in_intervals(x: int) -> bool:
        r = Fraction(x, n)
        low_ok = _within_sqrt_margin(Fraction(1, 5) - r, eta) and _within_sqrt_margin(
            r - Fraction(2, 5), eta
        )
        high_ok = x <= n and _within_sqrt_margin(Fraction(4, 5) - r, eta)
        return low_ok or high_ok

    bad5 = [x for x in members if not in_intervals(x)]
    if not bad5:
        satisfied.add(5)
    details[5] = (
        "contained in the widened fringe intervals" if not bad5 else f"violated by {bad5[0]}"
    )

    return StructureReport(frozenset(satisfied), eta, details)


# ---------------------------------------------------------------------------
# stability measurements


class StabilityProbe(NamedTuple):
    c3: ConfigCount
    c4: ConfigCount
    c5: ConfigCount
    dist: int


def stability_probe(a: IntSet, n: int) -> StabilityProbe:
    """Forbidden-configuration counts (k = 3, 4, 5) of ``a`` together with
    its distance |a \\ top-third-interval|.  Pure measurement, no assertion:
    the tradeoff between the two is an empirical object of study.
    """
    return StabilityProbe(
        c3=count_forbidden_k_subsets(a, n, 3),
        c4=count_forbidden_k_subsets(a, n, 4),
        c5=count_forbidden_k_subsets(a, n, 5),
        dist=outside_top_third(a, n),
    )
