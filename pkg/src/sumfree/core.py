"""Exact set arithmetic over bounded integer ranges.

Sets of nonnegative integers are carried as bitmasks (bit ``v`` set means the
integer ``v`` is a member), so sumsets and shifts are word-parallel.  The
ground range of every :class:`IntSet` is explicit because the library mixes
several different ambient ranges ([1,n], [0,2t-1], [0,2n], ...).

The module-level ``mask_*`` functions are the low-level predicates operating
directly on bitmask-encoded sets; the :class:`IntSet` wrappers and the
brute-force oracles both go through them, so there is exactly one definition
of each predicate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "IntSet",
    "SumsetResult",
    "ConfigCount",
    "ConstraintProfile",
    "BUILTIN_PROFILE_IDS",
    "profile_for",
    "satisfies",
    "sumset",
    "k_fold_sumset",
    "sigma_contains",
    "is_sum_free",
    "count_forbidden_k_subsets",
    "top_third_interval",
    "outside_top_third",
    "mask_members",
    "mask_sum_free",
    "mask_sigma_contains",
    "mask_k_fold",
    "mask_layers_contain",
]


# ---------------------------------------------------------------------------
# bitmask primitives


def mask_members(mask: int) -> Iterator[int]:
    """Yield the set bits of ``mask`` as integers, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_sum_free(mask: int) -> bool:
    """True iff no x, y (x = y allowed) in the set have x + y in the set."""
    rest = mask
    while rest:
        low = rest & -rest
        if (mask << (low.bit_length() - 1)) & mask:
            return False
        rest ^= low
    return True


def _close_under(sums: int, step: int, capmask: int) -> int:
    # Close `sums` under repeatedly adding `step`, truncated to the cap.
    # Doubling the shift is exact: after m rounds all multiples j*step with
    # j < 2^m are present, and a fixed point can only be the full closure.
    if step == 0:
        return sums
    shift = step
    while True:
        grown = sums | ((sums << shift) & capmask)
        if grown == sums:
            return sums
        sums = grown
        shift <<= 1


def mask_sigma_contains(mask: int, target: int) -> bool:
    """True iff ``target`` is a sum of members with repetition (k >= 0 terms).

    The empty sum makes 0 always representable.
    """
    if target == 0:
        return True
    capmask = (1 << (target + 1)) - 1
    tbit = 1 << target
    sums = 1
    rest = mask
    while rest:
        low = rest & -rest
        sums = _close_under(sums, low.bit_length() - 1, capmask)
        if sums & tbit:
            return True
        rest ^= low
    return False


def mask_k_fold(mask: int, k: int, cap: int) -> int:
    """The k-fold sumset (repetition allowed) of a bitmask set, kept in [0, cap]."""
    if k == 0:
        return 1
    capmask = (1 << (cap + 1)) - 1
    result = mask & capmask
    for _ in range(k - 1):
        acc = 0
        rest = mask
        while rest:
            low = rest & -rest
            acc |= (result << (low.bit_length() - 1)) & capmask
            rest ^= low
        result = acc
    return result


def mask_layers_contain(mask: int, layers: Iterable[int], target: int) -> bool:
    """True iff ``target`` lies in the k-fold sumset for some k in ``layers``."""
    wanted = sorted(set(layers))
    if not wanted:
        return False
    tbit = 1 << target
    capmask = (1 << (target + 1)) - 1
    current = mask & capmask
    level = 1
    for k in wanted:
        while level < k:
            acc = 0
            rest = mask
            while rest:
                low = rest & -rest
                acc |= (current << (low.bit_length() - 1)) & capmask
                rest ^= low
            current = acc
            level += 1
        if current & tbit:
            return True
    return False


# ---------------------------------------------------------------------------
# IntSet


class IntSet:
    """An immutable finite set of nonnegative integers on an explicit ground
    range [lo, hi].

    Equality and hashing compare the members only; the ground range is
    representation metadata.  An empty ground range is expressed as
    ``hi == lo - 1``.  Instances are safe to share between threads: nothing
    mutates after construction.
    """

    __slots__ = ("lo", "hi", "mask")

    def __init__(self, members: Iterable[int] = (), *, lo: int = 0, hi: int | None = None):
        mask = 0
        top = -1
        for m in members:
            if m < 0:
                raise ValueError(f"negative member {m}")
            mask |= 1 << m
            if m > top:
                top = m
        if hi is None:
            hi = top if top >= 0 else lo
        if lo < 0:
            raise ValueError(f"ground_lo must be >= 0, got {lo}")
        if hi < lo - 1:
            raise ValueError(f"ground range [{lo}, {hi}] is malformed")
        if mask:
            if (mask & -mask).bit_length() - 1 < lo or top > hi:
                raise ValueError(f"members outside ground range [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("IntSet is immutable")

    @classmethod
    def from_mask(cls, mask: int, *, lo: int, hi: int) -> "IntSet":
        """Fast constructor from a bitmask already known to fit the ground."""
        obj = cls.__new__(cls)
        object.__setattr__(obj, "lo", lo)
        object.__setattr__(obj, "hi", hi)
        object.__setattr__(obj, "mask", mask)
        return obj

    @classmethod
    def interval(cls, a: int, b: int, *, lo: int | None = None, hi: int | None = None) -> "IntSet":
        """The integer interval [a, b] (empty when a > b)."""
        members = range(a, b + 1)
        return cls(members, lo=a if lo is None else lo, hi=max(a, b) if hi is None else hi)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(mask_members(self.mask))

    def __contains__(self, value: int) -> bool:
        return value >= 0 and (self.mask >> value) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        return mask_members(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntSet):
            return self.mask == other.mask
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.mask)

    def __repr__(self) -> str:
        return f"IntSet({{{', '.join(map(str, self))}}}, lo={self.lo}, hi={self.hi})"

    def min(self) -> int:
        if not self.mask:
            raise ValueError("min() of an empty IntSet")
        return (self.mask & -self.mask).bit_length() - 1

    def max(self) -> int:
        if not self.mask:
            raise ValueError("max() of an empty IntSet")
        return self.mask.bit_length() - 1

    def union(self, other: "IntSet") -> "IntSet":
        return IntSet.from_mask(
            self.mask | other.mask, lo=min(self.lo, other.lo), hi=max(self.hi, other.hi)
        )

    def intersection(self, other: "IntSet") -> "IntSet":
        return IntSet.from_mask(
            self.mask & other.mask, lo=min(self.lo, other.lo), hi=max(self.hi, other.hi)
        )

    def difference(self, other: "IntSet") -> "IntSet":
        return IntSet.from_mask(self.mask & ~other.mask, lo=self.lo, hi=self.hi)

    def restrict(self, lo: int, hi: int) -> "IntSet":
        """Members within [lo, hi], on that ground."""
        window = ((1 << (hi + 1)) - 1) & ~((1 << lo) - 1) if hi >= lo else 0
        return IntSet.from_mask(self.mask & window, lo=lo, hi=hi)

    def to_json(self) -> dict:
        return {"ground": [self.lo, self.hi], "members": list(self)}

    @classmethod
    def from_json(cls, data: dict) -> "IntSet":
        lo, hi = data["ground"]
        return cls(data["members"], lo=lo, hi=hi)


# ---------------------------------------------------------------------------
# sumset operations


@dataclass(frozen=True)
class SumsetResult:
    values: IntSet
    overflowed: bool


def sumset(a: IntSet, b: IntSet, cap: int) -> SumsetResult:
    """The sumset {x + y : x in a, y in b} clipped to [0, cap].

    ``overflowed`` reports whether any sum exceeded the cap; sums are never
    silently dropped without the flag being raised.
    """
    if cap < 0:
        raise ValueError("cap must be >= 0")
    if not a.mask or not b.mask:
        return SumsetResult(IntSet.from_mask(0, lo=0, hi=cap), False)
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    full = 0
    bigmask = big.mask
    for x in small:
        full |= bigmask << x
    capmask = (1 << (cap + 1)) - 1
    lo = min(a.lo + b.lo, cap)
    hi = min(a.hi + b.hi, cap)
    return SumsetResult(IntSet.from_mask(full & capmask, lo=lo, hi=hi), full != full & capmask)


def k_fold_sumset(a: IntSet, k: int, cap: int) -> IntSet:
    """The k-fold sumset kA (repetition allowed) clipped to [0, cap].

    k = 0 gives {0} (the empty sum) and k = 1 gives a itself.  Because all
    members are nonnegative, clipping intermediate folds at the cap is exact.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if cap < 0:
        raise ValueError("cap must be >= 0")
    if k == 0:
        return IntSet.from_mask(1, lo=0, hi=cap)
    if not a.mask:
        return IntSet.from_mask(0, lo=0, hi=cap)
    mask = mask_k_fold(a.mask, k, cap)
    lo = min(k * a.lo, cap)
    hi = min(k * a.hi, cap)
    return IntSet.from_mask(mask, lo=min(lo, hi), hi=hi)


def sigma_contains(a: IntSet, target: int) -> bool:
    """Coin-problem reachability: is ``target`` a sum of members, repetition
    allowed, any number of terms?  target = 0 is always reachable (empty sum).
    """
    if target < 0:
        raise ValueError("target must be >= 0")
    return mask_sigma_contains(a.mask, target)


def is_sum_free(a: IntSet) -> bool:
    """True iff no x, y in a (x = y allowed) have x + y in a."""
    return mask_sum_free(a.mask)


# ---------------------------------------------------------------------------
# forbidden configurations


@dataclass(frozen=True)
class ConfigCount:
    """An exact count of k-element forbidden configurations."""

    k: int
    count: int


def _count_subsets_with_sum(members: tuple[int, ...], k: int, target: int) -> int:
    # Number of k-element subsets (distinct members) summing to target.
    # 0/1 knapsack over dicts keyed by partial sum; sums beyond the target
    # are dropped, which is exact since members are nonnegative.
    levels: list[dict[int, int]] = [{0: 1}] + [{} for _ in range(k)]
    for x in members:
        for j in range(k, 0, -1):
            lower = levels[j - 1]
            if not lower:
                continue
            level = levels[j]
            for s, c in lower.items():
                ns = s + x
                if ns <= target:
                    level[ns] = level.get(ns, 0) + c
    return levels[k].get(target, 0)


def _count_schur_triples(a: IntSet) -> int:
    # Triples {x < y < z} subset of a with x + y = z.  For a 3-subset the only
    # possible relation is smallest + middle = largest.
    members = a.members
    mask = a.mask
    count = 0
    for i, x in enumerate(members):
        for y in members[i + 1 :]:
            if (mask >> (x + y)) & 1:
                count += 1
    return count


def count_forbidden_k_subsets(a: IntSet, n: int, k: int) -> ConfigCount:
    """Count the k-element subsets of ``a`` (distinct members) that witness a
    violation on ground [1, n]: for k = 3 a Schur triple (x + y = z) or a
    triple summing to 2n + 1, for k in {4, 5} a subset summing to 2n + 1.

    A triple is counted once even if it meets both k = 3 conditions; in fact
    the two classes are disjoint, since x + y = z and x + y + z = 2n + 1 would
    force 2z = 2n + 1.
    """
    if k not in (3, 4, 5):
        raise ValueError(f"unsupported configuration class k={k}; expected 3, 4, or 5")
    if a.mask and (a.min() < 1 or a.max() > n):
        raise ValueError(f"set must be contained in [1, {n}]")
    members = a.members
    count = _count_subsets_with_sum(members, k, 2 * n + 1)
    if k == 3:
        count += _count_schur_triples(a)
    return ConfigCount(k, count)


# ---------------------------------------------------------------------------
# the extremal witness interval


def top_third_interval(n: int) -> IntSet:
    """The interval [ceil(2(n+1)/3), n] on ground [1, n].

    Every subset of it is sum-free with 2n+1 unreachable: two members sum to
    less than 2n+1 and three to more.  Its size is floor((n+1)/3).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    start = -(-2 * (n + 1) // 3)
    return IntSet.interval(start, n, lo=1, hi=n) if start <= n else IntSet((), lo=1, hi=n)


def outside_top_third(a: IntSet, n: int) -> int:
    """|a \\ [ceil(2(n+1)/3), n]| -- how far ``a`` sits from the witness interval."""
    return len(a.difference(top_third_interval(n)))


# ---------------------------------------------------------------------------
# constraint profiles


@dataclass(frozen=True)
class ConstraintProfile:
    """Which sums are forbidden for an admissible set.

    ``layers is None`` forbids the value from the full closure (any number of
    summands, repetition allowed, including the k <= 2 layers -- the test is
    exactly what the profile says).  Otherwise ``layers`` lists the k-fold
    sumsets to check; every k must be >= 3.
    """

    forbidden_sum: int
    layers: tuple[int, ...] | None
    require_sum_free: bool

    def __post_init__(self):
        if self.forbidden_sum < 0:
            raise ValueError("forbidden_sum must be >= 0")
        if self.layers is not None:
            if not self.layers:
                raise ValueError("layers must be nonempty (or None for the full closure)")
            if any(k < 3 for k in self.layers):
                raise ValueError("every explicit layer must have k >= 3")
            object.__setattr__(self, "layers", tuple(sorted(set(self.layers))))


def satisfies(a: IntSet, profile: ConstraintProfile) -> bool:
    """Reference admissibility predicate (used verbatim by the naive oracle)."""
    if profile.require_sum_free and not mask_sum_free(a.mask):
        return False
    if profile.layers is None:
        return not mask_sigma_contains(a.mask, profile.forbidden_sum)
    return not mask_layers_contain(a.mask, profile.layers, profile.forbidden_sum)


# Frozen registry: census records are joined across runs on these names.
_PROFILE_TABLE: dict[str, tuple[bool, tuple[int, ...] | None, str]] = {
    "sf-sigma-2n1": (True, None, "2n+1"),
    "sf-3a-2n1": (True, (3,), "2n+1"),
    "sf-34a-2n1": (True, (3, 4), "2n+1"),
    "sf-345a-2n1": (True, (3, 4, 5), "2n+1"),
    "sf-sigma-2n": (True, None, "2n"),
    "any-3a-n1": (False, (3,), "n+1"),
    "any-sigma-2n": (False, None, "2n"),
}

BUILTIN_PROFILE_IDS: tuple[str, ...] = tuple(_PROFILE_TABLE)

_FORBIDDEN_FORMULAS = {
    "2n+1": lambda n: 2 * n + 1,
    "2n": lambda n: 2 * n,
    "n+1": lambda n: n + 1,
}


def profile_for(profile_id: str, n: int) -> ConstraintProfile:
    """Instantiate a registry profile for a concrete ground size n."""
    try:
        require_sum_free, layers, formula = _PROFILE_TABLE[profile_id]
    except KeyError:
        raise KeyError(f"unknown profile id {profile_id!r}; known: {', '.join(BUILTIN_PROFILE_IDS)}") from None
    return ConstraintProfile(_FORBIDDEN_FORMULAS[formula](n), layers, require_sum_free)
