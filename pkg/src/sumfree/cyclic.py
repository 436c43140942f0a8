"""Subsets of the integers mod a prime p: symmetric / complete / sum-free
predicates, the central-interval-plus-mirrored-markers construction, dilation
orbits, and an exhaustive census of the symmetric complete sum-free sets.

Symmetric sets are enumerated through their positive halves (subsets of
{1, ..., (p-1)/2}); 0 never occurs in a sum-free set since 0 + 0 = 0, so the
halving loses nothing and squares down the scan space.
"""

from __future__ import annotations

from dataclasses import dataclass
from multiprocessing import get_context
from typing import Iterable, Iterator, Optional

from .core import IntSet, mask_members

__all__ = [
    "ZpSet",
    "PrimeParams",
    "ZpCensusRow",
    "is_symmetric",
    "is_complete",
    "is_sum_free_zp",
    "standard_symmetric_set",
    "dilate",
    "dilation_orbit",
    "canonical_form",
    "scsf_members",
    "scsf_census",
    "find_small_zero_sum",
    "in_theorem_range",
    "DEFAULT_CENSUS_LIMIT",
]

DEFAULT_CENSUS_LIMIT = 43


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class ZpSet:
    """An immutable subset of Z_p for a prime modulus p."""

    __slots__ = ("p", "mask")

    def __init__(self, p: int, members: Iterable[int] = ()):
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        mask = 0
        for m in members:
            if not 0 <= m < p:
                raise ValueError(f"member {m} outside Z_{p}")
            mask |= 1 << m
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, name, value):
        raise AttributeError("ZpSet is immutable")

    @classmethod
    def from_mask(cls, p: int, mask: int) -> "ZpSet":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "p", p)
        object.__setattr__(obj, "mask", mask)
        return obj

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(mask_members(self.mask))

    def __contains__(self, value: int) -> bool:
        return (self.mask >> (value % self.p)) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        return mask_members(self.mask)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ZpSet):
            return self.p == other.p and self.mask == other.mask
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self.mask))

    def __repr__(self) -> str:
        return f"ZpSet(p={self.p}, {{{', '.join(map(str, self))}}})"


def _rotate(mask: int, shift: int, p: int) -> int:
    full = (1 << p) - 1
    shift %= p
    return ((mask << shift) | (mask >> (p - shift))) & full if shift else mask


def _double_sumset(mask: int, p: int) -> int:
    acc = 0
    rest = mask
    while rest:
        low = rest & -rest
        acc |= _rotate(mask, low.bit_length() - 1, p)
        rest ^= low
    return acc


def is_symmetric(s: ZpSet) -> bool:
    """S = -S."""
    neg = 0
    for x in s:
        neg |= 1 << (-x % s.p)
    return neg == s.mask


def is_complete(s: ZpSet) -> bool:
    """Every element outside S is a sum of two (possibly equal) members."""
    full = (1 << s.p) - 1
    return not (full & ~s.mask & ~_double_sumset(s.mask, s.p))


def is_sum_free_zp(s: ZpSet) -> bool:
    """S avoids its own two-fold sums (x = y allowed)."""
    return not (s.mask & _double_sumset(s.mask, s.p))


# ---------------------------------------------------------------------------
# the interval-plus-markers construction


@dataclass(frozen=True)
class PrimeParams:
    """A prime p with an even size s in the window where the construction is
    well formed; t = (p - 3s + 1) / 2 is the marker ground half-width."""

    p: int
    s: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.s % 2:
            raise ValueError("s must be even")
        if 4 * self.s < self.p + 3 or 3 * self.s > self.p - 1:
            raise ValueError(f"s={self.s} outside [(p+3)/4, (p-1)/3] for p={self.p}")
        if self.t < 1:
            raise ValueError("derived t must be >= 1")

    @property
    def t(self) -> int:
        return (self.p - 3 * self.s + 1) // 2


def standard_symmetric_set(params: PrimeParams, marks: IntSet) -> ZpSet:
    """The set [p-2s+1, 2s-1] plus the pair +-(s + m) for every mark m.

    Marks live in [0, 2t-1]; the resulting set has size (4s-p-1) + 2|marks|
    and contains s exactly when 0 is a mark.
    """
    p, s, t = params.p, params.s, params.t
    if marks.mask and marks.max() > 2 * t - 1:
        raise ValueError(f"marks must lie in [0, {2 * t - 1}]")
    mask = 0
    for v in range(p - 2 * s + 1, 2 * s):
        mask |= 1 << v
    for m in marks:
        mask |= (1 << (s + m)) | (1 << (p - s - m))
    return ZpSet.from_mask(p, mask)


# ---------------------------------------------------------------------------
# dilation action


def dilate(s: ZpSet, lam: int) -> ZpSet:
    """The image of S under x -> lam * x (lam a unit of Z_p)."""
    if lam % s.p == 0:
        raise ValueError("dilation factor must be nonzero mod p")
    mask = 0
    for x in s:
        mask |= 1 << (x * lam % s.p)
    return ZpSet.from_mask(s.p, mask)


def dilation_orbit(s: ZpSet) -> list[ZpSet]:
    """All distinct dilations of S, sorted by member tuple."""
    seen = {dilate(s, lam).mask for lam in range(1, s.p)}
    return sorted((ZpSet.from_mask(s.p, m) for m in seen), key=lambda z: z.members)


def canonical_form(s: ZpSet) -> ZpSet:
    """Deterministic orbit representative: the dilation whose sorted member
    list is lexicographically least."""
    best: Optional[tuple[int, ...]] = None
    best_mask = 0
    for lam in range(1, s.p):
        img = dilate(s, lam)
        key = img.members
        if best is None or key < best:
            best, best_mask = key, img.mask
    return ZpSet.from_mask(s.p, best_mask)


# ---------------------------------------------------------------------------
# exhaustive census


def _scan_chunk(args: tuple[int, int, int]) -> list[int]:
    # Scan positive-half indices [lo, hi) for symmetric complete sum-free
    # sets; returns the full masks found.
    p, lo, hi = args
    half = (p - 1) // 2
    pair = [0] * (half + 1)
    for h in range(1, half + 1):
        pair[h] = (1 << h) | (1 << (p - h))
    full = (1 << p) - 1
    found = []
    for bits in range(lo, hi):
        mask = 0
        rest = bits
        while rest:
            low = rest & -rest
            mask |= pair[low.bit_length()]
            rest ^= low
        two = 0
        rest = mask
        ok = True
        while rest:
            low = rest & -rest
            x = low.bit_length() - 1
            rot = ((mask << x) | (mask >> (p - x))) & full
            if rot & mask:
                ok = False
                break
            two |= rot
            rest ^= low
        if ok and not (full & ~mask & ~two):
            found.append(mask)
    return found


def _scan_all(p: int, workers: int = 1) -> list[int]:
    half = (p - 1) // 2
    space = 1 << half
    if workers <= 1:
        return _scan_chunk((p, 0, space))
    chunks = []
    step = -(-space // (workers * 4))
    lo = 0
    while lo < space:
        chunks.append((p, lo, min(lo + step, space)))
        lo += step
    with get_context("fork").Pool(processes=workers) as pool:
        parts = pool.map(_scan_chunk, chunks)
    return [mask for part in parts for mask in part]


def scsf_members(p: int, s: Optional[int] = None, *, workers: int = 1,
                 census_limit: int = DEFAULT_CENSUS_LIMIT) -> list[ZpSet]:
    """Every symmetric complete sum-free subset of Z_p (of size s if given),
    in ascending mask order."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p > census_limit:
        raise ValueError(f"census limited to p <= {census_limit} (2^((p-1)/2) scan)")
    masks = sorted(_scan_all(p, workers))
    if s is not None:
        masks = [m for m in masks if m.bit_count() == s]
    return [ZpSet.from_mask(p, m) for m in masks]


def in_theorem_range(p: int, s: int) -> bool:
    """Whether (p, s) sits where the census provably equals the dilation
    closure of the marker construction: s even in [0.318 p, (p-1)/3]."""
    return s % 2 == 0 and 1000 * s >= 318 * p and 3 * s <= p - 1


@dataclass(frozen=True)
class ZpCensusRow:
    p: int
    s: int
    count: int
    in_theorem_range: bool
    representatives: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "s": self.s,
            "count": self.count,
            "in_theorem_range": self.in_theorem_range,
            "representatives": [list(r) for r in self.representatives],
        }


def scsf_census(p: int, s: Optional[int] = None, *, workers: int = 1,
                census_limit: int = DEFAULT_CENSUS_LIMIT,
                representative_cap: int = 3) -> list[ZpCensusRow]:
    """Size-grouped counts of the symmetric complete sum-free subsets of Z_p,
    with a few lexicographically-least representatives per size."""
    groups: dict[int, list[tuple[int, ...]]] = {}
    for z in scsf_members(p, s, workers=workers, census_limit=census_limit):
        groups.setdefault(len(z), []).append(z.members)
    rows = []
    for size in sorted(groups):
        sets = sorted(groups[size])
        rows.append(
            ZpCensusRow(
                p=p,
                s=size,
                count=len(sets),
                in_theorem_range=in_theorem_range(p, size),
                representatives=tuple(sets[:representative_cap]),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# small zero-sum subsets


def find_small_zero_sum(a: Iterable[int] | ZpSet, n: int) -> Optional[IntSet]:
    """Some subset B of ``a`` with 1 <= |B| <= 3 (distinct elements) summing
    to 0 mod n, or None when no such subset exists.  Deterministic: the first
    hit in sorted order wins, singletons before pairs before triples."""
    if n < 1:
        raise ValueError("modulus must be >= 1")
    members = sorted(set(a.members if isinstance(a, ZpSet) else a))
    for x in members:
        if not 0 <= x < n:
            raise ValueError(f"element {x} outside Z_{n}")
    hi = max(n - 1, 0)
    for i, x in enumerate(members):
        if x % n == 0:
            return IntSet((x,), lo=0, hi=hi)
    for i, x in enumerate(members):
        for y in members[i + 1 :]:
            if (x + y) % n == 0:
                return IntSet((x, y), lo=0, hi=hi)
    for i, x in enumerate(members):
        for j in range(i + 1, len(members)):
            y = members[j]
            for z in members[j + 1 :]:
                if (x + y + z) % n == 0:
                    return IntSet((x, y, z), lo=0, hi=hi)
    return None
