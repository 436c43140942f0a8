"""Special marker sets on [0, 2t-1], addition-closed sets on [1, n], and the
exact correspondences between them.

A set T in [0, 2t-1] is t-special when |T| = t, the value 2t-1 is not a sum
of three members (repetition allowed), and every value in
[0, 2t-1 + min(T)] outside 2t-1 - T is a sum of two members.  Zero-containing
special sets biject with addition-closed subsets of [1, t-1] avoiding
2t-1 in their triple sums; those in turn inject into the sum-free sets with
the same forbidden sum.  ``verify_correspondences`` checks all of this
exhaustively at small sizes.
"""

from __future__ import annotations

from dataclasses import dataclass
from multiprocessing import get_context

from .core import (
    IntSet,
    mask_k_fold,
    mask_layers_contain,
    mask_members,
    mask_sigma_contains,
    mask_sum_free,
    profile_for,
)
from .engine import DEFAULT_NODE_BUDGET, EnumTask, NodeBudgetExceeded, count_admissible

__all__ = [
    "SpecialSet",
    "ClosedSet",
    "is_t_special",
    "enumerate_t_special",
    "special_to_closed",
    "closed_to_special",
    "is_closed_under_addition",
    "enumerate_closed",
    "sum_free_projection",
    "CheckOutcome",
    "CorrespondenceReport",
    "verify_correspondences",
]


@dataclass(frozen=True)
class SpecialSet:
    """A candidate marker set T within [0, 2t-1], together with its t."""

    t: int
    members: IntSet

    def __post_init__(self):
        if self.t < 1:
            raise ValueError("t must be >= 1")
        if self.members.mask and self.members.max() > 2 * self.t - 1:
            raise ValueError(f"members must lie in [0, {2 * self.t - 1}]")


@dataclass(frozen=True)
class ClosedSet:
    """A subset of [1, n] (n >= 0 allowed; n = 0 means the empty ground)."""

    n: int
    members: IntSet

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if self.members.mask and (self.members.min() < 1 or self.members.max() > self.n):
            raise ValueError(f"members must lie in [1, {self.n}]")


# ---------------------------------------------------------------------------
# the special-set predicate


def _covers_required_range(mask: int, t: int) -> bool:
    # [0, 2t-1 + min(T)] \ (2t-1 - T) must lie inside T + T (integer sums).
    top = 2 * t - 1
    low = (mask & -mask).bit_length() - 1
    hi = top + low
    universe = (1 << (hi + 1)) - 1
    mirrored = 0
    for tau in mask_members(mask):
        mirrored |= 1 << (top - tau)
    doubled = mask_k_fold(mask, 2, hi)
    return not (universe & ~mirrored & ~doubled)


def is_t_special(T: IntSet, t: int) -> bool:
    """All three defining conditions: size t, no triple sum equal to 2t-1,
    and the two-fold sums covering [0, 2t-1 + min(T)] off the mirror of T."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if not T.mask:
        raise ValueError("T must be nonempty (min(T) is used)")
    if T.max() > 2 * t - 1:
        raise ValueError(f"T must lie in [0, {2 * t - 1}]")
    if len(T) != t:
        return False
    if mask_layers_contain(T.mask, (3,), 2 * t - 1):
        return False
    return _covers_required_range(T.mask, t)


def _special_advance(dp, c: int, capmask: int, fbit: int):
    # dp[j] holds the j-fold sums (repetition allowed) of the chosen set,
    # clipped to [0, 2t-1]; None signals 2t-1 entering the triple sums.
    d1 = dp[1] | ((dp[0] << c) & capmask)
    d2 = dp[2] | ((d1 << c) & capmask)
    d3 = dp[3] | ((d2 << c) & capmask)
    if d3 & fbit:
        return None
    return (dp[0], d1, d2, d3)


def _special_walk(args) -> list[int]:
    t, positions, idx, size, chosen, dp, node_budget = args
    top = 2 * t - 1
    fbit = 1 << top
    capmask = (1 << (top + 1)) - 1
    total = len(positions)
    hits: list[int] = []
    nodes = 0

    def walk(idx: int, size: int, chosen: int, dp) -> None:
        nonlocal nodes
        if size == t:
            if _covers_required_range(chosen, t):
                hits.append(chosen)
            return
        for i in range(idx, total):
            if size + (total - i) < t:
                break
            nodes += 1
            if nodes > node_budget:
                raise NodeBudgetExceeded(f"node budget {node_budget} exceeded")
            ndp = _special_advance(dp, positions[i], capmask, fbit)
            if ndp is None:
                continue
            walk(i + 1, size + 1, chosen | (1 << positions[i]), ndp)

    walk(idx, size, chosen, dp)
    return hits


def enumerate_t_special(
    t: int,
    require_zero: bool = False,
    *,
    workers: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> list[SpecialSet]:
    """All t-special sets, optionally restricted to those containing 0, in
    ascending member order.

    Backtracks over [0, 2t-1] from the top down, pruning branches whose
    triple sums already reach 2t-1 or that cannot reach size t; the two-fold
    coverage condition is checked at the size-t leaves.  With workers > 1 the
    tree splits at a fixed prefix depth into independent subtasks whose hit
    lists merge by concatenation.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    top = 2 * t - 1
    fbit = 1 << top
    capmask = (1 << (top + 1)) - 1

    positions = tuple(range(top, 0, -1)) + (() if require_zero else (0,))
    size, chosen, dp = 0, 0, (1, 0, 0, 0)
    if require_zero:
        dp = _special_advance(dp, 0, capmask, fbit)
        if dp is None:
            return []
        size, chosen = 1, 1

    if workers <= 1:
        hits = _special_walk((t, positions, 0, size, chosen, dp, node_budget))
    else:
        depth = min(len(positions), 6)
        prefixes: list[tuple] = []

        def collect(idx: int, size: int, chosen: int, dp) -> None:
            if size == t or idx == depth:
                prefixes.append((t, positions, idx, size, chosen, dp, node_budget))
                return
            ndp = _special_advance(dp, positions[idx], capmask, fbit)
            if ndp is not None:
                collect(idx + 1, size + 1, chosen | (1 << positions[idx]), ndp)
            if size + (len(positions) - idx - 1) >= t:
                collect(idx + 1, size, chosen, dp)

        collect(0, size, chosen, dp)
        with get_context("fork").Pool(processes=workers) as pool:
            parts = pool.map(_special_walk, prefixes)
        hits = [mask for part in parts for mask in part]

    hits.sort()
    return [SpecialSet(t, IntSet.from_mask(m, lo=0, hi=top)) for m in hits]


# ---------------------------------------------------------------------------
# addition-closed sets


def is_closed_under_addition(a: IntSet, n: int) -> bool:
    """True iff x, y in a and x + y <= n imply x + y in a (x = y allowed)."""
    if a.mask and (a.min() < 1 or a.max() > n):
        raise ValueError(f"set must be contained in [1, {n}]")
    ground = (1 << (n + 1)) - 2  # bits 1..n
    mask = a.mask
    for x in mask_members(mask):
        if (mask << x) & ground & ~mask:
            return False
    return True


def _closed_scan_chunk(args: tuple[int, int, int]) -> list[int]:
    n, lo, hi = args
    ground = (1 << (n + 1)) - 2
    forbidden = 2 * n + 1
    found = []
    for bits in range(lo, hi):
        mask = bits << 1
        closed = True
        rest = mask
        while rest:
            low = rest & -rest
            if (mask << (low.bit_length() - 1)) & ground & ~mask:
                closed = False
                break
            rest ^= low
        if closed and not mask_layers_contain(mask, (3,), forbidden):
            found.append(mask)
    return found


def enumerate_closed(n: int, *, workers: int = 1) -> list[ClosedSet]:
    """All addition-closed subsets of [1, n] avoiding 2n+1 in their triple
    sums, by full scan of the 2^n subsets, in ascending bitmask order."""
    if n < 0:
        raise ValueError("n must be >= 0")
    space = 1 << n
    if workers <= 1 or space < 1 << 12:
        masks = _closed_scan_chunk((n, 0, space))
    else:
        step = -(-space // (workers * 4))
        chunks = [(n, lo, min(lo + step, space)) for lo in range(0, space, step)]
        with get_context("fork").Pool(processes=workers) as pool:
            parts = pool.map(_closed_scan_chunk, chunks)
        masks = [m for part in parts for m in part]
    return [ClosedSet(n, IntSet.from_mask(m, lo=1, hi=max(n, 1))) for m in masks]


def _require_closed_member(a: ClosedSet) -> None:
    if not is_closed_under_addition(a.members, a.n) or mask_layers_contain(
        a.members.mask, (3,), 2 * a.n + 1
    ):
        raise ValueError(f"{a} is not an addition-closed set avoiding {2 * a.n + 1} in 3 summands")


# ---------------------------------------------------------------------------
# the correspondence maps


def special_to_closed(T: SpecialSet) -> ClosedSet:
    """Restrict a zero-containing special set to [1, t-1]; the image is
    addition-closed there and keeps 2t-1 out of its triple sums."""
    if 0 not in T.members:
        raise ValueError("the correspondence needs 0 in T")
    if not is_t_special(T.members, T.t):
        raise ValueError(f"{T} is not {T.t}-special")
    n = T.t - 1
    return ClosedSet(n, T.members.restrict(1, n))


def closed_to_special(a: ClosedSet, t: int) -> SpecialSet:
    """Inverse of :func:`special_to_closed`: rebuild T from a closed set on
    [1, t-1] as {0} + A + the mirror 2t-1-l of every l in [1, t-1] missing
    from A."""
    if a.n != t - 1:
        raise ValueError(f"closed set lives on [1, {a.n}], expected [1, {t - 1}]")
    _require_closed_member(a)
    top = 2 * t - 1
    mask = 1 | a.members.mask
    for ell in range(1, t):
        if ell not in a.members:
            mask |= 1 << (top - ell)
    return SpecialSet(t, IntSet.from_mask(mask, lo=0, hi=top))


def sum_free_projection(a: ClosedSet, *, addends: str = "surviving") -> IntSet:
    """Strip a closed set down to a sum-free set with the same forbidden sum.

    Scans members from largest to smallest and removes the current element
    when it is a sum of two strictly smaller elements (the two may be equal).
    ``addends`` selects where those smaller elements are read from: the
    ``"surviving"`` working set (default) or the ``"original"`` input.  The
    scan never removes anything below the element under inspection, so both
    readings agree; both are kept to make that comparison executable.
    """
    if addends not in ("surviving", "original"):
        raise ValueError("addends must be 'surviving' or 'original'")
    _require_closed_member(a)
    original = a.members.mask
    working = original
    for z in reversed(a.members.members):
        pool = (working if addends == "surviving" else original) & ((1 << z) - 1)
        rest = pool
        removable = False
        while rest:
            low = rest & -rest
            x = low.bit_length() - 1
            if 2 * x > z:
                break
            if (pool >> (z - x)) & 1:
                removable = True
                break
            rest ^= low
        if removable:
            working &= ~(1 << z)
    return IntSet.from_mask(working, lo=1, hi=max(a.n, 1))


# ---------------------------------------------------------------------------
# exhaustive verification


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}" + (f" -- {self.detail}" if self.detail else "")


@dataclass(frozen=True)
class CorrespondenceReport:
    checks: tuple[CheckOutcome, ...]
    special_counts: tuple[tuple[int, int, int], ...]  # (t, |specials with 0|, |closed on t-1|)
    closed_counts: tuple[tuple[int, int, int], ...]  # (n, |closed|, |sum-free family|)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __str__(self) -> str:
        lines = [str(c) for c in self.checks]
        lines.append("t, zero-containing specials, closed sets on [1, t-1]:")
        lines.extend(f"  t={t:2d}  {s:8d}  {c:8d}" for t, s, c in self.special_counts)
        lines.append("n, closed sets, admissible sum-free sets:")
        lines.extend(f"  n={n:2d}  {a:8d}  {d:8d}" for n, a, d in self.closed_counts)
        return "\n".join(lines)


def _claim_one_of_each_pair(T: SpecialSet) -> bool:
    top = 2 * T.t - 1
    for ell in range(T.t):
        if (ell in T.members) == (top - ell in T.members):
            return False
    return True


def _claim_closed_below_top(T: SpecialSet) -> bool:
    top = 2 * T.t - 1
    members = T.members.members
    for i, x in enumerate(members):
        for y in members[i:]:
            if x + y <= top and x + y not in T.members:
                return False
    return True


def verify_correspondences(n_max: int, t_max: int) -> CorrespondenceReport:
    """Exhaustively verify the structure results at desk scale.

    * For t <= t_max: zero-containing t-special sets biject with the closed
      family on [1, t-1] (counts equal, both round trips are identities, and
      the pairing/closure claims hold for every enumerated set).
    * For n <= n_max: the projection to sum-free sets is injective, lands in
      the admissible sum-free family, and both addend readings agree (n <= 14),
      so the closed family is at most as large as the sum-free one.

    Failures are reported with counterexamples, not raised.
    """
    checks: list[CheckOutcome] = []
    special_counts = []
    closed_counts = []

    for t in range(1, t_max + 1):
        specials = enumerate_t_special(t, require_zero=True)
        closed = enumerate_closed(t - 1)
        special_counts.append((t, len(specials), len(closed)))
        closed_masks = {c.members.mask for c in closed}

        bad = next((T for T in specials if not _claim_one_of_each_pair(T)), None)
        checks.append(
            CheckOutcome(
                f"t={t}: exactly one of l, 2t-1-l is in T for l in [0, t-1]",
                bad is None,
                f"counterexample {bad}" if bad else "",
            )
        )
        bad = next((T for T in specials if not _claim_closed_below_top(T)), None)
        checks.append(
            CheckOutcome(
                f"t={t}: members' pairwise sums within [0, 2t-1] stay in T",
                bad is None,
                f"counterexample {bad}" if bad else "",
            )
        )

        images = [special_to_closed(T) for T in specials]
        round_ok = all(
            closed_to_special(img, t).members == T.members for T, img in zip(specials, images)
        )
        image_masks = {img.members.mask for img in images}
        onto_ok = all(
            special_to_closed(closed_to_special(c, t)).members == c.members for c in closed
        )
        checks.append(
            CheckOutcome(
                f"t={t}: restriction and rebuild are mutually inverse bijections",
                round_ok and onto_ok and image_masks == closed_masks
                and len(specials) == len(closed),
                f"|specials|={len(specials)} |closed|={len(closed)}",
            )
        )

    for n in range(0, n_max + 1):
        closed = enumerate_closed(n)
        forbidden = 2 * n + 1
        images = [sum_free_projection(c) for c in closed]
        in_family = all(
            mask_sum_free(img.mask) and not mask_sigma_contains(img.mask, forbidden)
            for img in images
        )
        injective = len({img.mask for img in images}) == len(images)
        checks.append(
            CheckOutcome(
                f"n={n}: projection is injective into the admissible sum-free family",
                in_family and injective,
            )
        )
        if n <= 14:
            same = all(
                sum_free_projection(c, addends="original") == img
                for c, img in zip(closed, images)
            )
            checks.append(
                CheckOutcome(f"n={n}: both addend readings of the projection agree", same)
            )
        family_count = count_admissible(EnumTask(n, profile_for("sf-sigma-2n1", n), "count"))
        closed_counts.append((n, len(closed), family_count))
        checks.append(
            CheckOutcome(
                f"n={n}: closed family no larger than the sum-free family",
                len(closed) <= family_count,
                f"{len(closed)} <= {family_count}",
            )
        )

    return CorrespondenceReport(tuple(checks), tuple(special_counts), tuple(closed_counts))
