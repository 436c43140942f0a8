"""Pruned backtracking search over the admissible subsets of [1, n].

Elements are decided from n downward.  Three pruning devices keep the tree
close to the admissible family itself:

* sum-free closure -- a banned-difference bitmask marks every future value
  that would complete x + y = z with the chosen elements;
* forbidden-sum reachability -- an incremental DP over partial sums (the full
  closure for profiles without a layer list, per-layer fold masks otherwise)
  rejects any candidate that completes the forbidden value;
* cardinality bound -- in max mode a subtree dies once even taking every
  remaining candidate cannot reach the best size seen.

All admissibility predicates here are monotone (subsets of admissible sets
are admissible), so a depth-d decision prefix partitions the family and
parallel runs merge by plain addition.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from multiprocessing import get_context
from typing import Callable, Iterable, Optional

from . import __version__
from .core import ConstraintProfile, IntSet, profile_for, satisfies

__all__ = [
    "DEFAULT_NODE_BUDGET",
    "EnumTask",
    "CensusRecord",
    "MaxResult",
    "StreamSummary",
    "NodeBudgetExceeded",
    "CensusMismatchError",
    "count_admissible",
    "max_admissible",
    "enumerate_admissible",
    "census",
]

DEFAULT_NODE_BUDGET = 10**9

ENGINE_VERSION = f"sumfree-{__version__}"


class NodeBudgetExceeded(RuntimeError):
    """The search hit its node budget; no partial result is returned."""


class CensusMismatchError(RuntimeError):
    """A recomputed census record disagrees with the stored one."""


@dataclass(frozen=True)
class EnumTask:
    """One enumeration job: ground size, constraint profile, and mode."""

    n: int
    profile: ConstraintProfile
    mode: str = "count"
    parallel_split_depth: Optional[int] = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")
        if self.mode not in ("count", "max", "list"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.parallel_split_depth is not None and not (
            0 <= self.parallel_split_depth <= self.n
        ):
            raise ValueError("parallel_split_depth must lie in [0, n]")


@dataclass(frozen=True)
class MaxResult:
    size: int
    num_witnesses: int
    witnesses: tuple[IntSet, ...]


@dataclass(frozen=True)
class StreamSummary:
    visited: int
    aborted: bool


@dataclass(frozen=True)
class CensusRecord:
    n: int
    profile_id: str
    count: int
    max_size: int
    num_max_witnesses: int
    sample_witnesses: tuple[IntSet, ...]
    engine_version: str
    wall_time_ms: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "profile_id": self.profile_id,
            "count": self.count,
            "max_size": self.max_size,
            "num_max_witnesses": self.num_max_witnesses,
            "sample_witnesses": [w.to_json() for w in self.sample_witnesses],
            "engine_version": self.engine_version,
            "wall_time_ms": self.wall_time_ms,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CensusRecord":
        return cls(
            n=data["n"],
            profile_id=data["profile_id"],
            count=data["count"],
            max_size=data["max_size"],
            num_max_witnesses=data["num_max_witnesses"],
            sample_witnesses=tuple(IntSet.from_json(w) for w in data["sample_witnesses"]),
            engine_version=data["engine_version"],
            wall_time_ms=data["wall_time_ms"],
        )


# ---------------------------------------------------------------------------
# incremental constraint state
#
# For a full-closure profile the state is a single bitmask of reachable sums
# in [0, F].  For a layer profile it is a tuple (d0, ..., dK) where dj holds
# the j-fold sums of the chosen set, repetition allowed, clipped to [0, F].
# Both updates are exact under clipping because all elements are positive.


def _initial_state(profile: ConstraintProfile):
    if profile.layers is None:
        return 1
    return (1,) + (0,) * max(profile.layers)


def _advance(state, c: int, capmask: int, fbit: int, layers):
    """Constraint state after adding element c, or None if the forbidden
    value becomes reachable (the candidate is then inadmissible)."""
    if layers is None:
        sums = state
        shift = c
        while True:
            grown = sums | ((sums << shift) & capmask)
            if grown == sums:
                break
            sums = grown
            shift <<= 1
        if sums & fbit:
            return None
        return sums
    new = [state[0]]
    for j in range(1, len(state)):
        new.append(state[j] | ((new[j - 1] << c) & capmask))
    for k in layers:
        if new[k] & fbit:
            return None
    return tuple(new)


def _search(
    n: int,
    profile: ConstraintProfile,
    mode: str,
    *,
    start_idx: int = 0,
    chosen: int = 0,
    banned: int = 0,
    state=None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    sink: Optional[Callable[[IntSet], Optional[bool]]] = None,
    witness_cap: Optional[int] = None,
):
    """Serial depth-first search from a given decision prefix.

    Returns mode-dependent results; the prefix itself (the current chosen
    set) is included.  Assumes the prefix is admissible.
    """
    cands = range(n, 0, -1)
    total_cands = n
    fsum = profile.forbidden_sum
    fbit = 1 << fsum
    capmask = (1 << (fsum + 1)) - 1
    layers = profile.layers
    require_sf = profile.require_sum_free
    if state is None:
        state = _initial_state(profile)
    nodes = 0

    if mode == "count":
        def walk_count(idx: int, chosen_mask: int, banned_mask: int, st) -> int:
            nonlocal nodes
            total = 1
            for i in range(idx, total_cands):
                nodes += 1
                if nodes > node_budget:
                    raise NodeBudgetExceeded(f"node budget {node_budget} exceeded")
                c = n - i
                if require_sf and (banned_mask >> c) & 1:
                    continue
                nst = _advance(st, c, capmask, fbit, layers)
                if nst is None:
                    continue
                nbanned = banned_mask
                if require_sf:
                    nbanned |= chosen_mask >> c
                    if not c & 1:
                        nbanned |= 1 << (c >> 1)
                total += walk_count(i + 1, chosen_mask | (1 << c), nbanned, nst)
            return total

        return walk_count(start_idx, chosen, banned, state)

    if mode == "max":
        best = -1
        num = 0
        witnesses: list[int] = []

        def walk_max(idx: int, size: int, chosen_mask: int, banned_mask: int, st) -> None:
            nonlocal nodes, best, num, witnesses
            if size > best:
                best, num, witnesses = size, 1, [chosen_mask]
            elif size == best:
                num += 1
                if witness_cap is None or len(witnesses) < witness_cap:
                    witnesses.append(chosen_mask)
            for i in range(idx, total_cands):
                if size + (total_cands - i) < best:
                    break
                nodes += 1
                if nodes > node_budget:
                    raise NodeBudgetExceeded(f"node budget {node_budget} exceeded")
                c = n - i
                if require_sf and (banned_mask >> c) & 1:
                    continue
                nst = _advance(st, c, capmask, fbit, layers)
                if nst is None:
                    continue
                nbanned = banned_mask
                if require_sf:
                    nbanned |= chosen_mask >> c
                    if not c & 1:
                        nbanned |= 1 << (c >> 1)
                walk_max(i + 1, size + 1, chosen_mask | (1 << c), nbanned, nst)

        walk_max(start_idx, chosen.bit_count(), chosen, banned, state)
        return best, num, witnesses

    # mode == "list"
    visited = 0
    aborted = False

    class _SinkAbort(Exception):
        pass

    def walk_list(idx: int, chosen_mask: int, banned_mask: int, st) -> None:
        nonlocal nodes, visited
        visited += 1
        if sink(IntSet.from_mask(chosen_mask, lo=1, hi=max(n, 1))) is False:
            raise _SinkAbort
        for i in range(idx, total_cands):
            nodes += 1
            if nodes > node_budget:
                raise NodeBudgetExceeded(f"node budget {node_budget} exceeded")
            c = n - i
            if require_sf and (banned_mask >> c) & 1:
                continue
            nst = _advance(st, c, capmask, fbit, layers)
            if nst is None:
                continue
            nbanned = banned_mask
            if require_sf:
                nbanned |= chosen_mask >> c
                if not c & 1:
                    nbanned |= 1 << (c >> 1)
            walk_list(i + 1, chosen_mask | (1 << c), nbanned, nst)

    try:
        walk_list(start_idx, chosen, banned, state)
    except _SinkAbort:
        aborted = True
    return StreamSummary(visited=visited, aborted=aborted)


# ---------------------------------------------------------------------------
# parallel splitting


def _collect_prefixes(n: int, profile: ConstraintProfile, depth: int):
    """All admissible decision prefixes over the ``depth`` largest elements,
    each with its derived constraint state.  Deterministic order."""
    fsum = profile.forbidden_sum
    fbit = 1 << fsum
    capmask = (1 << (fsum + 1)) - 1
    layers = profile.layers
    require_sf = profile.require_sum_free
    out = []

    def walk(idx: int, chosen: int, banned: int, st) -> None:
        if idx == depth:
            out.append((chosen, banned, st))
            return
        c = n - idx
        nst = None
        if not (require_sf and (banned >> c) & 1):
            nst = _advance(st, c, capmask, fbit, layers)
        if nst is not None:
            nbanned = banned
            if require_sf:
                nbanned |= chosen >> c
                if not c & 1:
                    nbanned |= 1 << (c >> 1)
            walk(idx + 1, chosen | (1 << c), nbanned, nst)
        walk(idx + 1, chosen, banned, st)

    walk(0, 0, 0, _initial_state(profile))
    return out


def _count_subtask(args):
    n, profile, depth, chosen, banned, state, budget = args
    return _search(
        n, profile, "count",
        start_idx=depth, chosen=chosen, banned=banned, state=state, node_budget=budget,
    )


def _max_subtask(args):
    n, profile, depth, chosen, banned, state, budget = args
    return _search(
        n, profile, "max",
        start_idx=depth, chosen=chosen, banned=banned, state=state, node_budget=budget,
    )


def _split_depth(task: EnumTask) -> int:
    if task.parallel_split_depth is not None:
        return task.parallel_split_depth
    return min(task.n, 6)


def _run_parallel(task: EnumTask, workers: int, node_budget: int, subtask):
    depth = _split_depth(task)
    prefixes = _collect_prefixes(task.n, task.profile, depth)
    args = [
        (task.n, task.profile, depth, chosen, banned, state, node_budget)
        for chosen, banned, state in prefixes
    ]
    if not args:
        return []
    with get_context("fork").Pool(processes=workers) as pool:
        return pool.map(subtask, args)


# ---------------------------------------------------------------------------
# public operations


def _check_root(task: EnumTask) -> bool:
    return satisfies(IntSet((), lo=1, hi=max(task.n, 1)), task.profile)


def count_admissible(
    task: EnumTask, *, workers: int = 1, node_budget: int = DEFAULT_NODE_BUDGET
) -> int:
    """Exact number of subsets of [1, n] satisfying the profile, the empty
    set included.  Raises :class:`NodeBudgetExceeded` rather than returning a
    partial count.  In parallel runs the budget applies to each subtask."""
    if task.mode != "count":
        raise ValueError("task.mode must be 'count'")
    if not _check_root(task):
        return 0
    if workers > 1 and task.n > 0:
        return sum(_run_parallel(task, workers, node_budget, _count_subtask))
    return _search(task.n, task.profile, "count", node_budget=node_budget)


def max_admissible(
    task: EnumTask,
    *,
    workers: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
    witness_cap: Optional[int] = None,
) -> MaxResult:
    """Maximum cardinality over admissible sets, with every maximum witness
    (or a cap-limited sample).  Size -1 with no witnesses means no admissible
    set exists (possible only for profiles that exclude the empty set)."""
    if task.mode != "max":
        raise ValueError("task.mode must be 'max'")
    if not _check_root(task):
        return MaxResult(-1, 0, ())
    if workers > 1 and task.n > 0:
        parts = _run_parallel(task, workers, node_budget, _max_subtask)
        best = max(p[0] for p in parts)
        num = sum(p[1] for p in parts if p[0] == best)
        masks = sorted(m for p in parts if p[0] == best for m in p[2])
    else:
        best, num, masks = _search(
            task.n, task.profile, "max", node_budget=node_budget, witness_cap=witness_cap
        )
        masks = sorted(masks)
    if witness_cap is not None:
        masks = masks[:witness_cap]
    ground_hi = max(task.n, 1)
    return MaxResult(best, num, tuple(IntSet.from_mask(m, lo=1, hi=ground_hi) for m in masks))


def enumerate_admissible(
    task: EnumTask,
    sink: Callable[[IntSet], Optional[bool]],
    *,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> StreamSummary:
    """Feed every admissible set to ``sink`` exactly once, depth-first: a set
    is delivered before its extensions, and extensions are explored in
    decreasing order of the added element (so for n = 3 the unconstrained
    order is {}, {3}, {3,2}, {3,2,1}, {3,1}, {2}, {2,1}, {1}).

    The sink may return False to abort; the summary then reports a partial
    visit.  Delivery is single-threaded.
    """
    if task.mode != "list":
        raise ValueError("task.mode must be 'list'")
    if not _check_root(task):
        return StreamSummary(visited=0, aborted=False)
    return _search(task.n, task.profile, "list", node_budget=node_budget, sink=sink)


def census(
    n_lo: int,
    n_hi: int,
    profile_id: str,
    store=None,
    *,
    workers: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
    sample_cap: int = 3,
) -> list[CensusRecord]:
    """One :class:`CensusRecord` per n in [n_lo, n_hi] for a registry profile.

    With a results store, a record that already exists is compared field by
    field and a disagreement raises :class:`CensusMismatchError`; fresh
    records are appended.  The profile is named (not passed as a value)
    because its forbidden sum depends on n.
    """
    records = []
    for n in range(n_lo, n_hi + 1):
        profile = profile_for(profile_id, n)
        started = time.perf_counter()
        count = count_admissible(
            EnumTask(n, profile, "count"), workers=workers, node_budget=node_budget
        )
        mres = max_admissible(
            EnumTask(n, profile, "max"), workers=workers, node_budget=node_budget
        )
        elapsed_ms = int((time.perf_counter() - started) * 1000)
        sample = mres.witnesses[:sample_cap]
        record = CensusRecord(
            n=n,
            profile_id=profile_id,
            count=count,
            max_size=max(mres.size, 0),
            num_max_witnesses=mres.num_witnesses,
            sample_witnesses=sample,
            engine_version=ENGINE_VERSION,
            wall_time_ms=elapsed_ms,
        )
        _validate_record(record)
        if store is not None:
            existing = store.find_census(n, profile_id)
            if existing is None:
                store.append_census(record)
            else:
                _compare_records(existing, record)
        records.append(record)
    return records


def _validate_record(record: CensusRecord) -> None:
    for w in record.sample_witnesses:
        if len(w) != record.max_size:
            raise AssertionError(f"witness {w} inconsistent with max_size {record.max_size}")
    if record.profile_id == "sf-sigma-2n1" and record.n >= 1:
        floor_bound = 1 << ((record.n + 1) // 3)
        if record.count < floor_bound:
            raise AssertionError(
                f"count {record.count} below the witness-interval bound {floor_bound}"
            )


def _compare_records(stored: CensusRecord, fresh: CensusRecord) -> None:
    mismatches = []
    for name in ("count", "max_size", "num_max_witnesses"):
        if getattr(stored, name) != getattr(fresh, name):
            mismatches.append(f"{name}: stored {getattr(stored, name)} != {getattr(fresh, name)}")
    if mismatches:
        raise CensusMismatchError(
            f"census mismatch for n={fresh.n} profile={fresh.profile_id}: " + "; ".join(mismatches)
        )
