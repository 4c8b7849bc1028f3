"""Set cover with groups and priorities.

One instance selects supplier establishments for a single client
establishment: the universe is the set of required input products, each
candidate is a supplier establishment offering some of them, candidates are
grouped by their firm, and at least one candidate per group must be chosen
(a firm link implies at least one transaction). Choosing a candidate
decreases the priority value of its group mates by one, and lower priority
values win ties, so subsequent selections gravitate toward firms that
already supply something.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class CoverSizeError(ValueError):
    """Instance too large for the exhaustive solver."""


@dataclass(frozen=True)
class Candidate:
    id: int
    group: int
    offer: frozenset[int]


@dataclass
class CoverInstance:
    universe: frozenset[int]
    candidates: list[Candidate]
    priorities: dict[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        ids = [c.id for c in self.candidates]
        if len(ids) != len(set(ids)):
            raise ValueError("duplicate candidate ids in cover instance")
        # offers are clipped to the universe on construction
        self.candidates = [
            Candidate(c.id, c.group, c.offer & self.universe)
            for c in self.candidates
        ]

    def groups(self) -> list[int]:
        return sorted({c.group for c in self.candidates})


@dataclass(frozen=True)
class CoverSolution:
    chosen: frozenset[int]
    uncovered: frozenset[int]


def _choose(
    cand: Candidate,
    by_group: dict[int, list[Candidate]],
    priorities: dict[int, int],
    chosen: set[int],
) -> None:
    chosen.add(cand.id)
    for mate in by_group[cand.group]:
        if mate.id != cand.id:
            priorities[mate.id] = priorities.get(mate.id, 0) - 1


def solve_greedy(instance: CoverInstance) -> CoverSolution:
    """Greedy cover, then group repair.

    Covering phase: repeatedly take the candidate covering the most
    still-uncovered elements, ties broken by (priority value, id), both
    ascending. Repair phase: every group left without a chosen candidate
    contributes the member with the largest overlap with the original
    universe, same tie-break. The instance's priority map is mutated in
    place so callers can share it across instances.
    """
    priorities = instance.priorities
    by_group: dict[int, list[Candidate]] = {}
    for c in instance.candidates:
        by_group.setdefault(c.group, []).append(c)

    uncovered = set(instance.universe)
    chosen: set[int] = set()
    while True:
        best = None
        best_key = None
        for c in instance.candidates:
            if c.id in chosen:
                continue
            gain = len(c.offer & uncovered)
            if gain == 0:
                continue
            key = (-gain, priorities.get(c.id, 0), c.id)
            if best_key is None or key < best_key:
                best, best_key = c, key
        if best is None:
            break
        _choose(best, by_group, priorities, chosen)
        uncovered -= best.offer

    covered_groups = {c.group for c in instance.candidates if c.id in chosen}
    for g in instance.groups():
        if g in covered_groups:
            continue
        best = None
        best_key = None
        for c in by_group[g]:
            key = (-len(c.offer & instance.universe), priorities.get(c.id, 0), c.id)
            if best_key is None or key < best_key:
                best, best_key = c, key
        assert best is not None  # every group has >= 1 candidate
        _choose(best, by_group, priorities, chosen)

    return CoverSolution(chosen=frozenset(chosen), uncovered=frozenset(uncovered))


def solve_exact(instance: CoverInstance) -> CoverSolution:
    """Minimum-cardinality group-feasible cover by exhaustive search.

    Test oracle only: candidates are capped at 20. Among minimum covers the
    lexicographically smallest sorted id sequence wins. The priority map is
    left untouched.
    """
    m = len(instance.candidates)
    if m > 20:
        raise CoverSizeError(f"{m} candidates exceed the exhaustive-search cap of 20")
    if len(instance.universe) > 64:
        raise CoverSizeError("universe exceeds the 64-element bitmask cap")
    cands = sorted(instance.candidates, key=lambda c: c.id)
    elements = sorted(instance.universe)
    e_index = {e: i for i, e in enumerate(elements)}
    offer_mask = np.zeros(m, dtype=np.uint64)
    for i, c in enumerate(cands):
        bits = 0
        for e in c.offer:
            bits |= 1 << e_index[e]
        offer_mask[i] = bits
    groups = instance.groups()
    g_index = {g: i for i, g in enumerate(groups)}
    group_mask = np.zeros(m, dtype=np.uint64)
    for i, c in enumerate(cands):
        group_mask[i] = 1 << g_index[c.group]

    coverable = np.uint64(0)
    for bm in offer_mask:
        coverable |= bm
    all_groups = np.uint64((1 << len(groups)) - 1)

    if m == 0:
        return CoverSolution(chosen=frozenset(), uncovered=instance.universe)

    n_sub = 1 << m
    cov = np.zeros(n_sub, dtype=np.uint64)
    grp = np.zeros(n_sub, dtype=np.uint64)
    for s in range(1, n_sub):
        low = s & -s
        rest = s ^ low
        b = low.bit_length() - 1
        cov[s] = cov[rest] | offer_mask[b]
        grp[s] = grp[rest] | group_mask[b]
    feasible = (cov == coverable) & (grp == all_groups)
    sizes = np.bitwise_count(np.arange(n_sub, dtype=np.uint64)).astype(np.int64)
    sizes_f = np.where(feasible, sizes, np.iinfo(np.int64).max)
    best_size = int(sizes_f.min())
    best_sets = np.nonzero(feasible & (sizes == best_size))[0]
    best_ids = min(
        tuple(cands[b].id for b in range(m) if s & (1 << b)) for s in best_sets
    )
    uncovered = frozenset(
        e for e in instance.universe if not (coverable >> np.uint64(e_index[e])) & np.uint64(1)
    )
    return CoverSolution(chosen=frozenset(best_ids), uncovered=uncovered)
