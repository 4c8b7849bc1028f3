"""Numba kernels for the cascade Monte Carlo.

Randomness: every Bernoulli decision derives from a keyed hash of
(run_key, channel), where a channel is one (client node, product) pair of
the compiled network. A channel carries a single uniform for the whole run
and fires via inverse-CDF against its accumulated per-round hazard, which
(a) reproduces the round-Bernoulli law exactly, (b) shares uniforms across
propagation probabilities (common random numbers), and (c) makes results
independent of thread count and chunking; `rngkit` holds the reference
implementation of the hash.

Scratch state is reset between runs through touched lists, so per-run cost
scales with cascade size, not network size.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

_MASK = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / (1 << 53)

SLOT_SALT = np.uint64(1) << np.uint64(40)


@njit(cache=True, inline="always")
def _mix64(z):
    z = z & _MASK
    z = ((z ^ (z >> np.uint64(30))) * _M1) & _MASK
    z = ((z ^ (z >> np.uint64(27))) * _M2) & _MASK
    return z ^ (z >> np.uint64(31))


@njit(cache=True, inline="always")
def _combine(key, part):
    return _mix64(key ^ _mix64(part + _GOLDEN))


@njit(cache=True, inline="always")
def _uniform(key):
    return np.float64(key >> np.uint64(11)) * _INV53


@njit(cache=True)
def _cascade_one(
    out_ptr,
    out_dst,
    edge_slot_ptr,
    edge_slot,
    vslot_ptr,
    slot_D,
    p,
    init_nodes,
    run_key,
    status,
    slot_inact,
    slot_F,
    slot_mark,
    node_mark,
    touched_nodes,
    touched_slots,
    exposed,
    frontier,
    nextfront,
    counts,
    tick,
):
    """One cascade; returns (final_inactive, rounds, tick).

    Rounds are synchronous: all exposures triggered by the previous round's
    falls are evaluated against the same status snapshot, then the new
    falls are applied simultaneously. A round counts when it evaluated at
    least one exposed client.
    """
    ntouched = 0
    nfront = 0
    for ii in range(init_nodes.shape[0]):
        v = init_nodes[ii]
        if status[v] == 1:
            status[v] = 0
            touched_nodes[ntouched] = v
            ntouched += 1
            frontier[nfront] = v
            nfront += 1
    nts = 0
    rounds = 0

    while nfront > 0:
        tick += 1
        nexposed = 0
        # Phase 1: count the new falls into the per-channel inactive
        # tallies and mark the channels to evaluate this round.
        for fi in range(nfront):
            j = frontier[fi]
            for e in range(out_ptr[j], out_ptr[j + 1]):
                v = out_dst[e]
                if status[v] == 0:
                    continue
                if node_mark[v] != tick:
                    node_mark[v] = tick
                    exposed[nexposed] = v
                    nexposed += 1
                for si in range(edge_slot_ptr[e], edge_slot_ptr[e + 1]):
                    slot = edge_slot[si]
                    if slot_inact[slot] == 0:
                        touched_slots[nts] = slot
                        nts += 1
                    slot_inact[slot] += 1
                    if slot_mark[slot] != tick:
                        slot_mark[slot] = tick
        if nexposed == 0:
            break
        rounds += 1
        # Phase 2: evaluate every exposed client against its marked
        # channels; draws are simultaneous (status untouched until the end
        # of the round).
        nnew = 0
        for k in range(nexposed):
            v = exposed[k]
            fell = False
            for slot in range(vslot_ptr[v], vslot_ptr[v + 1]):
                if slot_mark[slot] != tick:
                    continue
                hazard = p * slot_inact[slot] / slot_D[slot]
                f0 = slot_F[slot]
                f1 = f0 + (1.0 - f0) * hazard
                slot_F[slot] = f1
                w = _uniform(_combine(run_key, SLOT_SALT + np.uint64(slot)))
                if w < f1:
                    fell = True
                    break  # v is gone; its remaining channels are moot
            if fell:
                nextfront[nnew] = v
                nnew += 1
        for k in range(nnew):
            v = nextfront[k]
            status[v] = 0
            touched_nodes[ntouched] = v
            ntouched += 1
        buf = frontier
        frontier = nextfront
        nextfront = buf
        nfront = nnew

    final = ntouched
    for i in range(ntouched):
        counts[touched_nodes[i]] += 1
        status[touched_nodes[i]] = 1
    for i in range(nts):
        slot_inact[touched_slots[i]] = 0
        slot_F[touched_slots[i]] = 0.0
    return final, rounds, tick


@njit(cache=True, parallel=True)
def cascade_batch(
    out_ptr,
    out_dst,
    edge_slot_ptr,
    edge_slot,
    vslot_ptr,
    slot_D,
    p,
    init_nodes,
    run_keys,
    n_chunks,
):
    """Run one cascade per (init_nodes[r], run_keys[r]).

    Returns (final_inactive[r], rounds[r], inactivation counts per node).
    Results are byte-identical for any n_chunks / thread count because all
    draws are keyed per run.
    """
    n = vslot_ptr.shape[0] - 1
    nslots = slot_D.shape[0]
    nruns = init_nodes.shape[0]
    final = np.zeros(nruns, dtype=np.int64)
    rounds = np.zeros(nruns, dtype=np.int64)
    counts = np.zeros((n_chunks, n), dtype=np.int64)
    for c in prange(n_chunks):
        lo = nruns * c // n_chunks
        hi = nruns * (c + 1) // n_chunks
        if hi > lo:
            status = np.ones(n, dtype=np.uint8)
            slot_inact = np.zeros(nslots, dtype=np.int64)
            slot_F = np.zeros(nslots, dtype=np.float64)
            slot_mark = np.zeros(nslots, dtype=np.int64)
            node_mark = np.zeros(n, dtype=np.int64)
            touched_nodes = np.empty(n, dtype=np.int64)
            touched_slots = np.empty(nslots, dtype=np.int64)
            exposed = np.empty(n, dtype=np.int64)
            fra = np.empty(n, dtype=np.int64)
            frb = np.empty(n, dtype=np.int64)
            one = np.empty(1, dtype=np.int64)
            tick = 0
            for r in range(lo, hi):
                one[0] = init_nodes[r]
                f, rd, tick = _cascade_one(
                    out_ptr,
                    out_dst,
                    edge_slot_ptr,
                    edge_slot,
                    vslot_ptr,
                    slot_D,
                    p,
                    one,
                    run_keys[r],
                    status,
                    slot_inact,
                    slot_F,
                    slot_mark,
                    node_mark,
                    touched_nodes,
                    touched_slots,
                    exposed,
                    fra,
                    frb,
                    counts[c],
                    tick,
                )
                final[r] = f
                rounds[r] = rd
    return final, rounds, counts.sum(axis=0)


@njit(cache=True)
def cascade_single(
    out_ptr,
    out_dst,
    edge_slot_ptr,
    edge_slot,
    vslot_ptr,
    slot_D,
    p,
    init_nodes,
    run_key,
):
    """One cascade with a (possibly multi-node) initial shock set.

    Returns (final_inactive, rounds, inactive mask over nodes).
    """
    n = vslot_ptr.shape[0] - 1
    nslots = slot_D.shape[0]
    status = np.ones(n, dtype=np.uint8)
    slot_inact = np.zeros(nslots, dtype=np.int64)
    slot_F = np.zeros(nslots, dtype=np.float64)
    slot_mark = np.zeros(nslots, dtype=np.int64)
    node_mark = np.zeros(n, dtype=np.int64)
    touched_nodes = np.empty(n, dtype=np.int64)
    touched_slots = np.empty(nslots, dtype=np.int64)
    exposed = np.empty(n, dtype=np.int64)
    fra = np.empty(n, dtype=np.int64)
    frb = np.empty(n, dtype=np.int64)
    counts = np.zeros(n, dtype=np.int64)
    f, rd, _ = _cascade_one(
        out_ptr,
        out_dst,
        edge_slot_ptr,
        edge_slot,
        vslot_ptr,
        slot_D,
        p,
        init_nodes,
        run_key,
        status,
        slot_inact,
        slot_F,
        slot_mark,
        node_mark,
        touched_nodes,
        touched_slots,
        exposed,
        fra,
        frb,
        counts,
        0,
    )
    return f, rd, counts > 0
