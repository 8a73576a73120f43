"""Independent cascade simulation and the exhaustive live-graph oracle.

Two routes to the same distribution live here.  :func:`simulate_ic` runs the
step-wise cascade, sampling each arc out of a newly active node toward a
still-inactive target exactly once.  :func:`enumerate_live_graphs` expands all
2^m arc subsets with their generation probabilities; diffusion outcome on a
live graph is plain reachability.  Tests hold the two routes against each
other, so keep them independent.

The Monte Carlo sampler used by the estimators supports two arc-sampling
strategies with identical outcome distributions: per-arc Bernoulli draws, and
geometric gaps between successes for uniform-probability graphs (one draw per
success instead of one per arc, which is what makes the experiment protocol
affordable at small probabilities).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log

from .graph import SocialGraph

__all__ = [
    "DiffusionTrace",
    "PartialObservation",
    "LiveGraph",
    "simulate_ic",
    "observe_until",
    "enumerate_live_graphs",
    "reachable_set",
]

# geometric gap sampling beats per-arc draws only when successes are sparse
GEOMETRIC_P_CUTOFF = 0.25


@dataclass(frozen=True)
class DiffusionTrace:
    """Step-wise cascade outcome; ``steps[t]`` holds nodes activated at time t."""

    steps: tuple
    final_active: frozenset


@dataclass(frozen=True)
class PartialObservation:
    """Activation status after watching a cascade up to a step horizon."""

    horizon: int
    already_active: frozenset
    newly_active: frozenset


@dataclass(frozen=True)
class LiveGraph:
    """One world realization: indices of kept arcs and its probability."""

    kept_arcs: frozenset
    generation_probability: float


def _check_seeds(g: SocialGraph, seeds):
    out = sorted(set(seeds))
    for u in out:
        if not g.has_node(u):
            raise ValueError(f"seed {u!r} is not a node of this graph")
    return out


def simulate_ic(g: SocialGraph, seeds, rng, horizon=None) -> DiffusionTrace:
    """Run one independent cascade from ``seeds``, drawing arcs lazily.

    Each arc from a newly active node to an inactive target is sampled exactly
    once with its probability.  Newly active nodes fire in ascending id order
    and their out-arcs in adjacency order, so a given stream always reproduces
    the same trace.  ``horizon`` bounds the number of diffusion steps after
    seeding; ``None`` runs to fixpoint.
    """
    frontier = _check_seeds(g, seeds)
    offsets, targets, probs, _ = g._engine()
    state = bytearray(g._blocked_template())
    for s in frontier:
        state[s] = 1
    steps = [frozenset(frontier)]
    rand = rng.random
    t = 0
    while frontier and (horizon is None or t < horizon):
        nxt = []
        for u in frontier:
            for i in range(offsets[u], offsets[u + 1]):
                v = targets[i]
                if not state[v] and rand() < probs[i]:
                    state[v] = 1
                    nxt.append(v)
        if not nxt:
            break
        nxt.sort()
        steps.append(frozenset(nxt))
        frontier = nxt
        t += 1
    final = frozenset().union(*steps)
    return DiffusionTrace(tuple(steps), final)


def observe_until(g: SocialGraph, seeds, d: int, rng) -> PartialObservation:
    """Watch a cascade for ``d`` steps; report everyone active and the step-d frontier."""
    if d < 0:
        raise ValueError(f"observation step must be >= 0, got {d}")
    trace = simulate_ic(g, seeds, rng, horizon=d)
    newly = trace.steps[d] if len(trace.steps) > d else frozenset()
    return PartialObservation(d, trace.final_active, newly)


def enumerate_live_graphs(g: SocialGraph, enumeration_limit: int = 20):
    """Yield all 2^m live graphs of ``g`` with generation probabilities.

    Oracle-only: refuses graphs above ``enumeration_limit`` arcs.  Arc indices
    refer to positions in ``g.arc_list()``.
    """
    arcs = g.arc_list()
    m = len(arcs)
    if m > enumeration_limit:
        raise ValueError(
            f"graph has {m} arcs, above the enumeration limit {enumeration_limit}"
        )
    arc_probs = [p for _, _, p in arcs]
    for mask in range(1 << m):
        prob = 1.0
        kept = []
        for i, p in enumerate(arc_probs):
            if mask >> i & 1:
                prob *= p
                kept.append(i)
            else:
                prob *= 1.0 - p
        yield LiveGraph(frozenset(kept), prob)


def reachable_set(live: LiveGraph, g: SocialGraph, seeds) -> frozenset:
    """Nodes reachable from ``seeds`` using only the live graph's kept arcs."""
    seed_list = _check_seeds(g, seeds)
    arcs = g.arc_list()
    adj = {}
    for i in live.kept_arcs:
        u, v, _ = arcs[i]
        adj.setdefault(u, []).append(v)
    active = set(seed_list)
    stack = list(seed_list)
    while stack:
        u = stack.pop()
        for v in adj.get(u, ()):
            if v not in active:
                active.add(v)
                stack.append(v)
    return frozenset(active)


# -- mask-based oracle internals (shared by the exact estimators) -------------


def _arc_index_out(arcs, n):
    """Arc indices grouped by source node, in adjacency order."""
    out = [[] for _ in range(n)]
    for i, (u, _, _) in enumerate(arcs):
        out[u].append(i)
    return out


def _mask_reach(out_idx, arc_targets, mask, seeds):
    """Reachable set from ``seeds`` over arcs whose bit is set in ``mask``."""
    active = set(seeds)
    stack = list(seeds)
    while stack:
        u = stack.pop()
        for i in out_idx[u]:
            if mask >> i & 1:
                v = arc_targets[i]
                if v not in active:
                    active.add(v)
                    stack.append(v)
    return active


# -- Monte Carlo sampling core -------------------------------------------------


def _pick_mode(g: SocialGraph, mode: str) -> str:
    if mode != "auto":
        return mode
    _, _, _, uniform_p = g._engine()
    if uniform_p is not None and uniform_p < GEOMETRIC_P_CUTOFF:
        return "geometric"
    return "bernoulli"


def _gain_samples(g: SocialGraph, value, active0, replications, rnd, mode="auto"):
    """Per-replication sum of ``value[v]`` over nodes activated beyond ``active0``.

    ``active0`` is the sorted initial active set (already validated); ``value``
    is a dense per-node payoff table with zeros outside the measurement
    universe.  Returns a list of ``replications`` floats.
    """
    if not active0:
        return [0.0] * replications
    mode = _pick_mode(g, mode)
    offsets, targets, probs, uniform_p = g._engine()
    template = bytearray(g._blocked_template())
    for s in active0:
        template[s] = 1
    samples = []
    append = samples.append
    rand = rnd.random

    if mode == "geometric":
        if uniform_p is None or uniform_p >= 1.0:
            raise ValueError("geometric sampling requires a uniform probability below 1")
        inv_log_q = 1.0 / log(1.0 - uniform_p)
        for _ in range(replications):
            state = template[:]
            frontier = active0
            gain = 0.0
            while frontier:
                nxt = []
                need = int(log(1.0 - rand()) * inv_log_q)
                for u in frontier:
                    i = offsets[u] + need
                    end = offsets[u + 1]
                    while i < end:
                        v = targets[i]
                        if not state[v]:
                            state[v] = 1
                            nxt.append(v)
                            gain += value[v]
                        i += 1 + int(log(1.0 - rand()) * inv_log_q)
                    need = i - end
                nxt.sort()
                frontier = nxt
            append(gain)
    elif mode == "bernoulli":
        for _ in range(replications):
            state = template[:]
            frontier = active0
            gain = 0.0
            while frontier:
                nxt = []
                for u in frontier:
                    for i in range(offsets[u], offsets[u + 1]):
                        v = targets[i]
                        if not state[v] and rand() < probs[i]:
                            state[v] = 1
                            nxt.append(v)
                            gain += value[v]
                nxt.sort()
                frontier = nxt
            append(gain)
    else:
        raise ValueError(f"unknown sampling mode {mode!r}")
    return samples
