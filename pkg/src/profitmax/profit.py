"""Influence, benefit, and profit estimation: Monte Carlo and exact.

Benefit of a seed set is the expected sum of benefit values over all nodes the
cascade reaches (seeds included); profit subtracts the incentive cost of the
priced seeds.  Every quantity comes in two flavors: a Monte Carlo estimate
with standard error, and an exact expectation by live-graph enumeration for
small graphs.  The exact route exists to check the sampled one and is never
used inside selection loops.

``free_seeds`` are nodes that start the cascade without being paid for; the
phase-two protocol uses them for organically activated frontiers.  A
``universe`` restricts which nodes' benefits are counted, without changing
diffusion dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import fsum, sqrt

from .diffusion import _arc_index_out, _check_seeds, _gain_samples, _mask_reach
from .graph import NodeEconomics, SocialGraph, seed_cost

__all__ = [
    "ProfitEstimate",
    "EstimatorConfig",
    "estimate_influence",
    "estimate_benefit",
    "estimate_profit",
    "exact_benefit",
    "exact_profit",
    "marginal_profit_gain",
]


@dataclass(frozen=True)
class ProfitEstimate:
    """Monte Carlo estimate with its standard error and replication count."""

    mean: float
    std_error: float
    replications: int


@dataclass(frozen=True)
class EstimatorConfig:
    replications: int = 100
    enumeration_limit: int = 20
    common_random_numbers: bool = True

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be >= 1")


def _value_table(g: SocialGraph, econ: NodeEconomics, universe):
    if universe is None:
        return [float(b) for b in econ.benefit]
    members = set(universe)
    for u in members:
        if not 0 <= u < g.base_node_count:
            raise ValueError(f"universe node {u!r} is outside the graph")
    return [float(b) if u in members else 0.0 for u, b in enumerate(econ.benefit)]


def _initial_active(g, seeds, free_seeds):
    seed_list = _check_seeds(g, seeds)
    free_list = _check_seeds(g, free_seeds)
    return seed_list, sorted(set(seed_list) | set(free_list))


def _from_samples(const: float, samples) -> ProfitEstimate:
    r = len(samples)
    mean_extra = fsum(samples) / r
    if r > 1:
        var = fsum((x - mean_extra) ** 2 for x in samples) / (r - 1)
        se = sqrt(var / r)
    else:
        se = 0.0
    return ProfitEstimate(const + mean_extra, se, r)


def estimate_influence(g: SocialGraph, seeds, cfg: EstimatorConfig, rng) -> ProfitEstimate:
    """Expected number of nodes active at fixpoint; exactly 0 for no seeds."""
    _, initial = _initial_active(g, seeds, ())
    ones = [1.0] * g.base_node_count
    samples = _gain_samples(g, ones, initial, cfg.replications, rng)
    return _from_samples(float(len(initial)), samples)


def estimate_benefit(g: SocialGraph, econ: NodeEconomics, seeds, cfg: EstimatorConfig,
                     rng, universe=None, free_seeds=()) -> ProfitEstimate:
    """Expected benefit mass reached by the cascade, counted inside ``universe``."""
    econ.check_covers(g)
    _, initial = _initial_active(g, seeds, free_seeds)
    value = _value_table(g, econ, universe)
    const = fsum(value[s] for s in initial)
    samples = _gain_samples(g, value, initial, cfg.replications, rng)
    return _from_samples(const, samples)


def estimate_profit(g: SocialGraph, econ: NodeEconomics, seeds, cfg: EstimatorConfig,
                    rng, universe=None, free_seeds=()) -> ProfitEstimate:
    """Benefit estimate minus the cost of the priced seeds.

    Only ``seeds`` are paid for; ``free_seeds`` diffuse for free.  The mean
    satisfies ``estimate_profit(...).mean + seed_cost(econ, seeds) ==
    estimate_benefit(...).mean`` for identical streams.
    """
    econ.check_covers(g)
    seed_list, initial = _initial_active(g, seeds, free_seeds)
    value = _value_table(g, econ, universe)
    const = fsum(value[s] for s in initial) - seed_cost(econ, seed_list)
    samples = _gain_samples(g, value, initial, cfg.replications, rng)
    return _from_samples(const, samples)


def exact_benefit(g: SocialGraph, econ: NodeEconomics, seeds, universe=None,
                  enumeration_limit: int = 20, free_seeds=()) -> float:
    """Exact expected benefit by summing over every live graph.

    Refuses graphs above ``enumeration_limit`` arcs; this is the oracle side
    of the estimator checks, not a production path.
    """
    econ.check_covers(g)
    _, initial = _initial_active(g, seeds, free_seeds)
    arcs = g.arc_list()
    m = len(arcs)
    if m > enumeration_limit:
        raise ValueError(
            f"graph has {m} arcs, above the enumeration limit {enumeration_limit}"
        )
    if not initial:
        return 0.0
    value = _value_table(g, econ, universe)
    out_idx = _arc_index_out(arcs, g.base_node_count)
    arc_targets = [v for _, v, _ in arcs]
    arc_probs = [p for _, _, p in arcs]
    terms = []
    for mask in range(1 << m):
        prob = 1.0
        for i, p in enumerate(arc_probs):
            prob *= p if mask >> i & 1 else 1.0 - p
        reach = _mask_reach(out_idx, arc_targets, mask, initial)
        terms.append(prob * fsum(value[v] for v in reach))
    return fsum(terms)


def exact_profit(g: SocialGraph, econ: NodeEconomics, seeds, universe=None,
                 enumeration_limit: int = 20, free_seeds=()) -> float:
    """Exact expected profit: enumerated benefit minus priced seed cost."""
    seed_list = _check_seeds(g, seeds)
    benefit = exact_benefit(g, econ, seed_list, universe, enumeration_limit, free_seeds)
    return benefit - seed_cost(econ, seed_list)


def marginal_profit_gain(g: SocialGraph, econ: NodeEconomics, seeds, u, cfg: EstimatorConfig,
                         source, universe=None, free_seeds=()) -> float:
    """Signed profit delta from adding ``u`` to ``seeds``.

    ``source`` is a :class:`~profitmax.rng.RandomSource`; with common random
    numbers both profit terms re-derive the identical stream so shared
    simulation noise cancels.  Negative gains are returned as-is; selectors
    apply their own positivity filters.
    """
    seed_list = _check_seeds(g, seeds)
    if u in seed_list:
        raise ValueError(f"node {u!r} is already in the seed set")
    g._require(u)
    if cfg.common_random_numbers:
        rng_with, rng_without = source.generator(), source.generator()
    else:
        rng_with, rng_without = source.stream("with"), source.stream("without")
    with_u = estimate_profit(g, econ, seed_list + [u], cfg, rng_with, universe, free_seeds)
    without_u = estimate_profit(g, econ, seed_list, cfg, rng_without, universe, free_seeds)
    return with_u.mean - without_u.mean
