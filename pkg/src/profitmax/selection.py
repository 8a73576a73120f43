"""Budgeted seed-set selectors.

The two greedy selectors pick by estimated profit gain per unit cost; the four
baselines order candidates by randomness, degree, clustering coefficient, or
discounted degree.  Every selector works on whatever (possibly restricted)
graph it is handed, never picks a node twice, and returns an audit trace of
each examined candidate.

Gain estimates inside a selection use common random numbers by default: all
estimates of one decision context re-derive the identical stream, so candidate
comparisons share their simulation noise and the audit trace can be replayed
bit-for-bit from the same random source.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import NodeEconomics, SocialGraph, clustering_coefficient, degree, seed_cost
from .profit import EstimatorConfig, estimate_profit, marginal_profit_gain

__all__ = [
    "GainRatioPair",
    "TraceEntry",
    "SelectionOutcome",
    "single_greedy",
    "double_greedy",
    "baseline_random",
    "baseline_high_degree",
    "baseline_clustering_coefficient",
    "baseline_single_discount",
    "replay_single_greedy",
    "SELECTORS",
    "select",
]


@dataclass(frozen=True)
class GainRatioPair:
    """Grow-side and shrink-side gain ratios of one double-greedy decision."""

    add_ratio: float
    remove_ratio: float


@dataclass(frozen=True)
class TraceEntry:
    round: int
    node: int
    decision: str
    ratio: float = None
    remove_ratio: float = None


@dataclass(frozen=True)
class SelectionOutcome:
    seeds: tuple
    spent: int
    remaining_budget: int
    trace: tuple


def _outcome(econ, budget, selected, trace) -> SelectionOutcome:
    spent = seed_cost(econ, selected)
    return SelectionOutcome(tuple(sorted(selected)), spent, budget - spent, tuple(trace))


def _check_budget(g, econ, budget):
    if budget < 0:
        raise ValueError(f"budget must be >= 0, got {budget}")
    econ.check_covers(g)


def _round_mean(g, econ, seeds, cfg, round_src, key):
    if cfg.common_random_numbers:
        rng = round_src.generator()
    else:
        rng = round_src.stream("candidate", key)
    return estimate_profit(g, econ, seeds, cfg, rng).mean


def single_greedy(g: SocialGraph, econ: NodeEconomics, budget: int,
                  cfg: EstimatorConfig, source) -> SelectionOutcome:
    """Iterated best gain-per-cost selection until gains turn non-positive.

    Each round evaluates every still-affordable candidate against the current
    seed set and accepts the one with the highest profit-gain-to-cost ratio
    (ties to the lowest id).  Candidates whose cost exceeds the remaining
    budget can never become affordable again and leave the pool permanently,
    which also guarantees termination.
    """
    _check_budget(g, econ, budget)
    cost = econ.cost
    pool = g.nodes
    selected = []
    remaining = budget
    trace = []
    round_no = 0
    while True:
        affordable = []
        for u in pool:
            if cost[u] <= remaining:
                affordable.append(u)
            else:
                trace.append(TraceEntry(round_no, u, "unaffordable"))
        pool = affordable
        if not pool:
            break
        round_src = source.child("round", round_no)
        base = _round_mean(g, econ, selected, cfg, round_src, -1)
        best_u = None
        best_ratio = None
        ratios = []
        for u in pool:
            mean_with = _round_mean(g, econ, selected + [u], cfg, round_src, u)
            ratio = (mean_with - base) / cost[u]
            ratios.append((u, ratio))
            if best_ratio is None or ratio > best_ratio:
                best_u, best_ratio = u, ratio
        if best_ratio <= 0.0:
            for u, ratio in ratios:
                tag = "rejected_gain" if u == best_u else "passed"
                trace.append(TraceEntry(round_no, u, tag, ratio))
            break
        for u, ratio in ratios:
            tag = "accepted" if u == best_u else "passed"
            trace.append(TraceEntry(round_no, u, tag, ratio))
        selected.append(best_u)
        remaining -= cost[best_u]
        pool.remove(best_u)
        round_no += 1
    return _outcome(econ, budget, selected, trace)


def replay_single_greedy(g: SocialGraph, econ: NodeEconomics, cfg: EstimatorConfig,
                         source, outcome: SelectionOutcome) -> bool:
    """Recompute a single-greedy audit trace and verify every recorded choice.

    Re-derives each round's streams from ``source``, recomputes each evaluated
    candidate's ratio, and checks the recorded value matches exactly and that
    the accepted node carried the maximal ratio (ties to lowest id).
    """
    rounds = {}
    for entry in outcome.trace:
        rounds.setdefault(entry.round, []).append(entry)
    selected = []
    for round_no in sorted(rounds):
        evaluated = [e for e in rounds[round_no] if e.decision != "unaffordable"]
        if not evaluated:
            continue
        round_src = source.child("round", round_no)
        base = _round_mean(g, econ, selected, cfg, round_src, -1)
        for entry in evaluated:
            mean_with = _round_mean(g, econ, selected + [entry.node], cfg, round_src, entry.node)
            ratio = (mean_with - base) / econ.cost[entry.node]
            if ratio != entry.ratio:
                return False
        accepted = [e for e in evaluated if e.decision == "accepted"]
        if accepted:
            top = max(e.ratio for e in evaluated)
            winner = min(e.node for e in evaluated if e.ratio == top)
            if accepted[0].node != winner or accepted[0].ratio != top:
                return False
            selected.append(accepted[0].node)
    return tuple(sorted(selected)) == outcome.seeds


def double_greedy(g: SocialGraph, econ: NodeEconomics, budget: int,
                  cfg: EstimatorConfig, source) -> SelectionOutcome:
    """Single pass keeping a growing set S and a shrinking set T; ends with S == T.

    For each node the grow-side ratio compares profit with and without the
    node added to S, the shrink-side ratio (negated) compares profit with and
    without the node removed from T.  The node joins S when the grow side wins
    and its cost still fits the budget; otherwise it leaves T.
    """
    _check_budget(g, econ, budget)
    cost = econ.cost
    nodes = g.nodes
    grow = []
    grow_set = set()
    shrink = set(nodes)
    remaining = budget
    trace = []
    eval_src = source.child("evaluations")
    counter = [0]

    def mean_of(seeds):
        counter[0] += 1
        return _round_mean(g, econ, seeds, cfg, eval_src, counter[0])

    phi_grow = mean_of(grow)
    phi_shrink = mean_of(sorted(shrink))
    for idx, u in enumerate(nodes):
        c = cost[u]
        phi_grow_with = mean_of(grow + [u])
        shrink_without = sorted(shrink - {u})
        phi_shrink_without = mean_of(shrink_without)
        pair = GainRatioPair(
            add_ratio=(phi_grow_with - phi_grow) / c,
            remove_ratio=-((phi_shrink_without - phi_shrink) / c),
        )
        if pair.add_ratio >= pair.remove_ratio and c <= remaining:
            grow.append(u)
            grow_set.add(u)
            remaining -= c
            phi_grow = phi_grow_with
            decision = "added"
        else:
            shrink.remove(u)
            phi_shrink = phi_shrink_without
            decision = "dropped_budget" if pair.add_ratio >= pair.remove_ratio else "dropped_ratio"
        trace.append(TraceEntry(idx, u, decision, pair.add_ratio, pair.remove_ratio))
    assert grow_set == shrink, "grow and shrink sets must coincide at termination"
    return _outcome(econ, budget, grow, trace)


def baseline_random(g: SocialGraph, econ: NodeEconomics, budget: int, source) -> SelectionOutcome:
    """Uniform random order, taking every node that still fits the budget."""
    _check_budget(g, econ, budget)
    cost = econ.cost
    order = g.nodes
    source.stream("order").shuffle(order)
    selected = []
    remaining = budget
    trace = []
    for i, u in enumerate(order):
        if cost[u] <= remaining:
            selected.append(u)
            remaining -= cost[u]
            trace.append(TraceEntry(i, u, "accepted"))
        else:
            trace.append(TraceEntry(i, u, "unaffordable"))
    return _outcome(econ, budget, selected, trace)


def _scored_scan(g, econ, budget, cfg, source, order) -> SelectionOutcome:
    # shared scan for the score-ordered baselines: take a node when it fits
    # the budget and its estimated profit gain is non-negative
    cost = econ.cost
    selected = []
    remaining = budget
    trace = []
    for i, u in enumerate(order):
        if cost[u] > remaining:
            trace.append(TraceEntry(i, u, "unaffordable"))
            continue
        gain = marginal_profit_gain(g, econ, selected, u, cfg, source.child("evaluate", i))
        ratio = gain / cost[u]
        if gain >= 0.0:
            selected.append(u)
            remaining -= cost[u]
            trace.append(TraceEntry(i, u, "accepted", ratio))
        else:
            trace.append(TraceEntry(i, u, "rejected_gain", ratio))
    return _outcome(econ, budget, selected, trace)


def baseline_high_degree(g: SocialGraph, econ: NodeEconomics, budget: int,
                         cfg: EstimatorConfig, source) -> SelectionOutcome:
    """Descending-degree scan with non-negative-gain and budget gates."""
    _check_budget(g, econ, budget)
    order = sorted(g.nodes, key=lambda u: (-degree(g, u), u))
    return _scored_scan(g, econ, budget, cfg, source, order)


def baseline_clustering_coefficient(g: SocialGraph, econ: NodeEconomics, budget: int,
                                    cfg: EstimatorConfig, source) -> SelectionOutcome:
    """Descending clustering-coefficient scan with the same gates as high degree."""
    _check_budget(g, econ, budget)
    order = sorted(g.nodes, key=lambda u: (-clustering_coefficient(g, u), u))
    return _scored_scan(g, econ, budget, cfg, source, order)


def baseline_single_discount(g: SocialGraph, econ: NodeEconomics, budget: int,
                             cfg: EstimatorConfig, source) -> SelectionOutcome:
    """Degree scan where each selection discounts its neighbors' degrees by one."""
    _check_budget(g, econ, budget)
    cost = econ.cost
    effective = {u: degree(g, u) for u in g.nodes}
    pool = set(effective)
    selected = []
    remaining = budget
    trace = []
    i = 0
    while pool:
        u = min(pool, key=lambda v: (-effective[v], v))
        pool.remove(u)
        if cost[u] > remaining:
            trace.append(TraceEntry(i, u, "unaffordable"))
            i += 1
            continue
        gain = marginal_profit_gain(g, econ, selected, u, cfg, source.child("evaluate", i))
        ratio = gain / cost[u]
        if gain >= 0.0:
            selected.append(u)
            remaining -= cost[u]
            trace.append(TraceEntry(i, u, "accepted", ratio))
            for v, _ in g.out_arcs(u):
                if v in effective:
                    effective[v] -= 1
        else:
            trace.append(TraceEntry(i, u, "rejected_gain", ratio))
        i += 1
    return _outcome(econ, budget, selected, trace)


SELECTORS = {
    "single_greedy": single_greedy,
    "double_greedy": double_greedy,
    "random": lambda g, econ, budget, cfg, source: baseline_random(g, econ, budget, source),
    "high_degree": baseline_high_degree,
    "clustering_coefficient": baseline_clustering_coefficient,
    "single_discount": baseline_single_discount,
}


def select(name: str, g: SocialGraph, econ: NodeEconomics, budget: int,
           cfg: EstimatorConfig, source) -> SelectionOutcome:
    """Dispatch to a selector by registry name."""
    try:
        selector = SELECTORS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; known: {', '.join(sorted(SELECTORS))}")
    return selector(g, econ, budget, cfg, source)
