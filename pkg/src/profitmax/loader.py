"""Dataset ingestion, node-attribute generation, and synthetic fixtures."""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .graph import NodeEconomics, SocialGraph, build_graph
from .rng import RandomSource

__all__ = [
    "AttributeSpec",
    "load_snap_edge_list",
    "generate_attributes",
    "preferential_attachment_graph",
]

log = logging.getLogger(__name__)


def load_snap_edge_list(path, directed: bool, uniform_probability: float = 0.01) -> SocialGraph:
    """Load a SNAP-style edge list into a graph with dense remapped ids.

    Lines hold a source and target id separated by whitespace or commas (extra
    fields such as ratings or timestamps are ignored); lines starting with
    ``#`` or ``%`` are comments.  Original ids are remapped to dense 0-based
    ids in order of first appearance; the table is kept on the graph.
    Self-loop lines are dropped with a count, duplicate edges collapse to the
    first occurrence.  Every arc gets ``uniform_probability``.
    """
    remap = {}
    original = []
    edges = []
    self_loops = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line[0] in "#%":
                continue
            parts = line.replace(",", " ").split()
            if len(parts) < 2:
                raise ValueError(f"{path}:{lineno}: malformed edge line: {line!r}")
            try:
                a, b = int(parts[0]), int(parts[1])
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed edge line: {line!r}") from None
            if a == b:
                self_loops += 1
                continue
            for x in (a, b):
                if x not in remap:
                    remap[x] = len(remap)
                    original.append(x)
            edges.append((remap[a], remap[b], uniform_probability))
    if not edges:
        log.warning("%s: no edges found, building an empty graph", path)
    g = build_graph(edges, directed)
    g.original_ids = tuple(original)
    g.self_loops_dropped = self_loops
    if self_loops:
        log.warning("%s: dropped %d self-loop line(s)", path, self_loops)
    if g.duplicates_collapsed:
        log.warning("%s: collapsed %d duplicate edge(s)", path, g.duplicates_collapsed)
    log.info("%s: %d nodes, %d arcs (%s)", path, g.node_count, g.arc_count,
             "directed" if directed else "undirected")
    return g


@dataclass(frozen=True)
class AttributeSpec:
    """Integer ranges for per-node incentive cost and earnable benefit."""

    cost_range: tuple = (50, 100)
    benefit_range: tuple = (800, 1000)
    attribute_seed: int = 0

    def __post_init__(self):
        for name, (lo, hi) in (("cost", self.cost_range), ("benefit", self.benefit_range)):
            if not 1 <= lo <= hi:
                raise ValueError(f"invalid {name} range [{lo}, {hi}]")


def generate_attributes(g: SocialGraph, spec: AttributeSpec) -> NodeEconomics:
    """Independent uniform integer draws per node, deterministic per seed."""
    source = RandomSource(spec.attribute_seed)
    cost_rnd = source.stream("cost")
    benefit_rnd = source.stream("benefit")
    n = g.base_node_count
    costs = tuple(cost_rnd.randint(*spec.cost_range) for _ in range(n))
    benefits = tuple(benefit_rnd.randint(*spec.benefit_range) for _ in range(n))
    return NodeEconomics(costs, benefits)


def preferential_attachment_graph(node_count: int, attach: int, seed: int,
                                  probability: float = 0.01) -> SocialGraph:
    """Undirected preferential-attachment graph, deterministic for a seed.

    Starts from a complete core of ``attach`` + 1 nodes; each later node links
    to ``attach`` distinct earlier nodes drawn proportionally to degree.
    """
    if attach < 1:
        raise ValueError("attach must be >= 1")
    core = attach + 1
    if node_count < core:
        raise ValueError(f"need at least {core} nodes for attach={attach}")
    rnd = RandomSource(seed).stream("preferential-attachment")
    edges = []
    stubs = []
    for u in range(core):
        for v in range(u):
            edges.append((u, v, probability))
            stubs += [u, v]
    for u in range(core, node_count):
        chosen = set()
        while len(chosen) < attach:
            v = stubs[rnd.randrange(len(stubs))]
            if v != u:
                chosen.add(v)
        for v in sorted(chosen):
            edges.append((u, v, probability))
            stubs += [u, v]
    return build_graph(edges, directed=False)
