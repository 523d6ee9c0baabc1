"""Layout planning and DOT emission for timeline and standard DFGs."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping

from .dfg import Dfg
from .errors import EmptyDfg, UnmappedActivity
from .timeline import TimelineAxis

START_ID = "start"
END_ID = "end"


@dataclass(frozen=True)
class RenderOptions:
    rankdir: str = "TB"
    fontname: str = "Helvetica"
    fontsize: int = 10
    axis_fillcolor: str = "#e6e6e6"
    activity_fillcolor: str = "#ffffff"
    start_color: str = "#32cd32"
    end_color: str = "#ff8c00"
    show_frequencies: bool = True
    graph_name: str | None = None


@dataclass(frozen=True)
class LayoutPlan:
    axis: TimelineAxis
    dfg: Dfg
    activity_node_map: dict[str, str]
    subgraphs: tuple[tuple[str, tuple[str, ...]], ...]

    def ranks(self) -> dict[str, int]:
        index = {n.node_id: i for i, n in enumerate(self.axis.nodes)}
        return {a: index[self.activity_node_map[a]] for a in sorted(self.dfg.activities)}


@dataclass(frozen=True)
class DotDocument:
    text: str
    node_ids: dict[tuple[str, str], str] = field(default_factory=dict)

    def __str__(self) -> str:
        return self.text

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.text)


def plan_layout(dfg: Dfg, axis: TimelineAxis, activity_node_map: Mapping[str, str]) -> LayoutPlan:
    """Group DFG activities under their axis nodes, one group per axis node."""
    known = set(axis.node_ids)
    members: dict[str, list[str]] = defaultdict(list)
    for a in sorted(dfg.activities):
        node = activity_node_map.get(a)
        if node is None or node not in known:
            raise UnmappedActivity(a)
        members[node].append(a)
    subgraphs = tuple((n.node_id, tuple(members.get(n.node_id, ()))) for n in axis.nodes)
    used = {a: activity_node_map[a] for a in sorted(dfg.activities)}
    return LayoutPlan(axis, dfg, used, subgraphs)


def quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\r", "").replace("\n", "\\n")
    return f'"{escaped}"'


def activity_ids(activities) -> dict[str, str]:
    """Opaque DOT ids for activities, assigned in lexicographic order."""
    return {a: f"a{i}" for i, a in enumerate(sorted(activities))}


def _header(kind: str, opts: RenderOptions) -> list[str]:
    name = opts.graph_name or kind
    return [
        f"digraph {name} {{",
        "  layout=dot",
        f"  rankdir={opts.rankdir}",
        f"  node [shape=rect fontname={quote(opts.fontname)} fontsize={opts.fontsize}]",
        f"  edge [fontname={quote(opts.fontname)} fontsize={opts.fontsize - 1}]",
    ]


def _activity_lines(dfg: Dfg, ids: dict[str, str], opts: RenderOptions) -> list[str]:
    lines = [
        f'  {ids[a]} [label={quote(a)} style="rounded,filled" fillcolor={quote(opts.activity_fillcolor)}]'
        for a in sorted(dfg.activities)
    ]
    for (src, dst), freq in sorted(dfg.edges.items()):
        attrs = f" [label={quote(str(freq))}]" if opts.show_frequencies else ""
        lines.append(f"  {ids[src]} -> {ids[dst]}{attrs}")
    return lines


def emit_timeline_dot(plan: LayoutPlan, opts: RenderOptions | None = None) -> DotDocument:
    """DOT text for the timeline-aligned DFG.

    Axis nodes are chained by bold edges carrying ``minlen``; each axis node
    shares a ``rank=same`` subgraph with the activities mapped to it.
    """
    opts = opts or RenderOptions()
    ids = activity_ids(plan.dfg.activities)
    lines = _header("timeline_dfg", opts)
    for node in plan.axis.nodes:
        lines.append(
            f"  {node.node_id} [label={quote(node.label.text)} style=filled fillcolor={quote(opts.axis_fillcolor)}]"
        )
    for e in plan.axis.edges:
        lines.append(f"  {e.src} -> {e.dst} [minlen={e.minlen} style=bold arrowhead=none]")
    lines.extend(_activity_lines(plan.dfg, ids, opts))
    for i, (node_id, members) in enumerate(plan.subgraphs):
        lines.append(f"  subgraph rank_{i} {{")
        lines.append("    rank=same")
        lines.append(f"    {node_id}")
        lines.extend(f"    {ids[a]}" for a in members)
        lines.append("  }")
    lines.append("}")

    node_ids = {("axis", n.label.text): n.node_id for n in plan.axis.nodes}
    node_ids.update({("activity", a): i for a, i in ids.items()})
    return DotDocument("\n".join(lines) + "\n", node_ids)


def emit_standard_dot(dfg: Dfg, opts: RenderOptions | None = None) -> DotDocument:
    """Conventional DFG with start/end markers and no rank constraints."""
    if not dfg.activities:
        raise EmptyDfg("DFG has no activities")
    opts = opts or RenderOptions()
    ids = activity_ids(dfg.activities)
    lines = _header("standard_dfg", opts)
    lines.append(f'  {START_ID} [label="" shape=circle style=filled fillcolor={quote(opts.start_color)}]')
    lines.append(f'  {END_ID} [label="" shape=doublecircle style=filled fillcolor={quote(opts.end_color)}]')
    lines.extend(_activity_lines(dfg, ids, opts))
    for a, count in sorted(dfg.start_activities.items()):
        if a in ids:
            attrs = f" [label={quote(str(count))}]" if opts.show_frequencies else ""
            lines.append(f"  {START_ID} -> {ids[a]}{attrs}")
    for a, count in sorted(dfg.end_activities.items()):
        if a in ids:
            attrs = f" [label={quote(str(count))}]" if opts.show_frequencies else ""
            lines.append(f"  {ids[a]} -> {END_ID}{attrs}")
    lines.append("}")

    node_ids = {("marker", "start"): START_ID, ("marker", "end"): END_ID}
    node_ids.update({("activity", a): i for a, i in ids.items()})
    return DotDocument("\n".join(lines) + "\n", node_ids)


# -- rank assignment ----------------------------------------------------------


@dataclass(frozen=True)
class RankAssignment:
    ranks: dict[str, int]
    method: str
    cyclic_fallback: bool = False


def _acyclic_successors(nodes: list[str], succ: dict[str, list[str]], roots: list[str]) -> dict[str, list[str]]:
    """Drop DFS back edges, exploring ``roots`` first and then any leftovers.

    Successors are visited in the order given, so the result is deterministic.
    """
    WHITE, GREY, BLACK = 0, 1, 2
    color = {n: WHITE for n in nodes}
    kept: dict[str, list[str]] = {n: [] for n in nodes}
    for root in roots + nodes:
        if color[root] != WHITE:
            continue
        color[root] = GREY
        stack = [(root, iter(succ[root]))]
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if color[nxt] == GREY:
                    continue  # back edge
                kept[node].append(nxt)
                if color[nxt] == WHITE:
                    color[nxt] = GREY
                    stack.append((nxt, iter(succ[nxt])))
                    break
            else:
                color[node] = BLACK
                stack.pop()
    return kept


def longest_path_ranks(dfg: Dfg) -> RankAssignment:
    """Longest-path layering below a virtual start marker.

    Cycles are broken by removing DFS back edges (depth-first from the start
    marker, lexicographic successor order). Each activity's rank is the length
    of the longest remaining path from the marker, minus one, so start
    activities without other predecessors sit at rank 0. With no start
    activities at all, the DFS begins at in-degree-zero activities and then
    at the remaining ones in lexicographic order; the result is flagged.
    """
    acts = sorted(dfg.activities)
    succ: dict[str, list[str]] = {a: [] for a in acts}
    for src, dst in sorted(dfg.edges):
        if src != dst:
            succ[src].append(dst)
    starts = sorted(a for a in dfg.start_activities if a in succ)
    fallback = not starts

    marker = object()
    nodes: list = [marker] + acts
    succ_all: dict = {marker: starts, **succ}
    indeg = {a: 0 for a in acts}
    for a in acts:
        for b in succ[a]:
            indeg[b] += 1
    roots = [marker] + [a for a in acts if indeg[a] == 0 and a not in starts]
    kept = _acyclic_successors(nodes, succ_all, roots)

    preds: dict = {n: [] for n in nodes}
    for n in nodes:
        for m in kept[n]:
            preds[m].append(n)
    layer: dict = {}
    remaining = {n: len(preds[n]) for n in nodes}
    order = [n for n in nodes if remaining[n] == 0]
    while order:
        n = order.pop()
        layer[n] = -1 if n is marker else max((layer[p] + 1 for p in preds[n]), default=0)
        for m in kept[n]:
            remaining[m] -= 1
            if remaining[m] == 0:
                order.append(m)
    return RankAssignment({a: layer[a] for a in acts}, "longest-path", fallback)


def assign_ranks(plan_or_dfg: LayoutPlan | Dfg) -> RankAssignment:
    """Vertical rank of every activity.

    For a :class:`LayoutPlan` the rank is the index of the activity's axis
    node. For a bare :class:`Dfg` it is :func:`longest_path_ranks`.
    """
    if isinstance(plan_or_dfg, LayoutPlan):
        return RankAssignment(plan_or_dfg.ranks(), "timeline")
    if isinstance(plan_or_dfg, Dfg):
        return longest_path_ranks(plan_or_dfg)
    raise TypeError(f"expected LayoutPlan or Dfg, got {type(plan_or_dfg).__name__}")
