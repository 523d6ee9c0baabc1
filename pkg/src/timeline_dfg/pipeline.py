"""End-to-end discovery: log -> stats -> DFG -> axis -> layouts -> comparison."""

from __future__ import annotations

from dataclasses import dataclass

from .dfg import Dfg, discover_dfg, filter_dfg
from .event_log import EventLog
from .layout import (
    DotDocument,
    LayoutPlan,
    RankAssignment,
    RenderOptions,
    assign_ranks,
    emit_standard_dot,
    emit_timeline_dot,
    plan_layout,
)
from .metrics import ComparisonSummary, compare_layouts
from .relative_time import ActivityTimeStats, AggregationMode, activity_stats, transform_relative
from .timeline import TimelineAxis, build_axis


@dataclass(frozen=True)
class DiscoveryResult:
    log: EventLog
    stats: ActivityTimeStats
    dfg: Dfg
    axis: TimelineAxis
    activity_node_map: dict[str, str]
    plan: LayoutPlan
    timeline_dot: DotDocument
    standard_dot: DotDocument
    standard_ranks: RankAssignment
    timeline_ranks: RankAssignment
    comparison: ComparisonSummary


def discover(
    log: EventLog,
    agg: AggregationMode | str = AggregationMode.GLOBAL_MEAN,
    min_edge_freq: int = 1,
    opts: RenderOptions | None = None,
) -> DiscoveryResult:
    """Run every stage on ``log`` without modifying it.

    When edge filtering removes activities, the axis is built only from the
    activities that remain in the DFG.
    """
    stats = activity_stats(transform_relative(log), agg)
    dfg = discover_dfg(log)
    if min_edge_freq > 1:
        dfg = filter_dfg(dfg, min_edge_freq)
    kept = stats.restrict(dfg.activities)
    axis, node_map = build_axis(kept)
    plan = plan_layout(dfg, axis, node_map)
    standard_ranks = assign_ranks(dfg)
    timeline_ranks = assign_ranks(plan)
    return DiscoveryResult(
        log=log,
        stats=kept,
        dfg=dfg,
        axis=axis,
        activity_node_map=node_map,
        plan=plan,
        timeline_dot=emit_timeline_dot(plan, opts),
        standard_dot=emit_standard_dot(dfg, opts),
        standard_ranks=standard_ranks,
        timeline_ranks=timeline_ranks,
        comparison=compare_layouts(standard_ranks.ranks, timeline_ranks.ranks, kept),
    )
