"""Timeline-aligned directly-follows graph discovery."""

from .dfg import Dfg, discover_dfg, filter_dfg
from .event_log import (
    Case,
    ColumnMapping,
    Event,
    EventLog,
    ValidationReport,
    parse_csv,
    parse_log,
    parse_xes,
    sample_cases,
    validate,
    write_csv,
)
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
from .metrics import ComparisonSummary, ContradictionReport, compare_layouts, contradictions
from .pipeline import DiscoveryResult, discover
from .relative_time import (
    ActivityStat,
    ActivityTimeStats,
    AggregationMode,
    RelativeLog,
    activity_stats,
    aggregate_alternative,
    transform_relative,
)
from .synth import Delay, LogRecipe, LoopSpec, Step, TraceTemplate, generate, random_recipe
from .timeline import TimeLabel, TimelineAxis, build_axis, edge_length, make_label

__version__ = "0.1.0"
