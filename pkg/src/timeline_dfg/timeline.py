"""Human-readable time labels and the proportional timeline axis.

A label is chosen by walking the unit ladder from years down to seconds and
taking the first unit whose rounded value is non-zero and within 50 % of the
true value. This yields ``12m`` for 720 540.67 ms, ``4MO`` for ~129 days and
keeps ``16D`` as days instead of collapsing it to ``1MO``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping

from .errors import EmptyStats, NegativeInput, NonIncreasingPair

SECOND = 1_000
MINUTE = 60 * SECOND
HOUR = 60 * MINUTE
DAY = 24 * HOUR
MONTH = 30 * DAY
YEAR = 365 * DAY

# finest to coarsest
UNITS: dict[str, int] = {"s": SECOND, "m": MINUTE, "h": HOUR, "D": DAY, "MO": MONTH, "Y": YEAR}

MAX_RELATIVE_ERROR = 0.5

_LABEL_RE = re.compile(r"^(0|[1-9][0-9]*)(MO|s|m|h|D|Y)$")


def unit_length_ms(unit: str) -> int:
    return UNITS[unit]


def round_half_away(x: float) -> int:
    """Round to the nearest integer, halves away from zero."""
    f = math.floor(abs(x))
    n = f + 1 if abs(x) - f >= 0.5 else f
    return n if x >= 0 else -n


@dataclass(frozen=True, order=False)
class TimeLabel:
    value: int
    unit: str

    def __post_init__(self) -> None:
        if self.unit not in UNITS:
            raise ValueError(f"unknown unit {self.unit!r}")
        if self.value < 0:
            raise ValueError("label value must be non-negative")

    @property
    def text(self) -> str:
        return f"{self.value}{self.unit}"

    @property
    def canonical_ms(self) -> int:
        return self.value * UNITS[self.unit]

    def in_unit(self, unit: str) -> float:
        return self.canonical_ms / UNITS[unit]

    @classmethod
    def parse(cls, text: str) -> "TimeLabel":
        m = _LABEL_RE.match(text)
        if not m:
            raise ValueError(f"not a time label: {text!r}")
        return cls(int(m.group(1)), m.group(2))

    def __str__(self) -> str:
        return self.text


def make_label(mean_relative_ms: float) -> TimeLabel:
    """Round a relative time in ms to the coarsest tolerable unit."""
    x = float(mean_relative_ms)
    if not math.isfinite(x):
        raise NegativeInput(f"time must be finite, got {mean_relative_ms!r}")
    if x < 0:
        raise NegativeInput(f"time must be non-negative, got {mean_relative_ms!r}")
    for unit, length in reversed(UNITS.items()):
        value = round_half_away(x / length)
        if value >= 1 and abs(value * length - x) <= MAX_RELATIVE_ERROR * x:
            return TimeLabel(value, unit)
    return TimeLabel(round_half_away(x / SECOND), "s")


def edge_length(src: TimeLabel, dst: TimeLabel) -> int:
    """Axis edge ``minlen`` between two increasing labels.

    Both labels are expressed in the unit of ``dst``; the rounded difference
    is clamped to at least 1.
    """
    if not src.canonical_ms < dst.canonical_ms:
        raise NonIncreasingPair(f"{src.text} -> {dst.text} is not increasing")
    diff = dst.value - src.in_unit(dst.unit)
    return max(1, round_half_away(diff))


@dataclass(frozen=True)
class AxisNode:
    node_id: str
    label: TimeLabel


@dataclass(frozen=True)
class AxisEdge:
    src: str
    dst: str
    minlen: int


@dataclass(frozen=True)
class TimelineAxis:
    nodes: tuple[AxisNode, ...]
    edges: tuple[AxisEdge, ...]

    def __post_init__(self) -> None:
        ms = [n.label.canonical_ms for n in self.nodes]
        if any(a >= b for a, b in zip(ms, ms[1:])):
            raise ValueError("axis nodes must be strictly increasing")
        if len(self.edges) != max(0, len(self.nodes) - 1):
            raise ValueError("axis must chain consecutive nodes")
        for e, (a, b) in zip(self.edges, zip(self.nodes, self.nodes[1:])):
            if (e.src, e.dst) != (a.node_id, b.node_id) or e.minlen < 1:
                raise ValueError(f"bad axis edge {e}")

    @property
    def node_ids(self) -> list[str]:
        return [n.node_id for n in self.nodes]

    def index_of(self, node_id: str) -> int:
        return self.node_ids.index(node_id)


def axis_node_id(label: TimeLabel) -> str:
    return f"t_{label.text}"


def axis_from_labels(labels) -> TimelineAxis:
    """Axis over the distinct labels, ascending, with computed ``minlen`` values."""
    uniq = sorted(set(labels), key=lambda l: l.canonical_ms)
    nodes = tuple(AxisNode(axis_node_id(l), l) for l in uniq)
    edges = tuple(
        AxisEdge(a.node_id, b.node_id, edge_length(a.label, b.label)) for a, b in zip(nodes, nodes[1:])
    )
    return TimelineAxis(nodes, edges)


def build_axis(stats) -> tuple[TimelineAxis, dict[str, str]]:
    """Build the axis from activity statistics.

    ``stats`` is an :class:`~timeline_dfg.relative_time.ActivityTimeStats`
    or any mapping of activity to mean relative ms. Returns the axis and a
    map from each activity to the id of its axis node.
    """
    if not stats:
        raise EmptyStats("no activity statistics to build an axis from")
    means: Mapping[str, float] = {
        a: (s.mean_relative_ms if hasattr(s, "mean_relative_ms") else float(s)) for a, s in stats.items()
    }
    labels = {a: make_label(g) for a, g in means.items()}
    axis = axis_from_labels(labels.values())
    return axis, {a: axis_node_id(l) for a, l in sorted(labels.items())}
