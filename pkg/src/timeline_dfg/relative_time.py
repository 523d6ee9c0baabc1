"""Case-relative time and per-activity occurrence-time statistics."""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import statistics
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import EmptyLog
from .event_log import Case, Event, EventLog


@dataclass(frozen=True)
class RelativeLog:
    """Cases whose timestamps are millisecond offsets from their own start."""

    cases: tuple[Case, ...]

    def __iter__(self) -> Iterator[Case]:
        return iter(self.cases)

    def __len__(self) -> int:
        return len(self.cases)

    def as_event_log(self) -> EventLog:
        return EventLog(self.cases)


def transform_relative(log: EventLog) -> RelativeLog:
    """Shift every case so that its earliest event sits at 0 ms.

    The input log is left untouched; a new set of cases is returned.
    """
    out = []
    for case in log.cases:
        if not case.events:
            raise EmptyLog(f"case {case.case_id!r} has no events")
        t_min = min(e.timestamp for e in case.events)
        out.append(Case(case.case_id, tuple(Event(e.activity, e.timestamp - t_min) for e in case.events)))
    return RelativeLog(tuple(out))


class AggregationMode(str, enum.Enum):
    GLOBAL_MEAN = "global-mean"
    PER_CASE_MEAN = "per-case-mean"
    MEDIAN = "median"
    MODE = "mode"


@dataclass(frozen=True)
class ActivityStat:
    activity: str
    mean_relative_ms: float
    occurrence_count: int
    case_count: int


class ActivityTimeStats(Mapping[str, ActivityStat]):
    """Per-activity aggregated relative time.

    ``mean_relative_ms`` holds whatever the aggregation produced; for the
    median and mode variants the name is kept so every consumer reads the
    same field.
    """

    def __init__(self, stats: Iterable[ActivityStat], aggregation: AggregationMode = AggregationMode.GLOBAL_MEAN):
        self._stats = {s.activity: s for s in sorted(stats, key=lambda s: s.activity)}
        self.aggregation = AggregationMode(aggregation)

    def __getitem__(self, activity: str) -> ActivityStat:
        return self._stats[activity]

    def __iter__(self) -> Iterator[str]:
        return iter(self._stats)

    def __len__(self) -> int:
        return len(self._stats)

    def __repr__(self) -> str:
        return f"ActivityTimeStats({list(self._stats.values())!r}, aggregation={self.aggregation.value!r})"

    def g(self, activity: str) -> float:
        return self._stats[activity].mean_relative_ms

    def restrict(self, activities: Iterable[str]) -> "ActivityTimeStats":
        keep = set(activities)
        return ActivityTimeStats((s for a, s in self._stats.items() if a in keep), self.aggregation)

    def to_json(self) -> str:
        payload = {
            a: {
                "mean_relative_ms": s.mean_relative_ms,
                "occurrence_count": s.occurrence_count,
                "case_count": s.case_count,
            }
            for a, s in self._stats.items()
        }
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["activity", "mean_relative_ms", "occurrence_count", "case_count"])
        for a, s in self._stats.items():
            writer.writerow([a, repr(s.mean_relative_ms), s.occurrence_count, s.case_count])
        return buf.getvalue()

    @classmethod
    def from_json(cls, text: str, aggregation: AggregationMode = AggregationMode.GLOBAL_MEAN) -> "ActivityTimeStats":
        data = json.loads(text)
        return cls(
            (
                ActivityStat(a, float(v["mean_relative_ms"]), int(v["occurrence_count"]), int(v["case_count"]))
                for a, v in data.items()
            ),
            aggregation,
        )


def _collect(rel: RelativeLog) -> tuple[dict[str, list[int]], dict[str, list[list[int]]]]:
    flat: dict[str, list[int]] = defaultdict(list)
    per_case: dict[str, list[list[int]]] = defaultdict(list)
    for case in rel.cases:
        local: dict[str, list[int]] = defaultdict(list)
        for e in case.events:
            local[e.activity].append(e.timestamp)
        for a, times in local.items():
            flat[a].extend(times)
            per_case[a].append(times)
    if not flat:
        raise EmptyLog("relative log contains no events")
    return flat, per_case


def activity_stats(rel: RelativeLog, agg: AggregationMode | str = AggregationMode.GLOBAL_MEAN) -> ActivityTimeStats:
    """Aggregate relative occurrence times per activity.

    ``GLOBAL_MEAN`` averages every occurrence in the log. ``PER_CASE_MEAN``
    first averages the occurrences of an activity inside each case, then
    averages those case means, which weights looping cases the same as the
    rest. ``MEDIAN``/``MODE`` are forwarded to :func:`aggregate_alternative`.
    """
    agg = AggregationMode(agg)
    if agg in (AggregationMode.MEDIAN, AggregationMode.MODE):
        return aggregate_alternative(rel, agg.value)
    flat, per_case = _collect(rel)
    out = []
    for a, times in flat.items():
        if agg is AggregationMode.GLOBAL_MEAN:
            # exact integer sum, one correctly rounded division
            value = sum(times) / len(times)
        else:
            value = math.fsum(sum(ts) / len(ts) for ts in per_case[a]) / len(per_case[a])
        out.append(ActivityStat(a, value, len(times), len(per_case[a])))
    return ActivityTimeStats(out, agg)


def _mode(values: list[int]) -> float:
    counts = Counter(values)
    top = max(counts.values())
    # ties resolve to the smallest value so results do not depend on input order
    return float(min(v for v, c in counts.items() if c == top))


def aggregate_alternative(rel: RelativeLog, which: str) -> ActivityTimeStats:
    """Median or mode of the relative times of each activity."""
    if which == "median":
        fn = lambda vs: float(statistics.median(vs))  # noqa: E731
    elif which == "mode":
        fn = _mode
    else:
        raise ValueError(f"which must be 'median' or 'mode', got {which!r}")
    flat, per_case = _collect(rel)
    out = [ActivityStat(a, fn(times), len(times), len(per_case[a])) for a, times in flat.items()]
    return ActivityTimeStats(out, AggregationMode(which))
