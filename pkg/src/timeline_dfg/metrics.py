"""Temporal-order contradictions between a layout and mean occurrence times."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Mapping

from .errors import ActivitySetMismatch, MissingStats


@dataclass(frozen=True)
class ContradictionReport:
    """Pairwise comparison of layout order against time order.

    ``total_pairs`` counts every unordered activity pair. A pair contradicts
    when its earlier activity (strictly smaller mean time) sits on a strictly
    lower row. An activity is consistent when it is part of no contradicting
    pair.
    """

    total_pairs: int
    contradicting_pairs: int
    consistent_activities: int
    activity_count: int
    activity_list: dict[str, bool]
    details: tuple[tuple[str, str], ...]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["details"] = [list(p) for p in self.details]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def _time_of(stats, activity: str) -> float:
    try:
        s = stats[activity]
    except KeyError:
        raise MissingStats(activity) from None
    return s.mean_relative_ms if hasattr(s, "mean_relative_ms") else float(s)


def contradictions(ranks: Mapping[str, int], stats) -> ContradictionReport:
    """Count strict order reversals between ``ranks`` and mean times.

    ``stats`` maps activity to either an ``ActivityStat`` or a plain number.
    Ties in time or in rank never count.
    """
    acts = sorted(ranks)
    g = {a: _time_of(stats, a) for a in acts}
    bad: list[tuple[str, str]] = []
    involved: set[str] = set()
    for x, y in combinations(acts, 2):
        if g[x] > g[y]:
            x, y = y, x
        if g[x] < g[y] and ranks[x] > ranks[y]:
            bad.append((x, y))
            involved.update((x, y))
    flags = {a: a not in involved for a in acts}
    n = len(acts)
    return ContradictionReport(
        total_pairs=n * (n - 1) // 2,
        contradicting_pairs=len(bad),
        consistent_activities=sum(flags.values()),
        activity_count=n,
        activity_list=flags,
        details=tuple(sorted(bad)),
    )


@dataclass(frozen=True)
class ComparisonSummary:
    standard: ContradictionReport
    timeline: ContradictionReport

    @property
    def standard_consistent_activities(self) -> int:
        return self.standard.consistent_activities

    @property
    def activity_count(self) -> int:
        return self.standard.activity_count

    def to_dict(self) -> dict:
        return {
            "activity_count": self.activity_count,
            "standard_consistent_activities": self.standard_consistent_activities,
            "consistency_rule": "an activity is consistent iff it takes part in no contradicting pair",
            "standard": self.standard.to_dict(),
            "timeline": self.timeline.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def table(self) -> str:
        rows = [
            ("layout", "contradicting pairs", "total pairs", "consistent activities"),
            *(
                (name, str(r.contradicting_pairs), str(r.total_pairs), f"{r.consistent_activities}/{r.activity_count}")
                for name, r in (("standard", self.standard), ("timeline", self.timeline))
            ),
        ]
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        out = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
        out.insert(1, "  ".join("-" * w for w in widths))
        return "\n".join(out) + "\n"


def compare_layouts(standard_ranks: Mapping[str, int], timeline_ranks: Mapping[str, int], stats) -> ComparisonSummary:
    if set(standard_ranks) != set(timeline_ranks):
        diff = sorted(set(standard_ranks) ^ set(timeline_ranks))
        raise ActivitySetMismatch(f"rank maps cover different activities: {diff}")
    return ComparisonSummary(contradictions(standard_ranks, stats), contradictions(timeline_ranks, stats))
