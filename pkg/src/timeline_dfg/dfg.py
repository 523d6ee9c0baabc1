"""Frequency-annotated directly-follows graph discovery."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field

from .errors import EmptyLog
from .event_log import EventLog


@dataclass(frozen=True)
class Dfg:
    activities: frozenset[str]
    edges: dict[tuple[str, str], int] = field(default_factory=dict)
    start_activities: dict[str, int] = field(default_factory=dict)
    end_activities: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for (src, dst), freq in self.edges.items():
            if src not in self.activities or dst not in self.activities:
                raise ValueError(f"edge {(src, dst)} has an endpoint outside the activity set")
            if freq < 1:
                raise ValueError(f"edge {(src, dst)} has non-positive frequency {freq}")

    @property
    def total_frequency(self) -> int:
        return sum(self.edges.values())

    def successors(self, activity: str) -> list[str]:
        return sorted(dst for (src, dst) in self.edges if src == activity)

    def to_dict(self) -> dict:
        return {
            "activities": sorted(self.activities),
            "edges": [
                {"source": s, "target": t, "frequency": f} for (s, t), f in sorted(self.edges.items())
            ],
            "start_activities": dict(sorted(self.start_activities.items())),
            "end_activities": dict(sorted(self.end_activities.items())),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Dfg":
        return cls(
            frozenset(data["activities"]),
            {(e["source"], e["target"]): int(e["frequency"]) for e in data["edges"]},
            {a: int(c) for a, c in data["start_activities"].items()},
            {a: int(c) for a, c in data["end_activities"].items()},
        )


def discover_dfg(log: EventLog) -> Dfg:
    """Count directly-follows pairs, start and end activities.

    Works on absolute (non-shifted) timestamps; only event order matters.
    Self-loops are kept as ordinary edges.
    """
    edges: Counter = Counter()
    starts: Counter = Counter()
    ends: Counter = Counter()
    activities: set[str] = set()
    for case in log.cases:
        acts = case.activities
        if not acts:
            continue
        activities.update(acts)
        starts[acts[0]] += 1
        ends[acts[-1]] += 1
        edges.update(zip(acts, acts[1:]))
    if not activities:
        raise EmptyLog("cannot discover a DFG from an empty log")
    return Dfg(frozenset(activities), dict(edges), dict(starts), dict(ends))


def filter_dfg(dfg: Dfg, min_edge_freq: int) -> Dfg:
    """Drop edges below ``min_edge_freq`` and any activity left with no role.

    An activity survives if it still touches an edge or starts or ends some
    case. Start/end counts are not changed.
    """
    if min_edge_freq < 1:
        raise ValueError("min_edge_freq must be >= 1")
    edges = {e: f for e, f in dfg.edges.items() if f >= min_edge_freq}
    keep = set(dfg.start_activities) | set(dfg.end_activities)
    for src, dst in edges:
        keep.add(src)
        keep.add(dst)
    return Dfg(frozenset(dfg.activities & keep), edges, dict(dfg.start_activities), dict(dfg.end_activities))
