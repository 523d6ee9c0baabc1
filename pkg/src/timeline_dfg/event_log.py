"""Event-log model plus CSV and minimal-XES readers.

Timestamps are held as integer milliseconds since the Unix epoch (UTC).
Cases are kept sorted by case id, and events inside a case are sorted by
timestamp with a stable sort, so equal timestamps keep their input order.
"""

from __future__ import annotations

import csv
import gzip
import io
import logging
import random
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import IO, Iterable, Iterator, Mapping, Sequence

from dateutil import parser as date_parser

from .errors import (
    EmptyLog,
    InvalidRow,
    MalformedXml,
    MissingColumn,
    MissingRequiredAttribute,
    UnparseableTimestamp,
)

logger = logging.getLogger(__name__)

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
_ONE_MS = timedelta(milliseconds=1)

TZ_POLICIES = ("utc", "reject")


@dataclass(frozen=True)
class Event:
    activity: str
    timestamp: int

    def __post_init__(self) -> None:
        if not isinstance(self.activity, str) or not self.activity.strip():
            raise ValueError(f"activity must be a non-empty string, got {self.activity!r}")
        if self.timestamp < 0:
            raise ValueError(f"timestamp must be >= 0, got {self.timestamp}")


@dataclass(frozen=True)
class Case:
    case_id: str
    events: tuple[Event, ...]

    def __len__(self) -> int:
        return len(self.events)

    @property
    def activities(self) -> tuple[str, ...]:
        return tuple(e.activity for e in self.events)

    @property
    def timestamps(self) -> tuple[int, ...]:
        return tuple(e.timestamp for e in self.events)


@dataclass(frozen=True)
class ColumnMapping:
    case_id: str = "case_id"
    activity: str = "activity"
    timestamp: str = "timestamp"


@dataclass(frozen=True)
class SourceMeta:
    path: str | None = None
    format: str = "memory"
    mapping: ColumnMapping | None = None
    row_count: int = 0
    ignored_extensions: int = 0


@dataclass(frozen=True)
class EventLog:
    cases: tuple[Case, ...]
    source_meta: SourceMeta = field(default_factory=SourceMeta, compare=False)

    def __len__(self) -> int:
        return len(self.cases)

    def __iter__(self) -> Iterator[Case]:
        return iter(self.cases)

    @property
    def n_cases(self) -> int:
        return len(self.cases)

    @property
    def n_events(self) -> int:
        return sum(len(c.events) for c in self.cases)

    @property
    def activities(self) -> frozenset[str]:
        return frozenset(e.activity for c in self.cases for e in c.events)

    @classmethod
    def from_traces(
        cls,
        traces: Mapping[str, Sequence[tuple[str, int]]],
        source_meta: SourceMeta | None = None,
    ) -> "EventLog":
        """Build a canonical log from ``{case_id: [(activity, timestamp_ms), ...]}``.

        Cases are ordered by id and events stably sorted by timestamp.
        """
        cases = tuple(
            _make_case(case_id, [Event(a, int(t)) for a, t in traces[case_id]])
            for case_id in sorted(traces)
        )
        if source_meta is None:
            source_meta = SourceMeta(row_count=sum(len(c.events) for c in cases))
        return cls(cases, source_meta)


def _make_case(case_id: str, events: Iterable[Event]) -> Case:
    return Case(case_id, tuple(sorted(events, key=lambda e: e.timestamp)))


# -- timestamps ---------------------------------------------------------------


def _to_ms(dt: datetime, tz_policy: str) -> int:
    if dt.tzinfo is None:
        if tz_policy == "reject":
            raise ValueError("naive timestamp rejected by tz policy")
        dt = dt.replace(tzinfo=timezone.utc)
    return (dt - EPOCH) // _ONE_MS


def parse_timestamp(value: str, time_format: str | None = None, tz_policy: str = "utc") -> int:
    """Parse one timestamp string into epoch milliseconds.

    ``time_format`` may be a ``strptime`` pattern, ``"epoch_ms"``,
    ``"epoch_s"``, or ``None`` for ISO-8601. Naive values are read as UTC
    unless ``tz_policy`` is ``"reject"``. Raises ``ValueError`` on failure.
    """
    value = value.strip()
    if not value:
        raise ValueError("empty timestamp")
    if time_format == "epoch_ms":
        return int(value)
    if time_format == "epoch_s":
        return int((Decimal(value) * 1000).to_integral_value(ROUND_HALF_UP))
    if time_format:
        return _to_ms(datetime.strptime(value, time_format), tz_policy)
    try:
        dt = datetime.fromisoformat(value)
    except ValueError:
        dt = date_parser.isoparse(value)
    return _to_ms(dt, tz_policy)


def format_timestamp(ms: int) -> str:
    """Canonical ISO-8601 rendering in UTC with millisecond precision."""
    return (EPOCH + timedelta(milliseconds=ms)).isoformat(timespec="milliseconds")


# -- CSV ----------------------------------------------------------------------


def parse_csv(
    path: str | Path | IO[str],
    mapping: ColumnMapping | None = None,
    tz_policy: str = "utc",
    *,
    time_format: str | None = None,
    delimiter: str = ",",
) -> EventLog:
    """Read a CSV event log.

    The header row is required. Rows with an empty case id or activity raise
    :class:`InvalidRow`, bad timestamps raise :class:`UnparseableTimestamp`.
    Row numbers count the header as row 1, matching what a spreadsheet shows.
    """
    mapping = mapping or ColumnMapping()
    if tz_policy not in TZ_POLICIES:
        raise ValueError(f"tz_policy must be one of {TZ_POLICIES}")
    if isinstance(path, (str, Path)):
        with open(path, newline="", encoding="utf-8-sig") as fh:
            return _read_csv(fh, mapping, tz_policy, time_format, delimiter, str(path))
    return _read_csv(path, mapping, tz_policy, time_format, delimiter, None)


def _read_csv(
    fh: IO[str],
    mapping: ColumnMapping,
    tz_policy: str,
    time_format: str | None,
    delimiter: str,
    source: str | None,
) -> EventLog:
    reader = csv.reader(fh, delimiter=delimiter)
    header = next(reader, None)
    if not header or all(not h.strip() for h in header):
        raise EmptyLog("CSV file is empty")
    header = [h.strip() for h in header]
    idx = {}
    for role in ("case_id", "activity", "timestamp"):
        col = getattr(mapping, role)
        if col not in header:
            raise MissingColumn(col, header)
        idx[role] = header.index(col)

    grouped: dict[str, list[Event]] = {}
    n_rows = 0
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < len(header):
            raise InvalidRow(row_no, f"expected {len(header)} fields, got {len(row)}")
        case_id = row[idx["case_id"]].strip()
        activity = row[idx["activity"]].strip()
        raw_ts = row[idx["timestamp"]]
        if not case_id:
            raise InvalidRow(row_no, "empty case id")
        if not activity:
            raise InvalidRow(row_no, "empty activity")
        try:
            ts = parse_timestamp(raw_ts, time_format, tz_policy)
        except (ValueError, OverflowError) as exc:
            raise UnparseableTimestamp(row_no, raw_ts) from exc
        if ts < 0:
            raise InvalidRow(row_no, "timestamp precedes the Unix epoch")
        grouped.setdefault(case_id, []).append(Event(activity, ts))
        n_rows += 1

    if not n_rows:
        raise EmptyLog("CSV file has a header but no events")
    cases = tuple(_make_case(cid, grouped[cid]) for cid in sorted(grouped))
    meta = SourceMeta(path=source, format="csv", mapping=mapping, row_count=n_rows)
    return EventLog(cases, meta)


def write_csv(log: EventLog, path: str | Path | IO[str], mapping: ColumnMapping | None = None) -> None:
    """Write ``log`` in the canonical CSV form that :func:`parse_csv` reads back."""
    mapping = mapping or ColumnMapping()

    def _write(fh: IO[str]) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([mapping.case_id, mapping.activity, mapping.timestamp])
        for case in log.cases:
            for e in case.events:
                writer.writerow([case.case_id, e.activity, format_timestamp(e.timestamp)])

    if isinstance(path, (str, Path)):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            _write(fh)
    else:
        _write(path)


def to_csv_text(log: EventLog) -> str:
    buf = io.StringIO()
    write_csv(log, buf)
    return buf.getvalue()


# -- XES ----------------------------------------------------------------------

_SUPPORTED_EXTENSIONS = {"concept", "time"}


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _direct_attr(elem: ET.Element, kind: str, key: str) -> str | None:
    for child in elem:
        if _local(child.tag) == kind and child.get("key") == key:
            return child.get("value")
    return None


def _open_xes(path: str | Path) -> IO[bytes]:
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rb")
    return open(path, "rb")


def parse_xes(path: str | Path, tz_policy: str = "utc") -> EventLog:
    """Read the ``concept:name`` / ``time:timestamp`` subset of an XES file.

    Gzip-compressed files (``.xes.gz``) are accepted. Declared extensions
    other than concept and time are ignored; their number is recorded in
    ``source_meta.ignored_extensions``. Traces without events are skipped.
    """
    cases: list[Case] = []
    ignored = 0
    n_events = 0
    trace_idx = -1
    depth = 0
    try:
        with _open_xes(path) as fh:
            for action, elem in ET.iterparse(fh, events=("start", "end")):
                tag = _local(elem.tag)
                if action == "start":
                    if tag == "trace":
                        trace_idx += 1
                        depth += 1
                    continue
                if tag == "extension" and depth == 0:
                    if elem.get("prefix") not in _SUPPORTED_EXTENSIONS:
                        ignored += 1
                elif tag == "trace":
                    depth -= 1
                    case = _read_trace(elem, trace_idx, tz_policy)
                    if case is not None:
                        cases.append(case)
                        n_events += len(case.events)
                    elem.clear()
    except ET.ParseError as exc:
        raise MalformedXml(f"{path}: {exc}") from exc

    if ignored:
        logger.warning("ignored %d unsupported XES extension(s) in %s", ignored, path)
    if not cases:
        raise EmptyLog(f"{path}: no traces with events")
    cases.sort(key=lambda c: c.case_id)
    meta = SourceMeta(path=str(path), format="xes", row_count=n_events, ignored_extensions=ignored)
    return EventLog(tuple(cases), meta)


def _read_trace(trace: ET.Element, trace_idx: int, tz_policy: str) -> Case | None:
    case_id = _direct_attr(trace, "string", "concept:name")
    if case_id is None or not case_id.strip():
        raise MissingRequiredAttribute(f"trace {trace_idx}", "concept:name")
    events = []
    for ev_idx, ev in enumerate(c for c in trace if _local(c.tag) == "event"):
        where = f"trace {trace_idx} event {ev_idx}"
        name = _direct_attr(ev, "string", "concept:name")
        stamp = _direct_attr(ev, "date", "time:timestamp")
        if name is None or not name.strip():
            raise MissingRequiredAttribute(where, "concept:name")
        if stamp is None:
            raise MissingRequiredAttribute(where, "time:timestamp")
        try:
            ts = parse_timestamp(stamp, None, tz_policy)
        except (ValueError, OverflowError) as exc:
            raise UnparseableTimestamp(where, stamp) from exc
        events.append(Event(name.strip(), ts))
    if not events:
        logger.info("skipping trace %d (%s): no events", trace_idx, case_id)
        return None
    return _make_case(case_id.strip(), events)


def parse_log(path: str | Path, fmt: str | None = None, **csv_kwargs) -> EventLog:
    """Dispatch on ``fmt`` (``"csv"``/``"xes"``) or on the file suffix."""
    if fmt is None:
        suffixes = Path(path).suffixes
        fmt = "xes" if ".xes" in suffixes else "csv"
    if fmt == "xes":
        return parse_xes(path, tz_policy=csv_kwargs.get("tz_policy", "utc"))
    if fmt == "csv":
        return parse_csv(path, **csv_kwargs)
    raise ValueError(f"unknown log format {fmt!r}")


# -- validation and sampling --------------------------------------------------


@dataclass(frozen=True)
class Finding:
    kind: str
    case_id: str | None = None
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def ok(self) -> bool:
        return not self.findings

    def by_kind(self) -> Counter:
        return Counter(f.kind for f in self.findings)


def validate(log: EventLog) -> ValidationReport:
    """Report structural defects without touching the log.

    Each repeated occurrence of a case id beyond its first is one
    ``DuplicateCaseId`` finding; empty and unsorted cases get one finding
    each; a log without cases gets a single ``EmptyLog`` finding.
    """
    findings: list[Finding] = []
    if not log.cases:
        findings.append(Finding("EmptyLog", None, "log has no cases"))
    seen: set[str] = set()
    for case in log.cases:
        if case.case_id in seen:
            findings.append(Finding("DuplicateCaseId", case.case_id, "case id occurs more than once"))
        seen.add(case.case_id)
        if not case.events:
            findings.append(Finding("EmptyCase", case.case_id, "case has no events"))
        ts = case.timestamps
        if any(a > b for a, b in zip(ts, ts[1:])):
            findings.append(Finding("UnsortedCase", case.case_id, "events not in timestamp order"))
    return ValidationReport(tuple(findings))


def sample_cases(log: EventLog, fraction: float, seed: int = 0) -> EventLog:
    """Keep a seeded random subset of whole cases (at least one)."""
    if not 0 < fraction <= 1:
        raise ValueError("fraction must be in (0, 1]")
    n = len(log.cases)
    k = max(1, round(n * fraction)) if n else 0
    keep = sorted(random.Random(seed).sample(range(n), k))
    cases = tuple(log.cases[i] for i in keep)
    meta = log.source_meta
    meta = SourceMeta(meta.path, meta.format, meta.mapping, sum(len(c) for c in cases), meta.ignored_extensions)
    return EventLog(cases, meta)
