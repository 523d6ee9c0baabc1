"""Command-line entry point: ``timeline-dfg {discover,compare,synth}``.

Exit codes: 0 success, 2 usage error, otherwise the ``exit_code`` of the
raised :class:`~timeline_dfg.errors.TimelineDfgError` (3-17) or 20 for
file-system errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import InvalidConfig, InvalidRecipe, TimelineDfgError
from .event_log import ColumnMapping, EventLog, parse_log, sample_cases, validate, write_csv
from .pipeline import DiscoveryResult, discover
from .relative_time import AggregationMode
from .synth import LogRecipe, generate

logger = logging.getLogger("timeline_dfg")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 20

EMIT_TARGETS = {
    "timeline-dot": "timeline.dot",
    "standard-dot": "standard.dot",
    "stats-csv": "stats.csv",
    "stats-json": "stats.json",
    "comparison-json": "comparison.json",
    "dfg-json": "dfg.json",
}


@dataclass
class RunConfig:
    input: str | None = None
    format: str | None = None
    case_col: str = "case_id"
    activity_col: str = "activity"
    time_col: str = "timestamp"
    time_format: str | None = None
    delimiter: str = ","
    tz: str = "utc"
    agg: str = AggregationMode.GLOBAL_MEAN.value
    min_edge_freq: int = 1
    sample_cases: float | None = None
    seed: int | None = None
    out: str | None = None
    emit: list[str] = field(default_factory=lambda: list(EMIT_TARGETS))
    recipe: str | None = None

    @classmethod
    def from_sources(cls, file_values: dict, flag_values: dict) -> "RunConfig":
        """Merge a config file with CLI flags; flags that were given win."""
        known = set(cls.__dataclass_fields__)
        unknown = set(file_values) - known
        if unknown:
            raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
        merged = {**file_values, **{k: v for k, v in flag_values.items() if v is not None and k in known}}
        if isinstance(merged.get("emit"), str):
            merged["emit"] = [e.strip() for e in merged["emit"].split(",") if e.strip()]
        cfg = cls(**merged)
        cfg.check()
        return cfg

    def check(self) -> None:
        bad = [e for e in self.emit if e not in EMIT_TARGETS]
        if bad:
            raise InvalidConfig(f"unknown emit target(s) {bad}; choose from {sorted(EMIT_TARGETS)}")
        try:
            AggregationMode(self.agg)
        except ValueError:
            raise InvalidConfig(f"unknown aggregation {self.agg!r}") from None
        if int(self.min_edge_freq) < 1:
            raise InvalidConfig("--min-edge-freq must be >= 1")
        if self.sample_cases is not None and not 0 < float(self.sample_cases) <= 1:
            raise InvalidConfig("--sample-cases must be in (0, 1]")
        if self.format not in (None, "csv", "xes"):
            raise InvalidConfig(f"unknown format {self.format!r}")
        if self.tz not in ("utc", "reject"):
            raise InvalidConfig(f"unknown tz policy {self.tz!r}")

    @property
    def mapping(self) -> ColumnMapping:
        return ColumnMapping(self.case_col, self.activity_col, self.time_col)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise InvalidConfig(f"{path}: config must be a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def load_input(cfg: RunConfig) -> EventLog:
    if not cfg.input:
        raise InvalidConfig("an --input log is required")
    fmt = cfg.format
    if fmt == "xes" or (fmt is None and ".xes" in Path(cfg.input).suffixes):
        log = parse_log(cfg.input, "xes", tz_policy=cfg.tz)
    else:
        log = parse_log(
            cfg.input,
            "csv",
            mapping=cfg.mapping,
            tz_policy=cfg.tz,
            time_format=cfg.time_format,
            delimiter=cfg.delimiter,
        )
    if cfg.sample_cases is not None:
        log = sample_cases(log, float(cfg.sample_cases), cfg.seed or 0)
    report = validate(log)
    for f in report.findings:
        logger.warning("validation: %s %s %s", f.kind, f.case_id or "", f.detail)
    return log


def _summary(result: DiscoveryResult) -> str:
    cmp = result.comparison
    lines = [
        f"cases:       {result.log.n_cases}",
        f"events:      {result.log.n_events}",
        f"activities:  {len(result.dfg.activities)}",
        f"dfg edges:   {len(result.dfg.edges)}",
        f"axis nodes:  {len(result.axis.nodes)}",
        f"aggregation: {result.stats.aggregation.value}",
    ]
    if result.standard_ranks.cyclic_fallback:
        lines.append("note: no start activity; standard ranks use the cyclic fallback")
    return "\n".join(lines) + "\n\n" + cmp.table()


def _write_artifacts(result: DiscoveryResult, out: Path, targets: list[str]) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    content = {
        "timeline-dot": lambda: result.timeline_dot.text,
        "standard-dot": lambda: result.standard_dot.text,
        "stats-csv": result.stats.to_csv,
        "stats-json": result.stats.to_json,
        "comparison-json": result.comparison.to_json,
        "dfg-json": result.dfg.to_json,
    }
    written = []
    for target in targets:
        path = out / EMIT_TARGETS[target]
        path.write_text(content[target](), encoding="utf-8", newline="\n")
        written.append(path)
    return written


def run_discover(cfg: RunConfig, *, compare_only: bool = False) -> int:
    log = load_input(cfg)
    result = discover(log, cfg.agg, int(cfg.min_edge_freq))
    if compare_only:
        targets = ["comparison-json"] if cfg.out else []
    else:
        if not cfg.out:
            raise InvalidConfig("--out directory is required for discover")
        targets = cfg.emit
    if targets:
        for path in _write_artifacts(result, Path(cfg.out), targets):
            logger.info("wrote %s", path)
    sys.stdout.write(_summary(result))
    return EXIT_OK


def run_synth(cfg: RunConfig) -> int:
    if not cfg.recipe:
        raise InvalidRecipe("synth requires --recipe")
    if not cfg.out:
        raise InvalidConfig("--out directory is required for synth")
    recipe = LogRecipe.load(cfg.recipe)
    res = generate(recipe, cfg.seed)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(res.log, out / "log.csv")
    (out / "expected.json").write_text(res.expected_json(), encoding="utf-8", newline="\n")
    sys.stdout.write(f"generated {res.log.n_cases} cases, {res.log.n_events} events into {out}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="timeline-dfg", description="Timeline-aligned directly-follows graphs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def input_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON file with defaults for any flag")
        p.add_argument("--input")
        p.add_argument("--format", choices=["csv", "xes"])
        p.add_argument("--case-col", dest="case_col")
        p.add_argument("--activity-col", dest="activity_col")
        p.add_argument("--time-col", dest="time_col")
        p.add_argument("--time-format", dest="time_format", help="strptime pattern, epoch_ms or epoch_s")
        p.add_argument("--delimiter")
        p.add_argument("--tz", choices=["utc", "reject"], help="policy for naive timestamps")
        p.add_argument("--agg", choices=[m.value for m in AggregationMode])
        p.add_argument("--min-edge-freq", dest="min_edge_freq", type=int)
        p.add_argument("--sample-cases", dest="sample_cases", type=float, metavar="FRAC")
        p.add_argument("--seed", type=int)
        p.add_argument("--out")

    p_disc = sub.add_parser("discover", help="write timeline and standard DOT plus statistics")
    input_flags(p_disc)
    p_disc.add_argument("--emit", help=f"comma list from {','.join(EMIT_TARGETS)}")

    p_cmp = sub.add_parser("compare", help="print the contradiction comparison only")
    input_flags(p_cmp)

    p_syn = sub.add_parser("synth", help="generate a synthetic log from a recipe")
    p_syn.add_argument("--config")
    p_syn.add_argument("--recipe", required=False)
    p_syn.add_argument("--seed", type=int)
    p_syn.add_argument("--out")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config", "verbose")}
    try:
        cfg = RunConfig.from_sources(_load_config(args.config), flags)
        if args.command == "synth":
            return run_synth(cfg)
        return run_discover(cfg, compare_only=args.command == "compare")
    except TimelineDfgError as exc:
        sys.stderr.write(f"error [{type(exc).__name__}]: {exc}\n")
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(f"error [IOError]: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
