"""Seeded synthetic event logs with closed-form expected occurrence times.

A recipe lists trace templates. Each template step names an activity and the
delay before it (fixed or uniform integer range, in ms). Loop specs repeat
every step of an activity back to back, each repetition preceded by the
step's own delay. The first event of a case defines its start, so the first
delay only shifts the case in absolute time.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import InvalidRecipe
from .event_log import Event, EventLog, SourceMeta, _make_case

DEFAULT_START_MS = 1_577_836_800_000  # 2020-01-01T00:00:00Z


@dataclass(frozen=True)
class Delay:
    low_ms: int
    high_ms: int

    @classmethod
    def fixed(cls, ms: int) -> "Delay":
        return cls(ms, ms)

    @property
    def mean_ms(self) -> float:
        return (self.low_ms + self.high_ms) / 2

    def sample(self, rng: random.Random) -> int:
        if self.low_ms == self.high_ms:
            return self.low_ms
        return rng.randint(self.low_ms, self.high_ms)


@dataclass(frozen=True)
class Step:
    activity: str
    delay: Delay = Delay(0, 0)


@dataclass(frozen=True)
class TraceTemplate:
    steps: tuple[Step, ...]
    weight: float = 1.0


@dataclass(frozen=True)
class LoopSpec:
    activity: str
    repetitions: int


@dataclass(frozen=True)
class LogRecipe:
    templates: tuple[TraceTemplate, ...]
    case_count: int
    loops: tuple[LoopSpec, ...] = ()
    seed: int = 0
    start_ms: int = DEFAULT_START_MS
    case_spacing_ms: int = 3_600_000

    @property
    def alphabet(self) -> list[str]:
        return sorted({s.activity for t in self.templates for s in t.steps})

    def validate(self) -> None:
        if not self.templates:
            raise InvalidRecipe("recipe needs at least one trace template")
        if self.case_count < 1:
            raise InvalidRecipe("case_count must be >= 1")
        if self.start_ms < 0 or self.case_spacing_ms < 0:
            raise InvalidRecipe("start_ms and case_spacing_ms must be non-negative")
        for i, t in enumerate(self.templates):
            if not t.steps:
                raise InvalidRecipe(f"template {i} has no steps")
            if not t.weight > 0:
                raise InvalidRecipe(f"template {i} weight must be positive")
            for s in t.steps:
                if not isinstance(s.activity, str) or not s.activity.strip() or s.activity != s.activity.strip():
                    raise InvalidRecipe(f"template {i}: bad activity name {s.activity!r}")
                if s.delay.low_ms < 0 or s.delay.high_ms < s.delay.low_ms:
                    raise InvalidRecipe(f"template {i}: bad delay range for {s.activity!r}")
        alphabet = set(self.alphabet)
        seen = set()
        for lp in self.loops:
            if lp.activity not in alphabet:
                raise InvalidRecipe(f"loop activity {lp.activity!r} not in any template")
            if lp.repetitions < 1:
                raise InvalidRecipe(f"loop repetitions for {lp.activity!r} must be >= 1")
            if lp.activity in seen:
                raise InvalidRecipe(f"duplicate loop spec for {lp.activity!r}")
            seen.add(lp.activity)

    def expand(self, template: TraceTemplate) -> list[Step]:
        reps = {lp.activity: lp.repetitions for lp in self.loops}
        return [s for s in template.steps for _ in range(reps.get(s.activity, 1))]

    # -- JSON -----------------------------------------------------------------

    def to_dict(self) -> dict:
        def delay(d: Delay):
            return d.low_ms if d.low_ms == d.high_ms else [d.low_ms, d.high_ms]

        return {
            "case_count": self.case_count,
            "seed": self.seed,
            "start_ms": self.start_ms,
            "case_spacing_ms": self.case_spacing_ms,
            "templates": [
                {"weight": t.weight, "steps": [{"activity": s.activity, "delay_ms": delay(s.delay)} for s in t.steps]}
                for t in self.templates
            ],
            "loops": [{"activity": lp.activity, "repetitions": lp.repetitions} for lp in self.loops],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LogRecipe":
        try:
            templates = []
            for t in data["templates"]:
                steps = []
                for s in t["steps"]:
                    d = s.get("delay_ms", 0)
                    delay = Delay(int(d[0]), int(d[1])) if isinstance(d, (list, tuple)) else Delay.fixed(int(d))
                    steps.append(Step(s["activity"], delay))
                templates.append(TraceTemplate(tuple(steps), float(t.get("weight", 1.0))))
            recipe = cls(
                templates=tuple(templates),
                case_count=int(data["case_count"]),
                loops=tuple(LoopSpec(lp["activity"], int(lp["repetitions"])) for lp in data.get("loops", [])),
                seed=int(data.get("seed", 0)),
                start_ms=int(data.get("start_ms", DEFAULT_START_MS)),
                case_spacing_ms=int(data.get("case_spacing_ms", 3_600_000)),
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise InvalidRecipe(f"malformed recipe: {exc!r}") from exc
        recipe.validate()
        return recipe

    @classmethod
    def load(cls, path: str | Path) -> "LogRecipe":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise InvalidRecipe(f"{path}: not valid JSON ({exc})") from exc
        return cls.from_dict(data)


@dataclass(frozen=True)
class SynthResult:
    log: EventLog
    expected_global_mean: dict[str, float]
    expected_per_case_mean: dict[str, float]
    template_choices: tuple[int, ...] = field(default=(), repr=False)

    def expected_json(self) -> str:
        payload = {
            a: {"global_mean_ms": self.expected_global_mean[a], "per_case_mean_ms": self.expected_per_case_mean[a]}
            for a in sorted(self.expected_global_mean)
        }
        return json.dumps(payload, indent=2) + "\n"


def expected_times(recipe: LogRecipe) -> tuple[dict[str, float], dict[str, float]]:
    """Limits of the global-mean and per-case-mean estimators.

    Global mean: ratio of expected time sum to expected occurrence count.
    Per-case mean: weighted average of each template's in-case mean over the
    templates that contain the activity.
    """
    total_w = sum(t.weight for t in recipe.templates)
    num: dict[str, float] = {}
    den: dict[str, float] = {}
    pc_num: dict[str, float] = {}
    pc_den: dict[str, float] = {}
    for t in recipe.templates:
        p = t.weight / total_w
        steps = recipe.expand(t)
        offset = 0.0
        local: dict[str, list[float]] = {}
        for k, s in enumerate(steps):
            if k:
                offset += s.delay.mean_ms
            local.setdefault(s.activity, []).append(offset)
        for a, times in local.items():
            num[a] = num.get(a, 0.0) + p * sum(times)
            den[a] = den.get(a, 0.0) + p * len(times)
            pc_num[a] = pc_num.get(a, 0.0) + p * sum(times) / len(times)
            pc_den[a] = pc_den.get(a, 0.0) + p
    return (
        {a: num[a] / den[a] for a in sorted(num)},
        {a: pc_num[a] / pc_den[a] for a in sorted(pc_num)},
    )


def generate(recipe: LogRecipe, seed: int | None = None) -> SynthResult:
    """Generate a log from ``recipe``; ``seed`` overrides ``recipe.seed``."""
    recipe.validate()
    if seed is not None:
        recipe = replace(recipe, seed=seed)
    rng = random.Random(recipe.seed)
    weights = [t.weight for t in recipe.templates]
    expanded = [recipe.expand(t) for t in recipe.templates]
    width = len(str(recipe.case_count - 1))
    cases = []
    choices = []
    for i in range(recipe.case_count):
        ti = rng.choices(range(len(weights)), weights=weights)[0] if len(weights) > 1 else 0
        choices.append(ti)
        t = recipe.start_ms + i * recipe.case_spacing_ms
        events = []
        for s in expanded[ti]:
            t += s.delay.sample(rng)
            events.append(Event(s.activity, t))
        cases.append(_make_case(f"case_{i:0{width}d}", events))
    n_events = sum(len(c.events) for c in cases)
    log = EventLog(tuple(cases), SourceMeta(format="synthetic", row_count=n_events))
    global_mean, per_case = expected_times(recipe)
    return SynthResult(log, global_mean, per_case, tuple(choices))


_SCALES = (1_000, 60_000, 3_600_000, 86_400_000, 2_592_000_000)


def random_recipe(seed: int, *, max_activities: int = 8, max_steps: int = 8, case_count: int | None = None) -> LogRecipe:
    """A random but valid recipe, for sweeps and property tests.

    Alphabets, template shapes, delay scales (seconds to months) and loops all
    vary with ``seed``. Activities may recur inside a template.
    """
    rng = random.Random(seed)
    n_act = rng.randint(1, max_activities)
    alphabet = [f"act_{i}" for i in range(n_act)]
    templates = []
    for _ in range(rng.randint(1, 4)):
        steps = []
        for _ in range(rng.randint(1, max_steps)):
            scale = rng.choice(_SCALES)
            lo = rng.randint(0, 5) * scale
            hi = lo if rng.random() < 0.4 else lo + rng.randint(1, 10) * scale
            steps.append(Step(rng.choice(alphabet), Delay(lo, hi)))
        templates.append(TraceTemplate(tuple(steps), float(rng.randint(1, 5))))
    used = sorted({s.activity for t in templates for s in t.steps})
    loops = tuple(LoopSpec(a, rng.randint(2, 3)) for a in used if rng.random() < 0.2)
    return LogRecipe(
        templates=tuple(templates),
        case_count=case_count if case_count is not None else rng.randint(5, 40),
        loops=loops,
        seed=seed,
    )
