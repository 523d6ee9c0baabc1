from __future__ import annotations

import pytest

from timeline_dfg.errors import InvalidRecipe
from timeline_dfg.event_log import to_csv_text, validate
from timeline_dfg.relative_time import activity_stats, transform_relative
from timeline_dfg.synth import Delay, LogRecipe, LoopSpec, Step, TraceTemplate, expected_times, generate, random_recipe


def abc_recipe(cases: int = 10) -> LogRecipe:
    steps = (Step("a", Delay.fixed(0)), Step("b", Delay.fixed(180_000)), Step("c", Delay.fixed(60_000)))
    return LogRecipe((TraceTemplate(steps),), cases)


def test_fixed_delays():
    res = generate(abc_recipe())
    assert res.log.n_cases == 10 and res.log.n_events == 30
    assert res.expected_global_mean == {"a": 0.0, "b": 180_000.0, "c": 240_000.0}
    stats = activity_stats(transform_relative(res.log))
    assert {a: stats.g(a) for a in stats} == res.expected_global_mean


def test_loop_matches_hand_computation():
    steps = (Step("A", Delay.fixed(0)), Step("B", Delay.fixed(60_000)), Step("C", Delay.fixed(30_000)))
    recipe = LogRecipe((TraceTemplate(steps),), 3, loops=(LoopSpec("B", 2),))
    res = generate(recipe)
    # A@0, B@60s, B@120s, C@150s
    assert res.log.cases[0].activities == ("A", "B", "B", "C")
    assert res.expected_per_case_mean["B"] == 90_000
    stats = activity_stats(transform_relative(res.log), "per-case-mean")
    assert stats.g("B") == 90_000


def test_mixture_expectations():
    t1 = TraceTemplate((Step("a"), Step("b", Delay.fixed(100))), weight=3)
    t2 = TraceTemplate((Step("a"), Step("b", Delay.fixed(100)), Step("b", Delay.fixed(100))), weight=1)
    glob, per_case = expected_times(LogRecipe((t1, t2), 1))
    # global: (0.75*100 + 0.25*(100+200)) / (0.75 + 0.5)
    assert glob["b"] == pytest.approx(150 / 1.25)
    # per case: 0.75*100 + 0.25*150
    assert per_case["b"] == pytest.approx(112.5)


def test_uniform_delays_converge():
    steps = (
        Step("a", Delay(0, 5_000)),
        Step("b", Delay(60_000, 300_000)),
        Step("c", Delay(3_600_000, 18_000_000)),
        Step("d", Delay(86_400_000, 3 * 86_400_000)),
    )
    recipe = LogRecipe(
        (TraceTemplate(steps, 2.0), TraceTemplate(steps[:2] + steps[3:], 1.0)),
        10_000,
        loops=(LoopSpec("c", 2),),
        seed=17,
    )
    res = generate(recipe)
    for mode, expected in (("global-mean", res.expected_global_mean), ("per-case-mean", res.expected_per_case_mean)):
        stats = activity_stats(transform_relative(res.log), mode)
        for a, want in expected.items():
            if want == 0:
                assert stats.g(a) == 0
            else:
                assert abs(stats.g(a) - want) / want <= 0.02


def test_seed_determinism():
    r = random_recipe(7)
    assert to_csv_text(generate(r).log) == to_csv_text(generate(r).log)
    assert to_csv_text(generate(r, seed=8).log) != to_csv_text(generate(r, seed=9).log)


@pytest.mark.parametrize("seed", range(40))
def test_generated_logs_validate(seed):
    assert validate(generate(random_recipe(seed)).log).ok


def test_json_round_trip():
    r = random_recipe(3)
    assert LogRecipe.from_dict(r.to_dict()) == r


@pytest.mark.parametrize(
    "data",
    [
        {"case_count": 1, "templates": []},
        {"case_count": 0, "templates": [{"steps": [{"activity": "a"}]}]},
        {"case_count": 1, "templates": [{"steps": [{"activity": "a", "delay_ms": -5}]}]},
        {"case_count": 1, "templates": [{"steps": [{"activity": "a", "delay_ms": [9, 3]}]}]},
        {"case_count": 1, "templates": [{"steps": [{"activity": ""}]}]},
        {"case_count": 1, "templates": [{"weight": 0, "steps": [{"activity": "a"}]}]},
        {"case_count": 1, "templates": [{"steps": [{"activity": "a"}]}], "loops": [{"activity": "q", "repetitions": 2}]},
        {"case_count": 1, "templates": [{"steps": [{"activity": "a"}]}], "loops": [{"activity": "a", "repetitions": 0}]},
        {"templates": [{"steps": [{"activity": "a"}]}]},
    ],
)
def test_invalid_recipes(data):
    with pytest.raises(InvalidRecipe):
        LogRecipe.from_dict(data)
