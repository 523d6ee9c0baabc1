from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import brute_force_longest_path, parse_dot
from strategies import event_logs
from timeline_dfg.dfg import Dfg, discover_dfg
from timeline_dfg.errors import EmptyDfg, UnmappedActivity
from timeline_dfg.event_log import EventLog, parse_csv
from timeline_dfg.layout import (
    RenderOptions,
    assign_ranks,
    emit_standard_dot,
    emit_timeline_dot,
    longest_path_ranks,
    plan_layout,
)
from timeline_dfg.pipeline import discover
from timeline_dfg.relative_time import activity_stats, transform_relative
from timeline_dfg.timeline import build_axis


def chain_dfg(acts: str = "abc") -> Dfg:
    log = EventLog.from_traces({"1": [(a, i) for i, a in enumerate(acts)]})
    return discover_dfg(log)


def toy_plan():
    dfg = chain_dfg()
    axis, mapping = build_axis({"a": 0, "b": 180_000, "c": 240_000})
    return plan_layout(dfg, axis, mapping)


def test_plan_toy():
    plan = toy_plan()
    labels = {n.node_id: n.label.text for n in plan.axis.nodes}
    assert [(labels[n], m) for n, m in plan.subgraphs] == [("0s", ("a",)), ("3m", ("b",)), ("4m", ("c",))]


def test_plan_single_label():
    dfg = chain_dfg("abcd")
    axis, mapping = build_axis({a: 1_000 for a in "abcd"})
    plan = plan_layout(dfg, axis, mapping)
    assert len(plan.subgraphs) == 1
    assert plan.subgraphs[0][1] == ("a", "b", "c", "d")


def test_plan_partition_24_activities():
    rng = random.Random(24)
    acts = [f"task {i:02d}" for i in range(24)]
    traces = {f"c{k}": [(rng.choice(acts), rng.randint(0, 10**9)) for _ in range(12)] for k in range(80)}
    for a in acts:
        traces[f"cover_{a}"] = [(a, 0)]
    log = EventLog.from_traces(traces)
    stats = activity_stats(transform_relative(log))
    dfg = discover_dfg(log)
    axis, mapping = build_axis(stats)
    plan = plan_layout(dfg, axis, mapping)
    members = [a for _, ms in plan.subgraphs for a in ms]
    assert len(members) == len(set(members)) == 24
    assert set(members) == dfg.activities
    assert len(plan.subgraphs) == len(axis.nodes)


def test_plan_unmapped():
    dfg = chain_dfg()
    axis, mapping = build_axis({"a": 0, "b": 1})
    with pytest.raises(UnmappedActivity) as exc:
        plan_layout(dfg, axis, mapping)
    assert exc.value.activity == "c"


def test_toy_emission_structure():
    parsed = parse_dot(emit_timeline_dot(toy_plan()).text)
    assert parsed["graph_attrs"]["layout"] == "dot"
    assert sorted(parsed["labels"].values()) == ["0s", "3m", "4m", "a", "b", "c"]
    assert sorted(parsed["bold_edges"]) == [("0s", "3m", 3), ("3m", "4m", 1)]
    assert sorted((s, d) for s, d, _ in parsed["edges"]) == [("a", "b"), ("b", "c")]
    assert [r["members"] for r in parsed["ranks"]] == [{"0s", "a"}, {"3m", "b"}, {"4m", "c"}]
    assert all(r["rank"] == "same" for r in parsed["ranks"])


def test_axis_nodes_are_rectangles():
    text = emit_timeline_dot(toy_plan()).text
    assert "node [shape=rect" in text
    parsed = parse_dot(text)
    assert all(parsed["node_attrs"][n].get("shape") in (None, "rect") for n in parsed["labels"])


def test_one_activity_no_edges():
    dfg = chain_dfg("a")
    axis, mapping = build_axis({"a": 0})
    parsed = parse_dot(emit_timeline_dot(plan_layout(dfg, axis, mapping)).text)
    assert parsed["node_count"] == 2 and parsed["edge_count"] == 0
    assert [r["members"] for r in parsed["ranks"]] == [{"0s", "a"}]


def test_awkward_activity_names_survive():
    names = ['say "hi"', "back\\slash", "node", "multi\nline", "subgraph", "-> arrow"]
    log = EventLog.from_traces({"1": [(n, i * 60_000) for i, n in enumerate(names)]})
    res = discover(log)
    parsed = parse_dot(res.timeline_dot.text)
    assert set(names) <= set(parsed["labels"].values())
    std = parse_dot(res.standard_dot.text)
    assert set(names) <= set(std["labels"].values())


def test_emission_is_deterministic():
    plan = toy_plan()
    assert emit_timeline_dot(plan).text == emit_timeline_dot(plan).text
    opts = RenderOptions(show_frequencies=False, graph_name="g")
    assert emit_timeline_dot(plan, opts).text.startswith("digraph g {")


def test_standard_chain():
    parsed = parse_dot(emit_standard_dot(chain_dfg()).text)
    pairs = {(s, d) for s, d, _ in parsed["edges"]}
    assert pairs == {("", "a"), ("a", "b"), ("b", "c"), ("c", "")}
    assert parsed["ranks"] == [] and parsed["bold_edges"] == []


def test_standard_vs_timeline_node_sets():
    res = discover(parse_csv("tests/data/golden_toy.csv"))
    tl = parse_dot(res.timeline_dot.text)
    std = parse_dot(res.standard_dot.text)
    axis_labels = {n.label.text for n in res.axis.nodes}
    markers = {"start", "end"}
    assert set(std["labels"]) - markers == set(tl["labels"]) - {n.node_id for n in res.axis.nodes}
    assert set(tl["labels"].values()) - axis_labels == {"a", "b", "c"}


@given(event_logs())
def test_standard_edge_labels_are_frequencies(log):
    dfg = discover_dfg(log)
    doc = emit_standard_dot(dfg)
    ids = {v: k[1] for k, v in doc.node_ids.items() if k[0] == "activity"}
    import pydot

    g = pydot.graph_from_dot_data(doc.text)[0]
    seen = {}
    for e in g.get_edges():
        s, d = e.get_source(), e.get_destination()
        if s in ids and d in ids:
            seen[(ids[s], ids[d])] = int(e.get("label").strip('"'))
    assert seen == dfg.edges


def test_standard_empty():
    with pytest.raises(EmptyDfg):
        emit_standard_dot(Dfg(frozenset()))


# -- ranks --------------------------------------------------------------------


def test_timeline_ranks_toy():
    assert assign_ranks(toy_plan()).ranks == {"a": 0, "b": 1, "c": 2}


def test_standard_chain_ranks():
    r = assign_ranks(chain_dfg())
    assert r.ranks == {"a": 0, "b": 1, "c": 2}
    assert r.method == "longest-path" and not r.cyclic_fallback


def random_dag(seed: int, n: int = 10) -> tuple[list[str], set[tuple[str, str]]]:
    rng = random.Random(seed)
    nodes = [f"n{i}" for i in range(n)]
    rng.shuffle(nodes)
    edges = {(nodes[i], nodes[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3}
    return nodes, edges


@pytest.mark.parametrize("seed", range(30))
def test_longest_path_matches_brute_force(seed):
    nodes, edges = random_dag(seed)
    indeg = {n: 0 for n in nodes}
    for _, d in edges:
        indeg[d] += 1
    dfg = Dfg(frozenset(nodes), {e: 1 for e in edges}, {n: 1 for n in nodes if indeg[n] == 0}, {})
    assert longest_path_ranks(dfg).ranks == brute_force_longest_path(nodes, edges)


def test_cycle_is_broken_deterministically():
    log = EventLog.from_traces({"1": [(a, i) for i, a in enumerate("abcab")]})
    r = assign_ranks(discover_dfg(log))
    assert r.ranks == {"a": 0, "b": 1, "c": 2}


def test_cyclic_only_graph_falls_back():
    dfg = Dfg(frozenset("xyz"), {("x", "y"): 1, ("y", "z"): 1, ("z", "x"): 1}, {}, {})
    r = assign_ranks(dfg)
    assert r.cyclic_fallback
    assert r.ranks == {"x": 0, "y": 1, "z": 2}


@given(event_logs(), st.integers(1, 3))
def test_ranks_cover_all_activities(log, k):
    from timeline_dfg.dfg import filter_dfg

    dfg = filter_dfg(discover_dfg(log), k)
    r = assign_ranks(dfg)
    assert set(r.ranks) == dfg.activities
    assert all(v >= 0 for v in r.ranks.values())
    assert assign_ranks(dfg) == r


def test_assign_ranks_type_error():
    with pytest.raises(TypeError):
        assign_ranks({"a": 1})
