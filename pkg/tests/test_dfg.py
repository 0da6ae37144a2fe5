"""Directly-follows graph mining and exports."""

from conftest import make_log
from procdrift.dfg import dfg_to_dot, dfg_to_json, filter_dfg, mine_dfg


def test_counts_on_small_log():
    dfg = mine_dfg(make_log(["abc", "abb", "ba"]))
    assert dfg.nodes == {"a": 3, "b": 4, "c": 1}
    assert dfg.arcs == {("a", "b"): 2, ("b", "c"): 1, ("b", "b"): 1, ("b", "a"): 1}
    assert dfg.starts == {"a": 2, "b": 1}
    assert dfg.ends == {"c": 1, "b": 1, "a": 1}


def test_single_event_traces_have_no_arcs():
    dfg = mine_dfg(make_log(["a", "a", "b"]))
    assert dfg.arcs == {}
    assert dfg.starts == {"a": 2, "b": 1}
    assert dfg.ends == {"a": 2, "b": 1}


def test_filter_drops_rare_arcs_keeps_nodes():
    dfg = mine_dfg(make_log(["abc", "abb", "ba"]))
    filtered = filter_dfg(dfg, min_arc_count=2)
    assert filtered.arcs == {("a", "b"): 2}
    assert filtered.nodes == dfg.nodes


def test_dot_output_structure():
    dot = dfg_to_dot(mine_dfg(make_log(["ab"])))
    assert dot.startswith("digraph")
    assert 'label="a\\n1"' in dot
    assert "->" in dot


def test_json_round_trippable_structure():
    data = dfg_to_json(mine_dfg(make_log(["abc", "ab"])))
    assert {n["activity"] for n in data["nodes"]} == {"a", "b", "c"}
    arc = next(a for a in data["arcs"] if a["source"] == "a")
    assert arc["target"] == "b"
    assert arc["count"] == 2
    assert data["starts"] and data["ends"]


def test_deterministic_ordering():
    log = make_log(["cab", "bac", "abc"])
    assert dfg_to_dot(mine_dfg(log)) == dfg_to_dot(mine_dfg(log))
    data = dfg_to_json(mine_dfg(log))
    acts = [n["activity"] for n in data["nodes"]]
    assert acts == sorted(acts)
