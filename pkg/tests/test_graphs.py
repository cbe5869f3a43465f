import json

import pytest

from mfskit import (
    GraphError,
    GraphFormatError,
    LabeledDigraph,
    graph_from_dict,
    graph_to_dict,
    make_poulidor,
    read_graph,
    validate_binary_instance,
    write_graph,
)


def test_edge_targets_validated():
    with pytest.raises(GraphError, match="target 5"):
        LabeledDigraph(("0", "1"), ("0", "1"), ((1,), (5,)))


def test_labels_must_be_in_alphabet():
    with pytest.raises(GraphError, match="label 'x'"):
        LabeledDigraph(("0", "1"), ("0", "x"), ((), ()))


def test_out_edge_labels_must_differ():
    with pytest.raises(GraphError, match="duplicate out-edge labels"):
        LabeledDigraph(("0", "1"), ("0", "1"), ((1, 1), ()), (("0", "0"), ()))


def test_edge_label_shape_checked():
    with pytest.raises(GraphError, match="1 edge labels for 2"):
        LabeledDigraph(("0", "1"), ("0", "1"), ((1, 1), ()), (("0",), ()))


def test_binary_instance_accepts_protocol_graphs(example_tree, example_poulidor):
    assert validate_binary_instance(example_tree).ok
    assert validate_binary_instance(example_poulidor).ok


def test_binary_instance_single_vertex():
    g = LabeledDigraph(("0", "1"), ("0",), ((),))
    assert validate_binary_instance(g).ok


def test_binary_instance_flags_high_out_degree():
    g = LabeledDigraph(("0", "1"), ("0", "1", "0", "1"), ((1, 2, 3), (), (), ()))
    check = validate_binary_instance(g)
    assert not check.ok
    assert any("vertex 0" in v and "out-degree 3" in v for v in check.violations)


def test_binary_instance_flags_alphabet():
    g = LabeledDigraph(("0", "1", "2"), ("2",), ((),))
    check = validate_binary_instance(g)
    assert not check.ok
    assert any("alphabet" in v for v in check.violations)


def test_round_trip(tmp_path, example_tree):
    path = tmp_path / "tree.json"
    write_graph(example_tree, path)
    assert read_graph(path) == example_tree


def test_poulidor_serializes_to_expected_counts(tmp_path):
    g = make_poulidor(4, seed=3)
    path = tmp_path / "p.json"
    write_graph(g, path)
    data = json.loads(path.read_text())
    assert len(data["vertices"]) == 8
    assert len(data["edges"]) == 16


def test_dangling_edge_target_is_named(tmp_path):
    data = {
        "alphabet": ["0", "1"],
        "vertices": [{"id": 0, "label": "0"}],
        "edges": [{"from": 0, "to": 3}],
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(GraphFormatError, match=r"edges\[0\].*'to' vertex 3"):
        read_graph(path)


def test_malformed_json_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "alphabet": ["0", "1",\n}')
    with pytest.raises(GraphFormatError, match="line"):
        read_graph(path)


def test_duplicate_vertex_id_rejected():
    data = {
        "alphabet": ["0"],
        "vertices": [{"id": 0, "label": "0"}, {"id": 0, "label": "0"}],
        "edges": [],
    }
    with pytest.raises(GraphFormatError, match="duplicate id 0"):
        graph_from_dict(data)


def test_vertex_id_out_of_range_rejected():
    data = {
        "alphabet": ["0"],
        "vertices": [{"id": 0, "label": "0"}, {"id": 7, "label": "0"}],
        "edges": [],
    }
    with pytest.raises(GraphFormatError, match="id 7 is not in 0..1"):
        graph_from_dict(data)


def test_missing_top_level_key_rejected():
    with pytest.raises(GraphFormatError, match="missing required key 'edges'"):
        graph_from_dict({"alphabet": ["0"], "vertices": []})


def test_partial_edge_labels_rejected():
    data = {
        "alphabet": ["0", "1"],
        "vertices": [{"id": 0, "label": "0"}, {"id": 1, "label": "1"}],
        "edges": [
            {"from": 0, "to": 1, "edge_label": "0"},
            {"from": 1, "to": 0},
        ],
    }
    with pytest.raises(GraphFormatError, match="all edges carry edge_label or none"):
        graph_from_dict(data)


def test_names_survive_round_trip(example_tree):
    assert example_tree.names is not None
    data = graph_to_dict(example_tree)
    assert data["vertices"][0]["name"] == "root"
    assert graph_from_dict(data).names == example_tree.names


def test_successor_lookup(example_tree):
    assert example_tree.successor(0, "0") == 1
    assert example_tree.successor(0, "1") == 2
    assert example_tree.successor(7, "0") is None  # leaf
