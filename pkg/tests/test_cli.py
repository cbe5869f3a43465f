import json
from pathlib import Path

from mfskit import ReductionVerdict
from mfskit.cli import EXIT_INPUT, EXIT_OK, EXIT_RESOURCE, EXIT_VERIFY, main

GOLDEN = Path(__file__).parent / "golden"

EXAMPLE_CNF = "p cnf 3 3\n1 -2 0\n2 -3 0\n-1 -2 -3 0\n"


def run(capsys, argv, expect=EXIT_OK):
    code = main(argv)
    out = capsys.readouterr()
    assert code == expect, out.err or out.out
    return out


def test_generate_matches_golden(capsys, tmp_path):
    out = run(capsys, ["generate", "tree", "-n", "2", "--labels", "0100110"])
    assert out.out == (GOLDEN / "tree_n2.json").read_text()


def test_generate_seeded_deterministic(capsys):
    first = run(capsys, ["generate", "poulidor", "-n", "3", "--seed", "5"]).out
    second = run(capsys, ["generate", "poulidor", "-n", "3", "--seed", "5"]).out
    assert first == second


def test_generate_gentree_degenerate(capsys):
    out = run(capsys, ["generate", "gentree", "-n", "3", "-m", "0"])
    data = json.loads(out.out)
    assert len(data["vertices"]) == 1 and data["edges"] == []


def test_mfs_pipeline_matches_golden(capsys, tmp_path):
    graph = tmp_path / "g.json"
    run(capsys, ["generate", "tree", "-n", "2", "--labels", "0100110",
                 "--out", str(graph)])
    out = run(capsys, ["mfs", str(graph), "--length", "3"])
    report = json.loads(out.out)
    assert report.pop("elapsed_seconds") >= 0
    golden = json.loads((GOLDEN / "mfs_tree_n2.json").read_text())
    golden.pop("elapsed_seconds")
    assert report == golden


def test_mfs_worked_example(capsys, tmp_path):
    graph = tmp_path / "tree.json"
    run(capsys, ["generate", "tree", "-n", "3",
                 "--labels", "010011100100100", "--out", str(graph)])
    report = json.loads(run(capsys, ["mfs", str(graph), "--length", "4"]).out)
    assert (report["sequence"], report["count"]) == ("0010", 3)


def test_df_exact_matches_golden(capsys):
    out = run(capsys, ["df", "exact-tree", "-n", "2"])
    assert out.out == (GOLDEN / "df_exact_n2.json").read_text()


def test_df_exact_smallest(capsys):
    report = json.loads(run(capsys, ["df", "exact-tree", "-n", "1"]).out)
    assert report["success_probability"]["decimal"] == 0.75


def test_df_brute_equals_exact(capsys):
    exact = json.loads(run(capsys, ["df", "exact-tree", "-n", "2"]).out)
    brute = json.loads(
        run(capsys, ["df", "brute", "--protocol", "tree", "-n", "2"]).out
    )
    assert brute["expected_max"]["numerator"] == exact["expected_max"]["numerator"]
    assert brute["expected_max"]["denominator"] == exact["expected_max"]["denominator"]


def test_df_mc_reproducible(capsys):
    argv = ["df", "mc", "--protocol", "poulidor", "-n", "3",
            "--samples", "2000", "--seed", "21"]
    assert run(capsys, argv).out == run(capsys, argv).out


def test_df_exact_threads_match_serial(capsys):
    serial = run(capsys, ["df", "exact-tree", "-n", "3"]).out
    parallel = run(capsys, ["df", "exact-tree", "-n", "3", "--threads", "2"]).out
    assert serial == parallel


def test_df_sweep_csv(capsys):
    out = run(capsys, ["df", "exact-tree", "--sweep", "1:3", "--format", "csv"])
    lines = out.out.strip().splitlines()
    assert len(lines) == 4  # header + three rounds
    assert "success_probability.decimal" in lines[0]


def test_df_requires_rounds(capsys):
    run(capsys, ["df", "exact-tree"], expect=EXIT_INPUT)


def test_df_exact_refusal_exit_code(capsys):
    out = run(capsys, ["df", "exact-tree", "-n", "13"], expect=EXIT_RESOURCE)
    assert "float mode" in out.err


def test_df_float_force_overrides(capsys):
    out = run(capsys, ["df", "exact-tree", "-n", "4", "--float", "--force",
                       "--max-exact-rounds", "3"])
    report = json.loads(out.out)
    assert abs(report["success_probability"] - 0.2728901654) < 1e-9


def test_mfs_resource_refusal(capsys, tmp_path):
    graph = tmp_path / "g.json"
    run(capsys, ["generate", "tree", "-n", "3", "--out", str(graph)])
    run(capsys, ["mfs", str(graph), "--length", "4", "--mode", "walk",
                 "--max-walks", "4"], expect=EXIT_RESOURCE)


def test_bad_graph_file_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    out = run(capsys, ["mfs", str(bad), "--length", "2"], expect=EXIT_INPUT)
    assert "error" in out.err


def test_reduce_verify_example(capsys, tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text(EXAMPLE_CNF)
    graph_file = tmp_path / "red.json"
    out = run(capsys, ["reduce", str(cnf), "--out", str(graph_file), "--verify"])
    summary = json.loads(out.err)
    assert summary["equivalence_ok"] and summary["walk_lengths_ok"]
    assert summary["mfs_count"] == 3 and summary["satisfiable"]
    data = json.loads(graph_file.read_text())
    assert data["roles"]["0"] == "root"
    assert data["params"]["target_length"] == 6


def test_reduce_unsat_consistent(capsys, tmp_path):
    cnf = tmp_path / "u.cnf"
    cnf.write_text("p cnf 2 2\n1 0\n-1 0\n")
    out = run(capsys, ["reduce", str(cnf), "--verify"])
    summary = json.loads(out.err.split("\n{", 1)[0] if out.err.startswith("{")
                         else "{" + out.err.split("{", 1)[1])
    assert summary["satisfiable"] is False
    assert summary["mfs_count"] < summary["clause_count"]
    assert summary["equivalence_ok"]


def test_reduce_rejects_tautology(capsys, tmp_path):
    cnf = tmp_path / "t.cnf"
    cnf.write_text("p cnf 2 1\n1 -1 0\n")
    out = run(capsys, ["reduce", str(cnf)], expect=EXIT_INPUT)
    assert "tautology" in out.err


def test_reduce_verification_failure_exit_code(capsys, tmp_path, monkeypatch):
    import mfskit.cli as cli

    def fake_verify(formula, limits):
        return ReductionVerdict(
            ok=False, clause_count=3, mfs_count=1, mfs_sequence=(),
            satisfiable=True, assignment=None, detail="forced failure",
        )

    monkeypatch.setattr(cli, "verify_reduction", fake_verify)
    cnf = tmp_path / "f.cnf"
    cnf.write_text(EXAMPLE_CNF)
    run(capsys, ["reduce", str(cnf), "--verify"], expect=EXIT_VERIFY)


def test_simulate_honest(capsys):
    report = json.loads(
        run(capsys, ["simulate", "--protocol", "poulidor", "-n", "3",
                     "--trials", "100"]).out
    )
    assert report["rate"] == 1.0


def test_simulate_matches_golden(capsys):
    out = run(capsys, ["simulate", "--protocol", "tree", "-n", "2",
                       "--trials", "500", "--adversary", "early-reply",
                       "--seed", "9"])
    assert out.out == (GOLDEN / "simulate_tree_n2.json").read_text()


def test_simulate_transcript_export(capsys, tmp_path):
    path = tmp_path / "sessions.jsonl"
    run(capsys, ["simulate", "--protocol", "tree", "-n", "2", "--trials", "5",
                 "--transcripts", str(path)])
    lines = path.read_text().strip().splitlines()
    assert len(lines) == 5
    for line in lines:
        record = json.loads(line)
        assert record["accepted"] is True  # honest default


def test_simulate_needs_a_graph(capsys):
    run(capsys, ["simulate", "-n", "3"], expect=EXIT_INPUT)


def test_text_format(capsys):
    out = run(capsys, ["df", "exact-tree", "-n", "1", "--format", "text"])
    assert "success_probability" in out.out and "{" not in out.out
