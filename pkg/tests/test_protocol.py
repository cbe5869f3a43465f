import itertools
import random

import pytest

from mfskit import (
    LabeledDigraph,
    ProtocolConfig,
    ProtocolError,
    early_reply,
    estimate_success_rate,
    exhaustive_challenge_success,
    greedy_early_reply,
    honest,
    label_graph_from_prf,
    make_poulidor,
    make_tree,
    most_frequent_sequence,
    occ_count,
    run_session,
)
from mfskit.protocol import AdversaryStrategy, PrfStream


# -- session labeling ------------------------------------------------------------


def test_prf_stream_bit_order():
    # bits() must agree with repeated single-bit extraction
    a = PrfStream(123)
    b = PrfStream(123)
    word = a.bits(100)
    assert word == sum(b.bits(1) << i for i in range(100))


def test_labeling_deterministic():
    g = make_tree(3)
    one = label_graph_from_prf(g, b"key", b"nv", b"np")
    two = label_graph_from_prf(g, b"key", b"nv", b"np")
    assert one == two
    other = label_graph_from_prf(g, b"key", b"nv2", b"np")
    assert one != other


def test_labeling_nonce_layout_is_unambiguous():
    g = make_tree(2)
    a = label_graph_from_prf(g, b"k", b"ab", b"c")
    b_ = label_graph_from_prf(g, b"k", b"a", b"bc")
    assert a != b_


def test_labeling_edge_labels_cover_both_bits():
    g = make_tree(3)
    labeled = label_graph_from_prf(g, b"key", b"x", b"y")
    for v in range(labeled.vertex_count):
        if labeled.out_degree(v) == 2:
            assert set(labeled.edge_labels[v]) == {"0", "1"}


def test_labeling_single_out_edge_gets_zero():
    g = LabeledDigraph(("0", "1"), ("0", "0"), ((1,), ()), (("0",), ()))
    labeled = label_graph_from_prf(g, b"key", b"x", b"y")
    assert labeled.edge_labels[0] == ("0",)


def test_labeling_rejects_high_out_degree():
    g = LabeledDigraph(("0", "1"), ("0",) * 4, ((1, 2, 3), (), (), ()))
    with pytest.raises(ProtocolError, match="out-degree 3"):
        label_graph_from_prf(g, b"key", b"x", b"y")


def test_vertex_labels_are_roughly_uniform():
    g = make_tree(2)
    trials = 20000
    ones = [0] * g.vertex_count
    for t in range(trials):
        nonce = t.to_bytes(4, "big")
        labeled = label_graph_from_prf(g, b"key", nonce, b"fixed")
        for v in range(g.vertex_count):
            ones[v] += labeled.labels[v] == "1"
    sigma = (0.25 / trials) ** 0.5
    for v, count in enumerate(ones):
        assert abs(count / trials - 0.5) <= 4 * sigma, f"vertex {v}: {count}"


# -- sessions ----------------------------------------------------------------------


def test_honest_always_accepts():
    for graph, rounds in ((make_tree(3), 3), (make_poulidor(3), 5)):
        config = ProtocolConfig(graph=graph, start=0, rounds=rounds, seed=2, trials=50)
        for t in range(50):
            transcript = run_session(config, honest(), trial_index=t)
            assert transcript.accepted
            assert transcript.failed_round is None
            assert all(r.response == r.expected for r in transcript.rounds)


def test_failed_timing_flag_rejects_at_that_round():
    config = ProtocolConfig(
        graph=make_tree(3), start=0, rounds=3, timing=(True, False, True)
    )
    transcript = run_session(config, honest())
    assert not transcript.accepted
    assert transcript.failed_round == 2


def test_timing_flags_must_cover_rounds():
    with pytest.raises(ValueError, match="cover every round"):
        ProtocolConfig(graph=make_tree(3), start=0, rounds=3, timing=(True,))


def test_transcript_json_shape():
    config = ProtocolConfig(graph=make_tree(2), start=0, rounds=2, seed=4)
    data = run_session(config, early_reply()).to_json_dict()
    assert set(data) == {
        "verifier_nonce", "prover_nonce", "rounds", "accepted", "failed_round",
    }
    assert len(data["rounds"]) == 2
    assert set(data["rounds"][0]) == {"challenge", "response", "expected", "timing_ok"}


def test_dead_end_walk_raises():
    g = LabeledDigraph(("0", "1"), ("0",), ((),), ((),))
    config = ProtocolConfig(graph=g, start=0, rounds=1)
    with pytest.raises(ProtocolError, match="dead-ends"):
        run_session(config, honest())


def test_fixed_replies_must_cover_rounds():
    config = ProtocolConfig(graph=make_tree(2), start=0, rounds=2)
    with pytest.raises(ValueError, match="cover 1 rounds, need 2"):
        run_session(config, early_reply("0"))


# -- the worked example ------------------------------------------------------------


def test_tree_example_early_reply_success(example_tree):
    accepted, total = exhaustive_challenge_success(example_tree, 0, 3)
    assert (accepted, total) == (3, 8)


def test_tree_example_forced_replies(example_tree):
    # the best reply is the suffix of the most frequent length-4 sequence
    accepted, _ = exhaustive_challenge_success(example_tree, 0, 3, replies="010")
    assert accepted == 3
    worse, _ = exhaustive_challenge_success(example_tree, 0, 3, replies="111")
    assert worse < 3


def test_early_reply_is_optimal_among_fixed_replies():
    rng = random.Random(8)
    for structure, rounds in ((make_tree(3), 3), (make_poulidor(4), 4)):
        for _ in range(5):
            labels = tuple(str(rng.getrandbits(1)) for _ in range(structure.vertex_count))
            labeled = structure.with_labels(labels)
            best = most_frequent_sequence(labeled, 0, rounds + 1).count
            mfs_accept, total = exhaustive_challenge_success(labeled, 0, rounds)
            assert mfs_accept == best
            for replies in itertools.product("01", repeat=rounds):
                accepted, _ = exhaustive_challenge_success(
                    labeled, 0, rounds, replies=replies
                )
                assert accepted <= mfs_accept
                # accepted challenge strings = walks matching the reply suffix
                full = (labeled.labels[0],) + replies
                assert accepted == occ_count(labeled, 0, full)


def test_full_length_max_equals_suffix_max():
    # prepending the fixed start label loses nothing: the best full-length
    # sequence is the start label plus the best reply suffix
    rng = random.Random(9)
    structure = make_tree(3)
    for _ in range(10):
        labels = tuple(str(rng.getrandbits(1)) for _ in range(structure.vertex_count))
        labeled = structure.with_labels(labels)
        full_best = most_frequent_sequence(labeled, 0, 4).count
        suffix_best = max(
            occ_count(labeled, 0, (labeled.labels[0],) + suffix)
            for suffix in itertools.product("01", repeat=3)
        )
        assert full_best == suffix_best


# -- rate estimation ---------------------------------------------------------------


def test_estimate_deterministic_and_consistent_with_sessions():
    config = ProtocolConfig(graph=make_tree(2), start=0, rounds=2, trials=150, seed=10)
    strategy = early_reply()
    report = estimate_success_rate(config, strategy)
    again = estimate_success_rate(config, strategy)
    assert report == again
    accepted = sum(
        run_session(config, strategy, trial_index=t).accepted
        for t in range(config.trials)
    )
    assert accepted == report.accepted


def test_honest_rate_is_one():
    config = ProtocolConfig(graph=make_poulidor(2), start=0, rounds=2, trials=300, seed=3)
    report = estimate_success_rate(config, honest())
    assert report.rate == 1.0
    assert report.std_error == 0.0


def test_early_reply_rate_brackets_exact_value():
    from mfskit import expected_max_tree

    exact = float(expected_max_tree(3).expected_max) / 8
    config = ProtocolConfig(graph=make_tree(3), start=0, rounds=3, trials=20000, seed=6)
    report = estimate_success_rate(config, early_reply())
    sigma = max(report.std_error, 1e-9)
    assert abs(report.rate - exact) <= 4 * sigma


def test_greedy_strategy_runs_and_is_not_better_than_exact_solver():
    config = ProtocolConfig(graph=make_tree(3), start=0, rounds=3, trials=4000, seed=12)
    greedy = estimate_success_rate(config, greedy_early_reply())
    optimal = estimate_success_rate(config, early_reply())
    noise = 4 * (greedy.std_error + optimal.std_error)
    assert greedy.rate <= optimal.rate + noise


def test_strategy_kind_validated():
    with pytest.raises(ValueError, match="unknown strategy"):
        AdversaryStrategy("replay")
