import math

import pytest

import wranking as wr


SINGLE_EDGE = {"offline": [{"id": "v1", "weight": 1.0}], "online": [{"id": "u1", "neighbors": ["v1"]}]}


def test_single_edge_matches():
    inst = wr.instance(SINGLE_EDGE)
    out = wr.run_ranking(inst, wr.GainSpec.half_exp(), {"ranks": {"u1": 0.3, "v1": 0.8}})
    assert out["pairs"] == [["u1", "v1"]]
    assert out["total_weight"] == 1.0
    assert out["duals"]["alpha"]["u1"] + out["duals"]["alpha"]["v1"] == 1.0


def test_invalid_instance_names_vertex():
    bad = {"offline": [{"id": "v1", "weight": -2.0}], "online": []}
    with pytest.raises(ValueError, match="negative weight v1"):
        wr.instance(bad)


def test_gain_values():
    he = wr.GainSpec.half_exp()
    assert he.h(math.log(2.0)) == pytest.approx(1.0)
    assert he.g(0.0, 1.0) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        he.h(1.5)


def test_bound_constants():
    _, _, simple = wr.minimize_bound(wr.GainSpec.simple_exp(), "simple", 64)
    assert simple == pytest.approx(1.25 - math.exp(-0.5), abs=1e-5)
    assert wr.improved_bound(wr.GainSpec.half_exp(), 0.0, 1.0) == pytest.approx(1 - math.log(2) / 2, abs=1e-9)
    assert wr.tau_star(wr.GainSpec.half_exp()) == pytest.approx(0.3574, abs=1e-3)


def test_opt_oracles_agree():
    inst = wr.generate_instance("weighted_random", 5, p=0.6, seed=3)
    assert wr.solve_opt(inst) == wr.brute_force_opt(inst)


def test_ratio_experiment_on_complete_graph():
    inst = wr.generate_instance("complete", 2)
    report = wr.ratio_experiment(inst, wr.GainSpec.half_exp(), 50)
    assert report["mean_ratio"] == 1.0


def test_pair_gain_and_thresholds_single_edge():
    inst = wr.instance(SINGLE_EDGE)
    ranks = wr.sample_ranks(inst, 5)
    est = wr.pair_gain(inst, wr.GainSpec.simple_exp(), ranks, "u1", "v1", 10)
    assert est["estimate"] == pytest.approx(1.0, abs=1e-15)
    prof = wr.compute_thresholds(inst, wr.GainSpec.simple_exp(), ranks, "u1", "v1", 5)
    assert all(p["beta"] == 0.0 and p["theta"] == 1.0 for p in prof["points"])


def test_conclusion_integral_trivial_profiles():
    profiles = {
        "theta": {"shape": "step", "knots": [0.0, 1.0], "values": [1.0]},
        "beta": {"shape": "step", "knots": [0.0, 1.0], "values": [0.0]},
    }
    assert wr.conclusion_integral(wr.GainSpec.half_exp(), profiles) == pytest.approx(1.0, abs=1e-12)


def test_property_suite_and_mutant():
    assert wr.property_suite(trials=50)["ok"]
    mutant = wr.property_suite(trials=300, inject_bug=True)
    mono = next(s for s in mutant["suites"] if s["name"] == "monotonicity")
    assert mono["violations"] > 0 and mono["repro_seed"] is not None
