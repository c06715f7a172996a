import math

import pytest

import uwajam


def test_channel_functions():
    assert uwajam.absorption_db_per_km(1.0) == pytest.approx(0.06900409, rel=1e-7)
    env = uwajam.EnvironmentConfig()
    assert uwajam.pathloss_db(env, 1000.0) == pytest.approx(49.8916, rel=1e-6)
    assert uwajam.lt_fading(1.0, 2.0).real == pytest.approx(math.exp(-2.0 / 3.0) / 3.0)
    assert uwajam.marcum_q1(0.0, 1.5) == pytest.approx(math.exp(-1.125))


def test_presets_and_config_round_trip():
    deep = uwajam.preset("deep")
    assert deep.env.dmax_km == pytest.approx(math.sqrt(104.0))
    again = uwajam.load_config_text(deep.dump())
    assert again.dump() == deep.dump()
    with pytest.raises(ValueError, match="spreading_factor"):
        uwajam.load_config_text("spreading_factor = 3\n")
    with pytest.raises(uwajam.ConfigError):
        uwajam.load_config_text("not a key value line\n")


def test_no_jammer_coverage_matches_closed_form():
    s = uwajam.preset("mid", 0.0)
    an = uwajam.LinkAnalyzer(s)
    k = s.link.tx_power / 10 ** (uwajam.pathloss_db(s.env, 3000.0) / 10)
    b = math.sqrt(s.link.sjnr_threshold * an.noise_power / k)
    assert an.conditional_coverage(3.0) == pytest.approx(uwajam.marcum_q1(math.sqrt(s.psi), b), abs=1e-5)


def test_simulate_agrees_with_analysis_and_is_deterministic():
    s = uwajam.preset("shallow")
    sim = uwajam.simulate(s, n_trials=100000, seed=5, workers=2)
    again = uwajam.simulate(s, n_trials=100000, seed=5, workers=1)
    assert sim["coverage"].value == again["coverage"].value
    cov = uwajam.coverage(s)
    assert abs(sim["coverage"].value - cov) <= 4 * sim["coverage"].stderr
    ee = uwajam.energy_efficiency(s)
    assert ee == pytest.approx(s.env.bandwidth_hz * uwajam.average_rate(s) / 21.5)


def test_sweep_and_validate():
    csv, failures = uwajam.sweep_csv(
        "axis = jam_power\nvalues = 10, 60\nscenarios = shallow\nengines = montecarlo\ntrials = 2000\n", 1
    )
    assert failures == []
    lines = csv.strip().split("\n")
    assert lines[0] == "scenario,engine,axis,axis_value,metric,value,stderr,ci_lo,ci_hi"
    assert len(lines) == 1 + 2 * 4
    ok, rows = uwajam.validate(uwajam.preset("deep", 0.0), n_trials=20000, seed=3)
    assert ok
    assert {r["metric"] for r in rows} == {"coverage", "avg_rate_se", "avg_rate_bps", "ee"}
