import math

import pytest

import rfh


def guard_zone_params():
    p = rfh.NetworkParams()
    p.alpha = 4
    p.eta = 0.1
    p.d_p = p.d_s = 0.5
    p.r_g = 3
    p.r_h = 1
    p.lambda_p_total = 0.01
    p.lambda_s = 0.1
    p.power_p = 2
    p.power_s = 0.1
    p.theta_p = p.theta_s = 5
    p.eps_p = 0.2
    p.eps_s = 0.3
    return p


def test_phi():
    assert rfh.phi(4) == pytest.approx(math.pi**2 / 2, rel=1e-14)


def test_json_round_trip():
    p = guard_zone_params()
    assert rfh.NetworkParams.from_json(p.to_json()) == p


def test_validation_error():
    p = guard_zone_params()
    p.alpha = 2
    with pytest.raises(ValueError, match="alpha"):
        p.validate()


def test_optimizer():
    r = rfh.solve_p1_closed_form(guard_zone_params())
    assert r.p_s_star == pytest.approx(0.24357268142019836, rel=1e-12)
    assert r.primary_binding and r.secondary_binding


def test_simulation_matches_analysis():
    p = guard_zone_params()
    p.power_s = 0.05
    est = rfh.estimate_p_t(p, slots=500, replications=2, activity="fresh")
    ref = rfh.transmission_probability(p).value()
    assert abs(est.mean - ref) <= est.half_width


def test_analyze_csv():
    text = rfh.analyze(guard_zone_params(), ["power_s=0.05:0.1:2"])
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    assert len(rows) == 3
