"""Survival series, transform identities, skeleton checks, and the simulators."""

import json
import math
from fractions import Fraction as F

import numpy as np
import pytest

from shockpgf import (
    NumericError,
    Segment,
    ShockModelParams,
    TailSequence,
    ValidationError,
    counterexample_Q,
    counterexample_params,
    exp_mixture_survival,
    laplace,
    mix,
    pgf_eval,
    point_mass,
    poisson_truncation_order,
    rate_mixture,
    sdfr_skeleton_check,
    simulate_de_finetti,
    simulate_failure_times,
    survival,
    tail_sequence,
    uniform_density,
)
from shockpgf.shock_model import _invert_tail

CE = counterexample_Q(counterexample_params("1/7", "2/3"))


def poisson_tail(mu: float, k: int) -> float:
    w, acc = math.exp(-mu), 0.0
    for i in range(k + 1):
        if i:
            w *= mu / i
        acc += w
    return 1.0 - acc


@pytest.mark.parametrize("mu", [0.3, 1.0, 4.0, 25.0])
@pytest.mark.parametrize("tol", [1e-6, 1e-12])
def test_poisson_truncation_order(mu, tol):
    k = poisson_truncation_order(mu, tol)
    assert poisson_tail(mu, k) < tol
    assert k >= mu  # Chernoff bound only bites past the mean


def test_poisson_truncation_edges():
    assert poisson_truncation_order(0.0, 1e-9) == 0
    with pytest.raises(ValidationError):
        poisson_truncation_order(-1.0, 1e-9)
    with pytest.raises(ValidationError):
        poisson_truncation_order(1.0, 2.0)


def test_survival_unit_atom_is_pure_exponential():
    t_seq = tail_sequence(point_mass(1), 50)
    params = ShockModelParams(lam="3/2")
    for t in (0.0, 0.25, 1.0, 4.0):
        assert abs(survival(t_seq, params, t) - math.exp(-1.5 * t)) < 1e-12


def test_survival_thinning_identity():
    # resistance 1/2 thins a rate-2 stream down to rate 1
    t_seq = tail_sequence(point_mass("1/2"), 200)
    params = ShockModelParams(lam=2)
    for t in (0.5, 1.0, 2.0, 4.0):
        assert abs(survival(t_seq, params, t) - math.exp(-t)) < 1e-10


def test_survival_basics():
    t_seq = tail_sequence(CE, 220)
    params = ShockModelParams(lam=1)
    assert survival(t_seq, params, 0) == 1.0
    grid = [k / 8 for k in range(1, 40)]
    vals = [survival(t_seq, params, t) for t in grid]
    assert all(b <= a + 1e-11 for a, b in zip(vals, vals[1:]))
    assert all(0.0 <= v <= 1.0 for v in vals)


def test_survival_guards():
    t_seq = tail_sequence(CE, 10)
    params = ShockModelParams(lam=1)
    with pytest.raises(ValidationError, match="too short"):
        survival(t_seq, params, 50.0)
    with pytest.raises(ValidationError, match="must be non-negative"):
        survival(t_seq, params, -1.0)
    bad = TailSequence.from_values((F(1), F(1, 2), F(3, 4)))
    with pytest.raises(ValidationError, match="not a valid tail sequence"):
        survival(bad, params, 1.0)


def test_laplace_reads_off_the_pgf():
    assert laplace(point_mass(1), 1, 1) == F(1, 2)
    assert laplace(point_mass("1/2"), 2, 2) == F(1, 3)
    for lam, s in ((1, 1), (2, F(1, 2)), (F(1, 2), 3)):
        assert laplace(CE, lam, s) == pgf_eval(CE, F(lam) / (lam + s))
    with pytest.raises(ValidationError):
        laplace(CE, 0, 1)
    with pytest.raises(ValidationError):
        laplace(CE, 1, 0)


def test_rate_mixture_rescales_support():
    assert rate_mixture(point_mass("1/2"), 2) == point_mass(1)
    assert rate_mixture(CE, 1) == CE
    g = rate_mixture(uniform_density(0, 1), 2)
    assert g.segments == (Segment(0, 2, F(1, 2)),)
    assert g.total_mass == 1
    with pytest.raises(ValidationError):
        rate_mixture(CE, 0)


def test_exp_mixture_survival_values():
    g = point_mass(3)
    assert exp_mixture_survival(g, 0) == 1
    assert abs(exp_mixture_survival(g, 2) - math.exp(-6)) < 1e-15
    with pytest.raises(ValidationError):
        exp_mixture_survival(g, -1)


@pytest.mark.parametrize("lam", [1, 2])
def test_exp_mixture_matches_survival_series(lam):
    """The failure time is exactly an exponential with rate lam*Y."""
    t_seq = tail_sequence(CE, 260)
    params = ShockModelParams(lam=lam)
    g = rate_mixture(CE, lam)
    for t in (0.25, 0.5, 1.0, 2.0, 4.0):
        direct = float(exp_mixture_survival(g, t))
        series = survival(t_seq, params, t)
        assert abs(direct - series) < 1e-9, (lam, t)


def test_skeleton_check_on_smooth_cases():
    t_seq = tail_sequence(point_mass("1/2"), 200)
    params = ShockModelParams(lam=1)
    ok, first = sdfr_skeleton_check(t_seq, params, 0.3, 8)
    assert ok and first is None


@pytest.mark.parametrize("delta", [0.1, 1.0])
def test_skeleton_check_counterexample_grid(delta):
    # the survival function itself stays completely monotone on these grids
    # even though the discrete tail sequence is not
    t_seq = tail_sequence(CE, 400)
    params = ShockModelParams(lam=1, series_tol=1e-13)
    ok, first = sdfr_skeleton_check(t_seq, params, delta, 8, n_points=30)
    assert ok, first


def test_skeleton_check_validation():
    t_seq = tail_sequence(point_mass(1), 20)
    params = ShockModelParams(lam=1)
    with pytest.raises(ValidationError):
        sdfr_skeleton_check(t_seq, params, 0.0, 4)
    with pytest.raises(ValidationError):
        sdfr_skeleton_check(t_seq, params, 0.5, 0)
    with pytest.raises(ValidationError):
        sdfr_skeleton_check(t_seq, params, 0.5, 4, n_points=3)


def test_invert_tail_body_and_continuations():
    tail = np.array([1.0, 0.5, 0.25])
    u = np.array([0.6, 0.5, 0.26, 0.9999])
    j = _invert_tail(tail, u, "none", None)
    assert list(j) == [1, 2, 2, 1]  # P(J = 0) is 1 - tail[0] = 0
    # below the stored range each model extends differently
    u = np.array([0.125, 0.124, 0.2])
    assert list(_invert_tail(tail, u, "geometric", 0.5)) == [3, 4, 3]
    tail2 = np.array([1.0, 0.5])
    # harmonic: P(J > j) continues as 0.5 * 2 / (j + 1)
    assert list(_invert_tail(tail2, np.array([0.25]), "harmonic", None)) == [4]
    assert list(_invert_tail(tail, np.array([0.1]), "none", None)) == [3]


def test_simulate_failure_times_unit_atom():
    params = ShockModelParams(lam=1, time_grid=(0.5, 1.0, 2.0))
    sim = simulate_failure_times(point_mass(1), params, 20000, 7, K=50)
    for t, e, se, a in zip(sim.times, sim.empirical, sim.std_err, sim.analytic):
        assert abs(a - math.exp(-t)) < 1e-10
        assert abs(e - a) < 3 * se


def test_simulate_failure_times_deterministic():
    params = ShockModelParams(lam=2, time_grid=(0.5, 1.0))
    a = simulate_failure_times(point_mass("1/2"), params, 5000, 42, K=120)
    b = simulate_failure_times(point_mass("1/2"), params, 5000, 42, K=120)
    assert a == b
    c = simulate_failure_times(point_mass("1/2"), params, 5000, 43, K=120)
    assert a.empirical != c.empirical


def test_simulate_failure_times_geometric_model():
    q = mix([(F(1, 2), point_mass("1/2")), (F(1, 2), point_mass(1))])
    params = ShockModelParams(lam=1, time_grid=(0.5, 1.0, 3.0))
    sim = simulate_failure_times(q, params, 20000, 3, tail_model="geometric", K=40)
    for e, se, a in zip(sim.empirical, sim.std_err, sim.analytic):
        assert abs(e - a) < 3.5 * se


def test_simulate_failure_times_harmonic_model():
    params = ShockModelParams(lam=1, time_grid=(0.5, 1.0, 2.0))
    sim = simulate_failure_times(CE, params, 20000, 11, tail_model="harmonic", K=200)
    for e, se, a in zip(sim.empirical, sim.std_err, sim.analytic):
        assert abs(e - a) < 3.5 * se


def test_simulate_refuses_silent_truncation():
    params = ShockModelParams(lam=1, time_grid=(1.0,))
    with pytest.raises(NumericError, match="tail_model"):
        simulate_failure_times(CE, params, 100, 0, K=200)
    with pytest.raises(ValidationError, match="unknown tail model"):
        simulate_failure_times(CE, params, 100, 0, tail_model="pareto")
    with pytest.raises(ValidationError, match="time_grid"):
        simulate_failure_times(point_mass(1), ShockModelParams(lam=1), 100, 0)


def test_simulation_error_shrinks_like_root_n():
    params = ShockModelParams(lam=1, time_grid=(1.0,))
    small = simulate_failure_times(point_mass("1/2"), params, 4000, 5, K=120)
    big = simulate_failure_times(point_mass("1/2"), params, 16000, 5, K=120)
    ratio = small.std_err[0] / big.std_err[0]
    assert abs(ratio - 2.0) < 0.2


def test_simulated_survival_report_shapes():
    params = ShockModelParams(lam=1, time_grid=(1.0, 2.0))
    sim = simulate_failure_times(point_mass(1), params, 500, 1, K=40)
    lines = sim.to_csv().splitlines()
    assert lines[0] == "t,empirical,std_err,analytic"
    assert len(lines) == 3
    doc = sim.to_json_dict()
    assert doc["n"] == 500 and doc["seed"] == 1
    assert [r["t"] for r in doc["rows"]] == [1.0, 2.0]
    json.dumps(doc)


def test_de_finetti_unit_atom_is_exact():
    sim = simulate_de_finetti(point_mass(1), (0.25, 0.5, 0.75), 400, 9)
    assert sim.empirical == sim.z  # N == 1 with certainty, so mean z**N == z
    assert sim.std_err == (0.0, 0.0, 0.0)
    assert sim.analytic == sim.z


def test_de_finetti_matches_pgf():
    q = uniform_density(0, 1)
    sim = simulate_de_finetti(q, ("1/4", "1/2", "3/4"), 20000, 13)
    for e, se, a in zip(sim.empirical, sim.std_err, sim.analytic):
        assert abs(e - a) < 3.5 * se
    rerun = simulate_de_finetti(q, ("1/4", "1/2", "3/4"), 20000, 13)
    assert sim == rerun


def test_de_finetti_guards():
    with pytest.raises(ValidationError, match="support"):
        simulate_de_finetti(CE, (0.5,), 100, 0)
    with pytest.raises(ValidationError, match="outside"):
        simulate_de_finetti(point_mass(1), (1.5,), 100, 0)
    with pytest.raises(ValidationError, match="non-empty"):
        simulate_de_finetti(point_mass(1), (), 100, 0)
    with pytest.raises(ValidationError, match="replicate count"):
        simulate_de_finetti(point_mass(1), (0.5,), 0, 0)
    with pytest.raises(ValidationError, match="seed"):
        simulate_de_finetti(point_mass(1), (0.5,), 100, -1)


def test_params_validation():
    with pytest.raises(ValidationError):
        ShockModelParams(lam=0)
    with pytest.raises(ValidationError):
        ShockModelParams(lam=1, series_tol=2.0)
    with pytest.raises(ValidationError):
        ShockModelParams(lam=1, time_grid=(1.0, 0.5))
    with pytest.raises(ValidationError):
        ShockModelParams(lam=1, time_grid=(-1.0,))
    p = ShockModelParams(lam="2/3", time_grid=(F(1, 2), 1))
    assert p.lam == F(2, 3) and p.time_grid == (0.5, 1.0)
