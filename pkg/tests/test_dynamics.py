"""Integrators: analytic oracles, cross-solver agreement, failure modes."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from gnde import catalog as cat
from gnde import dynamics as dyn
from gnde import sampling as smp
from gnde.errors import DivergenceError, InvalidParameterError, NonConvergenceError
from gnde.neural import Activation, FilterBank, random_filter_bank

IDENT = Activation("identity")
TANH = Activation("tanh")


def _scalar_bank(h: float) -> FilterBank:
    return FilterBank(np.array(h).reshape(1, 1, 1, 1))


def test_scalar_exponential_dp5():
    # dX/dt = X with X(0) = 1 has X(t) = e^t
    s = np.array([[1.0]])
    z = np.array([[1.0]])
    cfg = dyn.SolverConfig(method="dp5", atol=1e-10, rtol=1e-10, eval_grid=4)
    traj = dyn.integrate(s, z, _scalar_bank(1.0), IDENT, 1.0, cfg)
    want = np.exp(traj.eval_times)
    assert np.allclose(traj.states[:, 0, 0], want, atol=1e-8, rtol=0.0)
    assert traj.states[0, 0, 0] == 1.0


def test_scalar_exponential_rk4():
    s = np.array([[1.0]])
    z = np.array([[1.0]])
    cfg = dyn.SolverConfig(method="rk4", eval_grid=4)
    traj = dyn.integrate(s, z, _scalar_bank(1.0), IDENT, 1.0, cfg)
    assert traj.states[-1, 0, 0] == pytest.approx(math.e, abs=1e-9)


def test_two_tap_scalar_rate():
    # with S = [[1]] both taps act as scalars: dX/dt = (h0 + h1) X
    s = np.array([[1.0]])
    z = np.array([[2.0]])
    bank = FilterBank(np.array([0.75, 0.5]).reshape(1, 1, 1, 2))
    cfg = dyn.SolverConfig(method="dp5", atol=1e-11, rtol=1e-11)
    traj = dyn.integrate(s, z, bank, IDENT, 1.0, cfg)
    assert traj.states[-1, 0, 0] == pytest.approx(2.0 * math.exp(1.25), abs=1e-8)


def test_time_varying_bank_analytic():
    # dX/dt = cos(pi t) X  =>  X(t) = exp(sin(pi t) / pi); horizon 2, T = 1
    s = np.array([[1.0]])
    z = np.array([[1.0]])
    coeffs = np.array([0.0, 1.0, 0.0]).reshape(1, 1, 1, 1, 3)
    bank = FilterBank(coeffs, time_law="fourier", modes=1, horizon=2.0)
    cfg = dyn.SolverConfig(method="dp5", atol=1e-11, rtol=1e-11, eval_grid=2)
    traj = dyn.integrate(s, z, bank, IDENT, 1.0, cfg)
    assert traj.states[1, 0, 0] == pytest.approx(math.exp(1.0 / math.pi), abs=1e-8)
    assert traj.states[2, 0, 0] == pytest.approx(1.0, abs=1e-8)


def _tent_system(n=8, seed=4, channels=2):
    rng = np.random.default_rng(seed)
    s = smp.graph_shift(smp.sample_weighted(cat.tent(), n))
    bank = random_filter_bank(2, channels, 2, rng)
    z = rng.normal(size=(n, channels))
    return s, z, bank


def test_dp5_matches_scipy_rk45():
    s, z, bank = _tent_system()
    n, F = z.shape

    def fun(t, y):
        return dyn.rhs(s, y.reshape(n, F), bank, TANH, t).ravel()

    ref = solve_ivp(
        fun, (0.0, 1.0), z.ravel(), method="RK45", atol=1e-11, rtol=1e-11
    )
    cfg = dyn.SolverConfig(method="dp5", atol=1e-9, rtol=1e-9, eval_grid=2)
    traj = dyn.integrate(s, z, bank, TANH, 1.0, cfg)
    gap = dyn.scaled_norm(traj.states[-1] - ref.y[:, -1].reshape(n, F))
    assert gap < 1e-7


def test_rk4_is_fourth_order():
    s, z, bank = _tent_system(seed=6)
    tight = dyn.SolverConfig(method="dp5", atol=1e-12, rtol=1e-12, eval_grid=1)
    ref = dyn.integrate(s, z, bank, TANH, 1.0, tight).states[-1]
    errs = []
    for step in (0.05, 0.025):
        cfg = dyn.SolverConfig(method="rk4", rk4_step=step, eval_grid=1)
        got = dyn.integrate(s, z, bank, TANH, 1.0, cfg).states[-1]
        errs.append(dyn.scaled_norm(got - ref))
    ratio = errs[0] / errs[1]
    # halving the step should shrink the error by about 2^4
    assert 12.0 <= ratio <= 20.0, ratio


def test_picard_matches_dp5():
    s, z, bank = _tent_system(n=12, seed=11)
    pic = dyn.SolverConfig(method="picard", eval_grid=10)
    ref = dyn.SolverConfig(method="dp5", atol=1e-11, rtol=1e-11, eval_grid=10)
    a = dyn.integrate(s, z, bank, TANH, 1.0, pic)
    b = dyn.integrate(s, z, bank, TANH, 1.0, ref)
    gap = max(
        dyn.scaled_norm(a.states[j] - b.states[j]) for j in range(a.eval_times.size)
    )
    assert gap < 1e-8
    assert a.solver_meta["method"] == "picard"


def test_picard_scale_guard():
    s = np.eye(100) / 100.0
    z = np.ones((100, 1))
    cfg = dyn.SolverConfig(method="picard")
    with pytest.raises(InvalidParameterError):
        dyn.integrate(s, z, _scalar_bank(1.0), IDENT, 1.0, cfg)
    with pytest.raises(InvalidParameterError):
        dyn.integrate(np.array([[1.0]]), np.ones((1, 1)), _scalar_bank(1.0), IDENT, 5.0, cfg)


def test_three_solver_agreement():
    s, z, bank = _tent_system(n=10, seed=20)
    results = {}
    for method in ("rk4", "dp5", "picard"):
        cfg = dyn.SolverConfig(method=method, eval_grid=5)
        results[method] = dyn.integrate(s, z, bank, TANH, 0.5, cfg)
    for a in ("rk4", "dp5"):
        for b in ("dp5", "picard"):
            gap = max(
                dyn.scaled_norm(results[a].states[j] - results[b].states[j])
                for j in range(6)
            )
            assert gap <= 1e-6, (a, b, gap)


def test_eval_grid_layout():
    s, z, bank = _tent_system(n=4)
    cfg = dyn.SolverConfig(method="rk4", eval_grid=7)
    traj = dyn.integrate(s, z, bank, TANH, 2.0, cfg)
    assert traj.eval_times.shape == (8,)
    assert traj.eval_times[0] == 0.0 and traj.eval_times[-1] == 2.0
    assert np.allclose(np.diff(traj.eval_times), 2.0 / 7.0, atol=1e-15)
    assert np.array_equal(traj.states[0], z)
    assert (traj.n, traj.F) == (4, 2)
    state = traj.state(3)
    assert isinstance(state, smp.FeatureMatrix)
    assert np.array_equal(state.values, traj.states[3])


def test_divergence_raises():
    s = np.array([[1.0]])
    z = np.array([[1.0]])
    cfg = dyn.SolverConfig(method="rk4", eval_grid=10)
    with pytest.raises(DivergenceError):
        dyn.integrate(s, z, _scalar_bank(1e3), IDENT, 1.0, cfg)


def test_dp5_step_budget():
    s, z, bank = _tent_system()
    cfg = dyn.SolverConfig(method="dp5", atol=1e-12, rtol=1e-12, max_steps=3)
    with pytest.raises(NonConvergenceError) as err:
        dyn.integrate(s, z, bank, TANH, 1.0, cfg)
    assert err.value.last_time is not None


def test_input_validation():
    s, z, bank = _tent_system(n=5)
    cfg = dyn.SolverConfig()
    with pytest.raises(InvalidParameterError):
        dyn.integrate(s, z, bank, TANH, 0.0, cfg)
    with pytest.raises(InvalidParameterError):
        dyn.integrate(np.triu(s), z, bank, TANH, 1.0, cfg)
    with pytest.raises(InvalidParameterError):
        dyn.integrate(s, z[:3], bank, TANH, 1.0, cfg)
    with pytest.raises(InvalidParameterError):
        dyn.integrate(s, z[:, :1], bank, TANH, 1.0, cfg)
    with pytest.raises(InvalidParameterError):
        dyn.integrate(s, z, bank, np.tanh, 1.0, cfg)
    with pytest.raises(InvalidParameterError):
        dyn.SolverConfig(method="euler")
    with pytest.raises(InvalidParameterError):
        dyn.SolverConfig(eval_grid=0)
    with pytest.raises(InvalidParameterError):
        dyn.SolverConfig(atol=0.0)
    with pytest.raises(InvalidParameterError):
        dyn.SolverConfig(rk4_step=-0.1)


def test_equivariance_check_tiny_gap():
    s, z, bank = _tent_system(n=9, seed=3)
    rng = np.random.default_rng(40)
    perm = rng.permutation(9)
    cfg = dyn.SolverConfig(method="rk4", eval_grid=10)
    gap = dyn.equivariance_check(s, z, bank, TANH, 1.0, cfg, perm)
    assert gap <= 1e-9
    with pytest.raises(InvalidParameterError):
        dyn.equivariance_check(s, z, bank, TANH, 1.0, cfg, perm[:5])


def test_scaled_norm_definition():
    v = np.array([[3.0, 4.0], [0.0, 0.0]])
    # frobenius 5 over sqrt(2)
    assert dyn.scaled_norm(v) == pytest.approx(5.0 / math.sqrt(2.0), abs=1e-15)


def test_write_trajectory(tmp_path):
    s, z, bank = _tent_system(n=3, channels=2)
    cfg = dyn.SolverConfig(method="rk4", eval_grid=4)
    traj = dyn.integrate(s, z, bank, TANH, 1.0, cfg)
    path = tmp_path / "traj.csv"
    dyn.write_trajectory(traj, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t," + ",".join(f"x_{i}_{f}" for i in range(3) for f in range(2))
    assert len(lines) == 6
    back = np.asarray(
        [[float(x) for x in row.split(",")] for row in lines[1:]]
    )
    assert np.array_equal(back[:, 0], traj.eval_times)
    assert np.array_equal(back[:, 1:].reshape(5, 3, 2), traj.states)
    meta = (tmp_path / "traj.csv.meta.txt").read_text()
    assert "method=rk4" in meta
