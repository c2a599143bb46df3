"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are
printed even when output capturing is on.
"""

import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from catqng import fock
from catqng.cli import main
from catqng.optimize import epsilon_max, optimize_odd, s_opt_analytic
from catqng.phase_space import (
    TWO_OVER_PI,
    CatParams,
    convolve_wigner_quadrature,
    evolved_moments,
    initial_moments,
    loss_convolution,
    lossy_cat_wigner,
)
from catqng.witness import GaussianOp, hull_bound, op_photon_number, witness_delta

EPS_99 = np.linspace(0.01, 0.99, 99)


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'}  acceptance {number} {title}: {detail}")
        return ok

    return emit


def test_oracle_equivalence(report):
    rng = np.random.default_rng(20240611)
    n_tuples = 210
    err_quad = err_fock = err_mom = 0.0
    n_quad = 0
    for k in range(n_tuples):
        alpha = float(rng.uniform(0.1, 2.0))
        xi = float((-1.0, 0.0, 1.0)[k % 3])
        eps = float((0.0, 1.0)[k % 2]) if k % 35 == 0 else float(rng.uniform(0.0, 1.0))
        r = (alpha + 2.0) * math.sqrt(rng.uniform())
        lam = r * np.exp(1j * rng.uniform(0.0, 2 * math.pi))
        cat = CatParams(alpha, xi)
        w = lossy_cat_wigner(cat, eps, lam)
        if eps > 0.0:
            # the loss kernel is a delta function at zero loss
            err_quad = max(err_quad, abs(w - convolve_wigner_quadrature(cat, eps, lam)))
            n_quad += 1
        state = fock.apply_loss(fock.cat_fock(cat), eps)
        err_fock = max(err_fock, abs(w - fock.wigner_at(state, lam)))
        m = evolved_moments(initial_moments(cat), eps)
        err_mom = max(err_mom, abs(m.nbar - fock.expectation_nbar(state)), abs(m.a2 - fock.expectation_a2(state)))
    ok = err_quad <= 1e-8 and err_fock <= 1e-7 and err_mom <= 1e-9
    detail = (f"{n_tuples} tuples ({n_quad} with loss > 0 for quadrature); max |dW| quadrature {err_quad:.1e} "
              f"(tol 1e-8), Fock {err_fock:.1e} (tol 1e-7); max moment error {err_mom:.1e} (tol 1e-9)")
    assert report(1, "oracle equivalence", ok, detail), detail


def test_parity_exactness(report):
    alphas = np.linspace(0.0, 2.0, 401)[1:]
    err = max(max(abs(lossy_cat_wigner(CatParams.odd(a), 0.0, 0.0) + TWO_OVER_PI),
                  abs(lossy_cat_wigner(CatParams.even(a), 0.0, 0.0) - TWO_OVER_PI)) for a in alphas)
    ok = err <= 1e-12
    detail = f"{alphas.size} amplitudes in (0, 2]; max |W(0) -/+ 2/pi| = {err:.1e} (tol 1e-12)"
    assert report(2, "parity exactness", ok, detail), detail


def test_s_opt(report):
    rng = np.random.default_rng(7)
    err, worse = 0.0, 0
    points = [(a, e) for a in np.arange(0.25, 2.01, 0.25) for e in np.linspace(0.05, 0.95, 10)]
    for alpha, eps in points:
        m = evolved_moments(initial_moments(CatParams.odd(alpha)), eps)
        num = minimize_scalar(lambda s: op_photon_number(m, s), bracket=(-2.0, 0.0, 2.0),
                              method="golden", tol=1e-10).x
        s_opt = s_opt_analytic(alpha, eps)
        err = max(err, abs(num - s_opt))
        best = optimize_odd(alpha, eps).delta
        cat = CatParams.odd(alpha)
        worse += sum(witness_delta(cat, eps, GaussianOp(s)).delta < best for s in rng.uniform(-2, 2, 50))
    ok = err <= 1e-6 and worse == 0
    detail = (f"{len(points)} grid points; max |s_analytic - s_numeric| = {err:.1e} (tol 1e-6); "
              f"{worse} of {50 * len(points)} random s beat s_opt")
    assert report(3, "optimal squeezing", ok, detail), detail


def test_odd_cat_detected_at_all_losses(report):
    worst = {a: max(optimize_odd(a, e).delta for e in EPS_99) for a in (0.5, 1.0, 1.5)}
    ok = all(v < 0 for v in worst.values())
    detail = "largest optimised witness over 99 losses: " + ", ".join(
        f"alpha={a}: {v:.3e}" for a, v in worst.items())
    assert report(4, "odd cat detected for every loss", ok, detail), detail


def test_odd_cat_eps_max(report):
    alphas = np.arange(0.25, 2.01, 0.25)
    sq = {float(a): epsilon_max(float(a), -1.0, "squeeze").eps_max for a in alphas}
    none = epsilon_max(1.5, -1.0, "none").eps_max
    ok = all(v >= 0.999 for v in sq.values()) and 0.4 <= none <= 0.6
    detail = (f"squeeze: min eps_max {min(sq.values()):.4f} over alpha 0.25..2 (need >= 0.999); "
              f"no operation at alpha=1.5: {none:.4f} (need [0.4, 0.6])")
    assert report(5, "odd-cat maximal loss", ok, detail), detail


def test_even_cat_eps_max(report):
    ds = {a: epsilon_max(a, 1.0, "disp-squeeze").eps_max for a in (0.1, 0.3, 0.5, 1.0)}
    identity_worst = {a: min(witness_delta(CatParams.even(a), e).delta for e in EPS_99) for a in (0.2, 0.5, 1.0)}
    parts = {
        "alpha in {0.1,0.3,0.5} >= 0.99": all(ds[a] >= 0.99 for a in (0.1, 0.3, 0.5)),
        "alpha=0.1 >= 0.999": ds[0.1] >= 0.999,
        "alpha=1.0 in [0.5,0.65]": 0.5 <= ds[1.0] <= 0.65,
        "no operation: delta >= 0 on 99 losses": all(v >= 0 for v in identity_worst.values()),
    }
    ok = all(parts.values())
    detail = ("eps_max " + ", ".join(f"alpha={a}: {v:.4f}" for a, v in ds.items()) + "; "
              + "; ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in parts.items()))
    assert report(6, "even-cat maximal loss", ok, detail), detail


def _fock_delta(state, s, beta):
    out = fock.apply_gaussian_op(state, s, beta)
    return fock.parity_w0(out) - hull_bound(fock.expectation_nbar(out))


def test_soundness_on_gaussian_states(report):
    rng = np.random.default_rng(3)
    states = {
        "vacuum": fock.vacuum(),
        "coherent alpha=1.2": fock.cat_fock(CatParams(1.2, 0.0)),
        "thermal nbar=0.6": fock.thermal_state(0.6),
    }
    worst = {}
    for name, state in states.items():
        ops = zip(rng.uniform(-1.0, 1.0, 100), rng.uniform(-2.0, 2.0, 100))
        worst[name] = min(_fock_delta(state, s, b) for s, b in ops)
    ok = all(v >= -1e-12 for v in worst.values())
    detail = "min witness over 100 random operations: " + ", ".join(f"{k}: {v:.2e}" for k, v in worst.items())
    assert report(7, "witness soundness", ok, detail), detail


def test_channel_semigroup(report):
    rng = np.random.default_rng(11)
    err = 0.0
    for _ in range(50):
        alpha = float(rng.uniform(0.1, 2.0))
        cat = CatParams(alpha, float(rng.choice([-1.0, 0.0, 1.0])))
        e1, e2 = (float(x) for x in rng.uniform(0.02, 0.98, 2))
        lam = complex(*rng.uniform(-alpha - 1.0, alpha + 1.0, 2))
        twice = loss_convolution(lambda z: lossy_cat_wigner(cat, e1, z), e2, lam,
                                 half_width=alpha + 6.0, max_frequency=4.0 * alpha)
        err = max(err, abs(twice - lossy_cat_wigner(cat, 1.0 - (1.0 - e1) * (1.0 - e2), lam)))
    ok = err <= 1e-8
    detail = f"50 random tuples; max |W(e2 o e1) - W(combined)| = {err:.1e} (tol 1e-8)"
    assert report(8, "loss semigroup", ok, detail), detail


def test_sweep_determinism(report, tmp_path):
    paths = [tmp_path / "run1.csv", tmp_path / "run2.csv"]
    codes = [main(["sweep-even", "--alpha", "0.4,0.6,1.0", "--epsilon", "0.01:0.99:99", "--out", str(p)])
             for p in paths]
    data = [p.read_bytes() for p in paths]
    ok = codes == [0, 0] and data[0] == data[1]
    n_rows = len(data[0].splitlines()) - 1
    detail = f"two sweep-even runs, {n_rows} rows each, byte-identical: {data[0] == data[1]}"
    assert report(9, "deterministic output", ok, detail), detail
