"""Cross-checks of every closed form against an independent numerical route.

Each check returns a :class:`CheckResult`; :func:`run_checks` runs the whole
suite. Used by ``catqng verify`` and by the test-suite.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import fock
from .optimize import s_opt_analytic
from .phase_space import (
    TWO_OVER_PI,
    CatParams,
    QuadratureError,
    convolve_wigner_quadrature,
    evolved_moments,
    initial_moments,
    loss_convolution,
    lossy_cat_wigner,
)
from .witness import GaussianOp, op_photon_number, witness_delta

TOLERANCES = {
    "wigner_quadrature": 1e-8,
    "wigner_fock": 1e-7,
    "moments_fock": 1e-9,
    "parity": 1e-12,
    "witness_fock": 1e-7,
    "s_opt_numeric": 1e-6,
    "semigroup": 1e-8,
}

WIGNER_SAMPLES = [
    (1.0, -1.0, 0.7, 0.0),
    (1.0, 1.0, 0.0, 0.3 + 0.2j),
    (1.5, 1.0, 0.3, 0.5j),
    (0.5, -1.0, 0.9, -0.4 + 0.8j),
    (2.0, 0.0, 0.5, 1.0 - 1.0j),
    (0.3, 1.0, 0.99, 0.2 + 0.1j),
    (1.2, -1.0, 0.05, 1.3 - 0.6j),
]
WITNESS_SAMPLES = [
    (0.6, 1.0, 0.6, -0.4, 0.5),
    (1.0, 1.0, 0.5, 0.3, 0.7),
    (1.0, -1.0, 0.7, 0.35, 0.0),
    (1.5, -1.0, 0.2, -0.8, 1.2),
]


@dataclass
class CheckResult:
    name: str
    tol: float
    max_error: float = 0.0
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.max_error <= self.tol

    def record(self, error: float, label: str = ""):
        self.cases += 1
        self.max_error = max(self.max_error, float(error))
        if not error <= self.tol:
            self.failures.append(f"{label}: error {error:.3e} > {self.tol:.1e}")

    def as_dict(self) -> dict:
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _fock_cat(cat: CatParams, cutoff: int | None):
    return fock.cat_fock(cat, cutoff)


def _guarded(result: CheckResult, label: str, fn):
    try:
        fn()
    except (fock.CutoffError, QuadratureError) as exc:
        result.cases += 1
        result.failures.append(f"{label}: {type(exc).__name__}: {exc}")


def check_wigner_quadrature(tol: float) -> CheckResult:
    res = CheckResult("wigner_quadrature", tol)
    for alpha, xi, eps, lam in WIGNER_SAMPLES:
        if eps == 0.0:
            continue
        cat = CatParams(alpha, xi)
        label = f"alpha={alpha} xi={xi} eps={eps} lam={lam}"
        _guarded(res, label, lambda: res.record(
            abs(lossy_cat_wigner(cat, eps, lam) - convolve_wigner_quadrature(cat, eps, lam)), label))
    return res


def check_wigner_fock(tol: float, cutoff: int | None = None) -> CheckResult:
    res = CheckResult("wigner_fock", tol)
    for alpha, xi, eps, lam in WIGNER_SAMPLES:
        cat = CatParams(alpha, xi)
        label = f"alpha={alpha} xi={xi} eps={eps} lam={lam}"

        def one():
            state = fock.apply_loss(_fock_cat(cat, cutoff), eps)
            res.record(abs(fock.wigner_at(state, lam) - lossy_cat_wigner(cat, eps, lam)), label)

        _guarded(res, label, one)
    return res


def check_moments_fock(tol: float, cutoff: int | None = None) -> CheckResult:
    res = CheckResult("moments_fock", tol)
    for (alpha, xi), eps in itertools.product([(0.5, -1.0), (1.0, 1.0), (1.7, 0.0), (2.0, -1.0)],
                                              [0.0, 0.4, 0.9]):
        cat = CatParams(alpha, xi)
        label = f"alpha={alpha} xi={xi} eps={eps}"

        def one():
            state = fock.apply_loss(_fock_cat(cat, cutoff), eps)
            m = evolved_moments(initial_moments(cat), eps)
            res.record(abs(fock.expectation_nbar(state) - m.nbar), label + " nbar")
            res.record(abs(fock.expectation_a2(state) - m.a2), label + " a2")

        _guarded(res, label, one)
    return res


def check_parity(tol: float) -> CheckResult:
    res = CheckResult("parity", tol)
    for alpha in np.linspace(0.05, 2.0, 40):
        res.record(abs(lossy_cat_wigner(CatParams.odd(alpha), 0.0, 0.0) + TWO_OVER_PI), f"odd {alpha:.3f}")
        res.record(abs(lossy_cat_wigner(CatParams.even(alpha), 0.0, 0.0) - TWO_OVER_PI), f"even {alpha:.3f}")
    return res


def check_witness_fock(tol: float, cutoff: int | None = None) -> CheckResult:
    res = CheckResult("witness_fock", tol)
    for alpha, xi, eps, s, beta in WITNESS_SAMPLES:
        cat = CatParams(alpha, xi)
        label = f"alpha={alpha} xi={xi} eps={eps} s={s} beta={beta}"

        def one():
            state = fock.apply_gaussian_op(fock.apply_loss(_fock_cat(cat, cutoff), eps), s, beta)
            nbar = fock.expectation_nbar(state)
            delta = fock.parity_w0(state) - TWO_OVER_PI * math.exp(-2.0 * nbar * (nbar + 1.0))
            res.record(abs(delta - witness_delta(cat, eps, GaussianOp(s, beta)).delta), label)

        _guarded(res, label, one)
    return res


def check_s_opt(tol: float) -> CheckResult:
    res = CheckResult("s_opt_numeric", tol)
    for alpha, eps in itertools.product([0.25, 0.75, 1.25, 2.0], [0.1, 0.5, 0.9]):
        m = evolved_moments(initial_moments(CatParams.odd(alpha)), eps)
        num = minimize_scalar(lambda s: op_photon_number(m, s, 0.0), bracket=(-2.0, 0.0, 2.0),
                              method="golden", tol=1e-10).x
        res.record(abs(num - s_opt_analytic(alpha, eps)), f"alpha={alpha} eps={eps}")
    return res


def check_semigroup(tol: float) -> CheckResult:
    res = CheckResult("semigroup", tol)
    for (alpha, xi, e1, e2, lam) in [(1.0, -1.0, 0.3, 0.4, 0.2j), (1.5, 1.0, 0.6, 0.2, 0.5 - 0.3j),
                                     (0.7, -1.0, 0.1, 0.8, 0.0)]:
        cat = CatParams(alpha, xi)
        label = f"alpha={alpha} eps1={e1} eps2={e2}"

        def one():
            twice = loss_convolution(lambda z: lossy_cat_wigner(cat, e1, z), e2, lam,
                                     half_width=alpha + 6.0, max_frequency=4.0 * alpha)
            once = lossy_cat_wigner(cat, 1.0 - (1.0 - e1) * (1.0 - e2), lam)
            res.record(abs(twice - once), label)

        _guarded(res, label, one)
    return res


def run_checks(tol: float | None = None, cutoff: int | None = None) -> list[CheckResult]:
    """Run every cross-check; ``tol`` overrides all tolerances, ``cutoff`` pins the Fock cutoff."""
    t = {k: (tol if tol is not None else v) for k, v in TOLERANCES.items()}
    return [
        check_parity(t["parity"]),
        check_wigner_quadrature(t["wigner_quadrature"]),
        check_wigner_fock(t["wigner_fock"], cutoff),
        check_moments_fock(t["moments_fock"], cutoff),
        check_witness_fock(t["witness_fock"], cutoff),
        check_s_opt(t["s_opt_numeric"]),
        check_semigroup(t["semigroup"]),
    ]
