"""Optimisation of the witness over Gaussian operations and the maximal detectable loss.

Odd cats only need squeezing; since squeezing leaves ``W(0)`` unchanged the
best ``s`` minimises the photon number, which has a closed form. Even cats
need a displacement as well and are optimised numerically: a coarse grid over
``(s, beta)`` followed by Nelder-Mead refinement.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .phase_space import CatParams, Moments, ParameterError, check_epsilon, evolved_moments, initial_moments
from .witness import IDENTITY, GaussianOp, delta_values, log_ratio, op_photon_number, witness_delta

log = logging.getLogger(__name__)

STRATEGIES = ("none", "squeeze", "disp-squeeze")


@dataclass(frozen=True)
class OptimizerConfig:
    """Search settings for the numeric optimisers and the ``epsilon_max`` scan."""

    s_bounds: tuple[float, float] = (-2.0, 2.0)
    beta_bounds: tuple[float, float] = (-3.0, 3.0)
    grid_s: int = 41
    grid_beta: int = 41
    xatol: float = 1e-6
    fatol: float = 1e-10
    budget: int = 10_000
    sign_s_bounds: tuple[float, float] = (-2.0, 6.0)
    sign_offset_bounds: tuple[float, float] = (-5.0, 10.0)
    eps_top: float = 1.0 - 1e-4
    eps_step: float = 1e-2
    bracket_width: float = 1e-5

    def __post_init__(self):
        if not self.s_bounds[0] < self.s_bounds[1]:
            raise ParameterError(f"s bounds must be increasing, got {self.s_bounds}")
        if not self.beta_bounds[0] < self.beta_bounds[1]:
            raise ParameterError(f"beta bounds must be increasing, got {self.beta_bounds}")
        if self.grid_s < 2 or self.grid_beta < 2:
            raise ParameterError("grids need at least two points per axis")
        if min(self.xatol, self.fatol, self.eps_step, self.bracket_width) <= 0 or self.budget < 1:
            raise ParameterError("tolerances, steps and budget must be positive")
        for lo, hi in (self.sign_s_bounds, self.sign_offset_bounds):
            if not lo < hi:
                raise ParameterError("sign-search bounds must be increasing")
        if not 0.0 < self.eps_top < 1.0:
            raise ParameterError("eps_top must lie strictly inside (0, 1)")


@dataclass(frozen=True)
class OptResult:
    op: GaussianOp
    delta: float
    evaluations: int
    converged: bool = True


@dataclass(frozen=True)
class EpsMaxResult:
    eps_max: float
    alpha: float
    xi: float
    strategy: str
    lower: float
    upper: float
    converged: bool = True
    saturated: bool = False
    evaluations: int = field(default=0, compare=False)

    @property
    def bracket(self) -> float:
        return self.upper - self.lower


def s_opt_analytic(alpha: float, epsilon: float) -> float:
    """Squeezing that minimises the photon number of the lossy odd cat.

    ``s = -1/4 log[(1 - e^{2a^2} - 4 a^2 e^{2a^2} eta) / (1 - e^{2a^2} - 4 a^2 eta)]``
    with ``eta = 1 - epsilon``.
    """
    epsilon = check_epsilon(epsilon)
    if not alpha > 0:
        raise ParameterError(f"odd cat needs alpha > 0, got {alpha}")
    a2 = alpha * alpha
    eta = 1.0 - epsilon
    em1 = math.expm1(2.0 * a2)
    num = -em1 - 4.0 * a2 * (em1 + 1.0) * eta
    den = -em1 - 4.0 * a2 * eta
    ratio = num / den
    if not ratio > 0 or not math.isfinite(ratio):
        raise ParameterError(f"s_opt undefined for alpha={alpha}, epsilon={epsilon}")
    return -0.25 * math.log(ratio)


def min_photon_squeeze(m: Moments) -> float:
    """Squeezing minimising ``cosh(2s)(nbar + 1/2) + sinh(2s) <a^2>`` for any state."""
    return 0.25 * math.log((m.nbar + 0.5 - m.a2) / (m.nbar + 0.5 + m.a2))


def optimize_odd(alpha: float, epsilon: float) -> OptResult:
    cat = CatParams.odd(alpha)
    op = GaussianOp(s_opt_analytic(alpha, epsilon), 0.0)
    delta = witness_delta(cat, epsilon, op).delta
    baseline = witness_delta(cat, epsilon).delta
    if delta > baseline + 1e-14:
        raise ArithmeticError(f"analytic squeezing worse than none: {delta} > {baseline}")
    return OptResult(op, delta, evaluations=2)


def optimize_squeeze(cat: CatParams, epsilon: float, cfg: OptimizerConfig = OptimizerConfig(),
                     beta: float = 0.0) -> OptResult:
    """1D numeric optimisation over ``s`` at fixed ``beta``: grid scan then bounded Brent."""
    grid = np.linspace(*cfg.s_bounds, cfg.grid_s)
    values = delta_values(cat, epsilon, grid, beta)
    i = int(np.argmin(values))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(lambda s: float(delta_values(cat, epsilon, s, beta)),
                          bounds=(lo, hi), method="bounded",
                          options={"xatol": cfg.xatol, "maxiter": cfg.budget})
    best = min([(float(values[i]), float(grid[i])), (float(res.fun), float(res.x))])
    return OptResult(GaussianOp(best[1], beta), best[0], cfg.grid_s + res.nfev, bool(res.success))


def optimize_displaced_squeezed(cat: CatParams, epsilon: float,
                                cfg: OptimizerConfig = OptimizerConfig()) -> OptResult:
    """Minimise the witness over ``D(i beta) S(s)``.

    The witness is even in ``beta`` for real-amplitude cats, so the grid and
    the refinement work with ``|beta|`` and the reported optimum has
    ``beta >= 0``. The identity and the photon-number-optimal pure squeeze are
    always included as candidates, so the result never loses to them.
    """
    epsilon = check_epsilon(epsilon)
    s_grid = np.linspace(*cfg.s_bounds, cfg.grid_s)
    b_grid = np.unique(np.abs(np.linspace(*cfg.beta_bounds, cfg.grid_beta)))
    b_max = float(b_grid[-1])
    values = delta_values(cat, epsilon, s_grid[:, None], b_grid[None, :])
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    x0 = np.array([s_grid[i], b_grid[j]])

    def objective(x):
        return float(delta_values(cat, epsilon, x[0], abs(x[1])))

    ds = s_grid[1] - s_grid[0]
    db = b_grid[1] - b_grid[0] if len(b_grid) > 1 else 0.1
    simplex = np.array([x0, x0 + [ds, 0.0], x0 + [0.0, db]])
    res = minimize(objective, x0, method="Nelder-Mead",
                   bounds=[cfg.s_bounds, (0.0, b_max)],
                   options={"initial_simplex": simplex, "xatol": cfg.xatol,
                            "fatol": cfg.fatol, "maxfev": cfg.budget})
    evaluations = values.size + res.nfev

    m = evolved_moments(initial_moments(cat), epsilon)
    s_sq = float(np.clip(min_photon_squeeze(m), *cfg.s_bounds))
    candidates = [
        (float(res.fun), GaussianOp(float(res.x[0]), abs(float(res.x[1])))),
        (float(values[i, j]), GaussianOp(float(x0[0]), float(x0[1]))),
        (objective((s_sq, 0.0)), GaussianOp(s_sq, 0.0)),
        (objective((0.0, 0.0)), IDENTITY),
    ]
    # all-zero ties are underflow; prefer the operation closest to a detection
    delta, op = min(candidates, key=lambda c: (c[0], log_ratio(cat, epsilon, c[1].s, c[1].beta)))
    if not res.success:
        log.warning("Nelder-Mead hit the evaluation budget at alpha=%g eps=%g", cat.alpha, epsilon)
    return OptResult(op, delta, evaluations + 2, bool(res.success))


def optimize_even(alpha: float, epsilon: float, cfg: OptimizerConfig = OptimizerConfig()) -> OptResult:
    return optimize_displaced_squeezed(CatParams.even(alpha), epsilon, cfg)


def optimized_delta(cat: CatParams, epsilon: float, strategy: str,
                    cfg: OptimizerConfig = OptimizerConfig()) -> OptResult:
    """Best witness value reachable with the operations allowed by ``strategy``."""
    if strategy == "none":
        return OptResult(IDENTITY, witness_delta(cat, epsilon).delta, 1)
    if strategy == "squeeze":
        if cat.xi == -1.0 and cat.alpha > 0:
            return optimize_odd(cat.alpha, epsilon)
        return optimize_squeeze(cat, epsilon, cfg)
    if strategy == "disp-squeeze":
        return optimize_displaced_squeezed(cat, epsilon, cfg)
    raise ParameterError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")


def min_log_ratio(cat: CatParams, epsilon: float,
                  cfg: OptimizerConfig = OptimizerConfig()) -> tuple[float, GaussianOp, OptResult]:
    """Most negative ``log(W0 / bound)`` over displaced-squeezed operations.

    At fixed ``s`` the log-ratio is close to a parabola in ``X = beta^2``
    with vertex ``X_v(s) = (e^{2s} - 2 n_s - 1) / 2`` (``n_s`` the photon
    number at ``beta = 0``). Near full loss the negative region is a thin
    ridge along ``X_v``, so the search runs over ``(s, X - X_v)`` in the wide
    ``sign_*`` boxes, where the witness itself underflows. The plain witness
    optimum is kept as a candidate.
    """
    m = evolved_moments(initial_moments(cat), epsilon)

    def beta_of(s, d):
        n_s = op_photon_number(m, s, 0.0)
        x = 0.5 * (np.exp(2.0 * s) - 2.0 * n_s - 1.0) + d
        return np.sqrt(np.maximum(x, 0.0))

    def objective(x):
        # keep the simplex arithmetic finite; -inf means W0 < 0, a certain detection
        val = float(log_ratio(cat, epsilon, x[0], beta_of(x[0], x[1])))
        return float(np.clip(np.nan_to_num(val, nan=1e300), -1e300, 1e300))

    s_grid = np.linspace(*cfg.sign_s_bounds, 4 * cfg.grid_s - 3)
    d_grid = np.linspace(*cfg.sign_offset_bounds, 4 * cfg.grid_beta - 3)
    ss, dd = s_grid[:, None], d_grid[None, :]
    values = log_ratio(cat, epsilon, ss, beta_of(ss, dd))
    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    x0 = np.array([s_grid[i], d_grid[j]])
    simplex = np.array([x0, x0 + [s_grid[1] - s_grid[0], 0.0], x0 + [0.0, d_grid[1] - d_grid[0]]])
    res = minimize(objective, x0, method="Nelder-Mead",
                   bounds=[cfg.sign_s_bounds, cfg.sign_offset_bounds],
                   options={"initial_simplex": simplex, "xatol": cfg.xatol,
                            "fatol": cfg.fatol, "maxfev": cfg.budget})
    plain = optimize_displaced_squeezed(cat, epsilon, cfg)
    candidates = [
        (float(values[i, j]), GaussianOp(float(x0[0]), float(beta_of(*x0)))),
        (float(res.fun), GaussianOp(float(res.x[0]), float(beta_of(*res.x)))),
        (log_ratio(cat, epsilon, plain.op.s, plain.op.beta), plain.op),
    ]
    best, op = min(candidates, key=lambda c: c[0])
    evaluations = values.size + res.nfev + plain.evaluations
    return best, op, OptResult(plain.op, plain.delta, evaluations, plain.converged and bool(res.success))


def violation(cat: CatParams, epsilon: float, strategy: str,
              cfg: OptimizerConfig = OptimizerConfig()) -> tuple[bool, OptResult]:
    """Whether some operation allowed by ``strategy`` makes the witness negative.

    The sign is read from :func:`~catqng.witness.log_ratio`, so detections
    where the witness is too small to represent still count. A vanishing
    witness is not a detection.
    """
    if strategy == "disp-squeeze":
        best, _, res = min_log_ratio(cat, epsilon, cfg)
        return best < 0.0, res
    res = optimized_delta(cat, epsilon, strategy, cfg)
    return log_ratio(cat, epsilon, res.op.s, res.op.beta) < 0.0, res


def epsilon_grid(cfg: OptimizerConfig) -> np.ndarray:
    """Descending scan points ``eps_top, eps_top - step, ...`` ending at 0."""
    n = int(math.floor(cfg.eps_top / cfg.eps_step + 1e-9))
    grid = cfg.eps_top - cfg.eps_step * np.arange(n + 1)
    if grid[-1] > 0.0:
        grid = np.append(grid, 0.0)
    return grid


def epsilon_max(alpha: float, xi: float, strategy: str,
                cfg: OptimizerConfig = OptimizerConfig()) -> EpsMaxResult:
    """Largest loss at which some allowed operation gives a negative witness.

    Scans downward from ``cfg.eps_top`` (at ``epsilon = 1`` every state is the
    vacuum and the witness vanishes) and bisects the first bracket found down
    to ``cfg.bracket_width``. The violation set need not be an interval,
    hence the scan. Returns 0 when no scan point violates.
    """
    if strategy not in STRATEGIES:
        raise ParameterError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    cat = CatParams(alpha, xi)
    evaluations = 0
    converged = True

    def violates(eps):
        nonlocal evaluations, converged
        hit, res = violation(cat, eps, strategy, cfg)
        evaluations += res.evaluations
        converged = converged and res.converged
        return hit

    grid = epsilon_grid(cfg)
    for k, eps in enumerate(grid):
        if violates(eps):
            break
    else:
        return EpsMaxResult(0.0, cat.alpha, cat.xi, strategy, 0.0, 0.0, converged,
                            evaluations=evaluations)

    if k == 0:
        return EpsMaxResult(float(eps), cat.alpha, cat.xi, strategy, float(eps), 1.0,
                            converged, saturated=True, evaluations=evaluations)

    lo, hi = float(grid[k]), float(grid[k - 1])
    while hi - lo > cfg.bracket_width:
        mid = 0.5 * (lo + hi)
        if violates(mid):
            lo = mid
        else:
            hi = mid
    return EpsMaxResult(lo, cat.alpha, cat.xi, strategy, lo, hi, converged, evaluations=evaluations)
