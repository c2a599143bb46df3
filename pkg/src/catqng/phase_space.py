"""Closed-form phase-space quantities for (lossy) Schrodinger cat states.

Conventions
-----------
A point in phase space is the complex number ``lam = x + i p``. Wigner
functions are normalised so that ``integral W dx dp = 1``; the vacuum is
``(2/pi) exp(-2|lam|^2)`` and pure-state extrema lie in ``[-2/pi, 2/pi]``.

The cat state is ``(|-alpha> + xi |alpha>) / N`` with real ``alpha`` and
``xi``. Its density matrix is the sum of four coherent dyads, and the loss
channel maps the dyad ``|b><g|`` to ``<g|b>^eps |sqrt(1-eps) b><sqrt(1-eps) g|``,
which keeps the Wigner function a sum of Gaussians at every loss level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

TWO_OVER_PI = 2.0 / math.pi
MIN_NORM_SQ = 1e-12


class ParameterError(ValueError):
    """Raised for invalid physical parameters (amplitude, loss, ...)."""


@dataclass(frozen=True)
class CatParams:
    """Cat state ``(|-alpha> + xi |alpha>) / norm`` with real amplitude and weight."""

    alpha: float
    xi: float

    def __post_init__(self):
        alpha, xi = float(self.alpha), float(self.xi)
        if not (math.isfinite(alpha) and math.isfinite(xi)):
            raise ParameterError(f"non-finite cat parameters alpha={alpha}, xi={xi}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "xi", xi)
        if self.norm_sq < MIN_NORM_SQ:
            raise ParameterError(
                f"degenerate cat state: N^2 = {self.norm_sq:.3e} for alpha={alpha}, xi={xi}"
            )

    @classmethod
    def odd(cls, alpha: float) -> "CatParams":
        return cls(alpha, -1.0)

    @classmethod
    def even(cls, alpha: float) -> "CatParams":
        return cls(alpha, 1.0)

    @property
    def overlap(self) -> float:
        """``<alpha|-alpha> = exp(-2 alpha^2)``."""
        return math.exp(-2.0 * self.alpha**2)

    @property
    def norm_sq(self) -> float:
        return 1.0 + self.xi**2 + 2.0 * self.xi * self.overlap

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_sq)


@dataclass(frozen=True)
class PhasePoint:
    """Phase-space point ``re + i*im``."""

    re: float
    im: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise ParameterError("phase-space point must be finite")

    def __complex__(self):
        return complex(self.re, self.im)


class Moments(NamedTuple):
    """Mean photon number ``<a^dag a>`` and the (real) second moment ``<a^2>``."""

    nbar: float
    a2: float


PointLike = Union[complex, float, PhasePoint, np.ndarray]


def check_epsilon(epsilon: float) -> float:
    epsilon = float(epsilon)
    if not 0.0 <= epsilon <= 1.0:
        raise ParameterError(f"loss parameter must lie in [0, 1], got {epsilon}")
    return epsilon


def as_complex(lam: PointLike):
    """Return ``lam`` as a complex scalar or complex ndarray."""
    if isinstance(lam, PhasePoint):
        return complex(lam)
    if np.isscalar(lam):
        return complex(lam)
    return np.asarray(lam, dtype=complex)


def _gauss(x, p, x0):
    return np.exp(-2.0 * ((x - x0) ** 2 + p**2))


def lossy_cat_wigner(cat: CatParams, epsilon: float, lam: PointLike):
    """Wigner function of the cat state after loss ``epsilon``.

    ``W = (2/pi)/N^2 [G(lam + c) + xi^2 G(lam - c)
    + 2 xi exp(-2 eps alpha^2) exp(-2|lam|^2) cos(4 c p)]``
    with ``c = sqrt(1 - eps) alpha`` and ``G(z) = exp(-2|z|^2)``.

    Works elementwise on complex arrays. ``epsilon = 0`` is the identity
    channel and ``epsilon = 1`` gives the vacuum.
    """
    epsilon = check_epsilon(epsilon)
    z = as_complex(lam)
    x, p = np.real(z), np.imag(z)
    c = math.sqrt(1.0 - epsilon) * cat.alpha
    coherence = 2.0 * cat.xi * math.exp(-2.0 * epsilon * cat.alpha**2)
    w = (
        _gauss(x, p, -c)
        + cat.xi**2 * _gauss(x, p, c)
        + coherence * np.exp(-2.0 * (x**2 + p**2)) * np.cos(4.0 * c * p)
    )
    w = TWO_OVER_PI * w / cat.norm_sq
    return float(w) if np.ndim(w) == 0 else w


def cat_wigner(cat: CatParams, lam: PointLike):
    """Wigner function of the pure cat state (no loss)."""
    return lossy_cat_wigner(cat, 0.0, lam)


def initial_moments(cat: CatParams) -> Moments:
    a2 = cat.alpha**2
    nbar = a2 * (1.0 + cat.xi**2 - 2.0 * cat.xi * cat.overlap) / cat.norm_sq
    return Moments(nbar, a2)


def evolved_moments(m0: Moments, epsilon: float) -> Moments:
    """Both moments are damped by the transmissivity ``1 - epsilon``."""
    eta = 1.0 - check_epsilon(epsilon)
    return Moments(eta * m0.nbar, eta * m0.a2)


def mean_field(cat: CatParams, epsilon: float = 0.0) -> float:
    """``<a>`` of the (lossy) cat; real, and zero for the odd/even families."""
    eta = 1.0 - check_epsilon(epsilon)
    return math.sqrt(eta) * cat.alpha * (cat.xi**2 - 1.0) / cat.norm_sq


class QuadratureError(RuntimeError):
    """Two successive grid refinements of a quadrature disagree."""


def loss_convolution(
    wigner,
    epsilon: float,
    lam: PointLike,
    half_width: float,
    max_frequency: float = 0.0,
    tol: float = 1e-10,
) -> float:
    """Apply the loss channel to an arbitrary Wigner function by direct quadrature.

    Evaluates ``2/(pi eps) * integral W(l) exp(-2|lam - sqrt(1-eps) l|^2 / eps) d^2 l``
    on a tensor-product trapezoid grid. ``wigner`` maps a complex array to
    real values and must be negligible outside ``[-half_width, half_width]^2``;
    ``max_frequency`` bounds its oscillation wavenumber and sets the step.

    The grid is clipped to the window where the kernel is non-negligible, then
    evaluated at two resolutions; a mismatch above ``tol`` raises
    :class:`QuadratureError`.
    """
    epsilon = check_epsilon(epsilon)
    if epsilon == 0.0:
        raise ParameterError("quadrature needs epsilon > 0; the channel is the identity at 0")
    z = as_complex(lam)
    eta = 1.0 - epsilon

    lo = np.array([-half_width, -half_width])
    hi = np.array([half_width, half_width])
    h = min(0.2, 2.0 * math.pi / (max_frequency + 16.0))
    if eta > 0.0:
        sigma = math.sqrt(epsilon / eta) / 2.0
        centre = np.array([z.real, z.imag]) / math.sqrt(eta)
        lo = np.maximum(lo, centre - 12.0 * sigma)
        hi = np.minimum(hi, centre + 12.0 * sigma)
        h = min(h, 0.5 * sigma)
    if np.any(hi <= lo):
        return 0.0

    def trapezoid(step):
        nx, ny = (np.ceil((hi - lo) / step).astype(int) + 1)
        xs = np.linspace(lo[0], hi[0], nx)
        ps = np.linspace(lo[1], hi[1], ny)
        kx = np.exp(-2.0 * (z.real - math.sqrt(eta) * xs) ** 2 / epsilon)
        kp = np.exp(-2.0 * (z.imag - math.sqrt(eta) * ps) ** 2 / epsilon)
        grid = xs[:, None] + 1j * ps[None, :]
        integrand = np.asarray(wigner(grid)) * kx[:, None] * kp[None, :]
        val = np.trapezoid(np.trapezoid(integrand, ps, axis=1), xs)
        return 2.0 / (math.pi * epsilon) * val

    coarse = trapezoid(h)
    fine = trapezoid(0.75 * h)
    if abs(fine - coarse) > tol:
        raise QuadratureError(
            f"quadrature not converged: refinements differ by {abs(fine - coarse):.2e} > {tol:.1e}"
        )
    return float(fine)


def convolve_wigner_quadrature(cat: CatParams, epsilon: float, lam: PointLike, tol: float = 1e-10) -> float:
    """Lossy cat Wigner value obtained by numerically convolving the pure-state Wigner."""
    return loss_convolution(
        lambda grid: cat_wigner(cat, grid),
        epsilon,
        lam,
        half_width=abs(cat.alpha) + 6.0,
        max_frequency=4.0 * abs(cat.alpha),
        tol=tol,
    )
