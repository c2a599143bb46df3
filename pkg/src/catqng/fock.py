"""Truncated Fock-space simulator used as an independent oracle.

Everything here works on explicit density matrices: cat states from their
photon-number amplitudes, loss as a Kraus sum, Gaussian unitaries by
exponentiating truncated generators, and Wigner values from displaced parity.
None of it reuses the coherent-dyad algebra of :mod:`catqng.phase_space`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .phase_space import TWO_OVER_PI, CatParams, PointLike, as_complex, check_epsilon

GUARD = 15
TAIL_TOL = 1e-10
UNITARITY_TOL = 1e-12
MAX_CUTOFF = 800


class CutoffError(RuntimeError):
    """The photon-number cutoff is too small for the requested accuracy."""


class UnitarityError(CutoffError):
    """A truncated Gaussian unitary leaks norm out of its low-lying block."""


@dataclass
class FockState:
    """Density matrix on ``{|0>, ..., |n_cut>}``.

    ``tail_mass`` records the probability discarded by truncation (before
    renormalisation) over the life of the state.
    """

    rho: np.ndarray
    n_cut: int
    tail_mass: float = 0.0

    @property
    def dim(self) -> int:
        return self.n_cut + 1

    def trace(self) -> float:
        return float(np.real(np.trace(self.rho)))

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.rho)).copy()

    def purity(self) -> float:
        return float(np.real(np.vdot(self.rho, self.rho)))

    def padded(self, n_cut: int) -> "FockState":
        if n_cut <= self.n_cut:
            return self
        rho = np.zeros((n_cut + 1, n_cut + 1), dtype=complex)
        rho[: self.dim, : self.dim] = self.rho
        return FockState(rho, n_cut, self.tail_mass)


def cutoff_rule(mean_photons: float, squeeze: float = 0.0) -> int:
    """Cutoff for a state with the given mean photon number.

    ``max(30, ceil(m + 8 sqrt(m) + 20))``, widened for squeezed states whose
    photon-number tails only decay like ``tanh(s)^n``.
    """
    m = max(float(mean_photons), 0.0)
    n = max(30, math.ceil(m + 8.0 * math.sqrt(m) + 20.0))
    t = math.tanh(abs(squeeze))
    if t > 1e-3:
        n += math.ceil(28.0 / -math.log(t))
    return n


def _truncate(rho: np.ndarray, n_cut: int, prior_tail: float = 0.0) -> FockState:
    """Cut ``rho`` to ``n_cut`` and renormalise, refusing lossy truncations."""
    total = float(np.real(np.trace(rho)))
    kept = rho[: n_cut + 1, : n_cut + 1]
    tail = 1.0 - float(np.real(np.trace(kept))) / total
    if tail > TAIL_TOL:
        raise CutoffError(f"cutoff {n_cut} discards probability {tail:.2e} > {TAIL_TOL:.0e}")
    kept = kept / np.real(np.trace(kept))
    kept = 0.5 * (kept + kept.conj().T)
    return FockState(kept, n_cut, prior_tail + max(tail, 0.0))


def number_state(n: int, n_cut: int | None = None) -> FockState:
    n_cut = max(n, 30) if n_cut is None else n_cut
    rho = np.zeros((n_cut + 1, n_cut + 1), dtype=complex)
    rho[n, n] = 1.0
    return FockState(rho, n_cut)


def vacuum(n_cut: int = 30) -> FockState:
    return number_state(0, n_cut)


def thermal_state(nbar: float, n_cut: int | None = None) -> FockState:
    """Thermal state with mean photon number ``nbar`` (a Gaussian mixture)."""
    if n_cut is None:
        n_cut = 30
        if nbar > 0:
            n_cut = max(n_cut, math.ceil(math.log(1e-14) / math.log(nbar / (1 + nbar))))
    k = np.arange(n_cut + 1)
    p = (nbar / (1.0 + nbar)) ** k / (1.0 + nbar)
    full = np.diag(p).astype(complex)
    return FockState(full / p.sum(), n_cut, 1.0 - p.sum())


def cat_fock(cat: CatParams, n_cut: int | None = None) -> FockState:
    """Pure cat state from ``c_n = e^{-a^2/2} ((-a)^n + xi a^n) / (N sqrt(n!))``."""
    a = cat.alpha
    if n_cut is None:
        n_cut = cutoff_rule(a * a)
    n = np.arange(n_cut + 1)
    if a == 0.0:
        c = np.zeros(n_cut + 1)
        c[0] = (1.0 + cat.xi) / cat.norm
    else:
        mag = np.exp(-0.5 * a * a + n * math.log(abs(a)) - 0.5 * gammaln(n + 1))
        sign_a = np.sign(a) ** n
        c = mag * sign_a * ((-1.0) ** n + cat.xi) / cat.norm
    tail = 1.0 - float(np.sum(c * c))
    if tail > TAIL_TOL:
        raise CutoffError(f"cutoff {n_cut} too small for alpha={a}: tail mass {tail:.2e}")
    psi = c / np.linalg.norm(c)
    return FockState(np.outer(psi, psi).astype(complex), n_cut, max(tail, 0.0))


def loss_kraus(epsilon: float, n_cut: int) -> list[np.ndarray]:
    """Amplitude-damping Kraus operators ``K_k = sum_n sqrt(C(n,k) eta^(n-k) eps^k) |n-k><n|``."""
    epsilon = check_epsilon(epsilon)
    eta = 1.0 - epsilon
    n = np.arange(n_cut + 1)
    ops = []
    for k in range(n_cut + 1):
        m = n[k:]
        logc = gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)
        with np.errstate(divide="ignore"):
            coef = np.exp(0.5 * logc) * eta ** (0.5 * (m - k)) * epsilon ** (0.5 * k)
        kk = np.zeros((n_cut + 1, n_cut + 1))
        kk[m - k, m] = coef
        ops.append(kk)
        if epsilon == 0.0:
            break
    return ops


def apply_loss(state: FockState, epsilon: float) -> FockState:
    """Send ``state`` through the pure-loss channel with loss ``epsilon``."""
    rho = sum(k @ state.rho @ k.T for k in loss_kraus(epsilon, state.n_cut))
    rho = 0.5 * (rho + rho.conj().T)
    return FockState(rho, state.n_cut, state.tail_mass)


def annihilation(n_cut: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_cut + 1, dtype=float)), 1)


def gaussian_op_matrix(s: float, beta: float, n_cut: int, support: int | None = None,
                       guard: int = GUARD) -> np.ndarray:
    """Truncated matrix of ``D(i beta) S(s)`` on ``{|0>, ..., |n_cut>}``.

    ``S(s) = exp(s/2 (a^dag^2 - a^2))`` and ``D(g) = exp(g a^dag - g^* a)``,
    each obtained with :func:`scipy.linalg.expm` on ``n_cut + 1`` levels.
    The columns below ``support`` (default ``n_cut + 1 - guard``) must not
    leak into the top ``guard`` levels; otherwise :class:`UnitarityError`.
    """
    a = annihilation(n_cut)
    ad = a.T
    sq = expm(0.5 * s * (ad @ ad - a @ a)) if s else np.eye(n_cut + 1)
    g = 1j * beta
    disp = expm(g * ad - np.conj(g) * a) if beta else np.eye(n_cut + 1)
    u = disp @ sq
    if support is None:
        support = n_cut + 1 - guard
    low = u[: n_cut + 1 - guard, :support]
    dev = np.max(np.abs(low.conj().T @ low - np.eye(support))) if support > 0 else 0.0
    if dev > UNITARITY_TOL:
        raise UnitarityError(
            f"guard band too small: unitarity deviation {dev:.2e} on the lowest {support} levels"
        )
    return u


def _moments(state: FockState):
    a = annihilation(state.n_cut)
    nbar = float(np.real(np.trace(state.rho @ a.T @ a)))
    mean_a = complex(np.trace(state.rho @ a))
    return nbar, mean_a


def _effective_support(state: FockState, tol: float = 1e-16) -> int:
    """Number of low levels holding all but ``tol`` of the population."""
    tail = np.cumsum(state.populations()[::-1])[::-1]
    above = np.nonzero(tail > tol)[0]
    return int(above[-1]) + 1 if above.size else 1


def _apply_generator(state: FockState, generator, n_cut: int) -> FockState:
    """``exp(G) rho exp(G)^dag``, growing ``n_cut`` until the guard band holds.

    The generator ``G = generator(a)`` is exponentiated on ``n_cut + GUARD``
    levels; the cutoff is enlarged by half while the guard band leaks, up to
    ``MAX_CUTOFF``.
    """
    while True:
        try:
            return _apply_generator_once(state, generator, n_cut)
        except UnitarityError:
            if n_cut >= MAX_CUTOFF:
                raise
            n_cut = min(MAX_CUTOFF, math.ceil(1.5 * n_cut))


def _apply_generator_once(state: FockState, generator, n_cut: int) -> FockState:
    k = _effective_support(state)
    big = n_cut + GUARD
    u = expm(generator(annihilation(big)))[:, :k]
    rho = u @ state.rho[:k, :k] @ u.conj().T
    # probability pushed into the guard band, i.e. the local defect of U^dag U
    dev = float(np.real(np.trace(rho[big + 1 - GUARD :, big + 1 - GUARD :])))
    if dev > UNITARITY_TOL:
        raise UnitarityError(f"guard band too small: leaked probability {dev:.2e}")
    return _truncate(rho, n_cut, state.tail_mass)


def squeeze(state: FockState, s: float, n_cut: int | None = None) -> FockState:
    if s == 0.0:
        return state
    if n_cut is None:
        nbar, _ = _moments(state)
        n_cut = max(state.n_cut, cutoff_rule(math.cosh(2 * s) * nbar + 2 * math.sinh(abs(s)) ** 2, s))
    return _apply_generator(state, lambda a: 0.5 * s * (a.T @ a.T - a @ a), n_cut)


def displace(state: FockState, gamma: complex, n_cut: int | None = None) -> FockState:
    if gamma == 0:
        return state
    if n_cut is None:
        nbar, mean_a = _moments(state)
        spread = math.sqrt(max(nbar - abs(mean_a) ** 2, 0.0))
        n_cut = max(state.n_cut, cutoff_rule((abs(mean_a + gamma) + spread) ** 2 + nbar))
    return _apply_generator(state, lambda a: gamma * a.T - np.conj(gamma) * a, n_cut)


def apply_gaussian_op(state: FockState, s: float = 0.0, beta: float = 0.0) -> FockState:
    """Return ``U rho U^dag`` for ``U = D(i beta) S(s)``, squeezing first."""
    return displace(squeeze(state, s), 1j * beta)


def parity_w0(state: FockState) -> float:
    """``W(0) = (2/pi) sum_n (-1)^n rho_nn``."""
    signs = (-1.0) ** np.arange(state.dim)
    return TWO_OVER_PI * float(np.dot(signs, state.populations()))


def wigner_at(state: FockState, lam: PointLike) -> float:
    """Wigner value at ``lam`` from the parity of ``D(-lam) rho D(-lam)^dag``."""
    return parity_w0(displace(state, -as_complex(lam)))


def expectation_nbar(state: FockState) -> float:
    return float(np.real(np.sum(np.arange(state.dim) * np.diag(state.rho))))


def expectation_a2(state: FockState) -> complex:
    """``<a^2>``; returned as a float when the imaginary part vanishes."""
    a = annihilation(state.n_cut)
    val = complex(np.trace(state.rho @ a @ a))
    return val.real if abs(val.imag) < 1e-13 else val
