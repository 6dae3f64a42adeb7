"""Fourier-symbol form of the damped Klein-Gordon generator.

On the frequency-xi mode the first-order system z_t = A z reduces to the
2x2 matrix

    M(xi) = [[0, 1], [-(m + xi^2), -xi^2]],

whose characteristic polynomial lambda^2 + xi^2 lambda + (m + xi^2) is the
Fourier image of  u_tt - u_xx + m u - u_txx = 0.  This module provides the
eigenvalue branches, the exact per-mode propagator exp(t M(xi)), the discrete
semigroup, and an independent oracle for the resolvent norm along the
imaginary axis measured in the energy norm (weight W(xi) =
diag(sqrt(m + xi^2), 1) per mode).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .model import Params, SpectralState, State, forward_transform, inverse_transform

__all__ = [
    "Regime",
    "SymbolMatrix",
    "EigenPair",
    "SpectralCurves",
    "ResolventSearch",
    "ResolventProfile",
    "symbol_matrix",
    "critical_frequency",
    "eigenpair",
    "eigenvalue_arrays",
    "mode_propagator",
    "propagate",
    "resolvent_apply_spectral",
    "weighted_resolvent_gain",
    "resolvent_norm",
    "resolvent_profile",
    "spectral_curves",
]

# Guard band around the two spectral points +-i sqrt(m) on the imaginary axis.
SPECTRAL_GUARD = 1e-12

# Eigenvalue-coincidence threshold switching the propagator to the Jordan-limit
# formula; eigen-decomposition loses accuracy as the gap closes.
DEFECT_TOL = 1e-6


class Regime(str, enum.Enum):
    UNDERDAMPED = "underdamped"
    CRITICAL = "critical"
    OVERDAMPED = "overdamped"


@dataclass(frozen=True)
class SymbolMatrix:
    xi: float
    entries: np.ndarray

    @property
    def trace(self) -> float:
        return float(self.entries[0, 0].real + self.entries[1, 1].real)

    @property
    def det(self) -> float:
        e = self.entries
        return float((e[0, 0] * e[1, 1] - e[0, 1] * e[1, 0]).real)


@dataclass(frozen=True)
class EigenPair:
    xi: float
    lam_plus: complex
    lam_minus: complex
    regime: Regime


@dataclass(frozen=True)
class SpectralCurves:
    """Eigenvalue branches sampled over a frequency range."""

    xi: np.ndarray
    lam_plus: np.ndarray
    lam_minus: np.ndarray


def symbol_matrix(xi: float, p: Params) -> SymbolMatrix:
    """M(xi) = [[0, 1], [-(m + xi^2), -xi^2]]."""
    d = p.m + xi * xi
    return SymbolMatrix(xi, np.array([[0.0, 1.0], [-d, -xi * xi]], dtype=float))


def critical_frequency(p: Params) -> float:
    """Frequency where the two branches collide: xi_c^2 = 2 + 2 sqrt(1 + m)."""
    return float(np.sqrt(2.0 + 2.0 * np.sqrt(1.0 + p.m)))


def eigenvalue_arrays(xi: np.ndarray, p: Params) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised eigenvalue branches lambda_+- = (-xi^2 +- sqrt(disc)) / 2.

    disc = xi^4 - 4(m + xi^2).  In the underdamped regime (disc < 0) the real
    part is exactly -xi^2/2 by construction; in the overdamped regime the slow
    root is formed as det / lambda_fast to avoid cancellation.
    """
    xi = np.asarray(xi, dtype=float)
    xi2 = xi * xi
    det = p.m + xi2
    disc = xi2 * xi2 - 4.0 * det
    under = disc < 0.0
    om = np.sqrt(np.abs(disc)) / 2.0
    lam_fast = np.where(under, -0.5 * xi2 - 1j * om, -0.5 * xi2 - om + 0j)
    lam_slow = np.where(under, -0.5 * xi2 + 1j * om, det / np.where(under, 1.0, lam_fast))
    return lam_slow, lam_fast


def eigenpair(xi: float, p: Params) -> EigenPair:
    lp, lm = eigenvalue_arrays(np.array([xi]), p)
    disc = xi ** 4 - 4.0 * (p.m + xi ** 2)
    if disc < 0.0:
        reg = Regime.UNDERDAMPED
    elif disc > 0.0:
        reg = Regime.OVERDAMPED
    else:
        reg = Regime.CRITICAL
    return EigenPair(float(xi), complex(lp[0]), complex(lm[0]), reg)


def _propagator_entries(xi: np.ndarray, p: Params, t: float):
    """Entries of exp(t M(xi)) as four arrays over the frequency grid.

    Uses the spectral decomposition exp(tM) = e^{t l+} P+ + e^{t l-} P- with
    P+- = (M - l-+ I) / (l+- - l-+) when the eigenvalue gap exceeds
    DEFECT_TOL * max(1, |l+|), and the Jordan-limit formula
    e^{t l}(I + t (M - l I)) at coincidence.
    """
    xi = np.asarray(xi, dtype=float)
    d = p.m + xi * xi
    lp, lm = eigenvalue_arrays(xi, p)
    gap = lp - lm
    defective = np.abs(gap) <= DEFECT_TOL * np.maximum(1.0, np.abs(lp))
    safe_gap = np.where(defective, 1.0, gap)
    with np.errstate(under="ignore"):
        ep = np.exp(t * lp)
        em = np.exp(t * lm)
        # semisimple branch
        e11 = (lp * em - lm * ep) / safe_gap
        e12 = (ep - em) / safe_gap
        e21 = -d * e12
        e22 = (lp * ep - lm * em) / safe_gap
        # Jordan limit at the critical frequency
        lam = 0.5 * (lp + lm)
        eb = np.exp(t * lam)
        j11 = eb * (1.0 - t * lam)
        j12 = eb * t
        j21 = -d * j12
        j22 = eb * (1.0 + t * lam)
    return (
        np.where(defective, j11, e11),
        np.where(defective, j12, e12),
        np.where(defective, j21, e21),
        np.where(defective, j22, e22),
    )


def mode_propagator(xi: float, p: Params, t: float) -> np.ndarray:
    """Closed-form exp(t M(xi)) as a 2x2 complex matrix; t >= 0."""
    if t < 0:
        raise ValueError(f"propagation time must be nonnegative, got t={t}")
    if t == 0.0:
        return np.eye(2, dtype=np.complex128)
    e11, e12, e21, e22 = _propagator_entries(np.array([float(xi)]), p, float(t))
    return np.array([[e11[0], e12[0]], [e21[0], e22[0]]], dtype=np.complex128)


def propagate(zh: SpectralState, p: Params, t: float) -> SpectralState:
    """Exact discrete semigroup: apply exp(t M(xi_j)) mode by mode."""
    if t < 0:
        raise ValueError(f"propagation time must be nonnegative, got t={t}")
    if t == 0.0:
        return SpectralState(zh.grid, zh.u_hat.copy(), zh.v_hat.copy())
    e11, e12, e21, e22 = _propagator_entries(zh.xi, p, float(t))
    return SpectralState(
        zh.grid,
        e11 * zh.u_hat + e12 * zh.v_hat,
        e21 * zh.u_hat + e22 * zh.v_hat,
    )


def _check_not_spectral(s: float, p: Params) -> None:
    if min(abs(s - p.sqrt_m), abs(s + p.sqrt_m)) < SPECTRAL_GUARD:
        raise ValueError(
            f"i*s with s={s} lies on the boundary spectrum +-i*sqrt(m); resolvent undefined"
        )


def resolvent_apply_spectral(s: float, data: State, p: Params) -> State:
    """Apply (i s - A)^(-1) mode by mode through the 2x2 symbol inverse.

    Independent of the Green's-function solver; used as its cross-check.
    """
    _check_not_spectral(s, p)
    grid = data.grid
    f = forward_transform(grid, data.u)
    g = forward_transform(grid, data.v)
    xi2 = grid.xi ** 2
    d = p.m + xi2
    delta = d - s * s + 1j * s * xi2
    u_hat = ((1j * s + xi2) * f + g) / delta
    v_hat = (-d * f + 1j * s * g) / delta
    return State(grid, inverse_transform(grid, u_hat), inverse_transform(grid, v_hat))


# ---------------------------------------------------------------------------
# resolvent-norm oracle
# ---------------------------------------------------------------------------

def weighted_resolvent_gain(s: float, xi, p: Params) -> np.ndarray:
    """Spectral norm of W(xi) (i s I - M(xi))^(-1) W(xi)^(-1), vectorised in xi.

    W = diag(sqrt(m + xi^2), 1) turns the per-mode Euclidean norm into the
    energy-norm contribution, so the supremum of this gain over xi is the
    operator norm of the resolvent on X.  The 2x2 largest singular value is
    evaluated in closed form from the Frobenius norm and the determinant.
    """
    xi = np.asarray(xi, dtype=float)
    xi2 = xi * xi
    d = p.m + xi2
    delta = d - s * s + 1j * s * xi2
    ad2 = np.abs(delta) ** 2
    # weighted inverse = [[is + xi^2, sqrt(d)], [-sqrt(d), is]] / delta
    frob2 = (np.abs(1j * s + xi2) ** 2 + 2.0 * d + s * s) / ad2
    det2 = 1.0 / ad2
    inner = np.maximum(frob2 * frob2 - 4.0 * det2, 0.0)
    return np.sqrt(0.5 * (frob2 + np.sqrt(inner)))


@dataclass(frozen=True)
class ResolventSearch:
    """Frequency-sweep specification for the norm supremum.

    Linear grid on [0, linear_span * xi_c] at the stated resolution, a log
    grid out to log_xi_max, golden-section polish around the grid maximiser,
    and decade extension until the tail stops moving the supremum.
    """

    linear_span: float = 4.0
    linear_resolution: float = 1e-3
    log_xi_max: float = 1e4
    log_points_per_decade: int = 64
    golden_tol: float = 1e-10
    tail_rel_tol: float = 1e-6


def _golden_max(f, a: float, b: float, tol: float, maxiter: int = 200) -> float:
    """Golden-section search for the maximum of f on [a, b]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a < tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return max(fc, fd)


def resolvent_norm(s: float, p: Params, search: ResolventSearch | None = None) -> float:
    """||R(is, A)|| on the energy space via the frequency supremum.

    Errors out within SPECTRAL_GUARD of the two spectral points s = +-sqrt(m)
    rather than returning huge values.  The xi -> infinity limit of the gain,
    1/sqrt(1 + s^2), is included as an explicit candidate so the tail is
    always certified.
    """
    _check_not_spectral(s, p)
    sp = search or ResolventSearch()
    xc = critical_frequency(p)
    lin_hi = sp.linear_span * xc
    n_lin = int(np.ceil(lin_hi / sp.linear_resolution)) + 1
    grid = np.linspace(0.0, lin_hi, n_lin)
    n_log = int(np.ceil(sp.log_points_per_decade * np.log10(sp.log_xi_max / lin_hi)))
    grid = np.concatenate([grid, np.geomspace(lin_hi, sp.log_xi_max, max(n_log, 2))])

    vals = weighted_resolvent_gain(s, grid, p)
    i = int(np.argmax(vals))
    best = float(vals[i])

    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, grid.size - 1)]
    if hi > lo:
        best = max(best, float(_golden_max(
            lambda y: float(weighted_resolvent_gain(s, np.array([y]), p)[0]),
            float(lo), float(hi), sp.golden_tol)))

    # extend the log tail decade by decade until the supremum is stable
    lo_edge = sp.log_xi_max
    for _ in range(16):
        tail = np.geomspace(lo_edge, 10.0 * lo_edge, sp.log_points_per_decade)
        tail_best = float(weighted_resolvent_gain(s, tail, p).max())
        lo_edge *= 10.0
        if tail_best <= best * (1.0 + sp.tail_rel_tol):
            break
        best = max(best, tail_best)

    limit = 1.0 / np.sqrt(1.0 + s * s)
    return float(max(best, limit))


@dataclass(frozen=True)
class ResolventProfile:
    """Sampled map s -> ||R(is, A)|| with run metadata."""

    s: np.ndarray
    norm: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.s.shape != self.norm.shape or self.s.ndim != 1:
            raise ValueError("s and norm must be 1-d arrays of equal length")
        if np.any(self.norm <= 0):
            raise ValueError("resolvent norms must be positive")


def resolvent_profile(
    s_values: np.ndarray, p: Params, search: ResolventSearch | None = None
) -> ResolventProfile:
    s_values = np.asarray(s_values, dtype=float)
    norms = np.array([resolvent_norm(float(s), p, search) for s in s_values])
    meta = {"m": p.m, "search": (search or ResolventSearch()).__dict__.copy()}
    return ResolventProfile(s_values, norms, meta)


def spectral_curves(p: Params, xi_max: float, n_pts: int) -> SpectralCurves:
    """Eigenvalue branches sampled on [0, xi_max].

    As xi -> 0 the branches approach +-i sqrt(m) (the two boundary spectral
    points); for xi > 0 both real parts are strictly negative; the slow
    overdamped branch tends to -1 as xi -> infinity.
    """
    if xi_max <= 0:
        raise ValueError("xi_max must be positive")
    xi = np.linspace(0.0, xi_max, n_pts)
    lp, lm = eigenvalue_arrays(xi, p)
    return SpectralCurves(xi, lp, lm)
