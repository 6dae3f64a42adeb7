"""Grids, states, norms, and canonical test data for the damped Klein-Gordon system.

The model is the one-dimensional Klein-Gordon equation with Kelvin-Voigt
(strain-rate) damping,

    u_tt - u_xx + m u - u_txx = 0,      m > 0,

written as a first-order system for the phase-space point z = (u, v) with
v = u_t.  States live in the energy space whose squared norm is

    ||z||_X^2 = m ||u||^2 + ||u'||^2 + ||v||^2          (L^2 norms),

and the energy of a trajectory is E(t) = ||z(t)||_X^2 / 2.

The line problem is truncated to a periodic torus of length L; the half-line
problem with a Dirichlet condition at x = 0 is truncated to (0, L) and
expanded in the sine basis sin(j pi x / L).  Both transforms are scaled so
that Parseval holds with unit weights:  sum_j |u_hat_j|^2 equals the
trapezoid-rule value of the integral of |u|^2.  All fields are complex.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np
from scipy.fft import dst, fft, ifft

__all__ = [
    "Boundary",
    "Params",
    "TorusGrid",
    "State",
    "SpectralState",
    "EnergyTrace",
    "zero_state",
    "forward_transform",
    "inverse_transform",
    "to_spectral",
    "to_state",
    "x_norm_sq",
    "energy",
    "dissipation",
    "bump_profile",
    "bump_curvature_sup",
    "weyl_state",
    "random_smooth_state",
    "smooth_state_profile",
    "TAIL_XI_PLATEAU",
    "TAIL_XI_CUTOFF",
]

# Half-line boundary-trace tolerance, relative to max(1, sup|u|, sup|v|).
TRACE_TOL = 1e-12

# low-freq-tail spectral plateau: |u_hat| ~ |xi|^(-1/2) up to TAIL_XI_PLATEAU,
# then a smooth cutoff reaching zero at TAIL_XI_CUTOFF.
TAIL_XI_PLATEAU = 0.5
TAIL_XI_CUTOFF = 1.0


class Boundary(str, enum.Enum):
    """Spatial truncation: periodic torus for the line, sine basis for (0, L)."""

    LINE = "periodic-line"
    HALFLINE = "dirichlet-halfline"


@dataclass(frozen=True)
class Params:
    """Model parameters: the mass coefficient m > 0."""

    m: float

    def __post_init__(self):
        if not (np.isfinite(self.m) and self.m > 0):
            raise ValueError(f"mass coefficient must be positive, got m={self.m}")

    @property
    def sqrt_m(self) -> float:
        return float(np.sqrt(self.m))


@dataclass(frozen=True)
class TorusGrid:
    """Uniform grid of n samples on a domain of length L.

    For ``periodic-line`` the nodes are x_i = -L/2 + i dx and the mode
    frequencies are the FFT frequencies 2 pi j / L.  For
    ``dirichlet-halfline`` the nodes are x_i = i dx on [0, L); the value at
    x = 0 is stored (and must be ~0), the value at x = L is an implicit
    zero, and the modes are xi_j = j pi / L for j = 1 .. n-1.
    """

    length: float
    n: int
    boundary: Boundary = Boundary.LINE

    def __post_init__(self):
        if not (np.isfinite(self.length) and self.length > 0):
            raise ValueError(f"grid length must be positive, got {self.length}")
        if self.n < 2 or (self.n & (self.n - 1)) != 0:
            raise ValueError(f"sample count must be a power of two, got n={self.n}")
        if not isinstance(self.boundary, Boundary):
            object.__setattr__(self, "boundary", Boundary(self.boundary))

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def x(self) -> np.ndarray:
        if self.boundary is Boundary.LINE:
            return -0.5 * self.length + self.dx * np.arange(self.n)
        return self.dx * np.arange(self.n)

    @property
    def xi(self) -> np.ndarray:
        """Mode frequencies (FFT order on the line, j = 1..n-1 on the half-line)."""
        if self.boundary is Boundary.LINE:
            return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)
        return np.pi * np.arange(1, self.n) / self.length

    @property
    def mode_spacing(self) -> float:
        """Frequency spacing between adjacent modes."""
        if self.boundary is Boundary.LINE:
            return 2.0 * np.pi / self.length
        return np.pi / self.length


def _check_halfline_trace(grid: TorusGrid, u: np.ndarray, v: np.ndarray) -> None:
    scale = max(1.0, float(np.abs(u).max(initial=0.0)), float(np.abs(v).max(initial=0.0)))
    trace = max(abs(complex(u[0])), abs(complex(v[0])))
    if trace > TRACE_TOL * scale:
        raise ValueError(
            f"half-line state must vanish at x=0: |z(0)|={trace:.3e} "
            f"exceeds {TRACE_TOL:.0e} * {scale:.3e}"
        )


@dataclass(frozen=True)
class State:
    """Sampled phase-space point z = (u, v) on a grid."""

    grid: TorusGrid
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.ascontiguousarray(self.u, dtype=np.complex128)
        v = np.ascontiguousarray(self.v, dtype=np.complex128)
        if u.shape != (self.grid.n,) or v.shape != (self.grid.n,):
            raise ValueError(
                f"fields must have shape ({self.grid.n},), got {u.shape} and {v.shape}"
            )
        if self.grid.boundary is Boundary.HALFLINE:
            _check_halfline_trace(self.grid, u, v)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)


@dataclass(frozen=True)
class SpectralState:
    """Per-mode coefficients (u_hat_j, v_hat_j) at frequencies xi_j."""

    grid: TorusGrid
    u_hat: np.ndarray
    v_hat: np.ndarray

    def __post_init__(self):
        nm = self.grid.n if self.grid.boundary is Boundary.LINE else self.grid.n - 1
        if self.u_hat.shape != (nm,) or self.v_hat.shape != (nm,):
            raise ValueError(f"expected {nm} modes, got {self.u_hat.shape}, {self.v_hat.shape}")

    @property
    def xi(self) -> np.ndarray:
        return self.grid.xi


def zero_state(grid: TorusGrid) -> State:
    z = np.zeros(grid.n, dtype=np.complex128)
    return State(grid, z, z.copy())


def forward_transform(grid: TorusGrid, a: np.ndarray) -> np.ndarray:
    """Field samples -> mode coefficients (Parseval-unit scaling).

    Line coefficients are literal: u(x) = sum_j c_j e^{i xi_j x} / sqrt(L),
    so the left grid edge enters as a phase on top of the raw FFT.
    """
    a = np.asarray(a, dtype=np.complex128)
    if grid.boundary is Boundary.LINE:
        phase = np.exp(-1j * grid.xi * grid.x[0])
        return fft(a) * (grid.dx / np.sqrt(grid.length)) * phase
    # interior samples only; x=0 sample is a boundary zero
    return dst(a[1:], type=1, norm="ortho") * np.sqrt(grid.dx)


def inverse_transform(grid: TorusGrid, coeff: np.ndarray) -> np.ndarray:
    """Mode coefficients -> field samples."""
    if grid.boundary is Boundary.LINE:
        phase = np.exp(1j * grid.xi * grid.x[0])
        return ifft(coeff * phase * (np.sqrt(grid.length) / grid.dx))
    out = np.zeros(grid.n, dtype=np.complex128)
    out[1:] = dst(np.asarray(coeff, dtype=np.complex128) / np.sqrt(grid.dx), type=1, norm="ortho")
    return out


def to_spectral(z: State) -> SpectralState:
    return SpectralState(z.grid, forward_transform(z.grid, z.u), forward_transform(z.grid, z.v))


def to_state(zh: SpectralState) -> State:
    return State(zh.grid, inverse_transform(zh.grid, zh.u_hat), inverse_transform(zh.grid, zh.v_hat))


def _as_spectral(z) -> SpectralState:
    return z if isinstance(z, SpectralState) else to_spectral(z)


def x_norm_sq(z, p: Params) -> float:
    """Squared energy-space norm  m||u||^2 + ||u'||^2 + ||v||^2.

    Evaluated spectrally as sum_j (m + xi_j^2)|u_hat_j|^2 + |v_hat_j|^2;
    accepts a State or a SpectralState.
    """
    zh = _as_spectral(z)
    xi2 = zh.xi ** 2
    val = np.sum((p.m + xi2) * np.abs(zh.u_hat) ** 2) + np.sum(np.abs(zh.v_hat) ** 2)
    return float(val)


def energy(z, p: Params) -> float:
    """E = ||z||_X^2 / 2."""
    return 0.5 * x_norm_sq(z, p)


def dissipation(z) -> float:
    """Instantaneous dissipation ||v'||^2 = sum_j xi_j^2 |v_hat_j|^2."""
    zh = _as_spectral(z)
    return float(np.sum(zh.xi ** 2 * np.abs(zh.v_hat) ** 2))


# ---------------------------------------------------------------------------
# smooth bump and approximate-eigenvector (Weyl) states
# ---------------------------------------------------------------------------

def _mollifier(t: np.ndarray) -> np.ndarray:
    # exp(-1/t) for t > 0, zero otherwise
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
        return np.where(t > 0.0, np.exp(-1.0 / np.where(t > 0.0, t, 1.0)), 0.0)


def _smoothstep(t: np.ndarray) -> np.ndarray:
    a = _mollifier(t)
    b = _mollifier(1.0 - t)
    return a / (a + b)


def bump_profile(x) -> np.ndarray:
    """C-infinity bump: 1 on [-1/2, 1/2], 0 outside (-1, 1).

    Built from the exp(-1/t) mollifier so the transition region and hence the
    curvature constant ||bump''||_inf are fully reproducible.
    """
    return _smoothstep(2.0 - 2.0 * np.abs(np.asarray(x, dtype=float)))


@functools.lru_cache(maxsize=1)
def bump_curvature_sup(samples: int = 400_001) -> float:
    """sup |bump''| measured by central differences on a dense grid."""
    x = np.linspace(-1.25, 1.25, samples)
    h = x[1] - x[0]
    f = bump_profile(x)
    d2 = (f[2:] - 2.0 * f[1:-1] + f[:-2]) / h ** 2
    return float(np.abs(d2).max())


def weyl_state(k: int, p: Params, grid: TorusGrid) -> State:
    """Approximate eigenvector z_k = (u_k, i sqrt(m) u_k) for the point i sqrt(m).

    u_k(x) = bump(x/k) / sqrt(k) on the line (centred), shifted to
    bump(x/k - 1) / sqrt(k) on the half-line so the support stays in (0, 2k).
    Requires L >= 4k so that the support of width 2k fits with margin.
    """
    if k < 1:
        raise ValueError(f"scale index must be a positive integer, got {k}")
    if grid.length < 4.0 * k:
        raise ValueError(
            f"support of width {2 * k} exceeds half the domain (L={grid.length}); need L >= {4 * k}"
        )
    if grid.boundary is Boundary.LINE:
        u = bump_profile(grid.x / k) / np.sqrt(k)
    else:
        u = bump_profile(grid.x / k - 1.0) / np.sqrt(k)
    u = u.astype(np.complex128)
    return State(grid, u, 1j * p.sqrt_m * u)


# ---------------------------------------------------------------------------
# canonical random smooth data and its continuum spectral profiles
# ---------------------------------------------------------------------------

def _packet_params(seed: int, grid: TorusGrid) -> dict:
    """Deterministic Gaussian-sum parameters shared by the sampled state and
    its closed-form spectral profile."""
    rng = np.random.default_rng(seed)
    center = 0.0 if grid.boundary is Boundary.LINE else 0.5 * grid.length
    out = {}
    for name in ("u", "v"):
        nb = 2
        amps = rng.uniform(0.5, 1.5, nb)          # positive => nonzero mean
        offs = rng.uniform(-2.0, 2.0, nb)
        sigs = rng.uniform(0.6, 1.0, nb)
        out[name] = (amps, center + offs, sigs)
    return out


def _packet_field(x: np.ndarray, amps, centers, sigs) -> np.ndarray:
    f = np.zeros_like(x, dtype=np.complex128)
    for a, c, s in zip(amps, centers, sigs):
        f += a * np.exp(-((x - c) ** 2) / (2.0 * s ** 2))
    return f


def _tail_modulus(xi: np.ndarray) -> np.ndarray:
    """|xi|^(-1/2) plateau with a smooth high-frequency cutoff."""
    axi = np.abs(xi)
    cut = _smoothstep((TAIL_XI_CUTOFF - axi) / (TAIL_XI_CUTOFF - TAIL_XI_PLATEAU))
    with np.errstate(divide="ignore"):
        mag = np.where(axi > 0.0, axi ** -0.5, 0.0)
    return mag * cut


def random_smooth_state(seed: int, grid: TorusGrid, p: Params, profile: str) -> State:
    """Deterministic smooth test data.

    ``gaussian-packet``: sums of positive Gaussians in u and v (generic data,
    nonzero mean).  ``low-freq-tail``: spectral amplitude |xi|^(-1/2) on
    0 < |xi| <= 0.5 with a smooth cutoff, random per-mode phases, v = 0;
    the modulus law is what makes the t^-2 decay class realisable.
    """
    if profile == "gaussian-packet":
        pp = _packet_params(seed, grid)
        x = grid.x
        u = _packet_field(x, *pp["u"])
        v = _packet_field(x, *pp["v"])
        if grid.boundary is Boundary.HALFLINE:
            u[0] = 0.0
            v[0] = 0.0
        return State(grid, u, v)
    if profile == "low-freq-tail":
        rng = np.random.default_rng(seed)
        xi = grid.xi
        phases = np.exp(2j * np.pi * rng.uniform(size=xi.shape))
        u_hat = _tail_modulus(xi) * np.sqrt(grid.mode_spacing) * phases
        v_hat = np.zeros_like(u_hat)
        return to_state(SpectralState(grid, u_hat, v_hat))
    raise ValueError(f"unknown data profile {profile!r}")


def smooth_state_profile(seed: int, grid: TorusGrid, p: Params, profile: str):
    """Continuum spectral profile matching :func:`random_smooth_state`.

    Returns a callable xi -> (2, len(xi)) complex array z_hat(xi) such that
    the grid state carries coefficients z_hat(xi_j) * sqrt(mode_spacing)
    (up to an energy-irrelevant common phase per mode).  Used by the
    grid-free mode-integral energy oracle.
    """
    if profile == "gaussian-packet":
        pp = _packet_params(seed, grid)
        halfline = grid.boundary is Boundary.HALFLINE

        def packet_hat(xi):
            xi = np.atleast_1d(np.asarray(xi, dtype=float))
            comps = []
            for name in ("u", "v"):
                amps, centers, sigs = pp[name]
                f = np.zeros(xi.shape, dtype=np.complex128)
                for a, c, s in zip(amps, centers, sigs):
                    env = a * s * np.exp(-0.5 * (s * xi) ** 2)
                    if halfline:
                        # sine-transform density sqrt(2/pi) integral u sin(xi x)
                        f += env * np.sin(xi * c) * 2.0
                    else:
                        f += env * np.exp(-1j * xi * c)
                comps.append(f)
            return np.stack(comps)

        return packet_hat

    if profile == "low-freq-tail":

        def tail_hat(xi):
            xi = np.atleast_1d(np.asarray(xi, dtype=float))
            top = _tail_modulus(xi).astype(np.complex128)
            return np.stack([top, np.zeros_like(top)])

        return tail_hat

    raise ValueError(f"unknown data profile {profile!r}")


@dataclass(frozen=True)
class EnergyTrace:
    """Time-stamped energies E(t) and dissipation values D(t)."""

    t: np.ndarray
    E: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        E = np.asarray(self.E, dtype=float)
        D = np.asarray(self.D, dtype=float)
        if not (t.shape == E.shape == D.shape) or t.ndim != 1:
            raise ValueError("t, E, D must be 1-d arrays of equal length")
        if t.size > 1 and not np.all(np.diff(t) > 0):
            raise ValueError("sample times must be strictly increasing")
        scale = E.max(initial=0.0)
        if E.size > 1 and np.any(np.diff(E) > 1e-10 * max(scale, 1e-300)):
            raise ValueError("energy must be nonincreasing along the trace")
        for name, arr in (("t", t), ("E", E), ("D", D)):
            if np.any(arr < 0):
                raise ValueError(f"{name} must be nonnegative")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "D", D)
