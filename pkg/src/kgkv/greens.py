"""Closed-form resolvent solver on the line and half-line via Green's functions.

For s real with |s| != sqrt(m) the resolvent equation (i s - A) z = (f, g)
reduces, through w = u + v, to the complex Helmholtz problem

    -w'' + lam w = g + (i s - lam) f,      lam = (m - s^2) / (1 + i s),

whose kernel on the line is

    G(x) = e^{-sqrt(lam) |x|} / (2 sqrt(lam)),       Q(x) = G'(x),

with the principal square root (Re sqrt(lam) > 0, branch cut on the negative
real axis; lam never lands on the cut).  The solution is recovered from

    u = (G * rhs + f) / (1 + i s),        v = i s u - f,

and u' uses Q in place of G.  On the half-line with a Dirichlet condition the
data is extended by zero to x <= 0 and a multiple of G centred at the origin
is subtracted so that u(0) = v(0) = 0.

Two independent convolution paths are exposed: multiplication by the exact
mode symbol 1/(lam + xi^2) ("symbol"), and FFT convolution with the sampled
periodised kernel plus a trapezoid kink correction ("kernel").  The second
path validates the kernel formulas themselves; both must agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import fft, ifft

from .model import (
    Boundary,
    Params,
    State,
    TorusGrid,
    forward_transform,
    inverse_transform,
)

__all__ = [
    "HelmholtzCoefficient",
    "KernelSamples",
    "KernelTailError",
    "helmholtz_coefficient",
    "cos_half_angle_floor",
    "greens_kernel_l1",
    "derivative_kernel_l1",
    "kernel_samples",
    "resolvent_apply_line",
    "solution_derivative_line",
    "resolvent_apply_halfline",
]

SPECTRAL_GUARD = 1e-12

# Kernel value must have decayed below this at the wrap-around distance.
KERNEL_TAIL_TOL = 1e-12


class KernelTailError(ValueError):
    """Domain too short: the kernel has not decayed at the wrap distance."""

    def __init__(self, tail: float, margin: float):
        self.tail = tail
        self.margin = margin
        super().__init__(
            f"kernel tail e^(-Re sqrt(lam) * {margin:.3g}) = {tail:.3e} exceeds "
            f"{KERNEL_TAIL_TOL:.0e}; enlarge the domain for this s"
        )


@dataclass(frozen=True)
class HelmholtzCoefficient:
    """lam = (m - s^2)/(1 + i s) and its principal square root."""

    s: float
    value: complex
    sqrt_value: complex


def helmholtz_coefficient(s: float, p: Params) -> HelmholtzCoefficient:
    """Coefficient of the reduced Helmholtz problem at frequency s.

    lam is never on (-inf, 0]: it is real only at s = 0 (where it equals
    m > 0), and it vanishes only at the excluded points s = +-sqrt(m).
    Consequently Re sqrt(lam) > 0 and the kernel is integrable.
    """
    if min(abs(s - p.sqrt_m), abs(s + p.sqrt_m)) < SPECTRAL_GUARD:
        raise ValueError(
            f"s={s} is a boundary spectral point (+-sqrt(m)); the reduced problem degenerates"
        )
    lam = (p.m - s * s) / (1.0 + 1j * s)
    return HelmholtzCoefficient(float(s), complex(lam), complex(np.sqrt(lam)))


def cos_half_angle_floor(p: Params) -> float:
    """Uniform lower bound for cos(arg(lam)/2) over all admissible s.

    Equals 1/sqrt(2) for |s| < sqrt(m) and sin(arctan(sqrt(m))/2) outside;
    the minimum of the two is the global floor.
    """
    return float(min(1.0 / np.sqrt(2.0), np.sin(np.arctan(p.sqrt_m) / 2.0)))


def greens_kernel_l1(s: float, p: Params) -> float:
    """||G||_L1 = 1 / (|lam| cos(arg(lam)/2)) in closed form."""
    lam = helmholtz_coefficient(s, p).value
    return float(1.0 / (abs(lam) * np.cos(np.angle(lam) / 2.0)))


def derivative_kernel_l1(s: float, p: Params) -> float:
    """||Q||_L1 = 1 / (|lam|^(1/2) cos(arg(lam)/2)) in closed form."""
    lam = helmholtz_coefficient(s, p).value
    return float(1.0 / (np.sqrt(abs(lam)) * np.cos(np.angle(lam) / 2.0)))


# ---------------------------------------------------------------------------
# periodised kernels and corrected discrete convolution
# ---------------------------------------------------------------------------

def _periodized_g(sq: complex, absx: np.ndarray, L: float) -> np.ndarray:
    # sum over periodic images, written overflow-safe
    den = 2.0 * sq * (1.0 - np.exp(-sq * L))
    return (np.exp(-sq * absx) + np.exp(-sq * (L - absx))) / den


def _periodized_q(sq: complex, x: np.ndarray, L: float) -> np.ndarray:
    den = 2.0 * (1.0 - np.exp(-sq * L))
    absx = np.abs(x)
    # np.sign(0) = 0 gives the jump average at the origin
    return -np.sign(x) * (np.exp(-sq * absx) - np.exp(-sq * (L - absx))) / den


@dataclass(frozen=True)
class KernelSamples:
    """Periodised G and Q sampled at the displacement nodes of a torus."""

    s: float
    grid: TorusGrid
    g: np.ndarray
    q: np.ndarray


def kernel_samples(s: float, p: Params, grid: TorusGrid) -> KernelSamples:
    """Sample the periodised kernels at displacements wrap(i dx) in [-L/2, L/2).

    The exact closed form is used at the nodes (no quadrature); the kink of G
    and the jump of Q both sit at displacement zero.
    """
    if grid.boundary is not Boundary.LINE:
        raise ValueError("kernel sampling requires a periodic grid")
    sq = helmholtz_coefficient(s, p).sqrt_value
    d = grid.dx * np.arange(grid.n)
    d = np.where(d >= 0.5 * grid.length, d - grid.length, d)
    g = _periodized_g(sq, np.abs(d), grid.length)
    q = _periodized_q(sq, d, grid.length)
    return KernelSamples(float(s), grid, g, q)


def _conv_kernel_g(ker: KernelSamples, rhs: np.ndarray) -> np.ndarray:
    """Trapezoid convolution with the sampled G, kink-corrected.

    The integrand has a derivative jump of size -rhs(x) at the target node,
    so the trapezoid rule needs the Euler-Maclaurin correction
    -(dx^2/12) rhs; without it the result carries a flat aliasing error of
    relative size dx^2/12 * |lam + xi^2| and cannot reach tight round-trip
    tolerances at practical resolutions.
    """
    dx = ker.grid.dx
    return dx * ifft(fft(ker.g) * fft(rhs)) - (dx * dx / 12.0) * rhs


def _conv_kernel_q(ker: KernelSamples, rhs: np.ndarray, rhs_prime: np.ndarray) -> np.ndarray:
    # jump kernel: origin sample is the average, correction +(dx^2/12) rhs'
    dx = ker.grid.dx
    return dx * ifft(fft(ker.q) * fft(rhs)) + (dx * dx / 12.0) * rhs_prime


def _tail_guard(s: float, p: Params, margin: float) -> None:
    sq = helmholtz_coefficient(s, p).sqrt_value
    tail = float(np.exp(-sq.real * margin))
    if tail > KERNEL_TAIL_TOL:
        raise KernelTailError(tail, margin)


def _resolvent_pieces(s: float, f: np.ndarray, g: np.ndarray, grid: TorusGrid,
                      p: Params, path: str):
    """w = G * (g + (is - lam) f) on a periodic grid, by either path."""
    lam = helmholtz_coefficient(s, p).value
    rhs = g + (1j * s - lam) * f
    if path == "symbol":
        rhs_hat = forward_transform(grid, rhs)
        w = inverse_transform(grid, rhs_hat / (lam + grid.xi ** 2))
    elif path == "kernel":
        w = _conv_kernel_g(kernel_samples(s, p, grid), rhs)
    else:
        raise ValueError(f"unknown convolution path {path!r}")
    return lam, rhs, w


def resolvent_apply_line(s: float, data: State, p: Params, path: str = "symbol") -> State:
    """Solve (i s - A) z = data on the periodic line.

    ``path`` selects the convolution evaluation: "symbol" multiplies by the
    exact mode symbol 1/(lam + xi^2); "kernel" convolves with the sampled
    periodised kernel (corrected trapezoid).  Raises KernelTailError when the
    kernel has not decayed below 1e-12 at distance L/2.
    """
    grid = data.grid
    if grid.boundary is not Boundary.LINE:
        raise ValueError("resolvent_apply_line requires a periodic-line grid")
    _tail_guard(s, p, 0.5 * grid.length)
    _, _, w = _resolvent_pieces(s, data.u, data.v, grid, p, path)
    u = (w + data.u) / (1.0 + 1j * s)
    v = 1j * s * u - data.u
    return State(grid, u, v)


def solution_derivative_line(s: float, data: State, p: Params, path: str = "symbol") -> np.ndarray:
    """u' of the line resolvent solution, through the derivative kernel Q.

    u' = (Q * rhs + f') / (1 + i s); the symbol of Q is i xi / (lam + xi^2).
    """
    grid = data.grid
    if grid.boundary is not Boundary.LINE:
        raise ValueError("solution_derivative_line requires a periodic-line grid")
    _tail_guard(s, p, 0.5 * grid.length)
    lam = helmholtz_coefficient(s, p).value
    rhs = data.v + (1j * s - lam) * data.u
    f_prime = inverse_transform(grid, 1j * grid.xi * forward_transform(grid, data.u))
    if path == "symbol":
        rhs_hat = forward_transform(grid, rhs)
        wp = inverse_transform(grid, 1j * grid.xi * rhs_hat / (lam + grid.xi ** 2))
    elif path == "kernel":
        rhs_prime = inverse_transform(grid, 1j * grid.xi * forward_transform(grid, rhs))
        wp = _conv_kernel_q(kernel_samples(s, p, grid), rhs, rhs_prime)
    else:
        raise ValueError(f"unknown convolution path {path!r}")
    return (wp + f_prime) / (1.0 + 1j * s)


def resolvent_apply_halfline(s: float, data: State, p: Params, path: str = "symbol") -> State:
    """Solve (i s - A) z = data on (0, infinity) with u(0) = v(0) = 0.

    The data is extended by zero to x <= 0 on an embedding torus of period
    2L, the line formulas are evaluated there, and the boundary correction
    eta * G is subtracted with

        eta = 2 sqrt(lam) * (G * rhs)(0),

    which makes the traces vanish identically.  The output is restricted back
    to [0, L).
    """
    grid = data.grid
    if grid.boundary is not Boundary.HALFLINE:
        raise ValueError("resolvent_apply_halfline requires a dirichlet-halfline grid")
    _tail_guard(s, p, grid.length)
    egrid = TorusGrid(2.0 * grid.length, 2 * grid.n, Boundary.LINE)
    n = grid.n
    f = np.zeros(egrid.n, dtype=np.complex128)
    g = np.zeros(egrid.n, dtype=np.complex128)
    f[n:] = data.u   # egrid.x[n:] covers [0, L)
    g[n:] = data.v
    lam, _, w = _resolvent_pieces(s, f, g, egrid, p, path)
    sq = np.sqrt(lam)
    eta = 2.0 * sq * w[n]
    g_at = _periodized_g(sq, np.abs(egrid.x), egrid.length)
    u = (w + f - eta * g_at) / (1.0 + 1j * s)
    v = 1j * s * u - f
    return State(grid, u[n:], v[n:])
