"""Green's-function resolvent: coefficient branch, kernel identities, solvers."""

import numpy as np
import pytest
from scipy.integrate import quad

import kgkv as K
from conftest import roundtrip_residual, state_gap
from kgkv.model import forward_transform, inverse_transform


def _log_s_samples(p, n=500):
    """Log-spaced admissible s in the three regimes |s|<sqrt(m), s>sqrt(m), s<-sqrt(m)."""
    rm = p.sqrt_m
    inner = rm * (1.0 - np.geomspace(1e-9, 1.0, n, endpoint=False))
    outer = rm * (1.0 + np.geomspace(1e-9, 1e4, n))
    return np.concatenate([inner, -inner[inner != 0.0], outer, -outer])


def test_coefficient_examples(p1):
    h = K.helmholtz_coefficient(0.0, p1)
    assert h.value == 1.0 and h.sqrt_value == 1.0
    h = K.helmholtz_coefficient(2.0, p1)
    assert h.value == pytest.approx(-0.6 + 1.2j, rel=1e-15)
    for bad in (1.0, -1.0, 1.0 + 1e-13):
        with pytest.raises(ValueError):
            K.helmholtz_coefficient(bad, p1)


@pytest.mark.parametrize("m", [0.25, 1.0, 4.0])
def test_branch_and_half_angle_floor(m):
    p = K.Params(m)
    floor = K.cos_half_angle_floor(p)
    assert floor == pytest.approx(min(1.0 / np.sqrt(2.0), np.sin(np.arctan(np.sqrt(m)) / 2.0)))
    for s in _log_s_samples(p, 400):
        lam = K.helmholtz_coefficient(float(s), p)
        assert lam.sqrt_value.real > 0.0
        assert np.cos(np.angle(lam.value) / 2.0) >= floor - 1e-12


def _l1_quadrature(s, p, kernel):
    """Adaptive quadrature of |G| or |Q| over the line, tail added analytically."""
    sq = K.helmholtz_coefficient(s, p).sqrt_value
    a = sq.real
    x_max = min(-np.log(1e-14 * a) / a, 3000.0 / a)
    if kernel == "g":
        f = lambda x: abs(np.exp(-sq * x) / (2.0 * sq))
        tail = abs(1.0 / (2.0 * sq)) * np.exp(-a * x_max) / a
    else:
        f = lambda x: 0.5 * np.exp(-a * x)
        tail = 0.5 * np.exp(-a * x_max) / a
    val, _ = quad(f, 0.0, x_max, epsabs=1e-16, epsrel=1e-13, limit=400)
    return 2.0 * (val + tail)


@pytest.mark.parametrize("kernel,closed", [("g", K.greens_kernel_l1),
                                           ("q", K.derivative_kernel_l1)])
def test_kernel_l1_closed_form_vs_quadrature(kernel, closed, p1):
    samples = np.concatenate([
        np.geomspace(1e-3, 0.999, 17),          # inside (-sqrt m, sqrt m)
        1.0 + np.geomspace(1e-3, 1e3, 17),      # above sqrt m
        -(1.0 + np.geomspace(1e-3, 1e3, 16)),   # below -sqrt m
    ])
    for s in samples:
        c = closed(float(s), p1)
        q = _l1_quadrature(float(s), p1, kernel)
        assert c == pytest.approx(q, rel=1e-10)
    assert K.greens_kernel_l1(0.0, p1) == pytest.approx(1.0, rel=1e-14)


def test_g_l1_blowup_rate_near_sqrt_m(p1):
    # ||G||_1 diverges like |s - sqrt(m)|^-1 while the product stays bounded
    prods = [abs(s - 1.0) * K.greens_kernel_l1(s, p1)
             for s in 1.0 + np.geomspace(1e-6, 1e-1, 6)]
    assert max(prods) / min(prods) < 3.0
    assert K.greens_kernel_l1(1.0 + 1e-6, p1) > 1e5


def test_kernel_samples_l1_and_symmetry(p1):
    g = K.TorusGrid(160.0, 2 ** 13)
    ker = K.kernel_samples(2.0, p1, g)
    discrete = g.dx * np.sum(np.abs(ker.g))
    assert discrete == pytest.approx(K.greens_kernel_l1(2.0, p1), rel=1e-2)
    # G even, Q odd in the displacement
    assert np.abs(ker.g[1:] - ker.g[:0:-1]).max() <= 1e-14 * np.abs(ker.g).max()
    assert np.abs(ker.q[1:] + ker.q[:0:-1]).max() <= 1e-14 * np.abs(ker.q).max()
    assert ker.q[0] == 0.0


def test_resolvent_line_zero_data(p1):
    g = K.TorusGrid(160.0, 2 ** 10)
    z = K.resolvent_apply_line(2.0, K.zero_state(g), p1)
    assert np.abs(z.u).max() == 0.0 and np.abs(z.v).max() == 0.0


@pytest.mark.parametrize("path", ["symbol", "kernel"])
def test_resolvent_line_roundtrip(path, p1):
    g = K.TorusGrid(160.0, 2 ** 14)
    data = K.random_smooth_state(17, g, p1, "gaussian-packet")
    for s in (0.5, 2.0, 10.0):
        z = K.resolvent_apply_line(s, data, p1, path=path)
        assert roundtrip_residual(s, z, data, p1) <= 1e-8


def test_resolvent_line_matches_symbol_inverse(p1):
    g = K.TorusGrid(160.0, 2 ** 13)
    data = K.random_smooth_state(23, g, p1, "gaussian-packet")
    for s in (0.5, 2.0, 10.0):
        a = K.resolvent_apply_line(s, data, p1, path="symbol")
        b = K.resolvent_apply_spectral(s, data, p1)
        assert state_gap(a, b, p1) <= 1e-9


def test_convolution_paths_agree(p1):
    g = K.TorusGrid(160.0, 2 ** 14)
    data = K.random_smooth_state(29, g, p1, "gaussian-packet")
    for s in (0.5, 2.0):
        a = K.resolvent_apply_line(s, data, p1, path="symbol")
        b = K.resolvent_apply_line(s, data, p1, path="kernel")
        assert state_gap(a, b, p1) <= 1e-9


def test_kernel_tail_guard_raises(p1):
    # s close to sqrt(m): kernel width explodes and a short torus must refuse
    g = K.TorusGrid(40.0, 2 ** 10)
    data = K.random_smooth_state(3, g, p1, "gaussian-packet")
    with pytest.raises(K.KernelTailError) as exc:
        K.resolvent_apply_line(1.01, data, p1)
    assert exc.value.tail > 1e-12


def test_solution_derivative_against_spectral(p1):
    g = K.TorusGrid(160.0, 2 ** 14)
    data = K.random_smooth_state(31, g, p1, "gaussian-packet")
    for s in (0.5, 2.0, 10.0):
        z = K.resolvent_apply_line(s, data, p1, path="symbol")
        du = inverse_transform(g, 1j * g.xi * forward_transform(g, z.u))
        scale = np.abs(du).max()
        for path in ("symbol", "kernel"):
            dq = K.solution_derivative_line(s, data, p1, path=path)
            assert np.abs(dq - du).max() <= 1e-8 * scale


@pytest.mark.parametrize("path", ["symbol", "kernel"])
def test_halfline_boundary_trace_and_roundtrip(path, p1):
    # the embedding torus doubles dx, so match the line test's resolution
    g = K.TorusGrid(160.0, 2 ** 14, K.Boundary.HALFLINE)
    data = K.random_smooth_state(37, g, p1, "gaussian-packet")
    scale = np.sqrt(K.x_norm_sq(data, p1))
    for s in (0.5, 2.0, 10.0):
        z = K.resolvent_apply_halfline(s, data, p1, path=path)
        assert max(abs(z.u[0]), abs(z.v[0])) <= 1e-10 * scale
        assert roundtrip_residual(s, z, data, p1) <= 1e-8


def test_halfline_agrees_with_line_far_from_boundary(p1):
    # data far from x = 0: the boundary correction is exponentially small
    n = 2 ** 13
    gh = K.TorusGrid(160.0, n, K.Boundary.HALFLINE)
    x = gh.x
    u = np.exp(-((x - 80.0) ** 2) / 2.0).astype(complex)
    v = 0.5 * np.exp(-((x - 78.0) ** 2) / 2.5).astype(complex)
    u[0] = v[0] = 0.0
    data_h = K.State(gh, u, v)
    # identical samples on a periodic torus: node i sits at x - 80, so the
    # packet is recentred at the origin and the solve is a pure relabelling
    gl = K.TorusGrid(160.0, n)
    data_l = K.State(gl, u, v)
    s = 6.0
    zh = K.resolvent_apply_halfline(s, data_h, p1)
    zl = K.resolvent_apply_line(s, data_l, p1)
    sel = (x > 60.0) & (x < 100.0)
    scale = np.abs(zl.u).max()
    assert np.abs(zh.u[sel] - zl.u[sel]).max() <= 1e-6 * scale
    assert np.abs(zh.v[sel] - zl.v[sel]).max() <= 1e-6 * scale


def test_no_imaginary_eigenvalues_on_grid(p1):
    # at s = +- sqrt(m) every nonzero mode matrix stays invertible:
    # det(i s I - M(xi)) = xi^2 (1 + i s) != 0, so only z = 0 solves
    # (i s - A) z = 0 mode by mode
    g = K.TorusGrid(160.0, 2 ** 12)
    xi = g.xi[g.xi != 0.0]
    for s in (1.0, -1.0):
        det = p1.m + xi ** 2 - s ** 2 + 1j * s * xi ** 2
        assert np.abs(det).min() >= np.abs(xi ** 2).min() * 0.99
