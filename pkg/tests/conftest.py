"""Shared helpers: independent oracles used across the test modules."""

import numpy as np
import pytest

import kgkv as K


@pytest.fixture
def p1():
    return K.Params(1.0)


def apply_resolvent_equation(s: float, z: K.State, p: K.Params) -> K.SpectralState:
    """(i s - A) z evaluated spectrally; the round-trip oracle."""
    zh = K.to_spectral(z)
    xi2 = zh.xi ** 2
    ru = 1j * s * zh.u_hat - zh.v_hat
    rv = (p.m + xi2) * zh.u_hat + (1j * s + xi2) * zh.v_hat
    return K.SpectralState(zh.grid, ru, rv)


def roundtrip_residual(s: float, z: K.State, data: K.State, p: K.Params) -> float:
    """Relative X-norm of (i s - A) z - data."""
    rec = apply_resolvent_equation(s, z, p)
    dh = K.to_spectral(data)
    gap = K.SpectralState(dh.grid, rec.u_hat - dh.u_hat, rec.v_hat - dh.v_hat)
    return np.sqrt(K.x_norm_sq(gap, p) / K.x_norm_sq(dh, p))


def state_gap(a: K.State, b: K.State, p: K.Params) -> float:
    """Relative X-norm distance between two states on the same grid."""
    diff = K.State(a.grid, a.u - b.u, a.v - b.v)
    return np.sqrt(K.x_norm_sq(diff, p) / K.x_norm_sq(b, p))
