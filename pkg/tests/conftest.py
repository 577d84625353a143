"""Shared fixtures and finite-difference oracles for the test suite."""

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)


def fd_gradient(f, x, h=1e-4):
    """Gradient of scalar ``f`` at ``x`` by Richardson-extrapolated central
    differences (two central stencils at h and h/2)."""
    x = np.asarray(x, dtype=float)
    n = x.size
    out = np.empty(n)
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        d1 = (f(x + h * e) - f(x - h * e)) / (2 * h)
        d2 = (f(x + 0.5 * h * e) - f(x - 0.5 * h * e)) / h
        out[i] = (4 * d2 - d1) / 3
    return out


def fd_hessian(f, x, h=1e-3):
    """Hessian of scalar ``f`` at ``x`` by central differences on fd_gradient."""
    x = np.asarray(x, dtype=float)
    n = x.size
    out = np.empty((n, n))
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        gp = fd_gradient(f, x + h * e, h)
        gm = fd_gradient(f, x - h * e, h)
        out[:, j] = (gp - gm) / (2 * h)
    return 0.5 * (out + out.T)
