import numpy as np
import pytest

from oracles import (central_difference, eisenstein_direct, wp_lattice_sum, wp_prime_strip_sum,
                     wp_strip_sum)
from spincm.errors import ConfigurationError, PoleProximityError
from spincm.weierstrass import Lattice, sigma, wp, wp_row_sum, zeta

LATTICES = [(0.5, 0.65j), (0.5, 0.5j), (1.0, 0.3 + 0.8j), (0.7, 2.0j)]


def _points(L, n=10, seed=0):
    rng = np.random.default_rng(seed)
    s, t = rng.uniform(0.05, 0.95, n), rng.uniform(0.05, 0.95, n)
    return 2 * L.omega1 * s + 2 * L.omega2 * t


@pytest.mark.parametrize("w", LATTICES)
def test_series_matches_strip_oracle(w):
    L = Lattice(*w)
    z = _points(L)
    ref = wp_strip_sum(*w, z)
    assert np.max(np.abs(wp(L, z) - ref)) / np.max(np.abs(ref)) < 1e-7
    dref = wp_prime_strip_sum(*w, z)
    assert np.max(np.abs(wp(L, z, 1) - dref)) / np.max(np.abs(dref)) < 1e-7


def test_series_matches_brute_lattice_sum_roughly():
    L = Lattice(0.5, 0.5j)
    z = _points(L, 3)
    ref = wp_lattice_sum(0.5, 0.5j, z, radius=200)
    # square truncation of a conditionally convergent sum: only a few digits
    assert np.max(np.abs(wp(L, z) - ref)) / np.max(np.abs(ref)) < 1e-3


def test_invariants_match_direct_eisenstein_sums():
    g2, g3 = eisenstein_direct(0.5, 0.65j, radius=200)
    L = Lattice(0.5, 0.65j)
    assert abs(L.g2 - g2) / abs(L.g2) < 1e-5
    assert abs(L.g3 - g3) / max(abs(L.g3), 1.0) < 1e-4


@pytest.mark.parametrize("w", LATTICES)
def test_legendre_and_differential_equation(w):
    L = Lattice(*w)
    assert L.legendre_residual() < 1e-8
    z = _points(L)
    P, D = wp(L, z), wp(L, z, 1)
    res = np.abs(D ** 2 - (4 * P ** 3 - L.g2 * P - L.g3)) / np.maximum(np.abs(D) ** 2, 1.0)
    assert res.max() < 1e-8


def test_periodicity_and_quasi_periodicity():
    L = Lattice(0.5, 0.65j)
    z = _points(L, 5)
    for w, eta in ((L.omega1, L.eta1), (L.omega2, L.eta2)):
        assert np.allclose(wp(L, z + 2 * w), wp(L, z), rtol=1e-9)
        assert np.allclose(zeta(L, z + 2 * w), zeta(L, z) + 2 * eta, rtol=1e-9)
        ratio = sigma(L, z + 2 * w) / sigma(L, z)
        assert np.allclose(ratio, -np.exp(2 * eta * (z + w)), rtol=1e-8)


def test_derivative_chain():
    L = Lattice(0.5, 0.65j)
    z0 = 0.31 + 0.22j
    dz = central_difference(lambda z: complex(zeta(L, z)), z0)
    assert abs(dz + complex(wp(L, z0))) < 1e-7
    dp = central_difference(lambda z: complex(wp(L, z)), z0)
    assert abs(dp - complex(wp(L, z0, 1))) < 1e-6


def test_row_sum_agrees_with_series():
    L = Lattice(1.0, 0.3 + 0.8j)
    z = _points(L)
    assert np.allclose(wp_row_sum(L, z), wp(L, z), rtol=1e-10)


def test_errors():
    with pytest.raises(ConfigurationError):
        Lattice(0.5, -0.65j)
    L = Lattice(0.5, 0.65j)
    with pytest.raises(PoleProximityError):
        wp(L, 1.0 + 1.3j)
