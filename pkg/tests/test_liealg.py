import numpy as np
import pytest

from spincm.errors import CapabilityError
from spincm.harness import realization_residuals
from spincm.liealg import realize
from spincm.rootdata import build_root_system, height, negate

ALGEBRAS = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 2), ("C", 3), ("D", 4)]


@pytest.fixture(scope="module", params=ALGEBRAS, ids=lambda a: f"{a[0]}{a[1]}")
def R(request):
    return realize(build_root_system(*request.param))


def test_dimension(R):
    assert R.dim == R.rank + 2 * R.n_positive


def test_defining_residuals(R):
    r = realization_residuals(R, np.random.default_rng(1))
    for key in ("killing_duality", "trace_vs_ad", "coroot", "grading", "invariance"):
        assert r[key] < 1e-9, key
    assert r["jacobi"] < 1e-12
    assert r["ad_eps_rank_deficit"] == 0


def test_dual_pairing(R):
    for a in R.root_system.positive_roots:
        ea, ema = R.root_vector(a).coords, R.root_vector(negate(a)).coords
        assert abs(R.killing(ea, ema) - 1) < 1e-12
        assert abs(R.killing(ea, ea)) < 1e-12


def test_torus_scaling_is_an_automorphism(R):
    rng = np.random.default_rng(2)
    h = rng.normal(size=R.rank) * 0.3
    s = R.torus_scaling(h)
    x, y = rng.normal(size=R.dim), rng.normal(size=R.dim)
    lhs = R.bracket_coords(s * x, s * y)
    assert np.allclose(lhs, s * R.bracket_coords(x, y), atol=1e-10)


def test_grading_eigenvalues(R):
    x0 = np.zeros(R.dim, dtype=complex)
    x0[:R.rank] = R.grading_element
    for a in R.roots:
        e = R.root_vector(a).coords
        assert np.allclose(R.bracket_coords(x0, e), height(a) * e, atol=1e-12)


def test_exceptional_types_are_combinatorics_only():
    with pytest.raises(CapabilityError):
        realize(build_root_system("G", 2))
