import numpy as np
import pytest

from spincm.errors import DomainError
from spincm.independence import (a_matrix, build_D, is_regular, jacobian_rank, liouville_count,
                                 matrix_rank, ordered_indexing, remainder_degree_check,
                                 root_product, sample_regular_p, slice_dependence, slice_invariance,
                                 random_slice_point, verify_det_formula)
from spincm.lax import LaxFamily, sample_phase_point
from spincm.liealg import realize
from spincm.rootdata import build_root_system, height
from spincm.weierstrass import Lattice

ALGEBRAS = ["A1", "A2", "A3", "B2", "C2", "B3"]


def _R(name):
    return realize(build_root_system(name[0], int(name[1:])))


@pytest.fixture(scope="module", params=ALGEBRAS)
def R(request):
    return _R(request.param)


def _ps(R, n, seed=0):
    rng = np.random.default_rng(seed)
    return [sample_regular_p(R, rng) for _ in range(n)]


def test_ordered_indexing_counts(R):
    idx = ordered_indexing(R)
    assert len(idx.functions) == sum(R.exponents.degrees) == sum(R.exponents.exponents) + R.rank
    assert idx.block_sizes == (R.rank,) + tuple(R.exponents.b)
    o = idx.offsets
    for j in range(2, R.exponents.coxeter_number + 1):
        group = [kj for kj in idx.functions if kj[1] == j]
        assert len(group) == R.exponents.b[j - 2]
    for j, grp in enumerate(idx.roots_by_height, start=1):
        assert all(height(a) == j for a in grp)
    assert o[-1] == len(idx.variables)


def test_block_triangular_and_slice_properties(R):
    rng = np.random.default_rng(1)
    for p in _ps(R, 2):
        assert build_D(R, p).off_block_mass() < 1e-9
        assert slice_invariance(R, p, rng) < 1e-9
        sd = slice_dependence(R, p, random_slice_point(R, rng))
        assert sd.nonlinearity < 1e-8 and sd.dependence < 1e-8


def test_determinant_product_formula(R):
    rep = verify_det_formula(R, _ps(R, 5, seed=2), tol=1e-6)
    assert rep.ok
    assert max(rep.ratio_rel_std) < 1e-6 and rep.total_rel_std < 1e-6
    assert rep.min_abs_det > 1e-12


def test_A2_total_determinant():
    R = _R("A2")
    (a1, a2), a12 = R.root_system.simple_roots, None
    a12 = next(a for a in R.root_system.positive_roots if height(a) == 2)
    ratios = []
    for p in _ps(R, 4, seed=3):
        det = np.prod(build_D(R, p).determinants())
        ratios.append(det / (R.alpha(a1, p) * R.alpha(a2, p) * R.alpha(a12, p) ** 2))
    assert np.std(ratios) < 1e-8 * abs(np.mean(ratios))


def test_A1_D0_is_linear_in_alpha():
    R = _R("A1")
    a = R.root_system.simple_roots[0]
    ratios = [build_D(R, p).blocks[0][0, 0] / R.alpha(a, p) for p in _ps(R, 3, seed=4)]
    assert np.allclose(ratios, ratios[0], rtol=1e-10)


def test_top_block_is_constant():
    R = _R("B2")
    dets = [build_D(R, p).determinants()[-1] for p in _ps(R, 3, seed=5)]
    assert np.allclose(dets, dets[0], rtol=1e-10)


def test_determinant_vanishes_off_regular_set():
    R = _R("A2")
    p = _ps(R, 1, seed=6)[0]
    a = R.root_values[0]
    p_sing = p - (a @ p) / (a @ a) * a
    assert not is_regular(R, p_sing)
    with pytest.raises(DomainError):
        build_D(R, p_sing)
    reg = abs(np.prod(build_D(R, p).determinants()))
    sing = abs(np.prod(build_D(R, p_sing, regular_tol=0).determinants()))
    assert sing < 1e-8 * reg


def test_a_matrices_have_full_rank(R):
    ed = R.exponents
    for j in range(2, ed.coxeter_number):
        A = a_matrix(R, j)
        assert A.shape == (ed.b[j - 2], ed.b[j - 1])
        assert matrix_rank(A)[0] == ed.b[j - 1]


def test_A2_a_matrix_shape():
    assert a_matrix(_R("A2"), 2).shape == (2, 1)


@pytest.mark.parametrize("name,leaf,need", [("A1", 2, 1), ("A2", 6, 3), ("B2", 8, 4), ("A3", 12, 6)])
def test_liouville_count(name, leaf, need):
    lc = liouville_count(_R(name))
    assert (lc.leaf_dimension, lc.required) == (leaf, need)
    assert all(v["nontrivial"] == need for v in lc.per_family.values())
    assert lc.ok


@pytest.mark.parametrize("name,kind,expected", [("A2", "rational", 5), ("B2", "trigonometric", 6),
                                                ("A1", "elliptic", 2)])
def test_jacobian_rank(name, kind, expected):
    R = _R(name)
    fam = {"rational": LaxFamily.rational, "trigonometric": LaxFamily.trigonometric,
           "elliptic": lambda R: LaxFamily.elliptic(R, Lattice(0.5, 0.65j))}[kind](R)
    rng = np.random.default_rng(7)
    pt = sample_phase_point(fam, R, rng, on_shell=True, regular_p=True)
    rr = jacobian_rank(fam, R, pt)
    assert rr.rank == rr.expected == expected
    moved = pt.replace(xi=pt.xi * R.torus_scaling(0.3 * rng.normal(size=R.rank)))
    assert jacobian_rank(fam, R, moved).rank == expected


@pytest.mark.parametrize("kind", ["rational", "trigonometric", "elliptic"])
def test_remainder_degree_bound(kind):
    R = _R("A2")
    fam = {"rational": LaxFamily.rational(R), "trigonometric": LaxFamily.trigonometric(R),
           "elliptic": LaxFamily.elliptic(R, Lattice(0.5, 0.65j))}[kind]
    rd = remainder_degree_check(fam, R, np.random.default_rng(8))
    assert rd.ok and rd.max_violation < 1e-8


def test_root_product_matches_alpha_values():
    R = _R("A2")
    p = _ps(R, 1, seed=9)[0]
    roots = R.root_system.positive_roots
    assert np.isclose(root_product(R, p, roots), np.prod([R.alpha(a, p) for a in roots]))
