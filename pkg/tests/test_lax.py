import numpy as np
import pytest

from spincm.errors import PoleProximityError, SamplingError
from spincm.harness import quasi_periodicity_residual, trig_odd_residual
from spincm.invariants import primitive_invariants
from spincm.lax import (LaxFamily, PhasePoint, extract_integrals, hamiltonian_consistency,
                        invariant_curve, lax_coords, lax_matrix, r_contraction, reconstruct,
                        sample_phase_point)
from spincm.liealg import realize
from spincm.rootdata import build_root_system
from spincm.weierstrass import Lattice

LATTICE = Lattice(0.5, 0.65j)


def _R(name):
    return realize(build_root_system(name[0], int(name[1:])))


def _families(R):
    return [LaxFamily.rational(R), LaxFamily.rational_span(R, [0]), LaxFamily.trigonometric(R),
            LaxFamily.trigonometric(R, [0]), LaxFamily.elliptic(R, LATTICE)]


@pytest.fixture(scope="module", params=["A1", "A2", "B2"])
def R(request):
    return _R(request.param)


def test_lax_is_momentum_plus_r_contraction(R):
    rng = np.random.default_rng(0)
    for fam in _families(R):
        pt = sample_phase_point(fam, R, rng, on_shell=False)
        z = 0.23 + 0.11j
        expected = R.cartan_element(pt.p).coords + r_contraction(fam, pt.q, pt.xi, z).coords
        assert np.allclose(lax_matrix(fam, pt, z).coords, expected, atol=1e-12), fam.kind


def test_top_integral_is_invariant_of_xi(R):
    rng = np.random.default_rng(1)
    invs = primitive_invariants(R)
    for fam in _families(R):
        pt = sample_phase_point(fam, R, rng, on_shell=True)
        tb = extract_integrals(fam, pt, invs)
        for k, inv in enumerate(invs, start=1):
            top = tb.row(k)[-1]
            assert abs(top - inv(pt.xi)) <= 1e-8 * max(1.0, abs(inv(pt.xi))), fam.kind


def test_rational_I_k1_vanishes_on_shell(R):
    rng = np.random.default_rng(2)
    for fam in (LaxFamily.rational(R), LaxFamily.rational_span(R, [0])):
        pt = sample_phase_point(fam, R, rng, on_shell=True)
        tb = extract_integrals(fam, pt)
        assert max(abs(tb[(k, 1)]) for k in range(1, R.rank + 1)) < 1e-9


def test_trigonometric_odd_relation(R):
    rng = np.random.default_rng(3)
    for fam in (LaxFamily.trigonometric(R), LaxFamily.trigonometric(R, [0])):
        pt = sample_phase_point(fam, R, rng, on_shell=True)
        tb = extract_integrals(fam, pt)
        for k in range(1, R.rank + 1):
            assert trig_odd_residual(tb.row(k)) < 1e-8


def test_reconstruction_at_held_out_points(R):
    rng = np.random.default_rng(4)
    invs = primitive_invariants(R)
    for fam in _families(R):
        pt = sample_phase_point(fam, R, rng, on_shell=True)
        tb = extract_integrals(fam, pt, invs)
        if fam.kind == "elliptic":
            z = 2 * LATTICE.omega1 * rng.uniform(0.2, 0.8, 4) + 2 * LATTICE.omega2 * rng.uniform(0.2, 0.8, 4)
        else:
            z = rng.uniform(0.4, 1.2, 4) * np.exp(2j * np.pi * rng.uniform(size=4))
        for k, inv in enumerate(invs, start=1):
            ref = invariant_curve(fam, pt, inv, z)
            assert np.max(np.abs(reconstruct(fam, tb, k, z) - ref)) < 1e-7 * np.max(np.abs(ref))


def test_elliptic_quasi_periodicity(R):
    fam = LaxFamily.elliptic(R, LATTICE)
    rng = np.random.default_rng(5)
    pt = sample_phase_point(fam, R, rng, on_shell=True)
    assert quasi_periodicity_residual(fam, pt, rng) < 1e-7
    # off J^-1(0) the zeta(z) Cartan term adds 2 eta_i xi_h under a period shift
    off = sample_phase_point(fam, R, rng, on_shell=False)
    z = 0.31 + 0.17j
    shifted = lax_coords(fam, off, z + 2 * LATTICE.omega1)
    expected = lax_coords(fam, off, z) * R.torus_scaling(2 * LATTICE.eta1 * off.q)
    expected[:R.rank] += 2 * LATTICE.eta1 * off.xi[:R.rank]
    assert np.allclose(shifted, expected, rtol=1e-8, atol=1e-8)


def test_integrals_are_torus_invariant(R):
    rng = np.random.default_rng(6)
    for fam in _families(R):
        pt = sample_phase_point(fam, R, rng, on_shell=True)
        moved = pt.replace(xi=pt.xi * R.torus_scaling(0.4 * rng.normal(size=R.rank)))
        a, b = extract_integrals(fam, pt).flat(), extract_integrals(fam, moved).flat()
        assert np.max(np.abs(a - b)) < 1e-8 * np.max(np.abs(a))


def test_hamiltonian_matches_constant_term_of_killing_square(R):
    rng = np.random.default_rng(7)
    for fam in _families(R):
        pt = sample_phase_point(fam, R, rng, on_shell=True)
        hc = hamiltonian_consistency(fam, pt)
        assert hc.integrals_vs_contour < 1e-8
        assert hc.kappa_form_vs_contour < 1e-8
        proper_trig = fam.kind == "trigonometric" and len(fam.simple_subset) < R.rank
        if not proper_trig:
            assert hc.explicit_vs_contour < 1e-8


def test_poles_and_singular_set_raise():
    R = _R("A2")
    fam = LaxFamily.rational(R)
    pt = sample_phase_point(fam, R, np.random.default_rng(8))
    with pytest.raises(PoleProximityError):
        lax_coords(fam, pt, 0.0)
    a = R.root_values[0]
    q = pt.q - (a @ pt.q) / (a @ a) * a                             # alpha(q) = 0
    singular = PhasePoint(q, pt.p, pt.xi)
    with pytest.raises(PoleProximityError):
        lax_coords(fam, singular, 0.5)


def test_sampling_needs_rng_and_budget():
    R = _R("A1")
    fam = LaxFamily.rational(R)
    with pytest.raises(ValueError):
        sample_phase_point(fam, R, None)
    with pytest.raises(SamplingError):
        sample_phase_point(fam, R, np.random.default_rng(0), min_denominator=10.0)


def test_sampling_is_deterministic():
    R = _R("B2")
    fam = LaxFamily.trigonometric(R)
    a = sample_phase_point(fam, R, np.random.default_rng(11)).as_vector()
    b = sample_phase_point(fam, R, np.random.default_rng(11)).as_vector()
    assert np.array_equal(a, b)
