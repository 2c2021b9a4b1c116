import numpy as np
import pytest

from spincm.lax import LaxFamily, PhasePoint, sample_phase_point
from spincm.liealg import realize
from spincm.poisson import (ObservableFunction, commutation_report, flow, hamiltonian_observable,
                            poisson_bracket, poisson_tensor)
from spincm.rootdata import build_root_system
from spincm.weierstrass import Lattice


def _R(name):
    return realize(build_root_system(name[0], int(name[1:])))


def _cx(rng, n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


@pytest.fixture(scope="module")
def A2():
    return _R("A2")


def test_canonical_pairs(A2):
    N, n = A2.rank, 2 * A2.rank + A2.dim
    x = _cx(np.random.default_rng(0), n)
    for i in range(N):
        for j in range(N):
            qi = ObservableFunction.coordinate(N, A2.dim, i)
            pj = ObservableFunction.coordinate(N, A2.dim, N + j)
            assert poisson_bracket(A2, qi, pj, x) == pytest.approx(float(i == j))
            assert poisson_bracket(A2, qi, qi, x) == 0


def test_linear_spin_observables(A2):
    rng = np.random.default_rng(1)
    a, b = _cx(rng, A2.dim), _cx(rng, A2.dim)
    x = _cx(rng, 2 * A2.rank + A2.dim)
    xi = x[2 * A2.rank:]
    fa, fb = ObservableFunction.linear_spin(A2, a), ObservableFunction.linear_spin(A2, b)
    expected = -A2.killing(xi, A2.bracket_coords(a, b))
    assert abs(poisson_bracket(A2, fa, fb, x) - expected) < 1e-10 * abs(expected)


def test_spin_equation_of_motion(A2):
    """For H = (xi, a) the vector field gives dxi/dt = [xi, a] and leaves q, p fixed."""
    rng = np.random.default_rng(2)
    a = _cx(rng, A2.dim)
    x = _cx(rng, 2 * A2.rank + A2.dim)
    H = ObservableFunction.linear_spin(A2, a)
    v = poisson_tensor(A2, x) @ H.jacobian(x)[0]
    N = A2.rank
    assert np.allclose(v[:2 * N], 0)
    assert np.allclose(v[2 * N:], A2.bracket_coords(x[2 * N:], a), atol=1e-10)


def test_jacobi_identity_on_polynomial_observables():
    R = _R("B2")
    N, n = R.rank, 2 * R.rank + R.dim
    rng = np.random.default_rng(3)
    coeffs = [(_cx(rng, n), _cx(rng, R.dim)) for _ in range(3)]

    def quad(c, a):
        return ObservableFunction(lambda x: (c @ x) * R.killing(x[2 * N:], a) + x[0] * x[N], N)

    f, g, h = (quad(c, a) for c, a in coeffs)

    def br(u, w):
        return ObservableFunction(lambda x: poisson_bracket(R, u, w, x), N)

    x = _cx(rng, n) * 0.5
    terms = [poisson_bracket(R, f, br(g, h), x), poisson_bracket(R, g, br(h, f), x),
             poisson_bracket(R, h, br(f, g), x)]
    assert abs(sum(terms)) < 1e-6 * max(abs(t) for t in terms)


def test_free_motion_when_spin_vanishes():
    R = _R("A1")
    fam = LaxFamily.rational(R)
    start = PhasePoint(np.array([0.7 + 0.1j]), np.array([0.3 - 0.2j]), np.zeros(R.dim))
    fr = flow(fam, start, T=1.0, tol=1e-11)
    assert fr.completed
    qT, pT = fr.states[-1, 0], fr.states[-1, 1]
    assert abs(qT - (start.q[0] + start.p[0])) < 1e-9
    assert abs(pT - start.p[0]) < 1e-12


def test_time_derivative_equals_bracket_with_H():
    R = _R("A2")
    fam = LaxFamily.rational(R)
    rng = np.random.default_rng(4)
    start = sample_phase_point(fam, R, rng, on_shell=True)
    H = hamiltonian_observable(fam)
    F = ObservableFunction.linear_spin(R, _cx(rng, R.dim))
    # Richardson-extrapolated central differences of F along the trajectory
    dt = 1e-3
    fr = flow(fam, start, T=4 * dt, tol=1e-13, n_checks=5)
    vals = [complex(np.asarray(F(x)).ravel()[0]) for x in fr.states]
    d1 = (vals[3] - vals[1]) / (2 * dt)
    d2 = (vals[4] - vals[0]) / (4 * dt)
    dF = (4 * d1 - d2) / 3
    expected = poisson_bracket(R, F, H, fr.states[2])
    assert abs(dF - expected) < 1e-6 * max(1.0, abs(expected))


@pytest.mark.parametrize("kind", ["rational", "trigonometric", "elliptic"])
def test_on_shell_commutation_and_convergence(kind):
    R = _R("A2")
    fam = {"rational": LaxFamily.rational(R), "trigonometric": LaxFamily.trigonometric(R),
           "elliptic": LaxFamily.elliptic(R, Lattice(0.5, 0.65j))}[kind]
    cr = commutation_report(fam, R, n_samples=2, rng=np.random.default_rng(5))
    assert cr.residual < 1e-7
    assert cr.convergence_ok
    assert cr.off_shell_witness > 10 * cr.residual


def test_flow_conserves_integrals_A1_elliptic():
    R = _R("A1")
    fam = LaxFamily.elliptic(R, Lattice(0.5, 0.65j))
    start = sample_phase_point(fam, R, np.random.default_rng(6), on_shell=True)
    fr = flow(fam, start, T=1.0, tol=1e-10)
    assert fr.completed
    assert fr.integral_drift < 1e-6 and fr.momentum_drift < 1e-6 and fr.hamiltonian_drift < 1e-6


def test_flow_rejects_bad_tolerance():
    R = _R("A1")
    fam = LaxFamily.rational(R)
    start = sample_phase_point(fam, R, np.random.default_rng(7))
    with pytest.raises(ValueError):
        flow(fam, start, tol=0)
