"""Weierstrass p, its derivatives, zeta and sigma for a period lattice.

Lattice convention: periods ``2*omega1, 2*omega2`` with ``Im(omega2/omega1) > 0``.

Evaluation reduces ``z`` to the nearest lattice translate, halves it until it
sits well inside the disc of convergence of the Laurent series at 0, sums the
series (coefficients from the usual recursion in g2, g3) and undoes the
halving with duplication formulas.  Internally everything runs on the lattice
rescaled so that its shortest period has length 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .errors import ConfigurationError, PoleProximityError

POLE_TOL = 1e-8
_N_COEFFS = 60
_SERIES_RADIUS = 0.65  # in units of the shortest period


def _divisor_power_sums(n: int, power: int) -> np.ndarray:
    out = np.zeros(n + 1)
    for d in range(1, n + 1):
        out[d::d] += float(d) ** power
    return out


def _eisenstein(tau: complex, terms: int = 40) -> tuple[complex, complex]:
    """E4(tau), E6(tau) from their q-expansions, q = exp(2 pi i tau)."""
    q = np.exp(2j * np.pi * tau)
    qn = q ** np.arange(terms + 1)
    s3 = _divisor_power_sums(terms, 3)
    s5 = _divisor_power_sums(terms, 5)
    e4 = 1 + 240 * np.sum(s3[1:] * qn[1:])
    e6 = 1 - 504 * np.sum(s5[1:] * qn[1:])
    return complex(e4), complex(e6)


def _reduce_basis(a: complex, b: complex) -> tuple[complex, complex]:
    """Lagrange-Gauss reduction of the period pair, keeping orientation."""
    if abs(a) > abs(b):
        a, b = b, a
    while True:
        k = round((b / a).real)
        b = b - k * a
        if abs(b) < abs(a):
            a, b = b, a
        else:
            break
    if (b / a).imag < 0:
        b = -b
    return a, b


def laurent_coefficients(g2: complex, g3: complex, n: int = _N_COEFFS) -> np.ndarray:
    """c_k (k = 0..n) with p(z) = z^-2 + sum_{k>=2} c_k z^(2k-2)."""
    c = np.zeros(n + 1, dtype=complex)
    if n >= 2:
        c[2] = g2 / 20
    if n >= 3:
        c[3] = g3 / 28
    for k in range(4, n + 1):
        c[k] = 3.0 / ((2 * k + 1) * (k - 3)) * np.sum(c[2:k - 1] * c[k - 2:1:-1])
    return c


def _derivative_from_p(P, D, g2, order: int):
    if order == 0:
        return P
    if order == 1:
        return D
    if order == 2:
        return 6 * P ** 2 - g2 / 2
    # (a, b, g) -> coefficient of p^a p'^b g2^g, starting from p'' = 6p^2 - g2/2
    terms = {(2, 0, 0): 6.0, (0, 0, 1): -0.5}
    for _ in range(order - 2):
        nxt: dict[tuple[int, int, int], float] = {}
        for (a, b, g), c in terms.items():
            if a:
                key = (a - 1, b + 1, g)
                nxt[key] = nxt.get(key, 0.0) + a * c
            if b:
                key = (a + 2, b - 1, g)
                nxt[key] = nxt.get(key, 0.0) + 6 * b * c
                key = (a, b - 1, g + 1)
                nxt[key] = nxt.get(key, 0.0) - 0.5 * b * c
        terms = nxt
    return sum(c * P ** a * D ** b * g2 ** g for (a, b, g), c in terms.items())


@dataclass(frozen=True)
class Lattice:
    """Period lattice 2*omega1*Z + 2*omega2*Z with its invariants."""

    omega1: complex
    omega2: complex
    _scale: float = field(init=False, repr=False)
    _u: complex = field(init=False, repr=False)      # reduced basis, normalized units
    _v: complex = field(init=False, repr=False)
    _g2n: complex = field(init=False, repr=False)
    _g3n: complex = field(init=False, repr=False)
    _coeffs: np.ndarray = field(init=False, repr=False)
    _eta_u: complex = field(init=False, repr=False)  # zeta(u/2), zeta(v/2) normalized
    _eta_v: complex = field(init=False, repr=False)

    def __post_init__(self):
        w1, w2 = complex(self.omega1), complex(self.omega2)
        object.__setattr__(self, "omega1", w1)
        object.__setattr__(self, "omega2", w2)
        if w1 == 0 or (w2 / w1).imag <= 0:
            raise ConfigurationError("half periods need Im(omega2/omega1) > 0")
        a, b = _reduce_basis(2 * w1, 2 * w2)
        s = abs(a)
        u, v = a / s, b / s
        e4, e6 = _eisenstein(v / u)
        g2n = 4.0 / 3.0 * (np.pi / u) ** 4 * e4
        g3n = 8.0 / 27.0 * (np.pi / u) ** 6 * e6
        set_ = object.__setattr__
        set_(self, "_scale", s)
        set_(self, "_u", u)
        set_(self, "_v", v)
        set_(self, "_g2n", g2n)
        set_(self, "_g3n", g3n)
        set_(self, "_coeffs", laurent_coefficients(g2n, g3n))
        set_(self, "_eta_u", 0j)
        set_(self, "_eta_v", 0j)
        # quasi-periods of the reduced basis: zeta at its half periods, which
        # needs no translation (only halving), so no eta is used yet
        eu = self._near_origin(np.array([u / 2, v / 2]))[2]
        set_(self, "_eta_u", complex(eu[0]))
        set_(self, "_eta_v", complex(eu[1]))
        if abs(self.discriminant) < 1e-300:
            raise ConfigurationError("degenerate lattice: vanishing discriminant")

    # -- invariants -----------------------------------------------------------

    @property
    def g2(self) -> complex:
        return complex(self._g2n / self._scale ** 4)

    @property
    def g3(self) -> complex:
        return complex(self._g3n / self._scale ** 6)

    @property
    def discriminant(self) -> complex:
        return self.g2 ** 3 - 27 * self.g3 ** 2

    @property
    def eta1(self) -> complex:
        return complex(zeta(self, self.omega1))

    @property
    def eta2(self) -> complex:
        return complex(zeta(self, self.omega2))

    def legendre_residual(self) -> float:
        return abs(self.eta1 * self.omega2 - self.eta2 * self.omega1 - 0.5j * np.pi)

    # -- evaluation core (normalized units) -----------------------------------

    def _reduce(self, z: np.ndarray):
        """z = z0 + m u + n v with z0 the translate nearest the origin."""
        u, v = self._u, self._v
        M = np.array([[u.real, v.real], [u.imag, v.imag]])
        st = np.linalg.solve(M, np.array([z.real.ravel(), z.imag.ravel()]))
        m0, n0 = np.floor(st[0]), np.floor(st[1])
        best = None
        for dm in (0, 1, -1, 2):
            for dn in (0, 1, -1, 2):
                m, n = m0 + dm, n0 + dn
                cand = z.ravel() - m * u - n * v
                if best is None:
                    best = (cand, m, n)
                else:
                    better = np.abs(cand) < np.abs(best[0])
                    best = (np.where(better, cand, best[0]),
                            np.where(better, m, best[1]),
                            np.where(better, n, best[2]))
        z0, m, n = best
        return z0.reshape(z.shape), m.reshape(z.shape), n.reshape(z.shape)

    def _series(self, z: np.ndarray):
        c = self._coeffs
        k = np.arange(2, len(c))
        zz = z[..., None]
        P = z ** -2 + np.sum(c[2:] * zz ** (2 * k - 2), axis=-1)
        D = -2 * z ** -3 + np.sum((2 * k - 2) * c[2:] * zz ** (2 * k - 3), axis=-1)
        Z = 1 / z - np.sum(c[2:] * zz ** (2 * k - 1) / (2 * k - 1), axis=-1)
        S = z * np.exp(-np.sum(c[2:] * zz ** (2 * k) / ((2 * k - 1) * (2 * k)), axis=-1))
        return P, D, Z, S

    def _near_origin(self, z: np.ndarray):
        """(p, p', zeta, sigma) at normalized z, by halving and duplication."""
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        halvings = np.where(r > _SERIES_RADIUS,
                            np.ceil(np.log2(np.maximum(r, 1e-300) / _SERIES_RADIUS)), 0).astype(int)
        P, D, Z, S = self._series(z / 2.0 ** halvings)
        g2 = self._g2n
        for level in range(int(halvings.max(initial=0)), 0, -1):
            act = halvings >= level
            if not np.any(act):
                continue
            P2 = 6 * P ** 2 - g2 / 2
            P3 = 12 * P * D
            s = P2 / (2 * D)
            newP = -2 * P + s ** 2
            newD = -D + s * (P3 * D - P2 ** 2) / (2 * D ** 2)
            newZ = 2 * Z + s
            newS = -D * S ** 4
            P = np.where(act, newP, P)
            D = np.where(act, newD, D)
            Z = np.where(act, newZ, Z)
            S = np.where(act, newS, S)
        return P, D, Z, S

    def _evaluate(self, z, need_pole_check: bool = True):
        z = np.asarray(z, dtype=complex)
        zn = z / self._scale
        z0, m, n = self._reduce(zn)
        if need_pole_check and np.any(np.abs(z0) * self._scale < POLE_TOL):
            raise PoleProximityError("argument within 1e-8 of a lattice point")
        with np.errstate(divide="ignore", invalid="ignore"):
            P, D, Z, S = self._near_origin(z0)
        return zn, z0, m, n, P, D, Z, S


def wp(lattice: Lattice, z, order: int = 0):
    """The order-th derivative of Weierstrass p at z."""
    if order < 0:
        raise ValueError("derivative order must be >= 0")
    _, _, _, _, P, D, _, _ = lattice._evaluate(z)
    s = lattice._scale
    val = _derivative_from_p(P, D, lattice._g2n, order)
    return val / s ** (order + 2)


def zeta(lattice: Lattice, z):
    zn, z0, m, n, _, _, Z, _ = lattice._evaluate(z)
    # zeta(z0 + m u + n v) = zeta(z0) + 2 m eta_u + 2 n eta_v
    return (Z + 2 * m * lattice._eta_u + 2 * n * lattice._eta_v) / lattice._scale


def sigma(lattice: Lattice, z):
    """Weierstrass sigma (entire; zero exactly on the lattice)."""
    z = np.asarray(z, dtype=complex)
    zn, z0, m, n, _, _, _, S = lattice._evaluate(z, need_pole_check=False)
    lam = m * lattice._u + n * lattice._v
    eta_lam = 2 * m * lattice._eta_u + 2 * n * lattice._eta_v
    mi, ni = m.astype(np.int64), n.astype(np.int64)
    sign = np.where((mi + ni + mi * ni) % 2 == 0, 1.0, -1.0)
    # sigma(z0 + lam) = sign * exp(eta_lam (z0 + lam/2)) sigma(z0)
    return sign * np.exp(eta_lam * (z0 + lam / 2)) * S * lattice._scale


def principal_part_coefficient(j: int) -> int:
    """Leading coefficient of p^(j-2) at 0: p^(j-2)(z) = (-1)^j (j-1)!/z^j + O(1)."""
    if j < 2:
        raise ValueError("principal part coefficient needs j >= 2")
    return (-1) ** j * factorial(j - 1)


def distance_to_lattice(lattice: Lattice, z) -> np.ndarray:
    z0 = lattice._reduce(np.asarray(z, dtype=complex) / lattice._scale)[0]
    return np.abs(z0) * lattice._scale


def wp_constant_term(lattice: Lattice, order: int) -> complex:
    """Constant term of the Laurent expansion of p^(order) at 0."""
    if order % 2:
        return 0.0
    n = order // 2 + 1
    if n < 2:
        return 0.0
    c = laurent_coefficients(lattice.g2, lattice.g3, n)
    return factorial(order) * c[n]


def _csc2(u):
    """csc(u)^2 without overflow far from the real axis."""
    w = np.exp(2j * np.where(u.imag > 0, u, -u))
    return -4 * w / (1 - w) ** 2


def wp_row_sum(lattice: Lattice, z, n_rows: int = 40) -> np.ndarray:
    """p(z) by summing the lattice row by row in closed form.

    Independent of the Laurent-series path: each row {w + 2 n omega2} of the
    reduced basis contributes (pi/2w1)^2 csc^2(pi (z - 2 n omega2) / (2 w1)),
    so the row sum converges geometrically in the row index.
    """
    u, v = lattice._u * lattice._scale, lattice._v * lattice._scale
    k = np.pi / u
    n = np.arange(-n_rows, n_rows + 1)
    nz = n[n != 0]
    z = np.asarray(z, dtype=complex)[..., None]
    rows = np.sum(_csc2(k * (z - n * v)), axis=-1)
    const = 1 / 3 + np.sum(_csc2(k * nz * v))
    return k ** 2 * (rows - const)
