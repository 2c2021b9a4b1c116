"""Lax operators of the rational, trigonometric and elliptic spin Calogero-Moser
families, their Hamiltonians, and extraction of the integrals I_kj.

Phase-space coordinates: ``q, p`` are Cartan coordinates along the
Killing-orthonormal ``x_i``; ``xi`` holds all ``dim g`` coordinates of the spin
variable in the realization's basis order, so ``xi[root_index[a]]`` is the
coefficient of ``e_a`` and equals ``kappa(xi, e_-a)``.

Each family writes the Lax matrix as

    L(z) = p + c(z) * xi_h + sum_a coef_a(q, z) * xi_a * e_a

with ``c(z)`` equal to ``1/z``, ``cot z`` or ``zeta(z)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _poly
from .errors import (ConditioningError, ConfigurationError, PoleProximityError,
                     SamplingError)
from .invariants import PrimitiveInvariant, primitive_invariants
from .liealg import AlgebraElement, AlgebraRealization
from .rootdata import Root, root_span, validate_closed_subset
from .weierstrass import (Lattice, distance_to_lattice, principal_part_coefficient,
                          sigma, wp, zeta)

KINDS = ("rational", "trigonometric", "elliptic")
POLE_TOL = 1e-8
ELLIPTIC_RADIUS = 0.31     # node circle radius in units of the shortest period
MAX_CONDITION = 1e10
SAMPLE_BUDGET = 1000


# ---------------------------------------------------------------------------
# phase points


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """A point (q, p, xi) of TU x g in coordinates."""

    q: np.ndarray
    p: np.ndarray
    xi: np.ndarray

    def __post_init__(self):
        for name in ("q", "p", "xi"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=complex))
        if self.q.shape != self.p.shape or self.q.ndim != 1:
            raise ValueError("q and p must be Cartan coordinate vectors of equal length")

    @property
    def rank(self) -> int:
        return self.q.shape[0]

    def is_on_shell(self, tol: float = 1e-12) -> bool:
        """True on J^-1(0), i.e. when the Cartan part of xi vanishes."""
        return bool(np.all(np.abs(self.xi[:self.rank]) < tol))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.q, self.p, self.xi])

    @classmethod
    def from_vector(cls, v, rank: int) -> "PhasePoint":
        v = np.asarray(v, dtype=complex)
        return cls(v[:rank], v[rank:2 * rank], v[2 * rank:])

    def replace(self, **kw) -> "PhasePoint":
        d = {"q": self.q, "p": self.p, "xi": self.xi}
        d.update(kw)
        return PhasePoint(**d)


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True, eq=False)
class LaxFamily:
    """One of rational(Delta'), trigonometric(pi') or elliptic(Lattice)."""

    kind: str
    realization: AlgebraRealization = field(repr=False)
    roots: frozenset = frozenset()          # Delta' (rational) or <pi'> (trigonometric)
    simple_subset: tuple[int, ...] = ()     # pi' (trigonometric)
    lattice: Lattice | None = None
    label: str = ""
    _mask: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigurationError(f"family kind must be one of {KINDS}, got {self.kind!r}")
        R = self.realization
        if self.kind == "elliptic":
            if not isinstance(self.lattice, Lattice):
                raise ConfigurationError("elliptic family needs a Lattice")
            mask = np.ones(2 * R.n_positive, dtype=bool)
        else:
            mask = np.array([a in self.roots for a in R.roots])
        object.__setattr__(self, "_mask", mask)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def rational(cls, R: AlgebraRealization, closed_subset: Sequence[Root] | None = None,
                 label: str = "") -> "LaxFamily":
        """Rational family; ``closed_subset`` defaults to all of Delta."""
        rs = R.root_system
        sub = frozenset(rs.roots) if closed_subset is None else frozenset(map(tuple, closed_subset))
        if not validate_closed_subset(rs, sub):
            raise ConfigurationError("Delta' must be a subset of roots closed under addition and negation")
        return cls("rational", R, roots=sub, label=label or ("full" if len(sub) == len(rs.roots) else "subset"))

    @classmethod
    def rational_span(cls, R: AlgebraRealization, simple_subset: Sequence[int]) -> "LaxFamily":
        """Rational family with Delta' the root span of some simple roots."""
        try:
            sub = root_span(R.root_system, simple_subset)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
        return cls.rational(R, sub, label=f"span{sorted(simple_subset)}")

    @classmethod
    def trigonometric(cls, R: AlgebraRealization, simple_subset: Sequence[int] | None = None) -> "LaxFamily":
        """Trigonometric family for pi' (indices into the simple roots; default all)."""
        rs = R.root_system
        idx = tuple(range(rs.rank)) if simple_subset is None else tuple(sorted(set(simple_subset)))
        try:
            span = root_span(rs, idx)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
        return cls("trigonometric", R, roots=span, simple_subset=idx,
                   label="full" if len(idx) == rs.rank else f"pi'={list(idx)}")

    @classmethod
    def elliptic(cls, R: AlgebraRealization, lattice: Lattice) -> "LaxFamily":
        return cls("elliptic", R, lattice=lattice,
                   label=f"omega=({lattice.omega1:.4g}, {lattice.omega2:.4g})")

    # -- data -----------------------------------------------------------------

    @property
    def basis_tag(self) -> str:
        return {"rational": "powers of 1/z",
                "trigonometric": "powers of cot z",
                "elliptic": "1, zeta, p, p', ..., p^(d-2)"}[self.kind]

    @property
    def singular_set(self) -> str:
        return {"rational": "alpha(q) = 0 for alpha in Delta'",
                "trigonometric": "sin alpha(q) = 0 for alpha in <pi'>",
                "elliptic": "alpha(q) in the lattice"}[self.kind]

    @property
    def root_mask(self) -> np.ndarray:
        """Membership of each root (basis order) in Delta' / <pi'>."""
        return self._mask

    def denominators(self, q) -> np.ndarray:
        """Quantities whose vanishing puts q on the singular set."""
        R = self.realization
        aq = R.all_root_values(np.asarray(q))[:R.n_positive]
        mask = self._mask[:R.n_positive]
        if self.kind == "rational":
            return aq[mask]
        if self.kind == "trigonometric":
            return np.sin(aq[mask])
        return distance_to_lattice(self.lattice, aq)

    def check_regular(self, q, tol: float = POLE_TOL) -> None:
        den = self.denominators(q)
        if den.size and np.min(np.abs(den)) < tol:
            k = int(np.argmin(np.abs(den)))
            raise PoleProximityError(
                f"q is on the singular set ({self.singular_set}); denominator #{k} = {den[k]:.3g}")

    def check_z(self, z) -> None:
        z = np.asarray(z, dtype=complex)
        if self.kind == "rational":
            bad = np.abs(z) < POLE_TOL
        elif self.kind == "trigonometric":
            bad = np.abs(np.sin(z)) < POLE_TOL
        else:
            bad = distance_to_lattice(self.lattice, z) < POLE_TOL
        if np.any(bad):
            raise PoleProximityError("spectral parameter z sits on a pole of the Lax operator")

    def psi(self, q) -> np.ndarray:
        """psi_a(q) of the trigonometric family, one value per root."""
        R = self.realization
        aq = R.all_root_values(np.asarray(q))
        P = R.n_positive
        off = np.concatenate([np.full(P, -1j), np.full(P, 1j)])
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self._mask, np.cos(aq) / np.sin(aq), off)

    def cartan_coefficient(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if self.kind == "rational":
            return 1 / z
        if self.kind == "trigonometric":
            return np.cos(z) / np.sin(z)
        return zeta(self.lattice, z)

    def root_coefficients(self, q, z) -> np.ndarray:
        """coef_a(q, z) for every root; shape z.shape + (2|R+|,)."""
        R = self.realization
        z = np.asarray(z, dtype=complex)[..., None]
        aq = R.all_root_values(np.asarray(q))
        if self.kind == "rational":
            return np.where(self._mask, 1 / np.where(self._mask, aq, 1), 0) + 1 / z
        if self.kind == "trigonometric":
            return np.cos(z) / np.sin(z) + self.psi(q)
        return -ell_l(self.lattice, aq, z)


def ell_l(lattice: Lattice, w, z):
    """l(w, z) = -sigma(w + z) / (sigma(w) sigma(z))."""
    w, z = np.broadcast_arrays(np.asarray(w, dtype=complex), np.asarray(z, dtype=complex))
    return -sigma(lattice, w + z) / (sigma(lattice, w) * sigma(lattice, z))


# ---------------------------------------------------------------------------
# Lax matrix, r-matrix contraction, Hamiltonian


def _full(R: AlgebraRealization, cartan) -> np.ndarray:
    c = np.zeros(R.dim, dtype=complex)
    c[:R.rank] = cartan
    return c


def lax_coords(family: LaxFamily, point: PhasePoint, z) -> np.ndarray:
    """Coordinates of L(z); z may be an array (result shape z.shape + (dim,))."""
    R = family.realization
    family.check_regular(point.q)
    family.check_z(z)
    z = np.asarray(z, dtype=complex)
    N = R.rank
    out = np.empty(z.shape + (R.dim,), dtype=complex)
    out[..., :N] = point.p + family.cartan_coefficient(z)[..., None] * point.xi[:N]
    out[..., N:] = family.root_coefficients(point.q, z) * point.xi[N:]
    return out


def lax_matrix(family: LaxFamily, point: PhasePoint, z) -> AlgebraElement:
    """L(q, p, xi)(z) as an algebra element."""
    return family.realization.element(lax_coords(family, point, complex(z)))


def r_matrix(family: LaxFamily, q, z) -> np.ndarray:
    """Dense coefficients r_ab with r(q, z) = sum r_ab b_a (x) b_b."""
    R = family.realization
    family.check_regular(q)
    family.check_z(z)
    N, P = R.rank, R.n_positive
    aq = R.all_root_values(np.asarray(q))
    r = np.zeros((R.dim, R.dim), dtype=complex)
    z = complex(z)
    if family.kind == "rational":
        # Omega / z plus the dynamical part on Delta'
        for a, b in R.casimir_pairs:
            r[a, b] += 1 / z
        for k in np.flatnonzero(family.root_mask):
            r[N + k, R.dual_index[N + k]] += 1 / aq[k]
        return r
    if family.kind == "trigonometric":
        c = np.cos(z) / np.sin(z)
        for i in range(N):
            r[i, i] = c
        for k in range(2 * P):
            if family.root_mask[k]:
                phi = -np.sin(aq[k] + z) / (np.sin(aq[k]) * np.sin(z))
            elif k < P:
                phi = -np.exp(-1j * z) / np.sin(z)
            else:
                phi = -np.exp(1j * z) / np.sin(z)
            r[N + k, R.dual_index[N + k]] = -phi
        return r
    Z = zeta(family.lattice, z)
    for i in range(N):
        r[i, i] = Z
    lv = ell_l(family.lattice, aq, z)
    for k in range(2 * P):
        r[N + k, R.dual_index[N + k]] = -lv[k]
    return r


def r_contraction(family: LaxFamily, q, xi, z) -> AlgebraElement:
    """r^#(q) xi at z, defined by (r^# xi, eta) = (r(q, z), eta (x) xi)."""
    R = family.realization
    xi = xi.coords if isinstance(xi, AlgebraElement) else np.asarray(xi, dtype=complex)
    r = r_matrix(family, q, z)
    # (r, eta (x) xi) = sum r_ab kappa(b_a, eta) kappa(b_b, xi), so the
    # contraction is sum_ab r_ab kappa(b_b, xi) b_a
    kb = R.killing_gram @ xi
    return R.element(r @ kb)


HAMILTONIAN_FORMS = ("explicit", "kappa")


def _trig_offspan_weight(form: str) -> float:
    """Weight w of xi_a xi_-a (a > 0 off the span) in H = kinetic - sum w xi_a xi_-a.

    "explicit" uses the printed -5/6 per root of Delta; "kappa" uses the
    weight of the z^0 term of 1/2 kappa(L, L), which is +1/6 per root.
    """
    if form not in HAMILTONIAN_FORMS:
        raise ValueError(f"form must be one of {HAMILTONIAN_FORMS}")
    return 5 / 3 if form == "explicit" else -1 / 3


def hamiltonian(family: LaxFamily, point: PhasePoint, form: str = "explicit") -> complex:
    """The spin Calogero-Moser Hamiltonian of the family in explicit form.

    ``form="kappa"`` changes only the trigonometric weights of roots outside
    <pi'> to those of the z^0 term of 1/2 kappa(L(z), L(z)).  For every other
    family, and for pi' = pi, the two forms coincide.
    """
    R = family.realization
    family.check_regular(point.q)
    N, P = R.rank, R.n_positive
    aq = R.all_root_values(point.q)[:P]
    pairs = point.xi[N:N + P] * point.xi[N + P:]      # xi_a xi_-a for a > 0
    kinetic = 0.5 * np.sum(point.p ** 2)
    mask = family.root_mask[:P]
    if family.kind == "rational":
        return complex(kinetic - np.sum(pairs[mask] / aq[mask] ** 2))
    if family.kind == "trigonometric":
        # the sums over Delta count each pair {a, -a} twice
        span = np.sum((1 / np.sin(aq[mask]) ** 2 - 1 / 3) * pairs[mask])
        off = _trig_offspan_weight(form) * np.sum(pairs[~mask])
        return complex(kinetic - span - off - np.sum(point.xi[:N] ** 2) / 3)
    return complex(kinetic - np.sum(wp(family.lattice, aq) * pairs))


def hamiltonian_gradient(family: LaxFamily, point: PhasePoint, form: str = "explicit") -> np.ndarray:
    """Analytic gradient of :func:`hamiltonian` in (q, p, xi) coordinates."""
    R = family.realization
    family.check_regular(point.q)
    N, P = R.rank, R.n_positive
    A = R.root_values[:P]                       # a(x_i), positive roots
    aq = A @ point.q
    xp, xm = point.xi[N:N + P], point.xi[N + P:]
    pairs = xp * xm
    mask = family.root_mask[:P]
    g_xi = np.zeros(R.dim, dtype=complex)
    if family.kind == "rational":
        w = np.where(mask, 1 / np.where(mask, aq, 1) ** 2, 0)
        dw = np.where(mask, -2 / np.where(mask, aq, 1) ** 3, 0)
    elif family.kind == "trigonometric":
        s2 = 1 / np.sin(aq) ** 2
        w = np.where(mask, s2 - 1 / 3, _trig_offspan_weight(form))
        dw = np.where(mask, -2 * s2 * np.cos(aq) / np.sin(aq), 0)
        g_xi[:N] = -2 / 3 * point.xi[:N]
    else:
        w = wp(family.lattice, aq)
        dw = wp(family.lattice, aq, 1)
    # H = kinetic - sum_{a>0} w_a(q) xi_a xi_-a
    g_q = -(dw * pairs) @ A
    g_xi[N:N + P] = -w * xm
    g_xi[N + P:] = -w * xp
    return np.concatenate([g_q, point.p, g_xi])


# quadratic-invariant combination giving the z^0 term of I_1(L(z)):
# 1/z and zeta carry no constant term; cot^2 z = 1/z^2 - 2/3 + O(z^2)
HAMILTONIAN_COMBINATION = {
    "rational": {0: 1.0},
    "trigonometric": {0: 1.0, 2: -2.0 / 3.0},
    "elliptic": {0: 1.0},
}


def kappa_constant_term(family: LaxFamily, point: PhasePoint, radius: float | None = None,
                        n: int = 64) -> complex:
    """Constant Laurent coefficient at z = 0 of 1/2 kappa(L(z), L(z)), as a contour mean."""
    R = family.realization
    if radius is None:
        radius = 0.3 if family.kind != "elliptic" else \
            0.3 * min(abs(2 * family.lattice.omega1), abs(2 * family.lattice.omega2))
    z = _poly.circle_nodes(n, radius=radius, phase=0.5)
    X = lax_coords(family, point, z)
    vals = 0.5 * np.einsum("na,ab,nb->n", X, R.killing_gram, X)
    return complex(np.mean(vals))


def lax_hamiltonian(family: LaxFamily, point: PhasePoint, table: "IntegralTable | None" = None) -> complex:
    """Hamiltonian read off the integrals: 1/2 kappa-scale times the z^0 term of I_1(L(z)).

    The generator I_1 is tr x^2, so 1/2 kappa(L, L) = 1/2 killing_scale I_1(L).
    """
    R = family.realization
    if table is None:
        table = extract_integrals(family, point)
    row = table.row(1)
    comb = HAMILTONIAN_COMBINATION[family.kind]
    return complex(0.5 * R.killing_scale * sum(w * row[j] for j, w in comb.items()))


@dataclass
class HamiltonianConsistency:
    explicit: complex          # hamiltonian()
    kappa_form: complex        # hamiltonian(form="kappa")
    from_integrals: complex    # lax_hamiltonian()
    contour: complex           # kappa_constant_term()
    combination: str

    @property
    def integrals_vs_contour(self) -> float:
        return abs(self.from_integrals - self.contour) / max(abs(self.contour), 1.0)

    @property
    def explicit_vs_contour(self) -> float:
        return abs(self.explicit - self.contour) / max(abs(self.contour), 1.0)

    @property
    def kappa_form_vs_contour(self) -> float:
        return abs(self.kappa_form - self.contour) / max(abs(self.contour), 1.0)

    def to_dict(self) -> dict:
        c = lambda v: [v.real, v.imag]
        return {"explicit": c(self.explicit), "kappa_form": c(self.kappa_form),
                "from_integrals": c(self.from_integrals), "contour": c(self.contour),
                "combination": self.combination,
                "integrals_vs_contour": self.integrals_vs_contour,
                "explicit_vs_contour": self.explicit_vs_contour,
                "kappa_form_vs_contour": self.kappa_form_vs_contour}


def hamiltonian_consistency(family: LaxFamily, point: PhasePoint) -> HamiltonianConsistency:
    comb = HAMILTONIAN_COMBINATION[family.kind]
    label = " + ".join(f"{w:+.6g}*I_1{j}" for j, w in comb.items())
    return HamiltonianConsistency(
        explicit=hamiltonian(family, point),
        kappa_form=hamiltonian(family, point, form="kappa"),
        from_integrals=lax_hamiltonian(family, point),
        contour=kappa_constant_term(family, point),
        combination=f"1/2 * killing_scale * ({label})",
    )


# ---------------------------------------------------------------------------
# integrals


@dataclass
class IntegralTable:
    """The integrals I_kj (k = 1..N, j = 0..d_k) at one phase point."""

    kind: str
    basis_tag: str
    degrees: tuple[int, ...]
    entries: list[np.ndarray]
    generators: list[str]
    condition: list[float] = field(default_factory=list)
    residual: list[float] = field(default_factory=list)

    def __getitem__(self, kj: tuple[int, int]) -> complex:
        k, j = kj
        return self.entries[k - 1][j]

    def row(self, k: int) -> np.ndarray:
        return self.entries[k - 1]

    def flat(self) -> np.ndarray:
        return np.concatenate(self.entries)

    @property
    def labels(self) -> list[tuple[int, int]]:
        return [(k + 1, j) for k, d in enumerate(self.degrees) for j in range(d + 1)]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "basis": self.basis_tag,
            "generators": self.generators,
            "degrees": list(self.degrees),
            "entries": {f"I_{k}{j}": [float(v.real), float(v.imag)]
                        for (k, j), v in zip(self.labels, self.flat())},
            "condition": self.condition,
            "residual": self.residual,
        }


def basis_values(family: LaxFamily, z, degree: int) -> np.ndarray:
    """Expansion basis b_j(z), j = 0..degree; shape z.shape + (degree + 1,)."""
    z = np.asarray(z, dtype=complex)
    j = np.arange(degree + 1)
    if family.kind == "rational":
        return (1 / z)[..., None] ** j
    if family.kind == "trigonometric":
        return (np.cos(z) / np.sin(z))[..., None] ** j
    # b_j = (-1)^j/(j-1)! p^(j-2), whose principal part at 0 is exactly z^-j;
    # for j = 1 the same rule with p^(-1) = -zeta gives zeta itself
    cols = [np.ones_like(z), zeta(family.lattice, z)]
    for jj in range(2, degree + 1):
        cols.append(wp(family.lattice, z, jj - 2) / principal_part_coefficient(jj))
    return np.stack(cols[:degree + 1], axis=-1)


def elliptic_nodes(lattice: Lattice, degree: int) -> np.ndarray:
    """2(d + 1) nodes on a circle well inside the period cell."""
    radius = ELLIPTIC_RADIUS * lattice._scale
    return _poly.circle_nodes(2 * (degree + 1), radius=radius, phase=0.25)


def invariant_curve(family: LaxFamily, point: PhasePoint, inv: PrimitiveInvariant, z) -> np.ndarray:
    """I_k(L(z)) at the given spectral parameters."""
    return inv.on_matrices(family.realization.to_matrix(lax_coords(family, point, z)))


def extract_integrals(family: LaxFamily, point: PhasePoint,
                      invariants: list[PrimitiveInvariant] | None = None) -> IntegralTable:
    """Expand I_k(L(z)) in the family's spectral basis.

    Rational and trigonometric: L is affine in w = 1/z (resp. u = cot z), so
    I_k(L) is a polynomial of degree d_k recovered exactly by interpolation at
    roots of unity.  Elliptic: least squares over nodes on a small circle in
    the basis 1, zeta, p, p', ... with weights (-1)^j/(j-1)!.  On J^-1(0)
    I_k(L) is elliptic, so the zeta coefficient I_k1 comes out 0 and the
    remaining ones are the exact expansion; off J^-1(0) the table is the
    least-squares projection, still a fixed linear functional of the values
    I_k(L(z_n)).
    """
    R = family.realization
    invs = invariants if invariants is not None else primitive_invariants(R)
    family.check_regular(point.q)
    N = R.rank
    entries, conds, resids = [], [], []
    if family.kind in ("rational", "trigonometric"):
        base = np.empty(R.dim, dtype=complex)
        base[:N] = point.p
        if family.kind == "rational":
            base[N:] = _rational_constant(family, point)
        else:
            base[N:] = family.psi(point.q) * point.xi[N:]
        for inv in invs:
            d = inv.degree
            nodes = _poly.circle_nodes(d + 1)
            mats = R.to_matrix(base[None] + nodes[:, None] * point.xi[None])
            entries.append(_poly.coefficients(nodes, inv.on_matrices(mats), d))
            conds.append(1.0)
            resids.append(0.0)
    else:
        for inv in invs:
            d = inv.degree
            nodes = elliptic_nodes(family.lattice, d)
            vals = invariant_curve(family, point, inv, nodes)
            B = basis_values(family, nodes, d)
            M = B
            norms = np.linalg.norm(M, axis=0)
            Ms = M / norms
            cond = float(np.linalg.cond(Ms))
            if cond > MAX_CONDITION:
                raise ConditioningError(
                    f"elliptic extraction for {inv.label}: condition number {cond:.3g} > 1e10; resample nodes")
            sol = np.linalg.lstsq(Ms, vals, rcond=None)[0] / norms
            entries.append(sol)
            conds.append(cond)
            resids.append(float(np.linalg.norm(M @ sol - vals) / max(np.linalg.norm(vals), 1e-300)))
    return IntegralTable(family.kind, family.basis_tag, tuple(inv.degree for inv in invs),
                         entries, [inv.label for inv in invs], conds, resids)


def _rational_constant(family: LaxFamily, point: PhasePoint) -> np.ndarray:
    R = family.realization
    aq = R.all_root_values(point.q)
    mask = family.root_mask
    return np.where(mask, point.xi[R.rank:] / np.where(mask, aq, 1), 0)


def reconstruct(family: LaxFamily, table: IntegralTable, k: int, z) -> np.ndarray:
    """sum_j I_kj b_j(z) for the k-th invariant."""
    row = table.row(k)
    return basis_values(family, z, len(row) - 1) @ row


# ---------------------------------------------------------------------------
# sampling


def _annulus(rng: np.random.Generator, n: int, lo: float = 0.5, hi: float = 1.5) -> np.ndarray:
    r = rng.uniform(lo, hi, n)
    t = rng.uniform(0, 2 * np.pi, n)
    return r * np.exp(1j * t)


def sample_phase_point(family: LaxFamily, realization: AlgebraRealization | None = None,
                       rng: np.random.Generator | None = None, on_shell: bool = True,
                       slice: bool = False, regular_p: bool = False,
                       min_denominator: float = 0.1) -> PhasePoint:
    """Draw a regular phase point with coordinates in the annulus 0.5 <= |c| <= 1.5.

    ``slice`` forces xi into epsilon + n+ (every e_-a_i coordinate 1, the
    other negative-root coordinates and the Cartan part 0).
    """
    R = family.realization if realization is None else realization
    if R is not family.realization:
        raise ValueError("realization does not match the family")
    if rng is None:
        raise ValueError("sample_phase_point needs a seeded numpy Generator")
    N, P = R.rank, R.n_positive
    for _ in range(SAMPLE_BUDGET):
        q = _annulus(rng, N)
        p = _annulus(rng, N)
        xi = _annulus(rng, R.dim)
        den = family.denominators(q)
        if den.size and np.min(np.abs(den)) <= min_denominator:
            continue
        if regular_p and np.min(np.abs(R.all_root_values(p))) <= min_denominator:
            continue
        if on_shell or slice:
            xi[:N] = 0
        if slice:
            xi[N + P:] = 0
            xi[:] += R.epsilon
        return PhasePoint(q, p, xi)
    raise SamplingError(f"no regular point found in {SAMPLE_BUDGET} tries")
