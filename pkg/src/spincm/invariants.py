"""Primitive invariant polynomials and the derivative pairing <d_v1 ... d_vd, f>.

Generators: ``tr x^{k+1}`` for type A, ``tr x^{2k}`` for B and C, and for
D_n the even trace powers up to ``2n - 2`` together with the Pfaffian of the
antisymmetric matrix ``J x``.  They are all evaluated in the defining
representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from math import comb, factorial
from typing import Sequence

import numpy as np

from . import _poly
from .errors import ConsistencyError
from .liealg import AlgebraElement, AlgebraRealization, _bilinear_form


def pfaffian(A: np.ndarray) -> np.ndarray:
    """Pfaffian of (a stack of) antisymmetric matrices by row expansion."""
    A = np.asarray(A)
    n = A.shape[-1]
    if n % 2:
        return np.zeros(A.shape[:-2], dtype=A.dtype)
    if n == 0:
        return np.ones(A.shape[:-2], dtype=A.dtype)
    if n == 2:
        return A[..., 0, 1]
    total = np.zeros(A.shape[:-2], dtype=A.dtype)
    for j in range(1, n):
        keep = [k for k in range(1, n) if k != j]
        minor = A[..., keep, :][..., :, keep]
        sign = 1.0 if j % 2 == 1 else -1.0
        total = total + sign * A[..., 0, j] * pfaffian(minor)
    return total


@dataclass(eq=False)
class PrimitiveInvariant:
    realization: AlgebraRealization = field(repr=False)
    index: int
    degree: int
    kind: str  # "trace" or "pfaffian"

    @property
    def label(self) -> str:
        if self.kind == "trace":
            return f"tr(x^{self.degree})"
        return "Pf(Jx)"

    def on_matrices(self, M: np.ndarray) -> np.ndarray:
        M = np.asarray(M)
        if self.kind == "trace":
            return np.einsum("...ii->...", np.linalg.matrix_power(M, self.degree))
        J = _bilinear_form(self.realization.root_system.type_letter, M.shape[-1])
        return pfaffian(J @ M)

    def __call__(self, x) -> complex:
        if isinstance(x, AlgebraElement):
            return self.on_matrices(x.matrix)
        return self.on_matrices(self.realization.to_matrix(x))

    def gradient(self, x) -> np.ndarray:
        """Killing gradient coordinates: dI(x)[y] = kappa(grad, y)."""
        R = self.realization
        coords = x.coords if isinstance(x, AlgebraElement) else np.asarray(x)
        # dI/d(coordinate) by exact polynomial interpolation along each axis
        d = self.degree
        nodes = _poly.circle_nodes(d + 1)
        M0 = R.to_matrix(coords)
        vals = self.on_matrices(M0[None, None] + nodes[:, None, None, None] * R.basis[None])
        partials = _poly.coefficients(nodes, vals, d)[1]
        return partials[R.dual_index]


def primitive_invariants(R: AlgebraRealization) -> list[PrimitiveInvariant]:
    letter, N = R.root_system.type_letter, R.rank
    if letter == "A":
        specs = [(k + 1, "trace") for k in range(1, N + 1)]
    elif letter in "BC":
        specs = [(2 * k, "trace") for k in range(1, N + 1)]
    else:
        specs = [(2 * k, "trace") for k in range(1, N)] + [(N, "pfaffian")]
        specs.sort(key=lambda s: s[0])
    degrees = tuple(d for d, _ in specs)
    if degrees != R.exponents.degrees:
        raise ConsistencyError(
            f"invariant degrees {degrees} do not match exponent data {R.exponents.degrees}")
    return [PrimitiveInvariant(R, k + 1, d, kind) for k, (d, kind) in enumerate(specs)]


@dataclass
class DirectionMultiset:
    """A monomial d_{v1}^{m1} ... d_{vr}^{mr} in constant-coefficient operators."""

    directions: list[np.ndarray]
    multiplicities: list[int]

    @classmethod
    def of(cls, *pairs) -> "DirectionMultiset":
        dirs, mults = [], []
        for v, m in pairs:
            if isinstance(v, AlgebraElement):
                v = v.coords
            if m:
                dirs.append(np.asarray(v, dtype=complex))
                mults.append(int(m))
        return cls(dirs, mults)

    @property
    def degree(self) -> int:
        return sum(self.multiplicities)

    def matches(self, inv: PrimitiveInvariant) -> bool:
        return self.degree == inv.degree


def pairing(ds: DirectionMultiset, inv: PrimitiveInvariant, unit_scaled: bool = False) -> complex:
    """Mixed directional derivative of ``inv`` at 0 along the multiset.

    Uses the polarization identity for a homogeneous polynomial of degree d,
    ``sum_S (-1)^{d-|S|} f(sum_{i in S} v_i)``, grouped over repeated
    directions.  A degree mismatch gives 0 by homogeneity.  With
    ``unit_scaled`` the result is for the unit-normalized directions.
    """
    if not ds.matches(inv):
        return 0.0
    R = inv.realization
    d = ds.degree
    norms = [np.linalg.norm(v) for v in ds.directions]
    if any(n == 0 for n in norms):
        return 0.0
    units = [v / n for v, n in zip(ds.directions, norms)]
    mats = [R.to_matrix(u) for u in units]
    combos = list(product(*[range(m + 1) for m in ds.multiplicities]))
    weights = np.array([
        np.prod([comb(m, s) for m, s in zip(ds.multiplicities, c)]) * (-1) ** (d - sum(c))
        for c in combos], dtype=float)
    stack = np.array([sum(s * M for s, M in zip(c, mats)) for c in combos])
    value = weights @ inv.on_matrices(stack)
    if unit_scaled:
        return value
    return value * np.prod([n ** m for n, m in zip(norms, ds.multiplicities)])


def multiset_weight(ds: DirectionMultiset, R: AlgebraRealization, tol: float = 1e-14):
    """Total root weight of a multiset of Cartan directions and root vectors."""
    weight = np.zeros(R.rank, dtype=int)
    for v, m in zip(ds.directions, ds.multiplicities):
        off = np.flatnonzero(np.abs(v[R.rank:]) > tol)
        if off.size == 0:
            continue
        if off.size > 1 or np.max(np.abs(v[:R.rank])) > tol:
            raise ValueError("direction is neither a Cartan element nor a root vector")
        root = R.roots[off[0]]
        weight += m * np.array(root)
    return tuple(int(w) for w in weight)


def check_weight_selection(ds: DirectionMultiset, inv: PrimitiveInvariant, tol: float = 1e-10) -> bool:
    """Nonzero total weight must force a vanishing pairing."""
    w = multiset_weight(ds, inv.realization)
    if not any(w):
        return True
    return abs(pairing(ds, inv, unit_scaled=True)) < tol


@dataclass
class TransferCheck:
    ok: bool
    lhs: complex
    rhs: complex


def check_transfer_identity(x, y, z, m: int, n: int, inv: PrimitiveInvariant,
                            rtol: float = 1e-9) -> TransferCheck:
    """<d_x^m d_[x,y] d_z^n, I> = n/(m+1) <d_x^{m+1} d_[y,z] d_z^{n-1}, I>."""
    R = inv.realization
    x, y, z = (v.coords if isinstance(v, AlgebraElement) else np.asarray(v) for v in (x, y, z))
    xy = R.bracket_coords(x, y)
    lhs = pairing(DirectionMultiset.of((x, m), (xy, 1), (z, n)), inv)
    if n == 0:
        rhs = 0.0
    else:
        yz = R.bracket_coords(y, z)
        rhs = n / (m + 1) * pairing(DirectionMultiset.of((x, m + 1), (yz, 1), (z, n - 1)), inv)
    scale = max(np.linalg.norm(x), np.linalg.norm(y), np.linalg.norm(z), 1.0) ** inv.degree
    if n == 0:
        scale = max(scale * np.linalg.norm(y), 1e-300)
    ok = abs(lhs - rhs) <= rtol * max(abs(lhs), abs(rhs), 1e-3 * scale)
    return TransferCheck(bool(ok), complex(lhs), complex(rhs))


def F_coefficients(p, xi, inv: PrimitiveInvariant) -> np.ndarray:
    """Coefficients F_k0..F_kd of u -> I_k(p + u xi).

    Equal to ``<d_p^{d-j} d_xi^j, I_k> / (j! (d-j)!)``.
    """
    R = inv.realization
    p = p.coords if isinstance(p, AlgebraElement) else np.asarray(p)
    xi = xi.coords if isinstance(xi, AlgebraElement) else np.asarray(xi)
    if p.shape[-1] == R.rank:
        full = np.zeros(R.dim, dtype=complex)
        full[:R.rank] = p
        p = full
    d = inv.degree
    nodes = _poly.circle_nodes(d + 1)
    mats = R.to_matrix(p[None] + nodes[:, None] * xi[None])
    return _poly.coefficients(nodes, inv.on_matrices(mats), d)


def F_by_pairing(p, xi, inv: PrimitiveInvariant) -> np.ndarray:
    """Same coefficients through the pairing (independent route)."""
    d = inv.degree
    return np.array([
        pairing(DirectionMultiset.of((p, d - j), (xi, j)), inv) / (factorial(j) * factorial(d - j))
        for j in range(d + 1)])


def invariant_values(invs: Sequence[PrimitiveInvariant], M: np.ndarray) -> np.ndarray:
    """Stack of I_k evaluated on matrices; shape (N,) + M.shape[:-2]."""
    return np.array([inv.on_matrices(M) for inv in invs])
