"""Matrix realizations of sl(n+1), so(2n+1), sp(2n), so(2n).

Basis convention (used by every coordinate vector in the package)::

    [x_1 .. x_N | e_a for a in positive roots | e_-a for a in positive roots]

``x_i`` is Killing-orthonormal in the Cartan subalgebra, ``e_a`` are integral
Chevalley-type root vectors and ``e_-a`` is rescaled so that
``kappa(e_a, e_-a) = 1``.  The Killing-dual basis is therefore obtained by
swapping ``e_a <-> e_-a``, and the coordinate of ``xi`` along ``e_a`` is
``kappa(xi, e_-a)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import CapabilityError, DomainError
from .rootdata import ExponentData, Root, RootSystem, exponent_data, negate


def _bilinear_form(letter: str, m: int) -> np.ndarray:
    J = np.fliplr(np.eye(m))
    if letter == "C":
        J[m // 2:, :] *= -1.0
    return J


def _simple_positions(letter: str, rank: int) -> list[tuple[int, int]]:
    """Elementary-matrix slot (a, b) carrying each simple root vector."""
    pos = [(i, i + 1) for i in range(rank - 1)]
    if letter == "A":
        pos.append((rank - 1, rank))
    elif letter in "BC":
        pos.append((rank - 1, rank))
    elif letter == "D":
        pos.append((rank - 2, rank))
    return pos


def _elementary(m: int, a: int, b: int) -> np.ndarray:
    E = np.zeros((m, m))
    E[a, b] = 1.0
    return E


def _commutator(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return X @ Y - Y @ X


@dataclass(eq=False)
class AlgebraRealization:
    root_system: RootSystem
    exponents: ExponentData
    matrix_dim: int
    basis: np.ndarray            # (dim, m, m) real matrices
    killing_scale: float         # kappa(X, Y) = killing_scale * tr(XY)
    root_values: np.ndarray      # (2|R+|, N): alpha(x_i) for roots in basis order
    root_index: dict[Root, int]  # root -> basis index
    structure_constants: np.ndarray  # [b_a, b_b] = sum_c f[a, b, c] b_c

    @property
    def rank(self) -> int:
        return self.root_system.rank

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def name(self) -> str:
        return self.root_system.name

    @property
    def roots(self) -> tuple[Root, ...]:
        return self.root_system.roots

    @property
    def n_positive(self) -> int:
        return len(self.root_system.positive_roots)

    @cached_property
    def dual_index(self) -> np.ndarray:
        """Index of the Killing-dual basis element of each basis element."""
        N, P = self.rank, self.n_positive
        idx = np.arange(self.dim)
        idx[N:N + P] += P
        idx[N + P:] -= P
        return idx

    @cached_property
    def dual_basis(self) -> np.ndarray:
        return self.basis[self.dual_index]

    @cached_property
    def killing_gram(self) -> np.ndarray:
        """Gram matrix of kappa in coordinates (identity up to the e_a/e_-a swap)."""
        G = np.zeros((self.dim, self.dim))
        G[np.arange(self.dim), self.dual_index] = 1.0
        return G

    # -- coordinates ---------------------------------------------------------

    def to_matrix(self, coords) -> np.ndarray:
        return np.tensordot(np.asarray(coords), self.basis, axes=(-1, 0))

    def from_matrix(self, M) -> np.ndarray:
        M = np.asarray(M)
        # coords_k = kappa(M, dual_k) = scale * tr(M dual_k)
        return self.killing_scale * np.einsum("...ij,kji->...k", M, self.dual_basis)

    def element(self, coords) -> "AlgebraElement":
        return AlgebraElement(self, np.asarray(coords, dtype=complex))

    def cartan_element(self, cartan_coords) -> "AlgebraElement":
        c = np.zeros(self.dim, dtype=complex)
        c[:self.rank] = cartan_coords
        return AlgebraElement(self, c)

    def root_vector(self, root: Root) -> "AlgebraElement":
        c = np.zeros(self.dim, dtype=complex)
        c[self.root_index[tuple(root)]] = 1.0
        return AlgebraElement(self, c)

    def cartan_basis(self, i: int) -> "AlgebraElement":
        c = np.zeros(self.dim, dtype=complex)
        c[i] = 1.0
        return AlgebraElement(self, c)

    def killing(self, u, v) -> complex:
        """kappa(u, v) for coordinate vectors (no conjugation)."""
        u, v = np.asarray(u), np.asarray(v)
        return np.sum(u * v[..., self.dual_index], axis=-1)

    def bracket_coords(self, u, v) -> np.ndarray:
        return np.einsum("a,b,abc->c", u, v, self.structure_constants)

    def ad_matrix(self, u) -> np.ndarray:
        """Matrix of ad(u) acting on coordinate vectors (columns = images)."""
        return np.einsum("a,abc->cb", u, self.structure_constants)

    def alpha(self, root: Root, cartan_coords) -> complex:
        return self.root_values[self.root_index[tuple(root)] - self.rank] @ np.asarray(cartan_coords)

    def all_root_values(self, cartan_coords) -> np.ndarray:
        """alpha(h) for every root, in basis order."""
        return self.root_values @ np.asarray(cartan_coords)

    # -- distinguished elements ---------------------------------------------

    @cached_property
    def grading_element(self) -> np.ndarray:
        """Cartan coordinates of x_0 (alpha_i(x_0) = 1 for every simple root)."""
        A = self.root_values[:self.rank]  # simple roots come first
        return np.linalg.solve(A, np.ones(self.rank))

    @cached_property
    def epsilon(self) -> np.ndarray:
        c = np.zeros(self.dim, dtype=complex)
        for s in self.root_system.simple_roots:
            c[self.root_index[negate(s)]] = 1.0
        return c

    def coroot(self, root: Root) -> np.ndarray:
        """Cartan coordinates of H_a, the Killing dual of the root a."""
        # kappa(H_a, x_i) = a(x_i) and the x_i are orthonormal
        return self.root_values[self.root_index[tuple(root)] - self.rank].astype(complex)

    @cached_property
    def casimir_pairs(self) -> list[tuple[int, int]]:
        """Omega = sum x_i (x) x_i + sum_a e_a (x) e_-a, as basis-index pairs."""
        return [(k, int(self.dual_index[k])) for k in range(self.dim)]

    # -- torus action and slice ---------------------------------------------

    def torus_scaling(self, cartan_coords) -> np.ndarray:
        """Per-coordinate factors of Ad_{exp h}: 1 on Cartan, exp(a(h)) on e_a."""
        h = np.asarray(cartan_coords)
        if h.shape != (self.rank,):
            raise DomainError(f"torus action needs {self.rank} Cartan coordinates, got {h.shape}")
        return np.concatenate([np.ones(self.rank), np.exp(self.all_root_values(h))])


@dataclass(eq=False)
class AlgebraElement:
    realization: AlgebraRealization
    coords: np.ndarray

    @cached_property
    def matrix(self) -> np.ndarray:
        return self.realization.to_matrix(self.coords)

    def _check(self, other: "AlgebraElement") -> None:
        if other.realization is not self.realization:
            raise ValueError("elements belong to different realizations")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.realization, self.coords + other.coords)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.realization, self.coords - other.coords)

    def __mul__(self, s) -> "AlgebraElement":
        return AlgebraElement(self.realization, self.coords * s)

    __rmul__ = __mul__

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.realization, -self.coords)

    @property
    def cartan_part(self) -> np.ndarray:
        return self.coords[:self.realization.rank]

    def __getitem__(self, key) -> complex:
        """Coordinate along x_i (int key) or e_a (root key)."""
        if isinstance(key, (int, np.integer)):
            return self.coords[key]
        return self.coords[self.realization.root_index[tuple(key)]]


def bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    x._check(y)
    return AlgebraElement(x.realization, x.realization.bracket_coords(x.coords, y.coords))


def killing(x: AlgebraElement, y: AlgebraElement) -> complex:
    x._check(y)
    return x.realization.killing(x.coords, y.coords)


def torus_adjoint(realization: AlgebraRealization, h) -> "callable":
    """Return the map Ad_{exp h} on elements, for h in the Cartan subalgebra."""
    if isinstance(h, AlgebraElement):
        if np.max(np.abs(h.coords[realization.rank:]), initial=0.0) > 1e-12:
            raise DomainError("torus_adjoint needs a Cartan element")
        h = h.cartan_part
    scale = realization.torus_scaling(h)

    def act(x: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(realization, x.coords * scale)

    return act


def slice_normalize(x: AlgebraElement) -> tuple[np.ndarray, AlgebraElement]:
    """Move ``x`` into the slice where every e_-a_i coordinate equals 1.

    Returns the Cartan coordinates of ``h*`` (with a_i(h*) = -log x_-a_i,
    principal branch) and ``s = Ad_{exp(-h*)} x``.
    """
    R = x.realization
    rs = R.root_system
    lows = np.array([x.coords[R.root_index[negate(s)]] for s in rs.simple_roots])
    if np.any(np.abs(lows) == 0.0):
        raise DomainError("element not in U_cal: some e_-a_i coordinate vanishes")
    A = R.root_values[:R.rank]
    h_star = np.linalg.solve(A, -np.log(lows.astype(complex)))
    s = torus_adjoint(R, -h_star)(x)
    return h_star, s


_CACHE: dict[tuple[str, int], AlgebraRealization] = {}


def realize(rs: RootSystem) -> AlgebraRealization:
    """Build the matrix realization for a classical root system (cached)."""
    key = (rs.type_letter, rs.rank)
    if key in _CACHE:
        return _CACHE[key]
    if not rs.supports_matrix_realization:
        raise CapabilityError(
            f"type {rs.type_letter} is supported only at the root-combinatorics level "
            "(rootdata); matrix realizations exist for A, B, C, D")
    R = _build(rs)
    _CACHE[key] = R
    return R


def _build(rs: RootSystem) -> AlgebraRealization:
    letter, N = rs.type_letter, rs.rank
    m = {"A": N + 1, "B": 2 * N + 1, "C": 2 * N, "D": 2 * N}[letter]
    if letter == "A":
        def proj(X):
            return X
    else:
        J = _bilinear_form(letter, m)
        Jinv = np.linalg.inv(J)

        def proj(X):
            return 0.5 * (X - Jinv @ X.T @ J)

    def normalized(X):
        return X / np.max(np.abs(X))

    raise_ = {}
    lower = {}
    for s, (a, b) in zip(rs.simple_roots, _simple_positions(letter, N)):
        raise_[s] = normalized(proj(_elementary(m, a, b)))
        lower[s] = normalized(proj(_elementary(m, b, a)))

    # remaining root vectors by bracketing with simple ones, in height order
    for beta in rs.positive_roots:
        if beta in raise_:
            continue
        for s in rs.simple_roots:
            rest = tuple(x - y for x, y in zip(beta, s))
            if rest in raise_:
                raise_[beta] = _commutator(raise_[s], raise_[rest])
                lower[beta] = _commutator(lower[s], lower[rest])
                break

    cartan_raw = [np.real(_commutator(raise_[s], lower[s])) for s in rs.simple_roots]
    pos = list(rs.positive_roots)
    prelim = np.array(cartan_raw + [raise_[a] for a in pos] + [lower[a] for a in pos])
    dim = prelim.shape[0]
    if dim != rs.dimension:
        raise AssertionError("realization dimension mismatch")

    # Killing form from ad matrices on the preliminary basis
    flat = prelim.reshape(dim, -1).T
    pinv = np.linalg.pinv(flat)

    def coords_of(M):
        return pinv @ M.reshape(-1)

    ad = np.empty((dim, dim, dim))
    for i in range(dim):
        for j in range(dim):
            ad[i][:, j] = coords_of(_commutator(prelim[i], prelim[j]))
    h0 = cartan_raw[0]
    kappa00 = np.trace(ad[0] @ ad[0])
    scale = kappa00 / np.trace(h0 @ h0)

    def kappa(X, Y):
        return scale * np.trace(X @ Y)

    # Killing-orthonormal Cartan basis
    G = np.array([[kappa(a, b) for b in cartan_raw] for a in cartan_raw])
    C = np.linalg.cholesky(G)
    Cinv = np.linalg.inv(C)
    xs = [sum(Cinv[i, j] * cartan_raw[j] for j in range(N)) for i in range(N)]

    lows = [lower[a] / kappa(raise_[a], lower[a]) for a in pos]
    basis = np.array(xs + [raise_[a] for a in pos] + lows)

    root_index = {}
    for k, a in enumerate(pos):
        root_index[a] = N + k
        root_index[negate(a)] = N + len(pos) + k

    # a(x_i) read off from [x_i, e_a] = a(x_i) e_a
    root_vals = np.empty((2 * len(pos), N))
    for k in range(2 * len(pos)):
        e = basis[N + k]
        for i in range(N):
            br = _commutator(xs[i], e)
            root_vals[k, i] = np.sum(br * e) / np.sum(e * e)

    R = AlgebraRealization(
        root_system=rs,
        exponents=exponent_data(rs),
        matrix_dim=m,
        basis=basis,
        killing_scale=float(scale),
        root_values=root_vals,
        root_index=root_index,
        structure_constants=np.empty((0, 0, 0)),
    )
    f = np.empty((dim, dim, dim))
    for a in range(dim):
        for b in range(dim):
            f[a, b] = np.real(R.from_matrix(_commutator(basis[a], basis[b])))
    R.structure_constants = f
    return R


def killing_from_structure_constants(R: AlgebraRealization, u, v) -> complex:
    """tr(ad u ad v) computed from the structure constants (independent route)."""
    return np.trace(R.ad_matrix(u) @ R.ad_matrix(v))


def adjoint_matrix_action(R: AlgebraRealization, g: np.ndarray, x) -> np.ndarray:
    """Coordinates of g X g^{-1} for a group element given as a matrix."""
    return R.from_matrix(g @ R.to_matrix(x) @ np.linalg.inv(g))


def expm(M: np.ndarray) -> np.ndarray:
    return scipy.linalg.expm(M)
