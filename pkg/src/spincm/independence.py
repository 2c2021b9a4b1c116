"""Functional independence of the integrals: the matrix D of derivatives of
the F_kj on h x (epsilon + n+), its block structure and determinant formula,
the A_j matrices, Jacobian ranks and the Liouville count.

Derivatives of F_kj are taken exactly: for a direction v, the map
(u, t) -> I_k(p + u (xi + t v)) (or I_k(p + t v + u xi) for p-directions) is
a polynomial of degree <= d_k in each variable, so its coefficients come from a
2-d interpolation on roots of unity, and the coefficient of u^j t is the
derivative of F_kj along v.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _poly
from .errors import ConsistencyError, DomainError, SamplingError
from .invariants import F_coefficients, PrimitiveInvariant, primitive_invariants
from .lax import LaxFamily, PhasePoint, extract_integrals, sample_phase_point
from .liealg import AlgebraRealization
from .poisson import integrals_observable
from .rootdata import Root, height, negate

REGULAR_TOL = 0.1
RANK_RTOL = 1e-8
SAMPLE_BUDGET = 1000


# ---------------------------------------------------------------------------
# ordering


@dataclass(frozen=True)
class OrderedIndexing:
    """Ordering of the functions F_kj (j != 1) and of the variables (p, xi_a, a > 0).

    Functions: F_10..F_N0; F_12..F_N2; then for j >= 3 the F_kj with d_k >= j,
    i.e. k = N - b_{j-1} + 1 .. N.  Variables: p_1..p_N, then xi_a for positive
    roots grouped by height.  Both are cut into blocks of sizes N, b_1, b_2, ...
    """

    functions: tuple[tuple[int, int], ...]      # (k, j), k 1-based
    variables: tuple                             # ("p", i) or root tuple
    block_sizes: tuple[int, ...]
    roots_by_height: tuple[tuple[Root, ...], ...]

    @property
    def offsets(self) -> list[int]:
        return list(np.concatenate([[0], np.cumsum(self.block_sizes)]).astype(int))


def ordered_indexing(R: AlgebraRealization) -> OrderedIndexing:
    ed = R.exponents
    N = R.rank
    b = ed.b
    funcs: list[tuple[int, int]] = [(k, 0) for k in range(1, N + 1)]
    for j in range(2, ed.coxeter_number + 1):
        count = b[j - 2]                          # b_{j-1}
        funcs += [(k, j) for k in range(N - count + 1, N + 1)]
    by_h = tuple(tuple(a for a in R.root_system.positive_roots if height(a) == j)
                 for j in range(1, ed.coxeter_number))
    variables = tuple(("p", i) for i in range(N)) + tuple(a for grp in by_h for a in grp)
    sizes = (N,) + tuple(b)
    if len(funcs) != sum(ed.degrees) or len(funcs) != len(variables):
        raise ConsistencyError("function and variable counts disagree")
    return OrderedIndexing(tuple(funcs), variables, sizes, by_h)


# ---------------------------------------------------------------------------
# exact derivatives of F_kj


def _bilinear_coefficients(inv: PrimitiveInvariant, A, B, C, E) -> np.ndarray:
    """c[..., j, m]: coefficient of u^j t^m in I(A + u B + t C + u t E).

    Leading axes of C and E (if any) are batched.
    """
    R = inv.realization
    d = inv.degree
    n = d + 1
    w = _poly.circle_nodes(n)
    U, T = np.meshgrid(w, w, indexing="ij")
    C = np.asarray(C)
    E = np.asarray(E)
    X = (A + U[..., None] * B)[None] + T[None, ..., None] * C[:, None, None, :] \
        + (U * T)[None, ..., None] * E[:, None, None, :]
    vals = inv.on_matrices(R.to_matrix(X))                     # (batch, n, n)
    # values on the n-th roots of unity: c_jm = n^-2 sum f(w_a, w_b) w_a^-j w_b^-m
    return np.fft.fft(np.fft.fft(vals, axis=1), axis=2) / n ** 2


def F_derivatives(R: AlgebraRealization, p, xi, invs: list[PrimitiveInvariant] | None = None,
                  order: int = 1) -> dict:
    """Exact d^order F_kj / d v^order for v in (p_i, xi_a (a > 0)).

    Returns {(k, j): array over variables in :func:`ordered_indexing` order}.
    Derivatives with respect to xi_a are along the coordinate of e_a.
    """
    invs = invs if invs is not None else primitive_invariants(R)
    idx = ordered_indexing(R)
    N = R.rank
    p_full = np.zeros(R.dim, dtype=complex)
    p_full[:N] = p
    xi = np.asarray(xi, dtype=complex)
    nv = len(idx.variables)
    P_dirs = np.zeros((N, R.dim), dtype=complex)
    P_dirs[np.arange(N), np.arange(N)] = 1.0
    X_dirs = np.zeros((nv - N, R.dim), dtype=complex)
    for r, a in enumerate(idx.variables[N:]):
        X_dirs[r, R.root_index[a]] = 1.0
    fact = float(np.prod(np.arange(1, order + 1)))
    out = {}
    for k, inv in enumerate(invs, start=1):
        cp = _bilinear_coefficients(inv, p_full, xi, P_dirs, np.zeros_like(P_dirs))
        cx = _bilinear_coefficients(inv, p_full, xi, np.zeros_like(X_dirs), X_dirs)
        c = np.concatenate([cp, cx], axis=0)                   # (nv, j, m)
        for j in range(inv.degree + 1):
            out[(k, j)] = fact * c[:, j, order]
    return out


# ---------------------------------------------------------------------------
# the matrix D


@dataclass
class DerivativeBlocks:
    D: np.ndarray
    blocks: list[np.ndarray]
    indexing: OrderedIndexing
    p: np.ndarray
    xi: np.ndarray

    def block(self, r: int, c: int) -> np.ndarray:
        o = self.indexing.offsets
        return self.D[o[r]:o[r + 1], o[c]:o[c + 1]]

    def off_block_mass(self) -> float:
        """Largest above-diagonal block norm relative to the diagonal block norms."""
        nb = len(self.blocks)
        diag = max(np.linalg.norm(B) for B in self.blocks)
        upper = max((np.linalg.norm(self.block(r, c)) for r in range(nb) for c in range(r + 1, nb)),
                    default=0.0)
        return float(upper / diag)

    def determinants(self) -> np.ndarray:
        return np.array([np.linalg.det(B) for B in self.blocks])


def is_regular(R: AlgebraRealization, p, tol: float = REGULAR_TOL) -> bool:
    p = np.asarray(p, dtype=complex)
    n = np.linalg.norm(p)
    return bool(n > 0 and np.min(np.abs(R.all_root_values(p / n))) > tol)


def build_D(R: AlgebraRealization, p, xi=None, regular_tol: float = REGULAR_TOL,
            invs: list[PrimitiveInvariant] | None = None) -> DerivativeBlocks:
    """D at (p, xi) with xi in epsilon + n+ (default xi = epsilon)."""
    if regular_tol > 0 and not is_regular(R, p, regular_tol):
        raise DomainError(f"p is not regular: some |alpha(p/|p|)| <= {regular_tol}")
    xi = R.epsilon if xi is None else np.asarray(xi, dtype=complex)
    idx = ordered_indexing(R)
    der = F_derivatives(R, p, xi, invs)
    D = np.array([der[kj] for kj in idx.functions])
    o = idx.offsets
    blocks = [D[o[b]:o[b + 1], o[b]:o[b + 1]] for b in range(len(idx.block_sizes))]
    return DerivativeBlocks(D, blocks, idx, np.asarray(p, dtype=complex), xi)


def random_slice_point(R: AlgebraRealization, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """A point of epsilon + n+ with random positive-root coordinates."""
    xi = R.epsilon.copy()
    for a in R.root_system.positive_roots:
        xi[R.root_index[a]] = scale * (rng.normal() + 1j * rng.normal())
    return xi


def slice_invariance(R: AlgebraRealization, p, rng: np.random.Generator, n_trials: int = 3) -> float:
    """Largest change of any diagonal-block entry of D when xi moves within epsilon + n+.

    Relative to the largest block entry at xi = epsilon.
    """
    invs = primitive_invariants(R)
    ref = build_D(R, p, invs=invs)
    scale = max(np.max(np.abs(B)) for B in ref.blocks)
    worst = 0.0
    for _ in range(n_trials):
        moved = build_D(R, p, random_slice_point(R, rng), invs=invs)
        for B0, B1 in zip(ref.blocks, moved.blocks):
            worst = max(worst, float(np.max(np.abs(B1 - B0)) / scale))
    return worst


@dataclass
class SliceDependenceReport:
    """Dependence of F_kj (j >= 2) on xi_a at slice points, by height of a.

    ``nonlinearity``: largest second derivative along xi_a with ht(a) = j - 1;
    ``dependence``: largest first derivative along xi_a with ht(a) >= j.
    Both relative to the largest first derivative in the row.
    """
    nonlinearity: float
    dependence: float

    def ok(self, tol: float = 1e-8) -> bool:
        return self.nonlinearity < tol and self.dependence < tol


def slice_dependence(R: AlgebraRealization, p, xi=None) -> SliceDependenceReport:
    invs = primitive_invariants(R)
    xi = R.epsilon if xi is None else np.asarray(xi, dtype=complex)
    idx = ordered_indexing(R)
    N = R.rank
    first = F_derivatives(R, p, xi, invs, order=1)
    second = F_derivatives(R, p, xi, invs, order=2)
    hts = np.array([0] * N + [height(a) for a in idx.variables[N:]])
    nonlin = dep = 0.0
    for (k, j), d1 in first.items():
        if j < 2:
            continue
        scale = max(np.max(np.abs(d1)), 1e-300)
        on_layer = hts == j - 1
        above = hts >= j
        if np.any(on_layer):
            nonlin = max(nonlin, float(np.max(np.abs(second[(k, j)][on_layer])) / scale))
        if np.any(above):
            dep = max(dep, float(np.max(np.abs(d1[above])) / scale))
    return SliceDependenceReport(nonlin, dep)


def sample_regular_p(R: AlgebraRealization, rng: np.random.Generator,
                     tol: float = REGULAR_TOL) -> np.ndarray:
    for _ in range(SAMPLE_BUDGET):
        r = rng.uniform(0.5, 1.5, R.rank) * np.exp(2j * np.pi * rng.uniform(size=R.rank))
        if is_regular(R, r, tol):
            return r
    raise SamplingError(f"no regular p found in {SAMPLE_BUDGET} tries")


def root_product(R: AlgebraRealization, p, roots) -> complex:
    return complex(np.prod([R.alpha(a, p) for a in roots]))


@dataclass
class DetFormulaReport:
    ok: bool
    ratios: list[list[complex]]            # per block j, per sample
    ratio_rel_std: list[float]
    recursion_rel_std: list[float]         # |D_j| prod_{ht j} alpha / |D_{j-1}|, j >= 1
    total_rel_std: float
    constant_rows_dev: list[float]         # first b_j - b_{j+1} rows: max change across samples
    min_abs_det: float
    constants: list[complex]
    tol: float

    def to_dict(self) -> dict:
        return {
            "ok": self.ok, "ratio_rel_std": self.ratio_rel_std,
            "recursion_rel_std": self.recursion_rel_std, "total_rel_std": self.total_rel_std,
            "constant_rows_dev": self.constant_rows_dev, "min_abs_det": self.min_abs_det,
            "constants": [[c.real, c.imag] for c in self.constants], "tol": self.tol,
        }


def _rel_std(values) -> float:
    v = np.asarray(values, dtype=complex)
    m = np.mean(v)
    return float(np.std(v) / abs(m)) if abs(m) > 0 else float("inf")


def verify_det_formula(R: AlgebraRealization, p_samples, tol: float = 1e-6) -> DetFormulaReport:
    """Check |D_j|(p) proportional to prod_{ht a > j} a(p) across samples.

    Proportionality constants are recorded, not asserted.
    """
    if len(p_samples) < 3:
        raise ValueError("need at least 3 p samples")
    invs = primitive_invariants(R)
    Ds = [build_D(R, p, invs=invs) for p in p_samples]
    idx = Ds[0].indexing
    pos = R.root_system.positive_roots
    h = R.exponents.coxeter_number
    dets = np.array([D.determinants() for D in Ds])            # (samples, h)
    min_det = float(np.min(np.abs(dets)))
    ratios, stds = [], []
    for j in range(h):
        prods = np.array([root_product(R, p, [a for a in pos if height(a) > j]) for p in p_samples])
        r = dets[:, j] / prods
        ratios.append(list(r))
        stds.append(_rel_std(r))
    rec = []
    for j in range(1, h):
        layer = idx.roots_by_height[j - 1]
        r = [dets[s, j] * root_product(R, p, layer) / dets[s, j - 1] for s, p in enumerate(p_samples)]
        rec.append(_rel_std(r))
    total = [np.prod(dets[s]) / np.prod([R.alpha(a, p) ** height(a) for a in pos])
             for s, p in enumerate(p_samples)]
    tot_std = _rel_std(total)
    b = R.exponents.b
    const_dev = []
    for j in range(1, h):
        n_const = b[j - 1] - (b[j] if j < len(b) else 0)
        rows = np.array([D.blocks[j][:n_const] for D in Ds])
        scale = max(np.max(np.abs(rows)), 1e-300) if rows.size else 1.0
        const_dev.append(float(np.max(np.abs(rows - rows[0])) / scale) if rows.size else 0.0)
    ok = (min_det > 1e-12 and max(stds) < tol and max(rec, default=0.0) < tol
          and tot_std < tol and max(const_dev, default=0.0) < tol)
    constants = [complex(np.mean(r)) for r in ratios]
    return DetFormulaReport(bool(ok), ratios, stds, rec, float(tot_std), const_dev, min_det,
                            constants, tol)


def a_matrix(R: AlgebraRealization, j: int, tol: float = 1e-10) -> np.ndarray:
    """Coefficients a_{j,n,i} of [e_{a_{j,i}}, epsilon] over the height j-1 root vectors."""
    h = R.exponents.coxeter_number
    if not 2 <= j <= h - 1:
        raise ValueError(f"a_matrix needs 2 <= j <= {h - 1}, got {j}")
    idx = ordered_indexing(R)
    upper = idx.roots_by_height[j - 1]
    lower = idx.roots_by_height[j - 2]
    cols = []
    for a in upper:
        e = np.zeros(R.dim, dtype=complex)
        e[R.root_index[a]] = 1.0
        br = R.bracket_coords(e, R.epsilon)
        coeffs = np.array([br[R.root_index[c]] for c in lower])
        rest = br.copy()
        for c in lower:
            rest[R.root_index[c]] = 0
        if np.max(np.abs(rest)) > tol * max(1.0, np.max(np.abs(br))):
            raise ConsistencyError(f"[e_a, epsilon] leaves height {j - 1}: grading violated")
        cols.append(coeffs)
    return np.array(cols).T


def matrix_rank(M: np.ndarray, rtol: float = RANK_RTOL) -> tuple[int, np.ndarray]:
    s = np.linalg.svd(M, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0, s
    return int(np.sum(s > rtol * s[0])), s


# ---------------------------------------------------------------------------
# Jacobian rank and counting


@dataclass
class RankReport:
    rank: int
    expected: int
    n_functions: int
    singular_values: list[float]
    margin: float                          # sigma_r / sigma_{r+1}, or sigma_r / (rtol sigma_1)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def jacobian_rank(family: LaxFamily, realization: AlgebraRealization | None = None,
                  point: PhasePoint | None = None, include_j1: bool = False,
                  rng: np.random.Generator | None = None, step: float | None = None) -> RankReport:
    """Numerical rank of d(I_kj) with respect to all 2N + dim g coordinates."""
    R = family.realization if realization is None else realization
    if point is None:
        point = sample_phase_point(family, R, rng or np.random.default_rng(0),
                                   on_shell=True, regular_p=True)
    obs = integrals_observable(family, include_j1=include_j1)
    J = obs.jacobian(point.as_vector(), step=step)
    r, s = matrix_rank(J)
    if r < len(s):
        margin = float(s[r - 1] / s[r]) if r > 0 and s[r] > 0 else float("inf")
    else:
        margin = float(s[-1] / (RANK_RTOL * s[0]))
    return RankReport(r, int(sum(R.exponents.degrees)), J.shape[0], [float(v) for v in s], margin)


@dataclass
class LiouvilleCount:
    algebra: str
    dim: int
    rank: int
    leaf_dimension: int
    required: int
    per_family: dict

    @property
    def ok(self) -> bool:
        return all(v["nontrivial"] == self.required for v in self.per_family.values()) \
            and self.leaf_dimension == 2 * self.required

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["ok"] = self.ok
        return d


def liouville_count(R: AlgebraRealization) -> LiouvilleCount:
    """Integral bookkeeping per family against half the generic leaf dimension."""
    N = R.rank
    degs = R.exponents.degrees
    leaf = R.dim - N
    required = sum(R.exponents.exponents)
    extracted = sum(d + 1 for d in degs)          # I_kj, j = 0..d_k
    reasons = {
        "rational": "I_k1 = 0 on J^-1(0)",
        "trigonometric": "I_k1 fixed by sum_{j odd} I_kj i^j = 0",
        "elliptic": "no j = 1 term in the elliptic expansion",
    }
    per = {}
    for kind, why in reasons.items():
        per[kind] = {"extracted": extracted, "casimirs": N, "dependent": N,
                     "nontrivial": extracted - N - N, "dependent_reason": why}
    return LiouvilleCount(R.name, R.dim, N, leaf, required, per)


# ---------------------------------------------------------------------------
# degree of the remainders R_kj = I_kj - F_kj in p


@dataclass
class RemainderReport:
    ok: bool
    max_violation: float
    entries: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def remainder_degree_check(family: LaxFamily, realization: AlgebraRealization | None = None,
                           rng: np.random.Generator | None = None, n_points: int = 2,
                           tol: float = 1e-8) -> RemainderReport:
    """deg_p (I_kj - F_kj) <= d_k - j - 1 along rays p = t p0.

    Elliptic j = 0 is compared after removing the least-squares best fit by
    the I_kj with j >= 4 even (the constant terms of p^(j-2) feed into I_k0).
    """
    R = family.realization if realization is None else realization
    rng = rng or np.random.default_rng(0)
    invs = primitive_invariants(R)
    worst, entries = 0.0, {}
    for _ in range(n_points):
        pt = sample_phase_point(family, R, rng, on_shell=True)
        dmax = max(inv.degree for inv in invs)
        ts = _poly.circle_nodes(dmax + 2, radius=1.0, phase=0.1)
        tables = [extract_integrals(family, pt.replace(p=t * pt.p), invs) for t in ts]
        for k, inv in enumerate(invs, start=1):
            d = inv.degree
            I = np.array([tb.row(k) for tb in tables])                     # (nodes, j)
            F = np.array([F_coefficients(t * pt.p, pt.xi, inv) for t in ts])
            Rv = I - F
            scale = max(np.max(np.abs(I)), np.max(np.abs(F)), 1e-300)
            for j in range(d + 1):
                vals = Rv[:, j]
                if family.kind == "elliptic" and j == 0:
                    basis = [I[:, jj] for jj in range(4, d + 1, 2)]
                    if basis:
                        Bm = np.stack(basis, axis=1)
                        vals = vals - Bm @ np.linalg.lstsq(Bm, vals, rcond=None)[0]
                c = _poly.coefficients(ts, vals, dmax + 1)
                bound = d - j - 1
                excess = float(np.max(np.abs(c[max(bound + 1, 0):])) / scale)
                worst = max(worst, excess)
                key = f"R_{k}{j}"
                entries[key] = max(entries.get(key, 0.0), excess)
    return RemainderReport(worst < tol, worst, entries)
