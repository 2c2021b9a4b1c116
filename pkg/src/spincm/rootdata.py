"""Root-system combinatorics for the simple Lie algebras.

Everything here is exact: roots are integer coefficient vectors over the
simple roots, and the Euclidean realizations used to derive Cartan matrices
are kept in :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import ConfigurationError

Root = tuple[int, ...]

_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4}
_FIXED_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}
MATRIX_TYPES = frozenset("ABCD")
_MAX_HEIGHT = 64  # E8 tops out at 29


def _unit(n: int, i: int, scale: Fraction = Fraction(1)) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[i] = scale
    return v


def _euclidean_simple_roots(letter: str, rank: int) -> list[list[Fraction]]:
    """Bourbaki simple roots in an orthonormal epsilon basis."""
    half = Fraction(1, 2)
    if letter == "A":
        n = rank + 1
        return [[a - b for a, b in zip(_unit(n, i), _unit(n, i + 1))] for i in range(rank)]
    if letter in "BCD":
        n = rank
        roots = [[a - b for a, b in zip(_unit(n, i), _unit(n, i + 1))] for i in range(n - 1)]
        if letter == "B":
            roots.append(_unit(n, n - 1))
        elif letter == "C":
            roots.append(_unit(n, n - 1, Fraction(2)))
        else:
            roots.append([a + b for a, b in zip(_unit(n, n - 2), _unit(n, n - 1))])
        return roots
    if letter == "G":
        return [
            [Fraction(1), Fraction(-1), Fraction(0)],
            [Fraction(-2), Fraction(1), Fraction(1)],
        ]
    if letter == "F":
        return [
            [Fraction(0), Fraction(1), Fraction(-1), Fraction(0)],
            [Fraction(0), Fraction(0), Fraction(1), Fraction(-1)],
            [Fraction(0), Fraction(0), Fraction(0), Fraction(1)],
            [half, -half, -half, -half],
        ]
    if letter == "E":
        e8 = [[half, -half, -half, -half, -half, -half, -half, half]]
        e8.append([Fraction(1), Fraction(1)] + [Fraction(0)] * 6)
        for i in range(6):
            e8.append([a - b for a, b in zip(_unit(8, i + 1), _unit(8, i))])
        return e8[:rank]
    raise ConfigurationError(f"unknown type letter {letter!r}")


def _validate(letter: str, rank: int) -> None:
    if not isinstance(rank, int) or rank < 1:
        raise ConfigurationError(f"rank must be a positive integer, got {rank!r}")
    if letter in _MIN_RANK:
        if rank < _MIN_RANK[letter]:
            raise ConfigurationError(
                f"type {letter} requires rank >= {_MIN_RANK[letter]}, got {rank}")
    elif letter in _FIXED_RANKS:
        if rank not in _FIXED_RANKS[letter]:
            raise ConfigurationError(
                f"type {letter} exists only in ranks {_FIXED_RANKS[letter]}, got {rank}")
    else:
        raise ConfigurationError(f"type letter must be one of A-G, got {letter!r}")


def _dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


@dataclass(frozen=True)
class RootSystem:
    """Reduced irreducible root system of one simple type.

    ``cartan_matrix[i][j] = 2 (a_i, a_j) / (a_j, a_j)`` so that the
    ``a_i``-string through ``b`` obeys ``p - q = sum_j n_j cartan_matrix[j][i]``.
    """

    type_letter: str
    rank: int
    cartan_matrix: tuple[tuple[int, ...], ...]
    positive_roots: tuple[Root, ...]
    euclidean_simple_roots: tuple[tuple[Fraction, ...], ...] = field(repr=False)

    @property
    def name(self) -> str:
        return f"{self.type_letter}{self.rank}"

    @property
    def simple_roots(self) -> tuple[Root, ...]:
        return tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))

    @cached_property
    def negative_roots(self) -> tuple[Root, ...]:
        return tuple(negate(a) for a in self.positive_roots)

    @cached_property
    def roots(self) -> tuple[Root, ...]:
        return self.positive_roots + self.negative_roots

    @cached_property
    def root_set(self) -> frozenset[Root]:
        return frozenset(self.roots)

    @property
    def dimension(self) -> int:
        """Dimension of the corresponding simple Lie algebra."""
        return 2 * len(self.positive_roots) + self.rank

    @property
    def supports_matrix_realization(self) -> bool:
        return self.type_letter in MATRIX_TYPES

    def euclidean(self, root: Root) -> tuple[Fraction, ...]:
        n = len(self.euclidean_simple_roots[0])
        return tuple(
            sum((c * s[k] for c, s in zip(root, self.euclidean_simple_roots)), Fraction(0))
            for k in range(n))

    def inner(self, a: Root, b: Root) -> Fraction:
        return _dot(self.euclidean(a), self.euclidean(b))


def negate(root: Root) -> Root:
    return tuple(-c for c in root)


def add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def height(root: Root) -> int:
    return sum(root)


def build_root_system(type_letter: str, rank: int) -> RootSystem:
    """Construct the root system of type ``type_letter`` and given rank.

    Positive roots are generated from the simple roots by repeatedly adding
    simple roots, using root strings to decide which sums are roots.
    """
    letter = str(type_letter).upper()
    _validate(letter, rank)
    simple = _euclidean_simple_roots(letter, rank)
    cartan = tuple(
        tuple(int(2 * _dot(simple[i], simple[j]) / _dot(simple[j], simple[j]))
              for j in range(rank))
        for i in range(rank))

    units = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    found: set[Root] = set(units)
    layer = list(units)
    ordered = list(units)
    level = 1
    while layer:
        level += 1
        if level > _MAX_HEIGHT:
            raise ConfigurationError("root enumeration failed to terminate")
        nxt: list[Root] = []
        for beta in layer:
            for i in range(rank):
                # p = how far down the a_i string through beta goes
                p = 0
                probe = list(beta)
                while True:
                    probe[i] -= 1
                    if tuple(probe) in found:
                        p += 1
                    else:
                        break
                pairing = sum(beta[j] * cartan[j][i] for j in range(rank))
                q = p - pairing
                if q > 0:
                    cand = tuple(c + (k == i) for k, c in enumerate(beta))
                    if cand not in found:
                        found.add(cand)
                        nxt.append(cand)
        nxt.sort(reverse=True)
        ordered.extend(nxt)
        layer = nxt
    return RootSystem(
        type_letter=letter,
        rank=rank,
        cartan_matrix=cartan,
        positive_roots=tuple(ordered),
        euclidean_simple_roots=tuple(tuple(s) for s in simple),
    )


@dataclass(frozen=True)
class ExponentData:
    heights: dict[Root, int]
    b: tuple[int, ...]
    exponents: tuple[int, ...]
    degrees: tuple[int, ...]
    coxeter_number: int

    def roots_of_height(self, j: int) -> list[Root]:
        return [a for a, h in self.heights.items() if h == j]


def exponent_data(rs: RootSystem) -> ExponentData:
    """Heights, height counts ``b_j`` and exponents of ``rs``.

    The multiplicity of ``j`` as an exponent is ``b_j - b_{j+1}``.
    """
    heights = {a: height(a) for a in rs.positive_roots}
    top = max(heights.values())
    b = tuple(sum(1 for h in heights.values() if h == j) for j in range(1, top + 1))
    exps: list[int] = []
    for j in range(1, top + 1):
        mult = b[j - 1] - (b[j] if j < top else 0)
        exps.extend([j] * mult)
    exps.sort()
    return ExponentData(
        heights=heights,
        b=b,
        exponents=tuple(exps),
        degrees=tuple(m + 1 for m in exps),
        coxeter_number=top + 1,
    )


@dataclass(frozen=True)
class ShephardToddReport:
    ok: bool
    sum_exponents: int
    n_positive_roots: int
    half_dim_minus_rank: int


def verify_shephard_todd(ed: ExponentData, rs: RootSystem) -> ShephardToddReport:
    s = sum(ed.exponents)
    npos = len(rs.positive_roots)
    dim = rs.dimension
    half = (dim - rs.rank) // 2
    return ShephardToddReport(
        ok=(s == npos == half and (dim - rs.rank) % 2 == 0),
        sum_exponents=s,
        n_positive_roots=npos,
        half_dim_minus_rank=half,
    )


def conjugate_partition(parts: Iterable[int]) -> tuple[int, ...]:
    parts = sorted((p for p in parts if p > 0), reverse=True)
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p >= i) for i in range(1, parts[0] + 1))


def partitions_conjugate(ed: ExponentData) -> bool:
    """True iff the height counts ``b`` are the conjugate of the exponents."""
    return conjugate_partition(ed.exponents) == tuple(ed.b)


def root_span(rs: RootSystem, simple_subset: Iterable[int | Root]) -> frozenset[Root]:
    """Roots supported on the given simple roots (indices or unit vectors)."""
    idx = set()
    for s in simple_subset:
        if isinstance(s, int):
            if not 0 <= s < rs.rank:
                raise ValueError(f"simple root index {s} out of range for {rs.name}")
            idx.add(s)
        else:
            s = tuple(s)
            if s not in rs.simple_roots:
                raise ValueError(f"{s} is not a simple root of {rs.name}")
            idx.add(s.index(1))
    return frozenset(
        a for a in rs.roots if all(c == 0 for k, c in enumerate(a) if k not in idx))


def validate_closed_subset(rs: RootSystem, subset: Iterable[Root]) -> bool:
    """Closed under negation and under addition whenever the sum is a root."""
    sub = frozenset(tuple(a) for a in subset)
    if not sub <= rs.root_set:
        return False
    for a in sub:
        if negate(a) not in sub:
            return False
        for b in sub:
            s = add(a, b)
            if s in rs.root_set and s not in sub:
                return False
    return True
