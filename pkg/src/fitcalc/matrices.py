"""Polynomial matrices: determinants, minor ideals and Jacobians."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .errors import ComputationError, RingMismatchError
from .germ import MapGerm
from .groebner import divide_exact
from .ideals import Ideal
from .polyring import Polynomial, PolyRing, derivative


@dataclass(frozen=True)
class PolyMatrix:
    ring: PolyRing
    rows: int
    cols: int
    entries: tuple[Polynomial, ...]  # row-major

    def __post_init__(self):
        entries = tuple(self.ring(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if self.rows < 0 or self.cols < 0 or len(entries) != self.rows * self.cols:
            raise ValueError("entry count must equal rows * cols")

    @classmethod
    def from_rows(cls, ring: PolyRing, rows: Sequence[Sequence]) -> "PolyMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(ring, len(rows), ncols, tuple(ring(e) for r in rows for e in r))

    @classmethod
    def identity(cls, ring: PolyRing, n: int) -> "PolyMatrix":
        return cls.from_rows(ring, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Polynomial:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Polynomial]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def to_rows(self) -> list[list[Polynomial]]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix.from_rows(self.ring, list(map(list, zip(*self.to_rows()))))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix.from_rows(self.ring, [[self[i, j] for j in cols] for i in rows])

    def swap_rows(self, a: int, b: int) -> "PolyMatrix":
        r = self.to_rows()
        r[a], r[b] = r[b], r[a]
        return PolyMatrix.from_rows(self.ring, r)

    def add_row_multiple(self, target: int, source: int, factor: Polynomial) -> "PolyMatrix":
        r = self.to_rows()
        r[target] = [a + factor * b for a, b in zip(r[target], r[source])]
        return PolyMatrix.from_rows(self.ring, r)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return PolyMatrix(self.ring, self.rows, self.cols,
                          tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, p: Polynomial) -> "PolyMatrix":
        return PolyMatrix(self.ring, self.rows, self.cols, tuple(p * e for e in self.entries))

    def format(self, style: str = "compact") -> str:
        """One bracketed row per line with aligned columns."""
        cells = [[e.to_str(style) for e in row] for row in self.to_rows()]
        widths = [max((len(r[j]) for r in cells), default=0) for j in range(self.cols)]
        return "\n".join(
            "[" + ", ".join(c.rjust(w) for c, w in zip(r, widths)) + "]" for r in cells)

    def __str__(self) -> str:
        return self.format()


class _MinorCache:
    """Laplace expansion along the top row with memoisation over (rows, cols) subsets."""

    def __init__(self, M: PolyMatrix):
        self.M = M
        self.memo: dict[tuple[tuple[int, ...], tuple[int, ...]], Polynomial] = {}

    def det(self, rows: tuple[int, ...], cols: tuple[int, ...]) -> Polynomial:
        if not rows:
            return self.M.ring.one
        key = (rows, cols)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        M = self.M
        if len(rows) == 1:
            val = M[rows[0], cols[0]]
        else:
            val = M.ring.zero
            r0, rest = rows[0], rows[1:]
            for k, c in enumerate(cols):
                e = M[r0, c]
                if not e:
                    continue
                sub = self.det(rest, cols[:k] + cols[k + 1:])
                if sub:
                    val = val + e * sub if k % 2 == 0 else val - e * sub
        self.memo[key] = val
        return val


def determinant(M: PolyMatrix, method: str = "laplace") -> Polynomial:
    if M.rows != M.cols:
        raise ComputationError("determinant of a non-square matrix")
    if method == "bareiss":
        return _bareiss(M)
    if method != "laplace":
        raise ValueError(f"unknown determinant method {method!r}")
    return _MinorCache(M).det(tuple(range(M.rows)), tuple(range(M.cols)))


def _bareiss(M: PolyMatrix) -> Polynomial:
    """Fraction-free Gaussian elimination with exact polynomial division."""
    n = M.rows
    a = M.to_rows()
    ring = M.ring
    sign = 1
    prev = ring.one
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return ring.zero
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = divide_exact(num, prev) if not prev.is_constant() else num.scale(1 / prev.constant_term())
            a[i][k] = ring.zero
        prev = a[k][k]
    d = a[n - 1][n - 1] if n else ring.one
    return d if sign > 0 else -d


def minors(M: PolyMatrix, k: int) -> list[Polynomial]:
    """All ``k x k`` minors (zero minors dropped), in lexicographic subset order."""
    if k == 0:
        return [M.ring.one]
    if k > min(M.rows, M.cols):
        return []
    zero_rows = {i for i in range(M.rows) if not any(M.row(i))}
    zero_cols = {j for j in range(M.cols) if not any(M[i, j] for i in range(M.rows))}
    rows_ok = [i for i in range(M.rows) if i not in zero_rows]
    cols_ok = [j for j in range(M.cols) if j not in zero_cols]
    cache = _MinorCache(M)
    out = []
    for rs in combinations(rows_ok, k):
        for cs in combinations(cols_ok, k):
            d = cache.det(rs, cs)
            if d:
                out.append(d)
    return out


def minors_ideal(M: PolyMatrix, k: int) -> Ideal:
    """Ideal of ``k x k`` minors; ``(1)`` for ``k = 0`` and ``(0)`` beyond the matrix size."""
    if k < 0:
        raise ValueError("minor size must be non-negative")
    seen = set()
    gens = []
    for d in minors(M, k):
        p = d.primitive()
        if p not in seen:
            seen.add(p)
            gens.append(d)
    return Ideal(M.ring, gens)


def jacobian_matrix(polys: Sequence[Polynomial]) -> PolyMatrix:
    polys = list(polys)
    if not polys:
        raise ValueError("jacobian of an empty list")
    ring = polys[0].ring
    if any(p.ring != ring for p in polys):
        raise RingMismatchError("jacobian: polynomials over different rings")
    return PolyMatrix.from_rows(ring, [[derivative(p, v) for v in ring.vars] for p in polys])


def ramification_ideal(f: MapGerm) -> Ideal:
    """Ideal of maximal (``n x n``) minors of the differential of ``f``."""
    if len(f.components) != f.n + 1:
        raise ComputationError("ramification ideal needs n+1 components in n variables")
    return minors_ideal(jacobian_matrix(f.components), f.n)


def hypersurface_jacobian(h: Polynomial) -> Ideal:
    """``(dh/dY_1, ..., dh/dY_{n+1})``; ``h`` itself is not adjoined."""
    if not h:
        raise ComputationError("jacobian ideal of the zero polynomial")
    return Ideal(h.ring, [derivative(h, v) for v in h.ring.vars])
