"""Presentation of ``f_* O`` from the multiplication table of the last component.

Over ``QQ[Y_1..Y_n]`` the source ring is free on the standard monomials
``g_0 = 1, g_1, ..., g_r`` of ``Q(f)``; multiplication by ``f_{n+1}`` is a
matrix ``A`` there, and ``lambda = A - Y_{n+1} * Id`` presents ``f_* O`` over
the full target ring.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotFiniteError, PresentationError
from .germ import MapGerm
from .groebner import buchberger, normal_form
from .ideals import Ideal, ideal_equal
from .matrices import PolyMatrix, determinant, minors_ideal
from .polyring import Monomial, PolyRing, Polynomial, monomial_divides


@dataclass(frozen=True)
class MonomialBasis:
    ring: PolyRing
    monomials: tuple[Monomial, ...]

    @property
    def multiplicity(self) -> int:
        return len(self.monomials)

    def polynomials(self) -> list[Polynomial]:
        return [self.ring.monomial(m) for m in self.monomials]

    def __len__(self) -> int:
        return len(self.monomials)


@dataclass(frozen=True)
class Presentation:
    lam: PolyMatrix
    basis: MonomialBasis
    validated: bool
    diagnostic: str = ""

    @property
    def size(self) -> int:
        return self.lam.rows


def standard_monomials(leading: list[Monomial], nvars: int) -> list[Monomial]:
    """Monomials outside the monomial ideal generated by ``leading``.

    Raises :class:`NotFiniteError` when the staircase is infinite.
    """
    bounds = []
    for i in range(nvars):
        pure = [m[i] for m in leading if m[i] and all(e == 0 for j, e in enumerate(m) if j != i)]
        if not pure:
            raise NotFiniteError("map not finite: infinite staircase")
        bounds.append(min(pure))
    out: list[Monomial] = []

    def walk(prefix: list[int]):
        i = len(prefix)
        if i == nvars:
            m = tuple(prefix)
            if not any(monomial_divides(l, m) for l in leading):
                out.append(m)
            return
        for e in range(bounds[i]):
            prefix.append(e)
            # prune: if the partial monomial (rest zero) is already divisible, so is every extension
            part = tuple(prefix) + (0,) * (nvars - i - 1)
            if any(monomial_divides(l, part) for l in leading):
                prefix.pop()
                break
            walk(prefix)
            prefix.pop()

    walk([])
    return out


def qalgebra_basis(f: MapGerm, *, budget=None) -> MonomialBasis:
    """Standard monomials of ``(f_1, ..., f_{n+1})``, increasing, constant first."""
    gb = buchberger(list(f.components), budget=budget)
    if gb.is_unit():
        raise NotFiniteError("components generate the unit ideal")
    mons = standard_monomials(gb.leading_monomials(), f.n)
    key = f.source.key
    return MonomialBasis(f.source, tuple(sorted(mons, key=key)))


def graph_ring(f: MapGerm) -> PolyRing:
    """Source variables followed by ``Y_1..Y_n``, source block eliminated first."""
    tv = f.target.vars[:-1]
    return PolyRing(f.source.vars + tv, f.source.weights + f.target.weights[:-1],
                    (("wp", f.n), ("wp", len(tv))))


def presentation_matrix(f: MapGerm, *, image: Polynomial | None = None, budget=None) -> Presentation:
    """Multiplication-table presentation, validated against the image equation.

    ``image`` may be supplied to skip recomputing it for validation.
    """
    basis = qalgebra_basis(f, budget=budget)
    G = graph_ring(f)
    n = f.n
    k = n  # number of target variables in the graph ring
    zeros_t = (0,) * k

    def up(p: Polynomial) -> Polynomial:
        return Polynomial(G, {m + zeros_t: c for m, c in p.as_dict().items()}, _trusted=True)

    graph = []
    for i in range(k):
        e = [0] * (n + k)
        e[n + i] = 1
        graph.append(G.monomial(e) - up(f.components[i]))
    gb = buchberger(graph, budget=budget)

    index = {m: i for i, m in enumerate(basis.monomials)}
    size = len(basis)
    T = f.target
    last = T.vars[-1]
    rows: list[list[Polynomial]] = []
    for g in basis.monomials:
        nf = normal_form(up(f.components[-1]).mul_monomial(g + zeros_t), gb.elements, budget=budget)
        coeffs = [dict() for _ in range(size)]
        for m, c in nf.as_dict().items():
            src, tgt = m[:n], m[n:]
            j = index.get(src)
            if j is None:
                raise PresentationError(
                    "presentation not obtained: normal form leaves the span of the Q(f) basis")
            coeffs[j][tgt + (0,)] = c
        rows.append([Polynomial(T, d, _trusted=True) for d in coeffs])
    A = PolyMatrix.from_rows(T, rows)
    lam = A - PolyMatrix.identity(T, size).scale(T.var(last))

    if image is None:
        from .pipeline import image_ideal
        image = image_ideal(f, budget=budget)
    det = determinant(lam)
    validated = bool(det) and ideal_equal(Ideal(T, [det]), Ideal(T, [image]), budget=budget)
    diag = "" if validated else "det(lambda) does not generate the image ideal"
    return Presentation(lam, basis, validated, diag)


def fitting_from_presentation(P: Presentation, k: int) -> Ideal:
    """``Fitt_k = I_{(r+1)-k}(lambda)``."""
    if not P.validated:
        raise PresentationError(f"refusing unvalidated presentation: {P.diagnostic}")
    if k < 0:
        raise ValueError("Fitting index must be non-negative")
    return minors_ideal(P.lam, max(P.size - k, 0))
