"""Ideals with cached Groebner bases and the ideal-level operators built on them."""

from __future__ import annotations

import threading
from typing import Iterable, Sequence

from .errors import ComputationError, RingMismatchError
from .groebner import (GroebnerBasis, buchberger, divide_exact, eliminate_polys,
                       eliminate, membership)
from .polyring import PolyRing, Polynomial, RingMap, apply_map

__all__ = [
    "Ideal", "ideal_sum", "ideal_product", "ideal_power", "ideal_intersect",
    "ideal_quotient", "quotient_mod", "preimage", "ideal_equal", "specialize",
    "is_nonzerodivisor_mod", "eliminate", "membership",
]


def _dedup(polys: Iterable[Polynomial]) -> list[Polynomial]:
    seen = set()
    out = []
    for p in polys:
        if not p:
            continue
        q = p.primitive()
        if q not in seen:
            seen.add(q)
            out.append(p)
    return out


class Ideal:
    """Finitely generated ideal of a :class:`PolyRing`.

    The reduced Groebner basis (w.r.t. the ring's order) is computed on first
    use and cached; computation happens at most once per instance.
    """

    def __init__(self, ring: PolyRing, gens: Iterable[Polynomial | str] = ()):
        self.ring = ring
        out = []
        for g in gens:
            g = ring(g)
            if g:
                out.append(g)
        self.gens: tuple[Polynomial, ...] = tuple(out)
        self._gb: GroebnerBasis | None = None
        self._lock = threading.Lock()

    @classmethod
    def unit(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, [ring.one])

    @classmethod
    def zero(cls, ring: PolyRing) -> "Ideal":
        return cls(ring, [])

    @classmethod
    def parse(cls, ring: PolyRing, texts: Iterable[str]) -> "Ideal":
        return cls(ring, [ring.parse(t) for t in texts])

    # -- Groebner machinery -------------------------------------------------------
    def gb(self, *, budget=None) -> GroebnerBasis:
        if self._gb is None:
            with self._lock:
                if self._gb is None:
                    if self.gens:
                        self._gb = buchberger(self.gens, budget=budget)
                    else:
                        self._gb = GroebnerBasis(self.ring, ())
        return self._gb

    def contains(self, p: Polynomial | str, *, budget=None) -> bool:
        p = self.ring(p)
        if not p:
            return True
        gb = self.gb(budget=budget)
        if gb.is_zero():
            return False
        return not gb.reduce(p, budget=budget)

    def __contains__(self, p) -> bool:
        return self.contains(p)

    def contains_ideal(self, other: "Ideal", *, budget=None) -> bool:
        _same(self, other)
        return all(self.contains(g, budget=budget) for g in other.gens)

    def equals(self, other: "Ideal", *, budget=None) -> bool:
        return ideal_equal(self, other, budget=budget)

    def is_unit(self, *, budget=None) -> bool:
        return self.gb(budget=budget).is_unit()

    def is_zero(self) -> bool:
        return not self.gens

    def reduced_gens(self, *, budget=None) -> list[Polynomial]:
        """Reduced Groebner basis with integer-primitive generators."""
        return self.gb(budget=budget).primitive()

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def variables(self) -> set[str]:
        used: set[str] = set()
        for g in self.gens:
            used |= g.variables()
        return used

    def map(self, m: RingMap) -> "Ideal":
        """Image of the generators under ``m`` (the extended ideal)."""
        if m.source != self.ring:
            raise RingMismatchError("ring map source mismatch")
        return Ideal(m.dest, [apply_map(m, g) for g in self.gens])

    def __add__(self, other: "Ideal") -> "Ideal":
        return ideal_sum(self, other)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return ideal_product(self, other)

    def __pow__(self, k: int) -> "Ideal":
        return ideal_power(self, k)

    def __len__(self) -> int:
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def __repr__(self) -> str:
        return f"Ideal({', '.join(g.to_str() for g in self.gens)})"


def _same(I: Ideal, J: Ideal) -> None:
    if I.ring != J.ring:
        raise RingMismatchError(f"ideals over different rings: {I.ring.vars} vs {J.ring.vars}")


# -- generator-level operators ----------------------------------------------------

def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    _same(I, J)
    return Ideal(I.ring, _dedup(I.gens + J.gens))


def ideal_product(I: Ideal, J: Ideal) -> Ideal:
    _same(I, J)
    return Ideal(I.ring, _dedup(a * b for a in I.gens for b in J.gens))


def ideal_power(I: Ideal, k: int) -> Ideal:
    if not isinstance(k, int) or k < 0:
        raise ValueError("ideal power needs a non-negative integer exponent")
    if k == 0:
        return Ideal.unit(I.ring)
    out = I
    for _ in range(k - 1):
        out = ideal_product(out, I)
    return out


# -- Groebner-based operators -----------------------------------------------------

def _fresh(name: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    while name in taken:
        name += "_"
    return name


def ideal_intersect(I: Ideal, J: Ideal, *, budget=None) -> Ideal:
    """``I ∩ J`` by eliminating a tag variable ``t`` from ``t·I + (1-t)·J``."""
    _same(I, J)
    ring = I.ring
    if I.is_zero() or J.is_zero():
        return Ideal.zero(ring)
    if I.is_unit(budget=budget):
        return Ideal(ring, J.gens)
    if J.is_unit(budget=budget):
        return Ideal(ring, I.gens)
    t = _fresh("t", ring.vars)
    tring = PolyRing((t,) + ring.vars, (1,) + ring.weights, (("wp", 1),) + tuple(ring.order))

    def lift(p: Polynomial) -> Polynomial:
        return Polynomial(tring, {(0,) + m: c for m, c in p.as_dict().items()}, _trusted=True)

    tv = tring.var(t)
    one_minus_t = tring.one - tv
    gens = [tv * lift(g) for g in I.gb(budget=budget).elements]
    gens += [one_minus_t * lift(g) for g in J.gb(budget=budget).elements]
    gb = buchberger(gens, budget=budget)
    out = [Polynomial(ring, {m[1:]: c for m, c in g.as_dict().items()}, _trusted=True)
           for g in gb.elements if all(m[0] == 0 for m, _ in g.terms)]
    return Ideal(ring, out)


def _quotient_by_element(I: Ideal, g: Polynomial, *, budget=None) -> Ideal:
    ring = I.ring
    if I.contains(g, budget=budget):
        return Ideal.unit(ring)
    if g.is_constant():
        return Ideal(ring, I.gens)
    inter = ideal_intersect(I, Ideal(ring, [g]), budget=budget)
    return Ideal(ring, [divide_exact(p, g) for p in inter.gens])


def ideal_quotient(I: Ideal, J: Ideal, *, budget=None) -> Ideal:
    """``(I : J) = {b : b·J ⊆ I}`` as the intersection of the ``(I : g)``, ``g`` in ``J``."""
    _same(I, J)
    if J.is_zero():
        raise ComputationError("ideal quotient by the zero ideal")
    ring = I.ring
    if I.is_unit(budget=budget):
        return Ideal.unit(ring)
    gens = J.gb(budget=budget).elements if len(J.gens) > 1 else J.gens
    result: Ideal | None = None
    for g in gens:
        q = _quotient_by_element(I, g, budget=budget)
        result = q if result is None else ideal_intersect(result, q, budget=budget)
    return Ideal(ring, result.gb(budget=budget).elements)


def quotient_mod(I: Ideal, J: Ideal, h: Polynomial | Ideal, *, budget=None) -> Ideal:
    """Quotient taken in ``R/(h)``, returned as its lift ``((I + (h)) : J)`` to ``R``."""
    H = h if isinstance(h, Ideal) else Ideal(I.ring, [h])
    return ideal_quotient(ideal_sum(I, H), J, budget=budget)


def _bare_variables(m: RingMap) -> dict[int, int]:
    """Source index -> dest index for images that are a single dest variable."""
    out: dict[int, int] = {}
    used: set[int] = set()
    for i, img in enumerate(m.images):
        if len(img) == 1 and img.lc == 1 and sum(img.lm) == 1:
            j = img.lm.index(1)
            if j not in used:
                out[i] = j
                used.add(j)
    return out


def preimage(m: RingMap, J: Ideal, *, budget=None) -> Ideal:
    """``m^{-1}(J)`` for ``m: source -> dest`` and ``J`` an ideal of ``dest``.

    Eliminates the ``dest`` variables from ``J + (s_i - m(s_i))`` in the
    joined ring ordered with the ``dest`` block first.  A dest variable that
    is the image of some ``s_i`` is substituted by ``s_i`` instead of being
    eliminated.
    """
    if J.ring != m.dest:
        raise RingMismatchError("preimage: ideal is not over the map's destination ring")
    src, dst = m.source, m.dest
    bare = _bare_variables(m)
    solved = {j: i for i, j in bare.items()}
    kept = [j for j in range(dst.nvars) if j not in solved]
    dnames: list[str] = []
    for j in kept:
        dnames.append(_fresh(dst.vars[j], list(src.vars) + dnames))
    k = len(kept)
    ns = src.nvars
    if k:
        joined = PolyRing(tuple(dnames) + src.vars, tuple(dst.weights[j] for j in kept) + src.weights,
                          (("wp", k), ("wp", ns)))
    else:
        joined = PolyRing(src.vars, src.weights, src.order)
    slot = {j: pos for pos, j in enumerate(kept)}

    def from_dest(p: Polynomial) -> Polynomial:
        out: dict = {}
        for mm, c in p.as_dict().items():
            e = [0] * (k + ns)
            for j, a in enumerate(mm):
                if a:
                    e[slot[j] if j in slot else k + solved[j]] += a
            e = tuple(e)
            out[e] = out.get(e, 0) + c
        return Polynomial(joined, out)

    gens = [from_dest(g) for g in J.gens]
    for i, img in enumerate(m.images):
        if i in bare:
            continue
        s = [0] * (k + ns)
        s[k + i] = 1
        gens.append(joined.monomial(s) - from_dest(img))
    gens = [g for g in gens if g]
    if not gens:
        return Ideal.zero(src)
    gb = buchberger(gens, budget=budget)
    out = [Polynomial(src, {mm[k:]: c for mm, c in g.as_dict().items()}, _trusted=True)
           for g in gb.elements if all(not any(mm[:k]) for mm, _ in g.terms)]
    return Ideal(src, out)


def ideal_equal(I: Ideal, J: Ideal, *, budget=None) -> bool:
    _same(I, J)
    return I.contains_ideal(J, budget=budget) and J.contains_ideal(I, budget=budget)


def specialize(I: Ideal, vars_to_zero: Iterable[str]) -> Ideal:
    """Set the listed variables to zero; the result lives over the remaining variables."""
    ring = I.ring
    kill = list(dict.fromkeys(vars_to_zero))
    for v in kill:
        ring.index(v)
    if not kill:
        return Ideal(ring, I.gens)
    keep = [v for v in ring.vars if v not in kill]
    if not keep:
        raise ValueError("cannot specialise every variable")
    target = ring.subring(keep)
    kidx = [ring.index(v) for v in kill]
    pos = [ring.index(v) for v in keep]
    out = []
    for g in I.gens:
        d = {}
        for mon, c in g.as_dict().items():
            if any(mon[i] for i in kidx):
                continue
            d[tuple(mon[i] for i in pos)] = c
        if d:
            out.append(Polynomial(target, d, _trusted=True))
    return Ideal(target, out)


def is_nonzerodivisor_mod(a: Polynomial, h: Polynomial, *, budget=None) -> bool:
    """True iff ``a`` is a nonzerodivisor of ``R/(h)``, i.e. ``((h) : (a)) == (h)``."""
    if not h:
        raise ComputationError("is_nonzerodivisor_mod: h must be nonzero")
    if a.ring != h.ring:
        raise RingMismatchError("ring mismatch")
    H = Ideal(h.ring, [h])
    if not a:
        return False
    return ideal_equal(ideal_quotient(H, Ideal(h.ring, [a]), budget=budget), H, budget=budget)


def ideal_of(ring: PolyRing, texts: Sequence[str]) -> Ideal:
    return Ideal.parse(ring, texts)
