"""Multivariate division, Buchberger's algorithm and elimination.

The kernel works on plain ``dict`` polynomials (exponent tuple -> mpq) and
monic basis elements.  Reduction keeps the not-yet-processed part of the
dividend in a dict plus a heap of negated order keys, so every step touches
only the terms of the reducer.

Pairs are managed with the Gebauer-Moeller installation of Buchberger's
coprime and chain criteria and processed by the sugar flavour of the normal
strategy (smallest sugar degree, then smallest lcm).
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from gmpy2 import mpq

from .errors import BudgetExceeded, ComputationError, RingMismatchError
from .polyring import (INHOMOGENEOUS, Monomial, PolyRing, Polynomial, monomial_divides,
                       monomial_lcm, weighted_degree)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10_000_000


class StepCounter:
    """Counts reduction steps and enforces a budget (``None`` means unlimited)."""

    def __init__(self, budget: int | None = DEFAULT_BUDGET):
        self.budget = budget
        self.steps = 0

    def tick(self, n: int = 1) -> None:
        self.steps += n
        if self.budget is not None and self.steps > self.budget:
            raise BudgetExceeded(self.steps, self.budget)


def _counter(budget) -> StepCounter:
    if isinstance(budget, StepCounter):
        return budget
    if budget is False:
        return StepCounter(None)
    return StepCounter(DEFAULT_BUDGET if budget is None else budget)


def _mask(m: Monomial) -> int:
    bits = 0
    for i, e in enumerate(m):
        if e:
            bits |= 1 << i
    return bits


class _Reducers:
    """Monic reducer set: leading monomials, support masks and tails."""

    __slots__ = ("lms", "masks", "tails")

    def __init__(self):
        self.lms: list[Monomial] = []
        self.masks: list[int] = []
        self.tails: list[list[tuple[Monomial, mpq]]] = []

    def add(self, lm: Monomial, tail: list[tuple[Monomial, mpq]]) -> None:
        self.lms.append(lm)
        self.masks.append(_mask(lm))
        self.tails.append(tail)

    def find(self, m: Monomial) -> int:
        mm = _mask(m)
        lms = self.lms
        for j, mk in enumerate(self.masks):
            if mk & ~mm:
                continue
            for a, b in zip(lms[j], m):
                if a > b:
                    break
            else:
                return j
        return -1


def _sorted_terms(d: dict, ring: PolyRing) -> list[tuple[Monomial, mpq]]:
    key = ring.key
    return sorted(d.items(), key=lambda t: key(t[0]), reverse=True)


def _reduce(p: dict, red: _Reducers, ring: PolyRing, counter: StepCounter,
            full: bool = True) -> dict:
    """Reduce ``p`` (consumed) modulo ``red``; return the remainder as a dict.

    With ``full=False`` only the leading term is reduced (top reduction).
    """
    nk = ring.neg_key
    heap = [(nk(m), m) for m in p]
    heapq.heapify(heap)
    rem: dict = {}
    lms, tails = red.lms, red.tails
    while heap:
        _, m = heapq.heappop(heap)
        c = p.pop(m, None)
        if c is None:
            continue
        j = red.find(m)
        if j < 0:
            rem[m] = c
            if not full:
                rem.update(p)
                return rem
            continue
        counter.tick()
        q = tuple([a - b for a, b in zip(m, lms[j])])
        for tm, tc in tails[j]:
            mm = tuple([a + b for a, b in zip(q, tm)])
            old = p.get(mm)
            if old is None:
                p[mm] = -c * tc
                heapq.heappush(heap, (nk(mm), mm))
            else:
                s = old - c * tc
                if s:
                    p[mm] = s
                else:
                    del p[mm]
    return rem


def _monic_dict(d: dict, ring: PolyRing) -> tuple[Monomial, list[tuple[Monomial, mpq]]]:
    terms = _sorted_terms(d, ring)
    lm, lc = terms[0]
    inv = 1 / lc
    return lm, [(m, c * inv) for m, c in terms[1:]]


def _check_same_ring(polys: Sequence[Polynomial]) -> PolyRing:
    if not polys:
        raise ValueError("need at least one polynomial")
    ring = polys[0].ring
    for p in polys[1:]:
        if p.ring != ring:
            raise RingMismatchError("all polynomials must share one ring")
    return ring


# -- public division API ------------------------------------------------------

def normal_form(p: Polynomial, basis: Sequence[Polynomial], *, budget=None) -> Polynomial:
    """Remainder of multivariate division of ``p`` by ``basis`` (in list order).

    When ``basis`` is a Groebner basis the result is the unique normal form.
    """
    basis = [b for b in basis if b]
    for b in basis:
        if b.ring != p.ring:
            raise RingMismatchError("normal_form: ring/order mismatch")
    if not p or not basis:
        return p
    ring = p.ring
    red = _Reducers()
    for b in basis:
        lm, tail = _monic_dict(b.as_dict(), ring)
        red.add(lm, tail)
    rem = _reduce(p.as_dict(), red, ring, _counter(budget))
    return Polynomial(ring, rem, _trusted=True)


def divide(p: Polynomial, divisors: Sequence[Polynomial]) -> tuple[list[Polynomial], Polynomial]:
    """Division with quotients: ``p = sum(q_i * d_i) + r``."""
    ring = p.ring
    for d in divisors:
        if d.ring != ring:
            raise RingMismatchError("divide: ring mismatch")
        if not d:
            raise ZeroDivisionError("division by the zero polynomial")
    lead = [(d.lm, d.lc) for d in divisors]
    quots: list[dict] = [{} for _ in divisors]
    rem: dict = {}
    work = p
    while work:
        m, c = work.terms[0]
        for i, (lm, lc) in enumerate(lead):
            if monomial_divides(lm, m):
                q = tuple(a - b for a, b in zip(m, lm))
                coef = c / lc
                quots[i][q] = quots[i].get(q, mpq(0)) + coef
                work = work - divisors[i].mul_monomial(q, coef)
                break
        else:
            rem[m] = c
            work = work - Polynomial(ring, {m: c}, _trusted=True)
    return [Polynomial(ring, q) for q in quots], Polynomial(ring, rem)


def divide_exact(p: Polynomial, d: Polynomial) -> Polynomial:
    """Quotient ``p / d``; raises if ``d`` does not divide ``p``."""
    (q,), r = divide(p, [d])
    if r:
        raise ComputationError(f"{d} does not divide {p}")
    return q


# -- Buchberger ------------------------------------------------------------------

@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis; elements are monic and sorted by increasing leading term."""

    ring: PolyRing
    elements: tuple[Polynomial, ...]
    steps: int = field(default=0, compare=False)

    @property
    def order(self):
        return self.ring.order

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def leading_monomials(self) -> list[Monomial]:
        return [g.lm for g in self.elements]

    def primitive(self) -> list[Polynomial]:
        return [g.primitive() for g in self.elements]

    def reduce(self, p: Polynomial, *, budget=None) -> Polynomial:
        return normal_form(p, self.elements, budget=budget)

    def contains(self, p: Polynomial) -> bool:
        return not self.reduce(p)

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0].is_constant()

    def is_zero(self) -> bool:
        return not self.elements


@dataclass
class _Elem:
    lm: Monomial
    tail: list
    sugar: int
    mask: int


def _wdeg(m: Monomial, w) -> int:
    return sum(a * b for a, b in zip(m, w))


def buchberger(gens: Sequence[Polynomial], order=None, *, budget=None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    ``order`` optionally replaces the ring's term order; the returned basis
    lives over the re-ordered ring.
    """
    gens = list(gens)
    ring = _check_same_ring(gens)
    if order is not None:
        ring = ring.with_order(order)
        gens = [Polynomial(ring, g.as_dict(), _trusted=True) for g in gens]
    counter = _counter(budget)
    w = ring.weights
    homogeneous = all(weighted_degree(g) != INHOMOGENEOUS for g in gens if g)

    elems: list[_Elem] = []
    active: list[int] = []
    red = _Reducers()          # reducers mirror ``active`` lazily; rebuilt on removal
    pairs: list = []           # heap of (sugar, key(lcm), i, j)
    live: set = set()
    key = ring.key

    def rebuild_reducers():
        nonlocal red
        red = _Reducers()
        for k in active:
            red.add(elems[k].lm, elems[k].tail)

    def install(lm, tail, sugar):
        h = len(elems)
        elems.append(_Elem(lm, tail, sugar, _mask(lm)))
        # Gebauer-Moeller update
        cands = [(g, monomial_lcm(lm, elems[g].lm)) for g in active]
        kept = []
        for idx, (g, l) in enumerate(cands):
            coprime = not (elems[h].mask & elems[g].mask)
            if coprime:
                kept.append((g, l, True))
                continue
            redundant = False
            for g2, l2 in cands[idx + 1:]:
                if monomial_divides(l2, l):
                    redundant = True
                    break
            if not redundant:
                for g2, l2, _ in kept:
                    if monomial_divides(l2, l):
                        redundant = True
                        break
            if not redundant:
                kept.append((g, l, False))
        # drop old pairs killed by the chain criterion through the new element
        for pr in list(live):
            i, j = pr
            lij = monomial_lcm(elems[i].lm, elems[j].lm)
            if monomial_divides(lm, lij):
                if monomial_lcm(elems[i].lm, lm) != lij and monomial_lcm(elems[j].lm, lm) != lij:
                    live.discard(pr)
        for g, l, coprime in kept:
            if coprime:
                continue
            e = elems[g]
            sug = max(e.sugar + _wdeg(l, w) - _wdeg(e.lm, w), sugar + _wdeg(l, w) - _wdeg(lm, w))
            pr = (g, h)
            live.add(pr)
            heapq.heappush(pairs, (sug, key(l), g, h))
        before = len(active)
        active[:] = [g for g in active if not monomial_divides(lm, elems[g].lm)]
        active.append(h)
        if len(active) != before + 1:
            rebuild_reducers()
        else:
            red.add(lm, tail)

    # seed with the (inter-reduced-on-the-fly) input
    for g in sorted((g for g in gens if g), key=lambda p: key(p.lm)):
        d = _reduce(g.as_dict(), red, ring, counter)
        if not d:
            continue
        lm, tail = _monic_dict(d, ring)
        sugar = max(_wdeg(m, w) for m in d)
        install(lm, tail, sugar)
        if not any(lm):
            break

    while pairs:
        sug, _, i, j = heapq.heappop(pairs)
        if (i, j) not in live:
            continue
        live.discard((i, j))
        a, b = elems[i], elems[j]
        l = monomial_lcm(a.lm, b.lm)
        qa = tuple(x - y for x, y in zip(l, a.lm))
        qb = tuple(x - y for x, y in zip(l, b.lm))
        s: dict = {}
        for m, c in a.tail:
            s[tuple([x + y for x, y in zip(m, qa)])] = c
        for m, c in b.tail:
            mm = tuple([x + y for x, y in zip(m, qb)])
            v = s.get(mm)
            if v is None:
                s[mm] = -c
            else:
                v = v - c
                if v:
                    s[mm] = v
                else:
                    del s[mm]
        counter.tick()
        r = _reduce(s, red, ring, counter)
        if not r:
            continue
        if homogeneous and len({_wdeg(m, w) for m in r}) != 1:
            raise ComputationError("homogeneity lost during reduction (kernel invariant broken)")
        lm, tail = _monic_dict(r, ring)
        install(lm, tail, sug)
        if not any(lm):
            # unit ideal
            break

    return _interreduce(ring, [elems[k] for k in active], counter)


def _interreduce(ring: PolyRing, basis: list[_Elem], counter: StepCounter) -> GroebnerBasis:
    key = ring.key
    if any(not any(e.lm) for e in basis):
        return GroebnerBasis(ring, (ring.one,), counter.steps)
    # minimal basis: drop elements whose leading monomial is divisible by another's
    basis = sorted(basis, key=lambda e: key(e.lm))
    minimal: list[_Elem] = []
    for e in basis:
        if not any(monomial_divides(f.lm, e.lm) for f in minimal):
            minimal.append(e)
    out: list[Polynomial] = []
    for idx, e in enumerate(minimal):
        red = _Reducers()
        for k, f in enumerate(minimal):
            if k != idx:
                red.add(f.lm, f.tail)
        tail = _reduce(dict(e.tail), red, ring, counter)
        d = dict(tail)
        d[e.lm] = mpq(1)
        out.append(Polynomial(ring, d, _trusted=True))
    return GroebnerBasis(ring, tuple(out), counter.steps)


def groebner_basis(gens: Sequence[Polynomial], *, budget=None) -> GroebnerBasis:
    return buchberger(gens, budget=budget)


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    l = monomial_lcm(f.lm, g.lm)
    qf = tuple(a - b for a, b in zip(l, f.lm))
    qg = tuple(a - b for a, b in zip(l, g.lm))
    return f.mul_monomial(qf, 1 / f.lc) - g.mul_monomial(qg, 1 / g.lc)


def is_groebner_basis(basis: Sequence[Polynomial]) -> bool:
    """Direct check: every pairwise S-polynomial reduces to zero."""
    basis = [b for b in basis if b]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if normal_form(s_polynomial(basis[i], basis[j]), basis, budget=False):
                return False
    return True


def is_reduced(basis: Sequence[Polynomial]) -> bool:
    for i, g in enumerate(basis):
        if g.lc != 1:
            return False
        for j, h in enumerate(basis):
            if i != j and any(monomial_divides(h.lm, m) for m, _ in g.terms):
                return False
    return True


# -- elimination ----------------------------------------------------------------

def elimination_ring(ring: PolyRing, kill: Iterable[str]) -> tuple[PolyRing, list[str], list[str]]:
    """Ring with the killed variables moved to a leading ``wp`` block."""
    kill = list(dict.fromkeys(kill))
    for v in kill:
        ring.index(v)
    keep = [v for v in ring.vars if v not in kill]
    if not keep:
        raise ValueError("elimination must retain at least one variable")
    names = kill + keep
    weights = [ring.weights[ring.index(v)] for v in names]
    if not kill:
        return PolyRing(tuple(names), tuple(weights), ring.order), kill, keep
    return PolyRing(tuple(names), tuple(weights), (("wp", len(kill)), ("wp", len(keep)))), kill, keep


def _transport(p: Polynomial, ring: PolyRing) -> Polynomial:
    """Move ``p`` to a ring over the same variable set (possibly permuted/reordered)."""
    perm = [p.ring.index(v) for v in ring.vars]
    return Polynomial(ring, {tuple(m[i] for i in perm): c for m, c in p.as_dict().items()},
                      _trusted=True)


def eliminate_polys(gens: Sequence[Polynomial], kill: Iterable[str], *,
                    keep_order=None, budget=None) -> tuple[PolyRing, list[Polynomial]]:
    """Generators of ``(gens) ∩ QQ[retained]`` as polynomials over the retained ring."""
    gens = [g for g in gens if g]
    if not gens:
        raise ValueError("eliminate needs a ring; use an Ideal for the zero ideal")
    ring = _check_same_ring(gens)
    ering, kill, keep = elimination_ring(ring, kill)
    target = ring.subring(keep, keep_order)
    gb = buchberger([_transport(g, ering) for g in gens], budget=budget)
    k = len(kill)
    out = []
    for g in gb.elements:
        if all(not any(m[:k]) for m, _ in g.terms):
            out.append(Polynomial(target, {m[k:]: c for m, c in g.as_dict().items()},
                                  _trusted=True))
    return target, out


def _as_ideal(I):
    from .ideals import Ideal

    if isinstance(I, Ideal):
        return I
    gens = list(I)
    return Ideal(_check_same_ring(gens), gens)


def eliminate(I, kill: Iterable[str], *, budget=None):
    """Elimination ideal of ``I`` (an Ideal or a list of polynomials) onto the retained variables."""
    from .ideals import Ideal

    I = _as_ideal(I)
    kill = list(kill)
    keep = [v for v in I.ring.vars if v not in kill]
    if not keep:
        raise ValueError("elimination must retain at least one variable")
    gens = [g for g in I.gens if g]
    if not gens:
        return Ideal(I.ring.subring(keep), [])
    target, out = eliminate_polys(gens, kill, budget=budget)
    return Ideal(target, out)


def membership(p: Polynomial, I, *, budget=None) -> bool:
    I = _as_ideal(I)
    if p.ring != I.ring:
        raise RingMismatchError("membership: ring mismatch")
    return I.contains(p, budget=budget)
