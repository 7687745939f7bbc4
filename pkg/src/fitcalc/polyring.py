"""Exact multivariate polynomials over QQ with weighted and block term orders.

A :class:`Polynomial` is a sparse map ``exponent tuple -> rational`` attached
to a :class:`PolyRing`.  Rings are cheap value objects; two rings compare
equal when their variables, weights and term order agree.

Term orders are described by a tuple of blocks ``(kind, size)`` where ``kind``
is one of

``"wp"``
    weighted degree, ties broken reverse-lexicographically (Singular's ``wp``)
``"wlex"``
    weighted degree, ties broken lexicographically
``"lex"``
    pure lexicographic

Blocks are compared left to right, so ``(("wp", 2), ("wp", 3))`` is an
elimination order for the first two variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from gmpy2 import mpq, mpz

from .errors import ParseError, RingMismatchError, UnknownVariableError

Monomial = tuple[int, ...]

ORDER_KINDS = ("wp", "wlex", "lex")

INHOMOGENEOUS = "inhomogeneous"


def _coerce_coeff(c) -> mpq:
    if isinstance(c, str):
        return mpq(Fraction(c))
    if isinstance(c, Fraction):
        return mpq(c.numerator, c.denominator)
    return mpq(c)


def _normalize_order(order, nvars: int) -> tuple[tuple[str, int], ...]:
    if isinstance(order, str):
        blocks = ((order, nvars),)
    else:
        blocks = tuple((str(k), int(s)) for k, s in order)
    for kind, size in blocks:
        if kind not in ORDER_KINDS:
            raise ValueError(f"unknown term order kind {kind!r}")
        if size <= 0:
            raise ValueError("order blocks must be non-empty")
    if sum(s for _, s in blocks) != nvars:
        raise ValueError("order blocks must cover every variable exactly once")
    return blocks


def _key_source(blocks, weights, negate: bool) -> str:
    # Build the body of a lambda returning the sort key of an exponent tuple.
    parts: list[str] = []
    sign = "-" if negate else ""
    flip = "" if negate else "-"
    start = 0
    for kind, size in blocks:
        idx = range(start, start + size)
        if kind in ("wp", "wlex"):
            wsum = "+".join(f"{weights[i]}*m[{i}]" for i in idx)
            parts.append(f"{sign}({wsum})")
        if kind == "wp":
            parts.extend(f"{flip}m[{i}]" for i in reversed(idx))
        else:
            parts.extend(f"{sign}m[{i}]" for i in idx)
        start += size
    return "lambda m: (" + ", ".join(parts) + ",)"


@dataclass(frozen=True)
class PolyRing:
    """Polynomial ring QQ[vars] with variable weights and a term order.

    Weights are positive, except that a variable in a ``"lex"`` block may have
    weight 0 (used for tag variables, so tagged ideals stay homogeneous).
    """

    vars: tuple[str, ...]
    weights: tuple[int, ...] = ()
    order: tuple[tuple[str, int], ...] | str = "wp"
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        names = tuple(str(v) for v in self.vars)
        object.__setattr__(self, "vars", names)
        if len(set(names)) != len(names):
            raise ValueError(f"variable names must be unique: {names}")
        weights = tuple(int(w) for w in self.weights) if self.weights else (1,) * len(names)
        if len(weights) != len(names):
            raise ValueError("one weight per variable required")
        if any(w < 0 for w in weights):
            raise ValueError("weights must be strictly positive")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "order", _normalize_order(self.order, len(names)) if names else ())
        if 0 in weights:
            start = 0
            for kind, size in self.order:
                if kind != "lex" and 0 in weights[start:start + size]:
                    raise ValueError("weights must be strictly positive (0 only in lex blocks)")
                start += size
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(names)})

    # -- structure -------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def index(self, var: str) -> int:
        try:
            return self._index[var]
        except KeyError:
            raise UnknownVariableError(f"unknown variable {var!r} in ring {self.vars}") from None

    @cached_property
    def key(self) -> Callable[[Monomial], tuple]:
        """Sort key: ``key(a) > key(b)`` iff ``a`` is larger in the term order."""
        if not self.vars:
            return lambda m: ()
        return eval(_key_source(self.order, self.weights, negate=False))  # noqa: S307

    @cached_property
    def neg_key(self) -> Callable[[Monomial], tuple]:
        """Negated sort key, for use with :mod:`heapq` as a max-heap."""
        if not self.vars:
            return lambda m: ()
        return eval(_key_source(self.order, self.weights, negate=True))  # noqa: S307

    def block_split(self) -> int | None:
        """Size of the leading block when the order has exactly two blocks."""
        if len(self.order) == 2:
            return self.order[0][1]
        return None

    def with_order(self, order) -> "PolyRing":
        return PolyRing(self.vars, self.weights, order)

    def subring(self, names: Sequence[str], order=None) -> "PolyRing":
        weights = tuple(self.weights[self.index(v)] for v in names)
        return PolyRing(tuple(names), weights, order or "wp")

    # -- element construction -------------------------------------------
    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    @property
    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        c = _coerce_coeff(c)
        if c == 0:
            return self.zero
        return Polynomial(self, {(0,) * self.nvars: c}, _trusted=True)

    def monomial(self, exps: Sequence[int], coeff=1) -> "Polynomial":
        exps = tuple(int(e) for e in exps)
        if len(exps) != self.nvars or any(e < 0 for e in exps):
            raise ValueError(f"bad exponent vector {exps} for ring {self.vars}")
        return Polynomial(self, {exps: coeff})

    def var(self, name: str) -> "Polynomial":
        i = self.index(name)
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial(self, {tuple(exps): mpq(1)}, _trusted=True)

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.var(v) for v in self.vars)

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def __call__(self, value) -> "Polynomial":
        if isinstance(value, Polynomial):
            if value.ring != self:
                raise RingMismatchError("polynomial belongs to a different ring")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)

    def weighted_degree_of(self, m: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, m))

    def __repr__(self) -> str:
        return f"PolyRing({self.vars}, weights={self.weights}, order={self.order})"


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients.

    Terms iterate in decreasing term order of the owning ring.
    """

    __slots__ = ("ring", "_terms", "__dict__")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, object] | None = None,
                 *, _trusted: bool = False):
        self.ring = ring
        if _trusted:
            self._terms = terms
            return
        clean: dict[Monomial, mpq] = {}
        n = ring.nvars
        for mon, c in (terms or {}).items():
            mon = tuple(int(e) for e in mon)
            if len(mon) != n or any(e < 0 for e in mon):
                raise ValueError(f"exponent vector {mon} does not fit ring {ring.vars}")
            c = _coerce_coeff(c)
            if c:
                clean[mon] = clean.get(mon, mpq(0)) + c
                if not clean[mon]:
                    del clean[mon]
        self._terms = clean

    # -- views -----------------------------------------------------------
    @cached_property
    def terms(self) -> tuple[tuple[Monomial, mpq], ...]:
        key = self.ring.key
        return tuple(sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True))

    def as_dict(self) -> dict[Monomial, mpq]:
        return dict(self._terms)

    def __iter__(self) -> Iterator[tuple[Monomial, mpq]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coeff(self, mon: Sequence[int]) -> mpq:
        return self._terms.get(tuple(mon), mpq(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    @property
    def lm(self) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return self.terms[0][0]

    @property
    def lc(self) -> mpq:
        if not self._terms:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.terms[0][1]

    def variables(self) -> set[str]:
        used: set[str] = set()
        for mon in self._terms:
            used.update(self.ring.vars[i] for i, e in enumerate(mon) if e)
        return used

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def weighted_degree(self) -> int | str:
        return weighted_degree(self)

    def is_homogeneous(self) -> bool:
        return not self._terms or weighted_degree(self) != INHOMOGENEOUS

    def constant_term(self) -> mpq:
        return self._terms.get((0,) * self.ring.nvars, mpq(0))

    # -- arithmetic --------------------------------------------------------
    def _check(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatchError(f"ring mismatch: {self.ring.vars} vs {other.ring.vars}")
            return other
        if isinstance(other, (int, Fraction, str)) or type(other).__name__ in ("mpq", "mpz"):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m)
            if s is None:
                out[m] = c
            else:
                s = s + c
                if s:
                    out[m] = s
                else:
                    del out[m]
        return Polynomial(self.ring, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not self._terms or not other._terms:
            return self.ring.zero
        out: dict[Monomial, mpq] = {}
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = tuple([x + y for x, y in zip(ma, mb)])
                s = out.get(m)
                out[m] = ca * cb if s is None else s + ca * cb
        return Polynomial(self.ring, {m: c for m, c in out.items() if c}, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = _coerce_coeff(c)
        if not c:
            return self.ring.zero
        return Polynomial(self.ring, {m: v * c for m, v in self._terms.items()}, _trusted=True)

    def mul_monomial(self, mon: Monomial, c=1) -> "Polynomial":
        c = _coerce_coeff(c)
        if not c:
            return self.ring.zero
        return Polynomial(
            self.ring,
            {tuple([x + y for x, y in zip(m, mon)]): v * c for m, v in self._terms.items()},
            _trusted=True,
        )

    # -- normalisation -----------------------------------------------------
    def monic(self) -> "Polynomial":
        if not self._terms:
            return self
        return self.scale(1 / self.lc)

    def primitive(self) -> "Polynomial":
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if not self._terms:
            return self
        den = 1
        for c in self._terms.values():
            den = math.lcm(den, int(c.denominator))
        nums = [int(c.numerator) * (den // int(c.denominator)) for c in self._terms.values()]
        g = math.gcd(*nums)
        scale = mpq(den, g)
        if self.lc < 0:
            scale = -scale
        return self.scale(scale)

    # -- comparison / hashing --------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        try:
            other = self.ring.const(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash((self.ring.vars, frozenset(self._terms.items())))

    # -- printing -----------------------------------------------------------
    def to_str(self, style: str = "caret") -> str:
        """Render as text; ``style`` is ``"caret"`` (``3*x^2*y``) or ``"compact"`` (``3x2y``)."""
        if not self._terms:
            return "0"
        pieces: list[str] = []
        names = self.ring.vars
        for i, (mon, c) in enumerate(self.terms):
            neg = c < 0
            a = -c if neg else c
            factors = []
            for v, e in zip(names, mon):
                if e == 0:
                    continue
                if style == "compact":
                    factors.append(v if e == 1 else f"{v}{e}")
                else:
                    factors.append(v if e == 1 else f"{v}^{e}")
            joiner = "" if style == "compact" else "*"
            mono = joiner.join(factors)
            if a == 1 and mono:
                body = mono
            else:
                cs = str(int(a.numerator)) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
                body = cs + (joiner + mono if mono else "")
            if i == 0:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append(("-" if neg else "+") + body)
        return "".join(pieces)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_str()!r})"

    # -- calculus / substitution -------------------------------------------
    def derivative(self, var: str) -> "Polynomial":
        return derivative(self, var)

    def subs(self, values: Mapping[str, object]) -> "Polynomial":
        """Substitute constants or same-ring polynomials for variables."""
        images = []
        for v in self.ring.vars:
            if v in values:
                images.append(self.ring(values[v]))
            else:
                images.append(self.ring.var(v))
        return apply_map(RingMap(self.ring, self.ring, tuple(images)), self)


@dataclass(frozen=True)
class RingMap:
    """Substitution homomorphism ``source -> dest`` sending source variable i to ``images[i]``.

    For a map germ ``f: (x) -> (Y)`` this is the pullback ``f^*`` with
    ``source`` the target-space ring and ``dest`` the source-space ring.
    """

    source: PolyRing
    dest: PolyRing
    images: tuple[Polynomial, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.source.nvars:
            raise ValueError(
                f"ring map needs {self.source.nvars} images, got {len(images)}")
        for img in images:
            if img.ring != self.dest:
                raise RingMismatchError("ring map image not over the destination ring")

    @classmethod
    def identity(cls, ring: PolyRing) -> "RingMap":
        return cls(ring, ring, ring.gens())

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply_map(self, p)


# -- module-level operations ----------------------------------------------------

def poly_arith(op: str, a: Polynomial, b: Polynomial) -> Polynomial:
    if a.ring != b.ring:
        raise RingMismatchError("ring mismatch")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def derivative(p: Polynomial, var: str) -> Polynomial:
    i = p.ring.index(var)
    out: dict[Monomial, mpq] = {}
    for mon, c in p._terms.items():
        e = mon[i]
        if e:
            out[mon[:i] + (e - 1,) + mon[i + 1:]] = c * e
    return Polynomial(p.ring, out, _trusted=True)


def apply_map(m: RingMap, p: Polynomial) -> Polynomial:
    if p.ring != m.source:
        raise RingMismatchError("polynomial is not over the ring map's source")
    dest = m.dest
    powers: list[dict[int, Polynomial]] = [{0: dest.one, 1: img} for img in m.images]

    def power(i: int, e: int) -> Polynomial:
        cache = powers[i]
        if e not in cache:
            cache[e] = power(i, e // 2) * power(i, e - e // 2)
        return cache[e]

    out: dict[Monomial, mpq] = {}
    for mon, c in p._terms.items():
        term = dest.const(c)
        for i, e in enumerate(mon):
            if e:
                term = term * power(i, e)
                if not term:
                    break
        for tm, tc in term._terms.items():
            s = out.get(tm)
            out[tm] = tc if s is None else s + tc
    return Polynomial(dest, {k: v for k, v in out.items() if v}, _trusted=True)


def weighted_degree(p: Polynomial) -> int | str:
    """Common weighted degree of all terms, or :data:`INHOMOGENEOUS`."""
    if p.is_zero():
        raise ValueError("the zero polynomial has no weighted degree")
    w = p.ring.weights
    degs = {sum(a * b for a, b in zip(w, mon)) for mon in p._terms}
    if len(degs) == 1:
        return degs.pop()
    return INHOMOGENEOUS


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple([x if x > y else y for x, y in zip(a, b)])


# -- parsing ---------------------------------------------------------------------

class _Parser:
    """Recursive-descent parser for ``3*x^2*y - y5 + (a+b)^2`` style input."""

    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.pos = 0
        # longest names first so that ``x1`` wins over ``x`` followed by exponent 1
        self.names = sorted(ring.vars, key=len, reverse=True)

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.text, self.pos)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Polynomial:
        if not self.text.strip():
            raise self.error("empty polynomial")
        p = self.expr()
        if self.peek():
            raise self.error(f"unexpected character {self.peek()!r}")
        return p

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek() in "+-":
            sign = -1 if self.text[self.pos] == "-" else 1
            self.pos += 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek() in ("+", "-") and self.peek():
            op = self.text[self.pos]
            self.pos += 1
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self) -> Polynomial:
        acc = self.factor()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                acc = acc * self.factor()
            elif ch == "/":
                self.pos += 1
                start = self.pos
                d = self.factor()
                if not d.is_constant() or d.is_zero():
                    self.pos = start
                    raise self.error("can only divide by a nonzero number")
                acc = acc.scale(1 / d.constant_term())
            elif ch and (ch.isalnum() or ch in "(_"):
                acc = acc * self.factor()
            else:
                return acc

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected an integer")
        return int(self.text[start:self.pos])

    def factor(self) -> Polynomial:
        base = self.atom()
        if self.peek() == "^" or self.text.startswith("**", self.pos):
            self.pos += 2 if self.text.startswith("**", self.pos) else 1
            base = base ** self.integer()
        return base

    def atom(self) -> Polynomial:
        ch = self.peek()
        if not ch:
            raise self.error("unexpected end of input")
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return inner
        if ch.isdigit():
            return self.ring.const(mpz(self.integer()))
        for name in self.names:
            if self.text.startswith(name, self.pos):
                self.pos += len(name)
                v = self.ring.var(name)
                # compact exponent: ``y5`` means y^5
                if self.pos < len(self.text) and self.text[self.pos].isdigit():
                    return v ** self.integer()
                return v
        raise self.error(f"unknown symbol starting at {self.text[self.pos:self.pos + 8]!r}")


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    return _Parser(text, ring).parse()


def polys(ring: PolyRing, texts: Iterable[str]) -> list[Polynomial]:
    return [ring.parse(t) for t in texts]
