"""Polynomial map germs (C^n, 0) -> (C^{n+1}, 0)."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

from .errors import ComputationError
from .polyring import INHOMOGENEOUS, PolyRing, Polynomial, RingMap, weighted_degree


class FitcalcWarning(UserWarning):
    """Non-fatal diagnostics (inhomogeneous input, unverified hypotheses, ...)."""


@dataclass(frozen=True)
class MapGerm:
    """A finite polynomial map germ given by its components.

    ``unfolding_params`` names target variables that are unfolding
    parameters; the component for each must be a bare source variable.
    """

    source: PolyRing
    target: PolyRing
    components: tuple[Polynomial, ...]
    unfolding_params: tuple[str, ...] = ()

    def __post_init__(self):
        comps = tuple(self.source(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "unfolding_params", tuple(self.unfolding_params))
        if len(comps) != self.target.nvars:
            raise ValueError(
                f"{len(comps)} components for {self.target.nvars} target variables")
        if self.target.nvars != self.source.nvars + 1:
            raise ValueError("target dimension must be source dimension + 1")
        for i, c in enumerate(comps):
            if c.constant_term():
                raise ValueError(f"component {i + 1} ({c}) has a nonzero constant term; germs map 0 to 0")
        for p in self.unfolding_params:
            c = comps[self.target.index(p)]
            if len(c) != 1 or c.lc != 1 or sum(c.lm) != 1:
                raise ValueError(f"unfolding parameter {p} must map to a bare source variable")

    @classmethod
    def from_strings(cls, source_vars: Sequence[str], target_vars: Sequence[str],
                     components: Sequence[str], source_weights: Sequence[int] = (),
                     target_weights: Sequence[int] = (), unfolding_params: Sequence[str] = ()
                     ) -> "MapGerm":
        """Build a germ from text; target weights default to the component degrees."""
        source = PolyRing(tuple(source_vars), tuple(source_weights))
        comps = [source.parse(c) for c in components]
        if not target_weights:
            degs = [weighted_degree(c) if c else INHOMOGENEOUS for c in comps]
            if all(isinstance(d, int) for d in degs):
                target_weights = degs
        target = PolyRing(tuple(target_vars), tuple(target_weights))
        return cls(source, target, tuple(comps), tuple(unfolding_params))

    @property
    def n(self) -> int:
        return self.source.nvars

    @property
    def pullback(self) -> RingMap:
        """``f^*``: target ring -> source ring."""
        return RingMap(self.target, self.source, self.components)

    def is_weighted_homogeneous(self) -> bool:
        """Every component is homogeneous of degree equal to its target weight."""
        for c, w in zip(self.components, self.target.weights):
            if not c or weighted_degree(c) != w:
                return False
        return True

    def corank(self) -> int:
        """``n - rank df(0)``, from the linear parts of the components."""
        from fractions import Fraction

        rows = []
        for c in self.components:
            row = []
            for i in range(self.n):
                e = [0] * self.n
                e[i] = 1
                v = c.coeff(e)
                row.append(Fraction(int(v.numerator), int(v.denominator)))
            rows.append(row)
        return self.n - _rank(rows)

    def source_param(self, target_param: str) -> str:
        c = self.components[self.target.index(target_param)]
        return self.source.vars[c.lm.index(1)]

    def restrict(self) -> "MapGerm":
        """The germ obtained by setting every unfolding parameter to zero."""
        if not self.unfolding_params:
            return self
        sparams = [self.source_param(p) for p in self.unfolding_params]
        skeep = [v for v in self.source.vars if v not in sparams]
        tkeep = [v for v in self.target.vars if v not in self.unfolding_params]
        if not skeep:
            raise ComputationError("restriction leaves no source variables")
        src = self.source.subring(skeep)
        tgt = self.target.subring(tkeep)
        zero = {v: 0 for v in sparams}
        pos = [self.source.index(v) for v in skeep]
        comps = []
        for v in tkeep:
            c = self.components[self.target.index(v)].subs(zero)
            comps.append(Polynomial(src, {tuple(m[i] for i in pos): k for m, k in c.as_dict().items()}))
        return MapGerm(src, tgt, tuple(comps))

    def describe(self) -> str:
        return (f"({', '.join(self.source.vars)}) -> "
                f"({', '.join(c.to_str() for c in self.components)})")


def _rank(rows: list[list]) -> int:
    m = [r[:] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                f = m[r][col] / m[rank][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def warn(message: str) -> None:
    warnings.warn(message, FitcalcWarning, stacklevel=3)
