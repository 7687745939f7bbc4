"""Fitting ideals of ``f_* O`` without a presentation, end to end.

Recipes implemented here:

* ``Fitt_0``: the image equation, by elimination on the graph.
* ``Fitt_1``: the conductor via the Grauert-Remmert quotient
  ``((a) : (a J : J))`` computed modulo the image equation, with
  ``J`` the (non-radical) Jacobian ideal of the image.
* ``Fitt_1`` for weighted-homogeneous stable germs:
  ``(J_H : (F^*)^{-1} R_F)``, and by base change from a stable unfolding.
* ``Fitt_{k+2} = (Fitt_{k+1}^2 : Fitt_k)`` for the higher ideals.
* The double point ideal from exact divided differences.
"""

from __future__ import annotations

import logging
import time
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BudgetExceeded, ComputationError, FitcalcError, PresentationError
from .germ import FitcalcWarning, MapGerm, warn
from .groebner import divide_exact
from .ideals import (Ideal, ideal_equal, ideal_product, ideal_quotient, is_nonzerodivisor_mod,
                     preimage, quotient_mod, specialize)
from .matrices import PolyMatrix, hypersurface_jacobian, minors_ideal, ramification_ideal
from .polyring import PolyRing, Polynomial
from .presentation import fitting_from_presentation, presentation_matrix, qalgebra_basis

log = logging.getLogger(__name__)

METHODS = ("minors", "grauert_remmert", "theorem1", "theorem2_tower")

# documentation aliases: both name the conductor, computed here by the quotient formula
METHOD_ALIASES = {"radical": "grauert_remmert", "normal_conductor": "grauert_remmert"}


def image_ideal(f: MapGerm, *, budget=None) -> Polynomial:
    """Generator ``h`` of the image, integer-primitive with positive leading coefficient."""
    qalgebra_basis(f, budget=budget)  # raises NotFiniteError
    I = preimage(f.pullback, Ideal.zero(f.source), budget=budget)
    gens = I.gb(budget=budget).elements
    if len(gens) != 1:
        raise ComputationError(
            "image ideal is not principal: map not generically one-to-one or not finite")
    return gens[0].primitive()


def _inhomogeneity_warning(f: MapGerm) -> None:
    if not f.is_weighted_homogeneous():
        warn("input is not weighted homogeneous; global results may differ from the germ")


def fitting1_grauert_remmert(f: MapGerm, *, image: Polynomial | None = None,
                             budget=None) -> Ideal:
    """``Fitt_1`` as the conductor ``((a) : (aJ : J))`` in ``O/(h)``, lifted to the target ring."""
    h = image if image is not None else image_ideal(f, budget=budget)
    T = h.ring
    J = hypersurface_jacobian(h)
    if J.is_unit(budget=budget):
        return Ideal.unit(T)
    a = next((g for g in J.gens if is_nonzerodivisor_mod(g, h, budget=budget)), None)
    if a is None:
        raise ComputationError("no partial derivative of the image is a nonzerodivisor mod h")
    aJ = Ideal(T, [a * g for g in J.gens])
    inner = quotient_mod(aJ, J, h, budget=budget)
    fit1 = quotient_mod(Ideal(T, [a]), inner, h, budget=budget)
    return Ideal(T, fit1.gb(budget=budget).elements)


def fitting1_theorem1(F: MapGerm, *, image: Polynomial | None = None, budget=None) -> Ideal:
    """``(J_H : (F^*)^{-1}(R_F))``; valid for weighted-homogeneous *stable* germs.

    Stability is not checked; the result is conditional on the caller's claim.
    """
    if not F.is_weighted_homogeneous():
        warn("the (J_H : preimage of R_F) formula needs a weighted-homogeneous germ; input is not")
    warn("the (J_H : preimage of R_F) formula assumes the germ is stable (not verified)")
    H = image if image is not None else image_ideal(F, budget=budget)
    JH = hypersurface_jacobian(H)
    RF = ramification_ideal(F)
    pre = preimage(F.pullback, RF, budget=budget)
    q = ideal_quotient(JH, pre, budget=budget)
    return Ideal(F.target, q.gb(budget=budget).elements)


def check_restriction(f: MapGerm, F: MapGerm) -> None:
    r = F.restrict()
    if r.source.vars != f.source.vars or r.target.vars != f.target.vars:
        raise ComputationError("unfolding restriction mismatch: variables differ")
    for a, b in zip(r.components, f.components):
        if a.as_dict() != b.as_dict():
            raise ComputationError(f"unfolding restriction mismatch: {a} != {b}")


def fitting1_from_unfolding(f: MapGerm, F: MapGerm, *, budget=None) -> Ideal:
    """Base change of ``Fitt_1(F)`` along ``params = 0``."""
    check_restriction(f, F)
    fit1F = fitting1_theorem1(F, budget=budget)
    sp = specialize(fit1F, F.unfolding_params)
    pos = [sp.ring.index(v) for v in f.target.vars]
    gens = [Polynomial(f.target, {tuple(m[i] for i in pos): c for m, c in g.as_dict().items()})
            for g in sp.gens]
    out = Ideal(f.target, gens)
    return Ideal(f.target, out.gb(budget=budget).elements)


def fitting_tower_theorem2(f: MapGerm, *, fit1: Ideal | None = None,
                           image: Polynomial | None = None, budget=None) -> list[Ideal]:
    """``[Fitt_0, Fitt_1, ...]`` with ``Fitt_{k+2} = (Fitt_{k+1}^2 : Fitt_k)``.

    Stops at the unit ideal or at index ``dim Q(f)``.
    """
    corank = f.corank()
    if corank >= 2:
        warn(f"corank {corank}: quotient tower is experimental beyond corank 1")
    mult = qalgebra_basis(f, budget=budget).multiplicity
    h = image if image is not None else image_ideal(f, budget=budget)
    T = h.ring
    tower = [Ideal(T, [h])]
    tower.append(fit1 if fit1 is not None else fitting1_grauert_remmert(f, image=h, budget=budget))
    while not tower[-1].is_unit(budget=budget):
        k = len(tower) - 2
        if k + 2 > mult:
            warn(f"tower did not reach the unit ideal by index {mult}")
            break
        nxt = ideal_quotient(ideal_product(tower[-1], tower[-1]), tower[-2], budget=budget)
        tower.append(Ideal(T, nxt.gb(budget=budget).elements))
    return tower


# -- double points -------------------------------------------------------------

def doubled_ring(ring: PolyRing) -> PolyRing:
    primed = tuple(v + "'" for v in ring.vars)
    return PolyRing(ring.vars + primed, ring.weights + ring.weights)


def _into(p: Polynomial, D: PolyRing, slots: Sequence[int]) -> Polynomial:
    """Copy ``p`` into ``D`` placing source variable ``i`` at position ``slots[i]``."""
    out = {}
    for m, c in p.as_dict().items():
        e = [0] * D.nvars
        for i, k in enumerate(m):
            e[slots[i]] += k
        out[tuple(e)] = c
    return Polynomial(D, out, _trusted=True)


def divided_difference_matrix(f: MapGerm) -> PolyMatrix:
    """``alpha`` with ``f_j(x) - f_j(x') = sum_i alpha_ji (x_i - x_i')`` (telescoping)."""
    n = f.n
    D = doubled_ring(f.source)
    rows = []
    for comp in f.components:
        row = []
        for i in range(n):
            # slots < i primed; slot i differs between the two evaluations
            before = [n + s if s < i else s for s in range(n)]
            after = [n + s if s <= i else s for s in range(n)]
            num = _into(comp, D, before) - _into(comp, D, after)
            row.append(divide_exact(num, D.var(D.vars[i]) - D.var(D.vars[n + i])) if num else D.zero)
        rows.append(row)
    return PolyMatrix.from_rows(D, rows)


def double_point_ideal(f: MapGerm) -> Ideal:
    """``(f x f)^* I(diagonal) + (n x n minors of alpha)`` over the doubled source."""
    n = f.n
    D = doubled_ring(f.source)
    diffs = [_into(c, D, range(n)) - _into(c, D, range(n, 2 * n)) for c in f.components]
    minors = minors_ideal(divided_difference_matrix(f), n)
    return Ideal(D, [d for d in diffs if d] + list(minors.gens))


# -- consistency report -----------------------------------------------------------

@dataclass
class FittingReport:
    map: MapGerm
    image: Polynomial | None
    tower: dict[str, dict[int, Ideal]] = field(default_factory=dict)
    methods_run: list[str] = field(default_factory=list)
    consistency: dict[tuple[str, str], bool | None] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    errors: dict[str, str] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)
    presentation: object = None

    def all_consistent(self) -> bool:
        return all(v is not False for v in self.consistency.values())


def _compare(a: dict[int, Ideal], b: dict[int, Ideal], budget) -> bool | None:
    common = sorted(set(a) & set(b))
    if not common:
        return None
    return all(ideal_equal(a[k], b[k], budget=budget) for k in common)


def consistency_report(f: MapGerm, methods: Iterable[str] = METHODS, *,
                       unfolding: MapGerm | None = None, budget=None) -> FittingReport:
    """Run each requested path and compare their Fitting ideals pairwise."""
    methods = [METHOD_ALIASES.get(m, m) for m in methods]
    methods = list(dict.fromkeys(methods))
    if not methods:
        raise ValueError("at least one method must be requested")
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    report = FittingReport(map=f, image=None)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", FitcalcWarning)
        _inhomogeneity_warning(f)
        if f.corank() >= 2:
            warn(f"corank {f.corank()} >= 2")
        try:
            report.image = image_ideal(f, budget=budget)
        except FitcalcError as exc:
            report.errors["image"] = str(exc)
        gr_fit1 = None
        for m in methods:
            if report.image is None:
                report.errors[m] = "image equation unavailable"
                continue
            t0 = time.perf_counter()
            try:
                if m == "minors":
                    P = presentation_matrix(f, image=report.image, budget=budget)
                    report.presentation = P
                    if not P.validated:
                        warn(f"presentation not validated: {P.diagnostic}")
                        raise PresentationError(P.diagnostic)
                    report.tower[m] = {k: fitting_from_presentation(P, k)
                                       for k in range(P.size + 1)}
                elif m == "grauert_remmert":
                    gr_fit1 = fitting1_grauert_remmert(f, image=report.image, budget=budget)
                    report.tower[m] = {0: Ideal(report.image.ring, [report.image]), 1: gr_fit1}
                elif m == "theorem1":
                    if unfolding is not None:
                        fit1 = fitting1_from_unfolding(f, unfolding, budget=budget)
                    else:
                        fit1 = fitting1_theorem1(f, image=report.image, budget=budget)
                    report.tower[m] = {1: fit1}
                elif m == "theorem2_tower":
                    tower = fitting_tower_theorem2(f, fit1=gr_fit1, image=report.image,
                                                   budget=budget)
                    report.tower[m] = dict(enumerate(tower))
                report.methods_run.append(m)
            except BudgetExceeded as exc:
                warn(f"{m}: step budget hit ({exc})")
                report.errors[m] = str(exc)
            except FitcalcError as exc:
                report.errors[m] = str(exc)
            report.timings[m] = time.perf_counter() - t0
    report.warnings = list(dict.fromkeys(str(w.message) for w in caught))
    for msg in report.warnings:
        warnings.warn(msg, FitcalcWarning, stacklevel=2)
    if not report.methods_run:
        detail = "; ".join(f"{k}: {v}" for k, v in report.errors.items())
        raise ComputationError(f"all methods failed ({detail})")
    run = report.methods_run
    for i, a in enumerate(run):
        report.consistency[(a, a)] = True
        for b in run[i + 1:]:
            v = _compare(report.tower[a], report.tower[b], budget)
            report.consistency[(a, b)] = v
            report.consistency[(b, a)] = v
    return report
