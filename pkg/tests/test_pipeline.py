import warnings

import pytest

from conftest import MAIN_FITT1, MAIN_IMAGE
from fitcalc import (ComputationError, FitcalcWarning, Ideal, MapGerm, consistency_report,
                     divided_difference_matrix, double_point_ideal, fitting1_from_unfolding,
                     fitting1_grauert_remmert, fitting1_theorem1, fitting_tower_theorem2,
                     ideal_equal, image_ideal, presentation_matrix)
from fitcalc.pipeline import check_restriction, doubled_ring


def test_image_main(main_germ):
    h = image_ideal(main_germ)
    assert h == main_germ.target.parse(MAIN_IMAGE)


def test_two_to_one_map_fails_validation():
    # y -> -y symmetry: image Z = Y^2 is reduced but f_*O has Fitt_0 = (h^2)
    f = MapGerm.from_strings("xy", "XYZ", ["x", "y2", "y4"])
    h = image_ideal(f)
    assert h == f.target.parse("Y2 - Z")
    P = presentation_matrix(f, image=h)
    assert not P.validated
    with pytest.warns(FitcalcWarning):
        rep = consistency_report(f, ["minors", "grauert_remmert"])
    assert "minors" in rep.errors


def test_image_of_curve():
    f = MapGerm.from_strings("t", "XY", ["t2", "t3"])
    assert image_ideal(f) == f.target.parse("X3 - Y2")


def test_gr_fitting1_main(main_germ):
    fit1 = fitting1_grauert_remmert(main_germ)
    assert ideal_equal(fit1, Ideal.parse(main_germ.target, MAIN_FITT1))


def test_immersion_has_unit_fitting1():
    f = MapGerm.from_strings("x", "XY", ["x", "x2"])  # smooth image
    assert fitting1_grauert_remmert(f).is_unit()
    tower = fitting_tower_theorem2(f)
    assert len(tower) == 2 and tower[1].is_unit()


def test_stable_quotient_formula_cross_cap(cross_cap):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", FitcalcWarning)
        fit1 = fitting1_theorem1(cross_cap)
    assert any("stable" in str(w.message) for w in caught)
    assert ideal_equal(fit1, Ideal.parse(cross_cap.target, ["X", "Z"]))


def test_unfolding_restriction_check(cross_cap):
    F = MapGerm.from_strings("xya", "XYZA", ["x", "y2", "xy", "a"], (1, 1, 1), (1, 2, 2, 1),
                             unfolding_params=["A"])
    check_restriction(cross_cap, F)
    wrong = MapGerm.from_strings("xya", "XYZA", ["x", "y2+x", "xy", "a"],
                                 unfolding_params=["A"])
    with pytest.raises(ComputationError):
        check_restriction(cross_cap, wrong)
    with pytest.warns(FitcalcWarning):
        fit1 = fitting1_from_unfolding(cross_cap, F)
    assert fit1.ring == cross_cap.target


def test_corank2_warning():
    f = MapGerm.from_strings("xyz", "XYZW", ["x", "y2+xz", "z2+xy", "y3+y2z-yz2+z3"],
                             (1, 1, 1), (1, 2, 2, 3))
    assert f.corank() == 2
    with pytest.warns(FitcalcWarning):
        rep = consistency_report(f, ["minors"])
    assert rep.methods_run == ["minors"]
    assert any("corank" in w for w in rep.warnings)


def test_inhomogeneous_warning():
    f = MapGerm.from_strings("xy", "XYZ", ["x", "y2", "xy+y3"])
    with pytest.warns(FitcalcWarning):
        rep = consistency_report(f, ["grauert_remmert", "minors"])
    assert rep.all_consistent()


def test_consistency_aliases_and_errors(cross_cap):
    rep = consistency_report(cross_cap, ["radical", "normal_conductor", "minors"])
    assert rep.methods_run == ["grauert_remmert", "minors"]
    assert rep.consistency[("grauert_remmert", "minors")] is True
    with pytest.raises(ValueError):
        consistency_report(cross_cap, ["nope"])
    with pytest.raises(ValueError):
        consistency_report(cross_cap, [])


def test_consistency_all_fail_raises(cross_cap):
    with pytest.raises(ComputationError):
        consistency_report(cross_cap, ["minors", "grauert_remmert"], budget=1)


def test_divided_differences_cross_cap(cross_cap):
    A = divided_difference_matrix(cross_cap)
    D = doubled_ring(cross_cap.source)
    assert D.vars == ("x", "y", "x'", "y'")
    assert (A.rows, A.cols) == (3, 2)
    assert A[1, 1] == D.parse("y + y'")
    D2 = double_point_ideal(cross_cap)
    assert ideal_equal(D2, Ideal.parse(D, ["x", "x'", "y + y'"]))
