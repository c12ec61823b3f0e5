from fractions import Fraction

import pytest

from phaserank import Verdict, render_csv, render_svg, scan
from phaserank.errors import DomainError, ParseError
from phaserank.scan import classify, custom_family, get_family, grid_axis, param3x4, slice5

from conftest import GAP5_ROWS


def test_grid_axis_is_exact():
    axis = grid_axis(Fraction(0), Fraction(3), 7)
    assert axis == [Fraction(i, 2) for i in range(7)]


def test_circulant_small_grid_region():
    grid = scan("circulant3", 31)
    assert len(grid.cells) == 31 * 31
    for i, j, s, t in grid.points():
        inside = s + t >= 1 and abs(s - t) <= 1
        assert (grid.cell(i, j) is Verdict.NONMAXIMAL) == inside


def test_lp_and_semialg_methods_agree():
    for family in ("circulant3", "param3x4"):
        assert scan(family, 15).cells == scan(family, 15, method="semialg").cells


def test_param3x4_outside_cone_and_submatrix_agreement():
    grid = scan("param3x4", 21)
    counts = grid.counts()
    assert counts[Verdict.OUTSIDE_CONE] > 0 and counts[Verdict.NONMAXIMAL] > 0
    assert param3x4(Fraction(0), Fraction(0)) == [[1, 1, 1, 1], [1, 1, 1, 1], [1, 1, 1, 1]]


def test_slice5_anchors_and_inner_layer():
    assert slice5(Fraction(0), Fraction(1))[0] == [Fraction(v, sum(GAP5_ROWS[0])) for v in GAP5_ROWS[0]]
    grid = scan("slice5", 21)
    assert grid.inner is not None
    for idx, flag in enumerate(grid.inner):
        if flag:
            assert grid.cells[idx] is Verdict.NONMAXIMAL
    verdict, inner = classify(slice5(Fraction(0), Fraction(1)), inner=True)
    assert verdict is Verdict.NONMAXIMAL and inner is False


def test_outputs_are_deterministic():
    a, b = scan("circulant3", 11), scan("circulant3", 11, threads=2)
    assert a == b
    assert render_csv(a) == render_csv(b)
    assert render_svg(a) == render_svg(b)
    csv = render_csv(a).splitlines()
    assert csv[0].startswith("# family=circulant3")
    assert csv[1] == "s,t,verdict"
    assert len(csv) == 2 + 121
    assert "crispEdges" in render_svg(a)


def test_custom_template_exact_and_irrational():
    fam = custom_family("1, s, t\nt, 1, s\ns, t, 1", s_range=(0, 3), t_range=(0, 3))
    assert scan(fam, 7).cells == scan("circulant3", 7).cells
    # entries sqrt(s) at s = 1/4 on the edge x + y = 1 are exact; irrational points get flagged
    fam = custom_family("1, sqrt(s), 1 - sqrt(s)\n1 - sqrt(s), 1, sqrt(s)\nsqrt(s), 1 - sqrt(s), 1",
                        s_range=(Fraction(1, 10), Fraction(9, 10)), t_range=(0, 0))
    grid = scan(fam, 5)
    assert Verdict.BOUNDARY_UNCERTAIN in grid.cells


def test_unknown_family_and_bad_template():
    with pytest.raises(DomainError):
        get_family("hexagon")
    with pytest.raises(ParseError):
        custom_family("1, s +\n")
    with pytest.raises(ParseError):
        custom_family("1, u\n")
    with pytest.raises(DomainError):
        scan("circulant3", 5000)
