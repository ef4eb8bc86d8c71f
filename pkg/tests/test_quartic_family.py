import pytest
import sympy

import forms
import quartic_family as qf
from binary_fields import BinaryField, PrimeField
from forms import Form
from quartic_family import FamilyParameters, QuarticError, QuarticSurfaceModel


@pytest.fixture(scope="module")
def generic(gf16):
    return qf.generic_parameters(gf16, 7)


@pytest.fixture(scope="module")
def generic_surface(generic):
    return qf.build_family(generic)


def test_parameter_validation(gf16):
    identity = [[int(i == j) for j in range(4)] for i in range(4)]
    with pytest.raises(QuarticError):
        FamilyParameters(gf16, identity[:3], [0] * 10)
    with pytest.raises(QuarticError):
        FamilyParameters(gf16, identity, [0] * 9)
    with pytest.raises(QuarticError):
        FamilyParameters(gf16, identity, [16] + [0] * 9)


def test_parameters_from_dict(generic):
    restored = FamilyParameters.from_dict(generic.to_dict())
    assert restored.linear == generic.linear
    assert restored.quadric == generic.quadric
    assert restored.seed == 7
    with pytest.raises(QuarticError):
        FamilyParameters.from_dict({"linear": []})


def test_degenerate_member(gf16):
    linear = [[1, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0]]
    X = qf.build_family(FamilyParameters(gf16, linear, [1] + [0] * 9))
    assert X.status == "degenerate"


def test_surface_requires_a_quartic(gf16):
    x0 = Form.variable(gf16, 4, 0)
    with pytest.raises(QuarticError):
        QuarticSurfaceModel(x0 ** 3)
    with pytest.raises(QuarticError):
        QuarticSurfaceModel(Form.zero(gf16, 4))


def test_generic_scan_matches_expected_nodes(generic, generic_surface):
    expected = qf.rational_expected_nodes(generic)
    assert expected is not None and len(expected) == 12
    assert generic_surface.status == "ok"
    assert qf.singular_points_scan(generic_surface, workers=1) == expected
    assert qf.is_isolated(generic_surface, expected)
    assert not qf.collinear_triples(generic.field, expected)


def test_transformed_surface_keeps_node_count(generic, generic_surface):
    field = generic.field
    M = forms.complete_basis(field, [[1, 2, 3, 4]], 4)
    Y = generic_surface.transform(M)
    assert len(qf.singular_points_scan(Y, workers=1)) == 12


def test_family_planes_are_double_conics(generic, generic_surface):
    nodes = set(qf.rational_expected_nodes(generic))
    field = generic.field
    for row in generic.linear:
        report = qf.plane_section(generic_surface, row)
        assert report.status == "double-conic"
        assert len(report.node_locus) == qf.NODES_PER_PLANE
        assert report.square_root
        assert {tuple(field.parse(c) for c in x) for x in report.node_locus} <= nodes


def test_plane_sections_need_characteristic_two():
    p = qf.dwork_member(PrimeField(5))
    X = qf.build_family(p)
    with pytest.raises(QuarticError):
        qf.plane_section(X, [1, 0, 0, 0])


@pytest.mark.slow
def test_family_report_and_census(generic):
    report = qf.family_report(generic, workers=1)
    assert report.status == "verified"
    assert len(report.nodes) == 12
    assert len(report.nonreduced_planes) == 4
    census = report.census
    assert census["consistent"]
    assert census["nodes_per_plane"] == [6, 6, 6, 6]
    assert census["planes_per_node"] == [2] * 12
    assert census["max_shared"] <= 2
    assert census["census"]["arithmetic_feasible"]


def test_dwork_member_over_gf2():
    gf2 = BinaryField(1)
    p = qf.dwork_member(gf2)
    X = qf.build_family(p)
    nodes = qf.singular_points_scan(X, workers=1)
    assert nodes == sorted([(0, 0, 1, 1), (0, 1, 0, 1), (0, 1, 1, 0),
                            (1, 0, 0, 1), (1, 0, 1, 0), (1, 1, 0, 0)])
    entries = qf.expected_nodes(p)
    assert len(entries) == 6
    assert all(e["multiplicity"] == 2 for e in entries)
    assert qf.rational_expected_nodes(p) is None


def test_dwork_member_odd_characteristic():
    with pytest.raises(QuarticError):
        qf.dwork_member(PrimeField(3))
    with pytest.raises(QuarticError):
        qf.dwork_member(PrimeField(7))
    assert qf.dwork_member(PrimeField(5)).independent()


def test_squared_surface_is_not_isolated():
    gf2 = BinaryField(1)
    x0, x1 = Form.variable(gf2, 4, 0), Form.variable(gf2, 4, 1)
    X = QuarticSurfaceModel(x0 * x0 * x1 * x1)
    points = qf.singular_points_scan(X, workers=1)
    assert len(points) == 11
    assert not qf.is_isolated(X, points)
    assert len(qf.singular_lines(X, points)) >= 2
    with pytest.raises(QuarticError):
        qf.incidence_census(X, points)


def test_collinear_triples(gf16):
    points = [(1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0), (0, 0, 1, 0)]
    assert qf.collinear_triples(gf16, points) == [(0, 1, 2)]


def test_dwork_twisted_cubic_check():
    cert = qf.dwork_twisted_cubic_check()
    assert cert.status == "verified"
    assert cert.detail["lambda"] == "-1/81"
    assert cert.detail["lambda_mod_2"] == 1
    assert cert.detail["char2"]["substitution_zero"]


def test_reduce_rational_mod2():
    assert qf.reduce_rational_mod2(sympy.Rational(-1, 81)) == 1
    assert qf.reduce_rational_mod2(sympy.Rational(4, 3)) == 0
    with pytest.raises(QuarticError):
        qf.reduce_rational_mod2(sympy.Rational(1, 2))


def test_parse_field():
    assert qf.parse_field(k=3).size == 8
    assert qf.parse_field(p=5).size == 5
    with pytest.raises(QuarticError):
        qf.parse_field(p=11)


def test_scan_bound(monkeypatch, gf16):
    monkeypatch.setattr(qf.settings, "scan_bound", 100)
    X = qf.build_family(qf.dwork_member(gf16))
    with pytest.raises(QuarticError):
        qf.singular_points_scan(X)
