import pytest
import sympy as sp

from formalcr.errors import BasePointError, InputError, NotGenericError, ParseError, RealityError
from formalcr.io import read_manifold_text
from formalcr.manifold import (
    build_manifold,
    check_normal_coordinates,
    check_reality_identity,
    graph_residual,
    restrict_to_M,
    restricted_vars,
    tangent_fields,
    zw_vars,
)
from formalcr.polyparse import parse_series
from formalcr.series import TruncatedSeries, derive
from oracle import MODELS, from_sympy, mfd, to_sympy

# -- parsing ----------------------------------------------------------------


def test_lewy_parses(manifolds):
    m = manifolds["lewy"]
    assert (m.n, m.c, m.N, m.cap) == (2, 1, 1, 10)
    assert m.normal_coords and m.reality


def test_not_generic():
    with pytest.raises(NotGenericError):
        read_manifold_text(mfd(2, 1, "z1*zb1"))


def test_base_point():
    with pytest.raises(BasePointError):
        read_manifold_text(mfd(2, 1, "(z2 - zb2)/(2*i) + 1"))


def test_reality():
    with pytest.raises(RealityError):
        read_manifold_text(mfd(2, 1, "(z2 - zb2)/(2*i) - i*z1*zb1"))


def test_parse_error_has_line_and_column():
    text = mfd(2, 1, "(z2 - zb2)/(2*i) - z1*@")
    with pytest.raises(ParseError) as info:
        read_manifold_text(text)
    assert info.value.line == 4
    assert info.value.column == 28  # 5 columns of "  - \"" then the 23rd character


def test_missing_field():
    with pytest.raises(InputError):
        read_manifold_text("n: 2\ncodim: 1\n")


def test_custom_names_and_permutation():
    # declared order puts the transversal coordinate first
    m = read_manifold_text(mfd(2, 1, "(u - ub)/(2*i) - v*vb", vars=["u", "v"]))
    assert m.perm == (1, 0)
    assert m.names == ("u", "v")
    assert check_reality_identity(m)


def test_coefficient_roundtrip():
    m = read_manifold_text(mfd(2, 1, "(z2 - zb2)/(2*i) - 7/3*z1*zb1"))
    assert m.rho[0].coefficient((1, 0, 1, 0)).re == sp.Rational(-7, 3)


# -- graph form -------------------------------------------------------------


@pytest.mark.parametrize("name, text", [
    ("lewy", "w2 + 2*i*z1*w1"),
    ("leviflat", "w2"),
    ("quartic", "w2 + 2*i*z1^2*w1^2"),
])
def test_phi_examples(manifolds, name, text):
    m = manifolds[name]
    assert m.phi[0] == parse_series(text, m.phi[0].vars, m.cap)


@pytest.mark.parametrize("name", list(MODELS))
def test_phi_matches_sympy_solve(manifolds, name):
    m, model = manifolds[name], MODELS[name]
    vars = m.phi[0].vars
    w = sp.symbols(vars[: m.n])
    zp = sp.symbols(vars[m.n:])
    assert m.phi[0] == from_sympy(model.phi(w, zp), vars, m.cap)


@pytest.mark.parametrize("name", list(MODELS))
def test_graph_and_reality(manifolds, name):
    m = manifolds[name]
    assert all(r.is_zero() for r in graph_residual(m))
    assert check_reality_identity(m)
    assert check_normal_coordinates(m)


def test_broken_reality_identity():
    rho = parse_series("(z2 - w2)/(2*i) - i*z1*w1", zw_vars(2), 10)
    m = build_manifold([rho], 2, 1, check_reality=False)
    assert not m.reality
    assert not check_reality_identity(m)


def test_not_normal():
    # Im z2 = Re(z1^2): Phi(z, 0) = z2 + z1^2
    m = read_manifold_text(mfd(2, 1, "(z2 - zb2)/(2*i) - (z1^2 + zb1^2)/2"))
    assert not check_normal_coordinates(m)
    assert check_reality_identity(m)


def test_nonlinear_graph_solve():
    # rho has a z2^2 term, so the fixed-point iteration does real work
    m = read_manifold_text(mfd(2, 1, "(z2 - zb2)/(2*i) - z1*zb1 - z2*zb2"))
    assert all(r.is_zero() for r in graph_residual(m))
    assert check_reality_identity(m)
    assert m.phi[0].degree() == m.cap


def test_codim_two():
    m = read_manifold_text(mfd(4, 2, "(z3 - zb3)/(2*i) - z1*zb1", "(z4 - zb4)/(2*i) - z2*zb2 - z1*zb2 - z2*zb1"))
    assert m.N == 2
    assert check_reality_identity(m)
    L = tangent_fields(m)
    for j in range(2):
        for r in m.rho:
            assert restrict_to_M(L.apply(j, r), m).is_zero()


# -- vector fields and restriction --------------------------------------------


@pytest.mark.parametrize("name, coeff", [
    ("lewy", "-2*i*z1"),
    ("leviflat", "0"),
    ("quartic", "-4*i*z1^2*w1"),
])
def test_tangent_field_examples(manifolds, name, coeff):
    m = manifolds[name]
    L = tangent_fields(m)
    row = L.coeffs[0]
    assert row[0] == TruncatedSeries.constant(1, m.vars, row[0].cap)
    assert row[1] == parse_series(coeff, m.vars, row[1].cap)


@pytest.mark.parametrize("name", list(MODELS))
def test_fields_match_sympy(manifolds, name):
    m, model = manifolds[name], MODELS[name]
    L = tangent_fields(m)
    g = parse_series("w1^3*z1 + w2^2 + 3*w1*z2 - i*w2*z1", m.vars, m.cap)
    for j in range(m.N):
        want = model.L(j, to_sympy(g))
        got = L.apply(j, g)
        assert got == from_sympy(want, m.vars, got.cap)


@pytest.mark.parametrize("name", list(MODELS))
def test_fields_tangent(manifolds, name):
    m = manifolds[name]
    L = tangent_fields(m)
    for j in range(m.N):
        for r in m.rho:
            assert L.apply(j, r).is_zero()


def test_restrict_examples(manifolds):
    m = manifolds["lewy"]
    rv = restricted_vars(2, 1)
    assert restrict_to_M(m.rho[0], m).is_zero()
    w2 = TruncatedSeries.variable("w2", m.vars, m.cap)
    assert restrict_to_M(w2, m) == parse_series("z2 - 2*i*w1*z1", rv, m.cap)
    z1 = TruncatedSeries.variable("z1", m.vars, m.cap)
    assert restrict_to_M(z1, m) == parse_series("z1", rv, m.cap)


@pytest.mark.parametrize("name", list(MODELS))
def test_fields_commute_with_restriction(manifolds, name):
    m = manifolds[name]
    L = tangent_fields(m)
    g = parse_series("w1^2*z1 + w2*w1 + z2^2 - 2*w2^3", m.vars, m.cap)
    for j in range(m.N):
        lhs = restrict_to_M(L.apply(j, g), m)
        rhs = derive(restrict_to_M(g, m), f"w{j + 1}")
        cap = min(lhs.cap, rhs.cap)
        assert lhs.truncate(cap) == rhs.truncate(cap)
