from itertools import product

import pytest
import sympy as sp

from formalcr.gauss import GaussRational
from formalcr.linalg import generic_rank
from formalcr.nondegeneracy import (
    analyze_nondegeneracy,
    certificate_family,
    degeneracy,
    finite_nondegeneracy_order,
    holomorphic_nondegeneracy,
    omega_vars,
    psi_rank,
    segre_coefficients,
)
from formalcr.polyparse import parse_series
from formalcr.series import jacobian
from oracle import MODELS, jac_rank

HALF_I = GaussRational(0, sp.Rational(1, 2))


# -- oracle -----------------------------------------------------------------


def oracle_span_trace(name, k_max):
    """Span dimension of L^a rho_z at 0 for |a| <= k, computed with sympy."""
    model = MODELS[name]
    grads = [[sp.diff(model.rho, z) for z in model.z]]
    jets = {(0,) * model.N: grads[0]}
    trace, vecs = [], []
    zero = {s: 0 for s in model.z + model.w}
    for k in range(k_max + 1):
        for alpha in (a for a in product(range(k + 1), repeat=model.N) if sum(a) == k):
            if alpha not in jets:
                i = next(j for j, a in enumerate(alpha) if a)
                pred = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1:]
                jets[alpha] = [model.L(i, g) for g in jets[pred]]
            vecs.append([g.subs(zero) for g in jets[alpha]])
        trace.append((k, sp.Matrix(vecs).rank()))
    return trace


def oracle_q(name, l):
    model = MODELS[name]
    om = sp.symbols(f"o1:{model.n + 1}")
    th = sp.symbols(f"th1:{model.N + 1}")
    pb = sp.Poly(model.phi_bar(om, th), *th)
    out = {}
    for beta in product(range(l + 1), repeat=model.N):
        if sum(beta) <= l:
            out[beta] = sp.expand(pb.coeff_monomial(sp.prod([t**b for t, b in zip(th, beta)])))
    return out, om, th


def oracle_psi_rank(name, l):
    model = MODELS[name]
    om = sp.symbols(f"o1:{model.n + 1}")
    th = sp.symbols(f"th1:{model.N + 1}")
    pb = model.phi_bar(om, th)
    comps = list(th)
    for beta in product(range(l + 1), repeat=model.N):
        if sum(beta) <= l:
            d = pb
            for t, b in zip(th, beta):
                d = sp.diff(d, t, b)
            comps.append(d)
    return jac_rank(comps, [str(s) for s in om + th])


# -- finite nondegeneracy ------------------------------------------------------


def test_lewy_vectors(manifolds):
    rec = finite_nondegeneracy_order(manifolds["lewy"])
    assert str(rec) == "Order(1)"
    vecs = {alpha: v for alpha, _, v in rec.vectors}
    assert vecs[(0,)] == (GaussRational(0), -HALF_I)
    assert vecs[(1,)] == (GaussRational(-1), GaussRational(0))


@pytest.mark.parametrize("name, verdict", [
    ("lewy", "Order(1)"), ("leviflat", "NotUpToCap"), ("quartic", "NotUpToCap"), ("cylinder", "NotUpToCap"),
])
def test_finite_order_verdicts(manifolds, name, verdict):
    assert str(finite_nondegeneracy_order(manifolds[name])) == verdict


@pytest.mark.parametrize("name", ["leviflat", "quartic", "cylinder"])
def test_span_trace_matches_sympy(manifolds, name):
    rec = finite_nondegeneracy_order(manifolds[name], k_max=4)
    assert list(rec.span_trace) == oracle_span_trace(name, 4)


def test_span_monotone(manifolds):
    for m in manifolds.values():
        dims = [d for _, d in finite_nondegeneracy_order(m).span_trace]
        assert dims == sorted(dims) and dims[-1] <= m.n


# -- Segre coefficients ------------------------------------------------------


def test_lewy_coefficients(manifolds):
    m = manifolds["lewy"]
    fam = segre_coefficients(m, 2)
    ov = omega_vars(2)
    assert fam.get((0,), 1) == parse_series("o2", ov, m.cap)
    assert fam.get((1,), 1) == parse_series("-2*i*o1", ov, m.cap - 1)
    assert fam.get((2,), 1).is_zero()


def test_cylinder_coefficients(manifolds):
    m = manifolds["cylinder"]
    fam = segre_coefficients(m, 1)
    ov = omega_vars(3)
    assert fam.get((0, 0), 1) == parse_series("o3", ov, m.cap)
    assert fam.get((1, 0), 1) == parse_series("-2*i*o1", ov, m.cap - 1)
    assert fam.get((0, 1), 1).is_zero()


def test_leviflat_coefficients(manifolds):
    fam = segre_coefficients(manifolds["leviflat"], 4)
    nonzero = [idx for idx, s in fam.entries if not s.is_zero()]
    assert nonzero == [((0,), 1)]


@pytest.mark.parametrize("name", list(MODELS))
def test_coefficients_match_sympy(manifolds, name):
    m = manifolds[name]
    fam = segre_coefficients(m, 3)
    want, om, _ = oracle_q(name, 3)
    for (beta, nu), s in fam.entries:
        got = sp.expand(sum(
            (sp.Rational(c.re) + sp.I * sp.Rational(c.im)) * sp.prod([o**e for o, e in zip(om, exp)])
            for exp, c in s.terms.items()
        ))
        assert got == want[beta]


# -- psi rank and holomorphic nondegeneracy ----------------------------------


@pytest.mark.parametrize("name, l, r", [
    ("lewy", 1, 3), ("leviflat", 1, 2), ("leviflat", 3, 2), ("quartic", 1, 3), ("cylinder", 2, 4),
])
def test_psi_rank_examples(manifolds, name, l, r):
    assert psi_rank(manifolds[name], l) == r
    assert oracle_psi_rank(name, l) == r


@pytest.mark.parametrize("name, nondeg, levi", [
    ("lewy", True, 1), ("quartic", True, 1), ("leviflat", False, None), ("cylinder", False, None),
])
def test_holomorphic(manifolds, name, nondeg, levi):
    rec = holomorphic_nondegeneracy(manifolds[name])
    assert (rec.holo_nondeg, rec.levi_type) == (nondeg, levi)


def test_cylinder_rank_stays_below_full(manifolds):
    rec = holomorphic_nondegeneracy(manifolds["cylinder"])
    # psi_l never sees omega_2, so the rank is at most N + n - 1
    assert rec.r_M == 4 < 5


# -- degeneracy and certificate -------------------------------------------------


@pytest.mark.parametrize("name, d", [("lewy", 0), ("quartic", 0), ("leviflat", 1), ("cylinder", 1)])
def test_degeneracy(manifolds, name, d):
    rec = degeneracy(manifolds[name])
    assert rec.d == d
    want, om, _ = oracle_q(name, 4)
    assert manifolds[name].n - jac_rank(list(want.values()), [str(o) for o in om]) == d


@pytest.mark.parametrize("name, indices, texts", [
    ("lewy", [((0,), 1), ((1,), 1)], ["o2", "-2*i*o1"]),
    ("cylinder", [((0, 0), 1), ((1, 0), 1)], ["o3", "-2*i*o1"]),
    ("leviflat", [((0,), 1)], ["o2"]),
])
def test_certificate(manifolds, name, indices, texts):
    m = manifolds[name]
    cert = certificate_family(m)
    assert list(cert.indices) == indices
    ov = omega_vars(m.n)
    assert [f.truncate(m.cap - 1) for f in cert.functions] == [parse_series(t, ov, m.cap - 1) for t in texts]
    # independent rank recomputation
    assert generic_rank(jacobian(cert.functions, ov)) == m.n - degeneracy(m).d == cert.sample_rank


@pytest.mark.parametrize("name", list(MODELS))
def test_holo_nondeg_iff_d0(manifolds, name):
    rep = analyze_nondegeneracy(manifolds[name])
    assert rep.consistent


@pytest.mark.parametrize("name", list(MODELS))
def test_finite_implies_holomorphic(manifolds, name):
    rep = analyze_nondegeneracy(manifolds[name])
    if rep.finite.status == "Order":
        assert rep.holomorphic.holo_nondeg


def test_flat_in_curved_coordinates():
    # Im(z2 (1 + 2 z1)) = 0 is Levi-flat, but its barPhi is an infinite series
    from formalcr.io import read_manifold_text
    from formalcr.segre import decide_minimality
    from oracle import mfd

    m = read_manifold_text(mfd(2, 1, "(z2*(1 + 2*z1) - zb2*(1 + 2*zb1))/(2*i)"))
    assert not m.normal_coords
    rep = analyze_nondegeneracy(m)
    assert not rep.holomorphic.holo_nondeg and rep.holomorphic.r_M == 2
    assert rep.degeneracy.d == 1 and rep.consistent
    assert psi_rank(m, 1) == 2
    assert str(decide_minimality(m)) == "NotMinimalAtCap"
