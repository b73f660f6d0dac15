import math
from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest

import oracles
from conftest import make_frame
from nkcontact.contact_structure import compute_h
from nkcontact.nullity_lab.boeckx import DomainError, boeckx_example_params, boeckx_invariant
from nkcontact.nullity_lab.conditions import (
    CONDITION_KINDS,
    INDETERMINATE,
    CurvatureTensors,
    check_curvature_condition,
    lemma31_check,
    pseudosymmetry_fit,
    pseudosymmetry_tensors,
    s_square_coefficients,
    s_square_formula_check,
)
from nkcontact.nullity_lab.curvature_tensors import concircular, weyl
from nkcontact.nullity_lab.fits import (
    eta_einstein_crosschecks,
    eta_einstein_fit,
    fit_kappa_mu,
)
from nkcontact.nullity_lab.identities import FAIL, OUT, PASS, identity_suite
from nkcontact.riemann_engine import geometry
from nkcontact.tensor_core import InputError, Tensor, lower_operator, operator_at
from nkcontact.workbench.fixtures import builtin_fixture


@pytest.fixture(scope="module")
def h5():
    """5-dim Heisenberg frame with its standard Sasakian structure."""
    return make_frame(5, {(1, 3): {5: 2}, (2, 4): {5: 2}}, (5, {1: {3: 1}, 3: {1: -1}, 2: {4: 1}, 4: {2: -1}}))


def tensors_of(frame):
    b = geometry(frame)
    Ct = concircular(b.R, b.r, frame.metric)
    C = weyl(b.R, b.S, b.Q_op, b.r, frame.metric)
    return b, CurvatureTensors(Ct, C)


# -- concircular / Weyl -------------------------------------------------------

@pytest.mark.parametrize("name", ["product-flat-sphere", "example-4.2(1)", "hyperbolic(4,2)"])
def test_weyl_matches_decomposition_oracle(name):
    frame = builtin_fixture(name)
    b, t = tensors_of(frame)
    g = frame.metric.g.array.tolist()
    R = oracles.curvature(b.conn.gamma, frame.brackets)
    assert lower_operator(t.C, frame.metric).array.tolist() == oracles.weyl_low(R, g)


def test_weyl_trace_free_on_heisenberg(h5):
    _, t = tensors_of(h5)
    C = t.C.array
    assert not np.any(np.einsum("ijki->jk", C) != 0)
    assert not t.C.is_zero()


@pytest.mark.parametrize("name", ["su2-sasakian", "hyperbolic(5,1/2)", "abelian-flat(4)"])
def test_concircular_vanishes_on_constant_curvature(name):
    frame = builtin_fixture(name)
    b, t = tensors_of(frame)
    assert t.Ctilde.is_zero()


def test_weyl_needs_dimension_three():
    frame = builtin_fixture("abelian-flat(2)")
    b = geometry(frame)
    with pytest.raises(InputError):
        weyl(b.R, b.S, b.Q_op, b.r, frame.metric)


# -- nullity fits ------------------------------------------------------------

def test_kappa_mu_example_41(ex41):
    fit = fit_kappa_mu(ex41, geometry(ex41), compute_h(ex41))
    assert (fit.kappa, fit.mu, fit.global_fit) == (0, 0, True)
    assert fit.per_pair == {1: 0, 2: 0}


def test_kappa_mu_sasakian_has_free_mu(su2):
    fit = fit_kappa_mu(su2, geometry(su2), compute_h(su2))
    assert fit.kappa == 1 and fit.mu is None and fit.mu_indeterminate


def test_kappa_mu_example_42_koszul(ex42):
    fit = fit_kappa_mu(ex42, geometry(ex42), compute_h(ex42))
    assert not fit.global_fit and fit.witness is not None and fit.residual != 0
    assert fit.per_pair == {2: -1, 3: -1, 4: 0, 5: 0}


@pytest.mark.parametrize("lam", [F(1, 2), F(2), F(-3)])
def test_example_42_per_pair_scales_with_lambda(lam):
    frame = builtin_fixture("example-4.2", {"lambda": lam})
    fit = fit_kappa_mu(frame, geometry(frame), compute_h(frame))
    assert fit.per_pair == {2: -lam ** 2, 3: -lam ** 2, 4: 0, 5: 0}


def test_kappa_mu_example_42_override(ex42):
    fit = fit_kappa_mu(ex42, geometry(ex42, True), compute_h(ex42))
    assert not fit.global_fit
    assert fit.per_pair == {2: None, 3: None, 4: 0, 5: None}


def test_eta_einstein_heisenberg(h5):
    b = geometry(h5)
    fit = eta_einstein_fit(b.S, h5.metric, h5.contact.eta)
    assert (fit.c1, fit.c2, fit.exact, fit.einstein) == (-2, 6, True, False)
    cc = eta_einstein_crosschecks(fit, b.r, F(1), 2)
    assert cc["trace_r"]["holds"] and cc["trace_kappa"]["holds"]
    assert cc["closed_form"]["matches"]
    # the alternative pair kappa -+ r/(2n(2n+1)) violates c1 + c2 = 2n kappa
    assert not cc["alt_pair_plus"]["trace_consistent"]


def test_eta_einstein_fit_failure_witness(pfs):
    b = geometry(pfs)
    eta = Tensor.basis_vector(7, 1)
    fit = eta_einstein_fit(b.S, pfs.metric, Tensor(eta.array, ("l",)))
    assert not fit.exact and fit.witness is not None


# -- identity suite ------------------------------------------------------------

def _suite(frame):
    b = geometry(frame)
    h = compute_h(frame)
    return identity_suite(frame, b, h, fit_kappa_mu(frame, b, h), frame is not None and h.is_zero())


def test_identity_suite_example_41(ex41):
    suite = _suite(ex41)
    statuses = {r.ident: r.status for r in suite.results}
    assert statuses["r = 2n(2n-2+kappa)"] == OUT
    assert statuses["Tr h^2 = 2n(1-kappa)"] == PASS
    assert statuses["Q xi = 2n kappa xi"] == PASS
    assert not suite.failures


def test_identity_suite_gates_sasakian_scalar_curvature(su2):
    suite = _suite(su2)
    res = suite["r = 2n(2n-2+kappa)"]
    # r = 6 on the unit sphere while the formula gives 2: tagged, not failed
    assert res.status == OUT and not res.holds
    assert not suite.failures


def test_identity_suite_skipped_without_global_fit(ex42):
    assert _suite(ex42).skipped == "no global kappa fit"


def test_identity_suite_heisenberg(h5):
    suite = _suite(h5)
    assert all(r.status in (PASS, OUT) for r in suite.results)
    assert FAIL not in {r.status for r in suite.results}


# -- condition deciders --------------------------------------------------------

def _recompute_xi(frame, b, t, kind, witness):
    """Recompute one entry of C~(xi, e_u) . T via the loop oracle."""
    g = frame.metric.g.array.tolist()
    xi_idx = [i for i, v in enumerate(frame.contact.xi.array) if v != 0]
    assert len(xi_idx) == 1
    Ct = t.Ctilde.array.tolist()
    target = {
        "CtildeXi_Ctilde": lower_operator(t.Ctilde, frame.metric),
        "CtildeXi_R": b.R_low,
        "CtildeXi_S": b.S,
        "CtildeXi_C": lower_operator(t.C, frame.metric),
    }[kind]
    u, *xs = witness
    return oracles.derivation_entry(Ct, target.array.tolist(), tuple(x - 1 for x in xs), xi_idx[0], u - 1)


@pytest.mark.parametrize("kind", CONDITION_KINDS[:4])
def test_xi_condition_witness_recomputes(h5, kind):
    b, t = tensors_of(h5)
    v = check_curvature_condition(kind, h5, b, t)
    assert not v.holds
    assert _recompute_xi(h5, b, t, kind, v.witness) == v.value != 0


def test_xi_conditions_hold_on_sasakian_sphere(su2):
    b, t = tensors_of(su2)
    for kind in CONDITION_KINDS:
        assert check_curvature_condition(kind, su2, b, t).holds


def test_c_dot_s_heisenberg(h5):
    b, t = tensors_of(h5)
    assert check_curvature_condition("C_dot_S", h5, b, t).holds


def test_unknown_condition_kind(su2):
    b, t = tensors_of(su2)
    with pytest.raises(InputError):
        check_curvature_condition("nope", su2, b, t)


def test_s_square_formula_fails_on_heisenberg(h5):
    b = geometry(h5)
    chk = s_square_formula_check(b, F(1), 2, True)
    assert chk.status == "fail"
    assert (chk.a, chk.b) == (F(18, 5), F(-8, 5))
    assert chk.witness == (1, 1) and (chk.lhs, chk.rhs) == (4, F(-44, 5))


def test_s_square_gating(su2, ex41):
    assert s_square_formula_check(geometry(su2), F(1), 1, True).status == "out-of-hypothesis"
    assert s_square_formula_check(geometry(ex41), None, 1, True).status == "no-kappa"
    assert s_square_coefficients(F(0), F(0), 2) == (0, 0)


# -- pseudosymmetry ---------------------------------------------------------------

def _brute_pseudo(frame, b, C):
    m = frame.dim
    g = frame.metric.g.array.tolist()
    Cl = lower_operator(C, frame.metric).array.tolist()
    RC = oracles.derivation(b.R.array.tolist(), Cl, m, 4)
    QC = oracles.derivation(oracles.wedge_op(g), Cl, m, 4)
    return RC, QC


@pytest.fixture(scope="module")
def h5_pseudo(h5):
    b, t = tensors_of(h5)
    return b, t, _brute_pseudo(h5, b, t.C)


def test_pseudosymmetry_heisenberg_matches_oracle(h5_pseudo):
    b, t, (RC, QC) = h5_pseudo
    v = pseudosymmetry_fit(b, t.C, F(1))
    assert v.holds and v.fitted_fC == 1 and v.note == "f_C != -kappa"
    assert all(RC[k] == v.fitted_fC * QC[k] for k in RC)
    assert any(QC[k] != 0 for k in QC)


def test_pseudosymmetry_tensors_match_oracle(h5_pseudo):
    b, t, (oRC, oQC) = h5_pseudo
    RC, QC = pseudosymmetry_tensors(b, t.C)
    for idx in product(range(5), repeat=6):
        assert RC.array[idx] == oRC[idx]
        assert QC.array[idx] == oQC[idx]


def test_pseudosymmetry_indeterminate_iff_both_vanish(su2, ex41):
    for frame in (su2, ex41):
        b, t = tensors_of(frame)
        v = pseudosymmetry_fit(b, t.C)
        RC, QC = pseudosymmetry_tensors(b, t.C)
        both = RC.is_zero() and QC.is_zero()
        assert (v.fitted_fC == INDETERMINATE) == both


# -- Kulkarni-Nomizu criterion ---------------------------------------------------

def _brute_tt_minus_q(g, A, alpha):
    gl = g.g.array.tolist()
    T = oracles.kulkarni_nomizu(gl, A.array.tolist())
    m = len(gl)
    TT = oracles.derivation(oracles.raise4(T, gl), T, m, 4)
    QT = oracles.derivation(oracles.wedge_op(gl), T, m, 4)
    return [k for k in TT if TT[k] != alpha * QT[k]]


def test_lemma31_metric_case(su2):
    rep = lemma31_check(su2.metric, su2.metric.g)
    assert (rep.alpha, rep.lam, rep.identity_holds) == (1, 0, True)


def test_lemma31_mixed_case(su2):
    eta = su2.contact.eta.array
    A = Tensor(su2.metric.g.array * 3 + np.multiply.outer(eta, eta) * 2, ("l", "l"))
    rep = lemma31_check(su2.metric, A)
    # A^2 = 9g + 16 eta(x)eta = 8A - 15g
    assert (rep.alpha, rep.lam, rep.identity_holds) == (8, -15, True)
    assert _brute_tt_minus_q(su2.metric, A, rep.alpha) == []


def test_lemma31_premise_failure_has_witness():
    frame = builtin_fixture("abelian-flat(3)")
    A = Tensor([[1, 0, 0], [0, 2, 0], [0, 0, 3]], ("l", "l"))
    rep = lemma31_check(frame.metric, A)
    assert not rep.premise_holds and rep.premise_witness is not None


def test_lemma31_ricci_heisenberg(h5):
    b = geometry(h5)
    rep = lemma31_check(h5.metric, b.S)
    assert (rep.alpha, rep.lam, rep.identity_holds) == (2, 8, True)


# -- Boeckx ------------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 4, 9])
def test_boeckx_special_value(n):
    assert math.isclose(boeckx_invariant(1 - F(1, n), 0), math.sqrt(n), rel_tol=0, abs_tol=1e-12)


def test_boeckx_domain():
    with pytest.raises(DomainError):
        boeckx_invariant(1, 0)
    with pytest.raises(InputError):
        boeckx_example_params(1)


@pytest.mark.parametrize("n,plus,minus", [(4, (1, 2), (1 / 3, 4 / 3)), (9, (0.5, 1.5), (0.25, 1.25))])
def test_boeckx_params(n, plus, minus):
    (cp, ap), (cm, am) = boeckx_example_params(n)
    for got, want in ((cp, plus[0]), (ap, plus[1]), (cm, minus[0]), (am, minus[1])):
        assert abs(got - want) < 1e-12


def test_boeckx_params_n2():
    (cp, ap), (cm, am) = boeckx_example_params(2)
    r2 = math.sqrt(2)
    assert abs(cp - (r2 + 1)) < 1e-12 and abs(ap - (r2 + 2)) < 1e-12
    assert abs(cm - (r2 - 1)) < 1e-12 and abs(am - r2) < 1e-12
