from fractions import Fraction as F

import pytest

from conftest import make_frame
from nkcontact.contact_structure import (
    ContactData,
    check_contact_axioms,
    check_h_identities,
    compute_h,
    d_eta,
    nabla_xi,
    sasakian_and_kcontact,
)
from nkcontact.riemann_engine import geometry, levi_civita
from nkcontact.tensor_core import InputError, Metric, Tensor
from nkcontact.workbench.fixtures import builtin_fixture


def test_example_41_axioms_pass(ex41):
    assert check_contact_axioms(ex41).passed


def test_example_41_h_is_derived_not_printed(ex41):
    h = compute_h(ex41)
    assert h.array.tolist() == [[-1, 0, 0], [0, 1, 0], [0, 0, 0]]
    # the data file carries the printed value 2e2 for comparison
    assert ex41.expected["h"][2, 2] == 2


def test_example_41_h_identities(ex41):
    rep = check_h_identities(ex41, compute_h(ex41), levi_civita(ex41))
    assert rep.passed, rep.failures()


def test_example_42_deta_witness(ex42):
    rep = check_contact_axioms(ex42)
    fail = rep["d eta(X,Y)=g(X,phiY)"]
    assert not fail.passed
    assert fail.witness == (2, 4)
    assert (fail.expected, fail.computed) == (-1, 0)
    others = [c for c in rep.checks if c.name != "d eta(X,Y)=g(X,phiY)"]
    assert all(c.passed for c in others)


def test_example_42_h_matches_printed(ex42):
    assert compute_h(ex42) == ex42.expected["h"]


def test_example_42_lambda_zero_degenerates():
    frame = builtin_fixture("example-4.2(0)")
    assert not frame.brackets.any()
    assert geometry(frame).R.is_zero()
    assert compute_h(frame).is_zero()
    assert not check_contact_axioms(frame).passed


def test_su2_sasakian_and_kcontact(su2):
    rep = sasakian_and_kcontact(su2, geometry(su2))
    assert rep.passed
    assert compute_h(su2).is_zero()
    # nabla_X xi = -phi X for a K-contact structure with h = 0
    assert nabla_xi(su2, levi_civita(su2)) == su2.contact.phi * F(-1)


def test_example_41_not_sasakian(ex41):
    rep = sasakian_and_kcontact(ex41, geometry(ex41))
    assert not rep["sasakian"].passed and rep["sasakian"].witness is not None
    assert not rep["k-contact"].passed


def test_d_eta_convention(su2):
    # d eta(X,Y) = -1/2 eta([X,Y]); [e1,e2] = 2e3 so d eta(e1,e2) = -1 = g(e1, phi e2)
    assert d_eta(su2)[0, 1] == -1


def test_contact_data_validates_dimensions():
    g = Metric.identity(3)
    with pytest.raises(InputError):
        ContactData(Tensor.basis_vector(2, 1), Tensor.identity_endomorphism(3), g)
    with pytest.raises(InputError):
        ContactData(Tensor.basis_vector(3, 1), Tensor.basis_vector(3, 1), g)


def test_wrong_phi_reports_witnesses():
    frame = make_frame(3, {(1, 2): {3: 2}, (2, 3): {1: 2}, (3, 1): {2: 2}}, (3, {1: {2: 1}}))
    rep = check_contact_axioms(frame)
    assert not rep.passed
    assert all(c.witness is not None for c in rep.failures())
