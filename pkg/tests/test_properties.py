"""Property-based checks of the algebraic identities on random exact data."""

from fractions import Fraction as F

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from nkcontact.nullity_lab.conditions import lemma31_check
from nkcontact.nullity_lab.curvature_tensors import weyl
from nkcontact.riemann_engine import FrameSpec, geometry, levi_civita, metric_violations, torsion_violations
from nkcontact.tensor_core import Metric, Tensor, format_rational, kulkarni_nomizu, lower_operator, parse_rational, zeros

PROFILE = settings(max_examples=25, deadline=None, derandomize=True)

small = st.integers(-2, 2)
rationals = st.fractions(max_denominator=50).filter(lambda q: abs(q) < 10**6)


@st.composite
def metrics(draw, m):
    """``L L^T`` with integer unit-diagonal-ish lower triangular ``L``."""
    L = np.array([[F(0)] * m for _ in range(m)], dtype=object)
    for i in range(m):
        L[i, i] = F(draw(st.sampled_from([1, 1, 2])))
        for j in range(i):
            L[i, j] = F(draw(st.integers(-1, 1)))
    return Metric(L.dot(L.T))


@st.composite
def semidirect_frames(draw, dims=(3, 6)):
    """``[e1, e_i] = sum_j D_ij e_j`` on an abelian ideal: Jacobi holds for any ``D``."""
    m = draw(st.integers(*dims))
    c = zeros((m, m, m))
    for i in range(1, m):
        for j in range(1, m):
            v = F(draw(small))
            c[0, i, j] = v
            c[i, 0, j] = -v
    g = draw(metrics(m)) if draw(st.booleans()) else Metric.identity(m)
    return FrameSpec(m, c, g)


@st.composite
def symmetric_forms(draw, m):
    A = zeros((m, m))
    for i in range(m):
        for j in range(i, m):
            A[i, j] = A[j, i] = F(draw(small), draw(st.integers(1, 3)))
    return Tensor(A, ("l", "l"))


def assert_curvature_symmetries(T):
    """All four algebraic symmetries of a (0,4) curvature-like array."""
    assert (T == -np.transpose(T, (1, 0, 2, 3))).all()
    assert (T == -np.transpose(T, (0, 1, 3, 2))).all()
    assert (T == np.transpose(T, (2, 3, 0, 1))).all()
    bianchi = T + np.transpose(T, (1, 2, 0, 3)) + np.transpose(T, (2, 0, 1, 3))
    assert not bianchi.any()


@PROFILE
@given(rationals)
def test_rational_roundtrip(q):
    assert parse_rational(format_rational(q)) == q


@PROFILE
@given(st.integers(3, 7).flatmap(lambda m: st.tuples(metrics(m), symmetric_forms(m))))
def test_kulkarni_nomizu_has_curvature_symmetries(data):
    g, A = data
    assert_curvature_symmetries(kulkarni_nomizu(g, A).array)


@PROFILE
@given(st.integers(3, 4).flatmap(lambda m: st.tuples(metrics(m), symmetric_forms(m))))
def test_kulkarni_nomizu_matches_oracle(data):
    g, A = data
    expected = oracles.kulkarni_nomizu(g.g.array.tolist(), A.array.tolist())
    assert kulkarni_nomizu(g, A).array.tolist() == expected


@PROFILE
@given(semidirect_frames())
def test_levi_civita_is_torsion_free_and_metric(frame):
    conn = levi_civita(frame)
    assert torsion_violations(frame, conn) == []
    assert metric_violations(frame, conn) == []


@PROFILE
@given(semidirect_frames())
def test_riemann_symmetries(frame):
    assert_curvature_symmetries(geometry(frame).R_low.array)


@PROFILE
@given(semidirect_frames(dims=(4, 6)))
def test_weyl_is_totally_tracefree(frame):
    b = geometry(frame)
    C = weyl(b.R, b.S, b.Q_op, b.r, frame.metric)
    Cl = lower_operator(C, frame.metric).array
    gi = frame.metric.g_inv.array
    # contract every pair of slots with g^{-1}
    for a, c in ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)):
        moved = np.moveaxis(Cl, (a, c), (0, 1))
        trace = np.tensordot(gi, moved, axes=([0, 1], [0, 1]))
        assert not trace.any(), (a, c)


@settings(max_examples=10, deadline=None, derandomize=True)
@given(st.integers(3, 5).flatmap(
    lambda m: st.tuples(metrics(m), st.lists(small, min_size=m, max_size=m).filter(any), small, small)))
def test_lemma_on_rank_one_perturbations(data):
    # A = c1 g + c2 P with P = eta (x) eta / g(v, v) an idempotent form, so A^2 = alpha A + lambda g
    g, v, c1, c2 = data
    v = Tensor.vector(v)
    eta = g.lower(v).array
    P = np.multiply.outer(eta, eta) * (1 / g(v, v))
    A = Tensor(g.g.array * F(c1) + P * F(c2), ("l", "l"))
    rep = lemma31_check(g, A)
    assert rep.premise_holds and rep.identity_holds, rep.witness
