from fractions import Fraction as F

import numpy as np
import pytest

import oracles
from conftest import make_frame, random_frames
from nkcontact.riemann_engine import (
    Connection,
    FrameSpec,
    constant_curvature_fit,
    geometry,
    levi_civita,
    metric_violations,
    torsion_violations,
)
from nkcontact.tensor_core import InputError, Metric, zeros
from nkcontact.workbench.fixtures import builtin_fixture


def test_antisymmetry_enforced():
    c = zeros((2, 2, 2))
    c[0, 1, 0] = F(1)
    with pytest.raises(InputError, match="antisymmetric"):
        FrameSpec(2, c, Metric.identity(2))


def test_jacobi_witness():
    with pytest.raises(InputError, match=r"\(1, 2, 3\)"):
        make_frame(3, {(1, 2): {3: 1}, (2, 3): {1: 1}, (1, 3): {3: -1}})


def test_example_41_connection_table(ex41):
    conn = levi_civita(ex41)
    nonzero = {idx: v for idx, v in conn.nonzero()}
    assert nonzero == {(2, 1, 3): F(-2), (2, 3, 1): F(2)}
    assert conn == ex41.connection_override


@pytest.mark.parametrize("name", ["example-4.1", "su2-sasakian", "hyperbolic(3,2)", "example-4.2(1/2)"])
def test_levi_civita_matches_sympy_solve(name):
    frame = builtin_fixture(name)
    expected = oracles.solve_connection(frame.brackets, frame.metric.g.array)
    assert levi_civita(frame).gamma.tolist() == expected


@pytest.mark.parametrize("idx", range(4))
def test_levi_civita_matches_sympy_solve_random_metric(idx):
    frame = [f for f in random_frames(16) if f.dim <= 4 and not f.metric.is_identity()][idx]
    expected = oracles.solve_connection(frame.brackets, frame.metric.g.array)
    assert levi_civita(frame).gamma.tolist() == expected


@pytest.mark.parametrize("frame", random_frames(8, seed=7), ids=lambda f: f"dim{f.dim}")
def test_curvature_and_ricci_match_loop_oracle(frame):
    b = geometry(frame)
    R = oracles.curvature(b.conn.gamma, frame.brackets)
    assert b.R.array.tolist() == R
    g = frame.metric.g.array.tolist()
    assert b.S.array.tolist() == oracles.ricci(R, g)
    assert b.r == oracles.scalar(oracles.ricci(R, g), g)


def test_su2_sasakian_curvature(su2):
    b = geometry(su2)
    assert constant_curvature_fit(b.R, su2.metric).value == 1
    assert b.S == su2.metric.g * F(2)
    assert b.r == 6


def test_hyperbolic_connection_closed_form():
    lam = F(3, 2)
    frame = builtin_fixture("hyperbolic", {"m": 4, "lambda": lam})
    G = levi_civita(frame).gamma
    for i in range(1, 4):
        assert G[i, i, 0] == -lam
        assert G[i, 0, i] == lam


def test_constant_curvature_fit_witness_on_product(pfs):
    fit = constant_curvature_fit(geometry(pfs).R, pfs.metric)
    assert fit.value is None and fit.witness is not None


def test_override_is_audited_not_trusted(ex42):
    assert torsion_violations(ex42, ex42.connection_override)[0][0] == (1, 2, 2)
    assert metric_violations(ex42, ex42.connection_override)
    b = geometry(ex42, use_override=True)
    assert b.override_used and b.conn == ex42.connection_override


def test_override_without_table_is_an_error(su2):
    with pytest.raises(InputError):
        geometry(su2, use_override=True)


def test_connection_is_immutable(ex41):
    conn = levi_civita(ex41)
    with pytest.raises(ValueError):
        conn.gamma[0, 0, 0] = F(1)
    assert isinstance(conn, Connection)


def test_ricci_symmetric_for_levi_civita():
    for frame in random_frames(6, seed=3):
        S = geometry(frame).S.array
        assert np.all(S == S.T)
