"""Curvature-condition deciders, the Weyl-pseudosymmetry solver and the
Kulkarni-Nomizu product criterion.

Every decider is exact: a condition holds iff its defining tensor vanishes
entrywise, and a negative verdict carries the 1-based index tuple of a nonzero
entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..riemann_engine import FrameSpec, GeometryBundle
from ..tensor_core import (
    InputError,
    Metric,
    Tensor,
    derivation_action_full,
    derivation_by,
    exact_einsum,
    exact_linear_fit,
    kulkarni_nomizu,
    lower_operator,
    operator_at,
    q_tensor,
    raise_operator,
    require_valence,
)

CONDITION_KINDS = (
    "CtildeXi_Ctilde",
    "CtildeXi_R",
    "CtildeXi_S",
    "CtildeXi_C",
    "C_dot_S",
)

INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class ConditionVerdict:
    condition: str
    holds: bool
    witness: tuple[int, ...] | None = None
    fitted_fC: Fraction | str | None = None
    value: Fraction | None = None
    note: str | None = None


@dataclass(frozen=True)
class CurvatureTensors:
    """Tensors the deciders act on; ``C`` is ``None`` below dimension 3."""

    Ctilde: Tensor
    C: Tensor | None


def _first_nonzero(arr: np.ndarray) -> tuple[tuple[int, ...], Fraction] | None:
    nz = np.nonzero(arr != 0)
    if len(nz[0]) == 0:
        return None
    idx = tuple(int(a[0]) for a in nz)
    return tuple(i + 1 for i in idx), arr[idx]


def _xi_condition(kind: str, frame: FrameSpec, target: Tensor, Ctilde: Tensor) -> ConditionVerdict:
    """``C~(xi, e_u) . T = 0`` for every ``u``; witness is ``(u, x_1, .., x_l)``."""
    if frame.contact is None:
        raise InputError(f"{kind} needs contact data")
    m = frame.dim
    xi = frame.contact.xi
    for u in range(1, m + 1):
        E = operator_at(Ctilde, xi, Tensor.basis_vector(m, u))
        if E.is_zero():
            continue
        D = derivation_by(E, target)
        hit = _first_nonzero(D.array)
        if hit is not None:
            return ConditionVerdict(kind, False, (u,) + hit[0], value=hit[1])
    return ConditionVerdict(kind, True)


def check_curvature_condition(
    kind: str,
    frame: FrameSpec,
    bundle: GeometryBundle,
    tensors: CurvatureTensors,
) -> ConditionVerdict:
    g = frame.metric
    if kind == "CtildeXi_Ctilde":
        return _xi_condition(kind, frame, lower_operator(tensors.Ctilde, g), tensors.Ctilde)
    if kind == "CtildeXi_R":
        return _xi_condition(kind, frame, bundle.R_low, tensors.Ctilde)
    if kind == "CtildeXi_S":
        return _xi_condition(kind, frame, bundle.S, tensors.Ctilde)
    if kind == "CtildeXi_C":
        if tensors.C is None:
            raise InputError("Weyl tensor unavailable (m < 3)")
        return _xi_condition(kind, frame, lower_operator(tensors.C, g), tensors.Ctilde)
    if kind == "C_dot_S":
        if tensors.C is None:
            raise InputError("Weyl tensor unavailable (m < 3)")
        # (C(X,Y).S)(Z,W) = -S(C(X,Y)Z,W) - S(Z,C(X,Y)W); witness (Z, W, X, Y)
        D = derivation_action_full(tensors.C, bundle.S)
        hit = _first_nonzero(D.array)
        if hit is None:
            return ConditionVerdict(kind, True)
        return ConditionVerdict(kind, False, hit[0], value=hit[1])
    raise InputError(f"unknown condition kind {kind!r}")


def r_dot_equals(bundle: GeometryBundle, A: Tensor, B: Tensor, g: Metric, kind: str) -> ConditionVerdict:
    """Instance check ``R . A = R . B`` for two (1,3) operators, compared on their lowered forms."""
    lhs = derivation_action_full(bundle.R, lower_operator(A, g))
    rhs = derivation_action_full(bundle.R, lower_operator(B, g))
    hit = _first_nonzero((lhs - rhs).array)
    if hit is None:
        return ConditionVerdict(kind, True)
    return ConditionVerdict(kind, False, hit[0], value=hit[1])


# ---------------------------------------------------------------------------
# S^2 relation under C.S = 0
# ---------------------------------------------------------------------------

def s_square_coefficients(kappa: Fraction, r: Fraction, n: int) -> tuple[Fraction, Fraction]:
    """Coefficients ``(a, b)`` in ``S^2 = a S + b g``."""
    k, r = Fraction(kappa), Fraction(r)
    q = (2 * n - 1) * r / (2 * n * (2 * n + 1))
    return (2 * n - 1) * k - q, -2 * n * k * (k + q)


@dataclass(frozen=True)
class SSquareCheck:
    status: str  # pass | fail | out-of-hypothesis | premise-false | no-kappa
    formula_holds: bool | None
    a: Fraction | None = None
    b: Fraction | None = None
    witness: tuple[int, int] | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None


def s_square_formula_check(
    bundle: GeometryBundle,
    kappa: Fraction | None,
    n: int | None,
    c_dot_s_holds: bool,
) -> SSquareCheck:
    if kappa is None or n is None:
        return SSquareCheck("no-kappa", None)
    a, b = s_square_coefficients(kappa, bundle.r, n)
    rhs = bundle.S.array * a + bundle.metric.g.array * b
    lhs = bundle.S2.array
    witness, lv, rv = None, None, None
    for idx in np.ndindex(*lhs.shape):
        if lhs[idx] != rhs[idx]:
            witness, lv, rv = (idx[0] + 1, idx[1] + 1), lhs[idx], rhs[idx]
            break
    holds = witness is None
    if n < 2:
        status = "out-of-hypothesis"
    elif not c_dot_s_holds:
        status = "premise-false"
    else:
        status = "pass" if holds else "fail"
    return SSquareCheck(status, holds, a, b, witness, lv, rv)


# ---------------------------------------------------------------------------
# Weyl pseudosymmetry
# ---------------------------------------------------------------------------

def pseudosymmetry_tensors(bundle: GeometryBundle, C: Tensor) -> tuple[Tensor, Tensor]:
    """``(R . C, Q(g, C))`` as (0,6) tensors, slots ``(Z, U, V, W; X, Y)``."""
    C_low = lower_operator(C, bundle.metric)
    return derivation_action_full(bundle.R, C_low), q_tensor(bundle.metric, C_low)


def pseudosymmetry_fit(
    bundle: GeometryBundle,
    C: Tensor,
    kappa: Fraction | None = None,
) -> ConditionVerdict:
    """Decide ``R . C = f_C Q(g, C)`` for a constant ``f_C``.

    ``fitted_fC`` is ``"indeterminate"`` exactly when both sides vanish.
    When ``kappa`` is supplied, ``note`` records whether ``f_C = -kappa``.
    """
    RC, QC = pseudosymmetry_tensors(bundle, C)
    rc, qc = RC.array, QC.array
    rc_zero = not np.any(rc != 0)
    qc_zero = not np.any(qc != 0)
    if rc_zero and qc_zero:
        return ConditionVerdict("pseudosymmetry", True, fitted_fC=INDETERMINATE, note="semisymmetric")
    if qc_zero:
        hit = _first_nonzero(rc)
        return ConditionVerdict("pseudosymmetry", False, hit[0], value=hit[1],
                                note="Q(g,C) vanishes but R.C does not")
    mask = (rc != 0) | (qc != 0)
    rows = (
        (tuple(int(i) + 1 for i in idx), (qc[idx],), rc[idx])
        for idx in zip(*np.nonzero(mask))
    )
    fit = exact_linear_fit(rows, 1)
    if not fit.consistent:
        return ConditionVerdict("pseudosymmetry", False, fit.witness, value=fit.residual,
                                note="no constant f_C")
    f = fit.value_or_zero(0)
    note = None
    if kappa is not None:
        note = "f_C = -kappa" if f == -Fraction(kappa) else "f_C != -kappa"
    return ConditionVerdict("pseudosymmetry", True, fitted_fC=f, note=note)


# ---------------------------------------------------------------------------
# Kulkarni-Nomizu criterion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lemma31Report:
    premise_holds: bool
    alpha: Fraction | None
    lam: Fraction | None
    identity_holds: bool | None
    witness: tuple[int, ...] | None = None
    premise_witness: tuple[int, int] | None = None


def square_form(A: Tensor, g: Metric) -> Tensor:
    """``A^2(X,Y) = A(A^# X, Y)``."""
    require_valence(A, ("l", "l"), "symmetric form")
    return Tensor(exact_einsum("xa,ab,by->xy", A.array, g.g_inv.array, A.array), ("l", "l"))


def lemma31_check(g: Metric, A: Tensor) -> Lemma31Report:
    """Solve ``A^2 = alpha A + lambda g`` and, when solvable, verify
    ``T . T = alpha Q(g, T)`` for ``T = g ^ A`` entrywise.
    """
    T = kulkarni_nomizu(g, A)
    A2 = square_form(A, g).array
    m = A.dim
    rows = (
        ((i + 1, j + 1), (A.array[i, j], g.g.array[i, j]), A2[i, j])
        for i in range(m)
        for j in range(m)
    )
    fit = exact_linear_fit(rows, 2)
    if not fit.consistent:
        return Lemma31Report(False, None, None, None, premise_witness=fit.witness)
    alpha, lam = fit.value_or_zero(0), fit.value_or_zero(1)
    TT = derivation_action_full(raise_operator(T, g), T)
    QT = q_tensor(g, T)
    hit = _first_nonzero((TT - alpha * QT).array)
    return Lemma31Report(True, alpha, lam, hit is None, None if hit is None else hit[0])
