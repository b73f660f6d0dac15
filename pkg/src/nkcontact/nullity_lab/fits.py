"""Exact fits of the nullity constants and of the eta-Einstein coefficients.

Every fit absorbs equations in frame-index order and fails at the first index
tuple that contradicts the earlier ones; there is no tolerance anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..contact_structure import ContactData
from ..riemann_engine import FrameSpec, GeometryBundle
from ..tensor_core import (
    ZERO,
    InputError,
    Metric,
    Tensor,
    exact_einsum,
    exact_linear_fit,
    identity_array,
)


@dataclass(frozen=True)
class NullityFit:
    """(kappa, mu) fit of ``R(X,Y)xi``.

    ``mu`` is ``None`` together with ``mu_indeterminate`` when ``h = 0`` leaves
    it unconstrained.  ``per_pair`` maps a frame index ``i`` to the kappa fitted
    from ``R(e_i, xi)xi`` alone (``None`` when that vector is not a multiple of
    ``e_i - eta(e_i)xi``).
    """

    kappa: Fraction | None
    mu: Fraction | None
    global_fit: bool
    mu_indeterminate: bool = False
    per_pair: dict[int, Fraction | None] = field(default_factory=dict)
    witness: tuple[int, ...] | None = None
    residual: Fraction | None = None


def _contact(frame: FrameSpec) -> ContactData:
    if frame.contact is None:
        raise InputError("frame carries no contact data")
    return frame.contact


def fit_kappa_mu(frame: FrameSpec, bundle: GeometryBundle, h: Tensor) -> NullityFit:
    """Solve ``R(X,Y)xi = kappa[eta(Y)X - eta(X)Y] + mu[eta(Y)hX - eta(X)hY]``."""
    cd = _contact(frame)
    m = frame.dim
    xi, eta = cd.xi.array, cd.eta.array
    R_xi = exact_einsum("ijkl,k->ijl", bundle.R.array, xi)
    I = identity_array(m)
    H = h.array
    kcol = np.einsum("j,il->ijl", eta, I) - np.einsum("i,jl->ijl", eta, I)
    mcol = np.einsum("j,il->ijl", eta, H) - np.einsum("i,jl->ijl", eta, H)

    rows = (
        (tuple(int(a) + 1 for a in idx), (kcol[idx], mcol[idx]), R_xi[idx])
        for idx in np.ndindex(m, m, m)
    )
    fit = exact_linear_fit(rows, 2)
    mu_free = all(v == 0 for v in mcol.flat)

    per_pair: dict[int, Fraction | None] = {}
    # R(e_i, xi)xi against kappa (e_i - eta(e_i) xi)
    R_pair = exact_einsum("ijkl,j,k->il", bundle.R.array, xi, xi)
    for i in range(m):
        model = I[i] - eta[i] * xi
        if all(v == 0 for v in model):
            continue
        local = exact_linear_fit(
            ((l + 1, (model[l],), R_pair[i, l]) for l in range(m)), 1
        )
        per_pair[i + 1] = local.value_or_zero(0) if local.consistent else None

    if not fit.consistent:
        return NullityFit(None, None, False, mu_free, per_pair, fit.witness, fit.residual)
    kappa = fit.values[0]
    if kappa is None:
        kappa = ZERO
    mu = None if mu_free else fit.value_or_zero(1)
    return NullityFit(kappa, mu, True, mu_free, per_pair)


@dataclass(frozen=True)
class EtaEinsteinFit:
    """``S = c1 g + c2 eta (x) eta``; coefficients are meaningful only when ``exact``."""

    c1: Fraction | None
    c2: Fraction | None
    exact: bool
    witness: tuple[int, int] | None = None

    @property
    def einstein(self) -> bool:
        return self.exact and self.c2 == 0


def eta_einstein_fit(S: Tensor, g: Metric, eta: Tensor) -> EtaEinsteinFit:
    m = S.dim
    Sa, G, e = S.array, g.g.array, eta.array
    rows = (
        ((i + 1, j + 1), (G[i, j], e[i] * e[j]), Sa[i, j])
        for i in range(m)
        for j in range(m)
    )
    fit = exact_linear_fit(rows, 2)
    if not fit.consistent:
        return EtaEinsteinFit(None, None, False, fit.witness)
    return EtaEinsteinFit(fit.value_or_zero(0), fit.value_or_zero(1), True)


def einstein_constant(S: Tensor, g: Metric) -> Fraction | None:
    """``c`` with ``S = c g`` exactly, else ``None``."""
    m = S.dim
    rows = (((i + 1, j + 1), (g.g.array[i, j],), S.array[i, j]) for i in range(m) for j in range(m))
    fit = exact_linear_fit(rows, 1)
    return fit.value_or_zero(0) if fit.consistent else None


def eta_einstein_crosschecks(fit: EtaEinsteinFit, r: Fraction, kappa: Fraction | None, n: int | None) -> dict:
    """Compare fitted coefficients with closed forms that assume an N(kappa) structure.

    Returns plain values: trace relations ``r = (2n+1)c1 + c2`` and
    ``2n kappa = c1 + c2``; the closed form ``(r/2n - kappa, (2n+1)kappa - r/2n)``;
    and two alternative coefficient pairs quoted in the literature, reported
    with whether they are consistent with ``c1 + c2 = 2n kappa``.
    """
    out: dict = {}
    if not fit.exact or kappa is None or not n:
        return out
    c1, c2 = fit.c1, fit.c2
    k = Fraction(kappa)
    two_n = 2 * n
    q = Fraction(r) / (two_n * (two_n + 1))
    out["trace_r"] = {"lhs": r, "rhs": (two_n + 1) * c1 + c2, "holds": r == (two_n + 1) * c1 + c2}
    out["trace_kappa"] = {"lhs": two_n * k, "rhs": c1 + c2, "holds": two_n * k == c1 + c2}
    pc1 = Fraction(r) / two_n - k
    pc2 = (two_n + 1) * k - Fraction(r) / two_n
    out["closed_form"] = {"c1": pc1, "c2": pc2, "matches": (pc1, pc2) == (c1, c2)}
    a, b = k - q, k + q
    out["alt_pair_plus"] = {
        "c1": a, "c2": b, "matches": (a, b) == (c1, c2), "trace_consistent": a + b == two_n * k,
    }
    a2 = -(k + (two_n - 1) * q)
    b2 = (two_n + 1) * k + (two_n - 1) * q
    out["alt_pair_weyl"] = {
        "c1": a2, "c2": b2, "matches": (a2, b2) == (c1, c2), "trace_consistent": a2 + b2 == two_n * k,
    }
    return out
