"""Identities satisfied by N(kappa)-contact metric structures, checked entrywise.

Each identity carries an applicability gate.  Identities whose coefficients
come from the ``n > 1`` non-Sasakian theory are tagged ``out-of-hypothesis``
outside that range instead of being reported as failures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..contact_structure import ContactData
from ..riemann_engine import FrameSpec, GeometryBundle
from ..tensor_core import Tensor, compose, exact_einsum, identity_array, trace_endomorphism, zeros
from .fits import NullityFit

PASS, FAIL, OUT = "pass", "fail", "out-of-hypothesis"


@dataclass(frozen=True)
class IdentityResult:
    ident: str
    status: str
    holds: bool
    witness: tuple[int, ...] | None = None
    lhs: Fraction | None = None
    rhs: Fraction | None = None


@dataclass(frozen=True)
class IdentitySuite:
    results: tuple[IdentityResult, ...] = ()
    skipped: str | None = None

    def __getitem__(self, ident: str) -> IdentityResult:
        for res in self.results:
            if res.ident == ident:
                return res
        raise KeyError(ident)

    @property
    def failures(self) -> list[IdentityResult]:
        return [r for r in self.results if r.status == FAIL]


def _first_difference(lhs, rhs):
    lhs = np.asarray(lhs, dtype=object)
    rhs = np.asarray(rhs, dtype=object)
    if lhs.ndim == 0:
        same = lhs[()] == rhs[()]
        return None if same else (), lhs[()], rhs[()]
    for idx in np.ndindex(*lhs.shape):
        if lhs[idx] != rhs[idx]:
            return tuple(int(i) + 1 for i in idx), lhs[idx], rhs[idx]
    return None, None, None


def frame_n(m: int) -> int | None:
    """``n`` with ``m = 2n + 1``; ``None`` for even ``m``."""
    return (m - 1) // 2 if m % 2 == 1 else None


def identity_suite(
    frame: FrameSpec,
    bundle: GeometryBundle,
    h: Tensor,
    fit: NullityFit,
    sasakian: bool,
) -> IdentitySuite:
    if frame.contact is None:
        return IdentitySuite(skipped="no contact data")
    if not fit.global_fit:
        return IdentitySuite(skipped="no global kappa fit")
    if fit.mu not in (None, 0):
        return IdentitySuite(skipped=f"mu = {fit.mu} is nonzero: not an N(kappa) structure")
    n = frame_n(frame.dim)
    if n is None:
        return IdentitySuite(skipped="even frame dimension")
    cd: ContactData = frame.contact
    k = fit.kappa
    m = frame.dim
    g = frame.metric.g.array
    phi, H, Q = cd.phi, h, bundle.Q_op
    xi, eta = cd.xi.array, cd.eta.array
    S = bundle.S.array
    I = identity_array(m)
    strict = n > 1 and not sasakian

    hphi = compose(H, phi).array
    qphi = compose(Q, phi).array
    phiq = compose(phi, Q).array
    h2 = compose(H, H)
    phi2 = compose(phi, phi).array
    R_xi_first = exact_einsum("i,ixyl->xyl", xi, bundle.R.array)
    eta_R = exact_einsum("xyzl,l->xyz", bundle.R.array, eta)
    S_x_phiy = exact_einsum("ya,xa->xy", phi.array, S)
    S_phix_y = exact_einsum("xa,ay->xy", phi.array, S)
    g_phix_hy = exact_einsum("xa,ab,yb->xy", phi.array, g, H.array)
    S_phi_phi = exact_einsum("xa,ab,yb->xy", phi.array, S, phi.array)
    g_hx_y = exact_einsum("xa,ay->xy", H.array, g)

    cases = [
        ("Q phi - phi Q = 4(n-1) h phi", strict, qphi - phiq, 4 * (n - 1) * hphi),
        ("h^2 = (kappa-1) phi^2", True, h2.array, (k - 1) * phi2),
        ("Q xi = 2n kappa xi", True, exact_einsum("a,ab->b", xi, Q.array), 2 * n * k * xi),
        (
            "R(xi,X)Y = kappa[g(X,Y) xi - eta(Y) X]",
            True,
            R_xi_first,
            k * (np.einsum("xy,l->xyl", g, xi) - np.einsum("y,xl->xyl", eta, I)),
        ),
        ("Tr h^2 = 2n(1-kappa)", True, trace_endomorphism(h2), 2 * n * (1 - k)),
        (
            "S(X,phi Y) + S(phi X,Y) = 2(2n-2) g(phi X,hY)",
            strict,
            S_x_phiy + S_phix_y,
            2 * (2 * n - 2) * g_phix_hy,
        ),
        (
            "S(phi X,phi Y) = S(X,Y) - 2n kappa eta(X)eta(Y) - 2(2n-2) g(hX,Y)",
            strict,
            S_phi_phi,
            S - 2 * n * k * np.multiply.outer(eta, eta) - 2 * (2 * n - 2) * g_hx_y,
        ),
        ("S(X,xi) = 2n kappa eta(X)", True, exact_einsum("xa,a->x", S, xi), 2 * n * k * eta),
        (
            "Q phi + phi Q = 2 phi Q + 2(2n-2) h phi",
            strict,
            qphi + phiq,
            2 * phiq + 2 * (2 * n - 2) * hphi,
        ),
        (
            "eta(R(X,Y)Z) = kappa[g(Y,Z)eta(X) - g(X,Z)eta(Y)]",
            True,
            eta_R,
            k * (np.einsum("yz,x->xyz", g, eta) - np.einsum("xz,y->xyz", g, eta)),
        ),
        ("S(phi X,xi) = 0", True, exact_einsum("xa,ab,b->x", phi.array, S, xi), zeros((m,))),
        ("r = 2n(2n-2+kappa)", strict, bundle.r, 2 * n * (2 * n - 2 + k)),
    ]
    results = []
    for ident, applicable, lhs, rhs in cases:
        witness, lv, rv = _first_difference(lhs, rhs)
        holds = witness is None
        status = (PASS if holds else FAIL) if applicable else OUT
        results.append(IdentityResult(ident, status, holds, witness, lv, rv))
    return IdentitySuite(tuple(results))
