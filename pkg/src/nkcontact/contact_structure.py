"""Contact metric axioms, the operator h, and the Sasakian / K-contact tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .riemann_engine import Connection, FrameSpec, GeometryBundle
from .tensor_core import (
    ONE,
    ZERO,
    InputError,
    Metric,
    Tensor,
    apply_endomorphism,
    check_vector,
    compose,
    exact_einsum,
    identity_array,
    require_valence,
    trace_endomorphism,
)


class ContactData:
    """Reeb field ``xi``, structure endomorphism ``phi`` and ``eta = g(., xi)``."""

    __slots__ = ("xi", "phi", "eta")

    def __init__(self, xi: Tensor, phi: Tensor, metric: Metric):
        check_vector(xi, metric.dim)
        require_valence(phi, ("l", "u"), "phi")
        if phi.dim != metric.dim:
            raise InputError("phi dimension does not match the frame")
        self.xi = xi
        self.phi = phi
        self.eta = metric.lower(xi)

    def __eq__(self, other) -> bool:
        return isinstance(other, ContactData) and self.xi == other.xi and self.phi == other.phi

    def __repr__(self) -> str:
        return f"ContactData(xi={self.xi.to_nested()}, phi={self.phi!r})"


@dataclass(frozen=True)
class Check:
    """One named check; ``witness`` is the first failing 1-based index tuple."""

    name: str
    passed: bool
    witness: tuple[int, ...] | None = None
    expected: Fraction | None = None
    computed: Fraction | None = None


@dataclass(frozen=True)
class CheckReport:
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def _compare(name: str, lhs: np.ndarray, rhs: np.ndarray) -> Check:
    lhs = np.asarray(lhs, dtype=object)
    rhs = np.asarray(rhs, dtype=object)
    if lhs.ndim == 0:
        ok = lhs[()] == rhs[()]
        return Check(name, bool(ok), None if ok else (), rhs[()], lhs[()])
    for idx in np.ndindex(*lhs.shape):
        if lhs[idx] != rhs[idx]:
            return Check(name, False, tuple(int(i) + 1 for i in idx), rhs[idx], lhs[idx])
    return Check(name, True)


def _require_contact(frame: FrameSpec) -> "ContactData":
    if frame.contact is None:
        raise InputError("frame carries no contact data")
    return frame.contact


def d_eta(frame: FrameSpec) -> np.ndarray:
    """``d eta(e_i,e_j) = -1/2 eta([e_i,e_j])`` for constant components."""
    cd = _require_contact(frame)
    return exact_einsum("ijk,k->ij", frame.brackets, cd.eta.array) * Fraction(-1, 2)


def check_contact_axioms(frame: FrameSpec) -> CheckReport:
    cd = _require_contact(frame)
    m = frame.dim
    g = frame.metric.g.array
    xi, phi, eta = cd.xi.array, cd.phi.array, cd.eta.array
    phi_sq = exact_einsum("ia,ab->ib", phi, phi)
    eta_phi = exact_einsum("ia,a->i", phi, eta)
    phi_xi = exact_einsum("a,ab->b", xi, phi)
    # g(phi e_i, phi e_j)
    g_phi = exact_einsum("ia,ab,jb->ij", phi, g, phi)
    # g(e_i, phi e_j)
    g_x_phiy = exact_einsum("ja,ia->ij", phi, g)
    checks = (
        _compare("eta(xi)=1", np.array(exact_einsum("a,a->", eta, xi), dtype=object), np.array(ONE, dtype=object)),
        _compare("phi xi=0", phi_xi, np.full((m,), ZERO, dtype=object)),
        _compare("eta o phi=0", eta_phi, np.full((m,), ZERO, dtype=object)),
        _compare("phi^2=-I+eta(x)xi", phi_sq, -identity_array(m) + np.multiply.outer(eta, xi)),
        _compare("g(phiX,phiY)=g(X,Y)-eta(X)eta(Y)", g_phi, g - np.multiply.outer(eta, eta)),
        _compare("d eta(X,Y)=g(X,phiY)", d_eta(frame), g_x_phiy),
    )
    return CheckReport(checks)


def lie_bracket_matrix(frame: FrameSpec, X: Tensor) -> np.ndarray:
    """Matrix of ``ad_X = [X, .]`` in the endomorphism layout."""
    return exact_einsum("a,aib->ib", X.array, frame.brackets)


def compute_h(frame: FrameSpec) -> Tensor:
    """``h X = 1/2 ([xi, phi X] - phi [xi, X])``."""
    cd = _require_contact(frame)
    ad = lie_bracket_matrix(frame, cd.xi)
    phi = cd.phi.array
    ad_phi = exact_einsum("ia,ab->ib", phi, ad)
    phi_ad = exact_einsum("ia,ab->ib", ad, phi)
    return Tensor((ad_phi - phi_ad) * Fraction(1, 2), ("l", "u"))


def nabla_xi(frame: FrameSpec, conn: Connection) -> Tensor:
    """Endomorphism ``X -> nabla_X xi`` (constant components of xi)."""
    cd = _require_contact(frame)
    return Tensor(exact_einsum("k,ikl->il", cd.xi.array, conn.gamma), ("l", "u"))


def _lowered_pair(A: Tensor, g: Metric) -> tuple[np.ndarray, np.ndarray]:
    """``g(A e_i, e_j)`` and its transpose; equal iff ``A`` is g-symmetric."""
    low = exact_einsum("ia,aj->ij", A.array, g.g.array)
    return low, low.T.copy()


def check_h_identities(frame: FrameSpec, h: Tensor, conn: Connection) -> CheckReport:
    cd = _require_contact(frame)
    m = frame.dim
    hphi = compose(h, cd.phi)
    phih = compose(cd.phi, h)
    low, low_t = _lowered_pair(h, frame.metric)
    rhs = -(cd.phi.array) - phih.array
    checks = (
        _compare("h xi=0", apply_endomorphism(h, cd.xi).array, np.full((m,), ZERO, dtype=object)),
        _compare("h phi=-phi h", hphi.array, -phih.array),
        _compare("Tr h=0", np.array(trace_endomorphism(h), dtype=object), np.array(ZERO, dtype=object)),
        _compare("Tr phi h=0", np.array(trace_endomorphism(phih), dtype=object), np.array(ZERO, dtype=object)),
        _compare("h g-symmetric", low, low_t),
        _compare("nabla_X xi=-phi X-phi h X", nabla_xi(frame, conn).array, rhs),
    )
    return CheckReport(checks)


def sasakian_and_kcontact(frame: FrameSpec, bundle: GeometryBundle) -> CheckReport:
    """Sasakian: ``R(X,Y)xi = eta(Y)X - eta(X)Y``; K-contact: ``L_xi g = 0``."""
    cd = _require_contact(frame)
    m = frame.dim
    eta = cd.eta.array
    R_xi = exact_einsum("ijkl,k->ijl", bundle.R.array, cd.xi.array)
    I = identity_array(m)
    model = np.einsum("j,il->ijl", eta, I) - np.einsum("i,jl->ijl", eta, I)
    nx = exact_einsum("ia,ab->ib", nabla_xi(frame, bundle.conn).array, frame.metric.g.array)
    lie_g = nx + nx.T
    checks = (
        _compare("sasakian", R_xi, model),
        _compare("k-contact", lie_g, np.full((m, m), ZERO, dtype=object)),
    )
    return CheckReport(checks)
