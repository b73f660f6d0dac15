"""Levi-Civita connection and curvature of a homogeneous frame.

A frame is given by constant structure constants ``[e_i, e_j] = c_ij^k e_k``
and a constant metric, so every derivative term in the Koszul formula and in
the curvature drops out and the whole computation is rational linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .tensor_core import (
    ZERO,
    InputError,
    Metric,
    Tensor,
    exact_einsum,
    exact_linear_fit,
    lower_operator,
    wedge_operator,
    zeros,
)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Connection:
    """``gamma[i, j, k]`` is the ``e_k`` component of ``nabla_{e_i} e_j`` (0-based array)."""

    gamma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "gamma", _frozen(np.asarray(self.gamma, dtype=object)))

    @property
    def dim(self) -> int:
        return self.gamma.shape[0]

    def covariant(self, i: int, j: int) -> Tensor:
        """``nabla_{e_i} e_j`` as a vector (1-based indices)."""
        return Tensor(self.gamma[i - 1, j - 1].copy(), ("u",))

    def __eq__(self, other) -> bool:
        return isinstance(other, Connection) and bool(np.all(self.gamma == other.gamma))

    def nonzero(self):
        for idx in zip(*np.nonzero(self.gamma != 0)):
            yield tuple(int(i) + 1 for i in idx), self.gamma[idx]


@dataclass(frozen=True, eq=False)
class FrameSpec:
    """Homogeneous frame: brackets, metric, optional contact data.

    ``brackets[i, j, k]`` is the ``e_k`` component of ``[e_i, e_j]`` (0-based
    array).  ``expected`` holds externally printed values (currently only an
    ``"h"`` endomorphism) that reports compare against.
    """

    dim: int
    brackets: np.ndarray
    metric: Metric
    contact: "ContactData | None" = None
    connection_override: Connection | None = None
    params: Mapping[str, Fraction] = field(default_factory=dict)
    expected: Mapping[str, Tensor] = field(default_factory=dict)

    def __post_init__(self):
        c = np.asarray(self.brackets, dtype=object)
        if c.shape != (self.dim,) * 3:
            raise InputError(f"structure constants must have shape {(self.dim,) * 3}")
        if self.metric.dim != self.dim:
            raise InputError("metric dimension does not match frame dimension")
        object.__setattr__(self, "brackets", _frozen(c))
        object.__setattr__(self, "params", dict(self.params))
        object.__setattr__(self, "expected", dict(self.expected))
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    if c[i, j, k] != -c[j, i, k]:
                        raise InputError(f"brackets not antisymmetric at ({i + 1},{j + 1})")
        witness = jacobi_violation(c)
        if witness is not None:
            raise InputError(f"Jacobi identity fails for frame triple {witness}")
        if self.connection_override is not None and self.connection_override.dim != self.dim:
            raise InputError("connection override has wrong dimension")

    def bracket(self, i: int, j: int) -> Tensor:
        return Tensor(self.brackets[i - 1, j - 1].copy(), ("u",))

    def bracket_vectors(self, X: Tensor, Y: Tensor) -> Tensor:
        return Tensor(exact_einsum("i,j,ijk->k", X.array, Y.array, self.brackets), ("u",))

    def with_contact(self, contact) -> "FrameSpec":
        return FrameSpec(self.dim, self.brackets, self.metric, contact,
                         self.connection_override, self.params, self.expected)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FrameSpec):
            return NotImplemented
        return (
            self.dim == other.dim
            and bool(np.all(self.brackets == other.brackets))
            and self.metric == other.metric
            and self.contact == other.contact
            and self.connection_override == other.connection_override
            and self.params == other.params
            and self.expected == other.expected
        )


def jacobi_violation(c: np.ndarray) -> tuple[int, int, int] | None:
    """First triple ``i<j<k`` (1-based) where the cyclic Jacobi sum is nonzero."""
    m = c.shape[0]
    # [e_i, [e_j, e_k]] = sum_a c[j,k,a] c[i,a,:]
    double = exact_einsum("jka,ial->ijkl", c, c)
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(j + 1, m):
                s = double[i, j, k] + double[j, k, i] + double[k, i, j]
                if any(x != 0 for x in s):
                    return (i + 1, j + 1, k + 1)
    return None


@dataclass(frozen=True, eq=False)
class GeometryBundle:
    """Curvature stack of one frame: connection, R, R_low, Ricci package."""

    conn: Connection
    R: Tensor
    R_low: Tensor
    S: Tensor
    Q_op: Tensor
    S2: Tensor
    r: Fraction
    metric: Metric
    override_used: bool = False

    @property
    def dim(self) -> int:
        return self.R.dim


def levi_civita(frame: FrameSpec) -> Connection:
    """Koszul formula for constant metric coefficients.

    ``2 g(nabla_i e_j, e_k) = -g(e_i,[e_j,e_k]) - g(e_j,[e_i,e_k]) + g(e_k,[e_i,e_j])``
    """
    g = frame.metric.g.array
    # c_low[i,j,k] = g([e_i,e_j], e_k)
    c_low = exact_einsum("ija,ak->ijk", frame.brackets, g)
    half = Fraction(1, 2)
    m = frame.dim
    gamma_low = zeros((m, m, m))
    for i in range(m):
        for j in range(m):
            for k in range(m):
                gamma_low[i, j, k] = half * (-c_low[j, k, i] - c_low[i, k, j] + c_low[i, j, k])
    gamma = exact_einsum("ijk,kl->ijl", gamma_low, frame.metric.g_inv.array)
    return Connection(gamma)


def torsion_violations(frame: FrameSpec, conn: Connection) -> list[tuple[tuple[int, int, int], Fraction]]:
    """Entries where ``Gamma_ij^k - Gamma_ji^k - c_ij^k`` is nonzero (1-based ``(i,j,k)``)."""
    G, c = conn.gamma, frame.brackets
    out = []
    m = frame.dim
    for i in range(m):
        for j in range(i + 1, m):
            for k in range(m):
                t = G[i, j, k] - G[j, i, k] - c[i, j, k]
                if t != 0:
                    out.append(((i + 1, j + 1, k + 1), t))
    return out


def metric_violations(frame: FrameSpec, conn: Connection) -> list[tuple[tuple[int, int, int], Fraction]]:
    """Entries of ``g(nabla_i e_j, e_k) + g(e_j, nabla_i e_k)`` that are nonzero."""
    low = exact_einsum("ijl,lk->ijk", conn.gamma, frame.metric.g.array)
    m = frame.dim
    out = []
    for i in range(m):
        for j in range(m):
            for k in range(j, m):
                t = low[i, j, k] + low[i, k, j]
                if t != 0:
                    out.append(((i + 1, j + 1, k + 1), t))
    return out


def riemann(frame: FrameSpec, conn: Connection) -> Tensor:
    """``R(e_i,e_j)e_k = nabla_i nabla_j e_k - nabla_j nabla_i e_k - nabla_[e_i,e_j] e_k``."""
    G, c = conn.gamma, frame.brackets
    if conn.dim != frame.dim:
        raise InputError("connection dimension does not match frame")
    first = exact_einsum("jka,ial->ijkl", G, G)
    bracket_term = exact_einsum("ija,akl->ijkl", c, G)
    R = first - np.transpose(first, (1, 0, 2, 3)) - bracket_term
    return Tensor(R, ("l", "l", "l", "u"))


def ricci_package(frame: FrameSpec, R: Tensor) -> tuple[Tensor, Tensor, Tensor, Fraction]:
    """Ricci tensor, Ricci operator, ``S^2`` and scalar curvature.

    ``S(X,Y)`` is the trace of ``Z -> R(Z,X)Y``, which is positive on round
    spheres.
    """
    if R.valence != ("l", "l", "l", "u"):
        raise InputError("ricci_package expects a (1,3) curvature operator")
    m = R.dim
    S = zeros((m, m))
    for j in range(m):
        for k in range(m):
            S[j, k] = sum((R.array[i, j, k, i] for i in range(m)), ZERO)
    Q = exact_einsum("ia,ab->ib", S, frame.metric.g_inv.array)
    S2 = exact_einsum("ia,ab->ib", Q, S)
    r = sum((Q[i, i] for i in range(m)), ZERO)
    return Tensor(S, ("l", "l")), Tensor(Q, ("l", "u")), Tensor(S2, ("l", "l")), r


def geometry(frame: FrameSpec, use_override: bool = False) -> GeometryBundle:
    """Full curvature stack; ``use_override`` swaps in the frame's connection override."""
    if use_override:
        if frame.connection_override is None:
            raise InputError("frame carries no connection override")
        conn = frame.connection_override
    else:
        conn = levi_civita(frame)
    R = riemann(frame, conn)
    S, Q, S2, r = ricci_package(frame, R)
    return GeometryBundle(conn, R, lower_operator(R, frame.metric), S, Q, S2, r,
                          frame.metric, use_override)


@dataclass(frozen=True)
class CurvatureFit:
    """Constant-curvature model ``R = c (X ^ Y)``; ``value`` is ``None`` on no fit."""

    value: Fraction | None
    witness: tuple[int, ...] | None = None
    residual: Fraction | None = None

    @property
    def fits(self) -> bool:
        return self.value is not None


def constant_curvature_fit(R: Tensor, g: Metric) -> CurvatureFit:
    """Find the exact ``c`` with ``R(X,Y)Z = c[g(Y,Z)X - g(X,Z)Y]``, if any."""
    W = wedge_operator(g).array
    Ra = R.array
    rows = ((tuple(int(x) + 1 for x in idx), (W[idx],), Ra[idx]) for idx in np.ndindex(*Ra.shape))
    fit = exact_linear_fit(rows, 1)
    if not fit.consistent:
        return CurvatureFit(None, fit.witness, fit.residual)
    return CurvatureFit(fit.value_or_zero(0))
