"""Concircular and Weyl conformal curvature operators."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..tensor_core import InputError, Metric, Tensor, identity_array, require_valence, wedge_operator


def concircular(R: Tensor, r: Fraction, g: Metric, m: int | None = None) -> Tensor:
    """``C~(X,Y)Z = R(X,Y)Z - r/(m(m-1)) (X ^ Y)Z``."""
    require_valence(R, ("l", "l", "l", "u"), "curvature operator")
    m = R.dim if m is None else m
    if m < 2:
        raise InputError("concircular tensor needs m >= 2")
    return R - Fraction(r) / (m * (m - 1)) * wedge_operator(g)


def weyl(R: Tensor, S: Tensor, Q_op: Tensor, r: Fraction, g: Metric, m: int | None = None) -> Tensor:
    """Weyl conformal curvature operator.

    ``C(X,Y) = R(X,Y) - 1/(m-2) [X ^ QY + QX ^ Y - r/(m-1) X ^ Y]`` with
    ``(X ^ QY)Z = S(Y,Z)X - g(X,Z)QY``.
    """
    require_valence(R, ("l", "l", "l", "u"), "curvature operator")
    m = R.dim if m is None else m
    if m < 3:
        raise InputError("Weyl tensor is defined for m >= 3")
    I = identity_array(m)
    G, Sa, Qa = g.g.array, S.array, Q_op.array
    # indices x, y, z -> component b
    x_qy = np.einsum("yz,xb->xyzb", Sa, I) - np.einsum("xz,yb->xyzb", G, Qa)
    qx_y = np.einsum("yz,xb->xyzb", G, Qa) - np.einsum("xz,yb->xyzb", Sa, I)
    W = wedge_operator(g).array
    corr = x_qy + qx_y - W * (Fraction(r) / (m - 1))
    return Tensor(R.array - corr * Fraction(1, m - 2), ("l", "l", "l", "u"))
