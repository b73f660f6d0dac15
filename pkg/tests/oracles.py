"""Slow, independent reference implementations used only by the tests.

Everything here works on nested Python lists of Fractions with explicit loops
straight from the defining formulas, so it shares no code path with the
package's vectorised contractions.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import sympy

Z = Fraction(0)


def to_lists(arr):
    return arr.tolist() if hasattr(arr, "tolist") else arr


def solve_connection(c, g):
    """Levi-Civita connection by solving torsion-free + metric equations with sympy."""
    c, g = to_lists(c), to_lists(g)
    m = len(g)
    syms = {(i, j, k): sympy.Symbol(f"G_{i}_{j}_{k}") for i, j, k in product(range(m), repeat=3)}
    eqs = []
    for i, j, k in product(range(m), repeat=3):
        # Gamma is the upper-index table: nabla_i e_j = sum_k G_ijk e_k
        if i < j:
            eqs.append(syms[i, j, k] - syms[j, i, k] - sympy.Rational(c[i][j][k]))
        if j <= k:
            low_jk = sum(syms[i, j, a] * sympy.Rational(g[a][k]) for a in range(m))
            low_kj = sum(syms[i, k, a] * sympy.Rational(g[a][j]) for a in range(m))
            eqs.append(low_jk + low_kj)
    sol = sympy.solve(eqs, list(syms.values()), dict=True)
    assert len(sol) == 1
    out = [[[Z] * m for _ in range(m)] for _ in range(m)]
    for key, s in syms.items():
        v = sympy.Rational(sol[0][s])
        out[key[0]][key[1]][key[2]] = Fraction(int(v.p), int(v.q))
    return out


def nabla(G, X, Y):
    """``nabla_X Y`` for constant-coefficient vectors."""
    m = len(G)
    return [sum((X[i] * Y[j] * G[i][j][k] for i in range(m) for j in range(m)), Z) for k in range(m)]


def basis(m, i):
    return [Fraction(int(a == i)) for a in range(m)]


def curvature(G, c):
    """``R[i][j][k][l]``: e_l component of ``nabla_i nabla_j e_k - nabla_j nabla_i e_k - nabla_[e_i,e_j] e_k``."""
    G, c = to_lists(G), to_lists(c)
    m = len(G)
    R = [[[[Z] * m for _ in range(m)] for _ in range(m)] for _ in range(m)]
    for i, j, k in product(range(m), repeat=3):
        ei, ej, ek = basis(m, i), basis(m, j), basis(m, k)
        a = nabla(G, ei, nabla(G, ej, ek))
        b = nabla(G, ej, nabla(G, ei, ek))
        br = c[i][j]
        d = nabla(G, br, ek)
        for l in range(m):
            R[i][j][k][l] = a[l] - b[l] - d[l]
    return R


def lower4(R, g):
    m = len(g)
    return [[[[sum((R[i][j][k][a] * g[a][l] for a in range(m)), Z) for l in range(m)]
              for k in range(m)] for j in range(m)] for i in range(m)]


def inverse(g):
    M = sympy.Matrix([[sympy.Rational(x) for x in row] for row in to_lists(g)]).inv()
    return [[Fraction(int(v.p), int(v.q)) for v in M.row(i)] for i in range(M.rows)]


def ricci(R, g):
    """``S(Y,Z) = sum g^{ab} R_low(e_a, Y, Z, e_b)``."""
    g = to_lists(g)
    m = len(g)
    gi = inverse(g)
    Rl = lower4(R, g)
    return [[sum((gi[a][b] * Rl[a][y][z][b] for a in range(m) for b in range(m)), Z)
             for z in range(m)] for y in range(m)]


def scalar(S, g):
    gi = inverse(g)
    m = len(gi)
    return sum((gi[a][b] * S[a][b] for a in range(m) for b in range(m)), Z)


def weyl_low(R, g):
    """Weyl (0,4) tensor from the classical decomposition."""
    g = to_lists(g)
    m = len(g)
    S = ricci(R, g)
    r = scalar(S, g)
    Rl = lower4(R, g)
    k = Fraction(1, m - 2)
    s = r / ((m - 1) * (m - 2))
    out = [[[[Z] * m for _ in range(m)] for _ in range(m)] for _ in range(m)]
    for x, y, zz, w in product(range(m), repeat=4):
        out[x][y][zz][w] = (
            Rl[x][y][zz][w]
            - k * (S[y][zz] * g[x][w] - S[x][zz] * g[y][w] + g[y][zz] * S[x][w] - g[x][zz] * S[y][w])
            + s * (g[y][zz] * g[x][w] - g[x][zz] * g[y][w])
        )
    return out


def wedge_op(g):
    m = len(g)
    W = [[[[Z] * m for _ in range(m)] for _ in range(m)] for _ in range(m)]
    for x, y, zz in product(range(m), repeat=3):
        W[x][y][zz][x] += g[y][zz]
        W[x][y][zz][y] -= g[x][zz]
    return W


def derivation(A, T, m, rank):
    """``(A(e_x,e_y) . T)(X_1..X_rank)`` keyed by ``(X..., x, y)``."""
    return {
        idx + (x, y): derivation_entry(A, T, idx, x, y)
        for idx in product(range(m), repeat=rank)
        for x, y in product(range(m), repeat=2)
    }


def derivation_entry(A, T, idx, x, y):
    """Single entry of :func:`derivation`: ``-sum_s T(.., A(e_x,e_y) e_{X_s}, ..)``."""
    m = len(A)
    total = Z
    for s in range(len(idx)):
        row = A[x][y][idx[s]]
        for a in range(m):
            if row[a]:
                j = list(idx)
                j[s] = a
                total -= row[a] * _get(T, j)
    return total


def _get(T, idx):
    for i in idx:
        T = T[i]
    return T


def kulkarni_nomizu(g, A):
    m = len(g)
    return [[[[g[x][w] * A[y][zz] + g[y][zz] * A[x][w] - g[x][zz] * A[y][w] - g[y][w] * A[x][zz]
               for w in range(m)] for zz in range(m)] for y in range(m)] for x in range(m)]


def raise4(T, g):
    gi = inverse(g)
    m = len(g)
    return [[[[sum((T[i][j][k][a] * gi[a][l] for a in range(m)), Z) for l in range(m)]
              for k in range(m)] for j in range(m)] for i in range(m)]
