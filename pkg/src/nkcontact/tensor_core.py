"""Exact scalars and valence-aware dense tensors over a fixed frame.

All scalars are :class:`fractions.Fraction`.  Tensors wrap a read-only numpy
object array; slot kinds are ``"u"`` (upper) and ``"l"`` (lower).  Public
indexing is 1-based, the raw ``array`` is 0-based.

Layout conventions used throughout the package:

* vector ``X``: valence ``("u",)``, ``X[a]`` is the ``e_a`` component;
* endomorphism ``A`` (type (1,1)): valence ``("l", "u")``, ``A[i, j]`` is the
  ``e_j`` component of ``A e_i``;
* curvature-like operator (type (1,3)): valence ``("l", "l", "l", "u")``,
  ``R[i, j, k, l]`` is the ``e_l`` component of ``R(e_i, e_j) e_k``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^(-?)(\d+)(?:/(\d+))?$")


class InputError(ValueError):
    """Raised for malformed or incompatible inputs."""


def parse_rational(text: str) -> Fraction:
    """Parse a canonical rational string ``"p"``, ``"-p"`` or ``"p/q"``."""
    if not isinstance(text, str):
        raise InputError(f"expected a rational string, got {text!r}")
    m = _RATIONAL_RE.match(text.strip())
    if m is None:
        raise InputError(f"malformed rational {text!r}")
    sign, num, den = m.groups()
    q = int(den) if den is not None else 1
    if q == 0:
        raise InputError(f"zero denominator in {text!r}")
    value = Fraction(int(num), q)
    return -value if sign else value


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    raise InputError(f"{x!r} is not an exact scalar")


def _as_object_array(data, shape=None) -> np.ndarray:
    arr = np.empty(np.shape(data) if shape is None else shape, dtype=object)
    flat = np.asarray(data, dtype=object).reshape(-1)
    out = arr.reshape(-1)
    for n, v in enumerate(flat):
        out[n] = as_fraction(v)
    return arr


def zeros(shape) -> np.ndarray:
    arr = np.empty(shape, dtype=object)
    arr.fill(ZERO)
    return arr


def identity_array(dim: int) -> np.ndarray:
    arr = zeros((dim, dim))
    for i in range(dim):
        arr[i, i] = ONE
    return arr


# ---------------------------------------------------------------------------
# exact contraction with integer scaling
# ---------------------------------------------------------------------------

def _common_denominator(arr: np.ndarray) -> int:
    d = 1
    for x in arr.flat:
        d = math.lcm(d, x.denominator)
    return d


def _to_integers(arr: np.ndarray) -> tuple[np.ndarray, int]:
    d = _common_denominator(arr)
    ints = np.empty(arr.shape, dtype=object)
    src, dst = arr.reshape(-1), ints.reshape(-1)
    for n, x in enumerate(src):
        dst[n] = x.numerator * (d // x.denominator)
    return ints, d


def _from_integers(ints: np.ndarray, d: int) -> np.ndarray:
    out = np.empty(ints.shape, dtype=object)
    src, dst = ints.reshape(-1), out.reshape(-1)
    for n, v in enumerate(src):
        dst[n] = Fraction(v, d) if v else ZERO
    return out


def exact_einsum(subscripts: str, *operands: np.ndarray) -> np.ndarray:
    """``np.einsum`` over Fraction arrays, evaluated on scaled integers.

    Python-int arithmetic is much cheaper than Fraction arithmetic, and the
    result is identical because every operand is rescaled by an exact common
    denominator.
    """
    ints, denom = [], 1
    for op in operands:
        i, d = _to_integers(op)
        ints.append(i)
        denom *= d
    res = np.einsum(subscripts, *ints, optimize=False)
    if not isinstance(res, np.ndarray):
        return Fraction(res, denom)
    return _from_integers(res, denom)


# ---------------------------------------------------------------------------
# Tensor
# ---------------------------------------------------------------------------

class Tensor:
    """Dense tensor of Fractions with declared slot kinds.

    >>> v = Tensor.basis_vector(3, 2)
    >>> v[2]
    Fraction(1, 1)
    """

    __slots__ = ("_array", "_valence")

    def __init__(self, array, valence: Sequence[str]):
        valence = tuple(valence)
        if any(k not in ("u", "l") for k in valence):
            raise InputError(f"bad valence {valence!r}")
        arr = array if isinstance(array, np.ndarray) and array.dtype == object else _as_object_array(array)
        if arr.dtype != object or arr.ndim != len(valence):
            raise InputError(f"array rank {arr.ndim} does not match valence {valence!r}")
        if valence and len(set(arr.shape)) != 1:
            raise InputError(f"non-square tensor shape {arr.shape}")
        if any(not isinstance(x, Fraction) for x in arr.flat):
            arr = _as_object_array(arr)
        arr = arr.copy()
        arr.flags.writeable = False
        self._array = arr
        self._valence = valence

    # construction helpers -------------------------------------------------
    @classmethod
    def zeros(cls, dim: int, valence: Sequence[str]) -> "Tensor":
        return cls(zeros((dim,) * len(valence)), valence)

    @classmethod
    def from_function(cls, dim: int, valence: Sequence[str], fn: Callable[..., object]) -> "Tensor":
        """Build from ``fn(*one_based_indices)``."""
        arr = zeros((dim,) * len(valence))
        for idx in np.ndindex(*arr.shape):
            arr[idx] = as_fraction(fn(*(i + 1 for i in idx)))
        return cls(arr, valence)

    @classmethod
    def vector(cls, components: Sequence) -> "Tensor":
        return cls(list(components), ("u",))

    @classmethod
    def basis_vector(cls, dim: int, index: int) -> "Tensor":
        if not 1 <= index <= dim:
            raise InputError(f"frame index {index} out of range 1..{dim}")
        arr = zeros((dim,))
        arr[index - 1] = ONE
        return cls(arr, ("u",))

    @classmethod
    def identity_endomorphism(cls, dim: int) -> "Tensor":
        return cls(identity_array(dim), ("l", "u"))

    # basic properties -----------------------------------------------------
    @property
    def array(self) -> np.ndarray:
        return self._array

    @property
    def valence(self) -> tuple[str, ...]:
        return self._valence

    @property
    def dim(self) -> int:
        return self._array.shape[0] if self._array.ndim else 0

    @property
    def rank(self) -> int:
        return len(self._valence)

    def __getitem__(self, index) -> Fraction:
        if not isinstance(index, tuple):
            index = (index,)
        if len(index) != self.rank:
            raise InputError(f"expected {self.rank} indices, got {len(index)}")
        for i in index:
            if not 1 <= i <= self.dim:
                raise InputError(f"frame index {i} out of range 1..{self.dim}")
        return self._array[tuple(i - 1 for i in index)]

    def _check_same(self, other: "Tensor") -> None:
        if not isinstance(other, Tensor):
            raise InputError("expected a Tensor")
        if other.valence != self.valence or other.dim != self.dim:
            raise InputError(
                f"valence mismatch: {self.valence}/{self.dim} vs {other.valence}/{other.dim}"
            )

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check_same(other)
        return Tensor(self._array + other._array, self._valence)

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check_same(other)
        return Tensor(self._array - other._array, self._valence)

    def __neg__(self) -> "Tensor":
        return Tensor(-self._array, self._valence)

    def __mul__(self, scalar) -> "Tensor":
        if isinstance(scalar, Tensor):
            return NotImplemented
        return Tensor(self._array * as_fraction(scalar), self._valence)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return (
            self._valence == other._valence
            and self._array.shape == other._array.shape
            and bool(np.all(self._array == other._array))
        )

    def __hash__(self):
        return hash((self._valence, tuple(self._array.flat)))

    def __repr__(self) -> str:
        nz = list(self.nonzero())
        shown = ", ".join(f"{idx}: {format_rational(v)}" for idx, v in nz[:6])
        more = ", ..." if len(nz) > 6 else ""
        return f"Tensor(dim={self.dim}, valence={''.join(self._valence)}, {{{shown}{more}}})"

    # inspection -----------------------------------------------------------
    def nonzero(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        """Yield ``(one_based_index, value)`` for nonzero entries in C order."""
        for idx in zip(*np.nonzero(self._array != 0)):
            yield tuple(int(i) + 1 for i in idx), self._array[idx]

    def is_zero(self) -> bool:
        return not bool(np.any(self._array != 0))

    def first_nonzero(self) -> tuple[int, ...] | None:
        for idx, _ in self.nonzero():
            return idx
        return None

    def permute(self, order: Sequence[int]) -> "Tensor":
        """Reorder slots: new slot ``s`` is old slot ``order[s]`` (0-based slot numbers)."""
        order = tuple(order)
        if sorted(order) != list(range(self.rank)):
            raise InputError(f"bad slot permutation {order!r}")
        return Tensor(np.transpose(self._array, order), tuple(self._valence[s] for s in order))

    def to_nested(self) -> list:
        return np.vectorize(format_rational, otypes=[object])(self._array).tolist()


def check_vector(X: Tensor, dim: int | None = None) -> None:
    if not isinstance(X, Tensor) or X.valence != ("u",):
        raise InputError("expected a vector (valence 'u')")
    if dim is not None and X.dim != dim:
        raise InputError(f"vector dimension {X.dim} does not match frame dimension {dim}")


def require_valence(T: Tensor, valence: Sequence[str], what: str = "tensor") -> None:
    if not isinstance(T, Tensor) or T.valence != tuple(valence):
        got = T.valence if isinstance(T, Tensor) else type(T).__name__
        raise InputError(f"{what}: expected valence {tuple(valence)}, got {got}")


def require_covariant(T: Tensor, what: str = "tensor") -> None:
    if not isinstance(T, Tensor) or T.rank < 1 or any(k != "l" for k in T.valence):
        raise InputError(f"{what}: expected a (0,l) tensor with l >= 1")


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------

def determinant(matrix: np.ndarray) -> Fraction:
    a = np.array(matrix, dtype=object).copy()
    n = a.shape[0]
    det = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r, col] != 0), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            a[[col, pivot]] = a[[pivot, col]]
            det = -det
        det *= a[col, col]
        for r in range(col + 1, n):
            if a[r, col] != 0:
                a[r] = a[r] - a[col] * (a[r, col] / a[col, col])
    return det


def inverse(matrix: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse over the rationals."""
    n = matrix.shape[0]
    aug = np.concatenate([np.array(matrix, dtype=object), identity_array(n)], axis=1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r, col] != 0), None)
        if pivot is None:
            raise InputError("singular matrix")
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
        aug[col] = aug[col] / aug[col, col]
        for r in range(n):
            if r != col and aug[r, col] != 0:
                aug[r] = aug[r] - aug[col] * aug[r, col]
    return aug[:, n:].copy()


@dataclass(frozen=True)
class LinearFit:
    """Outcome of :func:`exact_linear_fit`.

    ``values[k]`` is ``None`` when unknown ``k`` is not determined by the
    equations (its column never received a pivot).  ``witness`` is the tag of
    the first equation that contradicts all earlier ones.
    """

    consistent: bool
    values: tuple[Fraction | None, ...]
    witness: object = None
    residual: Fraction | None = None

    @property
    def unique(self) -> bool:
        return self.consistent and all(v is not None for v in self.values)

    def value_or_zero(self, k: int) -> Fraction:
        v = self.values[k]
        return ZERO if v is None else v


def exact_linear_fit(rows: Iterable[tuple[object, Sequence[Fraction], Fraction]], n_unknowns: int) -> LinearFit:
    """Solve ``coeffs . x = rhs`` exactly, one tagged equation at a time.

    Equations are absorbed in the given order into an echelon basis; the first
    equation that reduces to ``0 = nonzero`` is reported as the witness with
    its reduced residual.  Undetermined unknowns are reported as ``None`` and
    set to zero when back-substituting the others.
    """
    pivots: dict[int, tuple[list[Fraction], Fraction]] = {}
    for tag, coeffs, rhs in rows:
        row = [Fraction(c) for c in coeffs]
        b = Fraction(rhs)
        for col in sorted(pivots):
            if row[col] != 0:
                prow, pb = pivots[col]
                f = row[col]
                row = [x - f * y for x, y in zip(row, prow)]
                b -= f * pb
        lead = next((k for k in range(n_unknowns) if row[k] != 0), None)
        if lead is None:
            if b != 0:
                return LinearFit(False, (None,) * n_unknowns, tag, b)
            continue
        f = row[lead]
        row = [x / f for x in row]
        b /= f
        # keep the basis fully reduced so back substitution is trivial
        for col, (prow, pb) in list(pivots.items()):
            if prow[lead] != 0:
                g = prow[lead]
                pivots[col] = ([x - g * y for x, y in zip(prow, row)], pb - g * b)
        pivots[lead] = (row, b)
    values: list[Fraction | None] = [None] * n_unknowns
    for col, (prow, pb) in pivots.items():
        # free unknowns are taken as zero
        values[col] = pb
    return LinearFit(True, tuple(values))


# ---------------------------------------------------------------------------
# Metric
# ---------------------------------------------------------------------------

class Metric:
    """Constant Riemannian metric on the frame, with its exact inverse."""

    __slots__ = ("g", "g_inv")

    def __init__(self, matrix):
        g = matrix if isinstance(matrix, Tensor) else Tensor(matrix, ("l", "l"))
        require_valence(g, ("l", "l"), "metric")
        a = g.array
        n = a.shape[0]
        for i in range(n):
            for j in range(i + 1, n):
                if a[i, j] != a[j, i]:
                    raise InputError(f"metric not symmetric at ({i + 1},{j + 1})")
        for k in range(1, n + 1):
            if determinant(a[:k, :k]) <= 0:
                raise InputError(f"metric not positive definite (leading minor {k} <= 0)")
        self.g = g
        self.g_inv = Tensor(inverse(a), ("u", "u"))

    @classmethod
    def identity(cls, dim: int) -> "Metric":
        return cls(identity_array(dim))

    @property
    def dim(self) -> int:
        return self.g.dim

    def __call__(self, X: Tensor, Y: Tensor) -> Fraction:
        check_vector(X, self.dim)
        check_vector(Y, self.dim)
        return exact_einsum("i,ij,j->", X.array, self.g.array, Y.array)

    def __eq__(self, other) -> bool:
        return isinstance(other, Metric) and self.g == other.g

    def __repr__(self) -> str:
        return f"Metric({self.g.to_nested()})"

    def lower(self, X: Tensor) -> Tensor:
        check_vector(X, self.dim)
        return Tensor(exact_einsum("a,ab->b", X.array, self.g.array), ("l",))

    def raise_index(self, w: Tensor) -> Tensor:
        require_valence(w, ("l",), "covector")
        return Tensor(exact_einsum("a,ab->b", w.array, self.g_inv.array), ("u",))

    def is_identity(self) -> bool:
        return bool(np.all(self.g.array == identity_array(self.dim)))


# ---------------------------------------------------------------------------
# operators on endomorphisms and curvature-like tensors
# ---------------------------------------------------------------------------

def apply_endomorphism(A: Tensor, X: Tensor) -> Tensor:
    require_valence(A, ("l", "u"), "endomorphism")
    check_vector(X, A.dim)
    return Tensor(exact_einsum("a,ab->b", X.array, A.array), ("u",))


def compose(A: Tensor, B: Tensor) -> Tensor:
    """Endomorphism ``A o B`` (apply ``B`` first)."""
    require_valence(A, ("l", "u"), "endomorphism")
    require_valence(B, ("l", "u"), "endomorphism")
    return Tensor(exact_einsum("ia,ab->ib", B.array, A.array), ("l", "u"))


def trace_endomorphism(A: Tensor) -> Fraction:
    require_valence(A, ("l", "u"), "endomorphism")
    return sum((A.array[i, i] for i in range(A.dim)), ZERO)


def lower_operator(A: Tensor, g: Metric) -> Tensor:
    """(1,3) operator to (0,4): ``A_low(X,Y,Z,W) = g(A(X,Y)Z, W)``."""
    require_valence(A, ("l", "l", "l", "u"), "curvature operator")
    return Tensor(exact_einsum("ijkb,bl->ijkl", A.array, g.g.array), ("l",) * 4)


def raise_operator(T: Tensor, g: Metric) -> Tensor:
    """(0,4) tensor to its (1,3) operator, inverse of :func:`lower_operator`."""
    require_valence(T, ("l",) * 4, "(0,4) tensor")
    return Tensor(exact_einsum("ijkb,bl->ijkl", T.array, g.g_inv.array), ("l", "l", "l", "u"))


def operator_at(A: Tensor, X: Tensor, Y: Tensor) -> Tensor:
    """Endomorphism ``Z -> A(X,Y)Z`` for vectors ``X``, ``Y``."""
    require_valence(A, ("l", "l", "l", "u"), "curvature operator")
    check_vector(X, A.dim)
    check_vector(Y, A.dim)
    return Tensor(exact_einsum("i,j,ijkl->kl", X.array, Y.array, A.array), ("l", "u"))


def wedge_operator(g: Metric) -> Tensor:
    """(1,3) tensor of ``(X,Y) -> X wedge_g Y``."""
    m = g.dim
    ga = g.g.array
    arr = zeros((m, m, m, m))
    for x in range(m):
        for y in range(m):
            for z in range(m):
                if ga[y, z] != 0:
                    arr[x, y, z, x] += ga[y, z]
                if ga[x, z] != 0:
                    arr[x, y, z, y] -= ga[x, z]
    return Tensor(arr, ("l", "l", "l", "u"))


def wedge_apply(X: Tensor, Y: Tensor, Z: Tensor, g: Metric) -> Tensor:
    """``(X wedge_g Y) Z = g(Y,Z) X - g(X,Z) Y``."""
    for v in (X, Y, Z):
        check_vector(v, g.dim)
    return g(Y, Z) * X - g(X, Z) * Y


def _is_symmetric2(A: Tensor) -> bool:
    return bool(np.all(A.array == A.array.T))


def kulkarni_nomizu(g: Metric, A: Tensor) -> Tensor:
    """``(g ^ A)(X,Y,Z,W) = g(X,W)A(Y,Z) + g(Y,Z)A(X,W) - g(X,Z)A(Y,W) - g(Y,W)A(X,Z)``."""
    require_valence(A, ("l", "l"), "Kulkarni-Nomizu factor")
    if A.dim != g.dim:
        raise InputError("dimension mismatch between metric and factor")
    if not _is_symmetric2(A):
        raise InputError("Kulkarni-Nomizu factor must be symmetric")
    G, B = g.g.array, A.array
    out = (
        np.einsum("il,jk->ijkl", G, B)
        + np.einsum("jk,il->ijkl", G, B)
        - np.einsum("ik,jl->ijkl", G, B)
        - np.einsum("jl,ik->ijkl", G, B)
    )
    return Tensor(out, ("l",) * 4)


def derivation_by(E: Tensor, T: Tensor) -> Tensor:
    """``(E . T)(X_1..X_l) = -sum_s T(X_1, .., E X_s, .., X_l)`` for an endomorphism ``E``."""
    require_valence(E, ("l", "u"), "endomorphism")
    require_covariant(T, "derivation target")
    if E.dim != T.dim:
        raise InputError("dimension mismatch")
    l = T.rank
    Ti, dT = _to_integers(T.array)
    Ei, dE = _to_integers(E.array)
    acc = None
    for s in range(l):
        # contract slot s of T with the output slot of E, then put E's input back at s
        part = np.tensordot(Ti, Ei, axes=([s], [1]))
        part = np.moveaxis(part, -1, s)
        acc = part if acc is None else acc + part
    return Tensor(_from_integers(-acc, dT * dE), ("l",) * l)


def derivation_action_full(A: Tensor, T: Tensor) -> Tensor:
    """All ``(A(e_u,e_v) . T)(X_1..X_l)`` as a (0,l+2) tensor, ``u, v`` last."""
    require_valence(A, ("l", "l", "l", "u"), "curvature operator")
    require_covariant(T, "derivation target")
    if A.dim != T.dim:
        raise InputError("dimension mismatch")
    l = T.rank
    Ti, dT = _to_integers(T.array)
    Ai, dA = _to_integers(A.array)
    acc = None
    for s in range(l):
        # result axes: T's other slots, then A's (u, v, x_s)
        part = np.tensordot(Ti, Ai, axes=([s], [3]))
        part = np.moveaxis(part, -1, s)
        acc = part if acc is None else acc + part
    return Tensor(_from_integers(-acc, dT * dA), ("l",) * (l + 2))


def derivation_action(A: Tensor, u: int, v: int, T: Tensor) -> Tensor:
    """``A(e_u, e_v) . T`` with 1-based frame indices ``u``, ``v``."""
    require_valence(A, ("l", "l", "l", "u"), "curvature operator")
    m = A.dim
    E = operator_at(A, Tensor.basis_vector(m, u), Tensor.basis_vector(m, v))
    return derivation_by(E, T)


def q_tensor(g: Metric, T: Tensor) -> Tensor:
    """Tachibana tensor ``Q(g,T)(X_1..X_l; X, Y) = -sum_s T(.., (X ^ Y) X_s, ..)``."""
    require_covariant(T, "Q(g,T) argument")
    if T.dim != g.dim:
        raise InputError("dimension mismatch")
    return derivation_action_full(wedge_operator(g), T)
