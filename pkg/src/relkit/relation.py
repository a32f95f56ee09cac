"""Linear relations: subspaces of X × Y treated as multivalued operators.

A relation is stored as its graph, a :class:`~relkit.subspace.Subspace` of
C^(dim_x + dim_y) with coordinates ordered ``(x, y)``.  All arithmetic
(sum, product, inverse, adjoint) is computed on graphs and re-orthonormalized
after every step.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import subspace as sp
from .errors import DimensionMismatch, NotSingleValued
from .subspace import Subspace, as_matrix


def _null_space(m: np.ndarray, tol=None) -> np.ndarray:
    """Orthonormal basis of ``ker m`` with a cutoff relative to ``max(1, ‖m‖)``."""
    k = m.shape[1]
    if k == 0:
        return np.zeros((0, 0), dtype=complex)
    if m.shape[0] == 0:
        return np.eye(k, dtype=complex)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    r = sp.numerical_rank(s, tol, scale=1.0)
    return vh[r:].conj().T


@dataclass(frozen=True, eq=False)
class OperatorOnSubspace:
    """A single-valued operator ``X ⊃ domain -> Y`` given by a matrix.

    Only the action on ``domain`` is meaningful.  The stored matrix is
    canonicalized to vanish on the orthogonal complement of the domain, so
    ``norm`` is the norm of the restriction.
    """

    domain: Subspace
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if m.shape[1] != self.domain.ambient_dim:
            raise DimensionMismatch(
                f"matrix has {m.shape[1]} columns, domain lives in C^{self.domain.ambient_dim}")
        m = m @ sp.projection_matrix(self.domain)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def everywhere(cls, matrix) -> "OperatorOnSubspace":
        m = as_matrix(matrix)
        return cls(Subspace.full(m.shape[1]), m)

    @property
    def dim_x(self) -> int:
        return self.matrix.shape[1]

    @property
    def dim_y(self) -> int:
        return self.matrix.shape[0]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix, 2)) if self.matrix.size else 0.0

    def __call__(self, x):
        return self.matrix @ np.asarray(x, dtype=complex)


@dataclass(frozen=True, eq=False)
class LinearRelation:
    """A linear relation ``T ⊂ X × Y`` with ``X = C^dim_x`` and ``Y = C^dim_y``."""

    dim_x: int
    dim_y: int
    graph: Subspace

    def __post_init__(self):
        if self.dim_x < 1 or self.dim_y < 1:
            raise DimensionMismatch("dim_x and dim_y must be positive")
        if self.graph.ambient_dim != self.dim_x + self.dim_y:
            raise DimensionMismatch(
                f"graph lives in C^{self.graph.ambient_dim}, expected C^{self.dim_x + self.dim_y}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_pairs(cls, xs, ys, tol=None) -> "LinearRelation":
        """Span of the pairs ``(xs[:, j], ys[:, j])``."""
        xs, ys = as_matrix(xs), as_matrix(ys)
        if xs.shape[1] != ys.shape[1]:
            raise DimensionMismatch("xs and ys must have the same number of columns")
        return cls(xs.shape[0], ys.shape[0], sp.span(np.vstack([xs, ys]), tol))

    @classmethod
    def from_matrix(cls, m) -> "LinearRelation":
        """Graph of an everywhere-defined matrix."""
        return from_operator(OperatorOnSubspace.everywhere(m))

    @classmethod
    def identity(cls, n: int) -> "LinearRelation":
        return cls.from_matrix(np.eye(n))

    @classmethod
    def zero_operator(cls, dim_x: int, dim_y: int) -> "LinearRelation":
        return cls.from_matrix(np.zeros((dim_y, dim_x)))

    @classmethod
    def product(cls, first: Subspace, second: Subspace) -> "LinearRelation":
        """The relation ``first × second``; e.g. ``{0} × M`` is purely multivalued."""
        return cls(first.ambient_dim, second.ambient_dim, sp.direct_sum_embed(first, second))

    @classmethod
    def multivalued(cls, mul: Subspace, dim_x: int | None = None) -> "LinearRelation":
        """``{0} × mul``."""
        n = mul.ambient_dim if dim_x is None else dim_x
        return cls.product(Subspace.zero(n), mul)

    # -- views --------------------------------------------------------------

    @property
    def gx(self) -> np.ndarray:
        return self.graph.basis[: self.dim_x]

    @property
    def gy(self) -> np.ndarray:
        return self.graph.basis[self.dim_x:]

    @property
    def dim(self) -> int:
        return self.graph.dim

    @property
    def projector(self) -> np.ndarray:
        return sp.projection_matrix(self.graph)

    def __repr__(self):
        return f"LinearRelation(dim_x={self.dim_x}, dim_y={self.dim_y}, dim={self.dim})"


def from_operator(op: OperatorOnSubspace) -> LinearRelation:
    """Graph ``{(x, op x) : x in op.domain}``."""
    d = op.domain.basis
    cols = np.vstack([d, op.matrix @ d])
    # columns are independent because the top block is orthonormal
    q = sp._orthonormal_columns(cols, d.shape[1])
    return LinearRelation(op.dim_x, op.dim_y, Subspace(op.dim_x + op.dim_y, q))


def _split_by_projection(top: np.ndarray, bottom: np.ndarray, tol=None):
    """Return (range of top, bottom-block image of ker top) for a graph basis split."""
    n = top.shape[0]
    r = top.shape[1]
    if r == 0:
        return Subspace.zero(n), Subspace.zero(bottom.shape[0])
    u, s, vh = np.linalg.svd(top, full_matrices=True)
    k = sp.numerical_rank(s, tol, scale=1.0)
    rng = Subspace(n, u[:, :k])
    null = vh[k:].conj().T
    fiber = bottom @ null
    # columns of fiber are orthonormal up to roundoff: graph basis is orthonormal, top·null ≈ 0
    fib = Subspace(bottom.shape[0], sp._orthonormal_columns(fiber, null.shape[1]))
    return rng, fib


def domain(t: LinearRelation, tol=None) -> Subspace:
    """``D(T)``: the projection of the graph on X."""
    return _split_by_projection(t.gx, t.gy, tol)[0]


def mul_part_space(t: LinearRelation, tol=None) -> Subspace:
    """``T(0) = {y : (0, y) in T}``."""
    return _split_by_projection(t.gx, t.gy, tol)[1]


def range_(t: LinearRelation, tol=None) -> Subspace:
    """``R(T)``: the projection of the graph on Y."""
    return _split_by_projection(t.gy, t.gx, tol)[0]


def kernel(t: LinearRelation, tol=None) -> Subspace:
    """``ker T = T^{-1}(0)``."""
    return _split_by_projection(t.gy, t.gx, tol)[1]


def is_operator(t: LinearRelation, tol=None) -> bool:
    return mul_part_space(t, tol).dim == 0


def to_operator(t: LinearRelation, tol=None) -> OperatorOnSubspace:
    """The operator whose graph is ``t``.

    Raises
    ------
    NotSingleValued
        If ``T(0) != {0}``.
    """
    dom, mul = _split_by_projection(t.gx, t.gy, tol)
    if mul.dim:
        raise NotSingleValued(f"relation has a {mul.dim}-dimensional multivalued part")
    # x = gx c, y = gy c with gx injective, so y = gy gx^+ x
    m = t.gy @ np.linalg.pinv(t.gx) if t.dim else np.zeros((t.dim_y, t.dim_x))
    return OperatorOnSubspace(dom, m)


def as_matrix_operator(t: LinearRelation, tol=None) -> np.ndarray:
    """Matrix of an everywhere-defined single-valued relation."""
    op = to_operator(t, tol)
    if op.domain.dim != t.dim_x:
        raise NotSingleValued("relation is not defined on all of X")
    return np.array(op.matrix)


def inverse(t: LinearRelation) -> LinearRelation:
    """``T^{-1} = {(y, x) : (x, y) in T}``."""
    b = np.vstack([t.gy, t.gx])
    return LinearRelation(t.dim_y, t.dim_x, Subspace(t.dim_x + t.dim_y, b))


def scalar_mul(alpha: complex, t: LinearRelation, tol=None) -> LinearRelation:
    """``αT = {(x, αy) : (x, y) in T}``; for ``α = 0`` this is ``D(T) × {0}``."""
    if alpha == 0:
        return LinearRelation.product(domain(t, tol), Subspace.zero(t.dim_y))
    if alpha == 1:
        return t
    cols = np.vstack([t.gx, alpha * t.gy])
    # (x, y) -> (x, αy) is invertible, so the rank is preserved exactly
    q = sp._orthonormal_columns(cols, t.dim)
    return LinearRelation(t.dim_x, t.dim_y, Subspace(t.graph.ambient_dim, q))


def _check_dims(t: LinearRelation, s: LinearRelation):
    if (t.dim_x, t.dim_y) != (s.dim_x, s.dim_y):
        raise DimensionMismatch(
            f"relations live in different spaces: {(t.dim_x, t.dim_y)} vs {(s.dim_x, s.dim_y)}")


def add(t: LinearRelation, s: LinearRelation, tol=None) -> LinearRelation:
    """``T + S = {(x, y + z) : (x, y) in T, (x, z) in S}``."""
    _check_dims(t, s)
    null = _null_space(np.hstack([t.gx, -s.gx]), tol)
    a, b = null[: t.dim], null[t.dim:]
    cols = np.vstack([t.gx @ a, t.gy @ a + s.gy @ b])
    return LinearRelation(t.dim_x, t.dim_y, sp.span(cols, tol, scale=1.0))


def subtract(t: LinearRelation, s: LinearRelation, tol=None) -> LinearRelation:
    """``T - S := T + (-1)S``."""
    return add(t, scalar_mul(-1, s, tol), tol)


def compose(s: LinearRelation, t: LinearRelation, tol=None) -> LinearRelation:
    """The product ``ST = {(x, z) : (x, y) in T, (y, z) in S for some y}``."""
    if t.dim_y != s.dim_x:
        raise DimensionMismatch(f"cannot compose: T maps into C^{t.dim_y}, S starts from C^{s.dim_x}")
    null = _null_space(np.hstack([t.gy, -s.gx]), tol)
    a, b = null[: t.dim], null[t.dim:]
    cols = np.vstack([t.gx @ a, s.gy @ b])
    return LinearRelation(t.dim_x, s.dim_y, sp.span(cols, tol, scale=1.0))


def adjoint(t: LinearRelation) -> LinearRelation:
    """``T* = {(f, g) in Y × X : <g, x> = <f, y> for all (x, y) in T}``.

    Equivalently the orthogonal complement in Y × X of ``{(-y, x) : (x, y) in T}``.
    """
    rotated = Subspace(t.graph.ambient_dim, np.vstack([-t.gy, t.gx]))
    return LinearRelation(t.dim_y, t.dim_x, sp.complement(rotated))


def equals(t: LinearRelation, s: LinearRelation, tol=None) -> bool:
    _check_dims(t, s)
    return sp.equals(t.graph, s.graph, tol)


def graph_distance(t: LinearRelation, s: LinearRelation) -> float:
    """``‖P_T - P_S‖``, the residual used for relation equality."""
    _check_dims(t, s)
    return sp.distance(t.graph, s.graph)


def includes(outer: LinearRelation, inner: LinearRelation, tol=None) -> bool:
    """``inner ⊂ outer`` as graphs."""
    _check_dims(outer, inner)
    return sp.is_subspace_of(inner.graph, outer.graph, tol)


def _require_square(t: LinearRelation):
    if t.dim_x != t.dim_y:
        raise DimensionMismatch("relation must act in X × X")


def is_hermitian(t: LinearRelation, tol=None) -> bool:
    """``T ⊂ T*``."""
    _require_square(t)
    return includes(adjoint(t), t, tol)


def is_self_adjoint(t: LinearRelation, tol=None) -> bool:
    """``T = T*``."""
    _require_square(t)
    return equals(adjoint(t), t, tol)


class ShiftResult(NamedTuple):
    relation: LinearRelation
    domain_ok: bool  # D(T) ⊂ D(A); otherwise the domain was cut down to D(T) ∩ D(A)


def shift_by_operator(t: LinearRelation, a: OperatorOnSubspace, sign: int = -1,
                      tol=None) -> ShiftResult:
    """``T + sign·A`` for an operator ``A``, flagging domain shrinkage."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    ok = sp.is_subspace_of(domain(t, tol), a.domain, tol)
    shifted = add(t, scalar_mul(sign, from_operator(a), tol), tol)
    return ShiftResult(shifted, ok)


def minus_operator(t: LinearRelation, a: OperatorOnSubspace, tol=None) -> LinearRelation:
    """``T - A``."""
    return shift_by_operator(t, a, -1, tol).relation


def shift_scalar(t: LinearRelation, lam: complex, tol=None) -> LinearRelation:
    """``T - λI = {(x, y - λx) : (x, y) in T}``."""
    _require_square(t)
    if lam == 0:
        return t
    cols = np.vstack([t.gx, t.gy - lam * t.gx])
    q = sp._orthonormal_columns(cols, t.dim)
    return LinearRelation(t.dim_x, t.dim_y, Subspace(t.graph.ambient_dim, q))


def restrict_to(t: LinearRelation, x_space: Subspace, y_space: Subspace,
                tol=None) -> LinearRelation:
    """``T ∩ (x_space × y_space)`` written in orthonormal coordinates of the two subspaces."""
    if x_space.dim == 0 or y_space.dim == 0:
        raise DimensionMismatch("cannot restrict to a zero-dimensional coordinate space")
    inside = sp.intersect(t.graph, sp.direct_sum_embed(x_space, y_space), tol)
    coords = np.vstack([x_space.basis.conj().T @ inside.basis[: t.dim_x],
                        y_space.basis.conj().T @ inside.basis[t.dim_x:]])
    q = sp._orthonormal_columns(coords, inside.dim)
    return LinearRelation(x_space.dim, y_space.dim, Subspace(x_space.dim + y_space.dim, q))
