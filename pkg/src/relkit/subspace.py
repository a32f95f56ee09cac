"""Subspaces of C^n represented by orthonormal bases.

Everything else in relkit reduces to the handful of lattice operations
defined here: span, sum, intersection, orthogonal complement, inclusion
and equality.  Rank decisions are made from singular values with a
relative cutoff; equality is decided on orthogonal projectors, never on
bases, since bases are not unique.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidInput

TOL_EQ_ENV = "RELKIT_TOL_EQ"


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds threaded through every operation.

    Attributes
    ----------
    eps_rank : float
        Relative singular-value cutoff used for rank decisions.
    eps_orth : float
        Allowed deviation of ``B^H B`` from the identity for a stored basis.
    eps_eq : float
        Residual bound for subspace and matrix equality.
    """

    eps_rank: float = 1e-10
    eps_orth: float = 1e-12
    eps_eq: float = 1e-8

    def __post_init__(self):
        for name in ("eps_rank", "eps_orth", "eps_eq"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise InvalidInput(f"{name} must be positive and finite, got {value!r}")
        if self.eps_rank > self.eps_eq:
            raise InvalidInput("eps_rank must not exceed eps_eq")

    @classmethod
    def from_env(cls, **overrides) -> "Tolerances":
        """Defaults, with ``eps_eq`` taken from ``$RELKIT_TOL_EQ`` when set."""
        raw = os.environ.get(TOL_EQ_ENV)
        if raw and "eps_eq" not in overrides:
            try:
                overrides["eps_eq"] = float(raw)
            except ValueError as exc:
                raise InvalidInput(f"{TOL_EQ_ENV}={raw!r} is not a number") from exc
        return cls(**overrides)


DEFAULT_TOL = Tolerances()


def _tol(tol):
    return DEFAULT_TOL if tol is None else tol


def as_matrix(columns, rows=None) -> np.ndarray:
    """Coerce input to a finite complex 2-D array."""
    m = np.asarray(columns, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise InvalidInput(f"expected a matrix, got array of shape {m.shape}")
    if rows is not None and m.shape[0] != rows:
        raise DimensionMismatch(f"expected {rows} rows, got {m.shape[0]}")
    if not np.all(np.isfinite(m)):
        raise InvalidInput("matrix has non-finite entries")
    return m


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of C^ambient_dim held as an orthonormal basis.

    The zero subspace has a basis of shape ``(ambient_dim, 0)``.
    Instances are immutable; the basis array is made read-only.
    """

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim != 2 or b.shape[0] != self.ambient_dim:
            raise DimensionMismatch(
                f"basis shape {b.shape} does not match ambient dimension {self.ambient_dim}")
        if b.shape[1] > self.ambient_dim:
            raise InvalidInput("more basis vectors than the ambient dimension")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @classmethod
    def from_orthonormal(cls, basis, tol=None) -> "Subspace":
        """Wrap a basis that is already orthonormal, verifying it."""
        b = as_matrix(basis)
        r = b.shape[1]
        err = np.linalg.norm(b.conj().T @ b - np.eye(r), 2) if r else 0.0
        if err > _tol(tol).eps_orth:
            raise InvalidInput(f"basis is not orthonormal (residual {err:.3e})")
        return cls(b.shape[0], b)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, np.zeros((n, 0), dtype=complex))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, np.eye(n, dtype=complex))

    @classmethod
    def coordinate(cls, n: int, indices) -> "Subspace":
        """Span of the standard basis vectors with the given indices."""
        idx = list(indices)
        return cls(n, np.eye(n, dtype=complex)[:, idx])

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return projection_matrix(self)

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


def _orthonormal_columns(m: np.ndarray, rank: int) -> np.ndarray:
    """Leading left singular vectors of ``m`` (an orthonormal basis of its top-rank range)."""
    if rank == 0:
        return np.zeros((m.shape[0], 0), dtype=complex)
    u, _, _ = np.linalg.svd(m, full_matrices=False)
    return u[:, :rank]


def numerical_rank(s: np.ndarray, tol=None, scale=None) -> int:
    """Number of singular values above ``eps_rank * scale``.

    ``scale`` defaults to the largest singular value, which makes the
    decision invariant under rescaling of the input.
    """
    if s.size == 0:
        return 0
    ref = s[0] if scale is None else max(scale, s[0])
    if ref == 0:
        return 0
    return int(np.sum(s > _tol(tol).eps_rank * ref))


def span(columns, tol=None, scale=None) -> Subspace:
    """Orthonormal basis of the column space of ``columns``.

    Parameters
    ----------
    columns : array_like, shape (n, k)
    tol : Tolerances, optional
    scale : float, optional
        Reference magnitude for the rank cutoff.  When omitted the largest
        singular value is used.  Callers whose columns are combinations of
        orthonormal vectors pass ``scale=1`` so that roundoff-sized columns
        are not mistaken for genuine directions.
    """
    m = as_matrix(columns)
    n, k = m.shape
    if k == 0 or n == 0:
        return Subspace.zero(n)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    r = numerical_rank(s, tol, scale)
    return Subspace(n, u[:, :r])


def projection_matrix(sub: Subspace) -> np.ndarray:
    """Orthogonal projector ``B B^H`` onto ``sub``."""
    b = sub.basis
    return b @ b.conj().T


def _check_same(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def complement(a: Subspace) -> Subspace:
    """Orthogonal complement within the ambient space."""
    n, r = a.basis.shape
    if r == 0:
        return Subspace.full(n)
    if r == n:
        return Subspace.zero(n)
    u, _, _ = np.linalg.svd(a.basis, full_matrices=True)
    return Subspace(n, u[:, r:])


def sum_(a: Subspace, b: Subspace, tol=None) -> Subspace:
    """The subspace ``a + b``."""
    _check_same(a, b)
    return span(np.hstack([a.basis, b.basis]), tol, scale=1.0)


def intersect(a: Subspace, b: Subspace, tol=None) -> Subspace:
    """The subspace ``a ∩ b``.

    Directions of ``a`` whose sine of principal angle to ``b`` is below the
    rank cutoff are kept.  Using sines rather than cosines resolves small
    angles to roundoff level.
    """
    _check_same(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.ambient_dim)
    resid = a.basis - b.basis @ (b.basis.conj().T @ a.basis)
    _, s, vh = np.linalg.svd(resid, full_matrices=True)
    s_full = np.zeros(a.dim)
    s_full[: s.size] = s
    keep = s_full <= _tol(tol).eps_rank
    if not keep.any():
        return Subspace.zero(a.ambient_dim)
    vecs = a.basis @ vh.conj().T[:, keep]
    return Subspace(a.ambient_dim, _orthonormal_columns(vecs, int(keep.sum())))


def contains(a: Subspace, v, tol=None) -> bool:
    """Whether the vector ``v`` lies in ``a`` (relative residual test)."""
    vec = np.asarray(v, dtype=complex).reshape(-1)
    if vec.size != a.ambient_dim:
        raise DimensionMismatch(f"vector of length {vec.size} in C^{a.ambient_dim}")
    resid = vec - a.basis @ (a.basis.conj().T @ vec)
    return float(np.linalg.norm(resid)) <= _tol(tol).eps_eq * max(1.0, float(np.linalg.norm(vec)))


def inclusion_residual(inner: Subspace, outer: Subspace) -> float:
    """``‖(I - P_outer) P_inner‖``; zero exactly when ``inner ⊂ outer``."""
    _check_same(inner, outer)
    if inner.dim == 0:
        return 0.0
    resid = inner.basis - outer.basis @ (outer.basis.conj().T @ inner.basis)
    return float(np.linalg.norm(resid, 2))


def is_subspace_of(inner: Subspace, outer: Subspace, tol=None) -> bool:
    return inclusion_residual(inner, outer) <= _tol(tol).eps_eq


def distance(a: Subspace, b: Subspace) -> float:
    """Spectral norm of the projector difference ``P_a - P_b``."""
    _check_same(a, b)
    return float(np.linalg.norm(projection_matrix(a) - projection_matrix(b), 2))


def equals(a: Subspace, b: Subspace, tol=None) -> bool:
    """Projector equality: ``‖P_a - P_b‖ <= eps_eq``."""
    return distance(a, b) <= _tol(tol).eps_eq


def dim(a: Subspace) -> int:
    return a.dim


def direct_sum_embed(first: Subspace, second: Subspace) -> Subspace:
    """``first × second`` inside C^(n1 + n2)."""
    n1, n2 = first.ambient_dim, second.ambient_dim
    b = np.zeros((n1 + n2, first.dim + second.dim), dtype=complex)
    b[:n1, : first.dim] = first.basis
    b[n1:, first.dim:] = second.basis
    return Subspace(n1 + n2, b)
