"""Operator part / multivalued part splitting and pointwise resolvent tests."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import relation as rel
from . import subspace as sp
from .errors import DimensionMismatch, NotInResolventSet
from .relation import LinearRelation, OperatorOnSubspace
from .subspace import Subspace


@dataclass(frozen=True, eq=False)
class ArensDecomposition:
    """``T = T_s ⊕ T_∞`` with ``T_∞ = {0} × T(0)``.

    ``op_part`` and ``op_part_matrix`` carry the same operator, once as a
    graph and once as a matrix on ``D(T)``.
    """

    op_part: LinearRelation
    op_part_matrix: OperatorOnSubspace
    mul_part: LinearRelation
    mul_space: Subspace

    def reconstruction_residual(self, t: LinearRelation) -> float:
        """``‖P_T - (P_{T_s} + P_{T_∞})‖``."""
        return float(np.linalg.norm(t.projector - self.op_part.projector - self.mul_part.projector, 2))


def arens(t: LinearRelation, tol=None) -> ArensDecomposition:
    """Split ``t`` into its operator part and its purely multivalued part."""
    mul = rel.mul_part_space(t, tol)
    mul_part = LinearRelation.multivalued(mul, t.dim_x)
    # graph vectors G c orthogonal to {0} × T(0): T(0)^H gy c = 0
    g = t.graph.basis
    if mul.dim:
        _, _, vh = np.linalg.svd(mul.basis.conj().T @ t.gy, full_matrices=True)
        null = vh[mul.dim:].conj().T
        op_basis = sp._orthonormal_columns(g @ null, t.dim - mul.dim)
    else:
        op_basis = g
    op_part = LinearRelation(t.dim_x, t.dim_y, Subspace(t.graph.ambient_dim, op_basis))
    return ArensDecomposition(op_part, rel.to_operator(op_part, tol), mul_part, mul)


def hermitian_split_residuals(t: LinearRelation, dec: ArensDecomposition | None = None,
                              tol=None) -> tuple[float, float]:
    """Residuals of ``T_s = T ∩ (T(0)^⊥)²`` and ``T_∞ = T ∩ T(0)²``.

    Both vanish when ``t`` is Hermitian.
    """
    dec = dec or arens(t, tol)
    m = dec.mul_space
    mperp = sp.complement(m)
    op_side = sp.intersect(t.graph, sp.direct_sum_embed(mperp, mperp), tol)
    mul_side = sp.intersect(t.graph, sp.direct_sum_embed(m, m), tol)
    return sp.distance(op_side, dec.op_part.graph), sp.distance(mul_side, dec.mul_part.graph)


def restricted_operator_part(t: LinearRelation, tol=None):
    """``T_s`` restricted to ``(T(0)^⊥)²`` in an orthonormal basis ``Q`` of ``T(0)^⊥``.

    Returns ``(relation, Q)``; the relation acts in C^k × C^k with
    ``k = dim T(0)^⊥``.  ``None`` is returned for the relation when
    ``T(0)`` is the whole space.
    """
    dec = arens(t, tol)
    q = sp.complement(dec.mul_space)
    if q.dim == 0:
        return None, q
    return rel.restrict_to(dec.op_part, q, q, tol), q


def _shift_blocks(t: LinearRelation, lam: complex):
    """Graph basis blocks of ``λI - T``: pairs ``(x, λx - y)``."""
    return t.gx, lam * t.gx - t.gy


def in_resolvent_set(t: LinearRelation, lam: complex, tol=None) -> bool:
    """Whether ``(λI - T)^{-1}`` is an operator defined on all of X.

    That needs ``ker(λI - T) = {0}`` and ``R(λI - T) = X``; since the map
    ``(x, y) -> (x, λx - y)`` is injective on the graph, both amount to
    ``dim T = d`` and ``λ gx - gy`` invertible.
    """
    if t.dim_x != t.dim_y:
        raise DimensionMismatch("resolvent set is defined for relations in X × X")
    if t.dim != t.dim_x:
        return False
    _, b = _shift_blocks(t, lam)
    s = np.linalg.svd(b, compute_uv=False)
    return sp.numerical_rank(s, tol) == t.dim_x


def resolvent_operator(t: LinearRelation, lam: complex, tol=None) -> np.ndarray:
    """The matrix of ``(λI - T)^{-1}``.

    Raises
    ------
    NotInResolventSet
        If ``λ`` lies in the spectrum of ``t``.
    """
    if not in_resolvent_set(t, lam, tol):
        raise NotInResolventSet(f"{lam} is in the spectrum")
    a, b = _shift_blocks(t, lam)
    return a @ np.linalg.inv(b)


def shifted_inverse(t: LinearRelation, lam: complex, tol=None) -> np.ndarray:
    """The matrix of ``(T - λI)^{-1} = -(λI - T)^{-1}``."""
    return -resolvent_operator(t, lam, tol)


def operator_part_eigenvalues(t: LinearRelation, tol=None) -> np.ndarray:
    """Eigenvalues of ``T_s`` restricted to ``(T(0)^⊥)²``, when that is an everywhere-defined operator."""
    restricted, _ = restricted_operator_part(t, tol)
    if restricted is None:
        return np.zeros(0, dtype=complex)
    return np.linalg.eigvals(rel.as_matrix_operator(restricted, tol))


@dataclass
class SpectrumReport:
    sample: list
    mismatches: list = field(default_factory=list)
    in_rho: list = field(default_factory=list)
    operator_part_eigenvalues: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def spectrum_identities(t: LinearRelation, sample, tol=None) -> SpectrumReport:
    """Compare resolvent membership of ``T`` with that of its restricted operator part.

    For Hermitian ``t`` the two sets coincide at every sample point; the
    purely multivalued case ``T(0) = X`` has empty spectrum.
    """
    restricted, _ = restricted_operator_part(t, tol)
    report = SpectrumReport(sample=list(sample))
    for lam in report.sample:
        whole = in_resolvent_set(t, lam, tol)
        part = True if restricted is None else in_resolvent_set(restricted, lam, tol)
        report.in_rho.append(whole)
        if whole != part:
            report.mismatches.append(lam)
    if restricted is not None and rel.domain(restricted, tol).dim == restricted.dim_x \
            and rel.is_operator(restricted, tol):
        report.operator_part_eigenvalues = list(operator_part_eigenvalues(t, tol))
    return report


def domain_density_residual(t: LinearRelation, tol=None) -> float:
    """Distance between ``D(T_s) = D(T)`` and ``T*(0)^⊥``.

    ``(0, g) ∈ T*`` exactly when ``g ⊥ D(T)``, so in finite dimension the
    two subspaces always coincide; the value is kept as a diagnostic.
    """
    adj_mul = rel.mul_part_space(rel.adjoint(t), tol)
    return sp.distance(rel.domain(t, tol), sp.complement(adj_mul))
