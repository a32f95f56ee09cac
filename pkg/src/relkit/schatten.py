"""Singular values, trace norms and 2×2 block operator matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidInput
from .subspace import as_matrix


@dataclass(frozen=True)
class SingularSpectrum:
    """Non-increasing singular values, zeros included up to ``min(m, n)``."""

    values: tuple

    @property
    def op_norm(self) -> float:
        return self.values[0] if self.values else 0.0

    @property
    def trace_norm(self) -> float:
        return float(sum(self.values))

    def padded(self, n: int) -> np.ndarray:
        """Values as an array of length ``n`` (truncated or zero-padded)."""
        out = np.zeros(n)
        k = min(n, len(self.values))
        out[:k] = self.values[:k]
        return out

    def to_dict(self) -> dict:
        return {"values": list(self.values), "op_norm": self.op_norm,
                "trace_norm": self.trace_norm}


def singular_values(m) -> SingularSpectrum:
    """Singular values of a matrix (eigenvalues of ``|M|``), sorted non-increasingly."""
    a = as_matrix(m)
    if a.size == 0:
        return SingularSpectrum(())
    s = np.linalg.svd(a, compute_uv=False)
    return SingularSpectrum(tuple(float(v) for v in s))


def trace_norm(m) -> float:
    return singular_values(m).trace_norm


def op_norm(m) -> float:
    return singular_values(m).op_norm


def psd_sqrt(h: np.ndarray) -> np.ndarray:
    """Square root of a Hermitian positive semidefinite matrix.

    Eigenvalues are clamped at zero: roundoff can push them slightly negative.
    """
    h = (h + h.conj().T) / 2
    w, v = np.linalg.eigh(h)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def abs_operator(m) -> np.ndarray:
    """``|M| = (M^H M)^{1/2}``."""
    a = as_matrix(m)
    return psd_sqrt(a.conj().T @ a)


@dataclass(frozen=True, eq=False)
class BlockOperator:
    """``Q = [[q11, q12], [q21, q22]]`` acting on X × Y.

    ``q11: X -> X``, ``q21: X -> Y``, ``q12: Y -> X``, ``q22: Y -> Y``.
    """

    q11: np.ndarray
    q21: np.ndarray
    q12: np.ndarray
    q22: np.ndarray

    def __post_init__(self):
        blocks = [as_matrix(getattr(self, k)) for k in ("q11", "q21", "q12", "q22")]
        q11, q21, q12, q22 = blocks
        nx, ny = q11.shape[0], q22.shape[0]
        expect = {"q11": (nx, nx), "q21": (ny, nx), "q12": (nx, ny), "q22": (ny, ny)}
        for name, b in zip(expect, blocks):
            if b.shape != expect[name]:
                raise DimensionMismatch(f"{name} has shape {b.shape}, expected {expect[name]}")
            object.__setattr__(self, name, b)

    @property
    def dim_x(self) -> int:
        return self.q11.shape[0]

    @property
    def dim_y(self) -> int:
        return self.q22.shape[0]

    def blocks(self) -> dict:
        return {"q11": self.q11, "q21": self.q21, "q12": self.q12, "q22": self.q22}

    def column_grams(self):
        """``Q_j = Q_1j^H Q_1j + Q_2j^H Q_2j`` for j = 1, 2."""
        g1 = self.q11.conj().T @ self.q11 + self.q21.conj().T @ self.q21
        g2 = self.q12.conj().T @ self.q12 + self.q22.conj().T @ self.q22
        return g1, g2

    def gram_blocks(self) -> np.ndarray:
        """``Q^H Q`` assembled block by block."""
        h = lambda a: a.conj().T  # noqa: E731
        top = np.hstack([h(self.q11) @ self.q11 + h(self.q21) @ self.q21,
                         h(self.q11) @ self.q12 + h(self.q21) @ self.q22])
        bottom = np.hstack([h(self.q12) @ self.q11 + h(self.q22) @ self.q21,
                            h(self.q12) @ self.q12 + h(self.q22) @ self.q22])
        return np.vstack([top, bottom])


def assemble(b: BlockOperator) -> np.ndarray:
    return np.block([[b.q11, b.q12], [b.q21, b.q22]])


def split(m, dim_x: int, dim_y: int) -> BlockOperator:
    a = as_matrix(m)
    if a.shape != (dim_x + dim_y, dim_x + dim_y):
        raise DimensionMismatch(f"matrix of shape {a.shape} does not split as {dim_x}+{dim_y}")
    return BlockOperator(q11=a[:dim_x, :dim_x], q21=a[dim_x:, :dim_x],
                         q12=a[:dim_x, dim_x:], q22=a[dim_x:, dim_x:])


@dataclass
class BlockBoundsReport:
    """Outcome of :func:`check_block_sv_bounds`.

    Violations are positive parts of ``lhs - rhs``; the three stated bounds
    are ``top`` (largest singular value), ``tail`` (index-wise bound for
    n >= 2) and ``column`` (``‖Q_ij x‖ <= ‖P_j x‖`` and its singular-value
    consequence).  ``weyl`` and ``trace`` are the correct replacements for
    the index-wise tail bound and are reported alongside.
    """

    top_violation: float
    tail_violation: float
    tail_violations_by_index: list
    column_violation: float
    weyl_violation: float
    trace_violation: float
    column_gram_violation: float
    slack: float

    def holds(self, eps: float) -> dict:
        return {
            "top": self.top_violation <= eps,
            "tail": self.tail_violation <= eps,
            "column": self.column_violation <= eps,
            "weyl": self.weyl_violation <= eps,
            "trace": self.trace_violation <= eps,
            "column_gram": self.column_gram_violation <= eps,
        }


def check_block_sv_bounds(b: BlockOperator, probes=None, rng=None) -> BlockBoundsReport:
    """Check singular-value bounds relating ``Q`` to its four blocks.

    Parameters
    ----------
    b : BlockOperator
    probes : int or array_like, optional
        Test vectors for ``‖Q_ij x‖ <= ‖P_j x‖``: either a count of random
        vectors drawn from ``rng`` or explicit columns per side as a pair
        ``(xs, ys)``.  The bound is always also checked through singular
        values, ``s_n(Q_ij) <= s_n(P_j)``.
    """
    q = assemble(b)
    n = q.shape[0]
    sq = singular_values(q).padded(n)
    sb = {k: singular_values(v).padded(n) for k, v in b.blocks().items()}
    total = sum(sb.values())

    top = max(0.0, sq[0] - total[0])
    tail_by_n = [max(0.0, sq[k] - total[k]) for k in range(1, n)]
    tail = max(tail_by_n, default=0.0)

    # Weyl: s_{4k-3}(Q) <= sum_ij s_k(Q_ij), since Q is a sum of four embedded blocks
    weyl = 0.0
    for k in range(1, n + 1):
        idx = 4 * k - 4
        if idx < n:
            weyl = max(weyl, sq[idx] - total[k - 1])
    trace = max(0.0, sq.sum() - total.sum())

    g1, g2 = b.column_grams()
    p1, p2 = psd_sqrt(g1), psd_sqrt(g2)
    column = 0.0
    col_pairs = (("q11", p1), ("q21", p1), ("q12", p2), ("q22", p2))
    for name, p in col_pairs:
        sp_ = singular_values(p).padded(n)
        column = max(column, float(np.max(sb[name] - sp_)))
    if probes is not None:
        if isinstance(probes, int):
            gen = np.random.default_rng() if rng is None else rng
            xs = gen.standard_normal((b.dim_x, probes)) + 1j * gen.standard_normal((b.dim_x, probes))
            ys = gen.standard_normal((b.dim_y, probes)) + 1j * gen.standard_normal((b.dim_y, probes))
        else:
            xs, ys = probes
        for name, p in col_pairs:
            v = xs if name in ("q11", "q21") else ys
            diff = np.linalg.norm(getattr(b, name) @ v, axis=0) - np.linalg.norm(p @ v, axis=0)
            column = max(column, float(np.max(diff)) if diff.size else 0.0)

    # eigenvalues of P_j are singular values of Q restricted to one factor, hence <= s_n(Q)
    gram = max(float(np.max(singular_values(p).padded(n) - sq)) for p in (p1, p2))

    slack = float(np.min(total - sq))
    return BlockBoundsReport(top, tail, tail_by_n, max(0.0, column), max(0.0, weyl),
                             trace, max(0.0, gram), slack)


@dataclass
class TraceAlgebraReport:
    triangle_violation: float
    left_ideal_violation: float
    right_ideal_violation: float
    adjoint_norm_gap: float

    @property
    def worst(self) -> float:
        return max(self.triangle_violation, self.left_ideal_violation,
                   self.right_ideal_violation, self.adjoint_norm_gap)


def trace_norm_algebra_checks(s, t) -> TraceAlgebraReport:
    """Trace-norm ideal inequalities for a pair of matrices.

    ``‖S+T‖₁ <= ‖S‖₁ + ‖T‖₁`` (square, same shape), ``‖ST‖₁ <= ‖S‖ ‖T‖₁``
    and ``‖ST‖₁ <= ‖S‖₁ ‖T‖``, plus ``‖M^H‖ = ‖M‖``.
    """
    a, b = as_matrix(s), as_matrix(t)
    if not np.all(np.isfinite(a)) or not np.all(np.isfinite(b)):
        raise InvalidInput("non-finite entries")
    tri = 0.0
    if a.shape == b.shape:
        tri = max(0.0, trace_norm(a + b) - trace_norm(a) - trace_norm(b))
    left = right = 0.0
    if a.shape[1] == b.shape[0]:
        ab = trace_norm(a @ b)
        left = max(0.0, ab - op_norm(a) * trace_norm(b))
        right = max(0.0, ab - trace_norm(a) * op_norm(b))
    adj = max(abs(op_norm(a.conj().T) - op_norm(a)), abs(op_norm(b.conj().T) - op_norm(b)))
    return TraceAlgebraReport(tri, left, right, adj)
