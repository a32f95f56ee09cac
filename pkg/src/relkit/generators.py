"""Seeded random relations and perturbation scenarios.

All randomness flows through ``numpy.random.Generator`` objects.  A run
seed is split with :class:`numpy.random.SeedSequence` into one independent
PCG64 stream per trial, so trial ``k`` draws the same numbers whether
trials run serially, in parallel, or alone.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import relation as rel
from . import subspace as sp
from .errors import InvalidInput
from .relation import LinearRelation, OperatorOnSubspace
from .schatten import split
from .subspace import Subspace

CLASSES = ("generic", "hermitian", "self_adjoint", "additive", "gamma_admissible")


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of a randomized run.

    ``mul_dim`` and ``graph_dim`` are drawn per trial when left as ``None``.
    ``rel_class="all"`` cycles through every scenario family in each trial.
    """

    dim: int = 6
    mul_dim: int | None = None
    graph_dim: int | None = None
    seed: int = 0
    trials: int = 1
    rel_class: str = "all"

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidInput("dim must be positive")
        if self.trials < 1:
            raise InvalidInput("trials must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidInput("seed must be a 64-bit unsigned integer")
        if self.rel_class not in CLASSES + ("all",):
            raise InvalidInput(f"unknown class {self.rel_class!r}")
        if self.mul_dim is not None and not 0 <= self.mul_dim <= self.dim:
            raise InvalidInput("mul_dim must lie in [0, dim]")
        if self.graph_dim is not None:
            lo = self.mul_dim or 0
            if not lo <= self.graph_dim <= 2 * self.dim:
                raise InvalidInput("graph_dim must lie in [mul_dim, 2 dim]")
            if self.graph_dim - lo > self.dim:
                raise InvalidInput("graph_dim - mul_dim exceeds the domain dimension")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["class"] = d.pop("rel_class")
        return d


def trial_rngs(seed: int, trials: int) -> list[np.random.Generator]:
    """One independent PCG64 generator per trial."""
    return [np.random.Generator(np.random.PCG64(s))
            for s in np.random.SeedSequence(seed).spawn(trials)]


def _gaussian(rng, rows, cols):
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_matrix(rng, rows: int, cols: int | None = None, scale: float = 1.0) -> np.ndarray:
    cols = rows if cols is None else cols
    return scale * _gaussian(rng, rows, cols) / np.sqrt(2 * max(rows, cols, 1))


def random_hermitian(rng, n: int, scale: float = 1.0) -> np.ndarray:
    m = random_matrix(rng, n, n, scale)
    return (m + m.conj().T) / 2


def random_subspace(dim: int, r: int, rng, within: Subspace | None = None) -> Subspace:
    """Haar-random ``r``-dimensional subspace of C^dim (or of ``within``)."""
    if not 0 <= r <= dim:
        raise InvalidInput(f"cannot draw a {r}-dimensional subspace of C^{dim}")
    if within is not None:
        if r > within.dim:
            raise InvalidInput("subspace dimension exceeds the enclosing subspace")
        if r == 0:
            return Subspace.zero(dim)
        inner = random_subspace(within.dim, r, rng)
        return Subspace(dim, within.basis @ inner.basis)
    if r == 0:
        return Subspace.zero(dim)
    q, rr = np.linalg.qr(_gaussian(rng, dim, r))
    # fixing the phases of diag(R) makes the distribution exactly Haar
    ph = np.diag(rr) / np.abs(np.diag(rr))
    return Subspace(dim, q * ph)


def operator_plus_mul(dom: Subspace, matrix: np.ndarray, mul: Subspace) -> LinearRelation:
    """``{(x, Bx + m) : x in dom, m in mul}``."""
    g = rel.from_operator(OperatorOnSubspace(dom, matrix))
    if mul.dim == 0:
        return g
    m = LinearRelation.multivalued(mul, dom.ambient_dim)
    d = dom.ambient_dim
    total = sp.sum_(g.graph, m.graph)
    return LinearRelation(d, mul.ambient_dim, total)


def _draw(value, lo, hi, rng):
    return int(rng.integers(lo, hi + 1)) if value is None else value


# -- single relations -------------------------------------------------------

def generic_relation(d: int, rng, mul_dim=None, graph_dim=None) -> LinearRelation:
    """Random operator graph on a random domain plus a random multivalued part."""
    m = _draw(mul_dim, 0, d - 1, rng)
    g = _draw(graph_dim, m, m + d, rng)
    dom = random_subspace(d, g - m, rng)
    return operator_plus_mul(dom, random_matrix(rng, d), random_subspace(d, m, rng))


def hermitian_relation(d: int, rng, mul_dim=None, dom_dim=None, k=None) -> LinearRelation:
    """``{(x, Kx + m) : x in D, m in M}`` with ``D ⊂ M^⊥`` and K Hermitian."""
    m = _draw(mul_dim, 0, d - 1, rng)
    mul = random_subspace(d, m, rng)
    perp = sp.complement(mul)
    dd = _draw(dom_dim, 0, perp.dim, rng)
    dom = random_subspace(d, dd, rng, within=perp)
    k = random_hermitian(rng, d) if k is None else k
    return operator_plus_mul(dom, k, mul)


def self_adjoint_relation(d: int, rng, mul_dim=None, mul=None, k=None) -> LinearRelation:
    """Hermitian operator on ``M^⊥`` plus the purely multivalued part ``{0} × M``."""
    if mul is None:
        mul = random_subspace(d, _draw(mul_dim, 0, d - 1, rng), rng)
    perp = sp.complement(mul)
    p = perp.projector
    k = random_hermitian(rng, d) if k is None else k
    return operator_plus_mul(perp, p @ k @ p, mul)


def random_relation(cfg: GeneratorConfig, rng) -> LinearRelation:
    """One relation of class ``cfg.rel_class``; class predicates are re-verified."""
    cls = cfg.rel_class
    d = cfg.dim
    if cls == "generic":
        return generic_relation(d, rng, cfg.mul_dim, cfg.graph_dim)
    if cls == "hermitian":
        dom_dim = None if cfg.graph_dim is None else cfg.graph_dim - (cfg.mul_dim or 0)
        t = hermitian_relation(d, rng, cfg.mul_dim, dom_dim)
        _assert(rel.is_hermitian(t), "generated relation is not Hermitian")
        return t
    if cls == "self_adjoint":
        t = self_adjoint_relation(d, rng, cfg.mul_dim)
        _assert(rel.is_self_adjoint(t), "generated relation is not self-adjoint")
        return t
    if cls == "additive":
        return additive_triple(d, rng, cfg.mul_dim)[2]
    if cls == "gamma_admissible":
        return gamma_admissible_triple(d, rng, cfg.mul_dim)[0]
    raise InvalidInput(f"random_relation needs a single class, got {cls!r}")


def _assert(cond, message):
    if not cond:
        raise InvalidInput(message)


# -- pairs and triples --------------------------------------------------------

def shifted_pair(d: int, rng, mul_dim=None):
    """Generic ``(S, T)`` of equal dimension and an everywhere-defined operator A.

    ``‖A‖`` ranges over two orders of magnitude.
    """
    m = _draw(mul_dim, 0, d - 1, rng)
    g = _draw(None, m, m + d, rng)
    s = generic_relation(d, rng, m, g)
    t = generic_relation(d, rng, m, g)
    scale = float(10 ** rng.uniform(-1, 1))
    a = OperatorOnSubspace.everywhere(random_matrix(rng, d, d, scale))
    return s, t, a


def nested_pair(d: int, rng):
    """``(S, T)`` with ``S(0) ⊂ T(0)`` and ``D(S) ⊂ D(T)``."""
    mt = _draw(None, 0, d - 1, rng)
    mul_t = random_subspace(d, mt, rng)
    dom_t = random_subspace(d, _draw(None, 0, d, rng), rng)
    t = operator_plus_mul(dom_t, random_matrix(rng, d), mul_t)
    mul_s = random_subspace(d, _draw(None, 0, mt, rng), rng, within=mul_t)
    dom_s = random_subspace(d, _draw(None, 0, dom_t.dim, rng), rng, within=dom_t)
    s = operator_plus_mul(dom_s, random_matrix(rng, d), mul_s)
    return s, t


def common_mul_pair(d: int, rng, mul_dim=None, hermitian=False, same_domain=True):
    """``(S, T)`` with ``S(0) = T(0) = M`` and domains inside ``M^⊥``."""
    m = _draw(mul_dim, 0, d - 1, rng)
    mul = random_subspace(d, m, rng)
    perp = sp.complement(mul)
    dom_s = random_subspace(d, _draw(None, 0, perp.dim, rng), rng, within=perp)
    dom_t = dom_s if same_domain else random_subspace(d, _draw(None, 0, perp.dim, rng), rng,
                                                      within=perp)
    make = (lambda: random_hermitian(rng, d)) if hermitian else (lambda: random_matrix(rng, d))
    return operator_plus_mul(dom_s, make(), mul), operator_plus_mul(dom_t, make(), mul)


def self_adjoint_pair(d: int, rng, mul_dim=None, same_mul=False):
    s = self_adjoint_relation(d, rng, mul_dim)
    if same_mul:
        return s, self_adjoint_relation(d, rng, mul=rel.mul_part_space(s))
    return s, self_adjoint_relation(d, rng, mul_dim)


def additive_triple(d: int, rng, mul_dim=None, a_rank=None):
    """``(S, A, T = S + A)`` with S self-adjoint and A Hermitian, ``A(0) ⊂ S(0)``.

    ``A`` is ``{(x, Kx + n) : x ⊥ A(0), n in A(0)}`` as a relation; with
    ``a_rank`` set, ``K`` has that rank and acts inside ``S(0)^⊥``.
    """
    s = self_adjoint_relation(d, rng, mul_dim)
    mul = rel.mul_part_space(s)
    a0 = random_subspace(d, _draw(None, 0, mul.dim, rng), rng, within=mul)
    a0_perp = sp.complement(a0)
    if a_rank is None:
        k = random_hermitian(rng, d)
    else:
        v = random_subspace(d, a_rank, rng, within=sp.complement(mul)).basis
        k = v @ np.diag(rng.uniform(0.5, 2.0, a_rank) * rng.choice([-1, 1], a_rank)) @ v.conj().T
    p = a0_perp.projector
    a = operator_plus_mul(a0_perp, p @ k @ p, a0)
    t = rel.add(s, a)
    return s, a, t


def gamma_admissible_triple(d: int, rng, mul_dim=None):
    """``(S, T, A)`` with ``(S-A)^{-1} = R_S`` and ``(T-A)^{-1} = R_T`` prescribed matrices.

    ``S = {(R_S y, y + A R_S y)}``; rank deficiency of ``R_S`` becomes ``S(0)``.
    """
    m = _draw(mul_dim, 0, d - 1, rng)
    a = random_matrix(rng, d)

    def build():
        r = random_matrix(rng, d, d - m) @ random_matrix(rng, d - m, d) if m else random_matrix(rng, d)
        return LinearRelation.from_pairs(r, np.eye(d) + a @ r)

    return build(), build(), OperatorOnSubspace.everywhere(a)


def sum_decomposition_pair(d: int, rng):
    """``(S, T)`` where ``D(S) ⊂ D(T)`` and ``T(0) ⊂ S(0)`` each hold with probability 1/2."""
    dom_t = random_subspace(d, _draw(None, 1, d, rng), rng)
    if rng.random() < 0.5:
        dom_s = random_subspace(d, _draw(None, 0, dom_t.dim, rng), rng, within=dom_t)
    else:
        dom_s = random_subspace(d, _draw(None, 1, d, rng), rng)
    mul_s = random_subspace(d, _draw(None, 0, d - 1, rng), rng)
    if rng.random() < 0.5:
        mul_t = random_subspace(d, _draw(None, 0, mul_s.dim, rng), rng, within=mul_s)
    else:
        mul_t = random_subspace(d, _draw(None, 1, d - 1, rng), rng)
    s = operator_plus_mul(dom_s, random_matrix(rng, d), mul_s)
    t = operator_plus_mul(dom_t, random_matrix(rng, d), mul_t)
    return s, t


def random_blocks(d: int, rng):
    """A random block operator with block sizes drawn from ``1..d``."""
    dx, dy = (int(v) for v in rng.integers(1, d + 1, size=2))
    return split(random_matrix(rng, dx + dy), dx, dy)
