"""Graph projections, projection gaps and the perturbation identities built on them.

Every ``check_*`` function evaluates one family of identities or
inequalities for a :class:`PerturbationScenario` and returns a
:class:`~relkit.report.CheckResult`.  When the scenario lies outside the
regime a statement is about, the check raises
:class:`~relkit.errors.HypothesisViolated` instead of reporting a failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import arens as ar
from . import relation as rel
from . import subspace as sp
from .errors import (DimensionMismatch, HypothesisViolated, NotInGammaSet,
                     NotInResolventSet, NotSingleValued)
from .relation import LinearRelation, OperatorOnSubspace
from .report import verdict
from .schatten import SingularSpectrum, op_norm, singular_values, trace_norm
from .subspace import DEFAULT_TOL, Subspace

DEFAULT_LAMBDAS = (1j, -1j, 1 + 1j, 2.0)


def _tol(tol):
    return DEFAULT_TOL if tol is None else tol


# -- graph projections ------------------------------------------------------

def graph_projection(t: LinearRelation) -> np.ndarray:
    """Orthogonal projection of X × Y onto the graph of ``t``."""
    return t.projector


def flip_matrix(dim_x: int, dim_y: int) -> np.ndarray:
    """Permutation ``J: (x, y) -> (y, x)`` from X × Y to Y × X."""
    j = np.zeros((dim_x + dim_y, dim_x + dim_y))
    j[:dim_y, dim_x:] = np.eye(dim_y)
    j[dim_y:, :dim_x] = np.eye(dim_x)
    return j


def inverse_graph_projection(t: LinearRelation) -> np.ndarray:
    """``P_{T^{-1}}`` obtained by conjugating ``P_T`` with the coordinate flip."""
    j = flip_matrix(t.dim_x, t.dim_y)
    return j @ t.projector @ j.T


@dataclass(frozen=True, eq=False)
class ProjectionGap:
    p_t: np.ndarray
    p_s: np.ndarray
    gap: np.ndarray
    spectrum: SingularSpectrum

    @property
    def norm(self) -> float:
        return self.spectrum.op_norm

    @property
    def trace_norm(self) -> float:
        return self.spectrum.trace_norm


def projection_gap(s: LinearRelation, t: LinearRelation) -> ProjectionGap:
    """``P_T - P_S`` together with its singular values."""
    if (s.dim_x, s.dim_y) != (t.dim_x, t.dim_y):
        raise DimensionMismatch("relations live in different product spaces")
    p_t, p_s = t.projector, s.projector
    gap = p_t - p_s
    return ProjectionGap(p_t, p_s, gap, singular_values(gap))


def one_sided_gap(a: Subspace, b: Subspace) -> float:
    """``sup {d(w, b) : w in a, ‖w‖ = 1}``: the largest sine of a principal angle from a to b."""
    if a.dim == 0:
        return 0.0
    resid = a.basis - b.basis @ (b.basis.conj().T @ a.basis)
    return float(np.linalg.norm(resid, 2))


def gap_by_distances(s: LinearRelation, t: LinearRelation) -> float:
    """The projector-gap norm recomputed from unit-sphere distances."""
    return max(one_sided_gap(t.graph, s.graph), one_sided_gap(s.graph, t.graph))


# -- scenarios --------------------------------------------------------------

@dataclass(frozen=True)
class HypothesisFlags:
    """Standing hypotheses recomputed from a scenario.

    Flags that involve the shift term are ``None`` when the scenario has
    none; flags that only make sense in X × X are ``False`` otherwise.
    """

    same_mul_part: bool
    same_domain: bool
    domains_in_t_mul_perp: bool
    domains_in_s_mul_perp: bool
    s_hermitian: bool
    t_hermitian: bool
    s_self_adjoint: bool
    t_self_adjoint: bool
    resolvent_witness: complex | None
    domains_in_dom_a: bool | None = None
    a_single_valued: bool | None = None
    a_mul_in_s_mul: bool | None = None
    s_mul_perp_in_dom_a: bool | None = None
    a_hermitian: bool | None = None
    a_dense: bool | None = None
    additive: bool | None = None

    def as_dict(self) -> dict:
        return dict(self.__dict__)


class PerturbationScenario:
    """A pair ``(S, T)`` of relations, optionally with a shift/perturbation term ``A``.

    ``a`` may be an :class:`OperatorOnSubspace` or a :class:`LinearRelation`
    (multivalued perturbation terms appear in the additive setting).
    Hypothesis flags are always recomputed from the data.
    """

    def __init__(self, s: LinearRelation, t: LinearRelation, a=None, tol=None):
        if (s.dim_x, s.dim_y) != (t.dim_x, t.dim_y):
            raise DimensionMismatch("S and T must live in the same product space")
        self.s, self.t, self.a = s, t, a
        self.tol = _tol(tol)

    @property
    def square(self) -> bool:
        return self.s.dim_x == self.s.dim_y

    @cached_property
    def a_relation(self) -> LinearRelation | None:
        if self.a is None or isinstance(self.a, LinearRelation):
            return self.a
        return rel.from_operator(self.a)

    @cached_property
    def a_operator(self) -> OperatorOnSubspace | None:
        """``A`` as an operator, or ``None`` if absent or multivalued."""
        if self.a is None or isinstance(self.a, OperatorOnSubspace):
            return self.a
        try:
            return rel.to_operator(self.a, self.tol)
        except NotSingleValued:
            return None

    @cached_property
    def parts(self):
        """Arens decompositions of S, T (and A when present)."""
        out = {"s": ar.arens(self.s, self.tol), "t": ar.arens(self.t, self.tol)}
        if self.a_relation is not None:
            out["a"] = ar.arens(self.a_relation, self.tol)
        return out

    @cached_property
    def flags(self) -> HypothesisFlags:
        tol = self.tol
        s, t = self.s, self.t
        ds, dt = rel.domain(s, tol), rel.domain(t, tol)
        ms, mt = self.parts["s"].mul_space, self.parts["t"].mul_space
        both = sp.sum_(ds, dt, tol)
        kw = dict(
            same_mul_part=sp.equals(ms, mt, tol),
            same_domain=sp.equals(ds, dt, tol),
            domains_in_t_mul_perp=sp.is_subspace_of(both, sp.complement(mt), tol),
            domains_in_s_mul_perp=sp.is_subspace_of(both, sp.complement(ms), tol),
            s_hermitian=self.square and rel.is_hermitian(s, tol),
            t_hermitian=self.square and rel.is_hermitian(t, tol),
            s_self_adjoint=self.square and rel.is_self_adjoint(s, tol),
            t_self_adjoint=self.square and rel.is_self_adjoint(t, tol),
            resolvent_witness=self._witness(),
        )
        if self.a_relation is not None:
            a = self.a_relation
            da = rel.domain(a, tol)
            ma = self.parts["a"].mul_space
            additive = (sp.equals(ds, dt, tol) and sp.is_subspace_of(ds, da, tol)
                        and rel.equals(rel.add(s, a, tol), t, tol))
            kw.update(
                domains_in_dom_a=sp.is_subspace_of(both, da, tol),
                a_single_valued=ma.dim == 0,
                a_mul_in_s_mul=sp.is_subspace_of(ma, ms, tol),
                s_mul_perp_in_dom_a=sp.is_subspace_of(sp.complement(ms), da, tol),
                a_hermitian=(a.dim_x == a.dim_y) and rel.is_hermitian(a, tol),
                a_dense=da.dim == a.dim_x,
                additive=additive,
            )
        return HypothesisFlags(**kw)

    def _witness(self):
        if not self.square:
            return None
        for lam in DEFAULT_LAMBDAS:
            if ar.in_resolvent_set(self.s, lam, self.tol) and ar.in_resolvent_set(self.t, lam, self.tol):
                return lam
        return None

    def require(self, *names):
        """Raise :class:`HypothesisViolated` unless every named flag is true."""
        f = self.flags
        bad = [n for n in names if not getattr(f, n)]
        if bad:
            raise HypothesisViolated(f"hypotheses not satisfied: {', '.join(bad)}", bad)


def _shift_operator(sc: PerturbationScenario) -> OperatorOnSubspace:
    if sc.a is None:
        raise HypothesisViolated("scenario has no shift operator", ["a_present"])
    op = sc.a_operator
    if op is None:
        raise HypothesisViolated("shift term is multivalued", ["a_single_valued"])
    return op


# -- gap inequalities under a bounded shift --------------------------------

def gamma_constant(a: OperatorOnSubspace) -> float:
    """``2(1 + ‖A‖²)``."""
    return 2.0 * (1.0 + a.norm ** 2)


def _shifted_gaps(sc: PerturbationScenario):
    a = _shift_operator(sc)
    sc.require("domains_in_dom_a")
    g = projection_gap(sc.s, sc.t)
    gs = projection_gap(rel.minus_operator(sc.s, a, sc.tol), rel.minus_operator(sc.t, a, sc.tol))
    return a, g, gs


def check_shift_gap_bound(sc: PerturbationScenario, eps=None):
    """Two-sided bound of the graph gap under subtraction of a bounded operator.

    Verifies ``‖P_{T-A} - P_{S-A}‖ / γ <= ‖P_T - P_S‖ <= γ ‖P_{T-A} - P_{S-A}‖``
    with ``γ = 2(1 + ‖A‖²)``.  ``bound_usage`` in the details is the larger of
    the two ratios lhs/rhs, i.e. how much of the allowed factor was used.
    """
    eps = _tol(sc.tol).eps_eq if eps is None else eps
    a, g, gs = _shifted_gaps(sc)
    gamma = gamma_constant(a)
    n0, n1 = g.norm, gs.norm
    lower, upper = n1 / gamma - n0, n0 - gamma * n1
    usage = 0.0
    if n1 > 0:
        usage = max(usage, n0 / (gamma * n1))
    if n0 > 0:
        usage = max(usage, n1 / (gamma * n0))
    return verdict("shift_gap_bound", max(0.0, lower, upper), eps, slack=min(-lower, -upper),
                   gamma=gamma, gap=n0, shifted_gap=n1, bound_usage=usage)


def check_shift_sv_bounds(sc: PerturbationScenario, eps=None):
    """Index-wise version of :func:`check_shift_gap_bound` for every singular value."""
    eps = _tol(sc.tol).eps_eq if eps is None else eps
    a, g, gs = _shifted_gaps(sc)
    gamma = gamma_constant(a)
    n = g.gap.shape[0]
    s0, s1 = g.spectrum.padded(n), gs.spectrum.padded(n)
    lower, upper = s1 / gamma - s0, s0 - gamma * s1
    worst = float(max(0.0, lower.max(), upper.max()))
    per_n = np.minimum(-lower, -upper)
    return verdict("shift_sv_bounds", worst, eps, slack=float(per_n.min()), gamma=gamma,
                   per_n_slack=per_n.tolist(),
                   trace_norms=[g.trace_norm, gs.trace_norm])


def check_gap_formula(s: LinearRelation, t: LinearRelation, eps=None):
    """Projector-gap norm versus the unit-sphere distance formula."""
    eps = DEFAULT_TOL.eps_eq if eps is None else eps
    g = projection_gap(s, t)
    d = gap_by_distances(s, t)
    return verdict("gap_distance_formula", abs(g.norm - d), eps, gap=g.norm, by_distances=d,
                   bounded_by_one=g.norm <= 1 + eps)


# -- the admissible set Gamma(S, T) ------------------------------------------

@dataclass(frozen=True)
class GammaMembership:
    domains_ok: bool
    a_single_valued: bool
    a_dense: bool
    s_inverse_ok: bool
    t_inverse_ok: bool

    @property
    def member(self) -> bool:
        return self.domains_ok and self.a_single_valued and self.s_inverse_ok and self.t_inverse_ok


def _inverse_is_everywhere_operator(r: LinearRelation, tol) -> bool:
    """``r^{-1}`` single-valued with domain all of Y: ``ker r = {0}`` and ``R(r) = Y``."""
    dom, mul = rel._split_by_projection(r.gy, r.gx, tol)
    return mul.dim == 0 and dom.dim == r.dim_y


def gamma_membership(s: LinearRelation, t: LinearRelation, a: OperatorOnSubspace,
                     x_space: Subspace | None = None, tol=None) -> GammaMembership:
    """Evaluate the conditions defining ``A in Γ(S, T)``.

    ``x_space`` models a domain space X that is a proper subspace of the
    ambient coordinates; density of ``D(A)`` is judged relative to it and
    recorded but, in finite dimension, not required for membership.
    """
    tol = _tol(tol)
    if isinstance(a, LinearRelation):
        try:
            a = rel.to_operator(a, tol)
        except NotSingleValued:
            return GammaMembership(False, False, False, False, False)
    both = sp.sum_(rel.domain(s, tol), rel.domain(t, tol), tol)
    domains_ok = sp.is_subspace_of(both, a.domain, tol)
    x = Subspace.full(a.dim_x) if x_space is None else x_space
    dense = sp.is_subspace_of(x, a.domain, tol)
    s_ok = _inverse_is_everywhere_operator(rel.minus_operator(s, a, tol), tol)
    t_ok = _inverse_is_everywhere_operator(rel.minus_operator(t, a, tol), tol)
    return GammaMembership(domains_ok, True, dense, s_ok, t_ok)


def is_in_gamma_set(s, t, a, x_space=None, tol=None) -> bool:
    return gamma_membership(s, t, a, x_space, tol).member


# -- resolvent-side block formulas -----------------------------------------

@dataclass(frozen=True, eq=False)
class ResolventBlocks:
    """Blocks of ``P_{(T-A)^{-1}} - P_{(S-A)^{-1}}`` on Y × X built from the two inverses.

    ``r_t = (T-A)^{-1}`` and ``r_s = (S-A)^{-1}`` map Y to X; ``f_*`` act on
    Y and ``h_*`` on X.
    """

    r_t: np.ndarray
    r_s: np.ndarray
    f_t: np.ndarray
    f_s: np.ndarray
    h_t: np.ndarray
    h_s: np.ndarray
    p11: np.ndarray
    p12: np.ndarray
    p21: np.ndarray
    p22: np.ndarray
    w: np.ndarray

    def assembled(self) -> np.ndarray:
        return np.block([[self.p11, self.p12], [self.p21, self.p22]])


def _f_h(r: np.ndarray):
    ny, nx = r.shape[1], r.shape[0]
    f = np.linalg.inv(np.eye(ny) + r.conj().T @ r)
    h = np.linalg.inv(np.eye(nx) + r @ r.conj().T)
    return f, h


def _blocks_from_inverses(r_t: np.ndarray, r_s: np.ndarray) -> ResolventBlocks:
    f_t, h_t = _f_h(r_t)
    f_s, h_s = _f_h(r_s)
    ht, hs = r_t.conj().T, r_s.conj().T
    return ResolventBlocks(
        r_t=r_t, r_s=r_s, f_t=f_t, f_s=f_s, h_t=h_t, h_s=h_s,
        p11=f_t - f_s,
        p21=r_t @ f_t - r_s @ f_s,
        p12=ht @ h_t - hs @ h_s,
        p22=r_t @ ht @ h_t - r_s @ hs @ h_s,
        w=r_t - r_s,
    )


def resolvent_blocks(sc: PerturbationScenario) -> ResolventBlocks:
    """Compute ``F, H, P_ij`` and ``W`` for an admissible shift.

    Raises
    ------
    NotInGammaSet
        If ``sc.a`` is not in ``Γ(S, T)``.
    """
    a = _shift_operator(sc)
    if not is_in_gamma_set(sc.s, sc.t, a, tol=sc.tol):
        raise NotInGammaSet("shift operator is not admissible for this pair")
    r_t = rel.as_matrix_operator(rel.inverse(rel.minus_operator(sc.t, a, sc.tol)), sc.tol)
    r_s = rel.as_matrix_operator(rel.inverse(rel.minus_operator(sc.s, a, sc.tol)), sc.tol)
    return _blocks_from_inverses(r_t, r_s)


def adjoint_inverse(t: LinearRelation, a: OperatorOnSubspace, tol=None) -> np.ndarray:
    """``(T* - A*)^{-1}`` computed with relation adjoints rather than matrix transposes."""
    t_adj = rel.adjoint(t)
    a_adj = rel.adjoint(rel.from_operator(a))
    return rel.as_matrix_operator(rel.inverse(rel.subtract(t_adj, a_adj, tol)), tol)


def check_block_assembly(sc: PerturbationScenario, rb: ResolventBlocks | None = None, eps=None):
    """Assembled block matrix versus the directly computed inverse-graph projector difference.

    When ``D(A)`` is the whole space, ``(T* - A*)^{-1}`` is also computed
    from relation adjoints and compared with ``r_t^H``.
    """
    eps = sc.tol.eps_eq if eps is None else eps
    rb = resolvent_blocks(sc) if rb is None else rb
    a = _shift_operator(sc)
    direct = (inverse_graph_projection(rel.minus_operator(sc.t, a, sc.tol))
              - inverse_graph_projection(rel.minus_operator(sc.s, a, sc.tol)))
    resid = float(np.linalg.norm(rb.assembled() - direct, 2))
    details = {"assembly_residual": resid}
    worst = resid
    if sc.flags.a_dense:
        adj = max(float(np.linalg.norm(adjoint_inverse(sc.t, a, sc.tol) - rb.r_t.conj().T, 2)),
                  float(np.linalg.norm(adjoint_inverse(sc.s, a, sc.tol) - rb.r_s.conj().T, 2)))
        details["adjoint_route_residual"] = adj
        worst = max(worst, adj)
    block_sum = sum(trace_norm(p) for p in (rb.p11, rb.p12, rb.p21, rb.p22))
    details["gap_trace_norm"] = trace_norm(direct)
    details["block_trace_norm_sum"] = block_sum
    worst = max(worst, trace_norm(direct) - block_sum)
    return verdict("block_assembly", worst, eps, **details)


def check_w_identities(rb: ResolventBlocks, eps=None):
    """Factorizations linking ``W`` with the blocks ``P_ij``.

    Residuals are recorded per identity; the result fails if any exceeds ``eps``.
    """
    eps = DEFAULT_TOL.eps_eq if eps is None else eps
    h = lambda m: m.conj().T  # noqa: E731
    rt, rs, w = rb.r_t, rb.r_s, rb.w
    l1 = h(rs) @ rs - h(rt) @ rt
    l2 = rs @ h(rs) - rt @ h(rt)
    l3 = l2 @ rb.h_t
    nrm = lambda m: float(np.linalg.norm(m, 2)) if m.size else 0.0  # noqa: E731
    res = {
        "w_from_blocks": nrm(w + (rs @ rb.p11 - rb.p21) @ np.linalg.inv(rb.f_t)),
        "l1_two_forms": nrm(l1 - (-h(rs) @ w - h(w) @ rt)),
        "p11_factored": nrm(rb.p11 - rb.f_t @ l1 @ rb.f_s),
        "p21_from_w": nrm(rb.p21 - (rs @ rb.p11 + w @ rb.f_t)),
        "l2_two_forms": nrm(l2 - (-rs @ h(w) - w @ h(rt))),
        "h_diff_factored": nrm((rb.h_t - rb.h_s) - rb.h_t @ l2 @ rb.h_s),
        "p12_from_w": nrm(rb.p12 - (h(rs) @ (rb.h_t - rb.h_s) + h(w) @ rb.h_t)),
        "p22_formula": nrm(rb.p22 - (rs @ h(rs) @ (rb.h_t - rb.h_s) - l3)),
    }
    # F and H are Hermitian with spectrum in (0, 1]
    spec_err = 0.0
    for m in (rb.f_t, rb.f_s, rb.h_t, rb.h_s):
        spec_err = max(spec_err, nrm(m - h(m)))
        ev = np.linalg.eigvalsh((m + h(m)) / 2)
        spec_err = max(spec_err, float(max(0.0, ev.max() - 1.0, -ev.min())))
        if ev.min() <= 0:
            spec_err = max(spec_err, 1.0)
    res["f_h_spectrum"] = spec_err
    return verdict("w_identities", max(res.values()), eps, **res)


def check_resolvent_criterion(sc: PerturbationScenario, lam: complex, lam2: complex | None = None,
                              eps=None):
    """Quantitative core of the resolvent criterion at a point of ``ρ(S) ∩ ρ(T)``.

    With ``A = λI`` the gap inequalities give
    ``‖P_{T-λ} - P_{S-λ}‖₁ <= γ ‖P_T - P_S‖₁`` and back; the block formulas give
    ``‖W‖₁ <= (1 + ‖r_t‖²)(‖r_s‖ ‖P11‖₁ + ‖P21‖₁)`` and
    ``‖P11‖₁ <= (‖r_s‖ + ‖r_t‖) ‖W‖₁``.  All four are asserted.  The ratio of
    resolvent-difference trace norms at ``λ`` and ``lam2`` is only reported.
    """
    eps = sc.tol.eps_eq if eps is None else eps
    if not sc.square:
        raise DimensionMismatch("resolvent criterion needs relations in X × X")
    for name, r in (("S", sc.s), ("T", sc.t)):
        if not ar.in_resolvent_set(r, lam, sc.tol):
            raise NotInResolventSet(f"{lam} is in the spectrum of {name}")
    d = sc.s.dim_x
    shift = PerturbationScenario(sc.s, sc.t, OperatorOnSubspace.everywhere(lam * np.eye(d)), sc.tol)
    rb = resolvent_blocks(shift)
    gamma = 2.0 * (1.0 + abs(lam) ** 2)
    gap1 = projection_gap(sc.s, sc.t).trace_norm
    shifted1 = projection_gap(rel.shift_scalar(sc.s, lam, sc.tol), rel.shift_scalar(sc.t, lam, sc.tol)).trace_norm
    w1 = trace_norm(rb.w)
    p11, p21 = trace_norm(rb.p11), trace_norm(rb.p21)
    nt, ns = op_norm(rb.r_t), op_norm(rb.r_s)
    viol = [
        shifted1 - gamma * gap1,
        gap1 - gamma * shifted1,
        w1 - (1 + nt ** 2) * (ns * p11 + p21),
        p11 - (ns + nt) * w1,
    ]
    details = {"lambda": lam, "gamma": gamma, "gap_trace_norm": gap1,
               "shifted_gap_trace_norm": shifted1, "resolvent_diff_trace_norm": w1}
    if lam2 is not None and ar.in_resolvent_set(sc.s, lam2, sc.tol) and ar.in_resolvent_set(sc.t, lam2, sc.tol):
        w2 = trace_norm(ar.shifted_inverse(sc.t, lam2, sc.tol) - ar.shifted_inverse(sc.s, lam2, sc.tol))
        details["lambda2"] = lam2
        details["resolvent_diff_trace_norm_2"] = w2
        details["ratio"] = (w1 / w2) if w2 > 0 else None
    return verdict("resolvent_criterion", max(0.0, *viol), eps, slack=-max(viol), **details)


# -- operator-part reduction -------------------------------------------------

def reduce_to_operator_parts(sc: PerturbationScenario, eps=None):
    """Projection gap of ``(S, T)`` versus that of their operator parts.

    Needs ``S(0) = T(0)`` and ``D(S) ∪ D(T) ⊂ T(0)^⊥``.  Checks the pointwise
    identity ``(P_T - P_S)(x, y) = (P_{T_s} - P_{S_s})(x₁, y₁)`` on all of X²,
    the intersection descriptions of the parts, and equality of singular
    values with the gap computed inside ``(T(0)^⊥)²``.
    """
    eps = sc.tol.eps_eq if eps is None else eps
    sc.require("same_mul_part", "domains_in_t_mul_perp")
    tol = sc.tol
    ps, pt = sc.parts["s"], sc.parts["t"]
    m = pt.mul_space
    mperp = sp.complement(m)
    box = sp.direct_sum_embed(mperp, mperp)
    res = {
        "t_op_is_intersection": sp.distance(sp.intersect(sc.t.graph, box, tol), pt.op_part.graph),
        "s_op_is_intersection": sp.distance(sp.intersect(sc.s.graph, box, tol), ps.op_part.graph),
        "same_mul_parts": sp.distance(pt.mul_part.graph, ps.mul_part.graph),
    }
    pi = sp.projection_matrix(mperp)
    z = np.zeros_like(pi)
    split = np.block([[pi, z], [z, pi]])
    full_gap = sc.t.projector - sc.s.projector
    op_gap = pt.op_part.projector - ps.op_part.projector
    res["pointwise"] = float(np.linalg.norm(full_gap - op_gap @ split, 2))
    n = full_gap.shape[0]
    sv_full = singular_values(full_gap).padded(n)
    if mperp.dim:
        ts = rel.restrict_to(pt.op_part, mperp, mperp, tol)
        ss = rel.restrict_to(ps.op_part, mperp, mperp, tol)
        sv_part = singular_values(ts.projector - ss.projector).padded(n)
    else:
        sv_part = np.zeros(n)
    res["singular_values"] = float(np.max(np.abs(sv_full - sv_part)))
    res["trace_norms"] = abs(float(sv_full.sum() - sv_part.sum()))
    return verdict("operator_part_reduction", max(res.values()), eps,
                   nonzero_count=int(np.sum(sv_full > tol.eps_eq)), **res)


# -- additive perturbations T = S + A ---------------------------------------

def _compress(p: np.ndarray, m: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return p @ m @ basis


def additive_build(sc: PerturbationScenario, eps=None):
    """Operator parts of ``T = S + A`` in terms of those of S and A.

    Needs ``T = S + A`` with ``D(S) = D(T) = D ⊂ D(A)``.  Checks domain and
    range inclusions of the parts, ``T_s = P_{T(0)^⊥}(S_s + A_s)`` on D, and,
    when ``A(0) ⊂ S(0)``, ``S(0) = T(0)`` and ``T_s = S_s + P_{S(0)^⊥} A_s``.
    For self-adjoint S with T and A Hermitian, ``A(0) ⊂ S(0) = T(0)`` is
    required to come out true; the same holds for the Hermitian symmetry of
    the compressed parts when S and A are Hermitian.
    """
    eps = sc.tol.eps_eq if eps is None else eps
    if sc.a is None:
        raise HypothesisViolated("scenario has no perturbation term", ["a_present"])
    sc.require("additive")
    tol, f = sc.tol, sc.flags
    ps, pt, pa = sc.parts["s"], sc.parts["t"], sc.parts["a"]
    d = rel.domain(sc.s, tol)
    dbasis = d.basis
    ts, ss, as_ = pt.op_part_matrix.matrix, ps.op_part_matrix.matrix, pa.op_part_matrix.matrix
    p_t_perp = sp.projection_matrix(sp.complement(pt.mul_space))
    p_s_perp = sp.projection_matrix(sp.complement(ps.mul_space))
    res = {
        "dom_t_s": sp.distance(pt.op_part_matrix.domain, d),
        "dom_s_s": sp.distance(ps.op_part_matrix.domain, d),
        "dom_a_s": sp.distance(pa.op_part_matrix.domain, rel.domain(sc.a_relation, tol)),
        "range_t_s": sp.inclusion_residual(rel.range_(pt.op_part, tol), sp.complement(pt.mul_space)),
        "range_s_s": sp.inclusion_residual(rel.range_(ps.op_part, tol), sp.complement(ps.mul_space)),
        "range_a_s": sp.inclusion_residual(rel.range_(pa.op_part, tol), sp.complement(pa.mul_space)),
        "t_s_projected_sum": float(np.linalg.norm(ts @ dbasis - p_t_perp @ (ss + as_) @ dbasis, 2))
        if d.dim else 0.0,
    }
    details = {}
    if f.a_mul_in_s_mul:
        res["same_mul_part"] = sp.distance(ps.mul_space, pt.mul_space)
        res["t_s_sum_compressed"] = float(np.linalg.norm(
            ts @ dbasis - (ss @ dbasis + p_s_perp @ as_ @ dbasis), 2)) if d.dim else 0.0
    if f.s_hermitian and f.a_hermitian and d.dim:
        h = lambda m: m.conj().T  # noqa: E731
        cs = h(dbasis) @ p_t_perp @ ss @ dbasis
        ca = h(dbasis) @ p_t_perp @ as_ @ dbasis
        res["compressed_parts_hermitian"] = max(float(np.linalg.norm(cs - h(cs), 2)),
                                                float(np.linalg.norm(ca - h(ca), 2)))
    if f.s_self_adjoint and f.t_hermitian and f.a_hermitian:
        conclusion = bool(f.a_mul_in_s_mul and f.same_mul_part)
        details["a_mul_in_s_mul_equals_t_mul"] = conclusion
        res["mul_parts_nested"] = 0.0 if conclusion else 1.0
    return verdict("additive_operator_parts", max(res.values()), eps, **res, **details)


# -- resolvent identities ----------------------------------------------------

def _relation_residual(a: LinearRelation, b: LinearRelation) -> float:
    if a.dim != b.dim:
        return 1.0
    return rel.graph_distance(a, b)


def check_resolvent_factorization(sc: PerturbationScenario, lam: complex, eps=None):
    """``(T-λ)^{-1}(T-S) = (T_s-λ)^{-1}(T_s-S_s)`` and the resolvent difference formula.

    Both are relation identities (graph equality) and hold for every complex
    ``λ`` once ``S(0) = T(0)`` and ``D(S) = D(T) ⊂ S(0)^⊥``.
    """
    eps = sc.tol.eps_eq if eps is None else eps
    if not sc.square:
        raise DimensionMismatch("needs relations in X × X")
    sc.require("same_mul_part", "same_domain", "domains_in_s_mul_perp")
    tol = sc.tol
    s, t = sc.s, sc.t
    ts, ss = sc.parts["t"].op_part, sc.parts["s"].op_part
    inv_t = rel.inverse(rel.shift_scalar(t, lam, tol))
    inv_s = rel.inverse(rel.shift_scalar(s, lam, tol))
    inv_ts = rel.inverse(rel.shift_scalar(ts, lam, tol))
    lhs1 = rel.compose(inv_t, rel.subtract(t, s, tol), tol)
    rhs1 = rel.compose(inv_ts, rel.subtract(ts, ss, tol), tol)
    lhs2 = rel.subtract(inv_t, inv_s, tol)
    rhs2 = rel.scalar_mul(-1, rel.compose(inv_ts, rel.compose(rel.subtract(ts, ss, tol), inv_s, tol), tol), tol)
    r1, r2 = _relation_residual(lhs1, rhs1), _relation_residual(lhs2, rhs2)
    return verdict("resolvent_factorization", max(r1, r2), eps, **{
        "lambda": lam, "factor_residual": r1, "difference_residual": r2,
        "dims": [lhs1.dim, rhs1.dim, lhs2.dim, rhs2.dim]})


def compressed_perturbation(sc: PerturbationScenario):
    """``P_{S(0)^⊥} A_s`` restricted to ``S(0)^⊥``, in an orthonormal basis of that space.

    Returns ``(matrix, basis)``.
    """
    q = sp.complement(sc.parts["s"].mul_space).basis
    a_s = sc.parts["a"].op_part_matrix.matrix
    return q.conj().T @ a_s @ q, q


def check_additive_resolvent(sc: PerturbationScenario, lam: complex, eps=None):
    """Resolvent difference of ``T = S + A`` through the compressed perturbation.

    Verifies ``(T-λ)^{-1} - (S-λ)^{-1} = -(T_s-λ)^{-1} P_{S(0)^⊥} A_s (S-λ)^{-1}``
    as matrices on X, the trace-norm estimate
    ``‖lhs‖₁ <= ‖(T_s-λ)^{-1}‖ ‖P A_s|‖₁ ‖(S-λ)^{-1}‖`` and
    ``rank(lhs) <= rank(P A_s|)``.  If S is self-adjoint and
    ``S(0)^⊥ ⊂ D(A)``, self-adjointness of T is required as well.
    """
    eps = sc.tol.eps_eq if eps is None else eps
    if sc.a is None:
        raise HypothesisViolated("scenario has no perturbation term", ["a_present"])
    sc.require("s_hermitian", "t_hermitian", "a_hermitian", "additive",
               "a_mul_in_s_mul", "s_mul_perp_in_dom_a")
    tol = sc.tol
    for name, r in (("S", sc.s), ("T", sc.t)):
        if not ar.in_resolvent_set(r, lam, tol):
            raise NotInResolventSet(f"{lam} is in the spectrum of {name}")
    lhs = ar.shifted_inverse(sc.t, lam, tol) - ar.shifted_inverse(sc.s, lam, tol)
    comp, q = compressed_perturbation(sc)
    k = q.shape[1]
    if k == 0:
        inv_ts = np.zeros((0, 0))
    else:
        # T_s in the same coordinates of S(0)^⊥ = T(0)^⊥ as the compression
        qsub = Subspace(sc.s.dim_x, q)
        tk = rel.as_matrix_operator(rel.restrict_to(sc.parts["t"].op_part, qsub, qsub, tol), tol)
        inv_ts = np.linalg.inv(tk - lam * np.eye(k))
    r_s = ar.shifted_inverse(sc.s, lam, tol)
    a_s = sc.parts["a"].op_part_matrix.matrix
    rhs = -q @ inv_ts @ q.conj().T @ (q @ q.conj().T @ a_s) @ r_s
    resid = float(np.linalg.norm(lhs - rhs, 2))
    bound = op_norm(inv_ts) * trace_norm(comp) * op_norm(r_s)
    lhs1 = trace_norm(lhs)
    rank_lhs = _rank(lhs, tol)
    rank_comp = _rank(comp, tol)
    res = {"identity": resid, "trace_bound": max(0.0, lhs1 - bound),
           "rank_bound": 0.0 if rank_lhs <= rank_comp else 1.0}
    if sc.flags.s_self_adjoint:
        res["t_self_adjoint"] = 0.0 if sc.flags.t_self_adjoint else 1.0
    return verdict("additive_resolvent", max(res.values()), eps, slack=bound - lhs1, **res,
                   **{"lambda": lam, "rank_difference": rank_lhs, "rank_perturbation": rank_comp,
                      "difference_trace_norm": lhs1})


def _rank(m: np.ndarray, tol) -> int:
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    # absolute floor keeps roundoff-level matrices at rank zero
    return sp.numerical_rank(s, tol, scale=1.0) if s[0] < 1.0 else sp.numerical_rank(s, tol)
