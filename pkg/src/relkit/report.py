"""Check result records and their JSON form."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
HYPOTHESIS_VIOLATED = "hypothesis_violated"

# statement label attached to each check id (serialized as ``paper_ref``)
STATEMENTS = {
    "arens_reconstruction": "graph = operator part (+) multivalued part, operator part single-valued",
    "arens_hermitian_split": "Hermitian: T_s = T cap (T(0)^perp)^2, T_inf = T cap T(0)^2",
    "spectrum_operator_part": "Hermitian: rho(T) = rho(T_s restricted to T(0)^perp)",
    "self_adjoint_operator_part": "Hermitian T is self-adjoint iff T_s is self-adjoint in T(0)^perp",
    "adjoint_involution": "T** = T for closed relations",
    "rank_nullity": "dim T = dim D(T) + dim T(0) = dim R(T) + dim ker T",
    "sum_decomposition": "S = (S - T) + T iff D(S) in D(T) and T(0) in S(0)",
    "inverse_difference": "T^-1 - S^-1 = T^-1 (S - T) S^-1 when S(0) in T(0), D(S) in D(T)",
    "block_sv_top": "s_1(Q) <= sum_ij s_1(Q_ij)",
    "block_sv_tail": "s_{n+1}(Q) <= sum_ij s_{n+1}(Q_ij), n >= 1",
    "block_sv_column": "||Q_ij x|| <= ||P_j x||, P_j = (Q_1j* Q_1j + Q_2j* Q_2j)^(1/2)",
    "block_sv_weyl": "s_{4k-3}(Q) <= sum_ij s_k(Q_ij) and ||Q||_1 <= sum_ij ||Q_ij||_1",
    "trace_norm_ideal": "trace class is a two-sided ideal: ||S+T||_1, ||ST||_1 bounds",
    "gap_distance_formula": "||P_T - P_S|| = max(sup_{T unit} d(w, S), sup_{S unit} d(h, T))",
    "shift_gap_bound": "(1/g)||P_{T-A} - P_{S-A}|| <= ||P_T - P_S|| <= g||P_{T-A} - P_{S-A}||, g = 2(1+||A||^2)",
    "shift_sv_bounds": "(1/g)s_n(P_{T-A} - P_{S-A}) <= s_n(P_T - P_S) <= g s_n(P_{T-A} - P_{S-A})",
    "gamma_membership": "A in Gamma(S,T): (S-A)^-1, (T-A)^-1 bounded, densely defined",
    "block_assembly": "P_{(T-A)^-1} - P_{(S-A)^-1} = [[F(T)-F(S), .], [., .]] block formulas",
    "w_identities": "W = -[(S-A)^-1 P11 - P21] F(T)^-1 and the L1, L2, L3 factorizations",
    "resolvent_criterion": "trace class gap iff (T-l)^-1 - (S-l)^-1 trace class, l in rho(S) cap rho(T)",
    "operator_part_reduction": "S(0) = T(0), D in T(0)^perp: P_T - P_S = (P_{T_s} - P_{S_s}) on (T(0)^perp)^2",
    "additive_operator_parts": "T = S + A: T_s = P_{T(0)^perp}(S_s + A_s) on D; T_s = S_s + P_{S(0)^perp}A_s if A(0) in S(0)",
    "resolvent_factorization": "(T-l)^-1(T-S) = (T_s-l)^-1(T_s-S_s); (T-l)^-1 - (S-l)^-1 = -(T_s-l)^-1(T_s-S_s)(S-l)^-1",
    "additive_resolvent": "(T-l)^-1 - (S-l)^-1 = -(T_s-l)^-1 P_{S(0)^perp} A_s (S-l)^-1",
}


def _clean(value):
    """JSON-safe, reproducible form of a detail value."""
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, complex):
        return {"re": _round(value.real), "im": _round(value.imag)}
    if hasattr(value, "item"):  # numpy scalar
        return _clean(value.item())
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return _round(value)
    return str(value)


def _round(x: float):
    if math.isnan(x) or math.isinf(x):
        return str(x)
    # 10 significant digits keeps reports byte-stable across BLAS thread counts
    return float(f"{x:.10g}")


@dataclass
class CheckResult:
    """One evaluated check.

    ``residual`` is the worst violation (0 when everything holds) and
    ``slack`` the smallest margin by which an inequality held, if any.
    """

    check_id: str
    status: str
    residual: float | None = None
    slack: float | None = None
    details: dict = field(default_factory=dict)

    @property
    def paper_ref(self) -> str:
        return STATEMENTS.get(self.check_id, "")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "paper_ref": self.paper_ref,
            "status": self.status,
            "residual": _clean(self.residual),
            "slack": _clean(self.slack),
            "details": _clean(self.details),
        }


def verdict(check_id: str, residual: float, eps: float, slack=None, **details) -> CheckResult:
    status = PASS if residual <= eps else FAIL
    return CheckResult(check_id, status, float(residual), None if slack is None else float(slack),
                       details)


def skipped(check_id: str, reason: str, flags=()) -> CheckResult:
    return CheckResult(check_id, HYPOTHESIS_VIOLATED, details={"reason": reason, "flags": list(flags)})
