"""Acceptance gate: one test per primary criterion, at the stated tolerances.

Each test prints a single ``ACCEPTANCE PASS|FAIL <name>: <detail>`` line
(visible even under output capture).
"""

import subprocess
import sys
import time

import numpy as np
import pytest

from relkit import arens as ar
from relkit import cli
from relkit import generators as gen
from relkit import perturbation as pt
from relkit import relation as rel
from relkit.schatten import check_block_sv_bounds, singular_values

EPS = 1e-8


@pytest.fixture
def gate(capsys):
    start = time.perf_counter()

    def emit(name, ok, detail):
        with capsys.disabled():
            took = time.perf_counter() - start
            print(f"\nACCEPTANCE {'PASS' if ok else 'FAIL'} {name}: {detail} [{took:.1f}s]")
        assert ok, detail

    return emit


def rngs(seed, n):
    return gen.trial_rngs(seed, n)


def test_operator_part_reconstruction(gate):
    worst = split_worst = 0.0
    multivalued_ops = hermitian_count = 0
    for k, rng in enumerate(rngs(101, 200)):
        d = int(rng.integers(2, 11))
        m = int(rng.integers(0, d))
        t = gen.hermitian_relation(d, rng, m) if k % 2 else gen.generic_relation(d, rng, m)
        dec = ar.arens(t)
        worst = max(worst, dec.reconstruction_residual(t))
        multivalued_ops += rel.mul_part_space(dec.op_part).dim > 0
        if k % 2:
            hermitian_count += 1
            split_worst = max(split_worst, *ar.hermitian_split_residuals(t, dec))
    ok = worst <= EPS and multivalued_ops == 0 and split_worst <= EPS
    gate("operator/multivalued reconstruction", ok,
         f"max residual {worst:.2e}, multivalued operator parts {multivalued_ops}, "
         f"Hermitian split residual {split_worst:.2e} over {hermitian_count} instances")


def test_adjoint_involution_and_inverse_difference(gate):
    adj_worst = inv_worst = 0.0
    bad = 0
    for rng in rngs(202, 100):
        d = int(rng.integers(2, 9))
        t = gen.generic_relation(d, rng)
        adj_worst = max(adj_worst, rel.graph_distance(rel.adjoint(rel.adjoint(t)), t))
        s, t = gen.nested_pair(d, rng)
        ti, si = rel.inverse(t), rel.inverse(s)
        lhs = rel.subtract(ti, si)
        rhs = rel.compose(ti, rel.compose(rel.subtract(s, t), si))
        if lhs.dim != rhs.dim:
            bad += 1
            continue
        inv_worst = max(inv_worst, rel.graph_distance(lhs, rhs))
    ok = adj_worst <= EPS and inv_worst <= EPS and bad == 0
    gate("adjoint involution and inverse difference", ok,
         f"T** residual {adj_worst:.2e}, inverse-difference residual {inv_worst:.2e}, "
         f"dimension mismatches {bad}")


def test_block_singular_value_bounds(gate):
    top = tail = column = 0
    worst_tail = 0.0
    for rng in rngs(303, 200):
        b = gen.random_blocks(5, rng)
        rep = check_block_sv_bounds(b, probes=50, rng=rng)
        top += rep.top_violation > 1e-10
        tail += rep.tail_violation > 1e-10
        column += rep.column_violation > 1e-10
        worst_tail = max(worst_tail, rep.tail_violation)
    ok = top == 0 and tail == 0 and column == 0
    gate("block singular-value bounds", ok,
         f"violations: top {top}/200, index-wise tail {tail}/200 (worst {worst_tail:.3f}), "
         f"column {column}/200")


def test_shift_gap_chains(gate):
    fails = 0
    worst, usage = 0.0, 0.0
    for rng in rngs(404, 200):
        s, t, a = gen.shifted_pair(int(rng.integers(2, 9)), rng)
        sc = pt.PerturbationScenario(s, t, a)
        r1, r2 = pt.check_shift_gap_bound(sc, EPS), pt.check_shift_sv_bounds(sc, EPS)
        fails += (not r1.passed) + (not r2.passed)
        worst = max(worst, r1.residual, r2.residual)
        usage = max(usage, r1.details["bound_usage"])
    gate("shift gap inequalities", fails == 0,
         f"violations {fails}, max residual {worst:.2e}, max observed ratio to γ {usage:.4f}")


def test_block_formulas(gate):
    assembly = identities = 0.0
    for rng in rngs(505, 100):
        s, t, a = gen.gamma_admissible_triple(int(rng.integers(2, 9)), rng)
        sc = pt.PerturbationScenario(s, t, a)
        rb = pt.resolvent_blocks(sc)
        assembly = max(assembly, pt.check_block_assembly(sc, rb).details["assembly_residual"])
        identities = max(identities, pt.check_w_identities(rb).residual)
    gate("block formulas", assembly <= EPS and identities <= EPS,
         f"assembled vs direct {assembly:.2e}, W/L/P identities {identities:.2e}")


def _nonzero(m):
    s = np.array(singular_values(m).values)
    return np.sort(s[s > EPS])


def test_operator_part_gap_reduction(gate):
    worst = trace_gap = 0.0
    count_mismatch = 0
    for k, rng in enumerate(rngs(606, 100)):
        d = int(rng.integers(2, 9))
        s, t = gen.common_mul_pair(d, rng, hermitian=bool(k % 2), same_domain=False)
        ps, pt_ = ar.arens(s), ar.arens(t)
        full = _nonzero(t.projector - s.projector)
        part = _nonzero(pt_.op_part.projector - ps.op_part.projector)
        if full.size != part.size:
            count_mismatch += 1
            continue
        if full.size:
            worst = max(worst, float(np.max(np.abs(full - part))))
        trace_gap = max(trace_gap, abs(full.sum() - part.sum()))
        assert pt.reduce_to_operator_parts(pt.PerturbationScenario(s, t)).passed
    ok = worst <= EPS and count_mismatch == 0 and trace_gap <= EPS
    gate("operator-part gap reduction", ok,
         f"multiset mismatch {worst:.2e}, count mismatches {count_mismatch}, trace norms {trace_gap:.2e}")


def test_additive_chain(gate):
    worst = 0.0
    nesting_failures = 0
    for rng in rngs(707, 100):
        s, a, t = gen.additive_triple(int(rng.integers(2, 9)), rng)
        sc = pt.PerturbationScenario(s, t, a)
        r = pt.additive_build(sc)
        worst = max(worst, r.details["t_s_projected_sum"], r.details["t_s_sum_compressed"])
        f = sc.flags
        if f.s_self_adjoint and not (f.a_mul_in_s_mul and f.same_mul_part):
            nesting_failures += 1
    gate("additive operator parts", worst <= EPS and nesting_failures == 0,
         f"matrix identities {worst:.2e}, A(0) ⊂ S(0) = T(0) failures {nesting_failures}")


def test_resolvent_identities(gate):
    worst = 0.0
    rank_failures = 0
    for k, rng in enumerate(rngs(808, 100)):
        d = int(rng.integers(2, 8))
        s, a, t = gen.additive_triple(d, rng, a_rank=1 if k % 2 else None)
        sc = pt.PerturbationScenario(s, t, a)
        for lam in (1j, -1j, 1 + 1j):
            f = pt.check_resolvent_factorization(sc, lam)
            r = pt.check_additive_resolvent(sc, lam)
            worst = max(worst, f.details["factor_residual"], f.details["difference_residual"],
                        r.details["identity"])
            rank_failures += r.details["rank_difference"] > r.details["rank_perturbation"]
    gate("resolvent identities", worst <= EPS and rank_failures == 0,
         f"max residual {worst:.2e}, rank bound failures {rank_failures}")


def test_empty_gamma_demo(gate, capsys):
    code = cli.main(["demo", "remark-3-1"])
    out = capsys.readouterr().out
    ok = code == 0 and "is_in_gamma_set true for 0 of 100" in out
    gate("empty admissible set demo", ok, f"exit code {code}")


def test_run_determinism(gate, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        subprocess.run([sys.executable, "-m", "relkit.cli", "run", "--seed", "42", "--trials", "50",
                        "--report", str(p)], check=False, capture_output=True)
    a, b = (p.read_bytes() for p in paths)
    gate("run determinism", a == b and len(a) > 0, f"report sizes {len(a)} and {len(b)} bytes")
