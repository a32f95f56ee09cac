import numpy as np
import pytest
from hypothesis import given, strategies as st

from relkit import generators as gen
from relkit import relation as rel
from relkit import subspace as sp
from relkit.errors import DimensionMismatch, NotSingleValued
from relkit.relation import LinearRelation, OperatorOnSubspace
from relkit.subspace import Subspace

from conftest import cgauss, hermitian

seeds = st.integers(0, 2 ** 32 - 1)


def graph_of(m):
    return LinearRelation.from_matrix(m)


def test_from_operator_examples():
    g = LinearRelation.identity(2)
    assert g.graph.ambient_dim == 4 and g.dim == 2
    z = LinearRelation.zero_operator(1, 1)
    assert sp.equals(z.graph, Subspace.coordinate(2, [0]))
    # operator on span{e1} in C^2 sending e1 to e1
    t = rel.from_operator(OperatorOnSubspace(Subspace.coordinate(2, [0]), np.eye(2)))
    assert t.dim == 1
    assert sp.contains(t.graph, [1, 0, 1, 0]) and not sp.contains(t.graph, [0, 1, 0, 1])


def test_operator_on_subspace_checks_shape():
    with pytest.raises(DimensionMismatch):
        OperatorOnSubspace(Subspace.full(2), np.eye(3))
    op = OperatorOnSubspace(Subspace.coordinate(2, [0]), [[1, 5], [0, 5]])
    # action off the domain is discarded
    assert np.allclose(op.matrix, [[1, 0], [0, 0]]) and op.norm == pytest.approx(1.0)


def test_domain_range_kernel_examples(rng):
    d = 3
    pure = LinearRelation.multivalued(Subspace.full(d))
    assert rel.domain(pure).dim == 0 and rel.mul_part_space(pure).dim == d
    m = cgauss(rng, d, d)
    g = graph_of(m)
    assert rel.kernel(g).dim == 0 and rel.range_(g).dim == d
    t = LinearRelation(3, 3, sp.span(cgauss(rng, 6, 3)))
    assert rel.domain(t).dim + rel.mul_part_space(t).dim == 3


def test_rank_nullity_against_oracle(rng):
    for _ in range(20):
        dx, dy = rng.integers(1, 5, size=2)
        r = int(rng.integers(0, dx + dy + 1))
        cols = cgauss(rng, dx + dy, r)
        if r:
            # force some multivalued directions
            cols[:dx, : r // 2] = 0
        t = LinearRelation(int(dx), int(dy), sp.span(cols))
        dom_rank = np.linalg.matrix_rank(t.gx, tol=1e-9) if t.dim else 0
        assert rel.domain(t).dim == dom_rank
        assert rel.domain(t).dim + rel.mul_part_space(t).dim == t.dim
        assert rel.range_(t).dim + rel.kernel(t).dim == t.dim


def test_inverse_examples(rng):
    m = cgauss(rng, 3, 3)
    g = graph_of(m)
    assert rel.equals(rel.inverse(rel.inverse(g)), g)
    assert rel.equals(rel.inverse(g), graph_of(np.linalg.inv(m)))
    pure = LinearRelation.multivalued(Subspace.full(3))
    assert rel.equals(rel.inverse(pure), LinearRelation.product(Subspace.full(3), Subspace.zero(3)))


def test_scalar_mul_examples(rng):
    m = cgauss(rng, 3, 3)
    g = graph_of(m)
    assert rel.equals(rel.scalar_mul(1, g), g)
    assert rel.equals(rel.scalar_mul(0, g), LinearRelation.zero_operator(3, 3))
    assert rel.equals(rel.scalar_mul(2, g), graph_of(2 * m))
    # 0·T keeps only the domain
    t = gen.generic_relation(4, rng, mul_dim=1, graph_dim=3)
    z = rel.scalar_mul(0, t)
    assert sp.equals(rel.domain(z), rel.domain(t)) and rel.mul_part_space(z).dim == 0


def test_add_examples(rng):
    m, n = cgauss(rng, 3, 3), cgauss(rng, 3, 3)
    assert rel.equals(rel.add(graph_of(m), graph_of(n)), graph_of(m + n))
    t = gen.generic_relation(3, rng, mul_dim=1, graph_dim=3)
    assert rel.equals(rel.add(t, LinearRelation.zero_operator(3, 3)), t)
    with pytest.raises(DimensionMismatch):
        rel.add(graph_of(m), LinearRelation.identity(2))


def test_add_domain_and_mul_part(rng):
    for _ in range(10):
        s, t = gen.generic_relation(4, rng), gen.generic_relation(4, rng)
        st_ = rel.add(s, t)
        assert sp.equals(rel.domain(st_), sp.intersect(rel.domain(s), rel.domain(t)))
        assert sp.equals(rel.mul_part_space(st_), sp.sum_(rel.mul_part_space(s), rel.mul_part_space(t)))


def test_sum_decomposition_both_directions(rng):
    seen = set()
    for _ in range(40):
        s, t = gen.sum_decomposition_pair(4, rng)
        cond = (sp.is_subspace_of(rel.domain(s), rel.domain(t))
                and sp.is_subspace_of(rel.mul_part_space(t), rel.mul_part_space(s)))
        holds = rel.equals(rel.add(rel.subtract(s, t), t), s)
        assert cond == holds
        seen.add(cond)
    assert seen == {True, False}


def test_compose_examples(rng):
    m, n = cgauss(rng, 3, 2), cgauss(rng, 2, 4)
    # graph(M) ∘ graph(N) is the graph of M N
    assert rel.equals(rel.compose(graph_of(m), graph_of(n)), graph_of(m @ n))
    t = gen.generic_relation(3, rng)
    assert rel.equals(rel.compose(LinearRelation.identity(3), t), t)
    # T^{-1} T contains the identity on D(T)
    t = gen.generic_relation(3, rng, mul_dim=0, graph_dim=2)
    dom = rel.domain(t)
    ident = rel.from_operator(OperatorOnSubspace(dom, np.eye(3)))
    assert rel.includes(rel.compose(rel.inverse(t), t), ident)
    with pytest.raises(DimensionMismatch):
        rel.compose(graph_of(m), graph_of(m))


def test_compose_of_operators_is_operator(rng):
    s = rel.from_operator(OperatorOnSubspace(sp.span(cgauss(rng, 3, 2)), cgauss(rng, 3, 3)))
    t = rel.from_operator(OperatorOnSubspace(sp.span(cgauss(rng, 3, 2)), cgauss(rng, 3, 3)))
    assert rel.is_operator(rel.compose(s, t))


def test_adjoint_examples(rng):
    m = cgauss(rng, 3, 2)
    assert rel.equals(rel.adjoint(graph_of(m)), graph_of(m.conj().T))
    pure = LinearRelation.multivalued(Subspace.full(3))
    assert rel.equals(rel.adjoint(pure), pure)


def test_adjoint_matches_pairing_oracle(rng):
    for _ in range(10):
        t = gen.generic_relation(4, rng)
        a = rel.adjoint(t)
        # <g, x> = <f, y> for every (x, y) in T and (f, g) in T*
        for c in a.graph.basis.T:
            f, g = c[:4], c[4:]
            pair = t.gx.conj().T @ g - t.gy.conj().T @ f
            assert np.linalg.norm(pair) < 1e-10
        assert a.dim == 8 - t.dim


def test_hermitian_predicates(rng):
    k = hermitian(rng, 3)
    assert rel.is_hermitian(graph_of(k)) and rel.is_self_adjoint(graph_of(k))
    nil = np.array([[0, 1.0], [0, 0]])
    assert not rel.is_hermitian(graph_of(nil)) and not rel.is_self_adjoint(graph_of(nil))
    t = gen.self_adjoint_relation(4, rng, mul_dim=2)
    assert rel.is_self_adjoint(t)
    h = gen.hermitian_relation(4, rng, mul_dim=1, dom_dim=1)
    assert rel.is_hermitian(h) and not rel.is_self_adjoint(h)
    with pytest.raises(DimensionMismatch):
        rel.is_hermitian(graph_of(cgauss(rng, 2, 3)))


def test_to_operator(rng):
    m = cgauss(rng, 3, 3)
    op = rel.to_operator(graph_of(m))
    assert np.allclose(op.matrix, m)
    with pytest.raises(NotSingleValued):
        rel.to_operator(LinearRelation.multivalued(Subspace.coordinate(3, [0])))
    partial = rel.from_operator(OperatorOnSubspace(Subspace.coordinate(3, [0]), m))
    with pytest.raises(NotSingleValued):
        rel.as_matrix_operator(partial)


def test_shift_by_operator(rng):
    m = cgauss(rng, 3, 3)
    g = graph_of(m)
    lam = 0.5 - 2j
    a = OperatorOnSubspace.everywhere(lam * np.eye(3))
    assert rel.equals(rel.minus_operator(g, a), graph_of(m - lam * np.eye(3)))
    assert rel.equals(rel.shift_scalar(g, lam), graph_of(m - lam * np.eye(3)))
    assert rel.equals(rel.minus_operator(g, OperatorOnSubspace.everywhere(np.zeros((3, 3)))), g)
    t = gen.generic_relation(3, rng)
    a = OperatorOnSubspace.everywhere(cgauss(rng, 3, 3))
    res = rel.shift_by_operator(t, a)
    assert res.domain_ok
    assert rel.equals(rel.shift_by_operator(res.relation, a, +1).relation, t)
    narrow = OperatorOnSubspace(Subspace.coordinate(3, [0]), np.eye(3))
    cut = rel.shift_by_operator(LinearRelation.identity(3), narrow)
    assert not cut.domain_ok and rel.domain(cut.relation).dim == 1
    with pytest.raises(ValueError):
        rel.shift_by_operator(t, a, sign=2)


def test_restrict_to(rng):
    t = gen.self_adjoint_relation(4, rng, mul_dim=1)
    perp = sp.complement(rel.mul_part_space(t))
    r = rel.restrict_to(t, perp, perp)
    assert (r.dim_x, r.dim_y, r.dim) == (3, 3, 3)
    with pytest.raises(DimensionMismatch):
        rel.restrict_to(t, Subspace.zero(4), perp)


@given(seeds)
def test_adjoint_properties(seed):
    rng = np.random.default_rng(seed)
    t = gen.generic_relation(int(rng.integers(1, 6)), rng)
    assert rel.graph_distance(rel.adjoint(rel.adjoint(t)), t) < 1e-8
    assert rel.equals(rel.adjoint(rel.inverse(t)), rel.inverse(rel.adjoint(t)))


@given(seeds)
def test_inverse_difference_identity(seed):
    rng = np.random.default_rng(seed)
    s, t = gen.nested_pair(int(rng.integers(1, 6)), rng)
    ti, si = rel.inverse(t), rel.inverse(s)
    lhs = rel.subtract(ti, si)
    rhs = rel.compose(ti, rel.compose(rel.subtract(s, t), si))
    assert rel.equals(lhs, rhs)


@given(seeds)
def test_add_commutative_associative(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 5))
    a, b, c = (gen.generic_relation(d, rng) for _ in range(3))
    assert rel.equals(rel.add(a, b), rel.add(b, a))
    assert rel.equals(rel.add(rel.add(a, b), c), rel.add(a, rel.add(b, c)))


@given(seeds)
def test_self_adjoint_is_hermitian(seed):
    rng = np.random.default_rng(seed)
    t = gen.self_adjoint_relation(int(rng.integers(1, 6)), rng)
    assert rel.is_self_adjoint(t) and rel.is_hermitian(t)
