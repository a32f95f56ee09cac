import numpy as np
import pytest
from hypothesis import given, strategies as st

from relkit import generators as gen
from relkit import relation as rel
from relkit import subspace as sp
from relkit.errors import InvalidInput
from relkit.generators import GeneratorConfig

seeds = st.integers(0, 2 ** 32 - 1)


def test_random_subspace_edge_cases(rng):
    assert gen.random_subspace(4, 0, rng).dim == 0
    assert sp.equals(gen.random_subspace(4, 4, rng), sp.Subspace.full(4))
    with pytest.raises(InvalidInput):
        gen.random_subspace(3, 4, rng)
    with pytest.raises(InvalidInput):
        gen.random_subspace(3, -1, rng)


def test_independent_draws_meet_trivially(rng):
    hits = sum(sp.intersect(gen.random_subspace(6, 3, rng), gen.random_subspace(6, 3, rng)).dim
               for _ in range(50))
    assert hits == 0


def test_random_subspace_within(rng):
    outer = gen.random_subspace(6, 4, rng)
    inner = gen.random_subspace(6, 2, rng, within=outer)
    assert inner.dim == 2 and sp.is_subspace_of(inner, outer)


@pytest.mark.parametrize("kw", [{"dim": 0}, {"trials": 0}, {"seed": -1}, {"seed": 2 ** 64},
                                {"rel_class": "unitary"}, {"mul_dim": 7},
                                {"mul_dim": 1, "graph_dim": 0}, {"mul_dim": 0, "graph_dim": 7}])
def test_config_validation(kw):
    with pytest.raises(InvalidInput):
        GeneratorConfig(**kw)


def test_config_echo():
    d = GeneratorConfig(dim=4, seed=3).to_dict()
    assert d["class"] == "all" and d["dim"] == 4 and "rel_class" not in d


def test_generic_full_graph_is_operator(rng):
    t = gen.random_relation(GeneratorConfig(dim=5, mul_dim=0, graph_dim=5, rel_class="generic"), rng)
    assert rel.is_operator(t) and rel.domain(t).dim == 5


def test_self_adjoint_mul_dim(rng):
    t = gen.random_relation(GeneratorConfig(dim=5, mul_dim=2, rel_class="self_adjoint"), rng)
    assert rel.mul_part_space(t).dim == 2 and rel.is_self_adjoint(t)


def test_hermitian_class(rng):
    t = gen.random_relation(GeneratorConfig(dim=5, mul_dim=1, graph_dim=3, rel_class="hermitian"), rng)
    assert rel.is_hermitian(t) and t.dim == 3


def test_additive_triple_flags(rng):
    s, a, t = gen.additive_triple(5, rng)
    assert sp.equals(rel.domain(s), rel.domain(t))
    assert sp.is_subspace_of(rel.domain(s), rel.domain(a))
    assert rel.equals(rel.add(s, a), t)
    assert rel.is_hermitian(gen.random_relation(GeneratorConfig(dim=4, rel_class="additive"), rng))


def test_gamma_admissible_class(rng):
    from relkit import perturbation as pt
    s, t, a = gen.gamma_admissible_triple(4, rng, mul_dim=1)
    assert pt.is_in_gamma_set(s, t, a)
    assert rel.mul_part_space(s).dim == 1
    assert gen.random_relation(GeneratorConfig(dim=4, rel_class="gamma_admissible"), rng).dim == 4


def test_random_relation_needs_single_class(rng):
    with pytest.raises(InvalidInput):
        gen.random_relation(GeneratorConfig(), rng)


def test_trial_streams_are_reproducible_and_independent():
    a = [r.standard_normal(3) for r in gen.trial_rngs(42, 4)]
    b = [r.standard_normal(3) for r in gen.trial_rngs(42, 4)]
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert not np.array_equal(a[0], a[1])
    # a trial's stream does not depend on how many trials are requested
    assert np.array_equal(gen.trial_rngs(42, 1)[0].standard_normal(3), a[0])


@given(seeds, st.sampled_from(gen.CLASSES))
def test_class_predicates_hold(seed, cls):
    rng = np.random.default_rng(seed)
    cfg = GeneratorConfig(dim=int(rng.integers(2, 7)), rel_class=cls)
    t = gen.random_relation(cfg, rng)
    if cls in ("hermitian", "additive"):
        assert rel.is_hermitian(t)
    if cls == "self_adjoint":
        assert rel.is_self_adjoint(t)


@given(seeds)
def test_pair_generators(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(2, 7))
    s, t = gen.nested_pair(d, rng)
    assert sp.is_subspace_of(rel.mul_part_space(s), rel.mul_part_space(t))
    assert sp.is_subspace_of(rel.domain(s), rel.domain(t))
    s, t = gen.common_mul_pair(d, rng)
    m = rel.mul_part_space(t)
    assert sp.equals(rel.mul_part_space(s), m)
    assert sp.equals(rel.domain(s), rel.domain(t))
    assert sp.is_subspace_of(rel.domain(s), sp.complement(m))
    s, t, a = gen.shifted_pair(d, rng)
    assert s.dim == t.dim and a.domain.dim == d
