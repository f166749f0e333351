import itertools

import numpy as np
import pytest

import oracles
from spcompact.fuzzy import (AxiomError, LFuzzyTopology, axiom_defect, level_cut,
                             p_level_mismatch, preopen_degree, random_fuzzy_topology,
                             saturate, semi_preclosed_degree, semi_preopen_degree,
                             sp_level_equivalence, sp_level_mismatch, validate_axioms)
from spcompact.lattice import boolean_square, chain, kleene_square
from spcompact.lsets import Space
from spcompact.topology import enumerate_topologies


def as_dict(T):
    S = T.space
    return {S.decode(i): int(v) for i, v in enumerate(T.table)}


def l3_single_point():
    L = chain(3)
    S = Space(L, ["x"])
    m = L.element("m")
    table = {(0,): L.top, (m,): m, (L.top,): L.top}
    return validate_axioms(S, table)


# ---- axioms

def test_indicator_and_constant_valid(tau0):
    T = LFuzzyTopology.indicator(tau0)
    assert set(T.table.tolist()) == {0, 1}
    LFuzzyTopology.constant_top(tau0.space)


def test_o1_violation(L3):
    S = Space(L3, ["x"])
    m = L3.element("m")
    with pytest.raises(AxiomError) as exc:
        LFuzzyTopology(S, [L3.top, L3.bottom, m])
    assert exc.value.axiom == "O1"


def test_o2_violation_witness():
    L = chain(3)
    S = Space(L, ["x", "y"])
    t = np.zeros(S.n, dtype=int)
    for A in [(0, 0), (2, 2), (2, 1), (1, 2)]:
        t[S.encode(A)] = L.top
    defect = axiom_defect(S, t)
    assert defect.axiom == "O2"
    a, b = defect.witness
    assert S.meet(S.decode(a), S.decode(b)) == (1, 1)


def test_o3_violation_witness():
    L = chain(3)
    S = Space(L, ["x", "y"])
    t = np.zeros(S.n, dtype=int)
    for A in [(0, 0), (2, 2), (1, 0), (0, 1)]:
        t[S.encode(A)] = L.top
    defect = axiom_defect(S, t)
    assert defect.axiom == "O3"
    assert len(defect.witness) == 2
    assert S.join_all(S.decode(i) for i in defect.witness) == (1, 1)


def test_library_axioms_match_oracle():
    rng = np.random.default_rng(11)
    for lat in (chain(2), chain(3)):
        S = Space(lat, ["x", "y"])
        hits = 0
        for _ in range(150):
            raw = rng.integers(0, lat.n, size=S.n)
            raw[[S.bottom, S.top]] = lat.top
            T = {S.decode(i): int(v) for i, v in enumerate(raw)}
            lib = axiom_defect(S, raw) is None
            assert lib == oracles.axioms_hold(lat, 2, T)
            hits += lib
        assert hits > 0


# ---- level cuts

def test_level_cut_example():
    T = l3_single_point()
    L = T.space.lattice
    m = L.element("m")
    assert set(T.level_cut(L.top).opens()) == {(0,), (L.top,)}
    assert set(level_cut(T, m).opens()) == {(0,), (m,), (L.top,)}


def test_indicator_cut_is_the_topology(tau0):
    T = LFuzzyTopology.indicator(tau0)
    assert T.level_cut(1) == tau0


def test_level_cuts_antitone():
    rng = np.random.default_rng(3)
    for lat in (chain(3), chain(4), boolean_square()):
        S = Space(lat, ["x", "y"]) if lat.n ** 2 <= 16 else Space(lat, ["x"])
        for _ in range(20):
            T = random_fuzzy_topology(S, rng)
            for a, b in itertools.product(lat.sorted_molecules(), repeat=2):
                if lat.le(a, b):
                    assert not (T.level_cut(b).mask & ~T.level_cut(a).mask).any()


def test_saturate_repairs_tables():
    rng = np.random.default_rng(5)
    S = Space(chain(3), ["x", "y"])
    for _ in range(50):
        raw = rng.integers(0, 3, size=S.n)
        fixed = saturate(S, raw)
        assert axiom_defect(S, fixed) is None
        assert (fixed >= 0).all()


# ---- operators against the literal nested-loop formulas

def _literal_check(T):
    S, L = T.space, T.space.lattice
    d = as_dict(T)
    tp = {A: oracles.tp_literal(L, S.k, d, A) for A in S.enumerate()}
    for A in S.enumerate():
        assert tp[A] == preopen_degree(T, A), S.format(A)
        assert oracles.tsp_literal(L, S.k, d, A, tp) == semi_preopen_degree(T, A), S.format(A)


@pytest.mark.parametrize("lat", [chain(2), chain(3), boolean_square(), kleene_square()],
                         ids=["L2", "L3", "D4", "D4K"])
def test_operators_match_literal_formula(lat):
    rng = np.random.default_rng(17)
    spaces = [Space(lat, ["x"]), Space(lat, ["x", "y"])]
    for S in spaces:
        for tau in enumerate_topologies(S)[:6]:
            _literal_check(LFuzzyTopology.indicator(tau))
        for _ in range(4):
            _literal_check(random_fuzzy_topology(S, rng))


def test_operator_boundary_values(tau0):
    T = LFuzzyTopology.indicator(tau0)
    S = tau0.space
    assert preopen_degree(T, S.constant(1)) == 1
    assert preopen_degree(T, S.constant(0)) == 1
    assert preopen_degree(T, S.crisp("x")) == 1
    assert preopen_degree(T, S.crisp("y")) == 0
    assert semi_preopen_degree(T, S.crisp("y")) == 0
    assert semi_preopen_degree(T, S.crisp("x")) == 1
    assert semi_preopen_degree(T, S.constant(1)) == 1
    assert semi_preclosed_degree(T, S.crisp("x")) == semi_preopen_degree(T, S.crisp("y"))


def test_tsp_dominates_tp():
    rng = np.random.default_rng(23)
    for lat in (chain(3), boolean_square()):
        S = Space(lat, ["x", "y"])
        for _ in range(20):
            T = random_fuzzy_topology(S, rng)
            assert lat.leq_np[T.tp_table, T.tsp_table].all()
            assert lat.leq_np[T.table, T.tp_table].all()


# ---- level-cut equivalences

@pytest.mark.parametrize("lat", [chain(2), chain(3)], ids=["L2", "L3"])
def test_indicator_embedding(lat):
    for k in (1, 2):
        S = Space(lat, [f"p{i}" for i in range(k)])
        for tau in enumerate_topologies(S):
            T = LFuzzyTopology.indicator(tau)
            assert set(T.tsp_table.tolist()) <= {lat.bottom, lat.top}
            assert np.array_equal(T.tsp_table == lat.top, tau.semi_preopen_mask)
            for a in lat.sorted_molecules():
                assert sp_level_equivalence(T, a)
                assert p_level_mismatch(T, a).ok


def test_constant_top_is_trivially_equivalent():
    for lat in (chain(3), boolean_square()):
        T = LFuzzyTopology.constant_top(Space(lat, ["x", "y"]))
        assert all(sp_level_equivalence(T, a) for a in lat.sorted_molecules())


def test_boolean_lattices_agree_on_samples():
    rng = np.random.default_rng(29)
    for lat in (chain(2), boolean_square()):
        S = Space(lat, ["x", "y"])
        for _ in range(30):
            T = random_fuzzy_topology(S, rng)
            for a in lat.sorted_molecules():
                assert sp_level_mismatch(T, a).ok
                assert p_level_mismatch(T, a).ok


def test_l3_single_point_level_m_agrees():
    T = l3_single_point()
    assert sp_level_equivalence(T, T.space.lattice.element("m"))


def test_l3_single_point_level_top_disagrees():
    """At level ⊤ the cut is {⊥̲, ⊤̲}; {x=m} is semi-preopen there but T_sp({x=m}) = m.

    The literal oracle reproduces the value, so this is a property of the
    formula on a non-Boolean chain, not of the vectorized evaluation.
    """
    T = l3_single_point()
    S, L = T.space, T.space.lattice
    m = L.element("m")
    assert semi_preopen_degree(T, (m,)) == m
    assert oracles.tsp_literal(L, 1, as_dict(T), (m,)) == m
    assert T.level_cut(L.top).semi_preopen_mask[S.encode((m,))]
    mis = sp_level_mismatch(T, L.top)
    assert mis.missing == [S.encode((m,))] and mis.extra == []
