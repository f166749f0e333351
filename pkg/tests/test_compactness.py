import numpy as np
import pytest

import oracles
from spcompact.compactness import (BETA_GATED, CHARACTERIZATIONS, GateRefused,
                                   all_characterizations, characterization,
                                   is_lfuzzy_sp_compact, is_lfuzzy_sp_compact_dual,
                                   level_route, lfuzzy_vs_level_compactness,
                                   preservation_checks, violation_function)
from spcompact.crisp_compact import (LevelError, is_a_fuzzy_sp_compact, is_fuzzy_sp_compact,
                                     levelwise_agreement)
from spcompact.families import (VACUITY_NOTE, CapExceeded, FamilyEngine, SweepConfig,
                                replay, sweep)
from spcompact.fuzzy import LFuzzyTopology, random_fuzzy_topology
from spcompact.lattice import boolean_square, chain
from spcompact.lsets import Space, SpaceMap
from spcompact.topology import generate_topology


def l3_indicator_point():
    L = chain(3)
    S = Space(L, ["x"])
    tau = generate_topology(S, [S.constant(L.element("m"))])
    return LFuzzyTopology.indicator(tau)


# ---- the engine

def test_engine_matches_subset_enumeration(L3):
    S = Space(L3, ["x", "y"])
    pool = [1, 3, 5, 7]
    eng = FamilyEngine(S, pool)
    vals = np.random.default_rng(1).integers(0, 3, size=eng.size).astype(np.int16)
    pred = vals == 1
    js, ms = eng.join_sub(vals), eng.meet_sub(vals)
    ex, exp_ = eng.exists_sub(pred), eng.exists_sub(pred, proper=True)
    for mask in range(eng.size):
        members = eng.members(mask)
        assert S.decode(int(eng.joins[mask])) == S.join_all(S.decode(i) for i in members)
        assert S.decode(int(eng.meets[mask])) == S.meet_all(S.decode(i) for i in members)
        subs = [m for m in range(eng.size) if m & mask == m]
        assert js[mask] == L3.join_all(vals[m] for m in subs)
        assert ms[mask] == L3.meet_all(vals[m] for m in subs)
        assert ex[mask] == any(pred[m] for m in subs)
        assert exp_[mask] == any(pred[m] for m in subs if m != mask)


def test_sweep_sampled_and_cap(L3):
    S = Space(L3, ["x", "y"])
    always = lambda eng: np.zeros(eng.size, dtype=bool)
    res = sweep(S, range(S.n), always, SweepConfig(family_cap=4, samples=50, seed=3))
    assert res.ok and res.mode == "sampled" and res.checked == 50 and res.seed == 3
    with pytest.raises(CapExceeded):
        sweep(S, range(S.n), always, SweepConfig(family_cap=4, samples=0))


# ---- crisp notions

def test_crisp_compact_matches_literal():
    for lat in (chain(2), chain(3)):
        S = Space(lat, ["x", "y"])
        for subbase in ([], [S.crisp("x")], [S.constant(lat.n - 2)]):
            tau = generate_topology(S, subbase)
            pool = [S.decode(i) for i in tau.semi_preopen_indices()]
            if len(pool) > 7:
                continue
            for G in S.enumerate():
                rep = is_fuzzy_sp_compact(tau, G)
                assert rep.verdict == oracles.fuzzy_sp_compact_literal(lat, pool, G)


def test_tau0_example(tau0):
    rep = is_fuzzy_sp_compact(tau0, tau0.space.crisp("x"))
    assert rep.verdict and rep.mode == "exhaustive" and rep.checked == 8
    assert VACUITY_NOTE in rep.notes


def test_a_compact_l3_point(L3):
    S = Space(L3, ["x"])
    m = L3.element("m")
    tau = generate_topology(S, [S.constant(m)])
    assert is_a_fuzzy_sp_compact(tau, S.constant(L3.top), m).verdict
    with pytest.raises(LevelError):
        is_a_fuzzy_sp_compact(tau, S.constant(L3.top), L3.bottom)


def test_levelwise_agreement(tau0):
    for G in tau0.space.enumerate():
        assert levelwise_agreement(tau0, G)


# ---- degree-valued characterizations

def test_defining_example():
    T = l3_indicator_point()
    rep = is_lfuzzy_sp_compact(T, T.space.constant(1))
    assert rep.verdict and rep.mode == "exhaustive" and rep.checked == 8
    S2 = Space(chain(3), ["x", "y"])
    rep2 = is_lfuzzy_sp_compact(LFuzzyTopology.constant_top(S2), S2.constant(1))
    assert rep2.checked == 512
    assert is_lfuzzy_sp_compact_dual(T, T.space.constant(1)).verdict


@pytest.mark.parametrize("lat", [chain(2), chain(3), boolean_square()], ids=["L2", "L3", "D4"])
def test_all_characterizations_true(lat):
    rng = np.random.default_rng(41)
    S = Space(lat, ["x", "y"])
    for _ in range(3):
        T = random_fuzzy_topology(S, rng)
        G = S.decode(int(rng.integers(S.n)))
        out = all_characterizations(T, G)
        for cid, rep in out.items():
            if isinstance(rep, str):
                assert cid in BETA_GATED and rep.startswith("refused")
                assert not lat.beta_meet_condition()
            else:
                assert rep.verdict, cid
        assert lfuzzy_vs_level_compactness(T, G)
        assert level_route(T, G)


def test_beta_gate_refuses_on_diamond(M3):
    S = Space(M3, ["x"])
    T = LFuzzyTopology.constant_top(S)
    with pytest.raises(GateRefused):
        characterization(T, S.constant(M3.top), "T4.4.2")


def test_unknown_characterization():
    T = l3_indicator_point()
    with pytest.raises(KeyError):
        characterization(T, (1,), "T9.9")


@pytest.mark.parametrize("cid", sorted(set(CHARACTERIZATIONS) - BETA_GATED))
def test_proper_mutant_is_caught_and_replays(cid):
    """Excluding the family itself from 'some finite subfamily' breaks every item."""
    L = chain(3)
    S = Space(L, ["x"])
    found = False
    rng = np.random.default_rng(7)
    tables = [LFuzzyTopology.constant_top(S)] + [random_fuzzy_topology(S, rng) for _ in range(5)]
    for T in tables:
        for G in S.enumerate():
            rep = characterization(T, G, cid, proper=True)
            if not rep.verdict:
                viol = violation_function(T, G, cid, proper=True)
                assert replay(S, rep.witness_indices, viol)
                assert not replay(S, rep.witness_indices, violation_function(T, G, cid))
                found = True
                break
        if found:
            break
    assert found, cid


# ---- preservation

def test_preservation_holds():
    rng = np.random.default_rng(43)
    L = chain(3)
    X, Y = Space(L, ["x", "y"]), Space(L, ["z"])
    for _ in range(3):
        T, U = random_fuzzy_topology(X, rng), random_fuzzy_topology(Y, rng)
        f = SpaceMap(X, Y, (0, 0))
        G, H = X.decode(int(rng.integers(X.n))), X.decode(int(rng.integers(X.n)))
        for p in preservation_checks(T, G, H, f, U):
            assert not p.violated, p.statement


def test_identity_preserves():
    T = l3_indicator_point()
    f = SpaceMap.identity(T.space)
    res = preservation_checks(T, (2,), (0,), f, T)
    assert {p.statement for p in res} >= {"T5.5", "T5.7", "T5.9", "L5.4", "L5.6", "L5.8"}
    assert not any(p.violated for p in res)
