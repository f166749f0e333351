"""Property-based checks of the algebraic laws behind the checkers."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from spcompact.fuzzy import LFuzzyTopology, axiom_defect, saturate
from spcompact.instance import parse_instance_text, serialize_instance
from spcompact.lattice import BUILTIN_LATTICES
from spcompact.lsets import Space, SpaceMap, preimage
from spcompact.search import GeneratorConfig, generate
from spcompact.topology import generate_topology, is_topology

LATTICES = {n: BUILTIN_LATTICES[n]() for n in ("L2", "L3", "L4", "D4", "D4K", "L3xL2")}


@st.composite
def spaces(draw, max_lsets=16):
    L = LATTICES[draw(st.sampled_from(sorted(LATTICES)))]
    k = 2 if L.n ** 2 <= max_lsets and draw(st.booleans()) else 1
    return Space(L, ["x", "y"][:k])


@st.composite
def raw_tables(draw):
    S = draw(spaces())
    vals = draw(st.lists(st.integers(0, S.lattice.n - 1), min_size=S.n, max_size=S.n))
    return S, np.array(vals, dtype=np.int16)


@given(st.sampled_from(sorted(LATTICES)), st.data())
def test_demorgan_laws(name, data):
    L = LATTICES[name]
    a, b = data.draw(st.integers(0, L.n - 1)), data.draw(st.integers(0, L.n - 1))
    assert L.inv[L.join[a][b]] == L.meet[L.inv[a]][L.inv[b]]
    assert L.inv[L.inv[a]] == a
    assert L.wb[a][b] == oracles.wholly_below(L, a, b)


@settings(max_examples=60, deadline=None)
@given(raw_tables())
def test_saturation_is_a_closure(st_):
    S, raw = st_
    L = S.lattice
    sat = saturate(S, raw)
    assert axiom_defect(S, sat) is None
    inner = np.ones(S.n, dtype=bool)
    inner[[S.bottom, S.top]] = False
    assert L.leq_np[raw[inner], sat[inner]].all()
    assert np.array_equal(saturate(S, sat), sat)


@settings(max_examples=60, deadline=None)
@given(raw_tables())
def test_axioms_agree_with_cut_topologies(st_):
    S, raw = st_
    L = S.lattice
    raw = raw.copy()
    raw[[S.bottom, S.top]] = L.top
    cuts = all(is_topology(S, L.leq_np[a, raw]) for a in L.sorted_molecules())
    if L.is_distributive():
        assert (axiom_defect(S, raw) is None) == cuts


@settings(max_examples=40, deadline=None)
@given(raw_tables())
def test_operator_chain(st_):
    S, raw = st_
    T = LFuzzyTopology(S, saturate(S, raw))
    L = S.lattice
    assert L.leq_np[T.table, T.tp_table].all() and L.leq_np[T.tp_table, T.tsp_table].all()
    assert np.array_equal(T.tsp_star_table, T.tsp_table[S.comp_idx])


@settings(max_examples=60, deadline=None)
@given(spaces(), st.data())
def test_closure_interior_duality(S, data):
    picks = data.draw(st.lists(st.integers(0, S.n - 1), max_size=3))
    tau = generate_topology(S, [S.decode(i) for i in picks])
    i = data.draw(st.integers(0, S.n - 1))
    A = S.decode(i)
    assert S.decode(int(tau.closure_idx[i])) == oracles.closure(S.lattice, tau.opens(), A)
    assert S.decode(int(tau.interior_idx[i])) == oracles.interior(S.lattice, tau.opens(), A)


@settings(max_examples=60, deadline=None)
@given(spaces(), spaces(), st.data())
def test_preimage_laws(X, Y0, data):
    Y = Space(X.lattice, list(Y0.points))
    f = SpaceMap(X, Y, tuple(data.draw(st.integers(0, Y.k - 1)) for _ in range(X.k)))
    B, C = (Y.decode(data.draw(st.integers(0, Y.n - 1))) for _ in range(2))
    assert preimage(f, Y.complement(B)) == X.complement(preimage(f, B))
    assert preimage(f, Y.join(B, C)) == X.join(preimage(f, B), preimage(f, C))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.booleans())
def test_generated_documents_round_trip(seed, raw):
    doc = generate(np.random.default_rng(seed), GeneratorConfig(), raw_tables=raw)
    text = serialize_instance(doc)
    back = parse_instance_text(text, strict=False)
    assert back == doc and serialize_instance(back) == text
