import itertools

import numpy as np
import pytest

import oracles
from spcompact.lattice import (InvolutionError, Lattice, LatticeError, NotALatticeError,
                               NotAPosetError, boolean_square, chain, diamond_m3,
                               is_isomorphic, kleene_square, product, validate_lattice)


def pairs(L):
    return itertools.product(range(L.n), repeat=2)


# ---- construction

def test_two_chain_is_boolean():
    L = validate_lattice(["0", "1"], [("0", "1")], [("0", "1")])
    assert L.n == 2 and L.inv == (1, 0)
    assert L.is_distributive()


def test_three_chain_middle_is_fixed():
    L = validate_lattice(["0", "m", "1"], [("0", "m"), ("m", "1")], [("0", "1"), ("m", "m")])
    m = L.element("m")
    assert L.inv[m] == m


def test_three_chain_rejects_moving_the_middle():
    with pytest.raises(InvolutionError):
        validate_lattice(["0", "m", "1"], [("0", "m"), ("m", "1")], [("0", "m"), ("1", "1")])


@pytest.mark.parametrize("inv", [[("0", "1"), ("a", "a"), ("b", "b")],
                                 [("0", "1"), ("a", "b")]])
def test_square_involutions_valid(inv):
    L = validate_lattice(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")], inv)
    assert L.n == 4


def test_cycle_is_not_a_poset():
    with pytest.raises(NotAPosetError):
        validate_lattice(["0", "a", "1"], [("0", "a"), ("a", "0"), ("a", "1")], [("0", "1"), ("a", "a")])


def test_missing_join_is_not_a_lattice():
    # two maximal elements
    with pytest.raises(NotALatticeError):
        validate_lattice(["0", "a", "b"], [("0", "a"), ("0", "b")], [("0", "0"), ("a", "b")])


def test_unknown_element_rejected():
    with pytest.raises(LatticeError):
        validate_lattice(["0", "1"], [("0", "2")], [("0", "1")])


def test_cap():
    with pytest.raises(LatticeError):
        chain(13)
    assert chain(5).n == 5


def test_chain_needs_two():
    with pytest.raises(LatticeError):
        chain(1)


def test_product_of_two_chains_is_d4():
    assert is_isomorphic(product(chain(2), chain(2)), boolean_square())
    assert not is_isomorphic(chain(4), boolean_square())


# ---- wholly below against the all-subsets oracle

def test_wholly_below_matches_oracle(fixture_lattice):
    L = fixture_lattice
    for a, b in pairs(L):
        assert L.wholly_below(a, b) == oracles.wholly_below(L, a, b), (L.names[a], L.names[b])


@pytest.mark.parametrize("make", [kleene_square, diamond_m3])
def test_wholly_below_matches_oracle_extra(make):
    L = make()
    for a, b in pairs(L):
        assert L.wholly_below(a, b) == oracles.wholly_below(L, a, b)


def test_wholly_below_examples(L3, D4):
    z, m, one = (L3.element(s) for s in "0m1")
    assert L3.wholly_below(z, m)
    assert not L3.wholly_below(one, m)
    assert L3.wholly_below(m, m)
    assert not L3.wholly_below(z, z)
    top = D4.element("1")
    assert not D4.wholly_below(top, top)


def test_bottom_never_wholly_below_bottom(fixture_lattice):
    L = fixture_lattice
    assert not L.wholly_below(L.bottom, L.bottom)
    assert L.beta(L.bottom) == frozenset()


def test_beta_examples(L3, D4):
    m = L3.element("m")
    assert L3.beta(m) == {L3.element("0"), m}
    assert L3.beta_star(m) == {m}
    assert D4.beta(D4.top) == {D4.element(s) for s in "0ab"}


def test_primes_and_molecules(L2, L3, D4):
    assert L2.molecules() == {1} and L2.primes() == {0}
    assert L3.molecules() == {L3.element("m"), L3.top}
    assert L3.primes() == {L3.bottom, L3.element("m")}
    assert D4.molecules() == {D4.element("a"), D4.element("b")}


def test_primes_match_oracle(fixture_lattice):
    L = fixture_lattice
    assert L.primes() == {a for a in range(L.n) if oracles.is_prime(L, a)}
    assert L.molecules() == {a for a in range(L.n) if a != L.bottom and oracles.is_prime(L, L.inv[a])}


# ---- invariants, exhaustively per fixture

def test_wholly_below_implies_below(fixture_lattice):
    L = fixture_lattice
    for a, b in pairs(L):
        if L.wholly_below(a, b):
            assert L.le(a, b)


def test_wholly_below_lower_set(fixture_lattice):
    L = fixture_lattice
    for a, b in pairs(L):
        if L.wholly_below(a, b):
            assert all(L.wholly_below(c, b) for c in range(L.n) if L.le(c, a))


def test_beta_monotone(fixture_lattice):
    L = fixture_lattice
    for a, b in pairs(L):
        if L.le(a, b):
            assert L.beta(a) <= L.beta(b)


def test_every_element_is_join_of_beta(fixture_lattice):
    L = fixture_lattice
    assert L.is_distributive()
    for b in range(L.n):
        assert L.join_all(L.beta(b)) == b


def test_demorgan_laws(fixture_lattice):
    L = fixture_lattice
    for a, b in pairs(L):
        assert L.inv[L.meet[a][b]] == L.join[L.inv[a]][L.inv[b]]
        assert L.inv[L.join[a][b]] == L.meet[L.inv[a]][L.inv[b]]
        assert L.inv[L.inv[a]] == a
        if L.le(a, b):
            assert L.le(L.inv[b], L.inv[a])


def test_alpha_duality(fixture_lattice):
    L = fixture_lattice
    for b in range(L.n):
        assert L.alpha(b) == {a for a in range(L.n) if L.inv[a] in L.beta(L.inv[b])}
        assert L.alpha_star(b) == L.alpha(b) & L.primes()
        assert L.beta_star(b) == L.beta(b) & L.molecules()


def test_meet_join_tables_are_bounds(fixture_lattice):
    L = fixture_lattice
    for a, b in pairs(L):
        m, j = L.meet[a][b], L.join[a][b]
        lower = [c for c in range(L.n) if L.le(c, a) and L.le(c, b)]
        upper = [c for c in range(L.n) if L.le(a, c) and L.le(b, c)]
        assert all(L.le(c, m) for c in lower) and m in lower
        assert all(L.le(j, c) for c in upper) and j in upper


def test_numpy_tables_agree(fixture_lattice):
    L = fixture_lattice
    assert np.array_equal(L.meet_np, np.array(L.meet))
    assert np.array_equal(L.join_np, np.array(L.join))
    assert np.array_equal(L.wb_np, np.array([[L.wholly_below(a, b) for b in range(L.n)] for a in range(L.n)]))


# ---- distributivity and the beta-meet condition

def test_diamond_is_not_distributive(M3):
    assert not M3.is_distributive()
    assert M3.molecules() == frozenset()


def test_beta_meet_condition_on_chains():
    for n in (2, 3, 4, 5):
        assert chain(n).beta_meet_condition()


def test_beta_meet_condition_on_d4_fails_under_intersection(D4):
    # a ∧ b = 0 has empty β, while 0 ≪ a and 0 ≪ b
    a, b = D4.element("a"), D4.element("b")
    assert D4.beta(D4.meet[a][b]) == frozenset()
    assert D4.beta(a) & D4.beta(b) == {D4.bottom}
    assert not D4.beta_meet_condition()
    assert D4.beta_meet_witness() is not None


def test_kleene_square_is_demorgan_not_boolean(D4K):
    assert D4K.is_distributive()
    a = D4K.element("a")
    assert D4K.inv[a] == a
    assert D4K.meet[a][D4K.inv[a]] != D4K.bottom


def test_lattice_equality_and_hash():
    assert chain(3) == chain(3)
    assert hash(chain(3)) == hash(chain(3))
    assert chain(3) != chain(4)
    assert isinstance(chain(3), Lattice)


def test_hasse_edges_chain():
    L = chain(4)
    assert L.covers() == [(0, 1), (1, 2), (2, 3)]
