"""Finite complete DeMorgan algebras.

Elements are plain ``int`` indices into ``Lattice.names``.  Everything that
later modules need (order, meet/join tables, involution, the wholly-below
relation, primes and molecules) is computed once at construction and never
mutated afterwards, so a lattice can be shared freely between workers.
"""

from __future__ import annotations

from functools import reduce
from itertools import product as _cartesian
from typing import Iterable, Sequence

import numpy as np

DEFAULT_CAP = 12


class LatticeError(ValueError):
    """Raised when raw data does not describe a finite DeMorgan algebra."""


class NotAPosetError(LatticeError):
    pass


class NotALatticeError(LatticeError):
    pass


class InvolutionError(LatticeError):
    pass


def _transitive_closure(n: int, pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    leq = np.eye(n, dtype=bool)
    for a, b in pairs:
        leq[a, b] = True
    # Warshall
    for k in range(n):
        leq |= leq[:, k : k + 1] & leq[k : k + 1, :]
    return leq


class Lattice:
    """An immutable finite DeMorgan algebra.

    Build one with :func:`validate_lattice` or the builders at the bottom of
    this module; the constructor itself expects an order matrix and an
    involution vector over ``range(len(names))`` and re-checks every axiom.
    """

    def __init__(self, names: Sequence[str], leq: np.ndarray, inv: Sequence[int],
                 *, cap: int = DEFAULT_CAP):
        n = len(names)
        if n == 0:
            raise LatticeError("lattice must have at least one element")
        if n > cap:
            raise LatticeError(f"lattice has {n} elements, cap is {cap}")
        if len(set(names)) != n:
            raise LatticeError("duplicate element names")
        leq = np.array(leq, dtype=bool)
        if leq.shape != (n, n):
            raise LatticeError("order matrix has the wrong shape")
        self.names: tuple[str, ...] = tuple(names)
        self.n = n
        self._index = {name: i for i, name in enumerate(self.names)}

        if not leq.diagonal().all():
            raise NotAPosetError("order is not reflexive")
        both = leq & leq.T
        np.fill_diagonal(both, False)
        if both.any():
            a, b = map(int, np.argwhere(both)[0])
            raise NotAPosetError(f"antisymmetry fails: {names[a]} <= {names[b]} <= {names[a]}")
        if ((leq.astype(np.int32) @ leq.astype(np.int32) > 0) & ~leq).any():
            raise NotAPosetError("order is not transitive")
        self.leq_np = leq
        self.leq = tuple(tuple(bool(v) for v in row) for row in leq)

        meet = np.zeros((n, n), dtype=np.int16)
        join = np.zeros((n, n), dtype=np.int16)
        for a in range(n):
            for b in range(a, n):
                meet[a, b] = meet[b, a] = self._bound(a, b, lower=True)
                join[a, b] = join[b, a] = self._bound(a, b, lower=False)
        self.meet_np = meet
        self.join_np = join
        self.meet = tuple(tuple(int(v) for v in row) for row in meet)
        self.join = tuple(tuple(int(v) for v in row) for row in join)
        self.bottom = reduce(lambda x, y: self.meet[x][y], range(n))
        self.top = reduce(lambda x, y: self.join[x][y], range(n))

        inv = tuple(int(v) for v in inv)
        if len(inv) != n or any(not 0 <= v < n for v in inv):
            raise InvolutionError("involution must map every element into the lattice")
        for a in range(n):
            if inv[inv[a]] != a:
                raise InvolutionError(f"involution is not self-inverse at {names[a]}")
        for a, b in _cartesian(range(n), repeat=2):
            if self.leq[a][b] and not self.leq[inv[b]][inv[a]]:
                raise InvolutionError(
                    f"involution is not order-reversing: {names[a]} <= {names[b]}")
        self.inv = inv
        self.inv_np = np.array(inv, dtype=np.int16)

        self.wb_np = self._wholly_below_table()
        self.wb = tuple(tuple(bool(v) for v in row) for row in self.wb_np)
        self._beta = tuple(frozenset(a for a in range(n) if self.wb[a][b]) for b in range(n))
        self._primes = frozenset(a for a in range(n) if a != self.top and self._is_prime(a))
        self._molecules = frozenset(a for a in range(n) if a != self.bottom and inv[a] in self._primes)
        self._distributive = all(
            self.meet[a][self.join[b][c]] == self.join[self.meet[a][b]][self.meet[a][c]]
            for a, b, c in _cartesian(range(n), repeat=3))

    # ---- construction helpers

    def _bound(self, a: int, b: int, *, lower: bool) -> int:
        rel = self.leq_np if lower else self.leq_np.T
        cands = np.flatnonzero(rel[:, a] & rel[:, b])
        for c in cands:
            # greatest lower bound: every other candidate sits below c
            if rel[cands, c].all():
                return int(c)
        kind = "meet" if lower else "join"
        raise NotALatticeError(f"{self.names[a]} and {self.names[b]} have no {kind}")

    def _wholly_below_table(self) -> np.ndarray:
        # b <= sup D with no member above a is possible iff b <= sup{d : a not<= d},
        # the largest such D; so a << b iff b is not below that join.
        n = self.n
        wb = np.zeros((n, n), dtype=bool)
        for a in range(n):
            avoid = self.join_all(d for d in range(n) if not self.leq[a][d])
            for b in range(n):
                wb[a, b] = not self.leq[b][avoid]
        return wb

    def _is_prime(self, a: int) -> bool:
        for b, c in _cartesian(range(self.n), repeat=2):
            if self.leq[self.meet[b][c]][a] and not (self.leq[b][a] or self.leq[c][a]):
                return False
        return True

    # ---- basic access

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(range(self.n))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return (self.names == other.names and self.leq == other.leq
                and self.inv == other.inv)

    def __hash__(self) -> int:
        return hash((self.names, self.leq, self.inv))

    def __repr__(self) -> str:
        return f"Lattice({' '.join(self.names)})"

    def element(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise LatticeError(f"unknown element {name!r}") from None

    def name(self, a: int) -> str:
        return self.names[a]

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def meet_all(self, items: Iterable[int]) -> int:
        out = self.top
        for a in items:
            out = self.meet[out][a]
        return out

    def join_all(self, items: Iterable[int]) -> int:
        out = self.bottom
        for a in items:
            out = self.join[out][a]
        return out

    def neg(self, a: int) -> int:
        return self.inv[a]

    def covers(self) -> list[tuple[int, int]]:
        """Hasse diagram edges ``(a, b)`` with ``b`` covering ``a``."""
        out = []
        for a, b in _cartesian(range(self.n), repeat=2):
            if a != b and self.leq[a][b]:
                if not any(c not in (a, b) and self.leq[a][c] and self.leq[c][b]
                           for c in range(self.n)):
                    out.append((a, b))
        return out

    # ---- derived order-theoretic data

    def wholly_below(self, a: int, b: int) -> bool:
        return self.wb[a][b]

    def beta(self, b: int) -> frozenset[int]:
        return self._beta[b]

    def beta_star(self, b: int) -> frozenset[int]:
        return self._beta[b] & self._molecules

    def alpha(self, b: int) -> frozenset[int]:
        return frozenset(a for a in range(self.n) if self.wb[self.inv[a]][self.inv[b]])

    def alpha_star(self, b: int) -> frozenset[int]:
        return self.alpha(b) & self._primes

    def primes(self) -> frozenset[int]:
        return self._primes

    def molecules(self) -> frozenset[int]:
        return self._molecules

    def sorted_molecules(self) -> list[int]:
        return sorted(self._molecules)

    def is_distributive(self) -> bool:
        return self._distributive

    def beta_meet_condition(self) -> bool:
        """β(c∧d) = β(c) ∩ β(d) for every pair (set-intersection reading)."""
        return all(self._beta[self.meet[c][d]] == self._beta[c] & self._beta[d]
                   for c, d in _cartesian(range(self.n), repeat=2))

    def beta_meet_witness(self) -> tuple[int, int] | None:
        for c, d in _cartesian(range(self.n), repeat=2):
            if self._beta[self.meet[c][d]] != self._beta[c] & self._beta[d]:
                return c, d
        return None

    def format_set(self, items: Iterable[int]) -> str:
        return "{" + ", ".join(self.names[a] for a in sorted(items)) + "}"


def validate_lattice(elements: Sequence[str], order: Iterable[tuple[str, str]],
                     involution: Iterable[tuple[str, str]], *,
                     cap: int = DEFAULT_CAP) -> Lattice:
    """Build a lattice from element names, ``a <= b`` pairs and ``a ~ b`` pairs.

    The order is the reflexive-transitive closure of the given pairs.  An
    involution pair ``a ~ b`` sets both ``a' = b`` and ``b' = a``.
    """
    elements = list(elements)
    if not elements:
        raise LatticeError("no elements declared")
    index = {}
    for name in elements:
        if name in index:
            raise LatticeError(f"element {name!r} declared twice")
        index[name] = len(index)

    def look(name):
        if name not in index:
            raise LatticeError(f"undeclared element {name!r}")
        return index[name]

    pairs = [(look(a), look(b)) for a, b in order]
    inv: list[int | None] = [None] * len(elements)
    for a, b in involution:
        ia, ib = look(a), look(b)
        for x, y in ((ia, ib), (ib, ia)):
            if inv[x] is not None and inv[x] != y:
                raise InvolutionError(f"conflicting involution for {elements[x]!r}")
            inv[x] = y
    missing = [elements[i] for i, v in enumerate(inv) if v is None]
    if missing:
        raise InvolutionError(f"involution undefined on {', '.join(missing)}")
    leq = _transitive_closure(len(elements), pairs)
    return Lattice(elements, leq, inv, cap=cap)


# ---- builders

def chain(n: int) -> Lattice:
    """The ``n``-element chain with the order-flipping involution."""
    if n < 2:
        raise LatticeError("chain needs at least two elements")
    if n == 3:
        names = ["0", "m", "1"]
    else:
        names = ["0"] + [f"c{i}" for i in range(1, n - 1)] + ["1"]
    leq = np.triu(np.ones((n, n), dtype=bool))
    return Lattice(names, leq, [n - 1 - i for i in range(n)])


def _square(inv: Sequence[int]) -> Lattice:
    names = ["0", "a", "b", "1"]
    return validate_lattice(names, [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
                            [(names[i], names[j]) for i, j in enumerate(inv)])


def boolean_square() -> Lattice:
    """D4 = 2x2 Boolean algebra with complementation (a' = b)."""
    return _square([3, 2, 1, 0])


def kleene_square() -> Lattice:
    """D4 with both atoms fixed by the involution (a' = a, b' = b)."""
    return _square([3, 1, 2, 0])


def diamond_m3() -> Lattice:
    """M3: three pairwise incomparable atoms; not distributive."""
    names = ["0", "a", "b", "c", "1"]
    order = [("0", x) for x in "abc"] + [(x, "1") for x in "abc"]
    return validate_lattice(names, order, [("0", "1"), ("a", "a"), ("b", "c")])


def product(first: Lattice, second: Lattice) -> Lattice:
    """Componentwise product; elements are named ``x*y``."""
    pairs = list(_cartesian(range(first.n), range(second.n)))
    names = [f"{first.names[a]}*{second.names[b]}" for a, b in pairs]
    leq = np.array([[first.leq[a][c] and second.leq[b][d] for c, d in pairs]
                    for a, b in pairs], dtype=bool)
    pos = {p: i for i, p in enumerate(pairs)}
    inv = [pos[(first.inv[a], second.inv[b])] for a, b in pairs]
    return Lattice(names, leq, inv, cap=max(DEFAULT_CAP, len(pairs)))


def is_isomorphic(first: Lattice, second: Lattice) -> bool:
    """Brute-force order isomorphism that also respects the involution."""
    from itertools import permutations

    if first.n != second.n:
        return False
    for perm in permutations(range(second.n)):
        if all(first.leq[a][b] == second.leq[perm[a]][perm[b]]
               for a, b in _cartesian(range(first.n), repeat=2)) and \
                all(perm[first.inv[a]] == second.inv[perm[a]] for a in range(first.n)):
            return True
    return False


BUILTIN_LATTICES = {
    "L2": lambda: chain(2),
    "L3": lambda: chain(3),
    "L4": lambda: chain(4),
    "L5": lambda: chain(5),
    "D4": boolean_square,
    "D4K": kleene_square,
    "M3": diamond_m3,
    "L3xL2": lambda: product(chain(3), chain(2)),
}
