"""Degree-valued (L-fuzzy) topologies and the preopen / semi-preopen operators.

A degree table assigns an element of ``L`` to every L-subset, indexed in the
space's enumeration order.  Fuzzy points ``x_λ`` range over the carrier times
the space's height set (molecules by default); ``x_λ ≪ A`` means ``λ ≪ A(x)``
and ``x_λ ≤ D`` means ``λ ≤ D(x)``.  Empty meets are ⊤ and empty joins ⊥.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .lsets import LSet, Space
from .topology import LTopology, TopologyError

DEFAULT_O3_CAP = 16


class AxiomError(ValueError):
    def __init__(self, axiom: str, message: str, witness: tuple = ()):
        super().__init__(f"{axiom}: {message}")
        self.axiom = axiom
        self.witness = witness


class LevelCutError(RuntimeError):
    """A level cut of a validated table is not an L-topology (internal bug)."""


@dataclass
class AxiomDefect:
    axiom: str
    witness: tuple[int, ...]          # L-subset indices
    message: str


def subfamily_joins(space: Space, pool: Sequence[int]) -> np.ndarray:
    """Index of the pointwise join of every subfamily (bitmask) of ``pool``."""
    out = np.empty(1 << len(pool), dtype=np.int64)
    out[0] = space.bottom
    for j, F in enumerate(pool):
        lo = 1 << j
        out[lo : 2 * lo] = space.join_idx[out[:lo], F]
    return out


def subfamily_meet_values(meet_np: np.ndarray, top: int, values: np.ndarray) -> np.ndarray:
    """Lattice meet of ``values[j]`` over the members ``j`` of every bitmask."""
    out = np.empty(1 << len(values), dtype=np.int16)
    out[0] = top
    for j, v in enumerate(values):
        lo = 1 << j
        out[lo : 2 * lo] = meet_np[out[:lo], v]
    return out


def axiom_defect(space: Space, table: np.ndarray, *, o3_cap: int = DEFAULT_O3_CAP) -> AxiomDefect | None:
    """First O1/O2/O3 violation of ``table``, or ``None``.

    O3 is checked over every subfamily of ``L^X`` when ``|L^X| <= o3_cap``;
    above the cap it is checked on pairs, which is equivalent for finite
    families by induction.  O3 witnesses have the fewest members possible.
    """
    L = space.lattice
    T = np.asarray(table)
    for i in (space.bottom, space.top):
        if T[i] != L.top:
            return AxiomDefect("O1", (i,), f"degree of {space.format(space.decode(i))} "
                               f"is {L.names[T[i]]}, not top")
    pair = L.meet_np[T[:, None], T[None, :]]
    bad = ~L.leq_np[pair, T[space.meet_idx]]
    if bad.any():
        a, b = map(int, np.argwhere(bad)[0])
        return AxiomDefect("O2", (a, b), "degree of the meet of "
                           f"{space.format(space.decode(a))} and {space.format(space.decode(b))} too small")
    if space.n <= o3_cap:
        pool = list(range(space.n))
        joins = subfamily_joins(space, pool)
        mins = subfamily_meet_values(L.meet_np, L.top, T[pool].astype(np.int16))
        bad = ~L.leq_np[mins, T[joins]]
        if bad.any():
            masks = np.flatnonzero(bad)
            sizes = np.array([bin(int(m)).count("1") for m in masks])
            m = int(masks[np.argmin(sizes)])
            members = tuple(pool[j] for j in range(len(pool)) if m >> j & 1)
            return AxiomDefect("O3", members, "degree of a join below the meet of degrees")
    else:
        bad = ~L.leq_np[pair, T[space.join_idx]]
        if bad.any():
            a, b = map(int, np.argwhere(bad)[0])
            return AxiomDefect("O3", (a, b), "degree of a join below the meet of degrees")
    return None


def table_from_mapping(space: Space, degrees: Mapping[LSet, int]) -> np.ndarray:
    table = np.full(space.n, -1, dtype=np.int16)
    for A, v in degrees.items():
        table[space.encode(A)] = v
    missing = np.flatnonzero(table < 0)
    if missing.size:
        raise AxiomError("table", "no degree for " + space.format(space.decode(int(missing[0]))))
    return table


class LFuzzyTopology:
    """A validated map ``T: L^X -> L``; operator tables are built on first use."""

    def __init__(self, space: Space, table: Sequence[int] | np.ndarray, *,
                 o3_cap: int = DEFAULT_O3_CAP):
        T = np.array(table, dtype=np.int16)
        if T.shape != (space.n,):
            raise AxiomError("table", f"expected {space.n} degrees, got {T.size}")
        if ((T < 0) | (T >= space.lattice.n)).any():
            raise AxiomError("table", "degree outside the lattice")
        defect = axiom_defect(space, T, o3_cap=o3_cap)
        if defect is not None:
            raise AxiomError(defect.axiom, defect.message, defect.witness)
        T.setflags(write=False)
        self.space = space
        self.table = T
        self._cuts: dict[int, LTopology] = {}

    @classmethod
    def indicator(cls, tau: LTopology) -> "LFuzzyTopology":
        L = tau.space.lattice
        return cls(tau.space, np.where(tau.mask, L.top, L.bottom))

    @classmethod
    def constant_top(cls, space: Space) -> "LFuzzyTopology":
        return cls(space, np.full(space.n, space.lattice.top))

    def __eq__(self, other):
        if not isinstance(other, LFuzzyTopology):
            return NotImplemented
        return self.space.same_as(other.space) and bool((self.table == other.table).all())

    __hash__ = None

    def degree(self, A: Sequence[int]) -> int:
        return int(self.table[self.space.encode(A)])

    # ---- level cuts

    def level_cut(self, a: int) -> LTopology:
        if a not in self._cuts:
            L = self.space.lattice
            mask = L.leq_np[a, self.table]
            try:
                self._cuts[a] = LTopology(self.space, mask)
            except TopologyError as exc:
                raise LevelCutError(f"level cut at {L.names[a]} is not an L-topology: {exc}") from exc
        return self._cuts[a]

    # ---- operators

    @cached_property
    def _closed_gap(self) -> np.ndarray:
        """``e[p, A] = ⋀ {T(D')' : D >= A, p not<= D}`` for fuzzy point ``p``."""
        S, L = self.space, self.space.lattice
        Tc = L.inv_np[self.table[S.comp_idx]]
        e = np.full((len(S.fuzzy_points), S.n), L.top, dtype=np.int16)
        for D in range(S.n):
            rows = np.flatnonzero(~S.pt_le[:, D])
            cols = np.flatnonzero(S.leq_mat[:, D])
            if rows.size and cols.size:
                block = np.ix_(rows, cols)
                e[block] = L.meet_np[e[block], Tc[D]]
        return e

    @cached_property
    def _point_gap(self) -> np.ndarray:
        """``c[B, A] = ⋀_{p ≪ B} e[p, A]``."""
        S, L = self.space, self.space.lattice
        e = self._closed_gap
        c = np.full((S.n, S.n), L.top, dtype=np.int16)
        for p in range(len(S.fuzzy_points)):
            rows = S.pt_wb[p]
            c[rows, :] = L.meet_np[c[rows, :], e[p][None, :]]
        return c

    @cached_property
    def tp_table(self) -> np.ndarray:
        S, L = self.space, self.space.lattice
        inner = L.meet_np[self.table[:, None], self._point_gap]   # [B, A]
        tp = np.full(S.n, L.top, dtype=np.int16)
        for p in range(len(S.fuzzy_points)):
            best = np.full(S.n, L.bottom, dtype=np.int16)
            for B in np.flatnonzero(S.pt_wb[p]):
                best = L.join_np[best, inner[B]]
            hit = S.pt_wb[p]
            tp[hit] = L.meet_np[tp[hit], best[hit]]
        tp.setflags(write=False)
        return tp

    @cached_property
    def tsp_table(self) -> np.ndarray:
        S, L = self.space, self.space.lattice
        vals = L.meet_np[self.tp_table[None, :], self._point_gap]  # [A, B]
        tsp = np.full(S.n, L.bottom, dtype=np.int16)
        for B in range(S.n):
            above = S.leq_mat[B, :]
            tsp[above] = L.join_np[tsp[above], vals[above, B]]
        tsp.setflags(write=False)
        return tsp

    @cached_property
    def tsp_star_table(self) -> np.ndarray:
        out = self.tsp_table[self.space.comp_idx]
        out.setflags(write=False)
        return out


def preopen_degree(T: LFuzzyTopology, A: Sequence[int]) -> int:
    return int(T.tp_table[T.space.encode(A)])


def semi_preopen_degree(T: LFuzzyTopology, A: Sequence[int]) -> int:
    return int(T.tsp_table[T.space.encode(A)])


def semi_preclosed_degree(T: LFuzzyTopology, A: Sequence[int]) -> int:
    return int(T.tsp_star_table[T.space.encode(A)])


def validate_axioms(space: Space, table, *, o3_cap: int = DEFAULT_O3_CAP) -> LFuzzyTopology:
    if isinstance(table, Mapping):
        table = table_from_mapping(space, table)
    return LFuzzyTopology(space, table, o3_cap=o3_cap)


def level_cut(T: LFuzzyTopology, a: int) -> LTopology:
    return T.level_cut(a)


@dataclass
class LevelMismatch:
    level: int
    extra: list[int]      # in the operator's cut but not the crisp family
    missing: list[int]    # in the crisp family but not the operator's cut

    @property
    def ok(self) -> bool:
        return not self.extra and not self.missing


def _compare_cut(T: LFuzzyTopology, a: int, op_table: np.ndarray, crisp: np.ndarray) -> LevelMismatch:
    L = T.space.lattice
    cut = L.leq_np[a, op_table]
    return LevelMismatch(a, [int(i) for i in np.flatnonzero(cut & ~crisp)],
                         [int(i) for i in np.flatnonzero(crisp & ~cut)])


def sp_level_mismatch(T: LFuzzyTopology, a: int) -> LevelMismatch:
    """Compare ``{A : T_sp(A) >= a}`` with the semi-preopen family of ``T_[a]``."""
    return _compare_cut(T, a, T.tsp_table, T.level_cut(a).semi_preopen_mask)


def p_level_mismatch(T: LFuzzyTopology, a: int) -> LevelMismatch:
    """Compare ``{A : T_p(A) >= a}`` with the preopen family of ``T_[a]``."""
    return _compare_cut(T, a, T.tp_table, T.level_cut(a).preopen_mask)


def sp_level_equivalence(T: LFuzzyTopology, a: int) -> bool:
    return sp_level_mismatch(T, a).ok


# ---- sampling

def saturate(space: Space, table: np.ndarray) -> np.ndarray:
    """Raise degrees until O2 and O3 hold (pairwise, to a fixpoint); pins O1."""
    L = space.lattice
    T = np.array(table, dtype=np.int16)
    T[[space.bottom, space.top]] = L.top
    meet_t, join_t = L.meet, L.join
    mi, ji = space.meet_idx.tolist(), space.join_idx.tolist()
    vals = T.tolist()
    changed = True
    while changed:
        changed = False
        for a in range(space.n):
            for b in range(a + 1, space.n):
                v = meet_t[vals[a]][vals[b]]
                for t in (mi[a][b], ji[a][b]):
                    w = join_t[vals[t]][v]
                    if w != vals[t]:
                        vals[t] = w
                        changed = True
    return np.array(vals, dtype=np.int16)


def random_raw_table(space: Space, rng: np.random.Generator, *, p_bottom: float = 0.5) -> np.ndarray:
    L = space.lattice
    others = [a for a in range(L.n) if a != L.bottom]
    draw = rng.choice(others, size=space.n)
    zero = rng.random(space.n) < p_bottom
    return np.where(zero, L.bottom, draw).astype(np.int16)


def random_fuzzy_topology(space: Space, rng: np.random.Generator, *,
                          p_bottom: float | None = None, o3_cap: int = DEFAULT_O3_CAP) -> LFuzzyTopology:
    """Sample a raw table, keep it if valid, otherwise saturate and re-validate."""
    if p_bottom is None:
        p_bottom = float(rng.uniform(0.5, 0.95))
    raw = random_raw_table(space, rng, p_bottom=p_bottom)
    raw[[space.bottom, space.top]] = space.lattice.top
    if axiom_defect(space, raw, o3_cap=o3_cap) is None:
        return LFuzzyTopology(space, raw, o3_cap=o3_cap)
    return LFuzzyTopology(space, saturate(space, raw), o3_cap=o3_cap)
