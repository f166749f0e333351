"""Crisp L-topologies: interior, closure, preopen and semi-preopen L-subsets."""

from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .lsets import LSet, Space, SpaceError


class TopologyError(ValueError):
    pass


class LTopology:
    """A family of open L-subsets, stored as a boolean mask over ``L^X``.

    Construction checks that ⊥̲ and ⊤̲ are open and that the family is closed
    under pairwise meets and joins (on a finite carrier that gives arbitrary
    joins).
    """

    def __init__(self, space: Space, opens: Iterable[int] | np.ndarray):
        self.space = space
        mask = np.zeros(space.n, dtype=bool)
        if isinstance(opens, np.ndarray) and opens.dtype == bool:
            mask[:] = opens
        else:
            mask[list(opens)] = True
        self.mask = mask
        bad = _closure_defect(space, mask)
        if bad is not None:
            raise TopologyError(bad)
        self.mask.setflags(write=False)

    @classmethod
    def from_lsets(cls, space: Space, opens: Iterable[Sequence[int]]) -> "LTopology":
        return cls(space, [space.encode(A) for A in opens])

    def __eq__(self, other) -> bool:
        if not isinstance(other, LTopology):
            return NotImplemented
        return self.space.same_as(other.space) and bool((self.mask == other.mask).all())

    def __hash__(self):
        return hash(self.mask.tobytes())

    def __repr__(self) -> str:
        return f"LTopology({[self.space.format(A) for A in self.opens()]})"

    def open_indices(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.mask)]

    def opens(self) -> list[LSet]:
        return [self.space.decode(i) for i in self.open_indices()]

    def is_open(self, i: int) -> bool:
        return bool(self.mask[i])

    @cached_property
    def closed_mask(self) -> np.ndarray:
        return self.mask[self.space.comp_idx]

    @cached_property
    def interior_idx(self) -> np.ndarray:
        S = self.space
        out = np.full(S.n, S.bottom, dtype=np.int64)
        for U in np.flatnonzero(self.mask):
            below = S.leq_mat[U, :]
            out[below] = S.join_idx[out[below], U]
        return out

    @cached_property
    def closure_idx(self) -> np.ndarray:
        S = self.space
        out = np.full(S.n, S.top, dtype=np.int64)
        for C in np.flatnonzero(self.closed_mask):
            above = S.leq_mat[:, C]
            out[above] = S.meet_idx[out[above], C]
        return out

    @cached_property
    def preopen_mask(self) -> np.ndarray:
        S = self.space
        idx = np.arange(S.n)
        return S.leq_mat[idx, self.interior_idx[self.closure_idx]]

    @cached_property
    def semi_preopen_mask(self) -> np.ndarray:
        S = self.space
        out = np.zeros(S.n, dtype=bool)
        cl = self.closure_idx
        for B in np.flatnonzero(self.preopen_mask):
            out |= S.leq_mat[B, :] & S.leq_mat[:, cl[B]]
        return out

    @cached_property
    def semi_preclosed_mask(self) -> np.ndarray:
        return self.semi_preopen_mask[self.space.comp_idx]

    def semi_preopen_indices(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.semi_preopen_mask)]

    def semi_preopen_witness(self, i: int) -> int | None:
        """A preopen ``B`` with ``B <= A <= cl(B)``, or ``None``."""
        S = self.space
        for B in np.flatnonzero(self.preopen_mask):
            if S.leq_mat[B, i] and S.leq_mat[i, self.closure_idx[B]]:
                return int(B)
        return None


def _closure_defect(space: Space, mask: np.ndarray) -> str | None:
    if not mask[space.bottom] or not mask[space.top]:
        return "topology must contain the constant bottom and top L-subsets"
    idx = np.flatnonzero(mask)
    sub_j = space.join_idx[np.ix_(idx, idx)]
    sub_m = space.meet_idx[np.ix_(idx, idx)]
    for table, kind in ((sub_j, "join"), (sub_m, "meet")):
        missing = ~mask[table]
        if missing.any():
            r, c = np.argwhere(missing)[0]
            A, B = space.decode(idx[r]), space.decode(idx[c])
            return f"{kind} of {space.format(A)} and {space.format(B)} is not open"
    return None


def is_topology(space: Space, mask: np.ndarray) -> bool:
    return _closure_defect(space, mask) is None


def generate_topology(space: Space, subbase: Iterable[Sequence[int]]) -> LTopology:
    """Smallest L-topology containing ``subbase``."""
    mask = np.zeros(space.n, dtype=bool)
    mask[[space.bottom, space.top]] = True
    for A in subbase:
        mask[space.encode(A)] = True
    while True:
        idx = np.flatnonzero(mask)
        grown = mask.copy()
        grown[space.meet_idx[np.ix_(idx, idx)].ravel()] = True
        grown[space.join_idx[np.ix_(idx, idx)].ravel()] = True
        if (grown == mask).all():
            return LTopology(space, mask)
        mask = grown


def indiscrete(space: Space) -> LTopology:
    return LTopology(space, [space.bottom, space.top])


def discrete(space: Space) -> LTopology:
    return LTopology(space, range(space.n))


def enumerate_topologies(space: Space, limit: int = 1 << 16) -> list[LTopology]:
    """Every L-topology on the space, by brute force over candidate families."""
    middle = [i for i in range(space.n) if i not in (space.bottom, space.top)]
    if 1 << len(middle) > limit:
        raise SpaceError(f"{1 << len(middle)} candidate families exceed limit {limit}")
    out = []
    for r in range(len(middle) + 1):
        for chosen in combinations(middle, r):
            mask = np.zeros(space.n, dtype=bool)
            mask[[space.bottom, space.top, *chosen]] = True
            if is_topology(space, mask):
                out.append(LTopology(space, mask))
    return out


def interior(tau: LTopology, A: Sequence[int]) -> LSet:
    S = tau.space
    return S.decode(int(tau.interior_idx[S.encode(A)]))


def closure(tau: LTopology, A: Sequence[int]) -> LSet:
    S = tau.space
    return S.decode(int(tau.closure_idx[S.encode(A)]))


def is_preopen(tau: LTopology, A: Sequence[int]) -> bool:
    return bool(tau.preopen_mask[tau.space.encode(A)])


def is_semi_preopen(tau: LTopology, A: Sequence[int]) -> bool:
    return bool(tau.semi_preopen_mask[tau.space.encode(A)])


def is_semi_preclosed(tau: LTopology, A: Sequence[int]) -> bool:
    return bool(tau.semi_preclosed_mask[tau.space.encode(A)])
