"""Cover, shading and remote-family predicates for finite families of L-subsets.

``L_⊥`` and ``L_⊤`` are read as ``L \\ {⊥}`` and ``L \\ {⊤}``.  Each predicate
only depends on the pointwise join (covers, shadings) or meet (remote
families) of the family, so the ``*_profile`` helpers tabulate it once over
every possible join/meet index for use in family sweeps.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .lsets import Space


class CoverError(ValueError):
    pass


def _need_nonzero(space: Space, a: int):
    if a == space.lattice.bottom:
        raise CoverError("level must differ from bottom")


def _need_nonunit(space: Space, a: int):
    if a == space.lattice.top:
        raise CoverError("level must differ from top")


def cover_values(space: Space, family: Iterable[Sequence[int]], G: Sequence[int]) -> list[int]:
    """``G'(x) ∨ ⋁_U A(x)`` for every point ``x``."""
    L = space.lattice
    J = space.join_all(family)
    return [L.join[L.inv[g]][j] for g, j in zip(G, J)]


def remote_values(space: Space, family: Iterable[Sequence[int]], G: Sequence[int]) -> list[int]:
    """``G(x) ∧ ⋀_P B(x)`` for every point ``x``."""
    L = space.lattice
    M = space.meet_all(family)
    return [L.meet[g][m] for g, m in zip(G, M)]


def is_Qa_cover(space: Space, U, G, a: int) -> bool:
    _need_nonzero(space, a)
    L = space.lattice
    return all(L.leq[a][v] for v in cover_values(space, U, G))


def is_beta_a_cover(space: Space, U, G, a: int) -> bool:
    _need_nonzero(space, a)
    L = space.lattice
    return all(L.wb[a][v] for v in cover_values(space, U, G))


def is_strong_beta_a_cover(space: Space, U, G, a: int) -> bool:
    _need_nonzero(space, a)
    L = space.lattice
    return L.wb[a][L.meet_all(cover_values(space, U, G))]


def is_a_shading(space: Space, U, G, a: int) -> bool:
    _need_nonunit(space, a)
    L = space.lattice
    return all(not L.leq[v][a] for v in cover_values(space, U, G))


def is_strong_a_shading(space: Space, U, G, a: int) -> bool:
    _need_nonunit(space, a)
    L = space.lattice
    return not L.leq[L.meet_all(cover_values(space, U, G))][a]


def is_a_remote(space: Space, P, G, a: int) -> bool:
    _need_nonzero(space, a)
    L = space.lattice
    return all(not L.leq[a][v] for v in remote_values(space, P, G))


def is_strong_a_remote(space: Space, P, G, a: int) -> bool:
    _need_nonzero(space, a)
    L = space.lattice
    return not L.leq[a][L.join_all(remote_values(space, P, G))]


# ---- tabulated forms, indexed by the family's join (or meet) L-subset index

class CoverProfile:
    """Per-``G`` lookup tables for all cover-style predicates."""

    def __init__(self, space: Space, G: Sequence[int]):
        L = space.lattice
        self.space = space
        self.G = tuple(G)
        g = np.array(G, dtype=np.int16)
        # pointwise cover values: [J, x]
        self.pointwise_cover = L.join_np[L.inv_np[g][None, :], space.values]
        self.pointwise_remote = L.meet_np[g[None, :], space.values]
        cov = np.full(space.n, L.top, dtype=np.int16)
        rem = np.full(space.n, L.bottom, dtype=np.int16)
        for x in range(space.k):
            cov = L.meet_np[cov, self.pointwise_cover[:, x]]
            rem = L.join_np[rem, self.pointwise_remote[:, x]]
        self.cover_value = cov     # ⋀_x (G'(x) ∨ J(x))
        self.remote_value = rem    # ⋁_x (G(x) ∧ M(x))

    def q_cover(self, a: int) -> np.ndarray:
        return self.space.lattice.leq_np[a, self.pointwise_cover].all(axis=1)

    def beta_cover(self, a: int) -> np.ndarray:
        return self.space.lattice.wb_np[a, self.pointwise_cover].all(axis=1)

    def strong_beta_cover(self, a: int) -> np.ndarray:
        return self.space.lattice.wb_np[a, self.cover_value]

    def shading(self, a: int) -> np.ndarray:
        return (~self.space.lattice.leq_np[self.pointwise_cover, a]).all(axis=1)

    def strong_shading(self, a: int) -> np.ndarray:
        return ~self.space.lattice.leq_np[self.cover_value, a]

    def remote(self, a: int) -> np.ndarray:
        return (~self.space.lattice.leq_np[a, self.pointwise_remote]).all(axis=1)

    def strong_remote(self, a: int) -> np.ndarray:
        return ~self.space.lattice.leq_np[a, self.remote_value]
