"""Continuity notions for point maps between (fuzzy) L-topological spaces.

The crisp "semi-precontinuous" and "semi-preirresolute" notions used by the
level-space equivalences are reconstructed from how they are used: preimages
of opens, respectively of semi-preopen L-subsets, are semi-preopen.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fuzzy import LFuzzyTopology
from .lsets import SpaceError, SpaceMap, image, preimage
from .topology import LTopology

__all__ = ["SpaceMap", "image", "preimage", "continuity_degree_holds",
           "semi_precontinuous_holds", "semi_preirresolute_holds",
           "crisp_sp_continuity", "levelwise_equivalence", "LevelwiseResult"]


def _check(f: SpaceMap, T, U):
    if not (T.space.same_as(f.source) and U.space.same_as(f.target)):
        raise SpaceError("topologies do not live on the map's source and target")


def _dominates(f: SpaceMap, lower: np.ndarray, upper_x: np.ndarray) -> bool:
    L = f.source.lattice
    return bool(L.leq_np[lower, upper_x[f.preimage_idx]].all())


def continuity_degree_holds(f: SpaceMap, T: LFuzzyTopology, U: LFuzzyTopology) -> bool:
    _check(f, T, U)
    return _dominates(f, U.table, T.table)


def semi_precontinuous_holds(f: SpaceMap, T: LFuzzyTopology, U: LFuzzyTopology) -> bool:
    _check(f, T, U)
    return _dominates(f, U.table, T.tsp_table)


def semi_preirresolute_holds(f: SpaceMap, T: LFuzzyTopology, U: LFuzzyTopology) -> bool:
    _check(f, T, U)
    return _dominates(f, U.tsp_table, T.tsp_table)


def crisp_sp_continuity(f: SpaceMap, tau_x: LTopology, tau_y: LTopology, kind: str) -> bool:
    _check(f, tau_x, tau_y)
    if kind == "precont":
        sources = tau_y.mask
    elif kind == "irresolute":
        sources = tau_y.semi_preopen_mask
    else:
        raise ValueError(f"unknown kind {kind!r}")
    return bool(tau_x.semi_preopen_mask[f.preimage_idx[sources]].all())


@dataclass
class LevelwiseResult:
    degreewise: bool
    levelwise: bool
    failing_level: int | None = None   # first molecule where the crisp map fails

    @property
    def ok(self) -> bool:
        return self.degreewise == self.levelwise


def levelwise_equivalence(f: SpaceMap, T: LFuzzyTopology, U: LFuzzyTopology,
                          kind: str) -> LevelwiseResult:
    """Degreewise notion versus the crisp notion on every molecule level."""
    if kind == "precont":
        deg = semi_precontinuous_holds(f, T, U)
    elif kind == "irresolute":
        deg = semi_preirresolute_holds(f, T, U)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    failing = None
    for a in T.space.lattice.sorted_molecules():
        if not crisp_sp_continuity(f, T.level_cut(a), U.level_cut(a), kind):
            failing = a
            break
    return LevelwiseResult(deg, failing is None, failing)
