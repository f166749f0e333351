"""SP-compactness in crisp L-topological spaces, quantified over semi-preopen families."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .covers import CoverProfile
from .families import (CompactnessReport, FamilyEngine, SweepConfig, sweep)
from .topology import LTopology


class LevelError(ValueError):
    pass


def fuzzy_sp_violations(profile: CoverProfile, proper: bool = False):
    L = profile.space.lattice

    def violations(eng: FamilyEngine) -> np.ndarray:
        cov = profile.cover_value[eng.joins]
        return ~L.leq_np[cov, eng.join_sub(cov, proper)]

    return violations


def a_fuzzy_sp_violations(profile: CoverProfile, a: int, proper: bool = False):
    L = profile.space.lattice
    qa = profile.q_cover(a)
    qbs = [profile.q_cover(b) for b in sorted(L.beta(a))]

    def violations(eng: FamilyEngine) -> np.ndarray:
        hyp = qa[eng.joins]
        bad = np.zeros(eng.size, dtype=bool)
        for qb in qbs:
            bad |= hyp & ~eng.exists_sub(qb[eng.joins], proper)
        return bad

    return violations


def is_fuzzy_sp_compact(tau: LTopology, G: Sequence[int],
                        config: SweepConfig | None = None, *, proper: bool = False) -> CompactnessReport:
    S = tau.space
    S.check(G)
    res = sweep(S, tau.semi_preopen_indices(), fuzzy_sp_violations(CoverProfile(S, G), proper), config)
    return CompactnessReport.from_sweep(res, "fuzzy-sp", S)


def is_a_fuzzy_sp_compact(tau: LTopology, G: Sequence[int], a: int,
                          config: SweepConfig | None = None, *, proper: bool = False) -> CompactnessReport:
    S = tau.space
    S.check(G)
    if a not in S.lattice.molecules():
        raise LevelError(f"{S.lattice.names[a]} is not a molecule")
    res = sweep(S, tau.semi_preopen_indices(), a_fuzzy_sp_violations(CoverProfile(S, G), a, proper), config)
    return CompactnessReport.from_sweep(res, f"a-fuzzy-sp@{S.lattice.names[a]}", S)


def levelwise_agreement(tau: LTopology, G: Sequence[int], config: SweepConfig | None = None) -> bool:
    """Fuzzy SP-compact iff a-fuzzy SP-compact for every molecule a."""
    whole = is_fuzzy_sp_compact(tau, G, config).verdict
    per_level = all(is_a_fuzzy_sp_compact(tau, G, a, config).verdict
                    for a in tau.space.lattice.sorted_molecules())
    return whole == per_level
