"""Family sweeps: quantifying over every (or a sample of) finite family of L-subsets.

A family is a bitmask over a *pool* of L-subset indices.  :class:`FamilyEngine`
tabulates, for every bitmask at once, the family's pointwise join and meet
and offers subset-sum (zeta transform) reductions, which is how "there is a
finite subfamily with ..." and "join over all finite subfamilies" are
evaluated exactly without enumerating subfamilies one by one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .fuzzy import subfamily_joins, subfamily_meet_values
from .lsets import Space

DEFAULT_FAMILY_CAP = 16
DEFAULT_SAMPLES = 10_000
DEFAULT_SAMPLE_MEMBERS = 10

VACUITY_NOTE = ("finite instance: every family is finite, so this property holds "
                "by taking the whole family; a true verdict checks evaluator "
                "consistency, not compactness")


class CapExceeded(ValueError):
    pass


class FamilyEngine:
    def __init__(self, space: Space, pool: Sequence[int]):
        self.space = space
        self.pool = [int(i) for i in pool]
        self.k = len(self.pool)
        self.size = 1 << self.k
        self.full = self.size - 1
        self.joins = subfamily_joins(space, self.pool)
        meets = np.empty(self.size, dtype=np.int64)
        meets[0] = space.top
        for j, F in enumerate(self.pool):
            lo = 1 << j
            meets[lo : 2 * lo] = space.meet_idx[meets[:lo], F]
        self.meets = meets

    def members(self, mask: int) -> list[int]:
        return [self.pool[j] for j in range(self.k) if mask >> j & 1]

    # ---- reductions over the members of each family

    def meet_of(self, per_lset: np.ndarray) -> np.ndarray:
        L = self.space.lattice
        return subfamily_meet_values(L.meet_np, L.top, np.asarray(per_lset)[self.pool].astype(np.int16))

    def join_of(self, per_lset: np.ndarray) -> np.ndarray:
        L = self.space.lattice
        return subfamily_meet_values(L.join_np, L.bottom, np.asarray(per_lset)[self.pool].astype(np.int16))

    def all_of(self, per_lset: np.ndarray) -> np.ndarray:
        out = np.ones(self.size, dtype=bool)
        vals = np.asarray(per_lset, dtype=bool)[self.pool]
        for j, v in enumerate(vals):
            lo = 1 << j
            out[lo : 2 * lo] = out[:lo] & v
        return out

    # ---- reductions over the subfamilies of each family

    def _zeta(self, arr: np.ndarray, op: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> np.ndarray:
        out = np.array(arr)
        for j in range(self.k):
            bit = 1 << j
            view = out.reshape(-1, 2, bit)
            view[:, 1, :] = op(view[:, 1, :], view[:, 0, :])
        return out

    def _proper(self, sub: np.ndarray, op, unit) -> np.ndarray:
        # fold of sub[m without j] over the members j of m
        out = np.full(self.size, unit, dtype=sub.dtype)
        masks = np.arange(self.size)
        for j in range(self.k):
            bit = 1 << j
            sel = (masks & bit) != 0
            out[sel] = op(out[sel], sub[masks[sel] ^ bit])
        return out

    def exists_sub(self, pred: np.ndarray, proper: bool = False) -> np.ndarray:
        """``out[m]`` is true iff ``pred[s]`` for some subfamily ``s`` of ``m``.

        With ``proper`` the family ``m`` itself is excluded.
        """
        out = self._zeta(np.asarray(pred, dtype=bool), np.logical_or)
        return self._proper(out, np.logical_or, False) if proper else out

    def join_sub(self, vals: np.ndarray, proper: bool = False) -> np.ndarray:
        L = self.space.lattice
        J = L.join_np
        out = self._zeta(np.asarray(vals, dtype=np.int16), lambda a, b: J[a, b])
        return self._proper(out, lambda a, b: J[a, b], L.bottom) if proper else out

    def meet_sub(self, vals: np.ndarray, proper: bool = False) -> np.ndarray:
        L = self.space.lattice
        M = L.meet_np
        out = self._zeta(np.asarray(vals, dtype=np.int16), lambda a, b: M[a, b])
        return self._proper(out, lambda a, b: M[a, b], L.top) if proper else out


@dataclass
class SweepConfig:
    family_cap: int = DEFAULT_FAMILY_CAP
    samples: int = DEFAULT_SAMPLES
    sample_members: int = DEFAULT_SAMPLE_MEMBERS
    seed: int = 0


@dataclass
class SweepResult:
    ok: bool
    mode: str                  # "exhaustive" | "sampled"
    checked: int
    seed: int | None = None
    witness: list[int] | None = None   # failing family (L-subset indices)


Violations = Callable[[FamilyEngine], np.ndarray]


def sweep(space: Space, pool: Sequence[int], violations: Violations,
          config: SweepConfig | None = None) -> SweepResult:
    """Evaluate ``violations`` on every family over ``pool`` (or a sample).

    ``violations(engine)`` returns a boolean array over the engine's masks,
    true where the quantified statement fails for that family.  Beyond the
    family cap, random families of at most ``sample_members`` members are
    drawn; each is checked against all of its own subfamilies.
    """
    config = config or SweepConfig()
    pool = list(pool)
    if len(pool) <= config.family_cap:
        eng = FamilyEngine(space, pool)
        bad = np.flatnonzero(violations(eng))
        if bad.size:
            return SweepResult(False, "exhaustive", eng.size, None, eng.members(int(bad[0])))
        return SweepResult(True, "exhaustive", eng.size)
    if config.samples <= 0:
        raise CapExceeded(f"pool of {len(pool)} exceeds the family cap {config.family_cap} "
                          "and sampling is disabled")
    rng = np.random.default_rng(config.seed)
    top = min(config.sample_members, len(pool))
    for s in range(config.samples):
        size = int(rng.integers(0, top + 1))
        chosen = sorted(rng.choice(pool, size=size, replace=False).tolist())
        eng = FamilyEngine(space, chosen)
        if violations(eng)[eng.full]:
            return SweepResult(False, "sampled", s + 1, config.seed, chosen)
    return SweepResult(True, "sampled", config.samples, config.seed)


def replay(space: Space, family: Sequence[int], violations: Violations) -> bool:
    """True iff ``family`` still violates the statement."""
    eng = FamilyEngine(space, family)
    return bool(violations(eng)[eng.full])


@dataclass
class CompactnessReport:
    verdict: bool
    mode: str
    characterization: str
    checked: int
    seed: int | None = None
    witness: list[str] | None = None
    witness_indices: list[int] | None = None
    notes: list[str] = field(default_factory=list)

    @classmethod
    def from_sweep(cls, result: SweepResult, cid: str, space: Space) -> "CompactnessReport":
        notes = [VACUITY_NOTE]
        if result.mode == "sampled":
            notes.append("sampled mode: falsification only")
        wit = None
        if result.witness is not None:
            wit = [space.format(space.decode(i)) for i in result.witness]
        return cls(result.ok, result.mode, cid, result.checked, result.seed, wit,
                   result.witness, notes)

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "mode": self.mode,
                "characterization": self.characterization, "checked": self.checked,
                "seed": self.seed, "witness": self.witness, "notes": list(self.notes)}
