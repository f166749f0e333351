"""L-fuzzy SP-compactness: the defining inequality, its dual form, the
remote/shading/cover characterizations, the level-space route and the
preservation statements.

Every evaluator is a *violation builder*: given the fuzzy topology and ``G``
it returns a function mapping a :class:`FamilyEngine` to a boolean array that
flags the families for which the statement fails.  :func:`characterization`
runs a builder through :func:`families.sweep` and wraps the outcome in a
:class:`CompactnessReport`.

Items whose statement carries the parenthetical "(strong)" come in two ids:
the plain one and one suffixed ``s``.  Item 7 additionally has the ``7b``
reading with ``β_b`` in place of ``β_a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .covers import CoverProfile
from .crisp_compact import is_a_fuzzy_sp_compact
from .families import CompactnessReport, FamilyEngine, SweepConfig, sweep
from .fuzzy import LFuzzyTopology
from .lsets import SpaceMap, image


class GateRefused(ValueError):
    """The lattice lacks a hypothesis that the requested statement needs."""


@dataclass
class Context:
    T: LFuzzyTopology
    G: tuple[int, ...]
    proper: bool = False      # only proper subfamilies count (mutation testing)

    def __post_init__(self):
        self.space = self.T.space
        self.L = self.space.lattice
        self.profile = CoverProfile(self.space, self.G)
        self.tsp = self.T.tsp_table
        self.tsp_star = self.T.tsp_star_table


Builder = Callable[[Context], Callable[[FamilyEngine], np.ndarray]]


def _defining(ctx: Context):
    L, prof = ctx.L, ctx.profile

    def violations(eng):
        cov = prof.cover_value[eng.joins]
        lhs = L.meet_np[eng.meet_of(ctx.tsp), cov]
        return ~L.leq_np[lhs, eng.join_sub(cov, ctx.proper)]
    return violations


def _dual42(ctx: Context):
    L, prof = ctx.L, ctx.profile
    closed_gap = L.inv_np[ctx.tsp_star]

    def violations(eng):
        rem = prof.remote_value[eng.meets]
        lhs = L.join_np[eng.join_of(closed_gap), rem]
        return ~L.leq_np[eng.meet_sub(rem, ctx.proper), lhs]
    return violations


def _remote_item(with_beta: bool, strong: bool):
    def build(ctx: Context):
        L, prof = ctx.L, ctx.profile
        conclude = prof.strong_remote if strong else prof.remote
        levels = []
        for a in L.sorted_molecules():
            bs = sorted(L.beta_star(a)) if with_beta else [a]
            levels.append((a, prof.strong_remote(a), [conclude(b) for b in bs]))

        def violations(eng):
            closed = eng.meet_of(ctx.tsp_star)
            bad = np.zeros(eng.size, dtype=bool)
            for a, hyp_fam, concls in levels:
                hyp = hyp_fam[eng.meets] & ~L.leq_np[closed, L.inv[a]]
                found = np.zeros(eng.size, dtype=bool)
                for c in concls:
                    found |= eng.exists_sub(c[eng.meets], ctx.proper)
                bad |= hyp & ~found
            return bad
        return violations
    return build


def _shading_item(with_alpha: bool, strong: bool):
    def build(ctx: Context):
        L, prof = ctx.L, ctx.profile
        conclude = prof.strong_shading if strong else prof.shading
        levels = []
        for a in sorted(L.primes()):
            bs = sorted(L.alpha_star(a)) if with_alpha else [a]
            levels.append((a, prof.strong_shading(a), [conclude(b) for b in bs]))

        def violations(eng):
            opens = eng.meet_of(ctx.tsp)
            bad = np.zeros(eng.size, dtype=bool)
            for a, hyp_fam, concls in levels:
                hyp = hyp_fam[eng.joins] & ~L.leq_np[opens, a]
                found = np.zeros(eng.size, dtype=bool)
                for c in concls:
                    found |= eng.exists_sub(c[eng.joins], ctx.proper)
                bad |= hyp & ~found
            return bad
        return violations
    return build


def _q_cover_item(conclusion: str, strong: bool = False):
    """Items 6 and 7: Q_a-covers by members of degree >= a.

    ``conclusion`` is ``"q_b"`` (item 6), ``"beta_a"`` (item 7, literal reading)
    or ``"beta_b"`` (item 7 read by analogy with item 6).
    """
    def build(ctx: Context):
        L, prof = ctx.L, ctx.profile
        beta = prof.strong_beta_cover if strong else prof.beta_cover
        levels = []
        for a in L.sorted_molecules():
            members_ok = L.leq_np[a, ctx.tsp]
            for b in sorted(L.beta_star(a)):
                target = {"q_b": prof.q_cover(b), "beta_a": beta(a), "beta_b": beta(b)}[conclusion]
                levels.append((prof.q_cover(a), members_ok, target))

        def violations(eng):
            bad = np.zeros(eng.size, dtype=bool)
            for qa, members_ok, target in levels:
                hyp = qa[eng.joins] & eng.all_of(members_ok)
                bad |= hyp & ~eng.exists_sub(target[eng.joins], ctx.proper)
            return bad
        return violations
    return build


def _beta_item(over_b: bool, strong: bool):
    def build(ctx: Context):
        L, prof = ctx.L, ctx.profile
        if not L.beta_meet_condition():
            c, d = L.beta_meet_witness()
            raise GateRefused("β(c∧d) = β(c) ∩ β(d) fails at "
                              f"c={L.names[c]}, d={L.names[d]}")
        conclude = prof.strong_beta_cover if strong else prof.beta_cover
        levels = []
        for a in L.sorted_molecules():
            if over_b:
                bs = [b for b in L.sorted_molecules() if a in L.beta_star(b)]
            else:
                bs = [a]
            levels.append((a, prof.strong_beta_cover(a), [conclude(b) for b in bs]))

        def violations(eng):
            opens = eng.meet_of(ctx.tsp)
            bad = np.zeros(eng.size, dtype=bool)
            for a, hyp_fam, concls in levels:
                hyp = hyp_fam[eng.joins] & L.wb_np[a, opens]
                found = np.zeros(eng.size, dtype=bool)
                for c in concls:
                    found |= eng.exists_sub(c[eng.joins], ctx.proper)
                bad |= hyp & ~found
            return bad
        return violations
    return build


CHARACTERIZATIONS: dict[str, Builder] = {
    "SPC": _defining,
    "T4.2": _dual42,
    "T4.3.2": _remote_item(False, False),
    "T4.3.2s": _remote_item(False, True),
    "T4.3.3": _remote_item(True, False),
    "T4.3.3s": _remote_item(True, True),
    "T4.3.4": _shading_item(False, False),
    "T4.3.4s": _shading_item(False, True),
    "T4.3.5": _shading_item(True, False),
    "T4.3.5s": _shading_item(True, True),
    "T4.3.6": _q_cover_item("q_b"),
    "T4.3.7": _q_cover_item("beta_a"),
    "T4.3.7s": _q_cover_item("beta_a", strong=True),
    "T4.3.7b": _q_cover_item("beta_b"),
    "T4.3.7bs": _q_cover_item("beta_b", strong=True),
    "T4.4.2": _beta_item(False, False),
    "T4.4.2s": _beta_item(False, True),
    "T4.4.3": _beta_item(True, False),
    "T4.4.3s": _beta_item(True, True),
}

BETA_GATED = frozenset(c for c in CHARACTERIZATIONS if c.startswith("T4.4"))


def characterization(T: LFuzzyTopology, G: Sequence[int], cid: str,
                     config: SweepConfig | None = None, *, proper: bool = False) -> CompactnessReport:
    if cid not in CHARACTERIZATIONS:
        raise KeyError(f"unknown characterization {cid!r}")
    T.space.check(G)
    ctx = Context(T, tuple(G), proper)
    violations = CHARACTERIZATIONS[cid](ctx)
    res = sweep(T.space, range(T.space.n), violations, config)
    return CompactnessReport.from_sweep(res, cid, T.space)


def violation_function(T: LFuzzyTopology, G: Sequence[int], cid: str, *, proper: bool = False):
    return CHARACTERIZATIONS[cid](Context(T, tuple(G), proper))


def is_lfuzzy_sp_compact(T, G, config=None, *, proper: bool = False) -> CompactnessReport:
    return characterization(T, G, "SPC", config, proper=proper)


def is_lfuzzy_sp_compact_dual(T, G, config=None) -> CompactnessReport:
    return characterization(T, G, "T4.2", config)


def all_characterizations(T: LFuzzyTopology, G: Sequence[int],
                          config: SweepConfig | None = None) -> dict[str, CompactnessReport | str]:
    """Run every id; gated ids that are refused map to the refusal reason."""
    out: dict[str, CompactnessReport | str] = {}
    for cid in CHARACTERIZATIONS:
        try:
            out[cid] = characterization(T, G, cid, config)
        except GateRefused as exc:
            out[cid] = f"refused: {exc}"
    return out


def level_route(T: LFuzzyTopology, G: Sequence[int], config: SweepConfig | None = None,
                *, proper: bool = False) -> bool:
    """``G`` is a-fuzzy SP-compact in ``(X, T_[a])`` for every molecule ``a``."""
    return all(is_a_fuzzy_sp_compact(T.level_cut(a), G, a, config, proper=proper).verdict
               for a in T.space.lattice.sorted_molecules())


def lfuzzy_vs_level_compactness(T: LFuzzyTopology, G: Sequence[int],
                                config: SweepConfig | None = None) -> bool:
    return is_lfuzzy_sp_compact(T, G, config).verdict == level_route(T, G, config)


# ---- preservation

@dataclass
class Preservation:
    statement: str
    hypothesis: bool
    conclusion: bool

    @property
    def violated(self) -> bool:
        return self.hypothesis and not self.conclusion


def crisp_meet_preservation(tau, G, H, a, config=None, *, proper: bool = False) -> Preservation:
    """a-compact G and semi-preclosed H give an a-compact G ∧ H."""
    S = tau.space
    hyp = (is_a_fuzzy_sp_compact(tau, G, a, config).verdict
           and bool(tau.semi_preclosed_mask[S.encode(H)]))
    concl = is_a_fuzzy_sp_compact(tau, S.meet(G, H), a, config, proper=proper).verdict if hyp else True
    return Preservation("L5.4", hyp, concl)


def meet_preservation(T, G, H, config=None, *, proper: bool = False) -> Preservation:
    S, L = T.space, T.space.lattice
    hyp = (is_lfuzzy_sp_compact(T, G, config).verdict
           and int(T.tsp_star_table[S.encode(H)]) == L.top)
    concl = is_lfuzzy_sp_compact(T, S.meet(G, H), config, proper=proper).verdict if hyp else True
    return Preservation("T5.5", hyp, concl)


def crisp_join_preservation(tau, G, H, a, config=None, *, proper: bool = False) -> Preservation:
    S = tau.space
    hyp = (is_a_fuzzy_sp_compact(tau, G, a, config).verdict
           and is_a_fuzzy_sp_compact(tau, H, a, config).verdict)
    concl = is_a_fuzzy_sp_compact(tau, S.join(G, H), a, config, proper=proper).verdict if hyp else True
    return Preservation("L5.6", hyp, concl)


def join_preservation(T, G, H, config=None, *, proper: bool = False) -> Preservation:
    S = T.space
    hyp = (is_lfuzzy_sp_compact(T, G, config).verdict
           and is_lfuzzy_sp_compact(T, H, config).verdict)
    concl = is_lfuzzy_sp_compact(T, S.join(G, H), config, proper=proper).verdict if hyp else True
    return Preservation("T5.7", hyp, concl)


def crisp_image_preservation(f: SpaceMap, tau_x, tau_y, G, a, config=None, *, proper: bool = False) -> Preservation:
    from .morphisms import crisp_sp_continuity

    hyp = (crisp_sp_continuity(f, tau_x, tau_y, "irresolute")
           and is_a_fuzzy_sp_compact(tau_x, G, a, config).verdict)
    concl = is_a_fuzzy_sp_compact(tau_y, image(f, G), a, config, proper=proper).verdict if hyp else True
    return Preservation("L5.8", hyp, concl)


def image_preservation(f: SpaceMap, T, U, G, config=None, *, proper: bool = False) -> Preservation:
    from .morphisms import semi_preirresolute_holds

    hyp = semi_preirresolute_holds(f, T, U) and is_lfuzzy_sp_compact(T, G, config).verdict
    concl = is_lfuzzy_sp_compact(U, image(f, G), config, proper=proper).verdict if hyp else True
    return Preservation("T5.9", hyp, concl)


def preservation_checks(T, G, H, f: SpaceMap | None = None, U=None, config=None) -> list[Preservation]:
    """Every preservation statement that the given data supports."""
    out = [meet_preservation(T, G, H, config), join_preservation(T, G, H, config)]
    for a in T.space.lattice.sorted_molecules():
        tau = T.level_cut(a)
        out.append(crisp_meet_preservation(tau, G, H, a, config))
        out.append(crisp_join_preservation(tau, G, H, a, config))
    if f is not None and U is not None:
        out.append(image_preservation(f, T, U, G, config))
        for a in T.space.lattice.sorted_molecules():
            out.append(crisp_image_preservation(f, T.level_cut(a), U.level_cut(a), G, a, config))
    return out
