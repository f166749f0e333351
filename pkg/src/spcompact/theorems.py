"""Theorem registry and checker harness.

Every registered id owns a checker that walks the *units* of an instance
document (a lattice, a space, a degree table, a table paired with a named
L-subset, a map with tables on both ends, ...), evaluates the statement on
each unit and stops at the first failing one.  A failure carries a
self-contained sub-document holding just that unit, so it can be written to
disk, re-parsed and replayed.

Each checker also has a *mutant*: a deliberately wrong variant used to prove
that the search loop can find counterexamples at all.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import compactness as C
from .covers import CoverProfile
from .crisp_compact import is_a_fuzzy_sp_compact, is_fuzzy_sp_compact
from .families import CompactnessReport, FamilyEngine, SweepConfig
from .fuzzy import LFuzzyTopology, axiom_defect, p_level_mismatch, sp_level_mismatch
from .instance import InstanceDoc, SpaceSpec, parse_instance_text, serialize_instance
from .lattice import DEFAULT_CAP
from .lsets import Space, SpaceMap, image, preimage
from .morphisms import continuity_degree_holds, crisp_sp_continuity, levelwise_equivalence
from .topology import LTopology, indiscrete, is_topology


class UnknownTheorem(KeyError):
    pass


class MissingComponent(ValueError):
    """The document lacks what the statement quantifies over."""


class _Refused(Exception):
    pass


class _Failed(Exception):
    def __init__(self, detail: str, doc: InstanceDoc):
        super().__init__(detail)
        self.detail = detail
        self.doc = doc


@dataclass(frozen=True)
class HarnessConfig:
    cap_lattice: int = DEFAULT_CAP
    cap_family: int = 16
    samples: int = 10_000
    sample_members: int = 10
    seed: int = 0

    def sweep(self) -> SweepConfig:
        return SweepConfig(self.cap_family, self.samples, self.sample_members, self.seed)

    def caps(self) -> dict:
        return {"lattice": self.cap_lattice, "family": self.cap_family, "samples": self.samples}


# ---- check context

class Cx:
    def __init__(self, doc: InstanceDoc, config: HarnessConfig, *, mutant: bool, search: bool):
        self.doc = doc
        self.L = doc.lattice
        self.cfg = config
        self.sweep = config.sweep()
        self.mutant = mutant
        self.search = search
        self.checks = 0
        self.sampled = False

    def tick(self, n: int = 1):
        self.checks += n

    def note(self, rep: CompactnessReport) -> bool:
        self.sampled |= rep.mode == "sampled"
        return rep.verdict

    def fail(self, detail: str, **parts):
        raise _Failed(detail, subdoc(self.doc, **parts))

    # ---- unit enumeration

    def fuzzies(self) -> list[tuple[str, LFuzzyTopology]]:
        return [(n, s.topology) for n, s in self.doc.fuzzies.items() if s.topology is not None]

    def lsets_on(self, sname: str) -> list[str]:
        return [n for n, (s, _) in self.doc.lsets.items() if s == sname]

    def fuzzy_lsets(self) -> Iterator[tuple[str, LFuzzyTopology, str]]:
        for fname, T in self.fuzzies():
            for g in self.lsets_on(self.doc.fuzzies[fname].space_name):
                yield fname, T, g

    def crisp(self) -> Iterator[tuple[str, str, LTopology, dict]]:
        """Declared crisp topologies, then every level cut of every table."""
        for sname, spec in self.doc.spaces.items():
            if spec.topology is not None:
                yield f"space {sname}", sname, spec.topology, {"spaces": [sname]}
        for fname, T in self.fuzzies():
            sname = self.doc.fuzzies[fname].space_name
            for a in self.L.sorted_molecules():
                tau = T.level_cut(a)
                yield (f"level {self.L.names[a]} of {fname}", sname, tau,
                       {"topologies": {sname: tau}})

    def map_fuzzies(self) -> Iterator[tuple[str, SpaceMap, str, LFuzzyTopology, str, LFuzzyTopology]]:
        for mname, spec in self.doc.maps.items():
            for tn, T in self.fuzzies():
                if self.doc.fuzzies[tn].space_name != spec.source:
                    continue
                for un, U in self.fuzzies():
                    if self.doc.fuzzies[un].space_name == spec.target:
                        yield mname, spec.map, tn, T, un, U

    def need(self, units: int, what: str):
        if units == 0:
            raise MissingComponent(f"document has no {what}")


def subdoc(doc: InstanceDoc, *, spaces=(), fuzzies=(), lsets=(), maps=(),
           topologies: dict | None = None) -> InstanceDoc:
    """Copy of ``doc`` restricted to the named components.

    Spaces are pulled in as needed by the other components; only spaces named
    in ``spaces`` keep their crisp topology, and ``topologies`` overrides it.
    """
    topologies = topologies or {}
    need = set(spaces) | set(topologies)
    need |= {doc.fuzzies[f].space_name for f in fuzzies}
    need |= {doc.lsets[n][0] for n in lsets}
    for m in maps:
        need |= {doc.maps[m].source, doc.maps[m].target}
    out = InstanceDoc(doc.lattice_name, doc.lattice)
    for n, spec in doc.spaces.items():
        if n in need:
            topo = topologies.get(n, spec.topology if n in spaces else None)
            out.spaces[n] = SpaceSpec(spec.space, topo)
    for n in doc.lsets:
        if n in lsets:
            out.lsets[n] = doc.lsets[n]
    for n in doc.fuzzies:
        if n in fuzzies:
            out.fuzzies[n] = doc.fuzzies[n]
    for n in doc.maps:
        if n in maps:
            out.maps[n] = doc.maps[n]
    return out


# ---- invariant suites

def _inv_lattice(cx: Cx):
    L = cx.L
    n = L.n
    for a in range(n):
        for b in range(n):
            cx.tick()
            wb = L.wb[a][b]
            bad = None
            if cx.mutant:
                if wb and a == b:
                    bad = "wholly below implies distinct"
            elif wb and not L.leq[a][b]:
                bad = "wholly below but not below"
            elif wb and any(L.leq[c][a] and not L.wb[c][b] for c in range(n)):
                bad = "wholly below is not a lower set"
            elif L.leq[a][b] and not L.beta(a) <= L.beta(b):
                bad = "beta is not monotone"
            elif L.inv[L.meet[a][b]] != L.join[L.inv[a]][L.inv[b]]:
                bad = "De Morgan law fails"
            if bad:
                cx.fail(f"{bad} at ({L.names[a]}, {L.names[b]})")
    if L.is_distributive():
        for b in range(n):
            cx.tick()
            if L.join_all(L.beta(b)) != b:
                cx.fail(f"{L.names[b]} is not the join of beta({L.names[b]})")
    for b in range(n):
        cx.tick()
        if L.alpha(b) != {a for a in range(n) if L.inv[a] in L.beta(L.inv[b])}:
            cx.fail(f"alpha({L.names[b]}) is not the dual of beta")


def _inv_lsets(cx: Cx):
    cx.need(len(cx.doc.spaces), "space")
    for sname, spec in cx.doc.spaces.items():
        S = spec.space
        for i, A in enumerate(S.enumerate()):
            cx.tick()
            if S.encode(A) != i or S.complement(S.complement(A)) != A:
                cx.fail(f"enumeration or complement broken at {S.format(A)}", spaces=[sname])
        tau = spec.topology or indiscrete(S)
        parts = {"topologies": {sname: tau}}
        ii, cc = tau.interior_idx, tau.closure_idx
        for i in range(S.n):
            cx.tick()
            A = S.format(S.decode(i))
            if cx.mutant:
                if ii[i] != i:
                    cx.fail(f"interior of {A} differs from {A}", **parts)
                continue
            if not (S.leq_mat[ii[i], i] and S.leq_mat[i, cc[i]]):
                cx.fail(f"interior/closure do not bracket {A}", **parts)
            if ii[ii[i]] != ii[i] or cc[cc[i]] != cc[i]:
                cx.fail(f"interior or closure of {A} not idempotent", **parts)
            if cc[i] != S.comp_idx[ii[S.comp_idx[i]]]:
                cx.fail(f"closure of {A} is not the dual of interior", **parts)
            if (tau.mask[i] and not tau.preopen_mask[i]) or (tau.preopen_mask[i] and not tau.semi_preopen_mask[i]):
                cx.fail(f"open => preopen => semi-preopen fails at {A}", **parts)


POOL_SIZE = 9


def _inv_covers(cx: Cx):
    units = 0
    L = cx.L
    for sname in cx.doc.spaces:
        S = cx.doc.space(sname)
        eng = FamilyEngine(S, list(range(min(POOL_SIZE, S.n))))
        for g in cx.lsets_on(sname):
            units += 1
            prof = CoverProfile(S, cx.doc.lsets[g][1])
            for a in range(L.n):
                cx.tick(eng.size)
                bad = np.zeros(eng.size, dtype=bool)
                J, M = eng.joins, eng.meets
                if a != L.bottom:
                    q = prof.q_cover(a)[J]
                    if cx.mutant:
                        bad |= q & ~prof.q_cover(L.top)[J]
                    else:
                        bad |= prof.strong_beta_cover(a)[J] & ~prof.beta_cover(a)[J]
                        bad |= prof.beta_cover(a)[J] & ~q
                        bad |= prof.strong_remote(a)[M] & ~prof.remote(a)[M]
                if a != L.top and not cx.mutant:
                    bad |= prof.strong_shading(a)[J] & ~prof.shading(a)[J]
                if bad.any():
                    fam = [S.format(S.decode(i)) for i in eng.members(int(np.flatnonzero(bad)[0]))]
                    cx.fail(f"cover implication fails at level {L.names[a]} for family "
                            f"[{', '.join(fam)}]", lsets=[g])
    cx.need(units, "named L-subset")


def _inv_operators(cx: Cx):
    L = cx.L
    fz = cx.fuzzies()
    cx.need(len(fz), "valid degree table")
    for fname, T in fz:
        S = T.space
        cx.tick(S.n)
        tp, tsp = T.tp_table, T.tsp_table
        if cx.mutant:
            bad = ~L.leq_np[tsp, tp]
            if bad.any():
                cx.fail(f"T_sp exceeds T_p at {S.format(S.decode(int(np.flatnonzero(bad)[0])))}",
                        fuzzies=[fname])
            continue
        bad = ~(L.leq_np[T.table, tp] & L.leq_np[tp, tsp])
        if bad.any():
            cx.fail(f"T <= T_p <= T_sp fails at {S.format(S.decode(int(np.flatnonzero(bad)[0])))}",
                    fuzzies=[fname])
        if tsp[S.top] != L.top or tp[S.top] != L.top or tp[S.bottom] != L.top:
            cx.fail("operator boundary values differ from top", fuzzies=[fname])
        if set(T.table.tolist()) <= {L.bottom, L.top} and L.is_distributive():
            spo = T.level_cut(L.top).semi_preopen_mask
            if not np.array_equal(tsp == L.top, spo) or not set(tsp.tolist()) <= {L.bottom, L.top}:
                cx.fail("indicator table: T_sp is not the semi-preopen indicator", fuzzies=[fname])


def _inv_maps(cx: Cx):
    cx.need(len(cx.doc.maps), "map")
    for mname, spec in cx.doc.maps.items():
        f = spec.map
        X, Y = f.source, f.target
        for A in X.enumerate():
            for B in Y.enumerate():
                cx.tick()
                if cx.mutant:
                    for A2 in X.enumerate():
                        if image(f, X.meet(A, A2)) != Y.meet(image(f, A), image(f, A2)):
                            cx.fail(f"image does not preserve the meet of {X.format(A)} and "
                                    f"{X.format(A2)}", maps=[mname])
                    break
                if Y.leq(image(f, A), B) != X.leq(A, preimage(f, B)):
                    cx.fail(f"adjunction fails at {X.format(A)}, {Y.format(B)}", maps=[mname])
        for B in Y.enumerate():
            cx.tick()
            if preimage(f, Y.complement(B)) != X.complement(preimage(f, B)):
                cx.fail(f"preimage does not commute with complement at {Y.format(B)}", maps=[mname])
            for B2 in Y.enumerate():
                if (preimage(f, Y.join(B, B2)) != X.join(preimage(f, B), preimage(f, B2))
                        or preimage(f, Y.meet(B, B2)) != X.meet(preimage(f, B), preimage(f, B2))):
                    cx.fail(f"preimage is not a lattice map at {Y.format(B)}, {Y.format(B2)}",
                            maps=[mname])


# ---- level cuts and operators

def _cuts_are_topologies(T_table: np.ndarray, S: Space) -> tuple[bool, int | None]:
    L = S.lattice
    for a in L.sorted_molecules():
        if not is_topology(S, L.leq_np[a, T_table]):
            return False, a
    return True, None


def _t22(cx: Cx):
    cx.need(len(cx.doc.fuzzies), "degree table")
    L = cx.L
    for fname, spec in cx.doc.fuzzies.items():
        cx.tick()
        S = cx.doc.space(spec.space_name)
        if cx.mutant:
            pair = L.meet_np[spec.table[:, None], spec.table[None, :]]
            valid = bool(spec.table[S.bottom] == L.top == spec.table[S.top]
                         and L.leq_np[pair, spec.table[S.meet_idx]].all())
        else:
            valid = axiom_defect(S, spec.table, o3_cap=cx.cfg.cap_family) is None
        cuts, level = _cuts_are_topologies(spec.table, S)
        if valid != cuts:
            side = (f"the cut at {L.names[level]} is not an L-topology" if level is not None
                    else "every cut is an L-topology")
            cx.fail(f"axioms {'hold' if valid else 'fail'} but {side}", fuzzies=[fname])
        if not cx.search and spec.defect is not None:
            d = spec.defect
            fam = ", ".join(S.format(S.decode(i)) for i in d.witness)
            cx.fail(f"{d.axiom} violated: {d.message} [{fam}]", fuzzies=[fname])


def _level_eq(p_variant: bool):
    def check(cx: Cx):
        L = cx.L
        fz = cx.fuzzies()
        cx.need(len(fz), "valid degree table")
        for fname, T in fz:
            S = T.space
            for a in L.sorted_molecules():
                cx.tick()
                tau = T.level_cut(a)
                if p_variant:
                    mis = p_level_mismatch(T, a)
                    if cx.mutant:
                        cut = L.leq_np[a, T.tp_table]
                        mis.extra = [int(i) for i in np.flatnonzero(cut & ~tau.mask)]
                        mis.missing = [int(i) for i in np.flatnonzero(tau.mask & ~cut)]
                else:
                    mis = sp_level_mismatch(T, a)
                    if cx.mutant:
                        cut = L.leq_np[a, T.tsp_table]
                        mis.extra = [int(i) for i in np.flatnonzero(cut & ~tau.preopen_mask)]
                        mis.missing = [int(i) for i in np.flatnonzero(tau.preopen_mask & ~cut)]
                if not mis.ok:
                    fmt = lambda ids: "[" + ", ".join(S.format(S.decode(i)) for i in ids) + "]"
                    op = "T_p" if p_variant else "T_sp"
                    cx.fail(f"level {L.names[a]}: in the {op} cut only {fmt(mis.extra)}; "
                            f"in the crisp family only {fmt(mis.missing)}", fuzzies=[fname])
    return check


def _levelwise(kind: str):
    def check(cx: Cx):
        units = 0
        for mname, f, tn, T, un, U in cx.map_fuzzies():
            units += 1
            cx.tick()
            res = levelwise_equivalence(f, T, U, kind)
            if cx.mutant:
                if kind == "precont":
                    res.degreewise = continuity_degree_holds(f, T, U)
                else:
                    res.levelwise = all(
                        crisp_sp_continuity(f, T.level_cut(a), U.level_cut(a), "precont")
                        for a in cx.L.sorted_molecules())
            if not res.ok:
                lvl = "" if res.failing_level is None else \
                    f" (crisp side fails at level {cx.L.names[res.failing_level]})"
                cx.fail(f"degreewise {res.degreewise}, levelwise {res.levelwise}{lvl}",
                        maps=[mname], fuzzies=[tn, un])
        cx.need(units, "map with degree tables on both ends")
    return check


# ---- compactness

def _compactness(cid: str):
    def check(cx: Cx):
        units = 0
        for fname, T, g in cx.fuzzy_lsets():
            units += 1
            cx.tick()
            G = cx.doc.lsets[g][1]
            base = cx.note(C.characterization(T, G, "SPC", cx.sweep,
                                              proper=cx.mutant and cid == "SPC"))
            if cid == "SPC":
                rep_v, msg = base, "SPC verdict is false"
            else:
                rep = C.characterization(T, G, cid, cx.sweep, proper=cx.mutant)
                rep_v = cx.note(rep)
                msg = f"{cid} verdict {rep_v} against SPC verdict {base}"
            if not (rep_v and base):
                cx.fail(msg, fuzzies=[fname], lsets=[g])
        cx.need(units, "degree table with a named L-subset on its space")
    return check


def _t52(cx: Cx):
    units = 0
    for label, sname, tau, parts in cx.crisp():
        for g in cx.lsets_on(sname):
            units += 1
            cx.tick()
            G = cx.doc.lsets[g][1]
            whole = cx.note(is_fuzzy_sp_compact(tau, G, cx.sweep, proper=cx.mutant))
            levels = all(cx.note(is_a_fuzzy_sp_compact(tau, G, a, cx.sweep))
                         for a in cx.L.sorted_molecules())
            if whole != levels or not whole:
                cx.fail(f"{label}: fuzzy SP-compact {whole}, every level {levels}",
                        lsets=[g], **parts)
    cx.need(units, "crisp topology with a named L-subset")


def _t53(cx: Cx):
    units = 0
    for fname, T, g in cx.fuzzy_lsets():
        units += 1
        cx.tick()
        G = cx.doc.lsets[g][1]
        left = cx.note(C.is_lfuzzy_sp_compact(T, G, cx.sweep))
        right = all(cx.note(is_a_fuzzy_sp_compact(T.level_cut(a), G, a, cx.sweep, proper=cx.mutant))
                    for a in cx.L.sorted_molecules())
        if left != right or not left:
            cx.fail(f"L-fuzzy SP-compact {left}, level route {right}", fuzzies=[fname], lsets=[g])
    cx.need(units, "degree table with a named L-subset on its space")


def _pairs(names: list[str], ordered: bool):
    if ordered:
        return [(g, h) for g in names for h in names]
    return [(g, h) for i, g in enumerate(names) for h in names[i:]]


def _preserve_fuzzy(kind: str):
    fn = {"T5.5": C.meet_preservation, "T5.7": C.join_preservation}[kind]

    def check(cx: Cx):
        units = 0
        for fname, T in cx.fuzzies():
            names = cx.lsets_on(cx.doc.fuzzies[fname].space_name)
            for g, h in _pairs(names, kind == "T5.5"):
                units += 1
                cx.tick()
                p = fn(T, cx.doc.lsets[g][1], cx.doc.lsets[h][1], cx.sweep, proper=cx.mutant)
                if p.violated:
                    cx.fail(f"hypothesis holds for G={g}, H={h} but the conclusion fails",
                            fuzzies=[fname], lsets=[g, h])
        cx.need(units, "degree table with named L-subsets")
    return check


def _preserve_crisp(kind: str):
    fn = {"L5.4": C.crisp_meet_preservation, "L5.6": C.crisp_join_preservation}[kind]

    def check(cx: Cx):
        units = 0
        for label, sname, tau, parts in cx.crisp():
            for g, h in _pairs(cx.lsets_on(sname), kind == "L5.4"):
                for a in cx.L.sorted_molecules():
                    units += 1
                    cx.tick()
                    p = fn(tau, cx.doc.lsets[g][1], cx.doc.lsets[h][1], a, cx.sweep, proper=cx.mutant)
                    if p.violated:
                        cx.fail(f"{label}, level {cx.L.names[a]}: hypothesis holds for G={g}, "
                                f"H={h} but the conclusion fails", lsets=[g, h], **parts)
        cx.need(units, "crisp topology with named L-subsets")
    return check


def _t59(cx: Cx):
    units = 0
    for mname, f, tn, T, un, U in cx.map_fuzzies():
        for g in cx.lsets_on(cx.doc.maps[mname].source):
            units += 1
            cx.tick()
            p = C.image_preservation(f, T, U, cx.doc.lsets[g][1], cx.sweep, proper=cx.mutant)
            if p.violated:
                cx.fail(f"{mname} is semi-preirresolute and {g} is compact, but its image is not",
                        maps=[mname], fuzzies=[tn, un], lsets=[g])
    cx.need(units, "map with degree tables and a named L-subset on its source")


def _l58(cx: Cx):
    units = 0
    doc, L = cx.doc, cx.L
    for mname, spec in doc.maps.items():
        pairs = []
        sx, sy = doc.spaces[spec.source].topology, doc.spaces[spec.target].topology
        if sx is not None and sy is not None:
            pairs.append(("declared topologies", sx, sy, L.sorted_molecules(),
                          {"spaces": [spec.source, spec.target]}))
        for _, _, tn, T, un, U in (u for u in cx.map_fuzzies() if u[0] == mname):
            for a in L.sorted_molecules():
                tx, ty = T.level_cut(a), U.level_cut(a)
                pairs.append((f"level {L.names[a]} of {tn}/{un}", tx, ty, [a],
                              {"topologies": {spec.source: tx, spec.target: ty}}))
        for label, tx, ty, levels, parts in pairs:
            for g in cx.lsets_on(spec.source):
                for a in levels:
                    units += 1
                    cx.tick()
                    p = C.crisp_image_preservation(spec.map, tx, ty, doc.lsets[g][1], a, cx.sweep,
                                                   proper=cx.mutant)
                    if p.violated:
                        cx.fail(f"{label}, level {L.names[a]}: image of {g} under {mname} is not "
                                "a-fuzzy SP-compact", maps=[mname], lsets=[g], **parts)
    cx.need(units, "map between crisp spaces with a named L-subset")


# ---- registry

@dataclass(frozen=True)
class Theorem:
    id: str
    summary: str
    mutant: str
    check: Callable[[Cx], None]
    gate: tuple[str, ...] = ("distributive",)


def _t(tid, summary, mutant, check, gate=("distributive",)):
    return Theorem(tid, summary, mutant, check, gate)


_CHAR_SUMMARY = {
    "SPC": "defining inequality of L-fuzzy SP-compactness (true at finite scale)",
    "T4.2": "dual form through semi-preclosed degrees",
    "T4.3.2": "strong a-remote families, plain remote subfamily",
    "T4.3.2s": "strong a-remote families, strong remote subfamily",
    "T4.3.3": "strong a-remote families, b-remote subfamily for b in beta*(a)",
    "T4.3.3s": "strong a-remote families, strong b-remote subfamily",
    "T4.3.4": "strong a-shadings for prime a, plain shading subfamily",
    "T4.3.4s": "strong a-shadings for prime a, strong shading subfamily",
    "T4.3.5": "strong a-shadings, b-shading subfamily for b in alpha*(a)",
    "T4.3.5s": "strong a-shadings, strong b-shading subfamily",
    "T4.3.6": "Q_a-covers by members of degree >= a, Q_b-subcover",
    "T4.3.7": "Q_a-covers by members of degree >= a, beta_a-subcover (literal reading)",
    "T4.3.7s": "as T4.3.7 with a strong beta_a-subcover",
    "T4.3.7b": "Q_a-covers by members of degree >= a, beta_b-subcover",
    "T4.3.7bs": "as T4.3.7b with a strong beta_b-subcover",
    "T4.4.2": "strong beta_a-covers with a << meet of degrees, beta_a-subcover",
    "T4.4.2s": "as T4.4.2 with a strong beta_a-subcover",
    "T4.4.3": "strong beta_a-covers, beta_b-subcover for every b with a in beta*(b)",
    "T4.4.3s": "as T4.4.3 with strong subcovers",
}

_ENTRIES = [
    _t("INV.lattice", "wholly-below, beta and De Morgan invariants of the lattice",
       "claims a << b forces a != b", _inv_lattice, ()),
    _t("INV.lsets", "enumeration, complement, interior/closure laws, open => preopen => semi-preopen",
       "claims every L-subset is its own interior", _inv_lsets, ()),
    _t("INV.covers", "strong beta_a => beta_a => Q_a, strong shading/remote => plain",
       "claims every Q_a-cover is a Q_top-cover", _inv_covers, ()),
    _t("INV.operators", "T <= T_p <= T_sp, boundary values, indicator embedding",
       "claims T_sp <= T_p", _inv_operators, ()),
    _t("INV.maps", "preimage is a complement-preserving lattice map adjoint to image",
       "claims image preserves meets", _inv_maps, ()),
    _t("T2.2", "a table satisfies O1-O3 iff every molecule cut is an L-topology",
       "drops O3 from the axiom check", _t22),
    _t("T3.2", "the T_sp cut at each molecule is the semi-preopen family of the level space",
       "compares against the preopen family", _level_eq(False)),
    _t("T3.2p", "the T_p cut at each molecule is the preopen family of the level space",
       "compares against the open family", _level_eq(True)),
    _t("T3.4", "semi-precontinuous iff semi-precontinuous on every level space",
       "uses plain continuity degrees on the left", _levelwise("precont")),
    _t("T3.5", "semi-preirresolute iff semi-preirresolute on every level space",
       "uses crisp semi-precontinuity on the right", _levelwise("irresolute")),
]
for _cid in C.CHARACTERIZATIONS:
    _gate = ("distributive", "beta_meet") if _cid in C.BETA_GATED else ("distributive",)
    _ENTRIES.append(_t(_cid, _CHAR_SUMMARY[_cid], "drops the family itself from its subfamilies",
                       _compactness(_cid), _gate))
_ENTRIES += [
    _t("T5.2", "fuzzy SP-compact iff a-fuzzy SP-compact at every molecule (crisp spaces)",
       "drops the family itself on the left", _t52),
    _t("T5.3", "L-fuzzy SP-compact iff a-fuzzy SP-compact in every level space",
       "drops the family itself on the level side", _t53),
    _t("L5.4", "a-compact G and semi-preclosed H give a-compact G meet H",
       "drops the family itself in the conclusion", _preserve_crisp("L5.4")),
    _t("T5.5", "compact G and semi-preclosed degree top for H give compact G meet H",
       "drops the family itself in the conclusion", _preserve_fuzzy("T5.5")),
    _t("L5.6", "a-compact G and H give a-compact G join H",
       "drops the family itself in the conclusion", _preserve_crisp("L5.6")),
    _t("T5.7", "compact G and H give compact G join H",
       "drops the family itself in the conclusion", _preserve_fuzzy("T5.7")),
    _t("L5.8", "crisp semi-preirresolute images of a-compact sets are a-compact",
       "drops the family itself in the conclusion", _l58),
    _t("T5.9", "semi-preirresolute images of compact sets are compact",
       "drops the family itself in the conclusion", _t59),
]

REGISTRY: dict[str, Theorem] = {t.id: t for t in _ENTRIES}
IDS = list(REGISTRY)


def theorem(tid: str) -> Theorem:
    try:
        return REGISTRY[tid]
    except KeyError:
        raise UnknownTheorem(f"unknown theorem id {tid!r}") from None


def gate_reason(thm: Theorem, doc: InstanceDoc) -> str | None:
    L = doc.lattice
    if "distributive" in thm.gate and not L.is_distributive():
        if "beta_meet" in thm.gate:
            return "hypothesis beta(c meet d) = beta(c) ∩ beta(d) unavailable on non-distributive input"
        return "lattice is not distributive, so beta-dependent statements are not checked"
    if "beta_meet" in thm.gate and not L.beta_meet_condition():
        c, d = L.beta_meet_witness()
        return (f"hypothesis beta(c meet d) = beta(c) ∩ beta(d) fails at c={L.names[c]}, "
                f"d={L.names[d]}")
    return None


# ---- reports

@dataclass
class TheoremReport:
    id: str
    verdict: str                      # pass | fail | refused
    mode: str                         # exhaustive | sampled | search
    seed: int
    caps: dict
    checks: int = 0
    counterexample: dict | None = None
    reason: str | None = None
    notes: list[str] = field(default_factory=list)
    wall_time: float = field(default=0.0, compare=False)

    def to_dict(self, *, timing: bool = False) -> dict:
        out = {"id": self.id, "verdict": self.verdict, "mode": self.mode, "seed": self.seed,
               "caps": dict(self.caps), "checks": self.checks,
               "counterexample": self.counterexample, "reason": self.reason,
               "notes": list(self.notes)}
        if timing:
            out["wall_time"] = round(self.wall_time, 6)
        return out

    def to_json(self, *, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing=timing), indent=2, sort_keys=True, ensure_ascii=False)

    def to_text(self, *, timing: bool = False) -> str:
        caps = " ".join(f"{k}={v}" for k, v in self.caps.items())
        out = [f"theorem {self.id}: {self.verdict}", f"mode: {self.mode}", f"seed: {self.seed}",
               f"caps: {caps}", f"checks: {self.checks}"]
        if self.reason:
            out.append(f"reason: {self.reason}")
        out += [f"note: {n}" for n in self.notes]
        if self.counterexample:
            ce = self.counterexample
            out.append(f"counterexample ({ce['checker']}{', mutant' if ce['mutant'] else ''}):")
            out.append(f"  {ce['detail']}")
            out += ["  | " + ln if ln else "  |" for ln in ce["instance"].rstrip("\n").split("\n")]
        if timing:
            out.append(f"wall_time: {self.wall_time:.3f}s")
        return "\n".join(out) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "TheoremReport":
        return cls(d["id"], d["verdict"], d["mode"], d["seed"], d["caps"], d["checks"],
                   d["counterexample"], d["reason"], list(d["notes"]), d.get("wall_time", 0.0))


@dataclass
class Outcome:
    verdict: str
    checks: int
    sampled: bool
    failure: _Failed | None = None
    reason: str | None = None


def evaluate(tid: str, doc: InstanceDoc, config: HarnessConfig, *,
             mutant: bool = False, search: bool = False) -> Outcome:
    """Run one checker without building a report; raises MissingComponent."""
    thm = theorem(tid)
    reason = gate_reason(thm, doc)
    if reason:
        return Outcome("refused", 0, False, reason=reason)
    cx = Cx(doc, config, mutant=mutant, search=search)
    try:
        thm.check(cx)
    except _Failed as exc:
        return Outcome("fail", cx.checks, cx.sampled, failure=exc)
    return Outcome("pass", cx.checks, cx.sampled)


def _notes(tid: str, outcome: Outcome) -> list[str]:
    from .families import VACUITY_NOTE

    notes = []
    if outcome.verdict == "refused":
        return notes
    if tid in C.CHARACTERIZATIONS or tid[:2] in ("T5", "L5"):
        notes.append(VACUITY_NOTE)
    if outcome.sampled:
        notes.append("some family sweeps were sampled: falsification only")
    return notes


def _counterexample(failure: _Failed, *, mutant: bool, search: bool) -> dict:
    return {"detail": failure.detail, "instance": serialize_instance(failure.doc),
            "mutant": mutant, "checker": "search" if search else "doc"}


def run_theorem(tid: str, doc: InstanceDoc, config: HarnessConfig | None = None, *,
                mutant: bool = False) -> TheoremReport:
    config = config or HarnessConfig()
    start = time.perf_counter()
    out = evaluate(tid, doc, config, mutant=mutant)
    rep = TheoremReport(tid, out.verdict, "sampled" if out.sampled else "exhaustive",
                        config.seed, config.caps(), out.checks, reason=out.reason,
                        notes=_notes(tid, out))
    if out.failure is not None:
        rep.counterexample = _counterexample(out.failure, mutant=mutant, search=False)
    rep.wall_time = time.perf_counter() - start
    return rep


def replay(report: TheoremReport, config: HarnessConfig | None = None) -> bool:
    """Re-run a fail report's counterexample; true iff it fails again."""
    ce = report.counterexample
    if report.verdict != "fail" or not ce:
        raise ValueError("only fail reports with a counterexample can be replayed")
    config = config or HarnessConfig(seed=report.seed)
    doc = parse_instance_text(ce["instance"], strict=False, cap_lattice=config.cap_lattice)
    out = evaluate(report.id, doc, config, mutant=ce["mutant"], search=ce["checker"] == "search")
    return out.verdict == "fail"


# ---- suites

def _suite_task(args) -> dict:
    name, text, tid, config = args
    doc = parse_instance_text(text, strict=False, cap_lattice=config.cap_lattice)
    try:
        rep = run_theorem(tid, doc, config)
    except MissingComponent as exc:
        rep = TheoremReport(tid, "refused", "exhaustive", config.seed, config.caps(),
                            reason=f"not applicable: {exc}")
    d = rep.to_dict(timing=True)
    d["doc"] = name
    return d


@dataclass
class SuiteResult:
    reports: list[tuple[str, TheoremReport]]
    seed: int

    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "refused": 0}
        for _, r in self.reports:
            out[r.verdict] += 1
        return out

    @property
    def ok(self) -> bool:
        return self.counts()["fail"] == 0

    def summary(self) -> str:
        c = self.counts()
        return (f"summary: {c['pass']} pass, {c['fail']} fail, {c['refused']} refused "
                f"(seed {self.seed})")

    def table(self) -> str:
        width = max([len(n) for n, _ in self.reports] + [3])
        rows = [f"{'doc'.ljust(width)}  {'theorem':<10} {'verdict':<8} {'mode':<11} checks"]
        for name, r in self.reports:
            rows.append(f"{name.ljust(width)}  {r.id:<10} {r.verdict:<8} {r.mode:<11} {r.checks}")
        return "\n".join(rows)


def run_suite(docs: list[tuple[str, InstanceDoc]], config: HarnessConfig | None = None, *,
              ids: list[str] | None = None, jobs: int = 1) -> SuiteResult:
    """Every id over every document; results are listed in (doc, id) order."""
    config = config or HarnessConfig()
    ids = ids or IDS
    tasks = [(name, serialize_instance(doc), tid, config) for name, doc in docs for tid in ids]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_suite_task, tasks, chunksize=4))
    else:
        results = [_suite_task(t) for t in tasks]
    return SuiteResult([(d.pop("doc"), TheoremReport.from_dict(d)) for d in results], config.seed)
