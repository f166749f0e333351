"""Randomized falsification with shrinking.

:func:`search` draws random instance documents, runs a registered checker on
each and, at the first failure, greedily shrinks the failing sub-document:
components are dropped, table and L-subset values lowered, opens removed,
points deleted and the lattice collapsed along DeMorgan homomorphisms.  A
candidate is kept only if it is strictly smaller and still fails.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Iterator

import numpy as np

from .fuzzy import random_raw_table, saturate
from .instance import InstanceDoc, MapSpec, SpaceSpec, make_fuzzy_spec
from .lattice import BUILTIN_LATTICES, Lattice
from .lsets import Space, SpaceMap
from .theorems import (HarnessConfig, MissingComponent, TheoremReport, _counterexample,
                       evaluate, theorem)
from .topology import LTopology, generate_topology

DEFAULT_BUDGET = 200
EXHAUSTED = "exhausted budget, no counterexample"


class GeneratorError(RuntimeError):
    """No usable instance could be drawn for the theorem."""


@dataclass(frozen=True)
class GeneratorConfig:
    lattices: tuple[str, ...] = ("L2", "L3", "D4")
    max_points: int = 2
    max_lsets: int = 16
    raw_tables: float = 0.5       # T2.2 only: share of tables left unsaturated
    table_tries: int = 20         # rejection-sampling draws before saturating
    retries: int = 50             # consecutive inapplicable draws before giving up
    shrink_steps: int = 200


# ---- generation

def _meet_saturate(space: Space, table: np.ndarray) -> np.ndarray:
    """Close under O2 only, so O3 may still fail."""
    L = space.lattice
    vals = [int(v) for v in table]
    mi = space.meet_idx.tolist()
    changed = True
    while changed:
        changed = False
        for a in range(space.n):
            for b in range(a + 1, space.n):
                t = mi[a][b]
                w = L.join[vals[t]][L.meet[vals[a]][vals[b]]]
                if w != vals[t]:
                    vals[t], changed = w, True
    return np.array(vals, dtype=np.int16)


def _table(space: Space, rng: np.random.Generator, gcfg: GeneratorConfig, raw: bool) -> np.ndarray:
    L = space.lattice
    p = float(rng.uniform(0.5, 0.95))
    for _ in range(gcfg.table_tries):
        t = random_raw_table(space, rng, p_bottom=p)
        t[[space.bottom, space.top]] = L.top
        if raw:
            return _meet_saturate(space, t) if rng.random() < 0.5 else t
        if make_fuzzy_spec(space, "", t, strict=False).defect is None:
            return t
    return saturate(space, t)


def _topology(space: Space, rng: np.random.Generator) -> LTopology:
    picks = rng.integers(space.n, size=int(rng.integers(0, 3)))
    return generate_topology(space, [space.decode(int(i)) for i in picks])


def generate(rng: np.random.Generator, gcfg: GeneratorConfig, *, raw_tables: bool = False) -> InstanceDoc:
    """One random document: spaces X and Y with crisp topologies, tables T
    and U, L-subsets G and H on X and a map f: X -> Y."""
    name = gcfg.lattices[int(rng.integers(len(gcfg.lattices)))]
    L = BUILTIN_LATTICES[name]()
    kmax = max(1, min(gcfg.max_points, int(np.log(gcfg.max_lsets) / np.log(L.n) + 1e-9)))
    X = Space(L, ["x", "y", "z"][:int(rng.integers(1, kmax + 1))])
    Y = Space(L, ["u", "v", "w"][:int(rng.integers(1, kmax + 1))])
    doc = InstanceDoc(name, L)
    doc.add_space("X", X, _topology(X, rng))
    doc.add_space("Y", Y, _topology(Y, rng))
    raw = raw_tables and rng.random() < gcfg.raw_tables
    doc.add_fuzzy("T", "X", _table(X, rng, gcfg, raw), strict=False)
    doc.add_fuzzy("U", "Y", _table(Y, rng, gcfg, False))
    for g in ("G", "H"):
        doc.add_lset(g, "X", X.decode(int(rng.integers(X.n))))
    doc.add_map("f", "X", "Y", tuple(int(v) for v in rng.integers(0, Y.k, size=X.k)))
    return doc


# ---- size and shrinking

def _ranks(L: Lattice) -> list[int]:
    rank = [0] * L.n
    for a in sorted(range(L.n), key=lambda a: sum(L.leq[b][a] for b in range(L.n))):
        below = [rank[b] + 1 for b in range(L.n) if b != a and L.leq[b][a]]
        rank[a] = max(below, default=0)
    return rank


def size(doc: InstanceDoc) -> tuple[int, int, int, int]:
    """(|L|, points, opens and nonzero degrees, total rank of all values)."""
    L = doc.lattice
    r = _ranks(L)
    points = sum(s.space.k for s in doc.spaces.values())
    opens = sum(int(s.topology.mask.sum()) for s in doc.spaces.values() if s.topology is not None)
    opens += sum(int((f.table != L.bottom).sum()) for f in doc.fuzzies.values())
    opens += len(doc.lsets) + len(doc.maps)
    ranks = sum(r[int(v)] for f in doc.fuzzies.values() for v in f.table)
    ranks += sum(r[v] for _, A in doc.lsets.values() for v in A)
    return L.n, points, opens, ranks


def _copy(doc: InstanceDoc) -> InstanceDoc:
    out = InstanceDoc(doc.lattice_name, doc.lattice)
    out.spaces = dict(doc.spaces)
    out.fuzzies = dict(doc.fuzzies)
    out.lsets = dict(doc.lsets)
    out.maps = dict(doc.maps)
    return out


def _set_table(doc: InstanceDoc, name: str, table: np.ndarray) -> bool:
    """Replace a table; refuse a candidate that turns a valid table invalid."""
    old = doc.fuzzies[name]
    spec = make_fuzzy_spec(doc.space(old.space_name), old.space_name, table, strict=False)
    if old.defect is None and spec.defect is not None:
        return False
    doc.fuzzies[name] = spec
    return True


def _drop_components(doc: InstanceDoc) -> Iterator[InstanceDoc]:
    for kind in ("maps", "lsets", "fuzzies"):
        for name in list(getattr(doc, kind)):
            d = _copy(doc)
            del getattr(d, kind)[name]
            yield d
    for sname, spec in doc.spaces.items():
        if spec.topology is not None:
            d = _copy(doc)
            d.spaces[sname] = SpaceSpec(spec.space, None)
            yield d
    used = {f.space_name for f in doc.fuzzies.values()} | {s for s, _ in doc.lsets.values()}
    used |= {m.source for m in doc.maps.values()} | {m.target for m in doc.maps.values()}
    for sname in doc.spaces:
        if sname not in used:
            d = _copy(doc)
            del d.spaces[sname]
            yield d


def _lower_values(doc: InstanceDoc) -> Iterator[InstanceDoc]:
    L = doc.lattice
    lower = [[c for c in range(L.n) if c != a and L.leq[c][a]] for a in range(L.n)]
    for name, spec in doc.fuzzies.items():
        S = doc.space(spec.space_name)
        for i, v in enumerate(spec.table.tolist()):
            if i in (S.bottom, S.top):
                continue
            for c in lower[v]:
                t = spec.table.copy()
                t[i] = c
                if spec.defect is None:
                    t = saturate(S, t)
                d = _copy(doc)
                if _set_table(d, name, t):
                    yield d
    for name, (sname, A) in doc.lsets.items():
        for x, v in enumerate(A):
            for c in lower[v]:
                d = _copy(doc)
                d.lsets[name] = (sname, A[:x] + (c,) + A[x + 1:])
                yield d


def _drop_opens(doc: InstanceDoc) -> Iterator[InstanceDoc]:
    for sname, spec in doc.spaces.items():
        tau = spec.topology
        if tau is None:
            continue
        S = spec.space
        inner = [i for i in tau.open_indices() if i not in (S.bottom, S.top)]
        for i in inner:
            smaller = generate_topology(S, [S.decode(j) for j in inner if j != i])
            if smaller != tau:
                d = _copy(doc)
                d.spaces[sname] = SpaceSpec(S, smaller)
                yield d


def _without_point(doc: InstanceDoc, sname: str, p: int) -> InstanceDoc:
    L = doc.lattice
    S = doc.space(sname)
    keep = [x for x in range(S.k) if x != p]
    R = Space(L, [S.points[x] for x in keep])
    cut = lambda A: tuple(A[x] for x in keep)
    d = InstanceDoc(doc.lattice_name, L)
    for n, spec in doc.spaces.items():
        if n != sname:
            d.spaces[n] = spec
            continue
        topo = None
        if spec.topology is not None:
            topo = LTopology.from_lsets(R, {cut(A) for A in spec.topology.opens()})
        d.spaces[n] = SpaceSpec(R, topo)
    for n, (s, A) in doc.lsets.items():
        d.lsets[n] = (s, cut(A) if s == sname else A)
    for n, spec in doc.fuzzies.items():
        if spec.space_name != sname:
            d.fuzzies[n] = spec
            continue
        # restrict along the bottom extension at p, pinning the top
        t = np.empty(R.n, dtype=np.int16)
        for j, B in enumerate(R.enumerate()):
            full = list(B)
            full.insert(p, L.bottom)
            t[j] = spec.table[S.encode(full)]
        t[R.top] = L.top
        d.fuzzies[n] = make_fuzzy_spec(R, sname, t, strict=False)
    for n, spec in doc.maps.items():
        src, tgt = d.space(spec.source), d.space(spec.target)
        mapping = list(spec.map.mapping)
        if spec.source == sname:
            mapping = [mapping[x] for x in keep]
        if spec.target == sname:
            mapping = [keep.index(y) if y != p else 0 for y in mapping]
        d.maps[n] = MapSpec(spec.source, spec.target, SpaceMap(src, tgt, tuple(mapping)))
    return d


def _drop_points(doc: InstanceDoc) -> Iterator[InstanceDoc]:
    for sname, spec in doc.spaces.items():
        if spec.space.k < 2:
            continue
        for p in range(spec.space.k):
            d = _without_point(doc, sname, p)
            if all(f.defect is None for n, f in d.fuzzies.items() if doc.fuzzies[n].defect is None):
                yield d


def homomorphisms(L: Lattice, K: Lattice) -> Iterator[tuple[int, ...]]:
    """Surjective maps L -> K preserving meet, join and the involution."""
    free = [a for a in range(L.n) if a not in (L.bottom, L.top)]
    for vals in _cartesian(range(K.n), repeat=len(free)):
        h = [0] * L.n
        h[L.bottom], h[L.top] = K.bottom, K.top
        for a, v in zip(free, vals):
            h[a] = v
        if len(set(h)) != K.n:
            continue
        if all(h[L.inv[a]] == K.inv[h[a]] for a in range(L.n)) and all(
                h[L.meet[a][b]] == K.meet[h[a]][h[b]] and h[L.join[a][b]] == K.join[h[a]][h[b]]
                for a in range(L.n) for b in range(a + 1, L.n)):
            yield tuple(h)


def _push(doc: InstanceDoc, kname: str, K: Lattice, h: tuple[int, ...]) -> InstanceDoc:
    d = InstanceDoc(kname, K)
    spaces = {}
    for n, spec in doc.spaces.items():
        S = spec.space
        R = Space(K, list(S.points))
        spaces[n] = (S, R)
        topo = None
        if spec.topology is not None:
            topo = LTopology.from_lsets(R, {tuple(h[v] for v in A) for A in spec.topology.opens()})
        d.spaces[n] = SpaceSpec(R, topo)
    for n, (s, A) in doc.lsets.items():
        d.lsets[n] = (s, tuple(h[v] for v in A))
    for n, spec in doc.fuzzies.items():
        S, R = spaces[spec.space_name]
        idx = R._encode_np(np.array(h, dtype=np.int16)[S.values])
        t = np.full(R.n, K.bottom, dtype=np.int16)
        for i, j in enumerate(idx.tolist()):
            t[j] = K.join[t[j]][h[int(spec.table[i])]]
        d.fuzzies[n] = make_fuzzy_spec(R, spec.space_name, t, strict=False)
    for n, spec in doc.maps.items():
        m = SpaceMap(spaces[spec.source][1], spaces[spec.target][1], spec.map.mapping)
        d.maps[n] = MapSpec(spec.source, spec.target, m)
    return d


def _merge_lattice(doc: InstanceDoc) -> Iterator[InstanceDoc]:
    L = doc.lattice
    for kname, build in BUILTIN_LATTICES.items():
        K = build()
        if K.n >= L.n:
            continue
        for h in homomorphisms(L, K):
            d = _push(doc, kname, K, h)
            if all(f.defect is None for n, f in d.fuzzies.items() if doc.fuzzies[n].defect is None):
                yield d
            break


STEPS = (_merge_lattice, _drop_points, _drop_components, _drop_opens, _lower_values)


def shrink(tid: str, doc: InstanceDoc, config: HarnessConfig, *, mutant: bool,
           steps: int = GeneratorConfig.shrink_steps):
    """Greedy descent on :func:`size`; returns (doc, failure, accepted steps)."""
    out = evaluate(tid, doc, config, mutant=mutant, search=True)
    assert out.failure is not None, "shrink needs a failing document"
    current, failure, cur_size, taken = out.failure.doc, out.failure, size(out.failure.doc), 0
    improved = True
    while improved and taken < steps:
        improved = False
        for step in STEPS:
            for cand in step(current):
                cs = size(cand)
                if cs >= cur_size:
                    continue
                try:
                    res = evaluate(tid, cand, config, mutant=mutant, search=True)
                except MissingComponent:
                    continue
                if res.failure is not None and size(res.failure.doc) < cur_size:
                    current, failure, cur_size = res.failure.doc, res.failure, size(res.failure.doc)
                    taken += 1
                    improved = True
                    break
            if improved:
                break
    return current, failure, taken


# ---- driver

def search(tid: str, budget: int = DEFAULT_BUDGET, seed: int = 0, *,
           gen: GeneratorConfig | None = None, config: HarnessConfig | None = None,
           mutant: bool = False) -> TheoremReport:
    if budget <= 0:
        raise ValueError("search budget must be positive")
    theorem(tid)
    gen = gen or GeneratorConfig()
    config = config or HarnessConfig(seed=seed)
    rng = np.random.default_rng(seed)
    start = time.perf_counter()
    tried = refused = misses = 0
    caps = dict(config.caps(), budget=budget)
    while tried < budget:
        doc = generate(rng, gen, raw_tables=tid == "T2.2")
        try:
            out = evaluate(tid, doc, config, mutant=mutant, search=True)
        except MissingComponent:
            misses += 1
            if misses >= gen.retries:
                raise GeneratorError(f"no applicable instance for {tid} in {misses} draws") from None
            continue
        misses = 0
        tried += 1
        if out.verdict == "refused":
            refused += 1
            continue
        if out.failure is not None:
            small, failure, taken = shrink(tid, doc, config, mutant=mutant, steps=gen.shrink_steps)
            rep = TheoremReport(tid, "fail", "search", seed, caps, tried,
                                notes=[f"counterexample at draw {tried}, shrunk in {taken} steps"])
            rep.counterexample = _counterexample(failure, mutant=mutant, search=True)
            rep.wall_time = time.perf_counter() - start
            return rep
    notes = [f"{tried} instances drawn, {refused} refused by gates"]
    rep = TheoremReport(tid, "pass", "search", seed, caps, tried, reason=EXHAUSTED, notes=notes)
    rep.wall_time = time.perf_counter() - start
    return rep
