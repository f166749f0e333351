"""L-subsets of a finite carrier and the maps induced on them.

An L-subset is a tuple of element indices, one per carrier point.  A
:class:`Space` fixes the carrier and the lattice and enumerates ``L^X`` in
lexicographic order (first point most significant), so every L-subset also
has a stable integer index.  Bulk work elsewhere runs on those indices and on
the lookup tables precomputed here.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .lattice import Lattice

DEFAULT_LSET_CAP = 256

LSet = tuple[int, ...]


class SpaceError(ValueError):
    pass


class FuzzyPoint(NamedTuple):
    point: int
    height: int


class Space:
    """A carrier ``X`` together with the value lattice ``L``."""

    def __init__(self, lattice: Lattice, points: Sequence[str], *,
                 cap: int = DEFAULT_LSET_CAP, heights: str = "molecules"):
        if not points:
            raise SpaceError("carrier must be nonempty")
        if len(set(points)) != len(points):
            raise SpaceError("duplicate point names")
        self.lattice = lattice
        self.points: tuple[str, ...] = tuple(points)
        self.k = len(points)
        self.n = lattice.n ** self.k
        if self.n > cap:
            raise SpaceError(f"|L|^|X| = {self.n} exceeds the enumeration cap {cap}")
        self._pindex = {p: i for i, p in enumerate(self.points)}

        L = lattice
        self.values = np.array(list(_cartesian(range(L.n), repeat=self.k)),
                               dtype=np.int16).reshape(self.n, self.k)
        self._weights = L.n ** np.arange(self.k - 1, -1, -1)
        V = self.values
        self.join_idx = self._encode_np(L.join_np[V[:, None, :], V[None, :, :]])
        self.meet_idx = self._encode_np(L.meet_np[V[:, None, :], V[None, :, :]])
        self.comp_idx = self._encode_np(L.inv_np[V])
        self.leq_mat = L.leq_np[V[:, None, :], V[None, :, :]].all(axis=2)
        self.bottom = self.encode((L.bottom,) * self.k)
        self.top = self.encode((L.top,) * self.k)

        if heights == "molecules":
            hs = lattice.sorted_molecules()
        elif heights == "nonzero":
            hs = [a for a in range(L.n) if a != L.bottom]
        else:
            raise SpaceError(f"unknown height mode {heights!r}")
        self.heights_mode = heights
        self.fuzzy_points = [FuzzyPoint(x, h) for x in range(self.k) for h in hs]
        P = len(self.fuzzy_points)
        self.pt_wb = np.zeros((P, self.n), dtype=bool)
        self.pt_le = np.zeros((P, self.n), dtype=bool)
        for i, (x, h) in enumerate(self.fuzzy_points):
            self.pt_wb[i] = L.wb_np[h, V[:, x]]
            self.pt_le[i] = L.leq_np[h, V[:, x]]

    def __repr__(self) -> str:
        return f"Space(points={list(self.points)}, lattice={self.lattice!r})"

    def same_as(self, other: "Space") -> bool:
        return self.points == other.points and self.lattice == other.lattice

    # ---- encoding

    def _encode_np(self, arr: np.ndarray) -> np.ndarray:
        return (arr.astype(np.int64) * self._weights).sum(axis=-1)

    def encode(self, A: Sequence[int]) -> int:
        self.check(A)
        out = 0
        for v in A:
            out = out * self.lattice.n + int(v)
        return out

    def decode(self, i: int) -> LSet:
        return tuple(int(v) for v in self.values[i])

    def check(self, A: Sequence[int]) -> None:
        if len(A) != self.k:
            raise SpaceError(f"L-subset has {len(A)} values, carrier has {self.k} points")
        if any(not 0 <= int(v) < self.lattice.n for v in A):
            raise SpaceError("L-subset value outside the lattice")

    def point(self, name: str) -> int:
        try:
            return self._pindex[name]
        except KeyError:
            raise SpaceError(f"unknown point {name!r}") from None

    def lset(self, mapping: dict[str, str] | str) -> LSet:
        """Build an L-subset from ``{point: element}`` names or ``"x=m, y=1"``.

        Points left out take the value ⊥.
        """
        if isinstance(mapping, str):
            body = mapping.strip().strip("{}")
            mapping = dict(part.split("=") for part in body.replace(" ", "").split(",") if part)
        vals = [self.lattice.bottom] * self.k
        for p, e in mapping.items():
            vals[self.point(p.strip())] = self.lattice.element(e.strip())
        return tuple(vals)

    def constant(self, a: int) -> LSet:
        return (a,) * self.k

    def crisp(self, *points: str) -> LSet:
        """Characteristic L-subset of a crisp set of points."""
        L = self.lattice
        chosen = {self.point(p) for p in points}
        return tuple(L.top if i in chosen else L.bottom for i in range(self.k))

    def format(self, A: Sequence[int]) -> str:
        return "{" + ", ".join(f"{p}={self.lattice.names[v]}"
                               for p, v in zip(self.points, A)) + "}"

    # ---- enumeration and pointwise structure

    def enumerate(self) -> list[LSet]:
        return [self.decode(i) for i in range(self.n)]

    def join(self, A: Sequence[int], B: Sequence[int]) -> LSet:
        self.check(A), self.check(B)
        return tuple(self.lattice.join[a][b] for a, b in zip(A, B))

    def meet(self, A: Sequence[int], B: Sequence[int]) -> LSet:
        self.check(A), self.check(B)
        return tuple(self.lattice.meet[a][b] for a, b in zip(A, B))

    def complement(self, A: Sequence[int]) -> LSet:
        self.check(A)
        return tuple(self.lattice.inv[a] for a in A)

    def leq(self, A: Sequence[int], B: Sequence[int]) -> bool:
        self.check(A), self.check(B)
        return all(self.lattice.leq[a][b] for a, b in zip(A, B))

    def join_all(self, family: Iterable[Sequence[int]]) -> LSet:
        out = self.constant(self.lattice.bottom)
        for A in family:
            out = self.join(out, A)
        return out

    def meet_all(self, family: Iterable[Sequence[int]]) -> LSet:
        out = self.constant(self.lattice.top)
        for A in family:
            out = self.meet(out, A)
        return out

    def point_wholly_below(self, p: FuzzyPoint, A: Sequence[int]) -> bool:
        return self.lattice.wb[p.height][A[p.point]]

    def point_leq(self, p: FuzzyPoint, A: Sequence[int]) -> bool:
        return self.lattice.leq[p.height][A[p.point]]


def pointwise_join(space: Space, A, B) -> LSet:
    return space.join(A, B)


def pointwise_meet(space: Space, A, B) -> LSet:
    return space.meet(A, B)


def complement(space: Space, A) -> LSet:
    return space.complement(A)


def leq(space: Space, A, B) -> bool:
    return space.leq(A, B)


def enumerate_lsets(space: Space) -> list[LSet]:
    return space.enumerate()


@dataclass(frozen=True, eq=False)
class SpaceMap:
    """A total point map ``f: X -> Y`` between two spaces over one lattice."""

    source: Space
    target: Space
    mapping: tuple[int, ...]

    def __post_init__(self):
        if self.source.lattice != self.target.lattice:
            raise SpaceError("both spaces must share one lattice")
        if len(self.mapping) != self.source.k:
            raise SpaceError("map must send every source point somewhere")
        if any(not 0 <= y < self.target.k for y in self.mapping):
            raise SpaceError("map sends a point outside the target carrier")
        src, tgt = self.source, self.target
        object.__setattr__(self, "preimage_idx", src._encode_np(tgt.values[:, list(self.mapping)]))
        L = src.lattice
        img = np.full((src.n, tgt.k), L.bottom, dtype=np.int16)
        for x, y in enumerate(self.mapping):
            img[:, y] = L.join_np[img[:, y], src.values[:, x]]
        object.__setattr__(self, "image_idx", tgt._encode_np(img))

    @classmethod
    def from_names(cls, source: Space, target: Space, pairs: dict[str, str]) -> "SpaceMap":
        mapping = [None] * source.k
        for x, y in pairs.items():
            mapping[source.point(x)] = target.point(y)
        if any(v is None for v in mapping):
            raise SpaceError("map is not total")
        return cls(source, target, tuple(mapping))

    @classmethod
    def identity(cls, space: Space) -> "SpaceMap":
        return cls(space, space, tuple(range(space.k)))


def image(f: SpaceMap, A: Sequence[int]) -> LSet:
    f.source.check(A)
    L = f.source.lattice
    out = [L.bottom] * f.target.k
    for x, y in enumerate(f.mapping):
        out[y] = L.join[out[y]][A[x]]
    return tuple(out)


def preimage(f: SpaceMap, B: Sequence[int]) -> LSet:
    f.target.check(B)
    return tuple(B[y] for y in f.mapping)
