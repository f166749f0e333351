"""Bundled instance documents.

The ``.lfs`` files under ``fixtures/`` are the frozen form; :func:`build`
regenerates each one from its recipe (sampled tables use fixed seeds), and
``python -m spcompact.fixtures`` rewrites the files.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .fuzzy import LFuzzyTopology, random_fuzzy_topology
from .instance import InstanceDoc, parse_instance_text, serialize_instance
from .lattice import boolean_square, chain, diamond_m3, kleene_square, product
from .lsets import Space
from .topology import discrete, generate_topology, indiscrete


def _l2_tau0() -> InstanceDoc:
    L = chain(2)
    doc = InstanceDoc("L2", L)
    X, Z = Space(L, ["x", "y"]), Space(L, ["z"])
    tau0 = generate_topology(X, [X.crisp("x")])
    doc.add_space("X", X, tau0)
    doc.add_space("Z", Z, discrete(Z))
    doc.add_lset("G", "X", X.crisp("x"))
    doc.add_lset("H", "X", X.crisp("y"))
    doc.add_fuzzy("T", "X", LFuzzyTopology.indicator(tau0).table)
    doc.add_fuzzy("U", "Z", LFuzzyTopology.indicator(discrete(Z)).table)
    doc.add_map("f", "X", "Z", (0, 0))
    doc.add_map("id", "X", "X", (0, 1))
    return doc


def _l3_basic() -> InstanceDoc:
    L = chain(3)
    m = L.element("m")
    doc = InstanceDoc("L3", L)
    X = Space(L, ["x", "y"])
    tau = generate_topology(X, [X.lset({"x": "m", "y": "0"})])
    doc.add_space("X", X, tau)
    doc.add_lset("G", "X", X.lset({"x": "1", "y": "m"}))
    doc.add_lset("H", "X", X.constant(m))
    doc.add_fuzzy("T", "X", LFuzzyTopology.indicator(tau).table)
    doc.add_map("id", "X", "X", (0, 1))
    return doc


def _l3_graded() -> InstanceDoc:
    """One point, T({x=m}) = m: the graded counterpart of ``l3-basic``."""
    L = chain(3)
    m = L.element("m")
    doc = InstanceDoc("L3", L)
    X = Space(L, ["x"])
    doc.add_space("X", X)
    doc.add_lset("G", "X", X.constant(L.top))
    doc.add_fuzzy("T", "X", [L.top, m, L.top])
    return doc


def _sampled(name: str, L, points, seed: int, *, target=("u",), tables: int = 1) -> InstanceDoc:
    rng = np.random.default_rng(seed)
    doc = InstanceDoc(name, L)
    X = Space(L, list(points))
    Y = Space(L, list(target))
    sub = [X.decode(int(i)) for i in rng.choice(X.n, size=2, replace=False)]
    doc.add_space("X", X, generate_topology(X, sub))
    doc.add_space("Y", Y)
    for i in range(tables):
        doc.add_fuzzy(f"T{i}" if tables > 1 else "T", "X", random_fuzzy_topology(X, rng).table)
    doc.add_fuzzy("U", "Y", random_fuzzy_topology(Y, rng).table)
    for nm in ("G", "H"):
        doc.add_lset(nm, "X", X.decode(int(rng.integers(X.n))))
    doc.add_map("f", "X", "Y", tuple(int(v) for v in rng.integers(0, Y.k, size=X.k)))
    return doc


def _diamond() -> InstanceDoc:
    L = diamond_m3()
    doc = InstanceDoc("M3", L)
    X = Space(L, ["x"])
    doc.add_space("X", X, indiscrete(X))
    doc.add_lset("G", "X", X.constant(L.top))
    doc.add_fuzzy("T", "X", LFuzzyTopology.constant_top(X).table)
    return doc


def _l2_triple() -> InstanceDoc:
    L = chain(2)
    doc = InstanceDoc("L2", L)
    X = Space(L, ["x", "y", "z"])
    tau = generate_topology(X, [X.crisp("x"), X.crisp("x", "y")])
    doc.add_space("X", X, tau)
    doc.add_lset("G", "X", X.crisp("y", "z"))
    doc.add_lset("H", "X", X.crisp("x"))
    doc.add_fuzzy("T", "X", LFuzzyTopology.indicator(tau).table)
    return doc


RECIPES = {
    "l2-tau0": _l2_tau0,
    "l3-basic": _l3_basic,
    "l3-graded": _l3_graded,
    "l3-pair": lambda: _sampled("L3", chain(3), "xy", 101, target=("u", "v"), tables=2),
    "d4-pair": lambda: _sampled("D4", boolean_square(), "xy", 202, tables=2),
    "d4k-point": lambda: _sampled("D4K", kleene_square(), "x", 303),
    "chain4-point": lambda: _sampled("L4", chain(4), "x", 404),
    "chain5-point": lambda: _sampled("L5", chain(5), "x", 505),
    "l3xl2-point": lambda: _sampled("L3xL2", product(chain(3), chain(2)), "x", 606),
    "diamond-m3": _diamond,
    "l2-triple": _l2_triple,
}

NAMES = list(RECIPES)


def build(name: str) -> InstanceDoc:
    return RECIPES[name]()


def path(name: str):
    if name not in RECIPES:
        raise KeyError(f"unknown fixture {name!r}")
    return resources.files(__package__).joinpath("fixtures", f"{name}.lfs")


def text(name: str) -> str:
    return path(name).read_text(encoding="utf-8")


def load(name: str) -> InstanceDoc:
    return parse_instance_text(text(name), strict=False)


def load_all() -> list[tuple[str, InstanceDoc]]:
    return [(n, load(n)) for n in NAMES]


def write_all(directory: Path | None = None) -> None:
    directory = directory or Path(__file__).parent / "fixtures"
    directory.mkdir(exist_ok=True)
    for name in NAMES:
        (directory / f"{name}.lfs").write_text(serialize_instance(build(name)), encoding="utf-8")


if __name__ == "__main__":
    write_all()
