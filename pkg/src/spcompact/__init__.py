"""Exact computation and theorem checking for semi-preopen compactness in
lattice-valued (L-fuzzy) topology over finite DeMorgan algebras."""

from .lattice import Lattice, boolean_square, chain, diamond_m3, kleene_square, product, validate_lattice
from .lsets import Space, SpaceMap, image, preimage
from .topology import LTopology, generate_topology
from .fuzzy import LFuzzyTopology, validate_axioms
from .instance import InstanceDoc, parse_instance, parse_instance_text, serialize_instance

__all__ = [
    "Lattice", "validate_lattice", "chain", "boolean_square", "kleene_square", "diamond_m3",
    "product", "Space", "SpaceMap", "image", "preimage", "LTopology", "generate_topology",
    "LFuzzyTopology", "validate_axioms", "InstanceDoc", "parse_instance",
    "parse_instance_text", "serialize_instance",
]
