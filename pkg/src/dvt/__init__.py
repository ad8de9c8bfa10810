"""Discrete viability on finite face-poset models of cell complexes."""

from .certificates import HomotopyCertificate, verify_certificate
from .cohomology import OrderComplex, betti1, gate_boundary_connectedness
from .errors import *  # noqa: F401,F403
from .gallery import DEFAULT_NAMES, build_example
from .instance import Instance, parse_instance, write_instance
from .maps import CellMap, HypothesisReport, SetValuedMap, check_hypotheses
from .topology import (FiniteSpace, PointSet, build_space, circle_model, grid_model,
                       labeled_path, path_model, product_space)
from .viability import (INF, Orbit, ViabilityReport, check_theorem_bounds, decompose_open_set,
                        extract_orbit, max_orbit_bruteforce, verify_propositions,
                        viability_sequence)

__version__ = "0.1.0"
