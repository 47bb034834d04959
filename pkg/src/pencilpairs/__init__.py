"""Twist counts of Lefschetz pencils and the pencil pairs they form."""

from .chern_ring import AmbientProduct, CohomologyClass, integrate, invert_unit, parse_class
from .varieties import CatalogEntry, CompleteIntersection, DivisorClass, default_catalog, load_catalog
from .pencil import PencilInvariants, crit_count_chern, fano_crit_count, pencil_invariants
from .pairs import PencilPairRecord, group_fano_pairs, pair_report, search_dim2
from .mcg import SphereConfiguration, dehn_twist_matrix, parity_check, tau_of_word

__version__ = "0.1.0"
