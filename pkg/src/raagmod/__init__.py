"""Right-angled Artin groups, their automorphisms, and symplectic structures."""

from .automorphisms import (Automorphism, CommTransvection, Graphic, Inner, Inversion,
                            PartialConj, Transvection, Type1, Whitehead, enumerate_omega,
                            homology_matrix, is_peak_reduced, ls_generators, whitehead_valid)
from .errors import (InputError, InvariantError, PreconditionError, RaagError, ResourceError,
                     UnsupportedCase)
from .graph import Graph, complete, disjoint_union, edgeless, join, parse_graph, path
from .ia_kernel import (check_presentation_relations, gz_generators, iaut_generators,
                        kz_generators, verify_rewriting_identities)
from .qreduce import q_reduce, relabel_basis
from .stabilizer import (build_delta, centralizer_surface_relator, maximal_tree,
                         mod_generators, stabilizer_generators)
from .symplectic import (SymplecticStructure, WedgeForm, enumerate_q_generators,
                         f_of_surface_relator, preserves_structure, validate_structure,
                         wedge_act)
from .words import (conjugacy_length, cyclic_canonical, is_surface_relator, multiply,
                    normalize, support)

__version__ = "0.1.0"
