"""Exact workbench for graph-algebra verification: rational sparse linear
algebra, directed-graph constructions, magic unitaries and their
commutants, Cuntz-Krieger families with windowed truncations, and
Hopf-style axiom suites on finite models."""

from .cuntz_krieger import (AffineRule, CKFamily, CKMatrixReport, CKReport,
                            ClaimParams, CuntzReport, FiniteBacking,
                            PatternOperator, TruncatedBacking,
                            claim_params_matching_published, derive_projections,
                            family_Pi2_infinite, family_Pi_n_claim,
                            family_pi2_finite, family_pi2_infinite,
                            family_pi_n_finite, family_pi_n_infinite,
                            generated_dimension, verify_ck, verify_ck_matrix,
                            verify_cuntz)
from .exact_linalg import (DimensionMismatch, RowReducer, Scalar, SparseMat,
                           TensorElement, exact_rank, nullspace, span_closure)
from .hopf_verify import (AxiomReport, ClusterResolutionError,
                          CointegralReport, ComultiplicationCandidate,
                          CorepresentationReport, DiscreteQGReport,
                          FunctionAlgebra, GaloisReport, GroupAlgebra,
                          GroupRingDescriptor, MagicElementReport,
                          MatrixUnitAlgebra, NotSemisimpleError, StarAlgebra,
                          artin_wedderburn, check_T1_T2, check_axioms,
                          coassociativity_at_points, cyclic_group_algebra,
                          discrete_qg_check, find_cointegral,
                          fundamental_matrix, group_ring_descriptor,
                          involution_of, literal_delta, magic_element_report,
                          std_model, structure_constants_of,
                          symmetric_group_algebra, verify_corepresentation)
from .magic_unitary import (BlockMagicUnitary, CommutantResult, MagicReport,
                            ScalarMagicUnitary, commuting_magic_unitaries,
                            is_orthogonal_biunitary, pi_n, verify_magic)
from .quantum_graph import (DirectedGraph, adjacency_matrix, build_pi_graph,
                            build_relation_graph, edge_matrix, entry_degree,
                            exit_degree, graph_union, line_graph, sinks,
                            sources, to_dot, vertex_label)
from .verdict import Verdict

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
