"""Exact laws and samplers for Bienaymé-Galton-Watson trees conditioned on
their numbers of vertices and of leaves or internal vertices."""
from .errors import *  # noqa: F401,F403
from .exact import (IntSeqDist, LeafTotals, LeavesMax, MaxProfile, PoissonType, Star, Transfer,
                    TreeDist, bmax, dirichlet_aggregation_moment_check, gamma_ratio_identity_check,
                    limit_reduced, outdegree_sorted_dist, pervertex_leaf_totals, prob_total_leaves,
                    reduced_dist_internal, reduced_dist_leaves)
from .offspring import (Finite, Geometric, OffspringWeights, PolyExp, PowerLaw, StableTail,
                        parse_family, validate_for)
from .sampling import (Overflow, RngStream, SamplerReport, sample_bgw, sample_composition,
                       sample_Dnk, sample_dirichlet, sample_internal_decomps, sample_internal_exact,
                       sample_leaves_cycle, sample_leaves_exact, sample_rejection,
                       sample_uniform_maximal)
from .series import TruncSeries, build_Ga, coeff_ratio_probe
from .trees import (CoreLeafDecomp, LeafAncestorDecomp, LukasiewiczPath, PlaneTree,
                    count_prescribed_degrees, decompose_leaves, decompose_unary, enumerate_trees,
                    first_hitting_time, luka_decode, luka_encode, recompose_leaves,
                    recompose_unary, star)
from .verify import (EmpiricalBatch, SweepTable, chi_square, condensation_stats, ks_against_beta,
                     sweep, tv_empirical, tv_exact)

__version__ = "0.1.0"
