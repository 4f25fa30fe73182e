"""coklab: exact cokernels of random integer matrices and total sandpile
groups of random digraphs, the closed-form limiting probabilities they
converge to, and reproducible Monte-Carlo experiments comparing the two."""

from .groups import (FiniteAbelianGroup, aut_order, canonicalize, count_homs,
                     count_surjections, factor, is_cyclic, is_squarefree,
                     matches_B_times_cyclic, parse_group, sylow)
from .intmat import (Cokernel, IntMatrix, SNFResult, cokernel, det,
                     format_matrix, parse_matrix, rank_mod_p, rank_over_Q,
                     smith_normal_form)
from .limits import (TolerancedReal, cohen_lenstra_prob, cyclic_prob,
                     heuristic_surjective_mod_p, prodcyc_prob, sandpile_cyclic_prob,
                     sandpile_prob, squarefree_det_prob, sylow_restricted_prob,
                     uniform_fullrank_prob, zeta, zeta_tail_product)
from .randsrc import Rng
from .sampling import (Digraph, EntryDistribution, balance_parameter, laplacian,
                       named_distribution, sample_digraph, sample_matrix,
                       total_sandpile)
from .experiments import (ExperimentResult, ExperimentSpec, classify_cokernel,
                          compare_to_theory, corank_mod_p_estimate,
                          moment_estimate, odlyzko_sanity, run, wilson_interval)

__version__ = "0.1.0"
