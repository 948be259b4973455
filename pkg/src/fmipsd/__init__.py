"""f-divergence mutual-information matrices: PSD tests, replica embeddings and counterexamples."""

from .dist import (JointDistribution, PairwiseJoint, pair_dependence, pairwise_joint, ratio_table,
                   validate, weak_dependence_radius)
from .errors import (BudgetExhausted, DeltaNotPSD, DomainError, FMIError, InadmissibleFamily,
                     IndexOutOfRange, InfiniteDivergence, NegativeProbability, NormalizationError,
                     NotDifferentiable, NotSymmetric, NumericUnstable, RadiusExceeded, ShapeMismatch,
                     TooLarge, UnknownGenerator, ZeroMarginal)
from .fmi import KernelReport, f_mutual_information, mi_matrix, psd_check
from .forcing import (CounterexampleCertificate, assemble_block, block_spectrum, delta_matrix,
                      kernel_matrix, min_replicas_for_indefiniteness)
from .generators import (ConeVerdict, FGenerator, VerdictKind, catalog, classify, cressie_read,
                         evaluate, from_spec, get_generator, power_series, taylor_at_one)
from .latent import (LatentFamily, diagonal_value, enumerate_full_joint, family_dependence_radius,
                     kernel_value, pairwise_joint_closed_form, paper_preset, replica_pairwise_joint,
                     rho)
from .replica import centered_correlation, mixture_mi, monomial_mi, verify_gram_psd
from .search import SearchConfig, certify, find_counterexample, reproduce_paper_example
from .taylor import (T, CoefficientTable, coefficient_table, empirical_coefficients,
                     predicted_coefficients, verify_T_positivity)

__version__ = "0.1.0"
