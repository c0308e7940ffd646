"""Random simplicial complexes in the multi-parameter upper model."""

from .asymptotics import AsymptoticProfile, asymptotic_profile, exponent_law_check, predicted_counts
from .collapse import (
    CollapseReport,
    GoodnessTable,
    classify_goodness,
    collapse_complex,
    collapse_report,
    collapse_with_deleted_dim,
)
from .complex import (
    Hypergraph,
    SimplicialComplex,
    closure,
    f_vector,
    full_skeleton,
    lower_complex,
    maximal_simplices,
    minimal_missing,
    skeleton,
)
from .homology import HomologyProfile, SparseIntMatrix, boundary_matrix, homology_profile, \
    smith_normal_form
from .lm import FaceChooser, build_face_chooser, modified_complex
from .measure import ProbabilityAssignment, lower_probability, total_measure_check, \
    upper_probability
from .sampler import ModelParams, SampleSeed, g_counts, g_hat, g_prime, sample_hypergraph, \
    weighted_count

__version__ = "0.1.0"
