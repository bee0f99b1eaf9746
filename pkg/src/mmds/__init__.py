"""Classical and metric-measure multidimensional scaling."""

from .circle import (
    CirculantMatrix,
    FourierMode,
    circle_B_first_row,
    circle_mds_analytic,
    circulant_eigenvalue,
    geodesic_error_series,
    limit_curve_gamma,
    odd_mode_series,
    operator_eigenvalue_circle,
)
from .classical import (
    CenteredGram,
    Embedding,
    classical_mds,
    double_center,
    embedding_distances,
    is_euclidean,
    strain,
    to_neg_half_square,
    weighted_double_center,
)
from .convergence import (
    AlignmentResult,
    ConvergenceReport,
    measure_sequence_experiment,
    perturb_dissimilarities,
    procrustes_align,
    sample_iid,
    sampling_convergence_experiment,
    sibson_stability,
)
from .eigen import SpectralDecomposition, symmetric_eigendecomposition
from .measure import (
    KernelMatrix,
    MeasureEmbedding,
    OperatorSpectrum,
    kernel_KA,
    kernel_KB,
    kernel_KB_hat,
    measure_mds,
    nystrom_extend,
    operator_spectrum,
    operator_strain,
    truncate_spectrum,
)
from .mmspace import (
    DiscreteMeasure,
    DissimilarityMatrix,
    MetricMeasureSpace,
    build_circle_space,
    build_euclidean_space,
    build_sphere_space,
    total_variation,
    validate_dissimilarity,
)

__version__ = "0.1.0"
