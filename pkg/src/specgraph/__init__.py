"""specgraph: random-graph spectra against their limit laws.

Samplers for G(n,p) and uniform d-regular graphs, an in-repo dense
symmetric eigensolver, closed-form semicircle / Kesten-McKay laws, and
seeded Monte Carlo experiments plus exact identity checks.
"""

from .eigensolve import (
    SpectralDecomposition,
    SymMatrix,
    eigendecompose,
    eigenvalues_only,
    gaussian_perturb,
    normalize_centered_gnp,
    normalize_regular,
    normalize_uncentered_gnp,
    principal_minor,
)
from .errors import (
    DegenerateInput,
    EdgeListParseError,
    NumericFailure,
    SingularInput,
)
from .experiments import (
    EnsembleConfig,
    IdentityReport,
    check_eigvec_entry_identity,
    check_minor_stieltjes_identity,
    check_rank_one_interlacing,
    run_delocalization,
    run_esd_concentration,
    run_isotropy_check,
    run_mckay_convergence,
    run_moment_check,
    run_projection_concentration,
    run_semicircle_convergence,
    run_top_eigen_check,
)
from .graphgen import (
    Graph,
    GraphModel,
    adjacency_matrix,
    complement,
    degree_sequence,
    sample_gnp,
    sample_regular,
)
from .io import (
    derive_trial_seed,
    emit_histogram,
    read_edge_list,
    write_edge_list,
    write_eigenvalues,
    write_report,
)
from .spectral_laws import (
    Esd,
    Interval,
    KestenMcKay,
    LimitLaw,
    Semicircle,
    ThresholdParams,
    count_in_interval,
    delocalization_bound,
    empirical_moment,
    empirical_stieltjes,
    esd_cdf,
    kesten_mckay_density,
    km_normalized_density,
    ks_distance,
    min_interval_length_gnp,
    min_interval_length_regular,
    semicircle_density,
    semicircle_mass,
    semicircle_moment,
    stieltjes_semicircle,
)

__version__ = "0.1.0"
