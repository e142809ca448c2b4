"""Level-process (RSK) statistics and Plancherel-measure tests of the IID property."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .decomposable import (
    PermutationDistribution,
    PrefixConditionalTable,
    ProperDistribution,
    divergences,
    double_proper_dimension,
    kl_to_uniform,
    prefix_conditionals,
    proper_projection,
)
from .models import (
    MCMCConfig,
    ModelSpec,
    permutation_from_two_samples,
    sample_ar1,
    sample_checkerboard,
    sample_exp_family,
    sample_gauss_pair,
    sample_iid,
)
from .plancherel import (
    AcceptanceRegion,
    MomentReport,
    PlancherelRecord,
    acceptance_region,
    acceptance_set,
    exact_moments,
    log_dim_histogram,
    min_h_search,
    plancherel_record,
    sample_shape,
    typical_bins,
)
from .rsk import (
    RealTableau,
    RSKPair,
    insert_value,
    inverse_rsk,
    level_process,
    rsk,
    rsk_shape,
    y_process,
    z_rescale,
)
from .testing import (
    HCalibration,
    PowerTable,
    TestDecision,
    calibrate_h,
    delta_dynamics,
    h_test,
    power_study,
    shape_set_test,
)
from .young import (
    Partition,
    StandardTableau,
    conjugate,
    hook_lengths,
    hook_log_sum,
    log_dim,
    log_factorial,
    partition_count,
    partitions_of,
    standard_tableaux,
    syt_count,
)
