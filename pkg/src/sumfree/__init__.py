"""Sum-free integer sets with a forbidden sum: exact enumeration, structure
maps, cyclic-group census, and brute-force verification oracles."""

__version__ = "0.1.0"

from .core import (
    BUILTIN_PROFILE_IDS,
    ConfigCount,
    ConstraintProfile,
    IntSet,
    SumsetResult,
    count_forbidden_k_subsets,
    is_sum_free,
    k_fold_sumset,
    outside_top_third,
    profile_for,
    satisfies,
    sigma_contains,
    sumset,
    top_third_interval,
)
from .engine import (
    DEFAULT_NODE_BUDGET,
    CensusMismatchError,
    CensusRecord,
    EnumTask,
    MaxResult,
    NodeBudgetExceeded,
    StreamSummary,
    census,
    count_admissible,
    enumerate_admissible,
    max_admissible,
)
from .structures import (
    ClosedSet,
    CorrespondenceReport,
    SpecialSet,
    closed_to_special,
    enumerate_closed,
    enumerate_t_special,
    is_closed_under_addition,
    is_t_special,
    special_to_closed,
    sum_free_projection,
    verify_correspondences,
)
from .cyclic import (
    PrimeParams,
    ZpCensusRow,
    ZpSet,
    canonical_form,
    dilate,
    dilation_orbit,
    find_small_zero_sum,
    is_complete,
    is_sum_free_zp,
    is_symmetric,
    scsf_census,
    scsf_members,
    standard_symmetric_set,
)
from .oracles import (
    FreimanResult,
    StabilityProbe,
    StructureReport,
    classify_large_sum_free,
    count_partitions_distinct,
    freiman_ap_check,
    naive_count,
    stability_probe,
    sumset_bound_check,
)
from .store import ResultsStore, export_census_csv

__all__ = [
    "__version__",
    # core
    "BUILTIN_PROFILE_IDS",
    "ConfigCount",
    "ConstraintProfile",
    "IntSet",
    "SumsetResult",
    "count_forbidden_k_subsets",
    "is_sum_free",
    "k_fold_sumset",
    "outside_top_third",
    "profile_for",
    "satisfies",
    "sigma_contains",
    "sumset",
    "top_third_interval",
    # engine
    "DEFAULT_NODE_BUDGET",
    "CensusMismatchError",
    "CensusRecord",
    "EnumTask",
    "MaxResult",
    "NodeBudgetExceeded",
    "StreamSummary",
    "census",
    "count_admissible",
    "enumerate_admissible",
    "max_admissible",
    # structures
    "ClosedSet",
    "CorrespondenceReport",
    "SpecialSet",
    "closed_to_special",
    "enumerate_closed",
    "enumerate_t_special",
    "is_closed_under_addition",
    "is_t_special",
    "special_to_closed",
    "sum_free_projection",
    "verify_correspondences",
    # cyclic
    "PrimeParams",
    "ZpCensusRow",
    "ZpSet",
    "canonical_form",
    "dilate",
    "dilation_orbit",
    "find_small_zero_sum",
    "is_complete",
    "is_sum_free_zp",
    "is_symmetric",
    "scsf_census",
    "scsf_members",
    "standard_symmetric_set",
    # oracles
    "FreimanResult",
    "StabilityProbe",
    "StructureReport",
    "classify_large_sum_free",
    "count_partitions_distinct",
    "freiman_ap_check",
    "naive_count",
    "stability_probe",
    "sumset_bound_check",
    # store
    "ResultsStore",
    "export_census_csv",
]
