"""Parameter-exploring policy gradients with symmetric and super-symmetric
sampling, plus benchmark objectives and a seeded experiment harness."""

from .config import (
    ConfigError,
    load_grid_search_config,
    load_run_config,
    run_config_from_dict,
    run_config_to_dict,
    save_run_config,
)
from .harness import (
    AggregateStats,
    BatchResult,
    ConvergenceRecord,
    GridSearchResult,
    GridSpec,
    RunConfig,
    ScalingStudyResult,
    aggregate_records,
    default_alpha_grid,
    default_workers,
    evaluation_grid,
    grid_search,
    rng_for_run,
    run_batch,
    run_single,
    scaling_study,
)
from .objectives import OBJECTIVE_FUNCTIONS, Objective, rastrigin, sphere, surface_grid
from .sampling import (
    EPS_FLOOR_FACTOR,
    MEDIAN_OVER_STD,
    MIRROR_C1,
    MIRROR_C2,
    MIRROR_C3,
    Hypothesis,
    SampleQuad,
    draw_perturbation,
    make_quad,
    median_from_std,
    mirror,
    quad_from_eps,
    std_from_median,
)
from .updates import (
    EVALS_PER_UPDATE,
    BaselineState,
    Branch,
    MetaParams,
    UpdateReport,
    Variant,
    apply_update,
    baseline_step,
    eligibility,
    pgpe4smp_update,
    pgpe_update,
    supif_step,
    supsys_update,
    sys_update,
)

__all__ = [
    "AggregateStats",
    "BatchResult",
    "BaselineState",
    "Branch",
    "ConfigError",
    "ConvergenceRecord",
    "EPS_FLOOR_FACTOR",
    "EVALS_PER_UPDATE",
    "GridSearchResult",
    "GridSpec",
    "Hypothesis",
    "MEDIAN_OVER_STD",
    "MIRROR_C1",
    "MIRROR_C2",
    "MIRROR_C3",
    "MetaParams",
    "OBJECTIVE_FUNCTIONS",
    "Objective",
    "RunConfig",
    "SampleQuad",
    "ScalingStudyResult",
    "UpdateReport",
    "Variant",
    "aggregate_records",
    "apply_update",
    "baseline_step",
    "default_alpha_grid",
    "default_workers",
    "draw_perturbation",
    "eligibility",
    "evaluation_grid",
    "grid_search",
    "load_grid_search_config",
    "load_run_config",
    "make_quad",
    "median_from_std",
    "mirror",
    "pgpe4smp_update",
    "pgpe_update",
    "quad_from_eps",
    "rastrigin",
    "rng_for_run",
    "run_batch",
    "run_config_from_dict",
    "run_config_to_dict",
    "run_single",
    "save_run_config",
    "scaling_study",
    "sphere",
    "std_from_median",
    "supif_step",
    "supsys_update",
    "surface_grid",
    "sys_update",
    "__version__",
]

__version__ = "0.1.0"
