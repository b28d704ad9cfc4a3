"""Edge-guided dense depth reconstruction from sparse range samples.

The pipeline couples a data-fidelity term on the samples with a weighted
piecewise-planar regulariser and an edge-derived jump prior, solved by an
ADMM splitting whose subproblems are diagonal, circulant (FFT), or
soft-threshold steps. Hot kernels run in a compiled extension when built,
with a bit-identical numpy fallback selected at import.
"""

from .grid import DepthGrid, IntensityGrid, SparseDepth, devectorize, vectorize
from .kernels import available_backends, backend_name
from .metrics import EvalMask, mae, rmse
from .operators import (
    CirculantSpectrum,
    DiffOperator,
    apply_adjoint,
    apply_first_diff,
    apply_second_diff,
    circulant_solve,
)
from .prior import (
    CannyParams,
    EdgeMask,
    InformingPrior,
    build_prior,
    coarse_upsample,
    detect_edges,
    estimate_jumps,
)
from .simulate import (
    AcquisitionSpec,
    Box,
    SceneSpec,
    Stripe,
    generate_scene,
    random_scene_spec,
    sample_lidar,
)
from .solver import (
    ConvergenceReport,
    NonFiniteIterate,
    SolverConfig,
    SolverState,
    objective,
    run_admm,
    soft_threshold,
    solve,
)
from .weights import WeightMasks, build_weights, identity_weights

__version__ = "0.1.0"

__all__ = [
    "AcquisitionSpec",
    "Box",
    "CannyParams",
    "CirculantSpectrum",
    "ConvergenceReport",
    "DepthGrid",
    "DiffOperator",
    "EdgeMask",
    "EvalMask",
    "InformingPrior",
    "IntensityGrid",
    "NonFiniteIterate",
    "SceneSpec",
    "SolverConfig",
    "SolverState",
    "SparseDepth",
    "Stripe",
    "WeightMasks",
    "apply_adjoint",
    "apply_first_diff",
    "apply_second_diff",
    "available_backends",
    "backend_name",
    "build_prior",
    "build_weights",
    "circulant_solve",
    "coarse_upsample",
    "detect_edges",
    "devectorize",
    "estimate_jumps",
    "generate_scene",
    "identity_weights",
    "mae",
    "objective",
    "random_scene_spec",
    "rmse",
    "run_admm",
    "sample_lidar",
    "soft_threshold",
    "solve",
    "vectorize",
    "__version__",
]
