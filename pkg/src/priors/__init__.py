# Priors: prior family, A* construction, superharmonicity checks
from .priors import (
    GaussianRidgePrior,
    Prior,
    RadialPrior,
    RescaledSteinPrior,
    SteinPrior,
    UniformPrior,
    log_prior,
)
from .astar import (
    AstarMatrix,
    SuperharmonicityReport,
    build_astar,
    rescaled_stein_identity_check,
    superharmonicity_check,
)
from .prior_spec import PriorSpec, resolve_prior
