"""Equal-or-better probabilities for judging whether a result is skill or chance."""

from .errors import (
    BudgetExceededError,
    ChanceCheckError,
    ConflictError,
    DomainError,
    NotFoundError,
    ParseError,
)
from .ledger import ALL, AttemptRecord, Ledger
from .montecarlo import ReplicateModel, derive_replicate_seed, estimate_equal_or_better, run_replicates
from .probability import (
    best_of_m,
    binom_cdf,
    binom_pmf,
    binom_sf,
    combine_results,
    intersect,
    wilson_interval,
)

__version__ = "0.1.0"
