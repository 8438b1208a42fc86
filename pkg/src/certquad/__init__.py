"""Certified quadrature: perturbed Ostrowski rules with rigorous error bounds."""

__version__ = "0.1.0"

from .core import (
    CertifiedEstimate,
    Integrand,
    Interval,
    Rule,
    RuleParams,
    SlopeBounds,
    kernel_abs_integral,
    kernel_max,
    peano_kernel,
    secant_slope,
)
from .errors import (
    BudgetExceededError,
    CertQuadError,
    DegenerateIntervalError,
    DomainError,
    InconsistentInputsError,
    SlopeConsistencyError,
)
from .rules import (
    Preset,
    best_rule,
    rule_family,
    rule_lipschitz,
    rule_lower,
    rule_midrange,
    rule_preset,
    rule_upper,
)
from .composite import (
    CompositeCertificate,
    Partition,
    adaptive_partition,
    composite_general,
    composite_lower,
    composite_midrange,
    composite_upper,
)
