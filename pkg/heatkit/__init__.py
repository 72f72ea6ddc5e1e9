from .models import (
    JacobiParams, CrossFamily, CrossSpace, EvalPolicy, Variant,
    ConstantLedger, GridSpec, VerificationReport, ManifoldBound,
)
from .errors import (
    HeatkitError, DomainError, RefusalError, AccuracyError, CapacityError, ConfigurationError
)
from .kernels import jacobi_kernel, sphere_kernel, cross_kernel
from .pipeline import ConstantPipeline, final_constants, build_ledger
from .bounds import manifold_envelope, sandwich_envelopes
from .verify import VerificationEngine, certify_sandwich, certify_sphere, certify_cross, ratio_profile
from .suites import run_property_suite

__all__ = [
    "JacobiParams", "CrossFamily", "CrossSpace", "EvalPolicy", "Variant",
    "ConstantLedger", "GridSpec", "VerificationReport", "ManifoldBound",
    "HeatkitError", "DomainError", "RefusalError", "AccuracyError", "CapacityError", "ConfigurationError",
    "jacobi_kernel", "sphere_kernel", "cross_kernel",
    "ConstantPipeline", "final_constants", "build_ledger",
    "manifold_envelope", "sandwich_envelopes",
    "VerificationEngine", "certify_sandwich", "certify_sphere", "certify_cross", "ratio_profile",
    "run_property_suite",
]
