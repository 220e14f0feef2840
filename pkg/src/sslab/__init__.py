"""Subset Sum and k-SUM solver laboratory."""
from .core import (
    KSumInstance,
    OracleRefused,
    SolutionCertificate,
    SubsetSumInstance,
    dp_oracle,
    generate_instance,
    verify_certificate,
)
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "KSumInstance",
    "OracleRefused",
    "SolutionCertificate",
    "SubsetSumInstance",
    "dp_oracle",
    "generate_instance",
    "verify_certificate",
]
