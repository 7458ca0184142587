"""
Verification suite for the numerical invariants
"""

from .verification import CheckResult, VerificationSuite

__all__ = [
    'CheckResult',
    'VerificationSuite',
]
