"""Incomplete gamma helpers shared by the kernel and operator code.

Conventions: lower_gamma(s, x) = int_0^x u^{s-1} e^{-u} du (s > 0),
upper_gamma(s, x) = int_x^inf u^{s-1} e^{-u} du, extended to negative
non-integer s by the recurrence Gamma(s, x) = (Gamma(s+1, x) - x^s e^{-x}) / s.
reg_lower is the regularized P(s, x) = lower_gamma / Gamma(s).
"""

import numpy as np
from scipy import special as _sp

__all__ = ["lower_gamma", "upper_gamma", "reg_lower"]


def reg_lower(s, x):
    """Regularized lower incomplete gamma P(s, x), s > 0, x >= 0."""
    return _sp.gammainc(s, x)


def lower_gamma(s, x):
    """Lower incomplete gamma, s > 0, x >= 0."""
    return _sp.gamma(s) * _sp.gammainc(s, x)


def upper_gamma(s, x):
    """Upper incomplete gamma for x > 0 and s > -2 (s not 0, -1)."""
    x = np.asarray(x, dtype=float)
    if s > 0:
        return _sp.gamma(s) * _sp.gammaincc(s, x)
    if s == 0.0 or s == -1.0:
        raise ValueError("upper_gamma: recurrence pole at s in {0, -1}")
    return (upper_gamma(s + 1.0, x) - x ** s * np.exp(-x)) / s
