"""Sign/log-magnitude scalars and overflow-proof special functions.

Every real quantity in this package is carried as a sign together with the
natural log of its magnitude, so that values like e^(e^20) stay exactly as
representable as 2.5.  All operations are pure; values are immutable.
"""

from __future__ import annotations

import math
from typing import NamedTuple

__all__ = [
    "SignedLogReal",
    "SLR_ZERO",
    "SLR_ONE",
    "SLR_MINUS_ONE",
    "slr",
    "slr_from_float",
    "slr_to_float",
    "slr_add",
    "slr_sub",
    "slr_neg",
    "slr_mul",
    "slr_div",
    "slr_cmp",
    "slr_sq",
    "slr_sum",
    "log_two_cosh",
    "arccosh_stable",
]

# Opposite-sign addends whose logmags differ by less than this collapse to
# exact zero: the lost digits are below every downstream tolerance, and a
# silent denormal would poison later logs.
_CANCEL_EPS = 1e-13

# Above this log-magnitude, 2*cosh(x) and x + sqrt(x^2-1) collapse to their
# leading exponential term at double precision.
_ASYMPTOTIC_LOG = 40.0

_LOG2 = math.log(2.0)


class SignedLogReal(NamedTuple):
    """A real number as (sign, log|value|); sign 0 pairs with logmag -inf."""

    sign: int
    logmag: float

    def to_float(self) -> float:
        return slr_to_float(self)

    def to_json(self) -> dict:
        return {"sign": self.sign, "logmag": self.logmag}


SLR_ZERO = SignedLogReal(0, -math.inf)
SLR_ONE = SignedLogReal(1, 0.0)
SLR_MINUS_ONE = SignedLogReal(-1, 0.0)


def slr(sign: int, logmag: float) -> SignedLogReal:
    """Construct with normalization: sign 0 forces logmag -inf and vice versa."""
    if sign == 0 or logmag == -math.inf:
        return SLR_ZERO
    if sign not in (-1, 1):
        raise ValueError(f"sign must be -1, 0, or +1, got {sign}")
    if math.isnan(logmag):
        raise ValueError("logmag must not be NaN")
    return SignedLogReal(sign, logmag)


def slr_from_float(x: float) -> SignedLogReal:
    if x == 0.0:
        return SLR_ZERO
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"cannot represent {x!r}")
    return SignedLogReal(1 if x > 0 else -1, math.log(abs(x)))


def slr_to_float(a: SignedLogReal) -> float:
    """Convenience conversion; overflows to +-inf, underflows to 0.0."""
    if a.sign == 0:
        return 0.0
    try:
        m = math.exp(a.logmag)
    except OverflowError:
        m = math.inf
    return m if a.sign > 0 else -m


def slr_neg(a: SignedLogReal) -> SignedLogReal:
    return SignedLogReal(-a.sign, a.logmag)


def _log1mexp(d: float) -> float:
    # log(1 - e^d) for d < 0, stable on both ends.
    if d > -_LOG2:
        return math.log(-math.expm1(d))
    return math.log1p(-math.exp(d))


def slr_add(a: SignedLogReal, b: SignedLogReal) -> SignedLogReal:
    """a + b via log-sum-exp on the larger magnitude; exact cancellation -> 0."""
    sa, la = a
    sb, lb = b
    if sa == 0:
        return b
    if sb == 0:
        return a
    if sa == sb:
        if la >= lb:
            return SignedLogReal(sa, la + math.log1p(math.exp(lb - la)))
        return SignedLogReal(sa, lb + math.log1p(math.exp(la - lb)))
    # Opposite signs: the larger magnitude wins.
    if la > lb:
        hi, lo, s = la, lb, sa
    elif lb > la:
        hi, lo, s = lb, la, sb
    else:
        return SLR_ZERO
    if hi - lo < _CANCEL_EPS:
        return SLR_ZERO
    return SignedLogReal(s, hi + _log1mexp(lo - hi))


def slr_sub(a: SignedLogReal, b: SignedLogReal) -> SignedLogReal:
    return slr_add(a, slr_neg(b))


def slr_mul(a: SignedLogReal, b: SignedLogReal) -> SignedLogReal:
    s = a.sign * b.sign
    if s == 0:
        return SLR_ZERO
    return SignedLogReal(s, a.logmag + b.logmag)


def slr_div(a: SignedLogReal, b: SignedLogReal) -> SignedLogReal:
    if b.sign == 0:
        raise ZeroDivisionError("SignedLogReal division by zero")
    if a.sign == 0:
        return SLR_ZERO
    return SignedLogReal(a.sign * b.sign, a.logmag - b.logmag)


def slr_sq(a: SignedLogReal) -> SignedLogReal:
    if a.sign == 0:
        return SLR_ZERO
    return SignedLogReal(1, 2.0 * a.logmag)


def slr_cmp(a: SignedLogReal, b: SignedLogReal) -> int:
    """-1, 0, +1 as a <, =, > b.  Exact lexicographic order, no tolerance."""
    if a.sign != b.sign:
        return -1 if a.sign < b.sign else 1
    if a.sign == 0 or a.logmag == b.logmag:
        return 0
    if a.sign > 0:
        return -1 if a.logmag < b.logmag else 1
    return 1 if a.logmag < b.logmag else -1


def slr_sum(values) -> SignedLogReal:
    acc = SLR_ZERO
    for v in values:
        acc = slr_add(acc, v)
    return acc


def log_sum_exp(logs) -> float:
    """log(sum of e^l) over finite or -inf entries, stable."""
    m = max(logs)
    if m == -math.inf:
        return -math.inf
    return m + math.log(sum(math.exp(l - m) for l in logs))


def log_two_cosh(logx: float) -> float:
    """log(2*cosh(x)) for x >= 0 supplied as logx = log(x).

    Uses the exact rewrite log(2*cosh(x)) = x + log1p(e^(-2x)), whose
    correction term underflows for x >= 40 leaving just x.  logx = -inf
    encodes x = 0.  logx > ~709 raises OverflowError: the result equals
    e^logx and no longer fits a double.
    """
    if logx == -math.inf:
        return _LOG2
    x = math.exp(logx)
    return x + math.log1p(math.exp(-2.0 * x))


def arccosh_stable(c: SignedLogReal) -> float:
    """d = log(c + sqrt(c^2 - 1)) for c >= 1, overflow-proof.

    c in [1 - 1e-12, 1) clamps to 0; c < 1 - 1e-12 is a domain error.
    For log c > 40 the asymptotic branch log c + log 2 is exact to well
    below 1e-12 absolute.
    """
    if c.sign <= 0:
        raise ValueError("arccosh_stable requires c >= 1")
    if c.logmag > _ASYMPTOTIC_LOG:
        return c.logmag + _LOG2
    x = math.exp(c.logmag)
    if x < 1.0:
        if x < 1.0 - 1e-12:
            raise ValueError(f"arccosh_stable requires c >= 1, got {x!r}")
        return 0.0
    return math.acosh(x)
