"""Upper half-plane points, Mobius actions, and pseudo-ball geometry on AdS^3.

AdS^3 is realized as SL2(R) inside 2x2 matrices with the -det form; the
pseudo-norm of x is the hyperbolic distance from pi(x) to i under the bundle
projection to H^2.  All matrix entries are SignedLogReal so the geometry
survives entries of size e^(e^k).
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .numerics import (
    SLR_ONE,
    SLR_ZERO,
    SignedLogReal,
    arccosh_stable,
    log_sum_exp,
    slr,
    slr_add,
    slr_cmp,
    slr_from_float,
    slr_mul,
    slr_neg,
    slr_to_float,
)

__all__ = [
    "HPoint",
    "Mobius",
    "AdSCoords",
    "UnsupportedRangeError",
    "MOBIUS_IDENTITY",
    "H_I",
    "mobius",
    "mobius_from_floats",
    "mobius_det",
    "mobius_compose",
    "mobius_inverse",
    "mobius_apply",
    "pseudo_norm",
    "point_norm",
    "ads_orbit_norm",
    "ball_volume",
    "ads_coords",
    "coords_to_mobius",
]

_LOG2 = math.log(2.0)

# Relative determinant tolerance in log space, and the composition-chain
# length after which entries are renormalized by sqrt(det) to stop drift.
_DET_LOG_TOL = 1e-9
_RENORM_CHAIN = 32

# Entries with |logmag| beyond this cannot be converted to doubles.
_DOUBLE_LOG_RANGE = 709.0


class UnsupportedRangeError(ValueError):
    """A value left the double-representable range required by this operation."""


class HPoint(NamedTuple):
    """Point re + i*im of the upper half-plane; im must be positive."""

    re: SignedLogReal
    im: SignedLogReal


H_I = HPoint(SLR_ZERO, SLR_ONE)


class Mobius(NamedTuple):
    """Row-major 2x2 real matrix of unit determinant over SignedLogReal.

    ``chain`` counts compositions since the last determinant renormalization;
    it is bookkeeping, not part of the value (ignored by comparisons that
    matter, which go through the entries).
    """

    a: SignedLogReal
    b: SignedLogReal
    c: SignedLogReal
    d: SignedLogReal
    chain: int = 0

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def to_json(self) -> dict:
        return {k: v.to_json() for k, v in zip("abcd", self.entries())}


MOBIUS_IDENTITY = Mobius(SLR_ONE, SLR_ZERO, SLR_ZERO, SLR_ONE)


class AdSCoords(NamedTuple):
    """Quadric coordinates (x1, x2, x3, x4) with x1^2+x2^2-x3^2-x4^2 = 1.

    Double-range only; use Mobius for anything that can leave it.
    """

    x1: float
    x2: float
    x3: float
    x4: float


def mobius_det(g: Mobius) -> SignedLogReal:
    return slr_add(slr_mul(g.a, g.d), slr_neg(slr_mul(g.b, g.c)))


def _renormalize(a, b, c, d) -> Mobius:
    det = slr_add(slr_mul(a, d), slr_neg(slr_mul(b, c)))
    if det.sign != 1:
        raise ArithmeticError("matrix determinant lost positivity; cannot renormalize")
    half = det.logmag / 2.0
    if half == 0.0:
        return Mobius(a, b, c, d, 0)
    return Mobius(
        SignedLogReal(a.sign, a.logmag - half) if a.sign else SLR_ZERO,
        SignedLogReal(b.sign, b.logmag - half) if b.sign else SLR_ZERO,
        SignedLogReal(c.sign, c.logmag - half) if c.sign else SLR_ZERO,
        SignedLogReal(d.sign, d.logmag - half) if d.sign else SLR_ZERO,
        0,
    )


def mobius(a: SignedLogReal, b: SignedLogReal, c: SignedLogReal, d: SignedLogReal) -> Mobius:
    """Construct and validate: det must equal 1 to 1e-9 relative in log space."""
    det = slr_add(slr_mul(a, d), slr_neg(slr_mul(b, c)))
    if det.sign != 1 or abs(det.logmag) > _DET_LOG_TOL:
        raise ValueError(f"determinant is not 1 within tolerance: sign={det.sign} "
                         f"logmag={det.logmag!r}")
    return Mobius(a, b, c, d, 0)


def mobius_from_floats(a: float, b: float, c: float, d: float) -> Mobius:
    return mobius(*(slr_from_float(v) if v != 0.0 else SLR_ZERO for v in (a, b, c, d)))


def mobius_compose(g: Mobius, h: Mobius) -> Mobius:
    """Matrix product g*h; renormalizes by sqrt(det) every 32 compositions."""
    a = slr_add(slr_mul(g.a, h.a), slr_mul(g.b, h.c))
    b = slr_add(slr_mul(g.a, h.b), slr_mul(g.b, h.d))
    c = slr_add(slr_mul(g.c, h.a), slr_mul(g.d, h.c))
    d = slr_add(slr_mul(g.c, h.b), slr_mul(g.d, h.d))
    chain = max(g.chain, h.chain) + 1
    if chain > _RENORM_CHAIN:
        return _renormalize(a, b, c, d)
    return Mobius(a, b, c, d, chain)


def mobius_inverse(g: Mobius) -> Mobius:
    """Adjugate inverse ((d,-b),(-c,a)): exact under unit determinant."""
    return Mobius(g.d, slr_neg(g.b), slr_neg(g.c), g.a, g.chain)


def mobius_apply(g: Mobius, z: HPoint) -> HPoint:
    """Fractional-linear action (az+b)/(cz+d), entirely in log arithmetic.

    The imaginary part is im(z)/|cz+d|^2 (unit determinant), so positivity
    is preserved exactly.
    """
    if z.im.sign != 1:
        raise ValueError("HPoint must lie in the open upper half-plane")
    nre = slr_add(slr_mul(g.a, z.re), g.b)
    nim = slr_mul(g.a, z.im)
    dre = slr_add(slr_mul(g.c, z.re), g.d)
    dim = slr_mul(g.c, z.im)
    den = slr_add(slr_sq_pos(dre), slr_sq_pos(dim))
    if den.sign != 1:
        raise ArithmeticError("|cz+d| vanished for im(z) > 0")
    wre = slr_add(slr_mul(nre, dre), slr_mul(nim, dim))
    return HPoint(
        SignedLogReal(wre.sign, wre.logmag - den.logmag) if wre.sign else SLR_ZERO,
        SignedLogReal(z.im.sign, z.im.logmag - den.logmag),
    )


def slr_sq_pos(v: SignedLogReal) -> SignedLogReal:
    return SignedLogReal(1, 2.0 * v.logmag) if v.sign else SLR_ZERO


def pseudo_norm(g: Mobius) -> float:
    """d >= 0 with 2*cosh(d) = a^2+b^2+c^2+d^2, computed fully in log space."""
    log_tr = log_sum_exp([2.0 * v.logmag for v in g.entries() if v.sign])
    return arccosh_stable(SignedLogReal(1, log_tr - _LOG2))


def point_norm(z: HPoint) -> float:
    """Hyperbolic distance from z to i via 2*cosh(d) = (u^2+v^2+1)/v."""
    if z.im.sign != 1:
        raise ValueError("HPoint must lie in the open upper half-plane")
    log_num = log_sum_exp([2.0 * z.re.logmag if z.re.sign else -math.inf,
                           2.0 * z.im.logmag, 0.0])
    return arccosh_stable(SignedLogReal(1, log_num - z.im.logmag - _LOG2))


def ads_orbit_norm(g1: Mobius, g2: Mobius, x: Mobius) -> float:
    """Pseudo-norm of the isometry image: ||g1 * x * g2^{-1}||."""
    return pseudo_norm(mobius_compose(mobius_compose(g1, x), mobius_inverse(g2)))


def ball_volume(R: float) -> float:
    """Volume pi^2 (cosh R - 1) of the pseudo-ball of radius R."""
    if R < 0:
        raise ValueError(f"radius must be nonnegative, got {R!r}")
    # 2*sinh(R/2)^2 = cosh(R) - 1, accurate near 0.
    return math.pi ** 2 * 2.0 * math.sinh(R / 2.0) ** 2


def ads_coords(g: Mobius) -> AdSCoords:
    """Linear change to quadric coordinates; double-range entries only."""
    for v in g.entries():
        if v.sign and abs(v.logmag) > _DOUBLE_LOG_RANGE:
            raise UnsupportedRangeError(
                f"entry logmag {v.logmag!r} exceeds the double range")
    a, b, c, d = (slr_to_float(v) for v in g.entries())
    return AdSCoords((a + d) / 2.0, (b - c) / 2.0, (b + c) / 2.0, (a - d) / 2.0)


def coords_to_mobius(x: AdSCoords) -> Mobius:
    q = x.x1 * x.x1 + x.x2 * x.x2 - x.x3 * x.x3 - x.x4 * x.x4
    scale = max(1.0, x.x1 * x.x1, x.x2 * x.x2, x.x3 * x.x3, x.x4 * x.x4)
    if abs(q - 1.0) > 1e-10 * scale:
        raise ValueError(f"point is off the quadric: x1^2+x2^2-x3^2-x4^2 = {q!r}")
    m = Mobius(
        _slr_of(x.x1 + x.x4), _slr_of(x.x2 + x.x3),
        _slr_of(-x.x2 + x.x3), _slr_of(x.x1 - x.x4), 0,
    )
    return m


def _slr_of(v: float) -> SignedLogReal:
    return slr_from_float(v) if v != 0.0 else SLR_ZERO


def cosh_pseudo_norm_log(g: Mobius) -> float:
    """log(cosh ||g||) without forming the norm; handy for modulus laws."""
    log_tr = log_sum_exp([2.0 * v.logmag for v in g.entries() if v.sign])
    return log_tr - _LOG2
