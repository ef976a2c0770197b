"""Shared construction helpers for the test suite."""

import math
import random

from adsorbit.hyperbolic import AdSCoords, Mobius, ads_coords, mobius_from_floats
from adsorbit.numerics import SLR_ZERO, slr, slr_from_float


def random_mobius(rng: random.Random, scale: float = 2.0) -> Mobius:
    """Random SL2(R) matrix with entries of order `scale` (double range)."""
    while True:
        a = rng.uniform(-scale, scale)
        b = rng.uniform(-scale, scale)
        c = rng.uniform(-scale, scale)
        if abs(a) > 1e-3:
            d = (1.0 + b * c) / a
            if abs(d) < 1e6:
                return mobius_from_floats(a, b, c, d)


def random_quadric_coords(rng: random.Random, scale: float = 2.0) -> AdSCoords:
    return ads_coords(random_mobius(rng, scale))


def tau_floats(x1: float, x2: float, u: float) -> Mobius:
    """tau(x1, x2, u) built in plain doubles (small-parameter tests only)."""
    return mobius_from_floats(x2 / u, -(x1 * x2 + u * u) / u, 1.0 / u, -x1 / u)


def slr_exp_of_exp(k: float) -> "slr":
    """The value e^(e^k) as a SignedLogReal."""
    return slr(1, math.exp(k))


def diag_mobius(t: float) -> Mobius:
    """diag(e^(t/2), e^(-t/2)) for arbitrary t, built directly in log space."""
    return Mobius(slr(1, t / 2.0), SLR_ZERO, SLR_ZERO, slr(1, -t / 2.0), 0)


def mobius_close_to_identity(g: Mobius, tol: float = 1e-9) -> bool:
    from adsorbit.numerics import slr_to_float

    a, b, c, d = (slr_to_float(v) for v in g.entries())
    return (
        abs(a - 1.0) <= tol and abs(b) <= tol and abs(c) <= tol and abs(d - 1.0) <= tol
    )


def entry_floats(g: Mobius):
    from adsorbit.numerics import slr_to_float

    return [slr_to_float(v) for v in g.entries()]
