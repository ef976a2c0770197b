import math
import random

import numpy as np
import pytest

from adsorbit.hyperbolic import (
    H_I,
    MOBIUS_IDENTITY,
    HPoint,
    UnsupportedRangeError,
    ads_coords,
    ads_orbit_norm,
    ball_volume,
    coords_to_mobius,
    mobius_apply,
    mobius_compose,
    mobius_det,
    mobius_from_floats,
    mobius_inverse,
    point_norm,
    pseudo_norm,
)
from adsorbit.numerics import (
    SLR_ZERO,
    log_sum_exp,
    slr,
    slr_from_float,
    slr_to_float,
)
from helpers import (
    diag_mobius,
    entry_floats,
    random_mobius,
    random_quadric_coords,
    tau_floats,
)


def test_compose_with_identity():
    rng = random.Random(1)
    g = random_mobius(rng)
    assert entry_floats(mobius_compose(g, MOBIUS_IDENTITY)) == pytest.approx(
        entry_floats(g), rel=1e-15
    )
    assert entry_floats(mobius_compose(MOBIUS_IDENTITY, g)) == pytest.approx(
        entry_floats(g), rel=1e-15
    )


def test_rotation_squares_to_minus_identity():
    rot = tau_floats(0.0, 0.0, 1.0)
    assert entry_floats(rot) == pytest.approx([0.0, -1.0, 1.0, 0.0])
    sq = mobius_compose(rot, rot)
    assert entry_floats(sq) == pytest.approx([-1.0, 0.0, 0.0, -1.0])


def test_compose_matches_double_product():
    rng = random.Random(2)
    for _ in range(500):
        g = random_mobius(rng)
        h = random_mobius(rng)
        got = entry_floats(mobius_compose(g, h))
        expected = (np.array(entry_floats(g)).reshape(2, 2)
                    @ np.array(entry_floats(h)).reshape(2, 2)).ravel()
        for gv, ev in zip(got, expected):
            assert math.isclose(gv, ev, rel_tol=1e-12) or abs(gv - ev) <= 1e-12 * max(
                abs(x) for x in expected
            )


def test_inverse_composes_to_identity():
    rng = random.Random(3)
    for _ in range(200):
        g = random_mobius(rng)
        gi = mobius_inverse(g)
        prod = mobius_compose(g, gi)
        assert entry_floats(prod) == pytest.approx([1.0, 0.0, 0.0, 1.0], abs=1e-12)


def test_determinant_stays_normalized_along_chains():
    rng = random.Random(4)
    g = MOBIUS_IDENTITY
    for _ in range(200):
        g = mobius_compose(g, random_mobius(rng, 1.2))
        det = mobius_det(g)
        assert det.sign == 1
        assert abs(det.logmag) < 1e-9


def test_apply_identity_fixes_points():
    z = HPoint(slr_from_float(0.7), slr_from_float(2.5))
    w = mobius_apply(MOBIUS_IDENTITY, z)
    assert slr_to_float(w.re) == pytest.approx(0.7, rel=1e-14)
    assert slr_to_float(w.im) == pytest.approx(2.5, rel=1e-14)


def test_apply_circle_transport():
    # tau(x1, x2, u) sends the top of the u-circle at x1 to the top of the
    # u-circle at x2.
    for x1, x2, u in [(0.0, 0.0, 1.0), (3.0, 7.0, 0.5), (-2.0, 11.0, 4.0)]:
        t = tau_floats(x1, x2, u)
        z = HPoint(slr_from_float(x1) if x1 else SLR_ZERO, slr_from_float(u))
        w = mobius_apply(t, z)
        assert slr_to_float(w.re) == pytest.approx(x2, abs=1e-12 * max(1.0, abs(x2)))
        assert slr_to_float(w.im) == pytest.approx(u, rel=1e-12)


def test_apply_inversion_of_2i():
    w = mobius_apply(tau_floats(0.0, 0.0, 1.0), HPoint(SLR_ZERO, slr_from_float(2.0)))
    assert slr_to_float(w.re) == 0.0
    assert slr_to_float(w.im) == pytest.approx(0.5, rel=1e-14)


def test_apply_respects_composition():
    rng = random.Random(5)
    for _ in range(300):
        g = random_mobius(rng)
        h = random_mobius(rng)
        z = HPoint(slr_from_float(rng.uniform(-3, 3)), slr_from_float(rng.uniform(0.1, 4)))
        lhs = mobius_apply(mobius_compose(g, h), z)
        rhs = mobius_apply(g, mobius_apply(h, z))
        assert slr_to_float(lhs.im) == pytest.approx(slr_to_float(rhs.im), rel=1e-9)
        lre, rre = slr_to_float(lhs.re), slr_to_float(rhs.re)
        assert math.isclose(lre, rre, rel_tol=1e-9) or abs(lre - rre) < 1e-9


def test_apply_respects_composition_log_range():
    # Same property with generator-scale matrices (entries around e^(e^5)).
    big = slr(1, math.exp(5.0))
    bigger = slr(1, math.exp(5.5))
    t1 = _tau_slr(big, bigger, slr_from_float(1.0))
    t2 = _tau_slr(bigger, big, slr_from_float(2.0))
    z = HPoint(slr_from_float(0.5), slr_from_float(1.0))
    lhs = mobius_apply(mobius_compose(t1, t2), z)
    rhs = mobius_apply(t1, mobius_apply(t2, z))
    assert lhs.im.sign == 1 and rhs.im.sign == 1
    assert lhs.im.logmag == pytest.approx(rhs.im.logmag, abs=1e-9)
    assert lhs.re.sign == rhs.re.sign
    assert lhs.re.logmag == pytest.approx(rhs.re.logmag, abs=1e-9)


def _tau_slr(x1, x2, u):
    from adsorbit.family import tau

    return tau(x1, x2, u)


def test_pseudo_norm_identity():
    assert pseudo_norm(MOBIUS_IDENTITY) == 0.0


@pytest.mark.parametrize("t", [10.0, 100.0, 1e6])
def test_pseudo_norm_diagonal(t):
    # Tr(g^T g) = e^t + e^-t = 2 cosh t, so the norm is exactly t.
    assert pseudo_norm(diag_mobius(t)) == pytest.approx(t, abs=1e-9)


def test_pseudo_norm_huge_entries():
    # One entry dominates: log Tr = 2 * max logmag + o(1); the norm is
    # arccosh(Tr/2) = log Tr in the asymptotic branch.
    big = slr(1, math.exp(20.0))
    bigger = slr(1, math.exp(20.5))
    g = _tau_slr(big, bigger, slr_from_float(1.0))
    log_tr = log_sum_exp([2.0 * v.logmag for v in g.entries() if v.sign])
    assert pseudo_norm(g) == pytest.approx(log_tr, rel=1e-12)
    assert math.isfinite(pseudo_norm(g))


def test_pseudo_norm_inverse_invariant():
    rng = random.Random(6)
    for _ in range(10_000):
        g = random_mobius(rng)
        assert pseudo_norm(g) == pytest.approx(pseudo_norm(mobius_inverse(g)), abs=1e-9)


def test_point_norm_at_i():
    assert point_norm(H_I) == 0.0


def test_point_norm_2i():
    # (0 + 4 + 1)/2 = 2.5 = 2 cosh d, so d = arccosh(1.25) = log 2.
    assert point_norm(HPoint(SLR_ZERO, slr_from_float(2.0))) == pytest.approx(
        math.log(2.0), rel=1e-12
    )


def test_point_norm_agrees_with_pseudo_norm():
    rng = random.Random(7)
    for _ in range(10_000):
        g = random_mobius(rng)
        assert point_norm(mobius_apply(g, H_I)) == pytest.approx(
            pseudo_norm(g), abs=1e-9
        )


def test_orbit_norm_trivials():
    rng = random.Random(8)
    x = random_mobius(rng)
    assert ads_orbit_norm(MOBIUS_IDENTITY, MOBIUS_IDENTITY, x) == pytest.approx(
        pseudo_norm(x), rel=1e-12, abs=1e-12
    )
    for _ in range(50):
        g = random_mobius(rng)
        assert ads_orbit_norm(g, g, MOBIUS_IDENTITY) <= 1e-6


def test_orbit_norm_reverse_triangle():
    rng = random.Random(9)
    for _ in range(10_000):
        g1, g2, x = (random_mobius(rng) for _ in range(3))
        lhs = ads_orbit_norm(g1, g2, x)
        rhs = abs(pseudo_norm(g1) - pseudo_norm(g2)) - pseudo_norm(x)
        assert lhs >= rhs - 1e-9


def test_ball_volume():
    assert ball_volume(0.0) == 0.0
    # Direct-evaluation oracle: pi^2 (cosh 1 - 1).
    expected = math.pi ** 2 * (math.cosh(1.0) - 1.0)
    assert expected == pytest.approx(5.3599914598148865, rel=1e-12)
    assert ball_volume(1.0) == pytest.approx(expected, rel=1e-12)
    radii = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0]
    vols = [ball_volume(r) for r in radii]
    assert all(v2 > v1 for v1, v2 in zip(vols, vols[1:]))
    with pytest.raises(ValueError):
        ball_volume(-0.1)


def test_ads_coords_identity():
    assert ads_coords(MOBIUS_IDENTITY) == pytest.approx((1.0, 0.0, 0.0, 0.0))


def test_ads_coords_rotation():
    # tau(0,0,1) = ((0,-1),(1,0)): solving the linear system gives (0,-1,0,0).
    assert ads_coords(tau_floats(0.0, 0.0, 1.0)) == pytest.approx((0.0, -1.0, 0.0, 0.0))


def test_ads_coords_round_trip():
    rng = random.Random(10)
    for _ in range(10_000):
        x = random_quadric_coords(rng)
        g = coords_to_mobius(x)
        y = ads_coords(g)
        assert y == pytest.approx(x, rel=1e-12, abs=1e-12)


def test_ads_coords_range_guard():
    g = diag_mobius(2000.0)
    with pytest.raises(UnsupportedRangeError):
        ads_coords(g)


def test_coords_off_quadric_rejected():
    from adsorbit.hyperbolic import AdSCoords

    with pytest.raises(ValueError):
        coords_to_mobius(AdSCoords(1.1, 0.0, 0.0, 0.0))


def test_quadric_cosh_identity():
    rng = random.Random(11)
    for _ in range(5_000):
        x = random_quadric_coords(rng)
        g = coords_to_mobius(x)
        lhs = 2.0 * (x.x1 ** 2 + x.x2 ** 2) - 1.0
        assert lhs == pytest.approx(math.cosh(pseudo_norm(g)), rel=1e-9)
