"""Sequence families (a1, a2, r, R), generator matrices, and assumption checks.

A family fixes four sequences over integer indices k >= k_min together with a
cutoff nu; the group it generates acts on AdS^3 through the pair of matrices
alpha_k = tau(a1(k), a2(k), r(k)) and beta_k = tau(a1(k), a2(k), R(k)).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .hyperbolic import Mobius, mobius_inverse
from .numerics import (
    SLR_ONE,
    SignedLogReal,
    slr,
    slr_add,
    slr_cmp,
    slr_div,
    slr_from_float,
    slr_mul,
    slr_neg,
    slr_sq,
    slr_to_float,
)

__all__ = [
    "SequenceFamily",
    "AssumptionReport",
    "CalibrationResult",
    "tau",
    "generators",
    "preset",
    "PRESET_NAMES",
    "check_assumptions",
    "build_theorem6_family",
    "calibrate_nu",
    "load_family_file",
    "write_tabulation_csv",
    "load_tabulation_csv",
]


def tau(x1: SignedLogReal, x2: SignedLogReal, u: SignedLogReal) -> Mobius:
    """The inversion-plus-transport matrix (1/u)((x2, -(x1 x2 + u^2)), (1, -x1)).

    Unit determinant holds by construction (the x1*x2 cross terms cancel
    exactly), so no numeric validation is applied; at e^(e^k) scales the
    determinant is not even numerically resolvable.
    """
    if u.sign != 1:
        raise ValueError("tau requires u > 0")
    lu = u.logmag
    a = SignedLogReal(x2.sign, x2.logmag - lu) if x2.sign else slr(0, -math.inf)
    b = slr_neg(slr_div(slr_add(slr_mul(x1, x2), slr_sq(u)), u))
    c = SignedLogReal(1, -lu)
    d = SignedLogReal(-x1.sign, x1.logmag - lu) if x1.sign else slr(0, -math.inf)
    return Mobius(a, b, c, d, 0)


@dataclass(frozen=True)
class SequenceFamily:
    """Four positive-r/R sequences plus the cutoff nu defining the group.

    ``eval_fn`` maps k to the tuple (a1, a2, r, R) of SignedLogReal and must
    be deterministic.  ``log_batch_fn``, when present, maps an integer numpy
    array to the four log-magnitude arrays (valid only where all four values
    are positive) and exists purely as a fast path for long index scans.
    """

    name: str
    k_min: int
    nu: int
    eval_fn: Callable[[int], tuple]
    k_max: Optional[int] = None
    log_batch_fn: Optional[Callable[[np.ndarray], tuple]] = None
    meta: dict = field(default_factory=dict)
    _gen_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def values(self, k: int):
        if k < self.k_min:
            raise ValueError(f"index {k} below family domain start {self.k_min}")
        if self.k_max is not None and k > self.k_max:
            raise ValueError(f"index {k} beyond tabulated bound {self.k_max}")
        a1, a2, r, R = self.eval_fn(k)
        if r.sign != 1 or R.sign != 1:
            raise ValueError(f"family {self.name}: r(k), R(k) must be positive at k={k}")
        return a1, a2, r, R

    def log_ratio_Rr(self, k: int) -> float:
        """log(R(k)/r(k)); positive whenever Assumption r < R holds at k."""
        _, _, r, R = self.values(k)
        return R.logmag - r.logmag

    def with_nu(self, nu: int) -> "SequenceFamily":
        return SequenceFamily(self.name, self.k_min, nu, self.eval_fn,
                              self.k_max, self.log_batch_fn, self.meta)

    def generator_quadruple(self, k: int):
        """(alpha_k, beta_k, alpha_k^-1, beta_k^-1), cached per index."""
        quad = self._gen_cache.get(k)
        if quad is None:
            a1, a2, r, R = self.values(k)
            alpha = tau(a1, a2, r)
            beta = tau(a1, a2, R)
            quad = (alpha, beta, mobius_inverse(alpha), mobius_inverse(beta))
            self._gen_cache[k] = quad
        return quad


def generators(fam: SequenceFamily, k: int) -> tuple[Mobius, Mobius]:
    """The generator pair (alpha_k, beta_k) = (tau(..., r(k)), tau(..., R(k)))."""
    quad = fam.generator_quadruple(k)
    return quad[0], quad[1]


# --- presets ---------------------------------------------------------------
#
# (1) double_exp:        a1 = e^(e^k),  a2 = e^(e^(k+1/2)),  r = 1,        R = e^k
# (2) gueritaud_kassel:  a1 = k^2,      a2 = k^2 + k,        r = 1,        R = log k
# (3) log_slow:          a1 = log k,    a2 = log(k + 1/2),   r = 1/(k^2 log k), R = 1/k^2
#
# Default cutoffs below were fixed by calibrate_nu sweeps (see README) and are
# regression-guarded in the test suite.

PRESET_NU = {"double_exp": 5, "gueritaud_kassel": 50, "log_slow": 10}
PRESET_NAMES = tuple(PRESET_NU)


def _double_exp_eval(k: int):
    return (slr(1, math.exp(k)), slr(1, math.exp(k + 0.5)), SLR_ONE, slr(1, float(k)))


def _double_exp_batch(ks: np.ndarray):
    ks = ks.astype(float)
    return np.exp(ks), np.exp(ks + 0.5), np.zeros_like(ks), ks


def _gueritaud_kassel_eval(k: int):
    return (
        slr(1, 2.0 * math.log(k)),
        slr(1, math.log(k) + math.log1p(1.0 / k) + math.log(k)),
        SLR_ONE,
        slr(1, math.log(math.log(k))),
    )


def _gueritaud_kassel_batch(ks: np.ndarray):
    ks = ks.astype(float)
    lk = np.log(ks)
    return 2.0 * lk, 2.0 * lk + np.log1p(1.0 / ks), np.zeros_like(ks), np.log(lk)


def _log_slow_eval(k: int):
    lk = math.log(k)
    llk = math.log(lk)
    return (
        slr(1, llk),
        slr(1, math.log(math.log(k + 0.5))),
        slr(1, -(2.0 * math.log(k) + llk)),
        slr(1, -2.0 * math.log(k)),
    )


def _log_slow_batch(ks: np.ndarray):
    ks = ks.astype(float)
    lk = np.log(ks)
    llk = np.log(lk)
    return llk, np.log(np.log(ks + 0.5)), -(2.0 * lk + llk), -2.0 * lk


_PRESETS = {
    "double_exp": (1, _double_exp_eval, _double_exp_batch),
    "gueritaud_kassel": (2, _gueritaud_kassel_eval, _gueritaud_kassel_batch),
    "log_slow": (2, _log_slow_eval, _log_slow_batch),
}


def preset(name: str) -> SequenceFamily:
    try:
        k_min, eval_fn, batch_fn = _PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(_PRESETS)}")
    return SequenceFamily(name, k_min, PRESET_NU[name], eval_fn, None, batch_fn)


# --- assumption checking ---------------------------------------------------

class AssumptionReport(NamedTuple):
    checked_range: tuple[int, int]
    assumption1_ok: bool
    first_violation: Optional[tuple[int, str]]
    eta_estimate: SignedLogReal
    ratio_trend: list
    nonsharpness_trend: list

    def to_json(self) -> dict:
        return {
            "checked_range": list(self.checked_range),
            "assumption1_ok": self.assumption1_ok,
            "first_violation": (
                None if self.first_violation is None
                else {"k": self.first_violation[0], "inequality": self.first_violation[1]}
            ),
            "eta_estimate": self.eta_estimate.to_json(),
            "eta_estimate_float": slr_to_float(self.eta_estimate),
            "ratio_trend": [[k, v] for k, v in self.ratio_trend],
            "nonsharpness_trend": [[k, v] for k, v in self.nonsharpness_trend],
        }


def check_assumptions(fam: SequenceFamily, K: int) -> AssumptionReport:
    """Verify the three separation inequalities on [nu, K] and measure eta.

    eta_estimate is the empirical sup of |R(k)/(a_i(k) - a_j(l))| over the
    checked window (k != l when i = j); it is a measured artifact quantity.
    Violations are reported, never raised.
    """
    nu = fam.nu
    if K < nu:
        raise ValueError(f"K={K} must be >= nu={nu}")
    ks = list(range(nu, K + 1))
    vals = {k: fam.values(k) for k in ks}
    if fam.k_max is None or K + 1 <= fam.k_max:
        vals[K + 1] = fam.values(K + 1)

    ok = True
    first_violation = None
    for k in ks:
        a1, a2, r, R = vals[k]
        checks = [
            ("r<R", slr_cmp(r, R) < 0),
            ("a1+R<a2-R", slr_cmp(slr_add(a1, R), slr_add(a2, slr_neg(R))) < 0),
        ]
        if k + 1 in vals:
            a1n, _, _, Rn = vals[k + 1]
            checks.append(
                ("a2+R<a1(k+1)-R(k+1)",
                 slr_cmp(slr_add(a2, R), slr_add(a1n, slr_neg(Rn))) < 0)
            )
        for name, passed in checks:
            if not passed:
                ok = False
                if first_violation is None:
                    first_violation = (k, name)
                break

    # eta: sup over i, j, k, l (k != l when i == j) of |R(k) / (a_i(k) - a_j(l))|
    eta = slr(0, -math.inf)
    for k in ks:
        _, _, _, Rk = vals[k]
        ai_k = (vals[k][0], vals[k][1])
        for l in ks:
            aj_l = (vals[l][0], vals[l][1])
            for i in (0, 1):
                for j in (0, 1):
                    if i == j and k == l:
                        continue
                    denom = slr_add(ai_k[i], slr_neg(aj_l[j]))
                    if denom.sign == 0:
                        continue  # unresolvable difference: ratio unbounded, skip
                    ratio = SignedLogReal(1, Rk.logmag - denom.logmag)
                    if slr_cmp(ratio, eta) > 0:
                        eta = ratio

    ratio_trend = []
    nonsharp_trend = []
    for k in ks:
        a1, a2, r, R = vals[k]
        ratio_trend.append((k, math.exp(min(r.logmag - R.logmag, 700.0))))
        if a1.sign == 1 and a2.sign == 1:
            denom = a1.logmag + a2.logmag - r.logmag
            nonsharp_trend.append((k, (R.logmag - r.logmag) / denom if denom != 0 else math.nan))
        else:
            nonsharp_trend.append((k, math.nan))

    return AssumptionReport((nu, K), ok, first_violation, eta, ratio_trend, nonsharp_trend)


# --- arbitrary-growth families ----------------------------------------------

class ConvexMajorant:
    """Piecewise-quadratic convex C^1 majorant of a tabulated growth target.

    Built inductively on unit intervals [n, n+1]: each piece matches the
    previous value and one-sided slope and bends just enough (quadratic
    coefficient >= 0) to reach the running target f(n+2) + n.  Slopes start
    at 1 and never decrease, so the function is strictly increasing.
    """

    def __init__(self, f_tab: Sequence[tuple], n_max: int):
        xs = [float(x) for x, _ in f_tab]
        ys = [float(y) for _, y in f_tab]
        if len(xs) < 1:
            raise ValueError("empty tabulation")
        if any(x2 <= x1 for x1, x2 in zip(xs, xs[1:])):
            raise ValueError("tabulation abscissae must be strictly increasing")
        if any(y <= 0 for y in ys):
            raise ValueError("tabulated values must be positive")
        if any(y2 < y1 for y1, y2 in zip(ys, ys[1:])):
            raise ValueError("tabulation must be monotone non-decreasing")
        self._xs, self._ys = xs, ys

        # values v_n, right slopes s_n, quadratic coefficients q_n per [n, n+1]
        v = self.f(1.0) + 1.0
        s = 1.0
        self.values = [v]
        self.slopes = [s]
        self.quads = []
        for n in range(n_max):
            target = self.f(2.0) if n == 0 else self.f(n + 2.0) + n
            q = max(0.0, target - v - s)
            self.quads.append(q)
            v = v + s + q
            s = s + 2.0 * q
            self.values.append(v)
            self.slopes.append(s)
        self.n_max = n_max

    def f(self, x: float) -> float:
        """Piecewise-linear read of the tabulation, clamped at both ends."""
        xs, ys = self._xs, self._ys
        if x <= xs[0]:
            return ys[0]
        if x >= xs[-1]:
            return ys[-1]
        import bisect

        i = bisect.bisect_right(xs, x) - 1
        t = (x - xs[i]) / (xs[i + 1] - xs[i])
        return ys[i] + t * (ys[i + 1] - ys[i])

    def F(self, x: float) -> float:
        if x < 0.0 or x > self.n_max:
            raise ValueError(f"x={x} outside majorant domain [0, {self.n_max}]")
        n = min(int(x), self.n_max - 1)
        t = x - n
        return self.values[n] + self.slopes[n] * t + self.quads[n] * t * t

    def F_prime(self, x: float) -> float:
        n = min(int(x), self.n_max - 1)
        t = x - n
        return self.slopes[n] + 2.0 * self.quads[n] * t

    def xF(self, x: float) -> float:
        return x * self.F(x)

    def g(self, y: float) -> float:
        """Inverse of x -> x F(x) by monotone bisection, relative tol 1e-12."""
        if y < 0.0:
            raise ValueError("g is defined on [0, inf)")
        if y == 0.0:
            return 0.0
        lo, hi = 0.0, float(self.n_max)
        if self.xF(hi) < y:
            raise ArithmeticError(
                f"inversion failed to bracket y={y}: extend the majorant domain")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if self.xF(mid) < y:
                lo = mid
            else:
                hi = mid
            if hi - lo <= 1e-12 * max(1.0, hi):
                break
        return 0.5 * (lo + hi)

    def g_prime(self, y: float) -> float:
        """dg/dy by the inverse-function rule 1/(F(x) + x F'(x)) at x = g(y)."""
        x = self.g(y)
        return 1.0 / (self.F(x) + x * self.F_prime(x))


def build_theorem6_family(f_tab: Sequence[tuple], k_max: int,
                          name: str = "theorem6") -> SequenceFamily:
    """Family whose orbit count through E eventually dominates the growth f.

    From a convex C^1 majorant F > f and the inverse g of x -> x F(x):
    a1(k) = g(k), a2(k) = g(k + 1/2), r(k) = g'(k+1)/(k g(k)),
    R(k) = g'(k+1)/k, tabulated for k in [1, k_max].
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    maj = ConvexMajorant(f_tab, k_max + 2)
    table = {}
    for k in range(1, k_max + 1):
        gk = maj.g(float(k))
        gk_half = maj.g(k + 0.5)
        gp = maj.g_prime(k + 1.0)
        table[k] = (
            slr_from_float(gk),
            slr_from_float(gk_half),
            slr_from_float(gp / (k * gk)),
            slr_from_float(gp / k),
        )
    fam = SequenceFamily(name, 1, 1, table.__getitem__, k_max, None,
                         meta={"majorant": maj})
    return fam


class CalibrationResult(NamedTuple):
    nu: Optional[int]
    ok: bool
    target_eps: float
    achieved_eps: float
    candidates: list  # (nu, assumptions_ok, measured_eps)

    def to_json(self) -> dict:
        return {
            "nu": self.nu,
            "ok": self.ok,
            "target_eps": self.target_eps,
            "achieved_eps": self.achieved_eps,
            "candidates": [
                {"nu": n, "assumptions_ok": a, "eps": e} for n, a, e in self.candidates
            ],
        }


def calibrate_nu(fam: SequenceFamily, target_eps: float, K: int,
                 window: int = 20, max_len: int = 3) -> CalibrationResult:
    """Smallest swept cutoff nu <= K whose empirical epsilon meets the target.

    Sweeps a doubling ladder of candidates starting at fam.nu; a candidate
    must first pass the assumption check on its measurement window.  Failure
    to reach the target is reported, not raised.
    """
    if target_eps <= 0:
        raise ValueError("target_eps must be positive")
    from .words import estimate_epsilon

    candidates = []
    nu = max(fam.nu, fam.k_min)
    seen = set()
    ladder = []
    while nu <= K:
        ladder.append(nu)
        seen.add(nu)
        nu = nu * 2 if nu * 2 > nu + 1 else nu + 1
    if K not in seen:
        ladder.append(K)

    best_eps = math.inf
    for cand in ladder:
        sub = fam.with_nu(cand)
        hi = cand + window
        if fam.k_max is not None:
            hi = min(hi, fam.k_max - 1)
        if hi <= cand:
            break
        report = check_assumptions(sub, hi)
        if not report.assumption1_ok:
            candidates.append((cand, False, math.inf))
            continue
        eps = estimate_epsilon(sub, cand, hi, max_len)
        candidates.append((cand, True, eps))
        best_eps = min(best_eps, eps)
        if eps <= target_eps:
            return CalibrationResult(cand, True, target_eps, eps, candidates)
    return CalibrationResult(None, False, target_eps, best_eps, candidates)


# --- family definition files -------------------------------------------------

def write_tabulation_csv(fam: SequenceFamily, path: str, k_hi: int) -> None:
    """Dump k, sign/logmag columns for all four sequences up to k_hi."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k",
                    "a1_sign", "a1_logmag", "a2_sign", "a2_logmag",
                    "r_sign", "r_logmag", "R_sign", "R_logmag"])
        for k in range(fam.k_min, k_hi + 1):
            row = [k]
            for v in fam.values(k):
                row.extend([v.sign, format(v.logmag, ".17g")])
            w.writerow(row)


def load_tabulation_csv(path: str, name: str, nu: int) -> SequenceFamily:
    table = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for row in reader:
            k = int(row["k"])
            table[k] = tuple(
                slr(int(row[f"{col}_sign"]), float(row[f"{col}_logmag"]))
                for col in ("a1", "a2", "r", "R")
            )
    if not table:
        raise ValueError(f"empty tabulation file {path}")
    k_min, k_max = min(table), max(table)
    if set(table) != set(range(k_min, k_max + 1)):
        raise ValueError("tabulation must cover a contiguous index range")
    return SequenceFamily(name, k_min, nu, table.__getitem__, k_max)


def load_family_file(path: str) -> SequenceFamily:
    """Family definition: INI [family] section with preset or tabulation source."""
    import configparser

    cp = configparser.ConfigParser()
    with open(path) as fh:
        cp.read_file(fh)
    sec = cp["family"]
    name = sec.get("name", "family")
    nu = sec.getint("nu", fallback=None)
    if "preset" in sec:
        fam = preset(sec["preset"])
        if nu is not None:
            fam = fam.with_nu(nu)
        return fam
    if "tabulation" in sec:
        if nu is None:
            raise ValueError("tabulation families require an explicit nu")
        import os

        tab_path = sec["tabulation"]
        if not os.path.isabs(tab_path):
            tab_path = os.path.join(os.path.dirname(os.path.abspath(path)), tab_path)
        return load_tabulation_csv(tab_path, name, nu)
    if "f_tabulation" in sec:
        import os

        f_path = sec["f_tabulation"]
        if not os.path.isabs(f_path):
            f_path = os.path.join(os.path.dirname(os.path.abspath(path)), f_path)
        pts = []
        with open(f_path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                pts.append((float(row[0]), float(row[1])))
        k_max = sec.getint("k_max", fallback=50)
        fam = build_theorem6_family(pts, k_max, name=name)
        if nu is not None:
            fam = fam.with_nu(nu)
        return fam
    raise ValueError("family file must define preset, tabulation, or f_tabulation")
