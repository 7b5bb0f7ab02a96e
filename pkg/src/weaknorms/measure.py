"""Distribution functions, weak and Lorentz norms, rearrangements.

Everything here is exact on the step functions produced by sampling:
the distribution function of a grid function takes finitely many
values, so the layer-cake integral, the weak-norm supremum and the
Lorentz integrals all reduce to finite sums evaluated in closed form.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import _kernels
from .grid import ConfigError, GridFunction, lp_quadrature
from .report import InequalityReport


@dataclass(frozen=True, eq=False)
class DistributionProfile:
    """Right-continuous step function alpha -> d_f(alpha).

    ``measures[i]`` is the measure of {|f| > alpha} for
    thresholds[i] <= alpha < thresholds[i+1]; the last entry is 0.
    ``counts`` holds the same data as integer cell counts.
    """
    thresholds: np.ndarray
    measures: np.ndarray
    counts: np.ndarray
    cell_volume: float

    def __call__(self, alpha):
        alpha = np.asarray(alpha, dtype=np.float64)
        if np.any(alpha < 0):
            raise ValueError("d_f is evaluated at alpha >= 0")
        i = np.searchsorted(self.thresholds, alpha, side="right") - 1
        return self.measures[i]

    def same_as(self, other) -> bool:
        return (np.array_equal(self.thresholds, other.thresholds)
                and np.array_equal(self.counts, other.counts)
                and self.cell_volume == other.cell_volume)


def _profile_from_abs(a, vol):
    sa = np.sort(a)
    levels = np.unique(sa)
    if levels.size == 0 or levels[0] != 0.0:
        levels = np.concatenate(([0.0], levels))
    counts = sa.size - np.searchsorted(sa, levels, side="right")
    return DistributionProfile(levels, counts * vol, counts, vol)


def distribution(f: GridFunction) -> DistributionProfile:
    return _profile_from_abs(np.abs(f.values), f.spec.cell_volume)


def layer_cake_norm(f: GridFunction, p) -> float:
    """p * int alpha^(p-1) d_f(alpha) d alpha, i.e. ||f||_p^p, from the profile."""
    if not 1 <= p < math.inf:
        raise ConfigError(f"layer-cake formula needs 1 <= p < inf, got {p}")
    prof = distribution(f)
    lv = prof.thresholds
    steps = lv[1:] ** p - lv[:-1] ** p
    return float(np.dot(prof.measures[:-1], steps))


def _weak_from_profile(prof, p):
    if prof.thresholds.size < 2:
        return 0.0
    # sup of alpha * d(alpha)^(1/p) on [a_i, a_{i+1}) is approached at a_{i+1}
    if p == 1:
        # rounding is monotone, so this never exceeds the fsum-based L^1 norm
        return float(np.max(prof.thresholds[1:] * prof.counts[:-1]) * prof.cell_volume)
    meas = prof.counts[:-1] * prof.cell_volume
    return float(np.max(prof.thresholds[1:] * meas ** (1.0 / p)))


def weak_norm(f: GridFunction, p) -> float:
    """sup_a a * d_f(a)^(1/p); p = inf is routed to the sup norm."""
    if p == math.inf:
        return lp_quadrature(f, math.inf)
    if not p >= 1:
        raise ConfigError(f"weak L^p needs p >= 1, got {p}")
    return _weak_from_profile(distribution(f), p)


@dataclass(frozen=True, eq=False)
class Rearrangement:
    """f* as a step function: star_values[i] on [breakpoints[i], breakpoints[i+1])."""
    star_values: np.ndarray
    cell_volume: float

    @property
    def breakpoints(self):
        return np.arange(self.star_values.size + 1) * self.cell_volume

    def __call__(self, t):
        t = np.asarray(t, dtype=np.float64)
        i = np.floor(t / self.cell_volume).astype(np.int64)
        vals = np.concatenate((self.star_values, [0.0]))
        return vals[np.clip(i, 0, self.star_values.size)]

    def distribution(self) -> DistributionProfile:
        return _profile_from_abs(self.star_values, self.cell_volume)

    def integral(self, p) -> float:
        """int_0^inf f*(t)^p dt."""
        return float(np.sum(self.star_values ** p) * self.cell_volume)

    def integral_to(self, t) -> float:
        """int_0^t f*(s) ds."""
        if t <= 0:
            return 0.0
        vol = self.cell_volume
        k = int(min(math.floor(t / vol), self.star_values.size))
        acc = float(np.sum(self.star_values[:k])) * vol
        if k < self.star_values.size:
            acc += float(self.star_values[k]) * (t - k * vol)
        return acc


def rearrange(f: GridFunction) -> Rearrangement:
    star = np.sort(np.abs(f.values))[::-1].copy()
    return Rearrangement(star, f.spec.cell_volume)


def _power_steps(count, e):
    """(i+1)^e - i^e for i = 0..count-1 without cancellation."""
    i = np.arange(count, dtype=np.float64)
    out = np.empty(count)
    out[0] = 1.0
    j = i[1:]
    out[1:] = j ** e * np.expm1(e * np.log1p(1.0 / j))
    return out


def lorentz_norm(f: GridFunction, p, q) -> float:
    """||f||_{L^{p,q}} = (int [t^(1/p) f*(t)]^q dt/t)^(1/q), or the sup for q = inf.

    Each constant piece of f* on [t_i, t_{i+1}) integrates in closed
    form to star^q * (p/q) * (t_{i+1}^(q/p) - t_i^(q/p)).
    """
    if not p > 1:
        raise ConfigError(f"Lorentz norm needs p > 1, got {p}")
    if p == math.inf:
        raise ConfigError("Lorentz norm needs p < inf")
    if q == math.inf:
        star = rearrange(f).star_values
        if star.size == 0:
            return 0.0
        vol = f.spec.cell_volume
        # same float expression as weak_norm, so the two agree bit for bit
        ends = np.arange(1, star.size + 1) * vol
        return float(np.max(star * ends ** (1.0 / p)))
    if not q >= 1:
        raise ConfigError(f"Lorentz norm needs q >= 1, got {q}")
    star = rearrange(f).star_values
    nz = int(np.count_nonzero(star))
    if nz == 0:
        return 0.0
    e = q / p
    vol = f.spec.cell_volume
    top = float(star[0])
    steps = _power_steps(nz, e) * vol ** e
    total = float(np.dot((star[:nz] / top) ** q, steps)) * (p / q)
    return top * total ** (1.0 / q)


def lorentz_nesting_constant(p, r, q) -> float:
    """C with ||f||_{p,q} <= C ||f||_{p,r} for r < q (q = inf allowed)."""
    if not r < q:
        raise ConfigError("Lorentz nesting needs r < q")
    if q == math.inf:
        return (r / p) ** (1.0 / r)
    return (r / p) ** ((q - r) / (r * q))


@dataclass(frozen=True, eq=False)
class AmplitudeSplit:
    """g = low + high with low = g on {|g| <= M}, high = g on {|g| > M}."""
    source: GridFunction
    low: GridFunction
    high: GridFunction
    M: float

    def check_bounds(self, t, r, s):
        """Evaluate both sides of the two splitting estimates.

        Low part:  ||low||_s^s <= s/(s-r) M^(s-r) ||g||_{r,inf}^r - M^s d_g(M)
                   (||low||_inf <= M when s = inf).
        High part: ||high||_t^t <= r/(r-t) M^(t-r) ||g||_{r,inf}^r.
        """
        if not (1 <= t < r < s):
            raise ConfigError(f"splitting bounds need 1 <= t < r < s, got t={t}, r={r}, s={s}")
        g, M = self.source, self.M
        w = weak_norm(g, r)
        d_m = float(distribution(g)(M))
        if s == math.inf:
            low_lhs, low_rhs = lp_quadrature(self.low, math.inf), M
        else:
            low_lhs = lp_quadrature(self.low, s) ** s
            low_rhs = s / (s - r) * M ** (s - r) * w ** r - M ** s * d_m
        high_lhs = lp_quadrature(self.high, t) ** t
        high_rhs = r / (r - t) * M ** (t - r) * w ** r
        return {
            "low": {"lhs": low_lhs, "rhs": low_rhs, "holds": low_lhs <= low_rhs * (1 + 1e-12) + 1e-300},
            "high": {"lhs": high_lhs, "rhs": high_rhs, "holds": high_lhs <= high_rhs * (1 + 1e-12) + 1e-300},
        }


def amplitude_split(g: GridFunction, M) -> AmplitudeSplit:
    if not M > 0:
        raise ConfigError(f"split threshold must be positive, got {M}")
    big = np.abs(g.values) > M
    low = GridFunction(g.spec, np.where(big, 0.0, g.values))
    high = GridFunction(g.spec, np.where(big, g.values, 0.0))
    return AmplitudeSplit(g, low, high, float(M))


def interp_constant(p, r, q) -> float:
    """Constant from splitting the layer-cake integral at the balancing level.

    With A = ||f||_{p,inf}, B = ||f||_{q,inf}:
        ||f||_r^r <= r/(r-p) A^p x^(r-p) + r/(q-r) B^q x^(r-q)   for any x > 0,
    and x^(p-q) = A^p / B^q makes the two terms equal to A^(r theta) B^(r(1-theta)),
    so C = (r/(r-p) + r/(q-r))^(1/r).  For q = inf the second term is absent.
    """
    tail = 0.0 if q == math.inf else r / (q - r)
    return (r / (r - p) + tail) ** (1.0 / r)


def interp_theta(p, r, q) -> float:
    if q == math.inf:
        return p / r
    return (1.0 / r - 1.0 / q) / (1.0 / p - 1.0 / q)


def interp_bound_check(f: GridFunction, p, r, q) -> InequalityReport:
    if not (1 <= p < r < q):
        raise ConfigError(f"weak interpolation needs 1 <= p < r < q, got ({p}, {r}, {q})")
    theta = interp_theta(p, r, q)
    const = interp_constant(p, r, q)
    # both sides are 1-homogeneous: judge on f / 2^e with sup in [1/2, 1),
    # an exact rescaling that keeps tiny or huge samples away from under/overflow
    e = math.frexp(lp_quadrature(f, math.inf))[1]
    g = GridFunction(f.spec, np.ldexp(f.values, -e))
    a = weak_norm(g, p)
    b = weak_norm(g, q)
    lhs = lp_quadrature(g, r)
    core = a ** theta * b ** (1.0 - theta)
    rep = InequalityReport(
        "weak-interpolation", {"p": p, "r": r, "q": q, "theta": theta},
        lhs, core, function=f.label, spec=f.spec.to_dict(), bound=const * (1 + 1e-9),
    )
    rep.extra["constant"] = const
    rep.extra["scale"] = math.ldexp(1.0, e)
    rep.extra["ratio_over_constant"] = rep.ratio / const
    return rep


def k_functional(f: GridFunction, t) -> float:
    """K(f, t) for the pair (L^1, L^inf), computed as int_0^t f*."""
    if not t > 0:
        raise ConfigError(f"K-functional needs t > 0, got {t}")
    return rearrange(f).integral_to(t)


def k_functional_bruteforce(f: GridFunction, t) -> float:
    """min over splits at every sample level of ||g0||_1 + t ||g1||_inf.

    Both the characteristic split (g chi_{|g|>M}, g chi_{|g|<=M}) and the
    truncation split ((|g|-M)_+ sgn g, min(|g|, M) sgn g) are tried.
    """
    if not t > 0:
        raise ConfigError(f"K-functional needs t > 0, got {t}")
    a = np.abs(f.values)
    cands = np.unique(np.concatenate(([0.0], a)))
    return _kernels.kfunc_bruteforce(a, cands, t, f.spec.cell_volume)
