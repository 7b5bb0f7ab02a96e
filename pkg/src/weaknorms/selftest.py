"""Compact invariant suite behind ``weaknorms selftest``.

Each check runs on a small default grid and returns a dict with the
check name, a pass flag and the measured quantity.
"""
import math

import numpy as np

from . import bmo, measure, oracles
from .convolve import convolve, young_strong_check, zero_pad
from .fourier import forward, plancherel_defect, sobolev_norm
from .grid import ConfigError, GeneratorId, GridFunction, GridSpec, lp_quadrature, sample
from .inequality import solve_theta, verify_eps, verify_gn1, verify_hausdorff_young


def _corpus(n, N, seeds=range(3)):
    spec = GridSpec(n, 6.0, N)
    gens = [GeneratorId("gaussian"), GeneratorId("tent"), GeneratorId("log-abs")]
    gens += [GeneratorId("random-mix", seed=s) for s in seeds]
    return [sample(spec, g) for g in gens]


def _layer_cake():
    worst = 0.0
    for n in (1, 2):
        for f in _corpus(n, 64):
            for p in (1, 1.5, 2, 4):
                ref = lp_quadrature(f, p) ** p
                worst = max(worst, abs(measure.layer_cake_norm(f, p) - ref) / ref)
    return worst <= 1e-9, worst


def _chebyshev():
    ok = all(measure.weak_norm(f, p) <= lp_quadrature(f, p)
             for n in (1, 2) for f in _corpus(n, 64) for p in (1, 2, 4))
    return ok, None


def _rearrangement():
    worst = 0.0
    ok = True
    for f in _corpus(2, 64):
        r = measure.rearrange(f)
        ok &= r.distribution().same_as(measure.distribution(f))
        for p in (1, 2, 3):
            ref = lp_quadrature(f, p) ** p
            worst = max(worst, abs(r.integral(p) - ref) / ref)
    return ok and worst <= 1e-12, worst


def _interpolation():
    worst = 0.0
    for f in _corpus(2, 64):
        for prq in ((2, 3, 4), (1.5, 2, 6)):
            worst = max(worst, measure.interp_bound_check(f, *prq).extra["ratio_over_constant"])
    return worst <= 1 + 1e-9, worst


def _fourier():
    spec = GridSpec(1, 8.0, 256)
    g = sample(spec, GeneratorId("gaussian"))
    F = forward(g)
    dev = float(np.max(np.abs(F.coeffs - oracles.gaussian_transform(F.xi_norm()))))
    defect = max(plancherel_defect(f) for f in _corpus(2, 64))
    return dev <= 1e-6 and defect <= 1e-10, max(dev, defect)


def _sobolev():
    worst = 0.0
    for f in _corpus(2, 256)[:1] + _corpus(2, 256)[3:]:
        ref = oracles.gradient_l2(f)
        worst = max(worst, abs(2 * math.pi * sobolev_norm(f, 1) - ref) / ref)
    return worst <= 1e-2, worst


def _young():
    fs = _corpus(1, 64)
    worst = 0.0
    for f in fs:
        for g in fs:
            for pqr in ((1, 1, 1), (2, 1, 2), (3, 2, 1.2)):
                worst = max(worst, young_strong_check(f, g, *pqr).ratio)
    a, b = oracles.indicator_pair(GridSpec(1, 6.0, 64), 2.0)
    eq = young_strong_check(a, b, 1, 1, 1).ratio
    return worst <= 1 + 1e-6 and eq >= 1 - 1e-6, worst


def _conv_theorem():
    fs = _corpus(2, 32)
    worst = 0.0
    for f in fs[:3]:
        for g in fs[3:]:
            lhs = convolve(f, g).transform().coeffs
            rhs = forward(zero_pad(f)).coeffs * forward(zero_pad(g)).coeffs
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst <= 1e-10, worst


def _cz():
    ok = True
    rng = np.random.default_rng(7)
    for f in _corpus(2, 64):
        root = bmo.DyadicCube.root(2)
        avg = bmo.cube_average(abs(f), root)
        for M in avg * rng.uniform(1.0, 20.0, 3):
            dec = bmo.cz_decompose(f, root, M)
            ok &= all(bmo.check_decomposition(f, dec).values())
    spec = GridSpec(1, 0.5, 16)
    f = GridFunction.from_callable(spec, lambda x: np.where((x >= 0) & (x < 0.25), 4.0, 0.0))
    dec = bmo.cz_decompose(f, bmo.DyadicCube.root(1), 1.0)
    ok &= len(dec.selected) == 1 and dec.selected[0][1] == 2.0
    return bool(ok), len(dec.selected)


def _bmo():
    spec = GridSpec(2, 1.0, 64)
    const = bmo.bmo_norm(GridFunction(spec, np.full(spec.size, 3.0)))
    vals = []
    sups = []
    for N in (64, 128, 256):
        f = sample(GridSpec(2, 1.0, N), GeneratorId("log-abs"))
        vals.append(bmo.bmo_norm(f))
        sups.append(lp_quadrature(f, math.inf))
    linf = all(bmo.bmo_norm(f) <= 2 * lp_quadrature(f, math.inf) for f in _corpus(2, 64))
    ok = const == 0.0 and linf and max(vals) <= 1.3 * min(vals) and sups[-1] > sups[0]
    return ok, max(vals) / min(vals)


def _jn():
    f = sample(GridSpec(2, 1.0, 256), GeneratorId("log-abs"))
    fit = bmo.jn_decay_check(f, bmo.DyadicCube.root(2), np.linspace(0.5, 3.0, 26))
    return fit.decays and fit.r2 >= 0.9, fit.slope


def _gn1():
    spec = GridSpec(2, 6.0, 256)
    t = solve_theta(2, 4, 2, 1)
    f = sample(spec, GeneratorId("random-mix", seed=1))
    rep = verify_gn1(f, t)
    neg = verify_gn1(f, t, perturb_theta=0.1)
    homog = abs(verify_gn1(3.0 * f, t, dilations=()).ratio / rep.ratio - 1)
    ok = rep.ok and homog <= 1e-12 and neg.scaling_drift > 0.05
    return ok, rep.scaling_drift


def _eps():
    f = sample(GridSpec(2, 6.0, 256), GeneratorId("gaussian"))
    rep = verify_eps(f, 4)
    return rep.ok and math.isfinite(rep.ratio), rep.scaling_drift


def _hy():
    worst = {}
    for p in (1, 1.5, 2):
        worst[p] = max(verify_hausdorff_young(abs(f), p).ratio for f in _corpus(2, 64))
    ok = all(verify_hausdorff_young(abs(f), p).ok for f in _corpus(2, 64) for p in (1, 1.5, 2))
    return ok, worst[1.5]


def _kfunctional():
    worst = 0.0
    for f in _corpus(1, 64):
        for t in (0.05, 0.5, 2.0):
            a = measure.k_functional(f, t)
            b = measure.k_functional_bruteforce(f, t)
            worst = max(worst, abs(a - b) / b)
    return worst <= 1e-6, worst


def _theta():
    ok = abs(solve_theta(2, 4, 2, 1).theta - 0.5) <= 1e-12
    ok &= abs(solve_theta(3, 6, 2, 1.5).theta - 1 / 3) <= 1e-12
    try:
        solve_theta(2, 4, 4, 1)
        ok = False
    except ConfigError:
        pass
    return ok, None


CHECKS = (
    ("layer-cake", _layer_cake),
    ("chebyshev", _chebyshev),
    ("rearrangement", _rearrangement),
    ("weak-interpolation", _interpolation),
    ("fourier", _fourier),
    ("sobolev", _sobolev),
    ("young", _young),
    ("convolution-theorem", _conv_theorem),
    ("cz", _cz),
    ("bmo", _bmo),
    ("john-nirenberg", _jn),
    ("gn1", _gn1),
    ("eps", _eps),
    ("hausdorff-young", _hy),
    ("k-functional", _kfunctional),
    ("theta", _theta),
)


def run_selftest():
    out = []
    for name, check in CHECKS:
        ok, value = check()
        out.append({"check": name, "ok": bool(ok), "value": value})
    return out
