"""Exponent algebra and the verification harness for the interpolation inequalities."""
from dataclasses import dataclass
import math
import statistics

from . import bmo as _bmo
from .convolve import _check_weak_range, check_young_exponents, young_sharp_check, young_strong_check, young_weak_check
from .fourier import band_leakage, forward, frequency_split, sobolev_norm, spectral_dilate
from .grid import ConfigError, GeneratorId, GridFunction, GridSpec, dilate, lp_quadrature, sample
from .measure import lorentz_nesting_constant, lorentz_norm, weak_norm
from .report import DILATIONS, InequalityReport, dilation_drift

DRIFT_LIMIT = 0.02
BAND_LEAKAGE = 1e-10


@dataclass(frozen=True)
class ExponentTuple:
    n: int
    p: float
    q: float
    s: float
    theta: float

    def __post_init__(self):
        n, p, q, s, th = self.n, self.p, self.q, self.s, self.theta
        if not (1 <= q < p < math.inf):
            raise ConfigError(f"need 1 <= q < p < inf, got q={q}, p={p}")
        if not (s >= 0 and s > n * (0.5 - 1.0 / p)):
            raise ConfigError(f"need s >= 0 and s > n(1/2 - 1/p) = {n * (0.5 - 1.0 / p):g}, got s={s}")
        if not 0 < th <= 1:
            raise ConfigError(f"theta must lie in (0, 1], got {th}")
        if abs(1.0 / p - (th / q + (1 - th) * (0.5 - s / n))) > 1e-12:
            raise ConfigError("theta does not satisfy 1/p = theta/q + (1-theta)(1/2 - s/n)")

    def to_dict(self):
        return {"n": self.n, "p": self.p, "q": self.q, "s": self.s, "theta": self.theta}


def solve_theta(n, p, q, s) -> ExponentTuple:
    """theta from 1/p = theta/q + (1 - theta)(1/2 - s/n)."""
    if not (1 <= q < p < math.inf):
        raise ConfigError(f"inadmissible exponents: need 1 <= q < p < inf, got q={q}, p={p}")
    if not (s >= 0 and s > n * (0.5 - 1.0 / p)):
        raise ConfigError(f"inadmissible exponents: need s > n(1/2 - 1/p) = {n * (0.5 - 1.0 / p):g}, got s={s}")
    base = 0.5 - s / n
    denom = 1.0 / q - base
    if denom == 0:
        raise ConfigError("inadmissible exponents: 1/q equals 1/2 - s/n")
    theta = (1.0 / p - base) / denom
    if not 0 < theta <= 1:
        raise ConfigError(f"inadmissible exponents: theta={theta:g} outside (0, 1]")
    return ExponentTuple(n, p, q, s, theta)


def _meta(f):
    return {"function": f.label, "spec": f.spec.to_dict()}


def _outside(rep, f, s):
    """Mark a report whose input is not in H^s; its drift is then not judged."""
    if f.generator is not None and s >= f.generator.sobolev_limit(f.spec.n):
        rep.extra["outside_hypothesis"] = f"not in H^{s:g} (limit {f.generator.sobolev_limit(f.spec.n):g})"
        rep.drift_limit = None


def _drift(rep, f, ratio, dilations):
    """Fill in the scaling drift; functions that cannot be dilated skip it."""
    if f.generator is None or not dilations:
        return
    try:
        rep.scaling_drift = dilation_drift(f, ratio, dilations)
    except ConfigError as exc:
        rep.extra["drift_skipped"] = str(exc)


def verify_gn1(f: GridFunction, t: ExponentTuple, perturb_theta=0.0, dilations=DILATIONS) -> InequalityReport:
    """||f||_p against ||f||_{q,inf}^theta ||f||_{H^s}^(1-theta)."""
    theta = t.theta + perturb_theta

    def parts(g):
        return lp_quadrature(g, t.p), weak_norm(g, t.q), sobolev_norm(g, t.s)

    def ratio(g):
        lhs, w, h = parts(g)
        core = w ** theta * h ** (1 - theta)
        return lhs / core if core > 0 else math.nan

    lhs, w, h = parts(f)
    core = w ** theta * h ** (1 - theta)
    params = t.to_dict()
    if perturb_theta:
        params["perturb_theta"] = perturb_theta
    rep = InequalityReport("gn1", params, lhs, core, drift_limit=DRIFT_LIMIT, **_meta(f))
    _outside(rep, f, t.s)
    _drift(rep, f, ratio, dilations)
    strong_core = lp_quadrature(f, t.q) ** theta * h ** (1 - theta)
    rep.extra["classical_rhs_core"] = strong_core
    rep.extra["checks"] = {"weak_core<=classical_core": core <= strong_core}
    return rep


def _bmo_core(g, p, q, max_level):
    return weak_norm(g, q) ** (q / p) * _bmo.bmo_norm(g, max_level) ** (1 - q / p)


def _check_pq(p, q, lower=1):
    if not (lower <= q < p < math.inf):
        raise ConfigError(f"need {lower} <= q < p < inf, got q={q}, p={p}")


def verify_gn2(f: GridFunction, p, q, max_level=None, dilations=DILATIONS) -> InequalityReport:
    """||f||_p against ||f||_{q,inf}^(q/p) ||f||_BMO^(1-q/p), dyadic BMO."""
    _check_pq(p, q)

    def ratio(g):
        core = _bmo_core(g, p, q, max_level)
        return lp_quadrature(g, p) / core if core > 0 else math.nan

    rep = InequalityReport("gn2", {"p": p, "q": q, "max_level": max_level},
                           lp_quadrature(f, p), _bmo_core(f, p, q, max_level), **_meta(f))
    _drift(rep, f, ratio, dilations)
    return rep


def verify_lorentz_gn(f: GridFunction, p, q, max_level=None, dilations=DILATIONS) -> InequalityReport:
    """||f||_{p,1} against the same right-hand side as gn2, plus Lorentz nesting."""
    if not q > 1:
        raise ConfigError(f"Lorentz form needs q > 1, got q={q}")
    _check_pq(p, q)

    def ratio(g):
        core = _bmo_core(g, p, q, max_level)
        return lorentz_norm(g, p, 1) / core if core > 0 else math.nan

    lhs = lorentz_norm(f, p, 1)
    rep = InequalityReport("lorentz", {"p": p, "q": q, "max_level": max_level},
                           lhs, _bmo_core(f, p, q, max_level), **_meta(f))
    _drift(rep, f, ratio, dilations)
    lp = lorentz_norm(f, p, p)
    weak = lorentz_norm(f, p, math.inf)
    tol = 1 + 1e-12
    rep.extra["lorentz_pp"] = lp
    rep.extra["lorentz_pinf"] = weak
    rep.extra["checks"] = {
        "pp<=C*p1": lp <= lorentz_nesting_constant(p, 1, p) * lhs * tol,
        "pinf<=C*p1": weak <= lorentz_nesting_constant(p, 1, math.inf) * lhs * tol,
    }
    return rep


def verify_eps(f: GridFunction, p, dilations=DILATIONS) -> InequalityReport:
    """||f||_p against ||f||_{H^s} at the endpoint s = n(1/2 - 1/p)."""
    if not 2 < p < math.inf:
        raise ConfigError(f"endpoint Sobolev needs 2 < p < inf, got p={p}")
    s = f.spec.n * (0.5 - 1.0 / p)

    def ratio(g):
        h = sobolev_norm(g, s)
        return lp_quadrature(g, p) / h if h > 0 else math.nan

    rep = InequalityReport("eps", {"p": p, "s": s}, lp_quadrature(f, p), sobolev_norm(f, s),
                           drift_limit=DRIFT_LIMIT, **_meta(f))
    _outside(rep, f, s)
    _drift(rep, f, ratio, dilations)
    return rep


def verify_bernstein(f: GridFunction, p, q, R, dilations=DILATIONS, source=None) -> InequalityReport:
    """||f||_q against R^(n(1/p - 1/q)) ||f||_{p,inf} for f with spectrum in B(0, R).

    The drift is measured under the joint rescaling f -> D_lam f, R -> R / lam.
    When ``source`` is given, f is taken to be its low-pass part at R and the
    dilated copies are low-pass parts of the dilated source at R / lam, which
    is exact.  Otherwise f itself is dilated (generator resampling, or the
    trigonometric interpolant for bare samples).
    """
    if not (1 <= p < q < math.inf):
        raise ConfigError(f"Bernstein needs 1 <= p < q < inf, got p={p}, q={q}")
    if not R > 0:
        raise ConfigError(f"frequency radius must be positive, got {R}")
    leak = band_leakage(f, R)
    if leak > BAND_LEAKAGE:
        raise ConfigError(f"spectrum leaks outside B(0, {R:g}): relative L2 leakage {leak:.3g} > {BAND_LEAKAGE:g}")
    n = f.spec.n
    e = n * (1.0 / p - 1.0 / q)

    def ratio(g, radius):
        core = radius ** e * weak_norm(g, p)
        return lp_quadrature(g, q) / core if core > 0 else math.nan

    def dilated(lam):
        if source is not None:
            return frequency_split(dilate(source, lam), R / lam)[0]
        if f.generator is not None:
            return dilate(f, lam)
        return spectral_dilate(f, lam)

    rep = InequalityReport("bernstein", {"p": p, "q": q, "R": R}, lp_quadrature(f, q),
                           R ** e * weak_norm(f, p), drift_limit=DRIFT_LIMIT, **_meta(f))
    rep.extra["leakage"] = leak
    base = ratio(f, R)
    if dilations and base > 0:
        worst = 0.0
        try:
            for lam in dilations:
                worst = max(worst, abs(ratio(dilated(lam), R / lam) / base - 1.0))
            rep.scaling_drift = worst
        except ConfigError as exc:
            rep.extra["drift_skipped"] = str(exc)
    return rep


def conjugate(p):
    return math.inf if p == 1 else p / (p - 1.0)


def hy_bound(p) -> float:
    if p == 2:
        return 1 + 1e-10
    if p == 1:
        return 1 + 1e-12
    return 1.05


def verify_hausdorff_young(f: GridFunction, p) -> InequalityReport:
    """Spectral L^{p'} norm of f_hat against ||f||_p, 1 <= p <= 2."""
    if not 1 <= p <= 2:
        raise ConfigError(f"Hausdorff-Young needs 1 <= p <= 2, got p={p}")
    q = conjugate(p)
    lhs = forward(f).lp_norm(q)
    return InequalityReport("hy", {"p": p, "q": q if math.isfinite(q) else "inf"}, lhs,
                            lp_quadrature(f, p), bound=hy_bound(p), **_meta(f))


# ---------------------------------------------------------------------------
# corpus sweeps

def _partner(spec, params):
    gen = params.get("partner") or GeneratorId("gaussian")
    return sample(spec, gen)


def run_verifier(verifier, f, params):
    """Dispatch one verifier by name; ``params`` holds its exponents."""
    p = params
    if verifier == "gn1":
        t = solve_theta(f.spec.n, p["p"], p["q"], p["s"])
        return verify_gn1(f, t, p.get("perturb_theta", 0.0), p.get("dilations", DILATIONS))
    if verifier == "gn2":
        return verify_gn2(f, p["p"], p["q"], p.get("max_level"), p.get("dilations", DILATIONS))
    if verifier == "lorentz":
        return verify_lorentz_gn(f, p["p"], p["q"], p.get("max_level"), p.get("dilations", DILATIONS))
    if verifier == "eps":
        return verify_eps(f, p["p"], p.get("dilations", DILATIONS))
    if verifier == "bernstein":
        low, _ = frequency_split(f, p["R"])
        rep = verify_bernstein(low, p["p"], p["q"], p["R"], p.get("dilations", DILATIONS),
                               source=f if f.generator is not None else None)
        rep.function = f"{f.label}[|xi|<={p['R']:g}]"
        return rep
    if verifier == "hy":
        return verify_hausdorff_young(f, p["p"])
    if verifier == "hn2-bmo":
        return _bmo.hn2_bmo_check(f, p.get("max_level"), p.get("dilations", DILATIONS))
    if verifier in ("young", "young-weak", "young-sharp"):
        check = {"young": young_strong_check, "young-weak": young_weak_check,
                 "young-sharp": young_sharp_check}[verifier]
        return check(f, _partner(f.spec, p), p["p"], p["q"], p["r"])
    raise ConfigError(f"unknown verifier {verifier!r}")


def check_params(verifier, n, params):
    """Reject exponent sets a verifier cannot accept, before touching any data."""
    p = params
    try:
        if verifier == "gn1":
            solve_theta(n, p["p"], p["q"], p["s"])
        elif verifier in ("gn2", "lorentz"):
            _check_pq(p["p"], p["q"])
            if verifier == "lorentz" and not p["q"] > 1:
                raise ConfigError(f"Lorentz form needs q > 1, got q={p['q']}")
        elif verifier == "eps":
            if not 2 < p["p"] < math.inf:
                raise ConfigError(f"endpoint Sobolev needs 2 < p < inf, got p={p['p']}")
        elif verifier == "bernstein":
            if not (1 <= p["p"] < p["q"] < math.inf) or not p["R"] > 0:
                raise ConfigError(f"Bernstein needs 1 <= p < q < inf and R > 0, got p={p['p']}, q={p['q']}, R={p['R']}")
        elif verifier == "hy":
            if not 1 <= p["p"] <= 2:
                raise ConfigError(f"Hausdorff-Young needs 1 <= p <= 2, got p={p['p']}")
        elif verifier == "young":
            if not all(e >= 1 for e in (p["p"], p["q"], p["r"])):
                raise ConfigError("Young exponents must lie in [1, inf]")
            check_young_exponents(p["p"], p["q"], p["r"])
        elif verifier in ("young-weak", "young-sharp"):
            _check_weak_range(p["p"], p["q"], p["r"])
            if verifier == "young-sharp" and not 1 < p["r"] < math.inf:
                raise ConfigError(f"sharp Young needs 1 < r < inf, got r={p['r']}")
    except KeyError as exc:
        raise ConfigError(f"{verifier} needs parameter {exc.args[0]!r}") from exc


VERIFIERS = ("gn1", "gn2", "lorentz", "eps", "bernstein", "hy", "hn2-bmo", "young", "young-weak", "young-sharp")


@dataclass
class SweepResult:
    verifier: str
    reports: list
    errors: list

    @property
    def summary(self):
        ratios = [r.ratio for r in self.reports if not r.degenerate]
        drifts = [r.scaling_drift for r in self.reports if r.scaling_drift is not None]
        return {
            "verifier": self.verifier,
            "max_ratio": max(ratios) if ratios else None,
            "median_ratio": statistics.median(ratios) if ratios else None,
            "worst_drift": max(drifts) if drifts else None,
            "corpus_size": len(self.reports) + len(self.errors),
            "violations": sum(len(r.violations) for r in self.reports),
            "errors": len(self.errors),
        }

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)


def sweep(corpus, verifier, params, spec: GridSpec, resolutions=()) -> SweepResult:
    """Run one verifier over every generator in ``corpus`` and every grid.

    Inputs that fail a precondition are recorded in ``errors`` and do not
    stop the sweep.  Output order is canonical (sorted by function label,
    then grid size), independent of the corpus order.
    """
    if not corpus:
        raise ConfigError("sweep needs a non-empty corpus")
    if verifier not in VERIFIERS:
        raise ConfigError(f"unknown verifier {verifier!r}; expected one of {', '.join(VERIFIERS)}")
    check_params(verifier, spec.n, params)
    specs = [spec] + [GridSpec(spec.n, spec.L, N) for N in resolutions if N != spec.N]
    reports, errors = [], []
    for gen in corpus:
        for sp in specs:
            try:
                f = sample(sp, gen)
                reports.append(run_verifier(verifier, f, params))
            except (ConfigError, ZeroDivisionError, FloatingPointError) as exc:
                errors.append({"function": gen.label, "spec": sp.to_dict(), "error": str(exc)})
    reports.sort(key=lambda r: (r.function, r.spec["N"]))
    errors.sort(key=lambda e: (e["function"], e["spec"]["N"]))
    return SweepResult(verifier, reports, errors)


def default_corpus(n, seeds=range(4), bandwidth=4):
    """A small mixed corpus of smooth, rough, singular and random functions."""
    gens = [GeneratorId("gaussian"), GeneratorId("tent"), GeneratorId("indicator-ball"),
            GeneratorId("log-abs"), GeneratorId("power-law", a=n / 2.0)]
    gens += [GeneratorId("random-mix", seed=s) for s in seeds]
    gens += [GeneratorId("trig-poly", seed=s, bandwidth=bandwidth) for s in seeds]
    return gens
