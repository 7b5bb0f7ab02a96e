"""Grid-sampled functions on centred boxes [-L, L)^n.

Samples live at cell midpoints, so singular generators such as |x|^-a
and log|x| are never evaluated at the origin.  Functions are treated as
zero outside the box for every measure-theoretic quantity.
"""
from dataclasses import dataclass, replace
import math

import numpy as np


class ConfigError(ValueError):
    """Invalid grid, generator or exponent configuration."""


@dataclass(frozen=True)
class GridSpec:
    n: int
    L: float
    N: int

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ConfigError(f"dimension must be 1, 2 or 3, got {self.n}")
        if not self.L > 0:
            raise ConfigError(f"box half-width must be positive, got {self.L}")
        if self.N < 8 or self.N & (self.N - 1):
            raise ConfigError(f"N must be a power of two >= 8, got {self.N}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def cell_volume(self) -> float:
        return self.h ** self.n

    @property
    def shape(self):
        return (self.N,) * self.n

    @property
    def size(self) -> int:
        return self.N ** self.n

    @property
    def volume(self) -> float:
        return (2.0 * self.L) ** self.n

    def axis(self):
        """Midpoint coordinates along one axis."""
        return -self.L + (np.arange(self.N) + 0.5) * self.h

    def mesh(self):
        """List of n coordinate arrays, each of shape ``self.shape``."""
        ax = self.axis()
        return np.meshgrid(*([ax] * self.n), indexing="ij")

    def radius(self):
        return np.sqrt(sum(c * c for c in self.mesh()))

    def doubled(self) -> "GridSpec":
        """Same cell width on [-2L, 2L)^n."""
        return GridSpec(self.n, 2.0 * self.L, 2 * self.N)

    def to_dict(self):
        return {"n": self.n, "L": self.L, "N": self.N}


FAMILIES = ("gaussian", "tent", "indicator-ball", "power-law", "log-abs", "trig-poly", "random-mix")

# e^{-pi r^2} < 1e-12 beyond this radius
GAUSSIAN_RADIUS = math.sqrt(12.0 * math.log(10.0) / math.pi)


@dataclass(frozen=True)
class GeneratorId:
    """Names a test function.  Only the parameters a family uses matter."""
    family: str
    a: float = None
    seed: int = None
    bandwidth: int = None
    radius: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; expected one of {', '.join(FAMILIES)}")
        if self.family in ("trig-poly", "random-mix") and self.seed is None:
            raise ConfigError(f"{self.family} needs a seed")
        if self.family == "trig-poly" and (self.bandwidth is None or self.bandwidth < 0):
            raise ConfigError("trig-poly needs a non-negative bandwidth")
        if self.family == "power-law" and self.a is None:
            raise ConfigError("power-law needs an exponent a")
        if not self.radius > 0:
            raise ConfigError("radius must be positive")

    def check(self, spec: GridSpec):
        if self.family == "power-law" and not 0 < self.a < spec.n:
            raise ConfigError(f"power-law exponent must satisfy 0 < a < n={spec.n}, got {self.a}")
        if self.family == "trig-poly" and self.bandwidth > spec.N // 4:
            raise ConfigError(f"trig-poly bandwidth {self.bandwidth} exceeds N/4 = {spec.N // 4}")

    @property
    def label(self) -> str:
        parts = [self.family]
        if self.family == "power-law":
            parts.append(f"a={self.a:g}")
        if self.seed is not None and self.family in ("trig-poly", "random-mix"):
            parts.append(f"seed={self.seed}")
        if self.family == "trig-poly":
            parts.append(f"bw={self.bandwidth}")
        if self.family in ("indicator-ball", "power-law", "log-abs") and self.radius != 1.0:
            parts.append(f"radius={self.radius:g}")
        return "(" + ",".join(parts) + ")" if len(parts) > 1 else parts[0]

    def to_dict(self):
        d = {"family": self.family}
        for key in ("a", "seed", "bandwidth"):
            if getattr(self, key) is not None:
                d[key] = getattr(self, key)
        if self.radius != 1.0:
            d["radius"] = self.radius
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(**{k: v for k, v in d.items() if k in ("family", "a", "seed", "bandwidth", "radius")})

    # -- evaluation ---------------------------------------------------------

    def _mix_params(self, spec):
        rng = np.random.default_rng(self.seed)
        k = int(rng.integers(3, 7))
        amps = rng.uniform(0.5, 1.5, k) * rng.choice([-1.0, 1.0], k)
        centres = rng.uniform(-spec.L / 16, spec.L / 16, (k, spec.n))
        widths = rng.uniform(spec.L / 20, spec.L / 10, k)
        return amps, centres, widths

    def sobolev_limit(self, n) -> float:
        """Supremum of the s with f in the homogeneous Sobolev space of order s.

        The bound is open: f fails to lie in the space at s = limit.
        Jumps cap s below 1/2, kinks below 3/2.
        """
        fam = self.family
        if fam in ("gaussian", "random-mix", "trig-poly"):
            return math.inf
        if fam == "tent":
            return 1.5
        if fam == "indicator-ball":
            return 0.5
        if fam == "power-law":
            return min(0.5, n / 2.0 - self.a)
        return min(1.5, n / 2.0)

    def support_radius(self, spec: GridSpec) -> float:
        """Radius outside which the function is (numerically) zero."""
        fam = self.family
        if fam == "gaussian":
            return GAUSSIAN_RADIUS
        if fam == "tent":
            return 1.0
        if fam in ("indicator-ball", "power-law", "log-abs"):
            return self.radius
        if fam == "random-mix":
            _, centres, widths = self._mix_params(spec)
            return float(np.max(np.linalg.norm(centres, axis=1) + GAUSSIAN_RADIUS * widths))
        return math.inf

    def evaluate(self, spec: GridSpec, hfac: float = 1.0):
        """Values of x -> f(x / hfac) at the midpoints of ``spec``."""
        self.check(spec)
        fam = self.family
        if fam == "trig-poly":
            if hfac != 1.0:
                raise ConfigError("trig-poly is not compactly supported and cannot be dilated")
            return self._trig_poly(spec)
        xs = [c / hfac for c in spec.mesh()]
        r = np.sqrt(sum(c * c for c in xs))
        if fam == "gaussian":
            return np.exp(-math.pi * r * r)
        if fam == "tent":
            return np.maximum(0.0, 1.0 - r)
        if fam == "indicator-ball":
            return (r < self.radius).astype(np.float64)
        if fam == "power-law":
            return np.where(r < self.radius, r ** -self.a, 0.0)
        if fam == "log-abs":
            return np.where(r < self.radius, np.log(r), 0.0)
        amps, centres, widths = self._mix_params(spec)
        out = np.zeros(spec.shape)
        for amp, c, w in zip(amps, centres, widths):
            d2 = sum((x - ci) ** 2 for x, ci in zip(xs, c))
            out += amp * np.exp(-math.pi * d2 / (w * w))
        return out

    def _trig_poly(self, spec):
        rng = np.random.default_rng(self.seed)
        bw = self.bandwidth
        m = 2 * bw + 1
        coeffs = (rng.standard_normal((m,) * spec.n) + 1j * rng.standard_normal((m,) * spec.n)) / math.sqrt(m ** spec.n)
        ks = np.arange(-bw, bw + 1)
        # separable synthesis: one (N x m) exponential matrix per axis
        basis = np.exp(1j * math.pi * np.outer(spec.axis(), ks) / spec.L)
        vals = coeffs
        for axis in range(spec.n):
            vals = np.tensordot(basis, vals, axes=([1], [axis]))
            vals = np.moveaxis(vals, 0, axis)
        return vals.real.copy()


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a real function at the cell midpoints of ``spec``.

    ``values`` is stored flat (length N^n, C order).  ``generator``,
    ``dilation`` and ``amplitude`` record how the samples were produced,
    so that dilation can resample the exact function instead of
    interpolating samples.
    """
    spec: GridSpec
    values: np.ndarray
    generator: GeneratorId = None
    dilation: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64).ravel()
        if vals.size != self.spec.size:
            raise ConfigError(f"expected {self.spec.size} values, got {vals.size}")
        if not np.all(np.isfinite(vals)):
            raise ConfigError("grid function values must be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, spec: GridSpec, func):
        """Sample ``func(*coords)`` (coords as broadcast arrays) on the grid."""
        return cls(spec, np.broadcast_to(func(*spec.mesh()), spec.shape))

    @classmethod
    def zeros(cls, spec: GridSpec):
        return cls(spec, np.zeros(spec.size))

    @property
    def grid(self):
        return self.values.reshape(self.spec.shape)

    @property
    def label(self) -> str:
        base = self.generator.label if self.generator is not None else "samples"
        if self.dilation != 1.0:
            base += f"@D{self.dilation:g}"
        return base

    def _plain(self, values):
        return GridFunction(self.spec, values)

    def __add__(self, other):
        if isinstance(other, GridFunction):
            _same_spec(self, other)
            return self._plain(self.values + other.values)
        return self._plain(self.values + float(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self * -1.0

    def __mul__(self, c):
        c = float(c)
        return replace(self, values=self.values * c, amplitude=self.amplitude * c)

    __rmul__ = __mul__

    def __abs__(self):
        return self._plain(np.abs(self.values))

    def to_dict(self):
        d = {
            "spec": self.spec.to_dict(),
            "generator": self.generator.to_dict() if self.generator is not None else None,
            "values": self.values.tolist(),
        }
        if self.dilation != 1.0 or self.amplitude != 1.0:
            d["dilation"] = self.dilation
            d["amplitude"] = self.amplitude
        return d

    @classmethod
    def from_dict(cls, d):
        try:
            spec = GridSpec(int(d["spec"]["n"]), float(d["spec"]["L"]), int(d["spec"]["N"]))
            gen = GeneratorId.from_dict(d["generator"]) if d.get("generator") else None
            return cls(spec, np.asarray(d["values"], dtype=np.float64), gen,
                       float(d.get("dilation", 1.0)), float(d.get("amplitude", 1.0)))
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed grid function: {exc}") from exc


def _same_spec(f, g):
    if f.spec != g.spec:
        raise ConfigError(f"grid mismatch: {f.spec} vs {g.spec}")


def sample(spec: GridSpec, gen: GeneratorId) -> GridFunction:
    """Sample a named generator on ``spec``; deterministic for fixed seeds."""
    return GridFunction(spec, gen.evaluate(spec), gen)


def lp_quadrature(f: GridFunction, p) -> float:
    """Midpoint-rule L^p norm; ``p = inf`` gives the max of |f|."""
    if p == math.inf:
        return float(np.max(np.abs(f.values))) if f.values.size else 0.0
    if not p >= 1:
        raise ConfigError(f"L^p norms need p >= 1, got {p}")
    a = np.abs(f.values)
    if p == 1:
        return math.fsum(a.tolist()) * f.spec.cell_volume
    # factor out the max so that |f|^p neither underflows nor overflows
    top = float(a.max()) if a.size else 0.0
    if top == 0.0:
        return 0.0
    a = a / top
    s = np.dot(a, a) if p == 2 else np.sum(a ** p)
    return float(top * (s * f.spec.cell_volume) ** (1.0 / p))


def support_radius(f: GridFunction) -> float:
    """Radius of the smallest centred ball containing the support of f."""
    if f.generator is not None:
        return f.generator.support_radius(f.spec) * f.dilation
    nz = f.values != 0.0
    if not nz.any():
        return 0.0
    r = f.spec.radius().ravel()[nz]
    return float(r.max() + 0.5 * f.spec.h * math.sqrt(f.spec.n))


def dilate(f: GridFunction, hfac: float) -> GridFunction:
    """Mass-preserving dilation x -> hfac^-n f(x / hfac) on the same grid.

    Functions carrying a generator are re-evaluated exactly; bare sample
    arrays fall back to nearest-cell lookup, which is only O(h) accurate.
    """
    if not hfac > 0:
        raise ConfigError(f"dilation factor must be positive, got {hfac}")
    if hfac == 1.0:
        return f
    spec = f.spec
    rad = support_radius(f) * hfac
    if not rad < spec.L:
        raise ConfigError(f"dilated support radius {rad:g} does not fit in the box of half-width {spec.L:g}")
    if f.generator is not None:
        total = f.dilation * hfac
        vals = f.amplitude * total ** -spec.n * f.generator.evaluate(spec, total)
        return GridFunction(spec, vals, f.generator, total, f.amplitude)
    idx = []
    for c in spec.mesh():
        k = np.floor((c / hfac + spec.L) / spec.h).astype(np.int64)
        idx.append(np.clip(k, 0, spec.N - 1))
    vals = f.grid[tuple(idx)] * hfac ** -spec.n
    return GridFunction(spec, vals, dilation=f.dilation * hfac)
