"""Full-space convolution on zero-padded grids, and the Young checks."""
from dataclasses import dataclass
import math

import numpy as np

from .fourier import SpectralFunction, forward
from .grid import ConfigError, GridFunction, lp_quadrature
from .measure import weak_norm
from .report import InequalityReport

YOUNG_STRONG_SLACK = 1e-6


@dataclass(frozen=True, eq=False)
class ConvolutionResult:
    """f * g on the doubled box [-2L, 2L)^n.

    Sample m of ``value`` is the convolution at -2L + (m + 1) h along each
    axis, i.e. half a cell to the right of the cell midpoint it is stored
    at (sums of two midpoints land on cell edges).  Norms are unaffected;
    ``transform`` corrects the phase.
    """
    value: GridFunction
    operands: tuple

    @property
    def offset(self) -> float:
        return 0.5 * self.value.spec.h

    def points(self):
        return self.value.spec.axis() + self.offset

    def transform(self) -> SpectralFunction:
        F = forward(self.value)
        xi = F.xi_axis()
        ph = np.exp(-2j * math.pi * xi * self.offset)
        out = ph
        for _ in range(self.value.spec.n - 1):
            out = np.multiply.outer(out, ph)
        return SpectralFunction(F.spec, F.coeffs * out, F.label)


def zero_pad(f: GridFunction) -> GridFunction:
    """Embed f in the doubled box; cell midpoints line up exactly."""
    spec = f.spec
    big = spec.doubled()
    out = np.zeros(big.shape)
    q = spec.N // 2
    out[tuple(slice(q, q + spec.N) for _ in range(spec.n))] = f.grid
    return GridFunction(big, out)


def convolve(f: GridFunction, g: GridFunction) -> ConvolutionResult:
    """Linear convolution h^n sum_j f_j g_{m-j} via FFT on a 2N grid."""
    if f.spec != g.spec:
        raise ConfigError(f"convolution needs a shared grid: {f.spec} vs {g.spec}")
    spec = f.spec
    shape = tuple(2 * s for s in spec.shape)
    axes = tuple(range(spec.n))
    prod = np.fft.rfftn(f.grid, shape, axes) * np.fft.rfftn(g.grid, shape, axes)
    vals = np.fft.irfftn(prod, shape, axes) * spec.cell_volume
    # index 2N-1 along any axis cannot receive mass
    for axis in range(spec.n):
        idx = [slice(None)] * spec.n
        idx[axis] = -1
        vals[tuple(idx)] = 0.0
    return ConvolutionResult(GridFunction(spec.doubled(), vals), (f.label, g.label))


def _inv(p):
    return 0.0 if p == math.inf else 1.0 / p


def check_young_exponents(p, q, r):
    if abs(_inv(p) + 1.0 - _inv(q) - _inv(r)) > 1e-12:
        raise ConfigError(f"Young exponents need 1/p + 1 = 1/q + 1/r, got p={p}, q={q}, r={r}")


def _params(p, q, r):
    return {"p": p, "q": q, "r": r}


def young_strong_check(f, g, p, q, r) -> InequalityReport:
    """||f*g||_p <= ||f||_q ||g||_r, constant 1."""
    for e in (p, q, r):
        if not e >= 1:
            raise ConfigError(f"Young exponents must lie in [1, inf], got {e}")
    check_young_exponents(p, q, r)
    conv = convolve(f, g).value
    lhs = lp_quadrature(conv, p)
    core = lp_quadrature(f, q) * lp_quadrature(g, r)
    return InequalityReport("young", _params(p, q, r), lhs, core,
                            function=f"{f.label}*{g.label}", spec=f.spec.to_dict(),
                            bound=1.0 + YOUNG_STRONG_SLACK)


def _check_weak_range(p, q, r):
    if not (1 <= r < math.inf and 1 < p < math.inf and 1 < q < math.inf):
        raise ConfigError(f"weak Young needs 1 <= r < inf and 1 < p, q < inf, got p={p}, q={q}, r={r}")
    check_young_exponents(p, q, r)


def young_weak_check(f, g, p, q, r) -> InequalityReport:
    """||f*g||_{p,inf} <= C ||f||_{q,inf} ||g||_r; C is tracked, not asserted."""
    _check_weak_range(p, q, r)
    conv = convolve(f, g).value
    lhs = weak_norm(conv, p)
    core = weak_norm(f, q) * lp_quadrature(g, r)
    return InequalityReport("young-weak", _params(p, q, r), lhs, core,
                            function=f"{f.label}*{g.label}", spec=f.spec.to_dict())


def young_sharp_check(f, g, p, q, r) -> InequalityReport:
    """||f*g||_p <= C ||f||_{q,inf} ||g||_r with the strong norm on the left."""
    if not (1 < r < math.inf):
        raise ConfigError(f"sharp Young needs 1 < r < inf, got r={r}")
    _check_weak_range(p, q, r)
    conv = convolve(f, g).value
    lhs = lp_quadrature(conv, p)
    weak_lhs = weak_norm(conv, p)
    core = weak_norm(f, q) * lp_quadrature(g, r)
    rep = InequalityReport("young-sharp", _params(p, q, r), lhs, core,
                           function=f"{f.label}*{g.label}", spec=f.spec.to_dict())
    rep.extra["weak_lhs"] = weak_lhs
    rep.extra["checks"] = {"weak_lhs<=lhs": weak_lhs <= lhs}
    return rep
