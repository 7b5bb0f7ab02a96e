"""Slow, independent reference computations used by the tests.

Nothing here shares code with the fast paths beyond the grid itself:
transforms are explicit sums, convolutions are shift-and-add, gradients
are finite differences and closed forms come from calculus.
"""
import math

import numpy as np
from scipy import integrate, optimize
from scipy.special import gamma

from . import _kernels
from .grid import GridFunction, GridSpec


def dft_sum(f: GridFunction, modes):
    """sum_j exp(-2 pi i xi_k . x_j) f(x_j) h^n for integer mode vectors ``modes``."""
    spec = f.spec
    pts = np.stack([c.ravel() for c in spec.mesh()], axis=1)
    xi = np.atleast_2d(np.asarray(modes, dtype=np.float64)) / (2.0 * spec.L)
    kern = np.exp(-2j * math.pi * xi @ pts.T)
    return kern @ f.values * spec.cell_volume


def convolve_direct(f: GridFunction, g: GridFunction) -> GridFunction:
    """Shift-and-add convolution on the doubled box, same layout as convolve()."""
    vals = _kernels.direct_convolve(f.grid, g.grid) * f.spec.cell_volume
    return GridFunction(f.spec.doubled(), vals)


def gradient_l2(f: GridFunction) -> float:
    """||grad f||_2 by fourth-order central differences.

    The stencil wraps around the box edge, which is exact for box-periodic
    inputs and harmless for functions that vanish near the edge.
    """
    spec = f.spec
    g = f.grid
    total = 0.0
    for ax in range(spec.n):
        d = (8.0 * (np.roll(g, -1, ax) - np.roll(g, 1, ax))
             - (np.roll(g, -2, ax) - np.roll(g, 2, ax))) / (12.0 * spec.h)
        total += float(np.sum(d * d))
    return math.sqrt(total * spec.cell_volume)


def low_frequency_constant_quad(n, s) -> float:
    """(int_{|xi|<=1} |xi|^(-2s))^(1/2) by radial quadrature."""
    sphere = 2.0 * math.pi ** (n / 2.0) / gamma(n / 2.0)
    val, _ = integrate.quad(lambda r: r ** (n - 1 - 2.0 * s), 0.0, 1.0)
    return math.sqrt(sphere * val)


def gaussian_lp(n, p) -> float:
    """||exp(-pi|x|^2)||_p on R^n."""
    return p ** (-n / (2.0 * p))


def gaussian_weak(n, p) -> float:
    """sup_a a |{exp(-pi|x|^2) > a}|^(1/p) on R^n, maximised numerically."""
    unit = 1.0 / gamma(n / 2.0 + 1.0)

    def neg(a):
        return -a * (unit * (-math.log(a)) ** (n / 2.0)) ** (1.0 / p)

    res = optimize.minimize_scalar(neg, bounds=(1e-12, 1.0 - 1e-12), method="bounded",
                                   options={"xatol": 1e-13})
    return -res.fun


def gaussian_transform(xi_norm):
    return np.exp(-math.pi * np.asarray(xi_norm) ** 2)


def log_abs_box_mean() -> float:
    """Mean over [-1, 1)^2 of log|x| cut off to 0 outside the unit disk."""
    return -math.pi / 8.0


def log_abs_oscillation(alpha):
    """|{x in [-1,1)^2 : |f - f_Q| > alpha}| for the cut-off log|x|, alpha > pi/8."""
    a = np.asarray(alpha, dtype=np.float64)
    return math.pi * np.exp(2.0 * (log_abs_box_mean() - a))


def indicator_pair(spec: GridSpec, width: float):
    """Two copies of the indicator of a centred cube of side ``width`` (snapped to cells)."""
    ax = spec.axis()
    one = (np.abs(ax) < width / 2.0).astype(np.float64)
    vals = one
    for _ in range(spec.n - 1):
        vals = np.multiply.outer(vals, one)
    f = GridFunction(spec, vals)
    return f, f
