"""Weak L^p, Lorentz and BMO norms on grids, with verifiers for the interpolation inequalities built on them."""
from .grid import ConfigError, GeneratorId, GridFunction, GridSpec, dilate, lp_quadrature, sample
from .measure import distribution, layer_cake_norm, lorentz_norm, rearrange, weak_norm
from .fourier import SpectralFunction, forward, inverse, sobolev_norm
from .convolve import convolve
from .bmo import DyadicCube, bmo_norm, cz_decompose
from .inequality import ExponentTuple, solve_theta, sweep
from .report import InequalityReport

__version__ = "0.1.0"
