"""Riemann-sum Fourier transform in the e^{-2 pi i xi.x} convention.

Frequencies are physical: mode k (integer vector in [-N/2, N/2)^n) sits
at xi_k = k / (2L), so radii R are grid independent.  With this
convention the Gaussian e^{-pi|x|^2} is a fixed point and the
homogeneous Sobolev norm of order 1 equals ||grad f||_2 / (2 pi).

The DFT implicitly periodises the box; that is confined to this module.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy.special import gamma

from .grid import ConfigError, GridFunction, GridSpec


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """Fourier coefficients on the dual lattice, stored in ascending-k order."""
    spec: GridSpec
    coeffs: np.ndarray
    label: str = None

    @property
    def dual_volume(self) -> float:
        return (0.5 / self.spec.L) ** self.spec.n

    def modes(self):
        return np.arange(-self.spec.N // 2, self.spec.N // 2)

    def xi_axis(self):
        return self.modes() / (2.0 * self.spec.L)

    def xi_norm(self):
        ax = self.xi_axis()
        mesh = np.meshgrid(*([ax] * self.spec.n), indexing="ij")
        return np.sqrt(sum(m * m for m in mesh))

    def lp_norm(self, q) -> float:
        """Dual-cell quadrature of |F|^q; q = inf gives max |F|."""
        a = np.abs(self.coeffs)
        if q == math.inf:
            return float(a.max())
        return float((np.sum(a ** q) * self.dual_volume) ** (1.0 / q))

    def to_dict(self):
        flat = self.coeffs.ravel()
        inter = np.empty(2 * flat.size)
        inter[0::2] = flat.real
        inter[1::2] = flat.imag
        return {"spec": self.spec.to_dict(), "generator": self.label, "coeffs": inter.tolist()}

    @classmethod
    def from_dict(cls, d):
        try:
            spec = GridSpec(int(d["spec"]["n"]), float(d["spec"]["L"]), int(d["spec"]["N"]))
            inter = np.asarray(d["coeffs"], dtype=np.float64)
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed spectral function: {exc}") from exc
        if inter.size != 2 * spec.size:
            raise ConfigError(f"expected {2 * spec.size} interleaved coefficients, got {inter.size}")
        coeffs = (inter[0::2] + 1j * inter[1::2]).reshape(spec.shape)
        return cls(spec, coeffs, d.get("generator"))


def _phase(spec: GridSpec):
    """Per-mode factor that turns a plain DFT into the midpoint Riemann sum."""
    k = np.arange(-spec.N // 2, spec.N // 2)
    ph1 = np.exp(1j * math.pi * k * (1.0 - 1.0 / spec.N))
    out = ph1
    for _ in range(spec.n - 1):
        out = np.multiply.outer(out, ph1)
    return out


def forward(f: GridFunction) -> SpectralFunction:
    """coeffs(k) = sum_j exp(-2 pi i xi_k . x_j) f(x_j) h^n."""
    spec = f.spec
    dft = np.fft.fftshift(np.fft.fftn(f.grid))
    return SpectralFunction(spec, dft * _phase(spec) * spec.cell_volume, f.label)


def inverse_complex(F: SpectralFunction):
    spec = F.spec
    shifted = np.fft.ifftshift(F.coeffs * np.conj(_phase(spec)))
    return np.fft.ifftn(shifted) * (spec.N ** spec.n) * F.dual_volume


def inverse(F: SpectralFunction) -> GridFunction:
    """Real part of sum_k exp(2 pi i xi_k . x) F_k (2L)^-n at the midpoints."""
    return GridFunction(F.spec, inverse_complex(F).real)


def plancherel_defect(f: GridFunction) -> float:
    a = np.abs(f.values)
    l2 = math.sqrt(float(np.dot(a, a)) * f.spec.cell_volume)
    if l2 == 0:
        return 0.0
    return abs(forward(f).lp_norm(2) - l2) / l2


def sobolev_norm(f: GridFunction, s) -> float:
    """(sum_k |xi_k|^(2s) |F_k|^2 (2L)^-n)^(1/2); s = 0 is the L^2 norm."""
    if not s >= 0:
        raise ConfigError(f"Sobolev order must be >= 0, got {s}")
    F = forward(f)
    w = F.xi_norm() ** (2.0 * s)
    return float(math.sqrt(np.sum(w * np.abs(F.coeffs) ** 2) * F.dual_volume))


def frequency_split(f: GridFunction, R):
    """(f_{<R}, f_{>R}) by a sharp cutoff of the spectrum at |xi| <= R."""
    if not R > 0:
        raise ConfigError(f"frequency radius must be positive, got {R}")
    F = forward(f)
    keep = F.xi_norm() <= R
    low = inverse(SpectralFunction(f.spec, np.where(keep, F.coeffs, 0.0)))
    high = GridFunction(f.spec, f.values - low.values)
    return low, high


def band_leakage(f: GridFunction, R) -> float:
    """Fraction of spectral L^2 mass outside the ball |xi| <= R."""
    F = forward(f)
    e = np.abs(F.coeffs) ** 2
    tot = float(e.sum())
    if tot == 0:
        return 0.0
    return math.sqrt(float(e[F.xi_norm() > R].sum()) / tot)


def nyquist_radius(spec: GridSpec) -> float:
    """Largest |xi| present on the dual lattice."""
    return math.sqrt(spec.n) * spec.N / (4.0 * spec.L)


def low_frequency_constant(n, s) -> float:
    """(int_{|xi|<=1} |xi|^(-2s) d xi)^(1/2) for 0 <= 2s < n."""
    if not 0 <= 2 * s < n:
        raise ConfigError(f"need 0 <= 2s < n, got s={s}, n={n}")
    sphere = 2.0 * math.pi ** (n / 2.0) / gamma(n / 2.0)
    return math.sqrt(sphere / (n - 2.0 * s))


def low_frequency_sup_bound(f: GridFunction, R, p):
    """Both sides of ||f_{<R}||_inf <= C_s R^(n/p) ||f||_{H^s}, s = n(1/2 - 1/p)."""
    n = f.spec.n
    s = n * (0.5 - 1.0 / p)
    low, _ = frequency_split(f, R)
    lhs = float(np.max(np.abs(low.values)))
    rhs = low_frequency_constant(n, s) * R ** (n / p) * sobolev_norm(f, s)
    return lhs, rhs


def spectral_dilate(f: GridFunction, hfac) -> GridFunction:
    """hfac^-n f(x / hfac) using the trigonometric interpolant of f.

    Exact for band-limited f whose interpolant is negligible near the box
    edge; points with x / hfac outside the box get zero.
    """
    if not hfac > 0:
        raise ConfigError(f"dilation factor must be positive, got {hfac}")
    spec = f.spec
    F = forward(f)
    x = spec.axis() / hfac
    basis = np.exp(2j * math.pi * np.outer(x, F.xi_axis()))
    basis[np.abs(x) >= spec.L] = 0.0
    vals = F.coeffs * F.dual_volume
    for axis in range(spec.n):
        vals = np.moveaxis(np.tensordot(basis, vals, axes=([1], [axis])), 0, axis)
    return GridFunction(spec, vals.real * hfac ** -spec.n, dilation=f.dilation * hfac)


def _smooth_step(x):
    """C-infinity step: 0 for x <= 0, 1 for x >= 1."""
    x = np.clip(x, 0.0, 1.0)
    a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
    b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return a / (a + b)


def mollifier_hat(xi_norm):
    """Transform of a Schwartz function phi: 1 on |xi| <= 1, 0 for |xi| >= 2."""
    return 1.0 - _smooth_step(np.asarray(xi_norm) - 1.0)


def mollify(f: GridFunction, R) -> GridFunction:
    """(D_{1/R} phi) * f, computed spectrally as phi_hat(xi / R) f_hat."""
    F = forward(f)
    return inverse(SpectralFunction(f.spec, F.coeffs * mollifier_hat(F.xi_norm() / R)))
