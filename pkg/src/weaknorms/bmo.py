"""Dyadic cubes: BMO, the maximal function, Calderon-Zygmund stopping time.

All suprema over "cubes" run over grid-aligned dyadic cubes of the box,
level 0 being the whole box.  The dyadic BMO value is therefore a lower
bound for the true BMO norm.  Cubes are half-open, like the grid cells,
so selected cubes are disjoint exactly.
"""
from dataclasses import dataclass
import math

import numpy as np

from . import _kernels
from .fourier import sobolev_norm
from .grid import ConfigError, GridFunction
from .report import DILATIONS, InequalityReport, dilation_drift


class PreconditionError(ConfigError):
    """Input violates the hypothesis of the decomposition."""


@dataclass(frozen=True, order=True)
class DyadicCube:
    level: int
    corner: tuple

    def __post_init__(self):
        object.__setattr__(self, "corner", tuple(int(c) for c in self.corner))
        if self.level < 0 or any(not 0 <= c < 2 ** self.level for c in self.corner):
            raise ConfigError(f"corner {self.corner} out of range for level {self.level}")

    @classmethod
    def root(cls, n):
        return cls(0, (0,) * n)

    def check(self, spec):
        if len(self.corner) != spec.n:
            raise ConfigError(f"cube dimension {len(self.corner)} does not match grid dimension {spec.n}")
        if 2 ** self.level > spec.N:
            raise ConfigError(f"cube level {self.level} is finer than the grid (N={spec.N})")

    def cells(self, spec) -> int:
        """Cells per side."""
        return spec.N >> self.level

    def side(self, spec) -> float:
        return 2.0 * spec.L / 2 ** self.level

    def volume(self, spec) -> float:
        return self.side(spec) ** spec.n

    def slices(self, spec):
        self.check(spec)
        b = self.cells(spec)
        return tuple(slice(c * b, (c + 1) * b) for c in self.corner)

    def lower_corner(self, spec):
        return tuple(-spec.L + c * self.side(spec) for c in self.corner)

    def children(self):
        n = len(self.corner)
        for offs in np.ndindex(*(2,) * n):
            yield DyadicCube(self.level + 1, tuple(2 * c + o for c, o in zip(self.corner, offs)))

    def contains(self, other) -> bool:
        if other.level < self.level:
            return False
        shift = other.level - self.level
        return all(c >> shift == s for c, s in zip(other.corner, self.corner))

    def to_dict(self):
        return {"level": self.level, "corner": list(self.corner)}

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["level"]), tuple(d["corner"]))


def _max_level(spec, max_level):
    top = int(math.log2(spec.N))
    if max_level is None:
        return top
    if max_level < 0 or max_level > top:
        raise ConfigError(f"max_level must lie in [0, {top}] for N={spec.N}, got {max_level}")
    return max_level


def cube_average(f: GridFunction, Q: DyadicCube) -> float:
    # pairwise over dyadic children, the same sum cz_decompose thresholds against
    block = f.grid[Q.slices(f.spec)]
    s = block
    while s.shape[0] > 1:
        s = _sum_children(s)
    return float(s.reshape(())) / block.size


def bmo_norm(f: GridFunction, max_level=None) -> float:
    """max over dyadic cubes up to ``max_level`` of (1/|Q|) int_Q |f - f_Q|."""
    top = _max_level(f.spec, max_level)
    g = f.grid
    return max(float(_kernels.mean_oscillation(g, lvl).max()) for lvl in range(top + 1))


def oscillation_by_level(f: GridFunction, max_level=None):
    top = _max_level(f.spec, max_level)
    return [float(_kernels.mean_oscillation(f.grid, lvl).max()) for lvl in range(top + 1)]


def _expand(a, times):
    for axis in range(a.ndim):
        a = np.repeat(a, times, axis=axis)
    return a


def maximal(f: GridFunction, max_level=None) -> GridFunction:
    """Uncentred dyadic maximal function of |f| over levels 0..max_level."""
    spec = f.spec
    top = _max_level(spec, max_level)
    a = np.abs(f.grid)
    out = np.zeros(spec.shape)
    for lvl in range(top + 1):
        b = spec.N >> lvl
        means = _kernels.block_sums(a, lvl) / b ** spec.n
        out = np.maximum(out, _expand(means, b))
    return GridFunction(spec, out)


@dataclass(frozen=True, eq=False)
class CubeDecomposition:
    M: float
    root: DyadicCube
    selected: list
    residual_max: float

    def to_dict(self):
        return {
            "M": self.M,
            "root": self.root.to_dict(),
            "selected": [dict(q.to_dict(), average=avg) for q, avg in self.selected],
            "residual_max": self.residual_max,
        }

    @classmethod
    def from_dict(cls, d):
        try:
            sel = [(DyadicCube.from_dict(e), float(e["average"])) for e in d["selected"]]
            return cls(float(d["M"]), DyadicCube.from_dict(d["root"]), sel, float(d["residual_max"]))
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed cube decomposition: {exc}") from exc


def cz_decompose(f: GridFunction, root: DyadicCube, M) -> CubeDecomposition:
    """Stopping-time selection of dyadic subcubes of ``root`` with |f|-average > M.

    Halving continues inside unselected cubes down to single cells, so the
    unselected part of ``root`` satisfies |f| <= M cell by cell.
    """
    spec = f.spec
    n = spec.n
    a = np.abs(f.grid[root.slices(spec)])
    depth = int(math.log2(a.shape[0]))

    # sums[k] holds block sums at k levels below the root; each parent is the
    # float sum of its own children, which keeps M < avg <= 2^n M exact
    sums = [None] * (depth + 1)
    sums[depth] = a
    for k in range(depth, 0, -1):
        sums[k - 1] = _sum_children(sums[k])
    root_avg = float(sums[0].reshape(())) / a.size
    if not M >= root_avg:
        raise PreconditionError(f"threshold M={M:g} is below the root average {root_avg:g}")

    selected = []
    covered = np.zeros(a.shape, dtype=bool)
    active = np.ones((1,) * n, dtype=bool)
    for k in range(1, depth + 1):
        cand = _expand(active, 2)
        avg = sums[k] / float((a.shape[0] >> k) ** n)
        hit = cand & (avg > M)
        for idx in zip(*np.nonzero(hit)):
            corner = tuple(root.corner[i] * 2 ** k + int(idx[i]) for i in range(n))
            selected.append((DyadicCube(root.level + k, corner), float(avg[idx])))
        covered |= _expand(hit, a.shape[0] >> k)
        active = cand & ~hit
    rest = a[~covered]
    residual = float(rest.max()) if rest.size else 0.0
    selected.sort()
    return CubeDecomposition(float(M), root, selected, residual)


def _sum_children(s):
    n = s.ndim
    half = s.shape[0] // 2
    shape = []
    for _ in range(n):
        shape.extend((half, 2))
    return s.reshape(shape).sum(axis=tuple(range(1, 2 * n, 2)))


def check_decomposition(f: GridFunction, dec: CubeDecomposition):
    """Re-derive every decomposition invariant from the raw samples."""
    spec = f.spec
    n = spec.n
    a = np.abs(f.grid)
    M = dec.M
    cover = np.zeros(spec.shape, dtype=np.int64)
    two_sided = True
    total = 0.0
    for q, _ in dec.selected:
        block = a[q.slices(spec)]
        avg = float(np.mean(block))
        two_sided &= M < avg <= 2 ** n * M
        cover[q.slices(spec)] += 1
        total += q.volume(spec)
    inside = np.zeros(spec.shape, dtype=bool)
    inside[dec.root.slices(spec)] = True
    root_int = float(np.sum(a[dec.root.slices(spec)])) * spec.cell_volume
    rest = a[inside & (cover == 0)]
    resid = float(rest.max()) if rest.size else 0.0
    return {
        "average_bounds": bool(two_sided),
        "total_measure": bool(total <= root_int / M),
        "disjoint": bool(cover.max(initial=0) <= 1 and not cover[~inside].any()),
        "residual": bool(resid <= M and resid == dec.residual_max),
    }


@dataclass
class JNFit:
    alphas: np.ndarray
    measures: np.ndarray
    slope: float
    intercept: float
    r2: float
    points: int
    degenerate: bool

    @property
    def decays(self) -> bool:
        return not self.degenerate and self.slope < 0

    def to_dict(self):
        return {
            "name": "jn",
            "alphas": self.alphas.tolist(),
            "measures": self.measures.tolist(),
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r2,
            "points": self.points,
            "degenerate": self.degenerate,
        }


def oscillation_measure(f: GridFunction, Q: DyadicCube, alphas):
    """|{x in Q : |f - f_Q| > alpha}| for each alpha."""
    block = f.grid[Q.slices(f.spec)]
    dev = np.sort(np.abs(block - block.mean()).ravel())
    counts = dev.size - np.searchsorted(dev, np.asarray(alphas, dtype=np.float64), side="right")
    return counts * f.spec.cell_volume


def jn_decay_check(f: GridFunction, Q: DyadicCube, alphas, fit_start=None) -> JNFit:
    """Least-squares fit of log m(alpha) against alpha where m(alpha) > 0."""
    alphas = np.asarray(alphas, dtype=np.float64)
    m = oscillation_measure(f, Q, alphas)
    use = m > 0
    if fit_start is not None:
        use &= alphas >= fit_start
    k = int(use.sum())
    if k < 3:
        return JNFit(alphas, m, math.nan, math.nan, math.nan, k, True)
    x, y = alphas[use], np.log(m[use])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return JNFit(alphas, m, float(slope), float(intercept), r2, k, False)


def hn2_bmo_check(f: GridFunction, max_level=None, dilations=DILATIONS) -> InequalityReport:
    """Dyadic BMO against the H^{n/2} norm; the constant is tracked empirically."""
    n = f.spec.n

    def parts(g):
        return bmo_norm(g, max_level), sobolev_norm(g, n / 2.0)

    lhs, rhs = parts(f)
    rep = InequalityReport("hn2-bmo", {"s": n / 2.0, "max_level": max_level}, lhs, rhs,
                           function=f.label, spec=f.spec.to_dict())
    if f.generator is not None and dilations:
        def ratio(g):
            b, s = parts(g)
            return b / s if s > 0 else math.nan
        try:
            rep.scaling_drift = dilation_drift(f, ratio, dilations)
        except ConfigError as exc:
            rep.extra["drift_skipped"] = str(exc)
    return rep
