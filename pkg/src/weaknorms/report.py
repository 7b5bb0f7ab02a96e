"""The record every verifier returns."""
from dataclasses import dataclass, field
import math


@dataclass
class InequalityReport:
    """One evaluation of ``lhs <= C * rhs_core``.

    ``ratio`` is lhs / rhs_core, the empirical stand-in for the unknown
    constant.  ``bound`` is set only when a numeric constant is known (so
    the ratio can be judged); ``scaling_drift`` is the largest relative
    change of the ratio under the dilations that were tried.
    """
    name: str
    params: dict
    lhs: float
    rhs_core: float
    function: str = None
    spec: dict = None
    bound: float = None
    scaling_drift: float = None
    drift_limit: float = None
    extra: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        if self.rhs_core > 0:
            return self.lhs / self.rhs_core
        return 0.0 if self.lhs == 0 else math.inf

    @property
    def degenerate(self) -> bool:
        return self.rhs_core == 0

    @property
    def violations(self):
        out = []
        if self.degenerate and self.lhs > 0:
            out.append(f"{self.name}: lhs={self.lhs:.6g} > 0 with vanishing right-hand side")
        if self.bound is not None and self.ratio > self.bound:
            out.append(f"{self.name}: ratio {self.ratio:.12g} exceeds bound {self.bound:.12g}")
        if (self.drift_limit is not None and self.scaling_drift is not None
                and self.scaling_drift > self.drift_limit):
            out.append(f"{self.name}: scaling drift {self.scaling_drift:.4g} exceeds {self.drift_limit:.4g}")
        for key, ok in self.extra.get("checks", {}).items():
            if not ok:
                out.append(f"{self.name}: check {key} failed")
        return out

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self):
        d = {
            "name": self.name,
            "params": self.params,
            "lhs": self.lhs,
            "rhs_core": self.rhs_core,
            "ratio": self.ratio if math.isfinite(self.ratio) else None,
            "degenerate": self.degenerate,
            "function": self.function,
            "spec": self.spec,
            "bound": self.bound,
            "scaling_drift": self.scaling_drift,
            "drift_limit": self.drift_limit,
            "ok": self.ok,
        }
        if self.extra:
            d["extra"] = self.extra
        return d


DILATIONS = (0.5, 2.0)


def dilation_drift(f, ratio_of, dilations=DILATIONS, dilate=None):
    """Largest |ratio(D_lam f) / ratio(f) - 1| over the given dilations.

    ``ratio_of`` maps a grid function to its lhs/rhs ratio.  ``dilate``
    defaults to generator resampling (grid.dilate).
    """
    if dilate is None:
        from .grid import dilate
    base = ratio_of(f)
    if not (base > 0 and math.isfinite(base)):
        return None
    worst = 0.0
    for lam in dilations:
        worst = max(worst, abs(ratio_of(dilate(f, lam)) / base - 1.0))
    return worst
