"""Box bounds, reflective folding, and search regions.

Out-of-range coordinates are brought back by *reflective folding*: the point
bounces off the walls (triangle wave) until it lands inside.  Coordinates
already inside the box pass through untouched, bit for bit.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DimensionMismatch
from .rng import RngStream


def as_bounds(bounds, dim: int | None = None) -> np.ndarray:
    """Validate and return bounds as a float (d, 2) array with lo < hi."""
    b = np.asarray(bounds, dtype=float)
    if b.ndim == 1 and b.shape == (2,) and dim is not None:
        b = np.tile(b, (dim, 1))
    if b.ndim != 2 or b.shape[1] != 2:
        raise ConfigError(f"bounds must have shape (d, 2), got {b.shape}")
    if dim is not None and b.shape[0] != dim:
        raise DimensionMismatch(f"bounds are for d={b.shape[0]}, expected d={dim}")
    if not np.all(np.isfinite(b)):
        raise ConfigError("bounds must be finite")
    if not np.all(b[:, 0] < b[:, 1]):
        raise ConfigError("each lower bound must be strictly below its upper bound")
    return b


def fold_into_interval(x, lo: float, hi: float):
    """Reflect values into [lo, hi]; in-range values are returned unchanged."""
    if not lo < hi:
        raise ConfigError(f"need lo < hi, got [{lo}, {hi}]")
    x = np.asarray(x, dtype=float)
    width = hi - lo
    # Position along a period-2*width triangle wave anchored at lo.
    phase = np.mod(x - lo, 2.0 * width)
    folded = lo + np.where(phase <= width, phase, 2.0 * width - phase)
    out = np.where((x >= lo) & (x <= hi), x, folded)
    return float(out) if out.ndim == 0 else out


def fold_into_bounds(x: np.ndarray, bounds: np.ndarray) -> np.ndarray:
    """Reflect each coordinate of `x` into its [lo, hi] from a (d, 2) array."""
    x = np.asarray(x, dtype=float)
    lo = bounds[..., 0]
    hi = bounds[..., 1]
    width = hi - lo
    phase = np.mod(x - lo, 2.0 * width)
    folded = lo + np.where(phase <= width, phase, 2.0 * width - phase)
    return np.where((x >= lo) & (x <= hi), x, folded)


@dataclass(frozen=True, eq=False)
class SearchRegion:
    """A box, optionally intersected with a ball around `center`.

    The plain-box form describes a full search domain; the ball form scopes
    a local search to a shrinking neighbourhood of an anchor point.
    """

    bounds: np.ndarray
    center: np.ndarray | None = None
    radius: float | None = None
    _box: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        b = as_bounds(self.bounds)
        object.__setattr__(self, "bounds", b)
        if (self.center is None) != (self.radius is None):
            raise ConfigError("center and radius must be given together")
        if self.center is not None:
            c = np.asarray(self.center, dtype=float)
            if c.shape != (b.shape[0],):
                raise DimensionMismatch(
                    f"center has shape {c.shape}, bounds are for d={b.shape[0]}"
                )
            if not np.all((c >= b[:, 0]) & (c <= b[:, 1])):
                raise ConfigError("center must lie inside bounds")
            if not self.radius > 0:
                raise ConfigError(f"radius must be > 0, got {self.radius}")
            object.__setattr__(self, "center", c)
            # Tightest box enclosing ball-and-bounds; used for sampling scale.
            box = np.column_stack(
                [np.maximum(b[:, 0], c - self.radius), np.minimum(b[:, 1], c + self.radius)]
            )
        else:
            box = b
        object.__setattr__(self, "_box", box)

    @property
    def dim(self) -> int:
        return self.bounds.shape[0]

    @property
    def is_ball(self) -> bool:
        return self.center is not None

    @property
    def box_widths(self) -> np.ndarray:
        """Per-coordinate widths of the tightest enclosing box."""
        return self._box[:, 1] - self._box[:, 0]

    @property
    def scale(self) -> float:
        """Characteristic length: ball radius, else half the mean box width."""
        if self.is_ball:
            return float(self.radius)
        return float(np.mean(self.box_widths)) / 2.0

    @property
    def mean_pair_sq(self) -> float:
        """Mean squared distance between two independent uniform samples.

        Exact for a box (sum of widths^2 / 6) and for a full ball
        (2 d R^2 / (d + 2)); the ball value is kept as the nominal scale
        even when bounds clip the ball.
        """
        if self.is_ball:
            return float(2.0 * self.dim * self.radius**2 / (self.dim + 2.0))
        w = self.box_widths
        return float(np.sum(w * w)) / 6.0

    def contains(self, x: np.ndarray) -> bool:
        inside_box = bool(np.all((x >= self.bounds[:, 0]) & (x <= self.bounds[:, 1])))
        if not inside_box or not self.is_ball:
            return inside_box
        return float(np.linalg.norm(x - self.center)) <= self.radius * (1 + 1e-12)

    def contain(self, x: np.ndarray) -> np.ndarray:
        """Map an arbitrary point into the region.

        For a ball the radial distance is folded into [0, radius] first (a
        pure contraction), then coordinates are folded into the box.  The box
        fold moves each coordinate toward the interior, so it cannot push the
        point back outside the ball.
        """
        x = np.asarray(x, dtype=float)
        if self.is_ball:
            offset = x - self.center
            r = float(np.linalg.norm(offset))
            if r > self.radius:
                r_folded = fold_into_interval(r, 0.0, float(self.radius))
                x = self.center + offset * (r_folded / r)
        return fold_into_bounds(x, self.bounds)

    def sample(self, rng: RngStream) -> np.ndarray:
        """Draw a point from the region.

        Boxes are sampled exactly uniformly.  Ball regions are sampled
        uniformly in the ball and folded into the box, which is exact when
        the ball sits fully inside the bounds and a mild approximation when
        it pokes out.
        """
        if not self.is_ball:
            lo = self._box[:, 0]
            return lo + self.box_widths * rng.gen.random(self.dim)
        d = self.dim
        v = rng.gen.standard_normal(d)
        norm = float(np.linalg.norm(v))
        if norm <= 1e-12:
            return self.center.copy()
        r = self.radius * rng.gen.random() ** (1.0 / d)
        return fold_into_bounds(self.center + (r / norm) * v, self.bounds)
