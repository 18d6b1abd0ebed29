"""Cross-section geometry and fixed-free beam modal analysis.

A beam is a prismatic solid clamped at one end and free at the other.
Its n-th natural frequency is

    f_n = (1 / 2 pi) * (beta_n l)^2 * sqrt(E I / (rho A l^4))

where beta_n l solves the fixed-free characteristic equation
cos(x) cosh(x) = -1, E is Young's modulus (Pa), I the second moment of
area (m^4), rho the density (kg/m^3), A the section area (m^2), and l
the beam length (m).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .materials import Material

_SQRT3 = math.sqrt(3.0)


class Shape(str, Enum):
    SQUARE = "square"
    HEXAGON = "hexagon"
    CIRCLE = "circle"


@dataclass(frozen=True)
class CrossSection:
    """A symmetric beam cross-section, optionally hollow.

    `outer` is the side length for square/hexagon and the radius for
    circle (m).  A hollow section subtracts a concentric inner copy of
    the same shape with dimension `inner`.
    """

    shape: Shape
    outer: float
    inner: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "shape", Shape(self.shape))
        if self.outer <= 0:
            raise ValueError(f"outer dimension must be positive, got {self.outer}")
        if self.inner is not None and not 0 < self.inner < self.outer:
            raise ValueError(
                f"hollow inner dimension must be in (0, outer), got {self.inner}"
            )

    @classmethod
    def square(cls, side: float, inner: float | None = None) -> "CrossSection":
        return cls(Shape.SQUARE, side, inner)

    @classmethod
    def hexagon(cls, side: float, inner: float | None = None) -> "CrossSection":
        return cls(Shape.HEXAGON, side, inner)

    @classmethod
    def circle(cls, radius: float, inner: float | None = None) -> "CrossSection":
        return cls(Shape.CIRCLE, radius, inner)

    @property
    def hollow(self) -> bool:
        return self.inner is not None

    @property
    def wall_thickness(self) -> float | None:
        """Material thickness between inner and outer boundary (m); None if solid.

        For square/hexagon this is the apothem difference, for circles the
        radius difference.
        """
        if self.inner is None:
            return None
        if self.shape is Shape.SQUARE:
            return (self.outer - self.inner) / 2.0
        if self.shape is Shape.HEXAGON:
            return (self.outer - self.inner) * _SQRT3 / 2.0
        return self.outer - self.inner


def _solid_area(shape: Shape, dim: float) -> float:
    if shape is Shape.SQUARE:
        return dim * dim
    if shape is Shape.HEXAGON:
        return 1.5 * _SQRT3 * dim * dim
    return math.pi * dim * dim


def _solid_second_moment(shape: Shape, dim: float) -> float:
    # Centroidal axis; for the square this is the axis parallel to a side,
    # for the regular hexagon the axis parallel to a flat (its second
    # moment is the same about every centroidal axis).
    if shape is Shape.SQUARE:
        return dim**4 / 12.0
    if shape is Shape.HEXAGON:
        return 5.0 * _SQRT3 / 16.0 * dim**4
    return math.pi * dim**4 / 4.0


def area(section: CrossSection) -> float:
    """Cross-sectional area (m^2); hollow sections subtract the inner shape."""
    a = _solid_area(section.shape, section.outer)
    if section.inner is not None:
        a -= _solid_area(section.shape, section.inner)
    return a


def second_moment(section: CrossSection) -> float:
    """Second moment of area (m^4) about the centroidal bending axis."""
    i = _solid_second_moment(section.shape, section.outer)
    if section.inner is not None:
        i -= _solid_second_moment(section.shape, section.inner)
    return i


@dataclass(frozen=True)
class BeamSpec:
    """Material + cross-section + length: the unit of design."""

    material: Material
    section: CrossSection
    length: float

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError(f"length must be positive, got {self.length}")


@dataclass(frozen=True)
class ModeConstant:
    mode_index: int
    beta_l: float


def _characteristic(x: float) -> float:
    # cos(x) + sech(x) has the same roots as cos(x) cosh(x) = -1 but stays
    # bounded, so high mode indices cannot overflow cosh.
    if x > 350.0:
        sech = 2.0 * math.exp(-x) / (1.0 + math.exp(-2.0 * x))
    else:
        sech = 1.0 / math.cosh(x)
    return math.cos(x) + sech


@lru_cache(maxsize=None)
def _fixed_free_root(n: int) -> float:
    # Exactly one root per interval ((n-1) pi, n pi); the endpoints have
    # opposite characteristic signs because cos(k pi) = +/-1 dominates sech.
    lo = (n - 1) * math.pi
    hi = n * math.pi
    f_lo = _characteristic(lo)
    # Bisect to machine resolution: the residual of cos*cosh + 1 scales
    # with cosh(x), so a loose x-tolerance would leave visible residuals
    # at higher modes.
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = _characteristic(mid)
        if f_mid == 0.0:
            return mid
        if (f_lo < 0.0) == (f_mid < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def mode_constant(n: int) -> ModeConstant:
    """n-th root (beta_n l) of the fixed-free characteristic equation.

    Roots are found by bisection and cached; mode 1 is 1.875104...
    """
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"mode index must be an integer >= 1, got {n!r}")
    if n < 1:
        raise ValueError(f"mode index must be >= 1, got {n}")
    return ModeConstant(mode_index=n, beta_l=_fixed_free_root(n))


@dataclass(frozen=True)
class FrequencyInterval:
    """Frequency bounds (Hz) induced by a material's density range.

    `low` is the frequency at maximum density, `high` at minimum density,
    `nominal` at the nominal (midpoint) density.
    """

    low: float
    high: float
    nominal: float

    def __contains__(self, frequency: float) -> bool:
        return self.low <= frequency <= self.high


def _frequency(e: float, i: float, rho: float, a: float, length: float, beta_l: float) -> float:
    return beta_l**2 / (2.0 * math.pi) * math.sqrt(e * i / (rho * a * length**4))


def natural_frequency(beam: BeamSpec, n: int = 1) -> float | FrequencyInterval:
    """Natural frequency (Hz) of mode n.

    Returns a plain float for point-density materials and a
    FrequencyInterval for materials with a density range (frequency is
    decreasing in density, so low = f(rho_max), high = f(rho_min)).
    """
    beta_l = mode_constant(n).beta_l
    e = beam.material.youngs_modulus
    i = second_moment(beam.section)
    a = area(beam.section)
    if beam.material.density_range is None:
        return _frequency(e, i, beam.material.density, a, beam.length, beta_l)
    rho_min, rho_max = beam.material.density_range
    return FrequencyInterval(
        low=_frequency(e, i, rho_max, a, beam.length, beta_l),
        high=_frequency(e, i, rho_min, a, beam.length, beta_l),
        nominal=_frequency(e, i, beam.material.density, a, beam.length, beta_l),
    )


def frequency_bounds(beam: BeamSpec, n: int = 1) -> tuple[float, float]:
    """(low, high) frequency over the material's density bounds; collapses
    to a width-zero pair for point densities."""
    f = natural_frequency(beam, n)
    if isinstance(f, FrequencyInterval):
        return (f.low, f.high)
    return (f, f)


def nominal_frequency(beam: BeamSpec, n: int = 1) -> float:
    """Frequency at the nominal density, as a plain float."""
    f = natural_frequency(beam, n)
    return f.nominal if isinstance(f, FrequencyInterval) else f


def tip_deflection(beam: BeamSpec, force: float) -> float:
    """Static end-load tip deflection delta = F l^3 / (3 E I) (m).

    Linear-elastic small-deflection estimate only.
    """
    if force < 0:
        raise ValueError(f"force must be >= 0, got {force}")
    e = beam.material.youngs_modulus
    i = second_moment(beam.section)
    return force * beam.length**3 / (3.0 * e * i)
