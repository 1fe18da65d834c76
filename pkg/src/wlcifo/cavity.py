"""Fabry-Perot compound-mirror algebra.

Any two-mirror cavity looks, from outside, like a single mirror with a
frequency-dependent complex reflectivity. Conventions, fixed once:

* one-way propagation multiplies the field by exp(-i*theta), theta from
  ``dispersion.propagation_phase`` (media inside the cavity are honored);
* a mirror of amplitude reflectivity r reflects with +r on its coating side
  and -r on its substrate side (Stokes relation), encoded by
  ``substrate_inward``: True means the substrate faces the cavity interior,
  so the interior reflection is -r and the exterior one +r;
* per-pass amplitude loss ``a`` multiplies the field once per one-way
  traversal of the cavity, so a round trip carries a**2 and a transmission
  a**1, and losses compose when cavities are cascaded.

With round-trip amplitude rho and round-trip phase phi the denominator of
every geometric buildup is 1 - rho*e^{i*phi}, whose squared magnitude is
(1-rho)^2 * (1 + F'*sin^2(phi/2)) with the finesse coefficient
F' = 4*rho/(1-rho)^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dispersion import FilledPath, VACUUM, IndexModel, propagation_phase
from .optics_core import ModelDivergenceError

# Round trips with amplitude above this diverge too slowly to trust.
MAX_ROUND_TRIP_AMPLITUDE = 1.0 - 1e-12


@dataclass(frozen=True)
class Mirror:
    """Lossless mirror: amplitude reflectivity r and transmissivity t.

    substrate_inward flags mirrors mounted with the substrate toward the
    cavity they belong to; it flips the sign (adds pi to the phase) of the
    interior reflection and thereby shifts the cavity resonance by half a
    free spectral range.
    """

    r: float
    t: float
    substrate_inward: bool = False
    label: str = ""

    def __post_init__(self):
        if not 0.0 <= self.r <= 1.0:
            raise ValueError(f"mirror {self.label!r}: r must be in [0, 1]")
        if not 0.0 <= self.t <= 1.0:
            raise ValueError(f"mirror {self.label!r}: t must be in [0, 1]")
        if self.r**2 + self.t**2 > 1.0 + 1e-12:
            raise ValueError(f"mirror {self.label!r}: r^2 + t^2 exceeds 1")

    @property
    def reflection_inside(self) -> float:
        """Signed reflection amplitude seen from the cavity interior."""
        return -self.r if self.substrate_inward else self.r

    @property
    def reflection_outside(self) -> float:
        """Signed reflection amplitude seen from outside the cavity."""
        return -self.reflection_inside


@dataclass(frozen=True)
class CavitySpec:
    """Two-mirror cavity, optionally part-filled by a dispersive medium."""

    front: Mirror
    back: Mirror
    length: float  # m
    per_pass_loss: float = 1.0  # amplitude factor per one-way traversal
    medium: IndexModel = VACUUM
    medium_length: float = 0.0  # m

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError("cavity length must be positive")
        if not 0.0 < self.per_pass_loss <= 1.0:
            raise ValueError("per-pass loss must lie in (0, 1]")

    @property
    def path(self) -> FilledPath:
        return FilledPath(self.length, self.medium_length, self.medium)


@dataclass(frozen=True)
class ComplexCoefficient:
    """Amplitude coefficient split into magnitude and phase."""

    magnitude: float
    phase: float

    @classmethod
    def from_complex(cls, z) -> "ComplexCoefficient":
        return cls(np.abs(z), np.angle(z))

    @property
    def as_complex(self):
        return self.magnitude * np.exp(1j * self.phase)


def finesse_coefficient(rho):
    """F' = 4*rho/(1 - rho)^2 for round-trip amplitude product rho."""
    rho = np.asarray(rho, dtype=float) if np.ndim(rho) else rho
    if np.any(np.asarray(rho) < 0):
        raise ValueError("round-trip amplitude must be >= 0")
    if np.any(np.asarray(rho) >= MAX_ROUND_TRIP_AMPLITUDE):
        raise ModelDivergenceError(
            "overcoupled round trip: amplitude product >= 1, buildup diverges"
        )
    return 4.0 * rho / (1.0 - rho) ** 2


def _round_trip(cav: CavitySpec, omega):
    """Complex round-trip factor seen inside the cavity."""
    theta = propagation_phase(cav.path, omega)
    rt = (
        cav.front.reflection_inside
        * cav.back.reflection_inside
        * cav.per_pass_loss**2
        * np.exp(-2j * theta)
    )
    if np.any(np.abs(rt) >= MAX_ROUND_TRIP_AMPLITUDE):
        raise ModelDivergenceError(
            f"cavity {cav.front.label!r}/{cav.back.label!r}: "
            "round-trip amplitude >= 1, buildup diverges"
        )
    return theta, rt


def _reflection(cav: CavitySpec, omega):
    theta, rt = _round_trip(cav, omega)
    bounce = cav.back.reflection_inside * cav.per_pass_loss**2 * np.exp(-2j * theta)
    return cav.front.reflection_outside + cav.front.t**2 * bounce / (1.0 - rt)


def _back_reflection(cav: CavitySpec, omega):
    theta, rt = _round_trip(cav, omega)
    bounce = cav.front.reflection_inside * cav.per_pass_loss**2 * np.exp(-2j * theta)
    return cav.back.reflection_outside + cav.back.t**2 * bounce / (1.0 - rt)


def _transmission(cav: CavitySpec, omega):
    theta, rt = _round_trip(cav, omega)
    return cav.front.t * cav.back.t * cav.per_pass_loss * np.exp(-1j * theta) / (1.0 - rt)


def compound_reflectivity(cav: CavitySpec, omega) -> ComplexCoefficient:
    """Reflection coefficient of the cavity seen from outside the front mirror."""
    return ComplexCoefficient.from_complex(_reflection(cav, omega))


def compound_transmissivity(cav: CavitySpec, omega) -> ComplexCoefficient:
    """Transmission coefficient through the cavity (same in both directions)."""
    return ComplexCoefficient.from_complex(_transmission(cav, omega))


def compound_back_reflectivity(cav: CavitySpec, omega) -> ComplexCoefficient:
    """Reflection coefficient seen from outside the back mirror."""
    return ComplexCoefficient.from_complex(_back_reflection(cav, omega))


def _cascade(inner: CavitySpec, gap: FilledPath, outer: Mirror, omega):
    """Inner cavity treated as one frequency-dependent mirror, composed with
    a second resonator formed by the (possibly dispersive) gap and ``outer``."""
    r_front = _reflection(inner, omega)
    r_back = _back_reflection(inner, omega)
    t_in = _transmission(inner, omega)
    theta_gap = propagation_phase(gap, omega)
    hop = outer.reflection_inside * np.exp(-2j * theta_gap)
    rt = r_back * hop
    if np.any(np.abs(rt) >= MAX_ROUND_TRIP_AMPLITUDE):
        raise ModelDivergenceError("cascaded gap round trip diverges")
    refl = r_front + t_in**2 * hop / (1.0 - rt)
    trans = t_in * outer.t * np.exp(-1j * theta_gap) / (1.0 - rt)
    return refl, trans


def cascaded_reflectivity(
    inner: CavitySpec, gap: FilledPath, outer: Mirror, omega
) -> ComplexCoefficient:
    """Reflection of inner cavity + gap + auxiliary mirror, seen from the front."""
    refl, _ = _cascade(inner, gap, outer, omega)
    return ComplexCoefficient.from_complex(refl)


def cascaded_transmissivity(
    inner: CavitySpec, gap: FilledPath, outer: Mirror, omega
) -> ComplexCoefficient:
    """Transmission through inner cavity + gap + auxiliary mirror."""
    _, trans = _cascade(inner, gap, outer, omega)
    return ComplexCoefficient.from_complex(trans)
