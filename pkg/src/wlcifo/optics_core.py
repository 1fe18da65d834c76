"""Carrier/GW parameterization and the GW-induced phase modulation of light.

A gravitational wave of strain h and angular frequency w_g stretches one
interferometer axis while squeezing the other, so light of angular frequency
w accumulates, over one arm round trip of duration tau = 2L/c,

    phi_x = w*tau - (w*h/w_g) * sin(w_g*tau/2) * cos(w_g*(t - tau/2))
    phi_y = w*tau + (w*h/w_g) * sin(w_g*tau/2) * cos(w_g*(t - tau/2))

The oscillating part acts as a weak phase modulation with index

    beta = (h*w/w_g) * sin(w_g*tau/2)

which seeds the two first-order sidebands at w +/- w_g.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Speed of light fixed to the round value used by the reference parameter set,
# not CODATA; the mode integers below assume it.
C_LIGHT = 3.0e8  # m/s

TWO_PI = 2.0 * math.pi


class ModelDivergenceError(ValueError):
    """A cavity round trip has amplitude >= 1; geometric buildup diverges."""


@dataclass(frozen=True)
class CarrierSpec:
    """Laser carrier, defined by its vacuum wavelength."""

    wavelength_vacuum: float  # m

    def __post_init__(self):
        if self.wavelength_vacuum <= 0:
            raise ValueError("carrier wavelength must be positive")

    @property
    def angular_frequency(self) -> float:
        return TWO_PI * C_LIGHT / self.wavelength_vacuum

    @property
    def wavenumber(self) -> float:
        return TWO_PI / self.wavelength_vacuum


@dataclass(frozen=True)
class GwSpec:
    """Gravitational wave: dimensionless strain and angular frequency."""

    strain_amplitude: float
    gw_angular_frequency: float  # rad/s

    def __post_init__(self):
        if self.strain_amplitude < 0:
            raise ValueError("strain amplitude must be >= 0")
        if self.gw_angular_frequency < 0:
            raise ValueError("GW angular frequency must be >= 0")


@dataclass(frozen=True)
class RoundTripSpec:
    """One-arm geometry; tau is the light round-trip time 2L/c."""

    arm_length: float  # m

    def __post_init__(self):
        if self.arm_length <= 0:
            raise ValueError("arm length must be positive")

    @property
    def round_trip_time(self) -> float:
        return 2.0 * self.arm_length / C_LIGHT


def _sinc(x):
    """sin(x)/x with a series branch near zero to avoid 0/0.

    The series branch engages for |x| < 5e-7 (i.e. |w_g*tau| < 1e-6 when
    called with x = w_g*tau/2), where the direct quotient starts losing
    digits to cancellation.
    """
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 5e-7
    safe = np.where(small, 1.0, x)
    direct = np.sin(safe) / safe
    x2 = x * x
    series = 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    out = np.where(small, series, direct)
    return out if out.ndim else float(out)


def modulation_amplitude(strain, omega_carrier, round_trip_time, omega_gw):
    """Sideband modulation index beta = h*w*(tau/2)*sinc(w_g*tau/2).

    Equals (h*w/w_g)*sin(w_g*tau/2) away from w_g = 0 and tends to the
    finite limit h*w*tau/2 at zero GW frequency.
    """
    half = 0.5 * round_trip_time
    return strain * omega_carrier * half * _sinc(np.asarray(omega_gw) * half)


def modulation_index(gw: GwSpec, carrier: CarrierSpec, rt: RoundTripSpec):
    """Modulation index beta for the given GW, carrier and arm geometry."""
    return modulation_amplitude(
        gw.strain_amplitude,
        carrier.angular_frequency,
        rt.round_trip_time,
        gw.gw_angular_frequency,
    )


def sideband_wavenumbers(carrier: CarrierSpec, gw: GwSpec):
    """Vacuum wavenumbers (k_c, k_plus, k_minus) of carrier and sidebands."""
    w = carrier.angular_frequency
    wg = gw.gw_angular_frequency
    return w / C_LIGHT, (w + wg) / C_LIGHT, (w - wg) / C_LIGHT


def gw_arm_phase(axis: str, gw: GwSpec, carrier: CarrierSpec, rt: RoundTripSpec, t):
    """Phase accumulated over one arm round trip ending at time t.

    axis "x" carries the minus sign of the modulation term, axis "y" the
    plus sign; their modulations are exactly opposite at all times.
    """
    if axis not in ("x", "y"):
        raise ValueError("axis must be 'x' or 'y'")
    w = carrier.angular_frequency
    tau = rt.round_trip_time
    beta = modulation_index(gw, carrier, rt)
    osc = np.cos(gw.gw_angular_frequency * (np.asarray(t) - 0.5 * tau))
    sign = -1.0 if axis == "x" else 1.0
    out = w * tau + sign * beta * osc
    return out if np.ndim(out) else float(out)


def wrap_phase(x):
    """Reduce a phase to the interval (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(x), TWO_PI)
