"""Refractive-index models and dispersive propagation phase.

A cavity of length L partially filled (length l) by a medium of index n(w)
gives the one-way propagation phase

    theta(w) = (w/c)*(L - l) + n(w)*(w/c)*l

An anomalous medium with

    dn/dw |_{w0} = -L / (l * w0)

cancels the frequency dependence of the round-trip phase at w0, so a cavity
resonant at w0 stays (nearly) resonant over the medium's linear band: a
white light cavity. ``Linear`` is the idealized index; ``LorentzianDerivative``
shapes the index like the derivative of a Lorentzian, which is linear only
near the line center and turns around at |w - w0| = linewidth/sqrt(3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .optics_core import C_LIGHT, TWO_PI


@dataclass(frozen=True)
class Vacuum:
    """Unit refractive index at all frequencies."""

    def excess_index_at(self, omega):
        return np.zeros_like(np.asarray(omega, dtype=float)) if np.ndim(omega) else 0.0

    def index_at(self, omega):
        return 1.0 + self.excess_index_at(omega)


@dataclass(frozen=True)
class Linear:
    """n(w) = 1 + slope*(w - center); n(center) = 1 by construction.

    band_halfwidth (rad/s) declares the band over which the linear law is
    taken to hold; it is bookkeeping for flatness checks, not a cutoff.
    """

    center: float  # rad/s
    slope: float  # s/rad
    band_halfwidth: float | None = None

    def excess_index_at(self, omega):
        """n(w) - 1, computed directly: the excess is ~1e-15 and would lose
        most of its digits round-tripping through 1 + x."""
        return self.slope * (np.asarray(omega, dtype=float) - self.center)

    def index_at(self, omega):
        return 1.0 + self.excess_index_at(omega)


@dataclass(frozen=True)
class LorentzianDerivative:
    """Index shaped like d/dw of a Lorentzian of half-width ``linewidth``.

    n(w) = 1 - 2*scale*G^2*d/(d^2 + G^2)^2   with d = w - center, G = linewidth

    n(center) = 1 and the center slope is -2*scale/G^2; the lineshape is
    within 1% of linear for |d| < G/20 and its local slope flips sign at
    |d| = G/sqrt(3).
    """

    center: float  # rad/s
    linewidth: float  # rad/s
    scale: float

    @classmethod
    def from_center_slope(cls, center, linewidth, slope):
        """Solve the scale so dn/dw at the center equals ``slope``."""
        return cls(center, linewidth, -0.5 * slope * linewidth**2)

    @property
    def center_slope(self):
        return -2.0 * self.scale / self.linewidth**2

    def excess_index_at(self, omega):
        d = np.asarray(omega, dtype=float) - self.center
        g2 = self.linewidth**2
        return -2.0 * self.scale * g2 * d / (d * d + g2) ** 2

    def index_at(self, omega):
        return 1.0 + self.excess_index_at(omega)

    def slope_at(self, omega):
        """Analytic local slope dn/dw."""
        d = np.asarray(omega, dtype=float) - self.center
        g2 = self.linewidth**2
        return -2.0 * self.scale * g2 * (g2 - 3.0 * d * d) / (d * d + g2) ** 3


VACUUM = Vacuum()

IndexModel = Vacuum | Linear | LorentzianDerivative


@dataclass(frozen=True)
class FilledPath:
    """A propagation path of total_length with medium_length of it filled."""

    total_length: float  # m
    medium_length: float = 0.0  # m
    medium: IndexModel = VACUUM

    def __post_init__(self):
        if not 0.0 <= self.medium_length <= self.total_length:
            raise ValueError("medium length must lie in [0, total_length]")


def index_at(model: IndexModel, omega):
    """Refractive index of the model at angular frequency omega."""
    return model.index_at(omega)


def wlc_slope(compensated_length: float, medium_length: float, omega0: float) -> float:
    """Index slope -L/(l*w0) that flattens a round trip of length L
    hosted in a medium of length l at center frequency w0."""
    if medium_length <= 0:
        raise ValueError("no medium to host dispersion (medium_length must be > 0)")
    return -compensated_length / (medium_length * omega0)


def medium_excess_phase(path: FilledPath, omega):
    """One-way phase in excess of vacuum: (n(w) - 1)*(w/c)*l.

    Kept separate from the vacuum part because the excess is small (rad)
    while the vacuum phase is ~1e10 rad; stencils differentiating the total
    would lose everything to cancellation.
    """
    if path.medium_length == 0.0 or isinstance(path.medium, Vacuum):
        return np.zeros_like(np.asarray(omega, dtype=float)) if np.ndim(omega) else 0.0
    omega = np.asarray(omega, dtype=float) if np.ndim(omega) else omega
    return path.medium.excess_index_at(omega) * omega * path.medium_length / C_LIGHT


def propagation_phase(path: FilledPath, omega):
    """One-way propagation phase theta = k*(L-l) + n(w)*k*l."""
    omega = np.asarray(omega, dtype=float) if np.ndim(omega) else omega
    return omega * path.total_length / C_LIGHT + medium_excess_phase(path, omega)


def round_trip_phase_derivative(paths, omega0: float, step: float = TWO_PI) -> float:
    """d(theta_rt)/dw at omega0 for a round trip out and back over ``paths``.

    The vacuum contribution 2*sum(L)/c is exact; the medium excess is
    differentiated with a 5-point central stencil of the given step
    (default 2*pi rad/s, i.e. 1 Hz). Optical frequencies ~2e15 rad/s have
    float64 granularity ~0.25 rad/s, so the stencil evaluates at the
    realized grid frequencies and differentiates through their exact
    offsets (degree-4 interpolation) rather than assuming equal spacing.
    """
    paths = list(paths)
    if not paths:
        raise ValueError("round trip needs at least one path")
    vacuum_part = 2.0 * sum(p.total_length for p in paths) / C_LIGHT

    def excess(w):
        return sum(medium_excess_phase(p, w) for p in paths)

    realized = [float(omega0 + k * step) for k in (-2, -1, 0, 1, 2)]
    # close floats subtract exactly, so these offsets carry no rounding
    deltas = np.array([w - omega0 for w in realized])
    values = np.array([excess(w) for w in realized])
    slope = np.polyfit(deltas, values, 4)[-2]
    return vacuum_part + 2.0 * float(slope)
