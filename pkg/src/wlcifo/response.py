"""Detector output |dI| versus GW frequency.

The detector is reduced to a single Fabry-Perot cavity of length L between a
real end mirror (amplitude r2) and a frequency-dependent compound front
mirror: reflectivity R1C(w) for the carrier, R1S(w +/- w_g) for the two GW
sidebands, which live in a resonator of length L_S (equal to L when the
sidebands share the arms). Steady-state fields are geometric series over
round trips; beating the transmitted sidebands against a homodyne field
A*exp(i*(w*t + phi)) gives

    dI = P*cos(w_g*(t - L/c)) + Q*sin(w_g*(t - L/c)),   |dI| = sqrt(P^2 + Q^2)

``signal_magnitude`` evaluates P and Q in closed form (the infinite-series
limit, rearranged into Airy denominators 1 + F'*sin^2). ``series_oracle``
recomputes the same observable by brute force: truncated bounce sums,
explicit beat, analytic projection onto the two quadratures. The two paths
share only the ingredient coefficients, so their agreement checks every
piece of phase bookkeeping in the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .cavity import ComplexCoefficient, MAX_ROUND_TRIP_AMPLITUDE
from .dispersion import FilledPath, propagation_phase
from .optics_core import (
    C_LIGHT,
    CarrierSpec,
    ModelDivergenceError,
    modulation_amplitude,
)

CoefficientFn = Callable[[float], ComplexCoefficient]


@dataclass(frozen=True)
class EffectiveDetector:
    """Reduced two-mirror model of a Michelson GW detector.

    The four coefficient functions take angular frequency (scalar or array)
    and return ComplexCoefficient; sideband_path carries L_S and any
    dispersive medium the sidebands propagate through.
    """

    carrier: CarrierSpec
    arm_length: float  # L, m
    end_mirror_reflectivity: float  # r2
    carrier_reflection: CoefficientFn  # R1C(w)
    carrier_transmission: CoefficientFn  # T1C(w)
    sideband_reflection: CoefficientFn  # R1S(w)
    sideband_transmission: CoefficientFn  # T1S(w)
    sideband_path: FilledPath  # length L_S, optional medium
    strain: float  # GW amplitude h
    homodyne_amplitude: float  # A
    homodyne_phase: float  # phi, rad

    @property
    def sideband_cavity_length(self) -> float:
        return self.sideband_path.total_length

    @property
    def round_trip_time(self) -> float:
        return 2.0 * self.arm_length / C_LIGHT


@dataclass(frozen=True)
class QuadratureSignal:
    """Demodulated signal: cos/sin quadrature amplitudes and |dI|."""

    in_phase: float  # P
    quadrature: float  # Q

    @property
    def magnitude(self):
        return np.hypot(self.in_phase, self.quadrature)


def _check_convergent(rho, what: str):
    if np.any(np.asarray(rho) >= MAX_ROUND_TRIP_AMPLITUDE):
        raise ModelDivergenceError(f"{what}: round-trip amplitude >= 1")


def scaling_factor_xi(det: EffectiveDetector, omega_gw, sideband: int):
    """Length-independent scaling of one sideband's output amplitude.

    xi = t1C*t1S*r2*h*w*sin(w_g*tau/2) / (w_g*(1-r2*r1C)^2*(1-r2*r1S)^2),
    with the finite sinc limit at w_g -> 0. ``sideband`` is +1 or -1.
    """
    if sideband not in (+1, -1):
        raise ValueError("sideband must be +1 or -1")
    w = det.carrier.angular_frequency
    r2 = det.end_mirror_reflectivity
    r1c = det.carrier_reflection(w).magnitude
    ts = det.sideband_transmission(w + sideband * np.asarray(omega_gw))
    r1s = det.sideband_reflection(w + sideband * np.asarray(omega_gw)).magnitude
    _check_convergent(r2 * r1c, "carrier")
    _check_convergent(r2 * r1s, "sideband")
    beta = modulation_amplitude(det.strain, w, det.round_trip_time, omega_gw)
    t1c = det.carrier_transmission(w).magnitude
    return (
        t1c * ts.magnitude * r2 * beta / ((1.0 - r2 * r1c) ** 2 * (1.0 - r2 * r1s) ** 2)
    )


def _carrier_numerator(det: EffectiveDetector):
    """Complex e^{i*(phi_r1C - 2*kc*L)} - r2*r1C, built from unit factors.

    Phases of order 1e10 rad are never added to small phases as scalars
    (that rounds at the ulp of the big phase, ~1e-5 rad, and ruins the
    near-resonance numerator); complex multiplication keeps each factor's
    phase to machine precision.
    """
    w = det.carrier.angular_frequency
    kc_l = w * det.arm_length / C_LIGHT
    rc = det.carrier_reflection(w)
    rho = det.end_mirror_reflectivity * rc.magnitude
    _check_convergent(rho, "carrier")
    return np.exp(1j * rc.phase) * np.exp(-2j * kc_l) - rho, rho


def carrier_buildup(det: EffectiveDetector):
    """Magnitude B and phase phi_B of the carrier field in the arm cavity.

    B*e^{i*phi_B} = (e^{i*(phi_r1C - 2*kc*L)} - r2*r1C)
                    / (1 + F'_C * sin^2(kc*L - phi_r1C/2))

    evaluated via the exact identity den = |num|^2/(1 - rho)^2.
    """
    num, rho = _carrier_numerator(det)
    return float((1.0 - rho) ** 2 / np.abs(num)), float(np.angle(num))


def carrier_total_phase(det: EffectiveDetector, phi_b: float) -> float:
    """Total carrier phase phi_C = phi_t1C - phi_r1C - 2*kc*L - phi + phi_B - pi/2,
    reduced to (-pi, pi]."""
    w = det.carrier.angular_frequency
    kc_l = w * det.arm_length / C_LIGHT
    phi_tc = det.carrier_transmission(w).phase
    phi_rc = det.carrier_reflection(w).phase
    z = (
        np.exp(1j * (phi_tc - phi_rc))
        * np.exp(-2j * kc_l)
        * np.exp(1j * (phi_b - det.homodyne_phase))
        * -1j
    )
    return float(np.angle(z))


def signal_magnitude(det: EffectiveDetector, omega_gw) -> QuadratureSignal:
    """Closed-form quadrature signal at GW angular frequency omega_gw.

    Per sideband (chi = 2*theta_s - phi_r1S, angle = phi_t1S + phi_C,
    rho_s = r2*r1S, D_s the Airy denominator 1 + F'_S*sin^2(chi/2)):

        P_s = 2*A*B * xi_s * (rho_s*cos(chi + angle) - cos(angle)) / D_s
        Q_s = +/- 2*A*B * xi_s * (sin(angle) - rho_s*sin(chi + angle)) / D_s

    assembled here in complex form: both brackets are components of
    -g_s*e^{i*angle} with g_s = 1 - rho_s*e^{i*chi}, and D_s =
    |g_s|^2/(1-rho_s)^2, which cancels xi's (1-rho_s)^2 exactly. omega_gw
    may be a scalar or an array; P and Q include the 2*A*B prefactor, so
    .magnitude is |dI| directly.
    """
    w = det.carrier.angular_frequency
    r2 = det.end_mirror_reflectivity
    num_c, rho_c = _carrier_numerator(det)
    phi_c = carrier_total_phase(det, float(np.angle(num_c)))
    t1c = det.carrier_transmission(w).magnitude
    beta = modulation_amplitude(det.strain, w, det.round_trip_time, omega_gw)

    omega_gw = np.asarray(omega_gw, dtype=float)
    p_total = np.zeros_like(omega_gw)
    q_total = np.zeros_like(omega_gw)
    for sign in (+1, -1):
        nu = w + sign * omega_gw
        rs = det.sideband_reflection(nu)
        ts = det.sideband_transmission(nu)
        rho = r2 * rs.magnitude
        _check_convergent(rho, "sideband")
        theta = propagation_phase(det.sideband_path, nu)
        # g = 1 - rho_s * e^{i*(2*theta - phi_r1S)}, via unit-complex products
        g = 1.0 - rho * np.exp(2j * theta) * np.exp(-1j * rs.phase)
        h = g * ts.magnitude * np.exp(1j * (ts.phase + phi_c))
        weight = 1.0 / np.abs(g) ** 2
        p_total += -np.real(h) * weight
        q_total += sign * np.imag(h) * weight

    # 2*A*B*xi_s/D_s with B = (1-rho_c)^2/|num_c| and D_s = |g|^2/(1-rho_s)^2
    scale = 2.0 * det.homodyne_amplitude * t1c * r2 * beta / np.abs(num_c)
    p_total = scale * p_total
    q_total = scale * q_total
    if p_total.ndim == 0:
        return QuadratureSignal(float(p_total), float(q_total))
    return QuadratureSignal(p_total, q_total)


def required_bounces(det: EffectiveDetector, omega_gw) -> int:
    """Bounce count making geometric-series truncation error <= ~1e-9."""
    w = det.carrier.angular_frequency
    r2 = det.end_mirror_reflectivity
    rho = [det.carrier_reflection(w).magnitude * r2]
    for sign in (+1, -1):
        rho.append(
            float(np.max(det.sideband_reflection(w + sign * np.asarray(omega_gw)).magnitude))
            * r2
        )
    worst = max(rho)
    _check_convergent(worst, "series")
    return math.ceil(21.0 / (1.0 - worst))


def _partial_geometric_sum(z, n_terms: int):
    """sum_{k=0}^{n_terms-1} z^k by explicit accumulation."""
    z = np.asarray(z)
    total = np.ones_like(z)
    term = np.ones_like(z)
    for _ in range(n_terms - 1):
        term = term * z
        total = total + term
    return total


def series_oracle(det: EffectiveDetector, omega_gw, n_bounces: int) -> QuadratureSignal:
    """Brute-force reference for signal_magnitude.

    Sums the carrier buildup and each sideband buildup explicitly over
    n_bounces round trips, transmits the sidebands out, beats them against
    the homodyne field and projects the beat analytically onto the
    cos/sin(w_g*(t - L/c)) quadratures over one GW period.
    """
    needed = required_bounces(det, omega_gw)
    if n_bounces < needed:
        raise ValueError(
            f"insufficient n_bounces: {n_bounces} < {needed} required for convergence"
        )
    w = det.carrier.angular_frequency
    r2 = det.end_mirror_reflectivity
    kc_l = w * det.arm_length / C_LIGHT
    arm_hop = np.exp(-2j * kc_l)

    carrier_sum = _partial_geometric_sum(
        r2 * det.carrier_reflection(w).as_complex * arm_hop, n_bounces
    )
    t1c = det.carrier_transmission(w).as_complex
    # Steady-state carrier in the arms, per unit input field.
    carrier_field = t1c * r2 * arm_hop * carrier_sum

    omega_gw = np.asarray(omega_gw, dtype=float)
    beta = modulation_amplitude(det.strain, w, det.round_trip_time, omega_gw)
    a_h = det.homodyne_amplitude
    phi = det.homodyne_phase

    coeffs = []
    for sign in (+1, -1):
        nu = w + sign * omega_gw
        hop = np.exp(-2j * propagation_phase(det.sideband_path, nu))
        sideband_sum = _partial_geometric_sum(
            r2 * det.sideband_reflection(nu).as_complex * hop, n_bounces
        )
        t1s = det.sideband_transmission(nu).as_complex
        out_field = carrier_field * 1j * beta * arm_hop * sideband_sum * t1s
        coeffs.append(a_h * out_field * np.exp(-1j * phi))

    c_plus, c_minus = coeffs
    p = 2.0 * (np.real(c_plus) + np.real(c_minus))
    q = 2.0 * (np.imag(c_minus) - np.imag(c_plus))
    if p.ndim == 0:
        return QuadratureSignal(float(p), float(q))
    return QuadratureSignal(p, q)
