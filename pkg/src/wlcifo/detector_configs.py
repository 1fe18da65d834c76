"""Detector topologies, presets, and reduction to the two-mirror model.

Four topologies are supported:

* ARM_CAVITIES_ONLY      - arm cavities, no recycling; one real input mirror.
* DUAL_RECYCLING         - plain Michelson with power- and signal-recycling
                           mirrors; carrier and sidebands live in separate
                           cavities of lengths L and L_S.
* DUAL_RECYCLING_WITH_ARMS - arm cavities plus both recycling cavities; the
                           power recycling cavity (input mirror + M_D) acts as
                           the carrier's compound front mirror, the signal
                           recycling cavity (input mirror + M_C) as the
                           sidebands'.
* AUXILIARY_SRM          - like the previous one, but the signal recycling
                           cavity is a short matched (carrier-transparent)
                           cavity followed by a gap and an auxiliary mirror;
                           a dispersive medium may fill part of the gap.

``reduce`` turns a DetectorConfig into the EffectiveDetector consumed by
``response``. White-light-cavity variants place an anomalously dispersive
medium in the sideband path (or gap) such that the sideband round-trip phase
is stationary at a resonant value, letting both GW sidebands resonate at
once.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .cavity import (
    CavitySpec,
    ComplexCoefficient,
    Mirror,
    cascaded_reflectivity,
    cascaded_transmissivity,
    compound_reflectivity,
    compound_transmissivity,
)
from .dispersion import (
    VACUUM,
    FilledPath,
    IndexModel,
    Linear,
    LorentzianDerivative,
    wlc_slope,
)
from .optics_core import C_LIGHT, CarrierSpec, GwSpec, TWO_PI
from .response import EffectiveDetector, signal_magnitude

# Reference parameter set (advanced dual-recycled detector, 1064 nm).
REF_WAVELENGTH = 1064e-9
REF_END_MIRROR_R = 0.9999
REF_ITM_T_SQUARED = 0.014
REF_PRC_BACK_T_SQUARED = 0.03
REF_SRC_T_SQUARED = 0.2
REF_SRC_LOSS = 0.991
REF_STRAIN = 1e-12
REF_HOMODYNE_AMPLITUDE = 1.0 / 25.65
ARM_MODE_INTEGER = 3.75446e9
PRC_MODE_INTEGER = 5.420675e7
SRC_MODE_INTEGER = 10.53157e7
DEFAULT_WLC_LINEWIDTH_HZ = 1600.0
# Band over which the idealized linear index is declared valid; within it the
# sinc(w_g*tau/2) rolloff stays below 1%.
DEFAULT_LINEAR_BAND_HZ = 2000.0


class Topology(Enum):
    ARM_CAVITIES_ONLY = "arm-cavities-only"
    DUAL_RECYCLING = "dual-recycling"
    DUAL_RECYCLING_WITH_ARMS = "dual-recycling-with-arms"
    AUXILIARY_SRM = "auxiliary-srm"


@dataclass(frozen=True)
class DetectorConfig:
    """Declarative detector description; ``reduce`` interprets it."""

    topology: Topology
    carrier: CarrierSpec
    gw: GwSpec
    end_mirror: Mirror
    arm_length: float
    homodyne_amplitude: float = REF_HOMODYNE_AMPLITUDE
    homodyne_phase: float | None = None  # None: resolved by homodyne_rule
    homodyne_rule: str = "matched-reflection"  # or "optimal"
    homodyne_ref_hz: float = 1.0
    # ARM_CAVITIES_ONLY / DUAL_RECYCLING_WITH_ARMS / AUXILIARY_SRM
    input_mirror: Mirror | None = None
    # DUAL_RECYCLING_WITH_ARMS / AUXILIARY_SRM
    prc_back_mirror: Mirror | None = None
    prc_length: float = 0.0
    # DUAL_RECYCLING_WITH_ARMS
    src_back_mirror: Mirror | None = None
    src_length: float = 0.0
    src_loss: float = 1.0  # amplitude factor per in-and-back pass of the SRC
    # DUAL_RECYCLING
    power_recycling_mirror: Mirror | None = None
    signal_recycling_mirror: Mirror | None = None
    sideband_cavity_length: float = 0.0  # L_S when distinct from L
    # AUXILIARY_SRM
    inner_length: float = 0.0
    matched_back_mirror: Mirror | None = None
    aux_mirror: Mirror | None = None
    gap_length: float = 0.0
    gap_medium: IndexModel = VACUUM
    gap_medium_length: float = 0.0
    # medium in the sideband path (arms for fig-3-like, L_S path for fig-2-like)
    sideband_medium: IndexModel = VACUUM
    sideband_medium_length: float = 0.0
    detuning_deg: float = 0.0
    metadata: dict = field(default_factory=dict)


def _constant_fn(r: float, phase: float = 0.0):
    def fn(omega):
        omega = np.asarray(omega, dtype=float)
        mag = np.full_like(omega, r) if omega.ndim else r
        ph = np.full_like(omega, phase) if omega.ndim else phase
        return ComplexCoefficient(mag, ph)

    return fn


def _require(cfg: DetectorConfig, *names: str):
    for name in names:
        if getattr(cfg, name) in (None, 0.0):
            raise ValueError(
                f"topology {cfg.topology.value} needs field {name!r} set"
            )


def _sideband_functions(cfg: DetectorConfig):
    """(R_1S, T_1S, sideband_path) per topology."""
    topo = cfg.topology
    if topo is Topology.ARM_CAVITIES_ONLY:
        _require(cfg, "input_mirror")
        m = cfg.input_mirror
        path = FilledPath(cfg.arm_length, cfg.sideband_medium_length, cfg.sideband_medium)
        return _constant_fn(m.r), _constant_fn(m.t), path

    if topo is Topology.DUAL_RECYCLING:
        _require(cfg, "signal_recycling_mirror", "sideband_cavity_length")
        m = cfg.signal_recycling_mirror
        path = FilledPath(
            cfg.sideband_cavity_length, cfg.sideband_medium_length, cfg.sideband_medium
        )
        return _constant_fn(m.r), _constant_fn(m.t), path

    if topo is Topology.DUAL_RECYCLING_WITH_ARMS:
        _require(cfg, "input_mirror", "src_back_mirror", "src_length")
        # Table-1 loss convention is one factor per in-and-back pass of the
        # SRC (r_C -> a*r_C in the round trip); the per-traversal engine
        # therefore gets sqrt(a).
        src = CavitySpec(
            cfg.input_mirror,
            cfg.src_back_mirror,
            cfg.src_length,
            per_pass_loss=math.sqrt(cfg.src_loss),
        )
        path = FilledPath(cfg.arm_length, cfg.sideband_medium_length, cfg.sideband_medium)
        return (
            lambda omega: compound_reflectivity(src, omega),
            lambda omega: compound_transmissivity(src, omega),
            path,
        )

    if topo is Topology.AUXILIARY_SRM:
        _require(cfg, "input_mirror", "matched_back_mirror", "aux_mirror",
                 "inner_length", "gap_length")
        inner = CavitySpec(cfg.input_mirror, cfg.matched_back_mirror, cfg.inner_length)
        gap = FilledPath(cfg.gap_length, cfg.gap_medium_length, cfg.gap_medium)
        aux = cfg.aux_mirror
        path = FilledPath(cfg.arm_length, cfg.sideband_medium_length, cfg.sideband_medium)
        return (
            lambda omega: cascaded_reflectivity(inner, gap, aux, omega),
            lambda omega: cascaded_transmissivity(inner, gap, aux, omega),
            path,
        )

    raise ValueError(f"inconsistent topology: {topo}")


def _carrier_functions(cfg: DetectorConfig):
    topo = cfg.topology
    if topo is Topology.ARM_CAVITIES_ONLY:
        _require(cfg, "input_mirror")
        m = cfg.input_mirror
        return _constant_fn(m.r), _constant_fn(m.t)

    if topo is Topology.DUAL_RECYCLING:
        _require(cfg, "power_recycling_mirror")
        m = cfg.power_recycling_mirror
        return _constant_fn(m.r), _constant_fn(m.t)

    if topo in (Topology.DUAL_RECYCLING_WITH_ARMS, Topology.AUXILIARY_SRM):
        _require(cfg, "input_mirror", "prc_back_mirror", "prc_length")
        prc = CavitySpec(cfg.input_mirror, cfg.prc_back_mirror, cfg.prc_length)
        return (
            lambda omega: compound_reflectivity(prc, omega),
            lambda omega: compound_transmissivity(prc, omega),
        )

    raise ValueError(f"inconsistent topology: {topo}")


def _optimal_homodyne_phase(det: EffectiveDetector, omega_ref: float) -> float:
    """Homodyne phase maximizing |dI| at omega_ref.

    P and Q are linear in (cos phi, sin phi) because phi enters only through
    the carrier phase, so the optimum is the leading eigenvector of the 2x2
    quadratic form built from evaluations at phi = 0 and phi = pi/2.
    """
    at0 = signal_magnitude(dataclasses.replace(det, homodyne_phase=0.0), omega_ref)
    at90 = signal_magnitude(
        dataclasses.replace(det, homodyne_phase=0.5 * math.pi), omega_ref
    )
    m = np.array(
        [[at0.in_phase, at90.in_phase], [at0.quadrature, at90.quadrature]]
    )
    vals, vecs = np.linalg.eigh(m.T @ m)
    v = vecs[:, int(np.argmax(vals))]
    return float(math.atan2(v[1], v[0]))


def reduce(cfg: DetectorConfig) -> EffectiveDetector:
    """Build the frequency-dependent two-mirror model for this config."""
    refl_s, trans_s, path = _sideband_functions(cfg)
    refl_c, trans_c = _carrier_functions(cfg)
    det = EffectiveDetector(
        carrier=cfg.carrier,
        arm_length=cfg.arm_length,
        end_mirror_reflectivity=cfg.end_mirror.r,
        carrier_reflection=refl_c,
        carrier_transmission=trans_c,
        sideband_reflection=refl_s,
        sideband_transmission=trans_s,
        sideband_path=path,
        strain=cfg.gw.strain_amplitude,
        homodyne_amplitude=cfg.homodyne_amplitude,
        homodyne_phase=0.0,
    )
    phi = cfg.homodyne_phase
    if phi is None:
        if cfg.homodyne_rule == "matched-reflection":
            phi = -float(refl_s(cfg.carrier.angular_frequency).phase)
        elif cfg.homodyne_rule == "optimal":
            phi = _optimal_homodyne_phase(det, TWO_PI * cfg.homodyne_ref_hz)
        else:
            raise ValueError(f"unknown homodyne rule {cfg.homodyne_rule!r}")
    return dataclasses.replace(det, homodyne_phase=float(phi))


def _snap_to_half_wavelength(target: float, wavelength: float) -> float:
    """Nearest length with k_c*L a multiple of pi (carrier resonant against
    a zero-phase mirror pair)."""
    half = 0.5 * wavelength
    return round(target / half) * half


def adligo_preset(t_c_squared: float = REF_SRC_T_SQUARED) -> DetectorConfig:
    """Dual-recycled detector with arm cavities, reference parameter set.

    t_c_squared is the power transmissivity of the signal-recycling cavity's
    far mirror (0.2 baseline, 0.02 for the high-reflectivity variant).
    """
    carrier = CarrierSpec(REF_WAVELENGTH)
    kc = carrier.wavenumber
    itm = Mirror(
        math.sqrt(1.0 - REF_ITM_T_SQUARED),
        math.sqrt(REF_ITM_T_SQUARED),
        substrate_inward=True,
        label="M_AB",
    )
    prc_back = Mirror(
        math.sqrt(1.0 - REF_PRC_BACK_T_SQUARED),
        math.sqrt(REF_PRC_BACK_T_SQUARED),
        label="M_D",
    )
    src_back = Mirror(
        math.sqrt(1.0 - t_c_squared), math.sqrt(t_c_squared), label="M_C"
    )
    end = Mirror(
        REF_END_MIRROR_R, math.sqrt(1.0 - REF_END_MIRROR_R**2), label="M_2"
    )
    prc_length = TWO_PI * PRC_MODE_INTEGER / kc
    src_length = (TWO_PI * SRC_MODE_INTEGER + math.pi) / (2.0 * kc)
    # Arm length from the mode integer, absorbing the (tiny) residual phase
    # of the power-recycling compound mirror at the carrier.
    prc = CavitySpec(itm, prc_back, prc_length)
    phi_r1c = float(compound_reflectivity(prc, carrier.angular_frequency).phase)
    arm_length = (TWO_PI * ARM_MODE_INTEGER + 0.5 * phi_r1c) / kc
    return DetectorConfig(
        topology=Topology.DUAL_RECYCLING_WITH_ARMS,
        carrier=carrier,
        gw=GwSpec(REF_STRAIN, 0.0),
        end_mirror=end,
        arm_length=arm_length,
        input_mirror=itm,
        prc_back_mirror=prc_back,
        prc_length=prc_length,
        src_back_mirror=src_back,
        src_length=src_length,
        src_loss=REF_SRC_LOSS,
        metadata={"t_c_squared": t_c_squared},
    )


def detune(cfg: DetectorConfig, degrees: float) -> DetectorConfig:
    """Shift the sideband resonator length by (degrees/360)*(lambda/2), moving
    its round-trip phase at the carrier by the stated number of degrees.

    Detunings 360 apart shift the length by a full half-wavelength and give
    the same reflectivity function; detuning_deg records the value mod 360.
    """
    if degrees < 0.0:
        raise ValueError("detuning must be >= 0 degrees")
    shift = degrees / 360.0 * 0.5 * cfg.carrier.wavelength_vacuum
    topo = cfg.topology
    if topo is Topology.DUAL_RECYCLING_WITH_ARMS:
        update = {"src_length": cfg.src_length + shift}
    elif topo is Topology.DUAL_RECYCLING:
        update = {"sideband_cavity_length": cfg.sideband_cavity_length + shift}
    elif topo is Topology.AUXILIARY_SRM:
        update = {"gap_length": cfg.gap_length + shift}
    else:
        raise ValueError(f"topology {topo.value} has no sideband resonator to detune")
    return dataclasses.replace(
        cfg, detuning_deg=(cfg.detuning_deg + degrees) % 360.0, **update
    )


def _arm_resonance_offset(det: EffectiveDetector, omega: float) -> float:
    """Wrapped phase of the sideband arm round trip at omega; zero on resonance."""
    from .dispersion import propagation_phase

    theta = propagation_phase(det.sideband_path, omega)
    phi_rs = det.sideband_reflection(omega).phase
    z = np.exp(1j * phi_rs) * np.exp(-2j * theta)
    return float(np.angle(z))


def _refine_peak(det: EffectiveDetector, f_lo: float, f_hi: float) -> float:
    """Deterministic golden-section maximum of |dI| on [f_lo, f_hi] (Hz)."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = f_lo, f_hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc = signal_magnitude(det, TWO_PI * c).magnitude
    fd = signal_magnitude(det, TWO_PI * d).magnitude
    for _ in range(80):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = signal_magnitude(det, TWO_PI * c).magnitude
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = signal_magnitude(det, TWO_PI * d).magnitude
    return 0.5 * (a + b)


def detuned_peak_frequency(cfg: DetectorConfig) -> float:
    """Frequency (Hz) of the detuned-mode response maximum.

    The sideband arm round trip is off resonance at the carrier by the
    compound reflection phase offset; the resonant sideband sits where the
    propagation phase 2*w_g*L/c makes that up, which seeds the search
    window.
    """
    det = reduce(cfg)
    offset = _arm_resonance_offset(det, cfg.carrier.angular_frequency)
    # tuned configs sit within ~1e-6 rad of resonance (length representation);
    # genuine detunings land orders of magnitude above this
    if abs(offset) < 1e-4:
        raise ValueError("config is not detuned; no interior response peak")
    f_est = abs(offset) * C_LIGHT / (2.0 * det.sideband_cavity_length) / TWO_PI
    grid = np.linspace(0.25 * f_est, 2.5 * f_est, 600)
    mags = signal_magnitude(det, TWO_PI * grid).magnitude
    i = int(np.argmax(mags))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    return _refine_peak(det, lo, hi)


def _resonant_sideband(cfg: DetectorConfig, f_guess: float):
    """(sign, frequency) of the sideband the detuned config resonates.

    Finds the zero of the wrapped arm round-trip phase offset near f_guess
    by bisection; the offset crosses zero once per free spectral range.
    """
    det = reduce(dataclasses.replace(cfg, homodyne_phase=0.0))
    w = cfg.carrier.angular_frequency

    def offset(sign, f_hz):
        return _arm_resonance_offset(det, w + sign * TWO_PI * f_hz)

    sign = +1 if abs(offset(+1, f_guess)) <= abs(offset(-1, f_guess)) else -1
    lo, hi = 0.3 * f_guess, 3.0 * f_guess
    grid = np.linspace(lo, hi, 200)
    vals = [offset(sign, f) for f in grid]
    bracket = None
    for i in range(len(grid) - 1):
        if vals[i] == 0.0:
            return sign, float(grid[i])
        if vals[i] * vals[i + 1] < 0 and abs(vals[i] - vals[i + 1]) < math.pi:
            bracket = (grid[i], grid[i + 1])
            break
    if bracket is None:
        raise ValueError("no sideband resonance found near the detuned peak")
    a, b = bracket
    fa = offset(sign, a)
    for _ in range(80):
        m = 0.5 * (a + b)
        fm = offset(sign, m)
        if fa * fm <= 0:
            b = m
        else:
            a, fa = m, fm
    return sign, 0.5 * (a + b)


def with_arm_wlc(
    cfg: DetectorConfig, linewidth_hz: float = DEFAULT_WLC_LINEWIDTH_HZ
) -> DetectorConfig:
    """Fill the arms with an anomalous medium that freezes the sideband
    round-trip phase at its resonant (detuned-peak) value.

    The medium spans the whole arm (l = L) and is shaped like the derivative
    of a Lorentzian of half-width ``linewidth_hz``, centered on the sideband
    frequency the detuned config resonates: the unit index at the center pins
    the round-trip phase to the resonant value there. The center slope starts
    from the ideal -L/(l*w0) and is then corrected (secant solve) so the
    mirror-image sideband is also exactly resonant at the detuned peak
    frequency, absorbing the signal-recycling phase slope and the lineshape's
    departure from linearity; both GW sidebands then resonate until one
    leaves the linear region.
    """
    if cfg.topology is not Topology.DUAL_RECYCLING_WITH_ARMS:
        raise ValueError("arm-hosted WLC applies to the arm-cavity topology")
    if cfg.detuning_deg == 0.0:
        raise ValueError("arm-hosted WLC needs a detuned starting point")
    f_peak = detuned_peak_frequency(cfg)
    sign, f_res = _resonant_sideband(cfg, f_peak)
    w = cfg.carrier.angular_frequency
    center = w + sign * TWO_PI * f_res
    gamma = TWO_PI * linewidth_hz
    slope0 = wlc_slope(cfg.arm_length, cfg.arm_length, center)

    def mirror_offset(slope: float) -> float:
        medium = LorentzianDerivative.from_center_slope(center, gamma, slope)
        trial = dataclasses.replace(
            cfg,
            sideband_medium=medium,
            sideband_medium_length=cfg.arm_length,
            homodyne_phase=0.0,
        )
        det = reduce(trial)
        return _arm_resonance_offset(det, w - sign * TWO_PI * f_peak)

    s0, s1 = slope0, 1.01 * slope0
    g0, g1 = mirror_offset(s0), mirror_offset(s1)
    for _ in range(4):
        if g1 == g0:
            break
        s2 = s1 - g1 * (s1 - s0) / (g1 - g0)
        s0, g0, s1 = s1, g1, s2
        g1 = mirror_offset(s1)
    slope = s1
    medium = LorentzianDerivative.from_center_slope(center, gamma, slope)
    meta = dict(cfg.metadata)
    meta.update(
        {
            "wlc": "lorentzian-derivative",
            "wlc_center_offset_hz": sign * f_res,
            "wlc_linewidth_hz": linewidth_hz,
            "wlc_slope": slope,
            "wlc_slope_ideal": slope0,
            "detuned_peak_hz": f_peak,
        }
    )
    return dataclasses.replace(
        cfg,
        sideband_medium=medium,
        sideband_medium_length=cfg.arm_length,
        homodyne_rule="optimal",
        homodyne_ref_hz=f_peak,
        metadata=meta,
    )


def fig2_preset(
    r_srm: float,
    r_prm: float | None = None,
    with_wlc: bool = False,
    *,
    detune_deg: float = 10.0,
    medium_length: float = 1.0,
    linear_band_hz: float = DEFAULT_LINEAR_BAND_HZ,
) -> DetectorConfig:
    """Dual recycling without arm cavities (simple PRM/SRM end mirrors).

    The sideband cavity runs from the end mirror through the beamsplitter to
    the SRM; its length differs from the carrier cavity's. Without WLC the
    sideband cavity is detuned by ``detune_deg``; with WLC it is left at the
    carrier-resonant length and a linear-index medium (slope -L_S/(l*w0),
    centered on the carrier) in the beamsplitter-SRM segment makes its
    round-trip phase stationary, so both sidebands resonate.
    """
    if not 0.0 <= r_srm < 1.0:
        raise ValueError("r_srm must lie in [0, 1)")
    carrier = CarrierSpec(REF_WAVELENGTH)
    w = carrier.angular_frequency
    if r_prm is None:
        r_prm = math.sqrt(1.0 - REF_PRC_BACK_T_SQUARED)
    prm = Mirror(r_prm, math.sqrt(1.0 - r_prm**2), label="PRM")
    srm = Mirror(r_srm, math.sqrt(1.0 - r_srm**2), label="SRM")
    end = Mirror(REF_END_MIRROR_R, math.sqrt(1.0 - REF_END_MIRROR_R**2), label="M_2")
    # Arm (end mirror to beamsplitter) ~4 km; recycling mirrors tens of
    # meters beyond it, both snapped to carrier resonance.
    arm_target = ARM_MODE_INTEGER * REF_WAVELENGTH
    carrier_length = _snap_to_half_wavelength(arm_target + 57.66, REF_WAVELENGTH)
    sideband_length = _snap_to_half_wavelength(arm_target + 56.03, REF_WAVELENGTH)
    cfg = DetectorConfig(
        topology=Topology.DUAL_RECYCLING,
        carrier=carrier,
        gw=GwSpec(REF_STRAIN, 0.0),
        end_mirror=end,
        arm_length=carrier_length,
        power_recycling_mirror=prm,
        signal_recycling_mirror=srm,
        sideband_cavity_length=sideband_length,
        metadata={"r_srm": r_srm, "r_prm": r_prm},
    )
    if not with_wlc:
        if detune_deg:
            cfg = detune(cfg, detune_deg)
        return cfg
    f_peak = detuned_peak_frequency(detune(cfg, detune_deg)) if detune_deg else 1.0
    slope = wlc_slope(sideband_length, medium_length, w)
    medium = Linear(w, slope, band_halfwidth=TWO_PI * linear_band_hz)
    meta = dict(cfg.metadata)
    meta.update(
        {
            "wlc": "linear",
            "wlc_slope": slope,
            "wlc_medium_length_m": medium_length,
            "reference_detune_deg": detune_deg,
        }
    )
    return dataclasses.replace(
        cfg,
        sideband_medium=medium,
        sideband_medium_length=medium_length,
        homodyne_rule="optimal",
        homodyne_ref_hz=f_peak,
        metadata=meta,
    )


def _phase_slope(fn, omega0: float, step: float = TWO_PI) -> float:
    """d(arg fn)/dw by 5-point stencil on wrapped phase differences."""
    ref = fn(omega0)

    def rel_phase(omega):
        return float(np.angle(fn(omega) * np.conj(ref)))

    return (
        -rel_phase(omega0 + 2 * step)
        + 8.0 * rel_phase(omega0 + step)
        - 8.0 * rel_phase(omega0 - step)
        + rel_phase(omega0 - 2 * step)
    ) / (12.0 * step)


def fig8_preset(
    r_aux: float,
    with_wlc: bool = False,
    *,
    detune_deg: float = 10.0,
    medium_length: float = 0.1,
    linear_band_hz: float = DEFAULT_LINEAR_BAND_HZ,
) -> DetectorConfig:
    """Auxiliary signal-recycling mirror behind a matched transparent cavity.

    The input mirror and a matched partner (0.5 m apart, carrier resonant)
    are invisible to the sidebands; the auxiliary mirror ~0.57 m further
    recycles them. The gap is snapped to the nearest carrier-resonant length
    (recorded in metadata), then either detuned by ``detune_deg`` or, with
    WLC, part-filled by a linear-index medium whose slope is solved so the
    full sideband round trip (arms + transparent cavity + gap) has zero
    phase derivative at the carrier.
    """
    if not 0.0 <= r_aux < 1.0:
        raise ValueError("r_aux must lie in [0, 1)")
    base = adligo_preset()
    carrier = base.carrier
    w = carrier.angular_frequency
    kc = carrier.wavenumber
    quarter = 0.25 * REF_WAVELENGTH
    # Carrier resonance against the substrate flip needs an odd number of
    # quarter wavelengths.
    inner_length = (2 * round((0.5 / quarter - 1) / 2) + 1) * quarter
    matched_back = Mirror(
        base.input_mirror.r, base.input_mirror.t, label="M_C_matched"
    )
    aux = Mirror(r_aux, math.sqrt(1.0 - r_aux**2), label="M_aux")
    cfg = dataclasses.replace(
        base,
        topology=Topology.AUXILIARY_SRM,
        src_back_mirror=None,
        src_length=0.0,
        src_loss=1.0,
        matched_back_mirror=matched_back,
        aux_mirror=aux,
        inner_length=inner_length,
        gap_length=0.57,
        metadata={"r_aux": r_aux, "inner_length_m": inner_length},
    )
    if r_aux > 0.0:
        # Snap the gap so the compound reflection phase at the carrier makes
        # the arm round trip resonant (phase -> 0); the phase moves -2*kc per
        # meter of gap, so two fixed-point corrections converge to rounding.
        gap = cfg.gap_length
        for _ in range(3):
            det = reduce(dataclasses.replace(cfg, gap_length=gap, homodyne_phase=0.0))
            offset = _arm_resonance_offset(det, w)
            gap += offset / (2.0 * kc)
        cfg = dataclasses.replace(cfg, gap_length=gap)
    cfg.metadata["gap_length_m"] = cfg.gap_length
    if not with_wlc:
        if detune_deg and r_aux > 0.0:
            cfg = detune(cfg, detune_deg)
        return cfg
    f_peak = (
        detuned_peak_frequency(detune(cfg, detune_deg))
        if detune_deg and r_aux > 0.0
        else 1.0
    )

    # Solve the index slope nulling the full sideband round-trip phase
    # derivative: d/dw [2*w*L/c - arg R_1S(w; slope)] = 0 at the carrier.
    guess = wlc_slope(
        cfg.arm_length + cfg.inner_length + cfg.gap_length, medium_length, w
    )

    def derivative_for(slope: float) -> float:
        medium = Linear(w, slope, band_halfwidth=TWO_PI * linear_band_hz)
        trial = dataclasses.replace(
            cfg,
            gap_medium=medium,
            gap_medium_length=medium_length,
            homodyne_phase=0.0,
        )
        det = reduce(trial)
        return 2.0 * cfg.arm_length / C_LIGHT - _phase_slope(
            lambda om: det.sideband_reflection(om).as_complex, w
        )

    s0, s1 = guess, 1.02 * guess
    g0, g1 = derivative_for(s0), derivative_for(s1)
    for _ in range(4):
        s2 = s1 - g1 * (s1 - s0) / (g1 - g0)
        s0, g0, s1 = s1, g1, s2
        g1 = derivative_for(s1)
    slope = s1
    medium = Linear(w, slope, band_halfwidth=TWO_PI * linear_band_hz)
    meta = dict(cfg.metadata)
    meta.update(
        {
            "wlc": "linear",
            "wlc_slope": slope,
            "wlc_medium_length_m": medium_length,
            "reference_detune_deg": detune_deg,
            "residual_phase_derivative_s": g1,
        }
    )
    return dataclasses.replace(
        cfg,
        gap_medium=medium,
        gap_medium_length=medium_length,
        homodyne_rule="optimal",
        homodyne_ref_hz=f_peak,
        metadata=meta,
    )
