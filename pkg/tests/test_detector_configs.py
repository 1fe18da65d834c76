import dataclasses
import math

import numpy as np
import pytest

import wlcifo.detector_configs as dc
from wlcifo.cavity import CavitySpec, compound_reflectivity, compound_transmissivity
from wlcifo.dispersion import FilledPath, Linear, round_trip_phase_derivative
from wlcifo.optics_core import C_LIGHT, TWO_PI
from wlcifo.response import signal_magnitude

LAMBDA = 1064e-9


class TestAdligoPreset:
    def test_reference_values(self, adligo_cfg):
        assert adligo_cfg.metadata["t_c_squared"] == 0.2
        assert adligo_cfg.src_back_mirror.t**2 == pytest.approx(0.2)
        itm = adligo_cfg.input_mirror
        assert itm.r**2 + itm.t**2 == pytest.approx(1.0, abs=1e-15)
        assert adligo_cfg.end_mirror.r == 0.9999
        assert adligo_cfg.src_loss == 0.991
        assert adligo_cfg.gw.strain_amplitude == 1e-12
        assert adligo_cfg.homodyne_amplitude == pytest.approx(1 / 25.65)

    def test_arm_length_from_mode_integer(self, adligo_cfg):
        """Independent evaluation of (2*pi*n + phi_r1C/2)/k_c; the
        power-recycling compound phase at the carrier is ~1e-10 so the arm
        is n half-wavelengths to excellent accuracy."""
        kc = TWO_PI / LAMBDA
        expected = TWO_PI * 3.75446e9 / kc
        assert adligo_cfg.arm_length == pytest.approx(expected, abs=1e-9)
        assert 3990.0 < adligo_cfg.arm_length < 4000.0

    def test_recycling_lengths(self, adligo_cfg):
        kc = TWO_PI / LAMBDA
        assert adligo_cfg.prc_length == pytest.approx(TWO_PI * 5.420675e7 / kc)
        assert adligo_cfg.src_length == pytest.approx(
            (TWO_PI * 10.53157e7 + math.pi) / (2 * kc)
        )

    def test_carrier_resonant_in_arms(self, adligo_det):
        w = adligo_det.carrier.angular_frequency
        offset = dc._arm_resonance_offset(adligo_det, w)
        # tuned mode: sidebands at the carrier are arm-resonant
        assert abs(offset) < 1e-4

    def test_src_linewidth_at_least_30_khz(self, adligo_cfg):
        src = CavitySpec(
            adligo_cfg.input_mirror,
            adligo_cfg.src_back_mirror,
            adligo_cfg.src_length,
            per_pass_loss=math.sqrt(adligo_cfg.src_loss),
        )
        w = adligo_cfg.carrier.angular_frequency
        f = np.linspace(-3e5, 3e5, 120001)
        power = compound_transmissivity(src, w + TWO_PI * f).magnitude ** 2
        half = power.max() / 2
        above = power >= half
        i = int(np.argmax(power))
        lo = i
        while lo > 0 and above[lo - 1]:
            lo -= 1
        hi = i
        while hi < len(f) - 1 and above[hi + 1]:
            hi += 1
        fwhm = f[hi] - f[lo]
        assert fwhm >= 30e3


class TestDetune:
    def test_zero_is_identity(self, adligo_cfg):
        assert dc.detune(adligo_cfg, 0.0) == adligo_cfg

    def test_full_turn_shifts_half_wavelength(self, adligo_cfg):
        shifted = dc.detune(adligo_cfg, 360.0)
        assert shifted.src_length - adligo_cfg.src_length == pytest.approx(
            LAMBDA / 2, rel=1e-6
        )
        w = adligo_cfg.carrier.angular_frequency
        before = dc.reduce(adligo_cfg).sideband_reflection(w)
        after = dc.reduce(dataclasses.replace(shifted, homodyne_phase=None)).sideband_reflection(w)
        # the 56 m length quantizes at ~7e-15 m, i.e. ~1e-7 rad of round trip
        assert after.as_complex == pytest.approx(before.as_complex, abs=1e-6)

    def test_round_trip_phase_shift_is_stated_amount(self, adligo_cfg):
        """25.2 deg of detuning moves the cavity round-trip propagation
        phase by exactly 25.2 deg; the compound reflection phase moves by
        less (bounded excursion of an undercoupled cavity)."""
        deg = 25.2
        shifted = dc.detune(adligo_cfg, deg)
        kc = TWO_PI / LAMBDA
        rt_shift = 2 * kc * (shifted.src_length - adligo_cfg.src_length)
        assert math.degrees(rt_shift) == pytest.approx(deg, rel=1e-6)
        w = adligo_cfg.carrier.angular_frequency
        phase_before = dc.reduce(adligo_cfg).sideband_reflection(w).phase
        phase_after = dc.reduce(shifted).sideband_reflection(w).phase
        moved = math.degrees(abs(phase_after - phase_before))
        assert 0.0 < moved < deg

    def test_periodicity(self, adligo_cfg):
        a = dc.detune(adligo_cfg, 25.2)
        b = dc.detune(adligo_cfg, 25.2 + 360.0)
        assert b.detuning_deg == pytest.approx(25.2)
        w = adligo_cfg.carrier.angular_frequency
        da, db = dc.reduce(a), dc.reduce(b)
        for df in (0.0, 1e3, 1e4):
            za = da.sideband_reflection(w + TWO_PI * df).as_complex
            zb = db.sideband_reflection(w + TWO_PI * df).as_complex
            assert zb == pytest.approx(za, abs=1e-6)

    def test_negative_rejected(self, adligo_cfg):
        with pytest.raises(ValueError):
            dc.detune(adligo_cfg, -1.0)

    def test_arm_cavities_only_has_nothing_to_detune(self, adligo_cfg):
        cfg = dataclasses.replace(adligo_cfg, topology=dc.Topology.ARM_CAVITIES_ONLY)
        with pytest.raises(ValueError):
            dc.detune(cfg, 10.0)


class TestReduce:
    def test_arm_cavities_only_single_input_mirror(self, adligo_cfg):
        cfg = dataclasses.replace(adligo_cfg, topology=dc.Topology.ARM_CAVITIES_ONLY)
        det = dc.reduce(cfg)
        w = cfg.carrier.angular_frequency
        for df in (0.0, 5e3, 2e4):
            rc = det.carrier_reflection(w + TWO_PI * df)
            rs = det.sideband_reflection(w + TWO_PI * df)
            assert rc.magnitude == rs.magnitude == cfg.input_mirror.r
            assert rc.phase == rs.phase == 0.0

    def test_arm_cavity_topology_shares_lengths(self, adligo_cfg, adligo_det):
        assert adligo_det.sideband_cavity_length == adligo_cfg.arm_length

    def test_dual_recycling_lengths_differ(self):
        cfg = dc.fig2_preset(math.sqrt(1 - 0.1))
        det = dc.reduce(cfg)
        assert det.sideband_cavity_length != det.arm_length
        assert abs(det.sideband_cavity_length - det.arm_length) < 10.0

    def test_missing_fields_rejected(self, adligo_cfg):
        broken = dataclasses.replace(adligo_cfg, src_back_mirror=None)
        with pytest.raises(ValueError, match="src_back_mirror"):
            dc.reduce(broken)

    def test_degenerate_recycling_collapses(self, adligo_cfg):
        """Same mirrors and length in both recycling cavities: the carrier
        and sideband compound mirrors become one function."""
        cfg = dataclasses.replace(
            adligo_cfg,
            src_back_mirror=adligo_cfg.prc_back_mirror,
            src_length=adligo_cfg.prc_length,
            src_loss=1.0,
        )
        det = dc.reduce(cfg)
        w = cfg.carrier.angular_frequency
        for df in (0.0, 123.0, 4.5e3, 1.8e4):
            a = det.carrier_reflection(w + TWO_PI * df).as_complex
            b = det.sideband_reflection(w + TWO_PI * df).as_complex
            assert a == pytest.approx(b, rel=1e-13)

    def test_unknown_homodyne_rule(self, adligo_cfg):
        cfg = dataclasses.replace(adligo_cfg, homodyne_rule="nonsense")
        with pytest.raises(ValueError, match="homodyne rule"):
            dc.reduce(cfg)


class TestFig2Preset:
    def test_baseline_mirrors(self):
        cfg = dc.fig2_preset(0.0, detune_deg=0.0)
        assert cfg.signal_recycling_mirror.r == 0.0
        assert cfg.topology is dc.Topology.DUAL_RECYCLING
        det = dc.reduce(cfg)
        # no signal recycling: flat zero sideband reflection
        w = cfg.carrier.angular_frequency
        assert det.sideband_reflection(w + TWO_PI * 500).magnitude == 0.0

    def test_reference_reflectivity_curve_config(self):
        r = math.sqrt(1 - 0.001)
        cfg = dc.fig2_preset(r)
        assert cfg.signal_recycling_mirror.r == pytest.approx(r)
        assert cfg.detuning_deg == 10.0

    def test_wlc_round_trip_derivative_vanishes_at_carrier(self):
        cfg = dc.fig2_preset(math.sqrt(1 - 0.1), with_wlc=True, detune_deg=10.0)
        det = dc.reduce(cfg)
        w = cfg.carrier.angular_frequency
        deriv = round_trip_phase_derivative([det.sideband_path], w)
        vacuum = 2 * det.sideband_cavity_length / C_LIGHT
        assert abs(deriv) < 1e-3 * vacuum

    def test_wlc_medium_placement(self):
        cfg = dc.fig2_preset(math.sqrt(1 - 0.1), with_wlc=True)
        assert isinstance(cfg.sideband_medium, Linear)
        assert cfg.sideband_medium_length == 1.0
        # slope at the ideal value -L_S/(l*w0)
        w = cfg.carrier.angular_frequency
        expected = -cfg.sideband_cavity_length / (1.0 * w)
        assert cfg.sideband_medium.slope == pytest.approx(expected, rel=1e-12)


class TestFig8Preset:
    def test_matched_inner_cavity_disappears(self):
        """On resonance the matched pair is transparent: the power
        reflectivity stays below 1e-3 across +-20 kHz and the amplitude
        below 1e-3 near the carrier."""
        cfg = dc.fig8_preset(math.sqrt(1 - 0.02))
        inner = CavitySpec(cfg.input_mirror, cfg.matched_back_mirror, cfg.inner_length)
        w = cfg.carrier.angular_frequency
        f = np.linspace(-2e4, 2e4, 801)
        mags = compound_reflectivity(inner, w + TWO_PI * f).magnitude
        assert np.max(mags**2) < 1e-3
        near = np.abs(f) < 600.0
        assert np.max(mags[near]) < 1e-3

    def test_sidebands_see_only_aux_mirror(self):
        r_aux = math.sqrt(1 - 0.02)
        cfg = dc.fig8_preset(r_aux)
        det = dc.reduce(dataclasses.replace(cfg, homodyne_phase=0.0))
        w = cfg.carrier.angular_frequency
        assert det.sideband_reflection(w).magnitude == pytest.approx(r_aux, abs=1e-3)

    def test_gap_snapped_near_quoted_value(self):
        cfg = dc.fig8_preset(math.sqrt(1 - 0.02), detune_deg=0.0)
        gap = cfg.metadata["gap_length_m"]
        assert abs(gap - 0.57) < LAMBDA / 2
        # snapped to arm resonance at the carrier
        det = dc.reduce(dataclasses.replace(cfg, homodyne_phase=0.0))
        w = cfg.carrier.angular_frequency
        assert abs(dc._arm_resonance_offset(det, w)) < 1e-6

    def test_inner_length_close_to_half_meter(self):
        cfg = dc.fig8_preset(0.0)
        assert abs(cfg.inner_length - 0.5) < LAMBDA

    def test_wlc_solves_full_path_flatness(self):
        cfg = dc.fig8_preset(math.sqrt(1 - 0.02), with_wlc=True, detune_deg=10.0)
        resid = cfg.metadata["residual_phase_derivative_s"]
        vacuum = 2 * cfg.arm_length / C_LIGHT
        assert abs(resid) < 1e-3 * vacuum
        # the solved slope differs from the bare-path estimate by the inner
        # cavity's group delay but stays the same order
        ideal = -(cfg.arm_length + cfg.inner_length + cfg.gap_length) / (
            0.1 * cfg.carrier.angular_frequency
        )
        assert 0.5 < cfg.metadata["wlc_slope"] / ideal < 2.0


class TestDetunedPeak:
    def test_peak_frequency_matches_resonance_offset(self, detuned_cfg, detuned_det):
        f_peak = dc.detuned_peak_frequency(detuned_cfg)
        w = detuned_cfg.carrier.angular_frequency
        offset = dc._arm_resonance_offset(detuned_det, w)
        f_est = abs(offset) * C_LIGHT / (2 * detuned_cfg.arm_length) / TWO_PI
        assert f_peak == pytest.approx(f_est, rel=0.25)
        # response at the peak beats the plateau
        at_peak = signal_magnitude(detuned_det, TWO_PI * f_peak).magnitude
        plateau = signal_magnitude(detuned_det, TWO_PI * 1.0).magnitude
        assert at_peak > 1.5 * plateau

    def test_tuned_config_rejected(self, adligo_cfg):
        with pytest.raises(ValueError):
            dc.detuned_peak_frequency(adligo_cfg)


class TestArmWlc:
    def test_requires_detuning(self, adligo_cfg):
        with pytest.raises(ValueError):
            dc.with_arm_wlc(adligo_cfg)

    def test_medium_centered_on_resonant_sideband(self, detuned_cfg):
        cfg = dc.with_arm_wlc(detuned_cfg)
        f_peak = cfg.metadata["detuned_peak_hz"]
        center_offset = cfg.metadata["wlc_center_offset_hz"]
        assert abs(abs(center_offset) - f_peak) < 0.2 * f_peak
        assert cfg.sideband_medium_length == cfg.arm_length
        w = cfg.carrier.angular_frequency
        expected_center = w + TWO_PI * center_offset
        assert cfg.sideband_medium.center == pytest.approx(expected_center, rel=1e-12)

    def test_slope_close_to_ideal(self, detuned_cfg):
        cfg = dc.with_arm_wlc(detuned_cfg)
        assert cfg.metadata["wlc_slope"] == pytest.approx(
            cfg.metadata["wlc_slope_ideal"], rel=0.25
        )
