"""Frequency response of Michelson gravitational-wave detectors.

Models arm cavities, dual recycling, and auxiliary-mirror signal recycling
as a single Fabry-Perot cavity with frequency-dependent compound mirrors,
and computes the homodyne signal |dI| versus GW frequency, optionally with
anomalously dispersive media realizing a white light cavity.
"""

from .cavity import (
    CavitySpec,
    ComplexCoefficient,
    Mirror,
    cascaded_reflectivity,
    cascaded_transmissivity,
    compound_back_reflectivity,
    compound_reflectivity,
    compound_transmissivity,
    finesse_coefficient,
)
from .cli import (
    ResponseCurve,
    SweepGrid,
    emit_csv,
    load_scenario,
    normalize_curve,
    run_scenario,
    run_sweep,
)
from .detector_configs import (
    DetectorConfig,
    Topology,
    adligo_preset,
    detune,
    detuned_peak_frequency,
    fig2_preset,
    fig8_preset,
    reduce,
    with_arm_wlc,
)
from .dispersion import (
    FilledPath,
    Linear,
    LorentzianDerivative,
    Vacuum,
    VACUUM,
    index_at,
    propagation_phase,
    round_trip_phase_derivative,
    wlc_slope,
)
from .optics_core import (
    C_LIGHT,
    CarrierSpec,
    GwSpec,
    ModelDivergenceError,
    RoundTripSpec,
    gw_arm_phase,
    modulation_index,
    sideband_wavenumbers,
)
from .response import (
    EffectiveDetector,
    QuadratureSignal,
    carrier_buildup,
    carrier_total_phase,
    scaling_factor_xi,
    series_oracle,
    signal_magnitude,
)

__version__ = "0.1.0"
