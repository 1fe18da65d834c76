"""Batch front end: scenario files -> frequency sweeps -> CSV.

A scenario is an INI file with a shared sweep grid and one ``[curve X]``
section per response curve; see the shipped files under
``wlcifo/scenarios``. Example::

    [scenario]
    name = fig5-I

    [grid]
    f_min_hz = 1
    f_max_hz = 20000
    points = 200
    spacing = log

    [normalize]
    reference = A
    at_hz = 1.0

    [curve A]
    label = 0 deg
    preset = adligo
    t_c_squared = 0.2
    detune_deg = 0

Curve options by preset:

* ``adligo``  - t_c_squared, detune_deg, wlc = none|lorentzian,
  wlc_linewidth_hz (arm-hosted medium, l = L)
* ``dual-recycling`` - t_srm_squared, t_prm_squared, detune_deg,
  wlc = none|linear, wlc_medium_length_m
* ``aux-mirror`` - t_aux_squared, detune_deg, wlc = none|linear,
  wlc_medium_length_m

Exit codes: 0 success, 2 scenario parse error, 3 model divergence,
4 oracle-check failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import detector_configs as configs
from .optics_core import ModelDivergenceError, TWO_PI
from .response import series_oracle, signal_magnitude

ORACLE_TOLERANCE = 1e-6
ORACLE_BOUNCES = 200_000


class ScenarioError(ValueError):
    """Malformed scenario file."""


@dataclass(frozen=True)
class SweepGrid:
    f_min_hz: float
    f_max_hz: float
    points: int
    spacing: str = "log"

    def __post_init__(self):
        if not 0 < self.f_min_hz < self.f_max_hz:
            raise ValueError("need 0 < f_min < f_max")
        if self.points < 2:
            raise ValueError("need at least 2 grid points")
        if self.spacing not in ("log", "linear"):
            raise ValueError("spacing must be 'log' or 'linear'")

    def frequencies_hz(self) -> np.ndarray:
        if self.spacing == "log":
            return np.logspace(
                math.log10(self.f_min_hz), math.log10(self.f_max_hz), self.points
            )
        return np.linspace(self.f_min_hz, self.f_max_hz, self.points)


@dataclass
class ResponseCurve:
    frequencies_hz: np.ndarray
    magnitudes: np.ndarray
    label: str
    normalization_ref: tuple[str, float] | None = None

    def value_at(self, f_hz: float) -> float:
        f = self.frequencies_hz
        if f_hz <= f[0]:
            return float(self.magnitudes[0])
        return float(np.interp(f_hz, f, self.magnitudes))


def run_sweep(
    cfg: configs.DetectorConfig, grid: SweepGrid, label: str = ""
) -> ResponseCurve:
    """One |dI| per grid frequency; deterministic for fixed inputs."""
    det = configs.reduce(cfg)
    freqs = grid.frequencies_hz()
    try:
        mags = signal_magnitude(det, TWO_PI * freqs).magnitude
    except ModelDivergenceError:
        # vectorized evaluation cannot say which frequency diverged; redo
        # pointwise to attach it
        for f in freqs:
            try:
                signal_magnitude(det, TWO_PI * f)
            except ModelDivergenceError as exc:
                raise ModelDivergenceError(f"{exc} (at f = {f:g} Hz)") from exc
        raise
    return ResponseCurve(freqs, np.asarray(mags, dtype=float), label)


def normalize_curve(
    curve: ResponseCurve, reference: ResponseCurve, at_f_hz: float
) -> ResponseCurve:
    """Divide a curve by the reference's value at at_f_hz (the reference's
    lowest grid point stands in for anything below it)."""
    ref_value = reference.value_at(at_f_hz)
    if ref_value == 0.0:
        raise ValueError("normalization reference value is zero")
    return ResponseCurve(
        curve.frequencies_hz,
        curve.magnitudes / ref_value,
        curve.label,
        normalization_ref=(reference.label, at_f_hz),
    )


def emit_csv(curves: list[ResponseCurve], destination) -> None:
    """Write curves sharing one grid as CSV: frequency_hz,<label>,...

    Values are written with 17 significant digits so a re-parse recovers
    them exactly; byte output is deterministic for fixed inputs.
    """
    labels = [c.label for c in curves]
    for label in labels:
        if "," in label or "\n" in label:
            raise ValueError(f"curve label {label!r} cannot contain ',' or newline")
    if curves:
        base = curves[0].frequencies_hz
        for c in curves[1:]:
            if len(c.frequencies_hz) != len(base) or not np.array_equal(
                c.frequencies_hz, base
            ):
                raise ValueError("curves must share one frequency grid")
    lines = ["frequency_hz" + "".join("," + lab for lab in labels)]
    if curves:
        for i, f in enumerate(curves[0].frequencies_hz):
            row = [f"{f:.16e}"] + [f"{c.magnitudes[i]:.16e}" for c in curves]
            lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")


@dataclass
class CurveSpec:
    key: str
    label: str
    preset: str
    options: dict = field(default_factory=dict)


@dataclass
class Scenario:
    name: str
    grid: SweepGrid
    curves: list[CurveSpec]
    normalize_ref: str | None = None
    normalize_at_hz: float = 1.0


def _get_float(section, key, default):
    try:
        return section.getfloat(key, fallback=default)
    except ValueError as exc:
        raise ScenarioError(f"bad float for {key!r}: {exc}") from exc


def load_scenario(source) -> Scenario:
    """Parse a scenario INI file (path or file-like)."""
    parser = configparser.ConfigParser()
    try:
        if hasattr(source, "read") and not isinstance(source, (str, Path)):
            parser.read_file(source)
        else:
            text = Path(source).read_text(encoding="utf-8")
            parser.read_string(text)
    except (OSError, configparser.Error) as exc:
        raise ScenarioError(f"cannot parse scenario: {exc}") from exc

    if "scenario" not in parser or "name" not in parser["scenario"]:
        raise ScenarioError("scenario file needs [scenario] with a name")
    name = parser["scenario"]["name"]
    if "grid" not in parser:
        raise ScenarioError("scenario file needs a [grid] section")
    g = parser["grid"]
    try:
        grid = SweepGrid(
            f_min_hz=_get_float(g, "f_min_hz", 1.0),
            f_max_hz=_get_float(g, "f_max_hz", 20000.0),
            points=g.getint("points", fallback=200),
            spacing=g.get("spacing", fallback="log"),
        )
    except ValueError as exc:
        raise ScenarioError(f"bad grid: {exc}") from exc

    curves = []
    for section in parser.sections():
        if not section.startswith("curve"):
            continue
        key = section.split(None, 1)[1] if " " in section else section
        sec = parser[section]
        preset = sec.get("preset", fallback=None)
        if preset is None:
            raise ScenarioError(f"[{section}] is missing 'preset'")
        options = {
            k: v for k, v in sec.items() if k not in ("preset", "label")
        }
        curves.append(
            CurveSpec(key=key, label=sec.get("label", fallback=key),
                      preset=preset, options=options)
        )
    if not curves:
        raise ScenarioError("scenario defines no [curve X] sections")

    normalize_ref = None
    normalize_at = 1.0
    if "normalize" in parser:
        n = parser["normalize"]
        normalize_ref = n.get("reference", fallback=None)
        if normalize_ref is None:
            raise ScenarioError("[normalize] needs 'reference = <curve key>'")
        if normalize_ref not in [c.key for c in curves]:
            raise ScenarioError(
                f"[normalize] references unknown curve {normalize_ref!r}"
            )
        normalize_at = _get_float(n, "at_hz", 1.0)
    return Scenario(name, grid, curves, normalize_ref, normalize_at)


def _build_float(options: dict, key: str, default: float) -> float:
    raw = options.get(key)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError as exc:
        raise ScenarioError(f"bad float for {key!r}: {raw!r}") from exc


def build_config(spec: CurveSpec) -> configs.DetectorConfig:
    """Turn one curve section into a DetectorConfig."""
    opts = dict(spec.options)
    preset = spec.preset.lower()
    wlc = opts.pop("wlc", "none").lower()
    detune_deg = _build_float(opts, "detune_deg", 0.0)
    opts.pop("detune_deg", None)

    if preset == "adligo":
        t_c2 = _build_float(opts, "t_c_squared", configs.REF_SRC_T_SQUARED)
        opts.pop("t_c_squared", None)
        linewidth = _build_float(
            opts, "wlc_linewidth_hz", configs.DEFAULT_WLC_LINEWIDTH_HZ
        )
        opts.pop("wlc_linewidth_hz", None)
        cfg = configs.adligo_preset(t_c2)
        if detune_deg:
            cfg = configs.detune(cfg, detune_deg)
        if wlc == "lorentzian":
            cfg = configs.with_arm_wlc(cfg, linewidth)
        elif wlc != "none":
            raise ScenarioError(
                f"curve {spec.key!r}: adligo supports wlc = none|lorentzian"
            )
    elif preset == "dual-recycling":
        t_srm2 = _build_float(opts, "t_srm_squared", None)
        if t_srm2 is None:
            raise ScenarioError(f"curve {spec.key!r} needs t_srm_squared")
        opts.pop("t_srm_squared", None)
        t_prm2 = _build_float(opts, "t_prm_squared", configs.REF_PRC_BACK_T_SQUARED)
        opts.pop("t_prm_squared", None)
        medium_length = _build_float(opts, "wlc_medium_length_m", 1.0)
        opts.pop("wlc_medium_length_m", None)
        if wlc not in ("none", "linear"):
            raise ScenarioError(
                f"curve {spec.key!r}: dual-recycling supports wlc = none|linear"
            )
        cfg = configs.fig2_preset(
            math.sqrt(max(0.0, 1.0 - t_srm2)),
            math.sqrt(max(0.0, 1.0 - t_prm2)),
            with_wlc=(wlc == "linear"),
            detune_deg=detune_deg,
            medium_length=medium_length,
        )
    elif preset == "aux-mirror":
        t_aux2 = _build_float(opts, "t_aux_squared", None)
        if t_aux2 is None:
            raise ScenarioError(f"curve {spec.key!r} needs t_aux_squared")
        opts.pop("t_aux_squared", None)
        medium_length = _build_float(opts, "wlc_medium_length_m", 0.1)
        opts.pop("wlc_medium_length_m", None)
        if wlc not in ("none", "linear"):
            raise ScenarioError(
                f"curve {spec.key!r}: aux-mirror supports wlc = none|linear"
            )
        cfg = configs.fig8_preset(
            math.sqrt(max(0.0, 1.0 - t_aux2)),
            with_wlc=(wlc == "linear"),
            detune_deg=detune_deg,
            medium_length=medium_length,
        )
    else:
        raise ScenarioError(f"curve {spec.key!r}: unknown preset {spec.preset!r}")
    if opts:
        raise ScenarioError(
            f"curve {spec.key!r}: unknown options {sorted(opts)}"
        )
    return cfg


def run_scenario(scenario: Scenario):
    """Sweep every curve; returns (curves, metadata)."""
    raw = {}
    meta = {}
    for spec in scenario.curves:
        cfg = build_config(spec)
        raw[spec.key] = run_sweep(cfg, scenario.grid, label=spec.label)
        det = configs.reduce(cfg)
        meta[spec.key] = dict(cfg.metadata)
        meta[spec.key]["homodyne_phase_rad"] = det.homodyne_phase
        meta[spec.key]["detuning_deg"] = cfg.detuning_deg
    curves = list(raw.values())
    if scenario.normalize_ref is not None:
        reference = raw[scenario.normalize_ref]
        curves = [
            normalize_curve(c, reference, scenario.normalize_at_hz) for c in curves
        ]
    return curves, meta


def oracle_check(scenario: Scenario, n_spots: int = 5) -> float:
    """Max relative deviation closed-form vs series oracle at spot
    frequencies, across all curves of the scenario."""
    spots = np.logspace(
        math.log10(scenario.grid.f_min_hz),
        math.log10(scenario.grid.f_max_hz),
        n_spots,
    )
    worst = 0.0
    for spec in scenario.curves:
        det = configs.reduce(build_config(spec))
        closed = signal_magnitude(det, TWO_PI * spots).magnitude
        brute = series_oracle(det, TWO_PI * spots, ORACLE_BOUNCES).magnitude
        dev = np.abs(closed - brute) / np.where(brute == 0.0, 1.0, np.abs(brute))
        worst = max(worst, float(dev.max()))
    return worst


def shipped_scenario_path(name: str) -> Path:
    """Path of a scenario shipped with the package, by bare name."""
    return Path(resources.files("wlcifo.scenarios") / f"{name}.ini")


def shipped_scenarios() -> list[str]:
    root = resources.files("wlcifo.scenarios")
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".ini"))


def _resolve_scenario(arg: str) -> Path:
    p = Path(arg)
    if p.exists():
        return p
    shipped = shipped_scenario_path(arg)
    if shipped.exists():
        return shipped
    raise ScenarioError(
        f"scenario {arg!r} not found (no such file, not a shipped scenario; "
        f"shipped: {', '.join(shipped_scenarios())})"
    )


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="wlcifo",
        description="Frequency response of Michelson GW detector configurations",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sim = sub.add_parser("simulate", help="run a scenario and emit CSV")
    sim.add_argument("scenario", help="scenario file path or shipped scenario name")
    sim.add_argument("--out", default=None, help="output CSV path")
    sim.add_argument(
        "--grid", default=None, help="override grid: f_min:f_max:points:log|lin"
    )
    sim.add_argument(
        "--oracle-check",
        action="store_true",
        help="also verify the closed form against the bounce-sum oracle "
        "at 5 spot frequencies per curve",
    )
    lst = sub.add_parser("scenarios", help="list shipped scenarios")
    args = parser.parse_args(argv)

    if args.command == "scenarios":
        for name in shipped_scenarios():
            print(name)
        return 0

    try:
        scenario = load_scenario(_resolve_scenario(args.scenario))
        if args.grid:
            parts = args.grid.split(":")
            if len(parts) != 4:
                raise ScenarioError("--grid wants f_min:f_max:points:log|lin")
            spacing = {"log": "log", "lin": "linear", "linear": "linear"}.get(parts[3])
            if spacing is None:
                raise ScenarioError("--grid spacing must be 'log' or 'lin'")
            try:
                scenario.grid = SweepGrid(
                    float(parts[0]), float(parts[1]), int(parts[2]), spacing
                )
            except ValueError as exc:
                raise ScenarioError(f"bad --grid: {exc}") from exc
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2

    try:
        curves, meta = run_scenario(scenario)
    except ModelDivergenceError as exc:
        print(f"model divergence: {exc}", file=sys.stderr)
        return 3

    out = Path(args.out) if args.out else Path(f"{scenario.name}.csv")
    emit_csv(curves, out)
    meta_path = out.with_suffix(out.suffix + ".meta.json")
    meta_path.write_text(
        json.dumps({"scenario": scenario.name, "curves": meta}, indent=2,
                   sort_keys=True, default=str)
        + "\n",
        encoding="utf-8",
    )
    print(f"wrote {out} ({len(curves)} curves x {scenario.grid.points} points)")

    if args.oracle_check:
        worst = oracle_check(scenario)
        print(f"oracle check: max relative deviation {worst:.3e}")
        if worst > ORACLE_TOLERANCE:
            print(
                f"oracle check FAILED (> {ORACLE_TOLERANCE:g})", file=sys.stderr
            )
            return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
