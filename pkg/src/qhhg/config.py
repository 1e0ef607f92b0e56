"""Strict parser for flat ``section.key = value`` run files."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .band import ZNO_COEFFS, ZNO_LATTICE, BandModel, symmetric_occupation
from .drive import ENVELOPES, PulseSpec
from .phasespace import KINDS, DrivingField

RUN_KINDS = ("spectrum", "floquet", "cutoff", "scaling", "efield", "validate-app")

_BAND_COEFF = re.compile(r"^band\.b([1-9][0-9]*)$")

# key -> (type, default); None default means "no default"
_SCHEMA = {
    "run.kind": (str, None),
    "run.n_max": (int, 41),
    "out.dir": (str, "out"),
    "band.a": (float, ZNO_LATTICE),
    "band.occupied": (str, "auto10"),
    "band.q_list": (str, None),
    "band.spin": (int, 2),
    "field.kind": (str, None),
    "field.mean_photons": (float, None),
    "field.n": (int, None),
    "field.r": (float, None),
    "field.alpha_abs": (float, None),
    "field.alpha_phase": (float, 0.0),
    "quad.radial_nodes": (int, 400),
    "quad.angular_nodes": (int, 256),
    "quad.rel_tail": (float, 1e-12),
    "pulse.omega0": (float, 0.005),
    "pulse.g0": (float, 4e-8),
    "pulse.flat_cycles": (int, 10),
    "pulse.ramp_cycles": (int, 3),
    "pulse.envelope": (str, "flat_top_sin2"),
    "grid.samples_per_cycle": (int, 512),
    "scaling.harmonic": (int, 5),
    "scaling.min_factor": (float, 0.01),
    "scaling.max_factor": (float, 100.0),
    "scaling.points": (int, 41),
    "app.fock_n": (int, 100),
    "app.bsv_r": (float, 1.0),
}

_NEEDS_FIELD = ("spectrum", "floquet", "scaling", "efield")


class ConfigError(ValueError):
    """Parse or validation failure; message carries the line and key."""


@dataclass(frozen=True)
class RunConfig:
    run_kind: str
    out_dir: str
    band: BandModel
    pulse: PulseSpec
    field: DrivingField | None
    samples_per_cycle: int
    radial_nodes: int
    angular_nodes: int
    rel_tail: float
    values: dict = field(default_factory=dict)

    def get(self, key):
        return self.values[key]


def _convert(key, kind, raw, lineno):
    try:
        if kind is int:
            f = float(raw)
            if not f.is_integer():
                raise ValueError
            return int(f)
        if kind is float:
            v = float(raw)
            if not math.isfinite(v):
                raise ValueError
            return v
        return raw
    except ValueError:
        raise ConfigError(f"line {lineno}: key {key!r}: cannot parse {raw!r} as {kind.__name__}") from None


def read_pairs(text):
    """Raw ``{key: (value, line)}`` with duplicate and unknown keys rejected."""
    pairs = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {lineno}: expected 'section.key = value', got {line.strip()!r}")
        key, value = (s.strip() for s in body.split("=", 1))
        if not key or "." not in key:
            raise ConfigError(f"line {lineno}: malformed key {key!r}")
        if key not in _SCHEMA and not _BAND_COEFF.match(key):
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in pairs:
            raise ConfigError(
                f"line {lineno}: duplicate key {key!r} (first set on line {pairs[key][1]})"
            )
        pairs[key] = (value, lineno)
    return pairs


def _band_from(values, coeffs, lines):
    a = values["band.a"]
    if coeffs:
        l_top = max(coeffs)
        b = [coeffs.get(l, 0.0) for l in range(1, l_top + 1)]
    else:
        b = list(ZNO_COEFFS)
    mode = values["band.occupied"]
    if mode == "auto10":
        q = symmetric_occupation(a)
        if values.get("band.q_list") is not None:
            raise ConfigError(f"line {lines['band.q_list']}: key 'band.q_list' requires band.occupied = explicit")
    elif mode == "explicit":
        raw = values.get("band.q_list")
        if raw is None:
            raise ConfigError("missing required key 'band.q_list' for band.occupied = explicit")
        try:
            q = [float(s) for s in raw.split(",") if s.strip()]
        except ValueError:
            raise ConfigError(f"line {lines['band.q_list']}: key 'band.q_list': not a list of numbers") from None
    else:
        raise ConfigError(f"line {lines.get('band.occupied', 0)}: key 'band.occupied' must be auto10 or explicit")
    try:
        return BandModel(a=a, b=b, occupied_q=q, spin_degeneracy=values["band.spin"])
    except ValueError as exc:
        raise ConfigError(f"band: {exc}") from None


def _field_from(values, lines):
    kind = values.get("field.kind")
    if kind is None:
        return None
    if kind not in KINDS:
        raise ConfigError(f"line {lines['field.kind']}: key 'field.kind' must be one of {', '.join(KINDS)}")
    mean = values.get("field.mean_photons")
    try:
        if kind == "coherent":
            amp = values.get("field.alpha_abs")
            if amp is None:
                if mean is None:
                    raise ConfigError("missing required key 'field.alpha_abs' (or 'field.mean_photons')")
                amp = math.sqrt(mean)
            return DrivingField.coherent(amp, values["field.alpha_phase"])
        if kind == "thermal":
            if mean is None:
                raise ConfigError("missing required key 'field.mean_photons'")
            return DrivingField.thermal(mean)
        if kind == "fock":
            n = values.get("field.n")
            if n is None:
                if mean is None:
                    raise ConfigError("missing required key 'field.n' (or 'field.mean_photons')")
                return DrivingField.from_mean_photons("fock", mean)
            return DrivingField.fock(n)
        r = values.get("field.r")
        if r is None:
            if mean is None:
                raise ConfigError("missing required key 'field.r' (or 'field.mean_photons')")
            return DrivingField.from_mean_photons("bsv", mean)
        return DrivingField.bsv(r)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"field: {exc}") from None


def parse_config(text):
    """Validate run-file text and return a :class:`RunConfig`.

    Raises
    ------
    ConfigError
        With the offending line number and key.
    """
    pairs = read_pairs(text)
    lines = {k: ln for k, (_, ln) in pairs.items()}
    values = {}
    coeffs = {}
    for key, (raw, ln) in pairs.items():
        m = _BAND_COEFF.match(key)
        if m:
            coeffs[int(m.group(1))] = _convert(key, float, raw, ln)
            continue
        values[key] = _convert(key, _SCHEMA[key][0], raw, ln)
    for key, (_, default) in _SCHEMA.items():
        values.setdefault(key, default)

    kind = values["run.kind"]
    if kind is None:
        raise ConfigError("missing required key 'run.kind'")
    if kind not in RUN_KINDS:
        raise ConfigError(f"line {lines['run.kind']}: key 'run.kind' must be one of {', '.join(RUN_KINDS)}")
    if kind in _NEEDS_FIELD and values["field.kind"] is None:
        raise ConfigError(f"missing required key 'field.kind' for run.kind = {kind}")
    if kind == "cutoff" and values["field.mean_photons"] is None:
        raise ConfigError("missing required key 'field.mean_photons' for run.kind = cutoff")
    if values["pulse.envelope"] not in ENVELOPES:
        raise ConfigError(f"line {lines['pulse.envelope']}: key 'pulse.envelope' must be one of {', '.join(ENVELOPES)}")

    band = _band_from(values, coeffs, lines)
    try:
        pulse = PulseSpec(
            omega0=values["pulse.omega0"],
            g0=values["pulse.g0"],
            flat_cycles=values["pulse.flat_cycles"],
            ramp_cycles=values["pulse.ramp_cycles"],
            envelope_kind=values["pulse.envelope"],
        )
    except ValueError as exc:
        raise ConfigError(f"pulse: {exc}") from None
    drive_field = _field_from(values, lines)
    if values["grid.samples_per_cycle"] < 64:
        raise ConfigError("key 'grid.samples_per_cycle' must be >= 64")
    if values["quad.radial_nodes"] < 16:
        raise ConfigError("key 'quad.radial_nodes' must be >= 16")
    if values["quad.angular_nodes"] < 2 or values["quad.angular_nodes"] % 2:
        raise ConfigError("key 'quad.angular_nodes' must be an even integer >= 2")
    if not 0.0 < values["quad.rel_tail"] < 1.0:
        raise ConfigError("key 'quad.rel_tail' must lie in (0, 1)")
    if values["run.n_max"] < 1 or values["run.n_max"] % 2 == 0:
        raise ConfigError("key 'run.n_max' must be an odd positive integer")
    if values["scaling.harmonic"] < 1 or values["scaling.harmonic"] % 2 == 0:
        raise ConfigError("key 'scaling.harmonic' must be odd and positive")
    echo = dict(values)
    echo.update({f"band.b{l}": v for l, v in sorted(coeffs.items())})
    return RunConfig(
        run_kind=kind,
        out_dir=values["out.dir"],
        band=band,
        pulse=pulse,
        field=drive_field,
        samples_per_cycle=values["grid.samples_per_cycle"],
        radial_nodes=values["quad.radial_nodes"],
        angular_nodes=values["quad.angular_nodes"],
        rel_tail=values["quad.rel_tail"],
        values=echo,
    )
