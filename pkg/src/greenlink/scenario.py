"""Scenario file ingestion and serialization.

A scenario is a TOML document with ``[link]``, ``[fading]``, ``[scheme]``
and optional ``[circuit]`` / ``[sweep]`` sections.  Unknown keys are
rejected outright.  dB-valued fields (gain margin, reference gain, noise
density, Rician factor) are converted to linear exactly once, here.  Block
powers missing from ``[circuit]`` default to the reference transceiver
profile matching each scheme's category (pass-band vs UWB), and a missing
``transient_s`` defaults per scheme (5 us MFSK, 20 us MQAM/OQPSK, 2 ns
UWB).

Presets named ``fig5 fig6a fig6b fig7 fig8 table2`` ship with the package
and reproduce the reference evaluation grids with one command.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, fields, replace
from importlib import resources

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .linkbudget import FadingModel, LinkBudget, db_to_linear
from .schemes import CircuitProfile, SchemeConfig, SchemeId
from .solver import SweepSpec

PRESETS = ("fig5", "fig6a", "fig6b", "fig7", "fig8", "table2")

_SCHEME_IDS = {s.value: s for s in SchemeId}

_LINK_KEYS = ("distance_m", "eta", "gain_margin_db", "l1_db", "n0_db")
_FADING_KEYS = ("type", "k_db", "omega")
_SCHEME_KEYS = (
    "id",
    "m",
    "payload_bits",
    "bandwidth_hz",
    "frame_period_s",
    "transient_s",
    "target_ser",
    "ook_duty",
)
_CIRCUIT_KEYS = tuple(f.name for f in fields(CircuitProfile))
_SWEEP_KEYS = ("schemes", "m", "distance_m", "k_db")

_DEFAULT_TRANSIENT_S = {
    SchemeId.NC_MFSK: 5e-6,
    SchemeId.COHERENT_MFSK: 5e-6,
    SchemeId.MQAM: 20e-6,
    SchemeId.DOQPSK: 20e-6,
    SchemeId.OOK: 2e-9,
    SchemeId.MPPM: 2e-9,
}


@dataclass(frozen=True)
class Scenario:
    """Parsed scenario: resolved section dicts, still in file units (dB)."""

    link: dict
    fading: dict
    scheme: dict
    circuit: dict
    sweep: dict | None

    def build_link(self) -> LinkBudget:
        s = self.link
        return LinkBudget(
            distance_m=float(s["distance_m"]),
            path_loss_exponent=float(s["eta"]),
            gain_margin=db_to_linear(float(s["gain_margin_db"])),
            reference_gain=db_to_linear(float(s["l1_db"])),
            noise_psd=db_to_linear(float(s["n0_db"])),
        )

    def build_fading(self) -> FadingModel:
        s = self.fading
        omega = float(s["omega"])
        if s["type"] == "rayleigh":
            return FadingModel.rayleigh(omega)
        if s["type"] == "awgn":
            return FadingModel.awgn(omega)
        return FadingModel.rician(db_to_linear(float(s["k_db"])), omega)

    def scheme_id(self) -> SchemeId:
        if "id" not in self.scheme:
            raise ConfigError("[scheme] id is required for single-scheme commands")
        return _parse_scheme_id(self.scheme["id"])

    def build_config(self, scheme: SchemeId | None = None, m: int | None = None) -> SchemeConfig:
        s = self.scheme
        scheme = scheme if scheme is not None else self.scheme_id()
        if m is None:
            if scheme in (SchemeId.DOQPSK, SchemeId.OOK):
                m = int(s.get("m", 2))
            elif "m" in s:
                m = int(s["m"])
            else:
                raise ConfigError(f"[scheme] m is required for {scheme.value}")
        transient = s.get("transient_s", _DEFAULT_TRANSIENT_S[scheme])
        kwargs = dict(
            scheme=scheme,
            m=m,
            payload_bits=int(s["payload_bits"]),
            bandwidth_hz=float(s["bandwidth_hz"]),
            frame_period_s=float(s["frame_period_s"]),
            transient_s=float(transient),
            target_ser=float(s["target_ser"]),
        )
        if "ook_duty" in s:
            kwargs["ook_duty"] = float(s["ook_duty"])
        return SchemeConfig(**kwargs)

    def build_circuit(self, scheme: SchemeId) -> CircuitProfile:
        base = CircuitProfile.default_for(scheme)
        if not self.circuit:
            return base
        return replace(base, **{k: float(v) for k, v in self.circuit.items()})

    def build_single(self) -> tuple[SchemeConfig, LinkBudget, FadingModel, CircuitProfile]:
        cfg = self.build_config()
        return cfg, self.build_link(), self.build_fading(), self.build_circuit(cfg.scheme)

    def build_sweep(self) -> SweepSpec:
        if self.sweep is None:
            raise ConfigError("scenario has no [sweep] section")
        sw = self.sweep
        if "schemes" in sw:
            schemes = tuple(_parse_scheme_id(x) for x in sw["schemes"])
        else:
            schemes = (self.scheme_id(),)
        if "m" in sw:
            m_values = tuple(int(x) for x in sw["m"])
        elif "m" in self.scheme:
            m_values = (int(self.scheme["m"]),)
        else:
            m_values = (2,)
        if "distance_m" in sw:
            distances = tuple(float(x) for x in sw["distance_m"])
        else:
            distances = (float(self.link["distance_m"]),)
        k_axis = tuple(float(x) for x in sw["k_db"]) if "k_db" in sw else None
        configs = {}
        circuits = {}
        for scheme in schemes:
            # any power of 2 valid for the scheme works as the baseline m
            base_m = 4 if scheme == SchemeId.MQAM else 2
            configs[scheme] = self.build_config(scheme=scheme, m=base_m)
            circuits[scheme] = self.build_circuit(scheme)
        return SweepSpec(
            schemes=schemes,
            m_values=m_values,
            distances_m=distances,
            k_db_values=k_axis,
            configs=configs,
            link=self.build_link(),
            fading=self.build_fading(),
            circuits=circuits,
        )


def _parse_scheme_id(value: str) -> SchemeId:
    try:
        return _SCHEME_IDS[str(value)]
    except KeyError:
        raise ConfigError(
            f"unknown scheme id {value!r}; expected one of {sorted(_SCHEME_IDS)}"
        ) from None


def _check_keys(section: str, table: dict, allowed: tuple[str, ...]) -> None:
    unknown = sorted(set(table) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")


def _require(section: str, table: dict, keys: tuple[str, ...]) -> None:
    missing = sorted(k for k in keys if k not in table)
    if missing:
        raise ConfigError(f"missing key(s) in [{section}]: {', '.join(missing)}")


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document."""
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"scenario is not valid TOML: {exc}") from None
    _check_keys("top level", doc, ("link", "fading", "scheme", "circuit", "sweep"))
    for name in ("link", "fading", "scheme"):
        if name not in doc:
            raise ConfigError(f"scenario is missing the [{name}] section")

    link = dict(doc["link"])
    _check_keys("link", link, _LINK_KEYS)
    _require("link", link, _LINK_KEYS)

    fading = dict(doc["fading"])
    _check_keys("fading", fading, _FADING_KEYS)
    _require("fading", fading, ("type",))
    if fading["type"] not in ("rayleigh", "rician", "awgn"):
        raise ConfigError(f"unknown fading type {fading['type']!r}")
    if fading["type"] == "rician" and "k_db" not in fading:
        raise ConfigError("rician fading requires k_db")
    if fading["type"] != "rician" and "k_db" in fading:
        raise ConfigError("k_db is only valid for rician fading")
    fading.setdefault("omega", 1.0)

    scheme = dict(doc["scheme"])
    _check_keys("scheme", scheme, _SCHEME_KEYS)
    _require("scheme", scheme, ("payload_bits", "bandwidth_hz", "frame_period_s", "target_ser"))
    if "id" in scheme:
        _parse_scheme_id(scheme["id"])

    circuit = dict(doc.get("circuit", {}))
    _check_keys("circuit", circuit, _CIRCUIT_KEYS)

    sweep = doc.get("sweep")
    if sweep is not None:
        sweep = dict(sweep)
        _check_keys("sweep", sweep, _SWEEP_KEYS)
        for axis in _SWEEP_KEYS:
            if axis in sweep and not isinstance(sweep[axis], list):
                raise ConfigError(f"[sweep] {axis} must be a list")
            if axis in sweep and not sweep[axis]:
                raise ConfigError(f"[sweep] {axis} must be non-empty")
        if "schemes" in sweep:
            for x in sweep["schemes"]:
                _parse_scheme_id(x)

    return Scenario(link=link, fading=fading, scheme=scheme, circuit=circuit, sweep=sweep)


def load_scenario(source: str) -> Scenario:
    """Load a scenario from a file path or a packaged preset name."""
    import os

    if os.path.exists(source):
        with open(source, "rb") as fh:
            return parse_scenario(fh.read().decode("utf-8"))
    if source in PRESETS:
        text = resources.files("greenlink.presets").joinpath(f"{source}.toml").read_text()
        return parse_scenario(text)
    raise ConfigError(f"scenario {source!r} is neither a file nor a preset {PRESETS}")


# ---------------------------------------------------------------------------
# serialization (round-trip support)


def _toml_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ConfigError(f"cannot serialize non-finite float {value}")
        text = repr(value)
        return text if any(c in text for c in ".e") else text + ".0"
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, list):
        return "[" + ", ".join(_toml_scalar(v) for v in value) + "]"
    raise ConfigError(f"cannot serialize {type(value).__name__} to TOML")


def dump_scenario(scenario: Scenario) -> str:
    """Serialize a parsed scenario (defaults resolved) back to TOML."""
    lines: list[str] = []
    sections = [
        ("link", scenario.link, _LINK_KEYS),
        ("fading", scenario.fading, _FADING_KEYS),
        ("scheme", scenario.scheme, _SCHEME_KEYS),
        ("circuit", scenario.circuit, _CIRCUIT_KEYS),
    ]
    if scenario.sweep is not None:
        sections.append(("sweep", scenario.sweep, _SWEEP_KEYS))
    for name, table, order in sections:
        if name == "circuit" and not table:
            continue
        lines.append(f"[{name}]")
        for key in order:
            if key in table:
                lines.append(f"{key} = {_toml_scalar(table[key])}")
        lines.append("")
    return "\n".join(lines)
