"""Key-value experiment config files.

Flat INI-style sections, one per module: [device], [signaling], [detector],
[experiment].  All physical quantities are linear except sinr_db.  Unknown
sections or keys are hard errors so typos cannot silently change a run.
Complex values use Python literal syntax ("1+0.5j"); bare reals are fine.

pfa_grid accepts either an explicit comma list ("0.01,0.05,0.1") or
"linspace:<start>:<stop>:<count>".
"""

from __future__ import annotations

import configparser
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channel import DeviceModel, Role
from .errors import ConfigurationError
from .signaling import LinkNoiseParams, TxParams

KNOWN_KEYS: dict[str, set[str]] = {
    "experiment": {"sinr_db", "n_train", "mu_mag", "pfa_grid", "trials", "seed", "responder"},
    "detector": {"target_pfa"},
    "signaling": {"p_r", "eta", "sigma2_r", "sigma2_si_r", "sigma2_si_t"},
    "device": {
        f"{role}_{attr}"
        for role in ("reader", "ltag", "mtag")
        for attr in ("h_tx", "h_rx", "si_power")
    },
}

_ROLE_BY_NAME = {"reader": Role.READER, "ltag": Role.LEGIT_TAG, "mtag": Role.MALICIOUS_TAG}


@dataclass
class ConfigDocument:
    """Parsed config plus enough source info for field-level diagnostics."""

    path: Path
    sections: dict[str, dict[str, str]]
    _source_lines: list[str]

    def line_of(self, key: str) -> int | None:
        pattern = re.compile(rf"^\s*{re.escape(key)}\s*[=:]")
        for i, line in enumerate(self._source_lines, start=1):
            if pattern.match(line):
                return i
        return None

    def error(self, section: str, key: str, message: str) -> ConfigurationError:
        line = self.line_of(key)
        where = f"line {line}" if line is not None else "line unknown"
        return ConfigurationError(f"{self.path}: [{section}] {key} ({where}): {message}")

    def has(self, section: str, key: str) -> bool:
        return key in self.sections.get(section, {})

    def raw(self, section: str, key: str) -> str:
        try:
            return self.sections[section][key]
        except KeyError:
            raise ConfigurationError(
                f"{self.path}: missing required key '{key}' in section [{section}]"
            ) from None

    def get_float(self, section: str, key: str) -> float:
        text = self.raw(section, key)
        try:
            value = float(text)
        except ValueError:
            raise self.error(section, key, f"not a number: {text!r}") from None
        if not math.isfinite(value):
            raise self.error(section, key, f"must be finite, got {text!r}")
        return value

    def get_int(self, section: str, key: str) -> int:
        text = self.raw(section, key)
        try:
            return int(text)
        except ValueError:
            raise self.error(section, key, f"not an integer: {text!r}") from None

    def get_complex(self, section: str, key: str) -> complex:
        text = self.raw(section, key).replace(" ", "")
        try:
            return complex(text)
        except ValueError:
            raise self.error(section, key, f"not a complex number: {text!r}") from None

    def get_choice(self, section: str, key: str, choices: tuple[str, ...]) -> str:
        text = self.raw(section, key).strip().lower()
        if text not in choices:
            raise self.error(section, key, f"must be one of {choices}, got {text!r}")
        return text

    def get_pfa_grid(self, section: str = "experiment", key: str = "pfa_grid") -> tuple[float, ...]:
        text = self.raw(section, key).strip()
        if text.startswith("linspace:"):
            parts = text.split(":")
            if len(parts) != 4:
                raise self.error(section, key, "linspace form is linspace:<start>:<stop>:<count>")
            try:
                start, stop, count = float(parts[1]), float(parts[2]), int(parts[3])
            except ValueError:
                raise self.error(section, key, f"bad linspace arguments: {text!r}") from None
            if count < 1:
                raise self.error(section, key, "linspace count must be >= 1")
            values = [float(v) for v in np.linspace(start, stop, count)]
        else:
            try:
                values = [float(v) for v in text.split(",") if v.strip()]
            except ValueError:
                raise self.error(section, key, f"not a comma list of numbers: {text!r}") from None
        if not values:
            raise self.error(section, key, "grid is empty")
        for v in values:
            if not (0.0 < v < 1.0):
                raise self.error(section, key, f"values must lie strictly in (0, 1), got {v!r}")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise self.error(section, key, "values must be strictly increasing")
        return tuple(values)


def load_config(path: str | Path) -> ConfigDocument:
    path = Path(path)
    parser = configparser.ConfigParser(interpolation=None)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc

    sections: dict[str, dict[str, str]] = {}
    for section in parser.sections():
        if section not in KNOWN_KEYS:
            raise ConfigurationError(
                f"{path}: unknown section [{section}] "
                f"(known: {', '.join(sorted(KNOWN_KEYS))})"
            )
        sections[section] = dict(parser.items(section))

    doc = ConfigDocument(path=path, sections=sections, _source_lines=text.splitlines())
    for section, items in sections.items():
        for key in items:
            if key not in KNOWN_KEYS[section]:
                raise doc.error(section, key, "unknown key")
    return doc


def signaling_params(doc: ConfigDocument) -> tuple[TxParams, LinkNoiseParams]:
    tx = TxParams(p_r=doc.get_float("signaling", "p_r"), eta=doc.get_float("signaling", "eta"))
    noise = LinkNoiseParams(
        sigma2_r=doc.get_float("signaling", "sigma2_r"),
        sigma2_si_r=doc.get_float("signaling", "sigma2_si_r"),
        sigma2_si_t=doc.get_float("signaling", "sigma2_si_t"),
    )
    return tx, noise


def device_from(doc: ConfigDocument, role_name: str) -> DeviceModel:
    si_key = f"{role_name}_si_power"
    return DeviceModel(
        h_tx=doc.get_complex("device", f"{role_name}_h_tx"),
        h_rx=doc.get_complex("device", f"{role_name}_h_rx"),
        si_power=doc.get_float("device", si_key) if doc.has("device", si_key) else 0.0,
        role=_ROLE_BY_NAME[role_name],
    )
