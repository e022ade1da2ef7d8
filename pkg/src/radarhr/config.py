"""Strict JSON config parsing for the CLI.

Keys mirror the dataclass field names verbatim; unknown keys are errors.
Sections: pipeline scalars at the top level plus one object per component
("band", "peaks", "sampen", "bounds", "nrbo", "ga", "fixed_vmd").
"""
import json
from dataclasses import fields, replace

from ._search import Bounds
from .baselines import GaConfig
from .errors import DataFormatError
from .evaluation import PipelineConfig
from .heart_rate import PeakConfig
from .nrbo import NrboConfig
from .objective import SampEnConfig
from .reconstruction import BandSpec
from .vmd import VmdParams

_SECTIONS = {
    "band": BandSpec,
    "peaks": PeakConfig,
    "sampen": SampEnConfig,
    "bounds": Bounds,
    "nrbo": NrboConfig,
    "ga": GaConfig,
    "fixed_vmd": VmdParams,
}

_TOP_SCALARS = ("processing_rate_hz", "fit_max_iterations")


def _build_section(cls, payload, where):
    if not isinstance(payload, dict):
        raise DataFormatError(f"{where}: expected an object")
    known = {f.name: f for f in fields(cls)}
    unknown = set(payload) - set(known)
    if unknown:
        raise DataFormatError(f"{where}: unknown keys {sorted(unknown)}; "
                              f"allowed: {sorted(known)}")
    kwargs = {}
    for key, value in payload.items():
        if isinstance(value, list):
            value = tuple(value)
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise DataFormatError(f"{where}: {exc}") from exc


def parse_pipeline_config(payload: dict, where: str = "config") -> PipelineConfig:
    if not isinstance(payload, dict):
        raise DataFormatError(f"{where}: expected a JSON object")
    allowed = set(_SECTIONS) | set(_TOP_SCALARS)
    unknown = set(payload) - allowed
    if unknown:
        raise DataFormatError(f"{where}: unknown keys {sorted(unknown)}; "
                              f"allowed: {sorted(allowed)}")
    kwargs = {}
    for name in _TOP_SCALARS:
        if name in payload:
            kwargs[name] = payload[name]
    for name, cls in _SECTIONS.items():
        if name in payload:
            kwargs[name] = _build_section(cls, payload[name], f"{where}.{name}")
    try:
        return replace(PipelineConfig(), **kwargs)
    except (TypeError, ValueError) as exc:
        raise DataFormatError(f"{where}: {exc}") from exc


def load_pipeline_config(path) -> PipelineConfig:
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataFormatError(f"{path}: {exc}") from exc
    return parse_pipeline_config(payload, where=path)
