"""Layered run configuration.

Values resolve low to high: built-in defaults, then a key = value config
file, then QUICKVIEW_* environment variables, then CLI flags. Every key is
overridable at every layer; unknown keys are errors so typos surface
instead of silently reverting to defaults.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

from .correlation import CorrelationConfig
from .pipeline import MODES, LengthModel, PipelineConfig, fit_length_model
from .ranking import RankConfig
from .vectorspace import ProviderConfig

__all__ = ["ConfigError", "RunConfig", "ENV_PREFIX"]

ENV_PREFIX = "QUICKVIEW_"

_LENGTH_MODES = ("unbounded", "fit", "linear")


class ConfigError(ValueError):
    """A configuration layer failed to parse or validate."""


def _parse_bool(raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {raw!r}")


def _parse_optional_str(raw: str) -> str | None:
    raw = raw.strip()
    return raw if raw and raw.lower() != "none" else None


def _parse_optional_float(raw: str) -> float | None:
    raw = raw.strip()
    if not raw or raw.lower() == "none":
        return None
    return float(raw)


@dataclass
class RunConfig:
    """Every tunable of the tool, flat, with its default."""

    provider: str = "tfidf"
    endpoint: str | None = None
    timeout_ms: int = 10000
    mode: str = "pipeline"
    top_m: int = 3
    include_anchor: bool = True
    top_n: int = 5
    damping: float = 0.85
    tolerance: float = 1e-6
    max_iter: int = 100
    phase2_input: str = "phase1_output"
    length: str = "unbounded"
    length_slope: float | None = None
    length_intercept: float | None = None
    length_ratio_min: float = 2.0
    length_ratio_max: float = 4.0
    jobs: int = 1
    abbreviations: str | None = None
    histogram_bucket: int = 250

    _PARSERS = {
        "provider": str.strip,
        "endpoint": _parse_optional_str,
        "timeout_ms": int,
        "mode": str.strip,
        "top_m": int,
        "include_anchor": _parse_bool,
        "top_n": int,
        "damping": float,
        "tolerance": float,
        "max_iter": int,
        "phase2_input": str.strip,
        "length": str.strip,
        "length_slope": _parse_optional_float,
        "length_intercept": _parse_optional_float,
        "length_ratio_min": float,
        "length_ratio_max": float,
        "jobs": int,
        "abbreviations": _parse_optional_str,
        "histogram_bucket": int,
    }

    def apply_file(self, path: str | Path) -> None:
        """Layer a key = value file (blank lines and # comments ignored)."""
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ConfigError(f"{path}:{lineno}: expected key = value, got {line!r}")
            key, _, raw = stripped.partition("=")
            self._set(key.strip(), raw.strip(), f"{path}:{lineno}")

    def apply_env(self, environ: Mapping[str, str] | None = None) -> None:
        """Layer QUICKVIEW_* variables; unknown suffixes are errors."""
        environ = os.environ if environ is None else environ
        for name in sorted(environ):
            if not name.startswith(ENV_PREFIX):
                continue
            key = name[len(ENV_PREFIX):].lower()
            self._set(key, environ[name], f"environment variable {name}")

    def apply_flags(self, flags: Mapping[str, Any]) -> None:
        """Layer already-typed CLI values; None means flag not given."""
        for key, value in flags.items():
            if value is None:
                continue
            if key not in self._PARSERS:
                raise ConfigError(f"unknown config key {key!r}")
            setattr(self, key, value)

    def _set(self, key: str, raw: str, where: str) -> None:
        parser = self._PARSERS.get(key)
        if parser is None:
            raise ConfigError(f"{where}: unknown config key {key!r}")
        try:
            setattr(self, key, parser(raw))
        except ValueError as exc:
            raise ConfigError(f"{where}: bad value for {key}: {exc}") from exc

    def validate(self) -> None:
        if self.provider not in ("tfidf", "external"):
            raise ConfigError(f"provider must be tfidf or external, got {self.provider!r}")
        if self.provider == "external" and not self.endpoint:
            raise ConfigError("provider external requires an endpoint")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.phase2_input not in ("phase1_output", "raw_documents"):
            raise ConfigError(f"bad phase2_input {self.phase2_input!r}")
        if self.length not in _LENGTH_MODES:
            raise ConfigError(f"length must be one of {_LENGTH_MODES}, got {self.length!r}")
        if self.length == "linear" and (
            self.length_slope is None or self.length_intercept is None
        ):
            raise ConfigError("length = linear requires length_slope and length_intercept")
        for key in ("timeout_ms", "top_n", "max_iter", "jobs", "histogram_bucket"):
            if getattr(self, key) < 1:
                raise ConfigError(f"{key} must be >= 1")
        if self.top_m < 0:
            raise ConfigError("top_m must be >= 0")
        # Range checks shared with the library types run in their validators.
        self.rank_config()
        self.provider_config()
        if self.length != "unbounded":
            LengthModel(0.0, 0.0, self.length_ratio_min, self.length_ratio_max)

    def as_dict(self) -> dict[str, Any]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def correlation_config(self) -> CorrelationConfig:
        return CorrelationConfig(top_m=self.top_m, include_anchor=self.include_anchor)

    def rank_config(self) -> RankConfig:
        return RankConfig(
            damping=self.damping,
            tolerance=self.tolerance,
            max_iterations=self.max_iter,
            top_n=self.top_n,
        )

    def provider_config(self) -> ProviderConfig:
        return ProviderConfig(
            kind=self.provider, endpoint=self.endpoint, timeout_ms=self.timeout_ms
        )

    def length_model(self, clusters=None) -> LengthModel | None:
        """Resolve the length setting; fit mode needs the loaded clusters."""
        if self.length == "unbounded":
            return None
        if self.length == "linear":
            assert self.length_slope is not None and self.length_intercept is not None
            return LengthModel(
                self.length_slope,
                self.length_intercept,
                self.length_ratio_min,
                self.length_ratio_max,
            )
        if clusters is None:
            raise ConfigError("length = fit requires a dataset with gold summaries")
        return fit_length_model(
            clusters, ratio_min=self.length_ratio_min, ratio_max=self.length_ratio_max
        )

    def pipeline_config(self, length_model: LengthModel | None, abbreviations) -> PipelineConfig:
        return PipelineConfig(
            correlation=self.correlation_config(),
            rank=self.rank_config(),
            provider=self.provider_config(),
            length=length_model,
            phase2_input=self.phase2_input,
            abbreviations=abbreviations,
        )
