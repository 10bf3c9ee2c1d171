"""Experiment configuration: YAML (or JSON) validated by pydantic models.

Every domain object is built during validation, so an invalid model, trend,
kernel or estimator setting is rejected before any computation starts.
"""
import json
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, field_validator, model_validator

from ..tools.kernels import KernelForm, SmoothingKernel
from ..tools.spectral_models import Family, SpectralModel, frbm, ou, scaled
from ..tools.trend import TrendForm, TrendSpec
from ..tools.whittle import WeightForm, WhittleConfig
from .aliases import normalize_name

DEFAULT_LADDER = [50.0, 100.0, 200.0, 400.0]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ModelSpec(_Section):
    family: str = "ou"
    params: Dict[str, float] = Field(default_factory=lambda: {"rate": 1.0, "sigma2": 1.0})
    base: Optional["ModelSpec"] = None

    @field_validator("family")
    @classmethod
    def _family(cls, value: str) -> str:
        return normalize_name("family", value)

    def build(self) -> SpectralModel:
        family = Family(self.family)
        p = dict(self.params)
        if family is Family.OU:
            model = ou(p.pop("rate", 1.0), p.pop("sigma2", 1.0))
        elif family is Family.FRBM:
            if "u" not in p or "v" not in p:
                raise ValueError("fRBm needs parameters u and v (c defaults to 1)")
            model = frbm(p.pop("u"), p.pop("v"), p.pop("c", 1.0))
        else:
            if self.base is None:
                raise ValueError("scaled model needs a 'base' model")
            model = scaled(self.base.build(), p.pop("factor", 1.0))
        if p:
            raise ValueError(f"unknown parameters {sorted(p)} for family {family.value}")
        return model


class TrendConfig(_Section):
    form: str = "shifted_power"
    C: float = 1.0
    beta: float = 0.5

    @field_validator("form")
    @classmethod
    def _form(cls, value: str) -> str:
        return normalize_name("trend", value)

    def build(self) -> TrendSpec:
        return TrendSpec(TrendForm(self.form), self.C, self.beta)


class KernelConfig(_Section):
    form: str = "poisson"
    bandwidth: float = 1.0
    gamma: float = 2.0
    scale: float = 1.0

    @field_validator("form")
    @classmethod
    def _form(cls, value: str) -> str:
        return normalize_name("kernel", value)

    def build(self) -> SmoothingKernel:
        return SmoothingKernel(KernelForm(self.form), self.bandwidth, self.gamma, self.scale)


class WhittleSpec(_Section):
    weight: str = "rational"
    bounds: Dict[str, Tuple[float, float]] = Field(default_factory=dict)
    free: Optional[List[str]] = None
    profile_scale: bool = False
    band: Tuple[float, float] = (0.0, 5.0)
    xatol: float = 1e-5
    fatol: float = 1e-8
    max_evals: int = 2000
    fd_step: float = 1e-6

    @field_validator("weight")
    @classmethod
    def _weight(cls, value: str) -> str:
        return normalize_name("weight", value)

    def build(self) -> WhittleConfig:
        return WhittleConfig(
            weight_form=WeightForm(self.weight),
            theta_bounds=dict(self.bounds),
            free=tuple(self.free) if self.free is not None else None,
            profile_scale=self.profile_scale,
            band=tuple(self.band),
            xatol=self.xatol,
            fatol=self.fatol,
            max_evals=self.max_evals,
            fd_step=self.fd_step,
        )


class GridSpec(_Section):
    T_ladder: List[float] = Field(default_factory=lambda: list(DEFAULT_LADDER), min_length=1)
    n: int = 1024
    pad: int = Field(default=1, ge=1)
    clt_n: int = 4096

    @field_validator("T_ladder")
    @classmethod
    def _ladder(cls, value: List[float]) -> List[float]:
        if any(t <= 0 for t in value):
            raise ValueError(f"T_ladder entries must be positive, got {value}")
        return sorted(value)


class ConditionOverrides(_Section):
    alpha: Optional[Union[float, str]] = None
    beta: Optional[float] = None
    gamma: Optional[Union[float, str]] = None
    memory: Optional[str] = None
    variant: str = "continuous"

    @field_validator("memory")
    @classmethod
    def _memory(cls, value: Optional[str]) -> Optional[str]:
        return None if value is None else normalize_name("memory", value)

    @field_validator("variant")
    @classmethod
    def _variant(cls, value: str) -> str:
        return normalize_name("variant", value)


class ExperimentConfig(_Section):
    """Full experiment description; CLI flags override out/seed/workers."""

    model: ModelSpec = Field(default_factory=ModelSpec)
    trend: TrendConfig = Field(default_factory=TrendConfig)
    kernel: KernelConfig = Field(default_factory=KernelConfig)
    whittle: WhittleSpec = Field(default_factory=WhittleSpec)
    grid: GridSpec = Field(default_factory=GridSpec)
    conditions: ConditionOverrides = Field(default_factory=ConditionOverrides)
    replications: int = Field(default=200, ge=2)
    clt_replications: int = Field(default=500, ge=2)
    estimator_replications: int = Field(default=100, ge=2)
    paths: int = Field(default=1, ge=1)
    theta_init: Optional[Dict[str, float]] = None
    j_nodes: int = Field(default=512, ge=16)
    d_points: int = Field(default=4096, ge=2049)
    base_seed: int = Field(default=0, ge=0, lt=2 ** 64)
    output_dir: str = "results"
    workers: int = Field(default=1, ge=1)

    _model: SpectralModel = PrivateAttr()
    _trend: TrendSpec = PrivateAttr()
    _kernel: SmoothingKernel = PrivateAttr()
    _whittle: WhittleConfig = PrivateAttr()

    @model_validator(mode="after")
    def _build(self) -> "ExperimentConfig":
        self._model = self.model.build()
        self._trend = self.trend.build()
        self._kernel = self.kernel.build()
        self._whittle = self.whittle.build()
        self._whittle.free_names(self._model)
        return self

    @property
    def spectral_model(self) -> SpectralModel:
        return self._model

    @property
    def trend_spec(self) -> TrendSpec:
        return self._trend

    @property
    def smoothing_kernel(self) -> SmoothingKernel:
        return self._kernel

    @property
    def whittle_config(self) -> WhittleConfig:
        return self._whittle

    def with_overrides(self, out: Optional[str] = None, seed: Optional[int] = None,
                       workers: Optional[int] = None) -> "ExperimentConfig":
        data = self.model_dump()
        if out is not None:
            data["output_dir"] = out
        if seed is not None:
            data["base_seed"] = seed
        if workers is not None:
            data["workers"] = workers
        return ExperimentConfig.model_validate(data)

    def resolved(self) -> Dict[str, object]:
        """JSON-ready copy of the validated config, embedded in every report."""
        return self.model_dump(mode="json")


def parse_config(text: str) -> ExperimentConfig:
    """
    Parse and validate a config document.

    A document starting with '{' is read as JSON, anything else as YAML.

    Raises:
        pydantic.ValidationError: If any section fails validation
        yaml.YAMLError, json.JSONDecodeError: If the document does not parse
    """
    if text.lstrip().startswith("{"):
        data = json.loads(text)
    else:
        data = yaml.safe_load(text)
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ValueError(f"config must be a mapping at the top level, got {type(data).__name__}")
    return ExperimentConfig.model_validate(data)


def load_config(path: Union[str, Path, None]) -> ExperimentConfig:
    """Read a config file; None gives the defaults."""
    if path is None:
        return ExperimentConfig()
    return parse_config(Path(path).read_text(encoding="utf-8"))
