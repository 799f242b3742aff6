"""
Configuration data models for skewmix.

Pydantic models for every section of the YAML configuration file, plus the
flat RunConfig that a single clustering run is driven by.
"""

from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..custom_types import DofPolicy, DofUpdate, Family, InitStrategy, VariantTag
from ..mixture.em import EMOptions
from ..numerics.mvcdf import MIN_CDF_DRAWS

_INIT_ALIASES = {"random": InitStrategy.RANDOM_STARTS.value}


def _init_alias(value: Any) -> Any:
    if isinstance(value, str):
        return _INIT_ALIASES.get(value.lower(), value.lower())
    return value


class FitConfig(BaseModel):
    """
    Settings for the EM fit.
    """

    family: Family = Field(default=Family.RMST, description="Component family")
    g: int = Field(default=3, ge=1, description="Number of components")
    max_iter: int = Field(default=500, ge=0, description="Maximum EM iterations")
    tol: float = Field(
        default=1e-8, gt=0.0, description="Relative log-likelihood tolerance"
    )
    init: InitStrategy = Field(
        default=InitStrategy.KMEANS,
        description="kmeans or random_starts (alias random)",
    )
    n_starts: int = Field(default=5, ge=1, description="Starts for random_starts")
    dof_update: DofUpdate = Field(
        default=DofUpdate.ECME, description="nu update rule (osl, ecme, fixed)"
    )
    dof_policy: DofPolicy = Field(
        default=DofPolicy.PER_COMPONENT,
        description="per_component, shared or fixed nu",
    )
    mc_draws: int = Field(
        default=MIN_CDF_DRAWS,
        ge=MIN_CDF_DRAWS,
        description="Monte-Carlo draws for unrestricted families",
    )
    seed: int = Field(default=0, ge=0, description="Random seed")
    fit_skewness: bool = Field(default=True, description="Estimate the skewness")
    max_workers: int | None = Field(
        default=1, ge=1, description="E-step threads (null picks from CPU count)"
    )
    chunk_size: int = Field(default=2048, ge=1, description="Rows per E-step chunk")

    @field_validator("init", mode="before")
    @classmethod
    def validate_init(cls, v: Any) -> Any:
        """Accept 'random' as shorthand for random_starts."""
        return _init_alias(v)

    @field_validator("family", "dof_update", "dof_policy", mode="before")
    @classmethod
    def lower_case(cls, v: Any) -> Any:
        return v.lower() if isinstance(v, str) else v


class DataConfig(BaseModel):
    """
    Column roles in the input CSV.
    """

    label_column: str | None = Field(
        default=None, description="Column of ground-truth labels 0..g-1"
    )
    exclude_column: str | None = Field(
        default=None, description="0/1 column of rows left out of scoring"
    )


class OutputConfig(BaseModel):
    """
    Artifact settings.
    """

    output_dir: str = Field(default="output", description="Artifact directory")
    report_variant: VariantTag | None = Field(
        default=None,
        description="Also report restricted components in this parameterization",
    )
    indent: int = Field(default=2, ge=0, le=8, description="JSON indentation")

    @field_validator("report_variant", mode="before")
    @classmethod
    def upper_case(cls, v: Any) -> Any:
        return v.upper() if isinstance(v, str) else v


class LoggingConfig(BaseModel):
    """
    Configuration for logging settings.
    """

    level: str = Field(
        default="INFO", description="Logging level (DEBUG, INFO, WARNING, ERROR)"
    )
    format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Log message format",
    )
    file_path: str | None = Field(
        default=None, description="Path to log file (None for console only)"
    )
    max_file_size: int = Field(
        default=10485760, ge=1, description="Maximum log file size in bytes"
    )
    backup_count: int = Field(default=3, ge=0, description="Rotated log files kept")

    @field_validator("level")
    @classmethod
    def validate_level(cls, v: str) -> str:
        """Validate logging level."""
        allowed_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in allowed_levels:
            raise ValueError(f"Logging level must be one of: {allowed_levels}")
        return v.upper()


class Config(BaseModel):
    """
    Root configuration model combining all sections.
    """

    fit: FitConfig = Field(default_factory=FitConfig, description="EM settings")
    data: DataConfig = Field(default_factory=DataConfig, description="Input columns")
    output: OutputConfig = Field(
        default_factory=OutputConfig, description="Artifact settings"
    )
    logging: LoggingConfig = Field(
        default_factory=LoggingConfig, description="Logging configuration"
    )
    version: str = Field(default="1.0", description="Configuration version")

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    def to_dict(self) -> dict[str, Any]:
        """Convert configuration to a plain dictionary (enums as values)."""
        return self.model_dump(mode="json")

    @classmethod
    def from_dict(cls, config_dict: dict[str, Any]) -> "Config":
        return cls(**config_dict)


class RunConfig(BaseModel):
    """
    Everything one clustering run needs, flattened.

    Built from a Config plus command-line flags; flags win over file values.
    """

    data_path: Path
    family: Family = Family.RMST
    g: int = Field(default=3, ge=1)
    max_iter: int = Field(default=500, ge=0)
    tol: float = Field(default=1e-8, gt=0.0)
    seed: int = Field(default=0, ge=0)
    init: InitStrategy = InitStrategy.KMEANS
    n_starts: int = Field(default=5, ge=1)
    dof_update: DofUpdate = DofUpdate.ECME
    dof_policy: DofPolicy = DofPolicy.PER_COMPONENT
    mc_draws: int = Field(default=MIN_CDF_DRAWS, ge=MIN_CDF_DRAWS)
    fit_skewness: bool = True
    max_workers: int | None = Field(default=1, ge=1)
    chunk_size: int = Field(default=2048, ge=1)
    label_column: str | None = None
    exclude_column: str | None = None
    output_dir: Path = Path("output")
    report_variant: VariantTag | None = None
    indent: int = Field(default=2, ge=0, le=8)

    model_config = ConfigDict(extra="forbid", frozen=True)

    @field_validator("init", mode="before")
    @classmethod
    def validate_init(cls, v: Any) -> Any:
        return _init_alias(v)

    @field_validator("family", "dof_update", "dof_policy", mode="before")
    @classmethod
    def lower_case(cls, v: Any) -> Any:
        return v.lower() if isinstance(v, str) else v

    @field_validator("report_variant", mode="before")
    @classmethod
    def upper_case(cls, v: Any) -> Any:
        return v.upper() if isinstance(v, str) else v

    @classmethod
    def from_config(
        cls, config: Config, data_path: str | Path, **overrides: Any
    ) -> "RunConfig":
        """
        Flatten ``config`` and apply overrides; None-valued overrides are ignored.
        """
        values: dict[str, Any] = {
            **config.fit.model_dump(),
            **config.data.model_dump(),
            **config.output.model_dump(),
            "data_path": data_path,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def to_em_options(self) -> EMOptions:
        return EMOptions(
            max_iter=self.max_iter,
            tol=self.tol,
            init=self.init,
            n_starts=self.n_starts,
            dof_update=self.dof_update,
            dof_policy=self.dof_policy,
            seed=self.seed,
            mc_draws=self.mc_draws,
            fit_skewness=self.fit_skewness,
            max_workers=self.max_workers,
            chunk_size=self.chunk_size,
        )
