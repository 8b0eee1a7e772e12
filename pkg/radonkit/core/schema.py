import json
from enum import Enum
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from radonkit.core.config import (
    DEFAULT_ANGULAR_NODES,
    DEFAULT_BINS,
    DEFAULT_CHORDS,
    DEFAULT_DIRECTIONS,
    DEFAULT_OFFSETS,
    DEFAULT_QUAD_NODES,
    MIN_OFFSETS,
    RADON_THREADS,
    TOL_CENTERED,
    TOL_G_COLLAPSE,
    TOL_K_SPREAD,
    TOL_LINEARITY,
    TOL_WIDTH,
)


class SpecError(ValueError):
    """Invalid body, function or run specification."""
    pass


# === Input Specs ===

class BodySpec(BaseModel):
    dimension: int
    kind: Literal["ball", "ellipsoid", "reuleaux", "support-sampled"]
    center: Optional[List[float]] = None
    radius: Optional[float] = None
    semi_axes: Optional[List[float]] = None
    width: Optional[float] = None
    orientation: float = 0.0
    directions: Optional[List[List[float]]] = None
    h: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check_kind_fields(self) -> "BodySpec":
        if self.dimension not in (2, 3):
            raise ValueError(f"dimension must be 2 or 3, got {self.dimension}")
        required = {
            "ball": ("center", "radius"),
            "ellipsoid": ("center", "semi_axes"),
            "reuleaux": ("center", "width"),
            "support-sampled": ("directions", "h"),
        }[self.kind]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise ValueError(f"body kind '{self.kind}' requires {missing}")
        if self.kind == "reuleaux" and self.dimension != 2:
            raise ValueError("reuleaux bodies exist only in dimension 2")
        for name in ("center", "semi_axes"):
            value = getattr(self, name)
            if value is not None and len(value) != self.dimension:
                raise ValueError(f"'{name}' must have {self.dimension} components")
        return self


class FunctionSpec(BaseModel):
    kind: Literal["gamma", "constant-xray", "indicator", "radial-profile", "synthetic"]
    gamma: Optional[float] = None
    radii: Optional[List[float]] = None
    values: Optional[List[float]] = None
    level: float = 1.0  # G value of a synthetic constant profile

    @model_validator(mode="after")
    def _check_kind_fields(self) -> "FunctionSpec":
        if self.kind == "gamma":
            if self.gamma is None:
                raise ValueError("gamma functions require 'gamma'")
            if self.gamma <= -1:
                raise ValueError(f"gamma must exceed -1 for integrability, got {self.gamma}")
        if self.kind == "radial-profile":
            if not self.radii or not self.values or len(self.radii) != len(self.values):
                raise ValueError("radial-profile requires 'radii' and 'values' of equal length")
        return self


def parse_function_arg(text: str) -> FunctionSpec:
    """
    Parse a --function argument: a short name ('constant-xray', 'indicator',
    'gamma:1.5', 'synthetic', 'synthetic:2'), inline JSON, or a JSON file path.
    """
    text = text.strip()
    if text.startswith("{") or text.endswith(".json"):
        return FunctionSpec.model_validate(_load_json_arg(text))
    name, _, arg = text.partition(":")
    try:
        if name == "gamma":
            return FunctionSpec(kind="gamma", gamma=float(arg))
        if name == "synthetic":
            return FunctionSpec(kind="synthetic", level=float(arg) if arg else 1.0)
        if name in ("constant-xray", "indicator") and not arg:
            return FunctionSpec(kind=name)
    except ValueError as e:
        raise SpecError(f"Invalid function spec '{text}': {e}")
    raise SpecError(f"Unknown function spec '{text}'")


def _load_json_arg(text: str) -> dict:
    """Inline JSON or a path to a JSON file."""
    if text.lstrip().startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise SpecError(f"Inline JSON is malformed: {e}")
    path = Path(text)
    if not path.is_file():
        raise SpecError(f"Spec file not found: {text}")
    try:
        with open(path, "r") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise SpecError(f"Spec file {text} is not valid JSON: {e}")


def load_body_arg(text: str) -> BodySpec:
    return BodySpec.model_validate(_load_json_arg(text))


class QuadratureSettings(BaseModel):
    nodes: int = Field(DEFAULT_QUAD_NODES, ge=1)
    angular_nodes: int = Field(DEFAULT_ANGULAR_NODES, ge=3)


class SinogramMetadata(BaseModel):
    """JSON sidecar of a sinogram CSV."""
    transform: Literal["radon", "xray"] = "radon"
    dimension: int
    offset_rule: Literal["chebyshev", "arbitrary"] = "chebyshev"
    body: Optional[BodySpec] = None
    function: Optional[FunctionSpec] = None
    quadrature: QuadratureSettings = Field(default_factory=QuadratureSettings)
    windows: Optional[List[Tuple[float, float]]] = None
    offsets_per_direction: int
    seed: Optional[int] = None


# === Reports ===

class CheckName(str, Enum):
    """Rigidity checks, in the order they run."""
    K_CONSTANCY = "K-constancy"
    G_LINEARITY = "g-linearity"
    CENTERED_SLAB = "centered-slab"
    CONSTANT_WIDTH = "constant-width"
    G_COLLAPSE = "G-collapse"


class CheckResult(BaseModel):
    name: CheckName
    passed: bool
    value: float
    tolerance: float


class MomentReport(BaseModel):
    directions: List[List[float]]
    K: List[float]
    g: List[float]
    m: List[float]
    center: Optional[List[float]] = None
    K_mean: float
    residual: float
    K_spread: float


class GProfile(BaseModel):
    bin_centers: List[float]
    G: List[float]
    scatter: List[float]
    counts: List[int]
    empty_bins: List[int] = []


class Estimates(BaseModel):
    center: List[float]
    radius: float


class RigidityReport(BaseModel):
    checks: List[CheckResult]
    estimates: Estimates
    g_profile: GProfile
    verdict: Literal["ball", "obstruction"]
    obstruction: Optional[CheckName] = None
    failing: List[CheckName] = []

    def check(self, name: CheckName) -> CheckResult:
        for result in self.checks:
            if result.name == name:
                return result
        raise KeyError(name)


class RigidityTolerances(BaseModel):
    k_spread: float = Field(TOL_K_SPREAD, gt=0)
    linearity: float = Field(TOL_LINEARITY, gt=0)
    centered: float = Field(TOL_CENTERED, gt=0)
    width: float = Field(TOL_WIDTH, gt=0)
    g_collapse: float = Field(TOL_G_COLLAPSE, gt=0)


# === CLI ===

class RunConfig(BaseModel):
    subcommand: Literal["sinogram", "verify-oracle", "rigidity", "moments", "fourier-slice"]
    body: Optional[BodySpec] = None
    function: Optional[FunctionSpec] = None
    sinogram_path: Optional[Path] = None
    dirs: int = Field(DEFAULT_DIRECTIONS, ge=1)
    offsets: int = Field(DEFAULT_OFFSETS, ge=MIN_OFFSETS)
    quadrature: QuadratureSettings = Field(default_factory=QuadratureSettings)
    bins: int = Field(DEFAULT_BINS, ge=1)
    tolerances: RigidityTolerances = Field(default_factory=RigidityTolerances)
    oracle_tol: Optional[float] = Field(None, ge=0)  # None: per-mode default
    out: Optional[Path] = None
    seed: Optional[int] = None
    threads: int = Field(RADON_THREADS, ge=1)
    mode: Literal["radon", "fourier-slice", "kernel", "moments", "xray"] = "radon"
    transform: Literal["radon", "xray"] = "radon"
    dimension: int = 2
    radius: float = Field(1.0, gt=0)
    gammas: List[float] = [-0.5, 0.0, 1.0, 2.5]
    distances: List[float] = [0.0, 0.25, 0.5, 0.75, 0.9]
    xi: List[float] = [0.5, 1.0, 2.0, 5.0, 10.0]
    kernel_points: List[float] = [0.3, 0.6]
    kernel_time: float = 1.0
    chords: int = Field(DEFAULT_CHORDS, ge=1)

    @field_validator("sinogram_path")
    @classmethod
    def _sinogram_exists(cls, value: Optional[Path]) -> Optional[Path]:
        if value is not None and not value.is_file():
            raise ValueError(f"sinogram file not found: {value}")
        return value

    @field_validator("threads")
    @classmethod
    def _cap_threads(cls, value: int) -> int:
        return min(value, RADON_THREADS)

    @field_validator("out")
    @classmethod
    def _out_parent_exists(cls, value: Optional[Path]) -> Optional[Path]:
        if value is not None and not value.resolve().parent.is_dir():
            raise ValueError(f"output directory does not exist: {value.parent}")
        return value

    @model_validator(mode="after")
    def _check_inputs(self) -> "RunConfig":
        if self.subcommand in ("sinogram",) and (self.body is None or self.function is None):
            raise ValueError("sinogram needs --body and --function")
        if self.subcommand == "sinogram" and self.out is None:
            raise ValueError("sinogram needs --out")
        if self.subcommand in ("rigidity", "moments") and self.sinogram_path is None:
            if self.body is None or self.function is None:
                raise ValueError(f"{self.subcommand} needs --sinogram or both --body and --function")
        if self.dimension not in (2, 3):
            raise ValueError(f"dimension must be 2 or 3, got {self.dimension}")
        dim = self.body.dimension if self.body is not None else self.dimension
        if self.body is not None and self.dirs < 2 * dim:
            raise ValueError(f"need at least {2 * dim} directions in dimension {dim}, got {self.dirs}")
        return self


RIGIDITY_EXIT_CODES: Dict[str, int] = {"ball": 0, "obstruction": 1}
