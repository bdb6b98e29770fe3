"""Pydantic models for the phase diagram, the elliptic data and every result type."""
import math
from enum import Enum
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator


class Region(str, Enum):
    """Region of the (h, gamma) phase diagram."""
    CASE_1A = "Case1a"
    CASE_1B = "Case1b"
    CASE_2 = "Case2"
    FACTORIZING_LINE = "FactorizingLine"
    CRITICAL_FIELD = "CriticalField"
    CRITICAL_XX = "CriticalXX"

    @property
    def is_bulk(self) -> bool:
        return self in (Region.CASE_1A, Region.CASE_1B, Region.CASE_2)

    @property
    def is_critical(self) -> bool:
        return self in (Region.CRITICAL_FIELD, Region.CRITICAL_XX)


class Method(str, Enum):
    """How an entropy value was obtained."""
    CLOSED_FORM = "ClosedForm"
    SERIES = "Series"
    ASYMPTOTIC_LARGE_ALPHA = "AsymptoticLargeAlpha"
    ASYMPTOTIC_SMALL_ALPHA = "AsymptoticSmallAlpha"
    CRITICAL_ESTIMATE = "CriticalEstimate"
    XX_ESTIMATE = "XXEstimate"
    FACTORIZING = "Factorizing"
    VON_NEUMANN = "VonNeumann"
    LANDEN_LADDER = "LandenLadder"
    ALPHA_INVERSION = "AlphaInversion"


class PhasePoint(BaseModel):
    """Physical coordinates plus the classified region."""
    model_config = ConfigDict(frozen=True)

    h: float = Field(ge=0, description="Transverse magnetic field (dimensionless)")
    gamma: float = Field(ge=0, description="Anisotropy (dimensionless)")
    region: Region

    @property
    def above_critical_field(self) -> bool:
        """True for the h > 2 phase (half-integer spectrum)."""
        return self.region == Region.CASE_2


class EllipticData(BaseModel):
    """Elliptic parameter, complete integrals and modulus for one phase point."""
    model_config = ConfigDict(frozen=True)

    k: float = Field(ge=0, le=1, description="Elliptic parameter (rounds to 1 only next to a critical line)")
    kprime: float = Field(gt=0, le=1, description="Complementary parameter sqrt(1 - k**2)")
    ik: float = Field(gt=0, description="I(k)")
    ikprime: float = Field(gt=0, description="I(k'); infinite on the factorizing line")
    tau0: float = Field(gt=0, description="I(k') / I(k)")
    eps: float = Field(gt=0, description="pi * tau0")
    q: float = Field(ge=0, lt=1, description="Nome exp(-eps)")
    factorizing: bool = Field(default=False, description="k = 0 flag, tau0 infinite")


class ThetaConstants(BaseModel):
    """Zero-argument Jacobi theta constants at tau = i * tau_imag."""
    model_config = ConfigDict(frozen=True)

    t2: float
    t3: float
    t4: float
    log_t2: float
    log_t3: float
    log_t4: float
    tau_imag: float = Field(gt=0)
    branch: str = Field(pattern="^(direct|transformed)$")
    terms_used: int = Field(ge=1)
    tail_bound: float = Field(ge=0)


class ModularValues(BaseModel):
    """lambda(tau) and the automorphic functions derived from it."""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    tau_imag: float = Field(gt=0)
    lam: float = Field(alias="lambda")
    one_minus_lambda: float
    f: float
    g: float
    J: float


class AlphaModulus(BaseModel):
    """Elliptic parameter k_alpha = k(q**alpha) of the replicated modulus."""
    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0)
    q_alpha: float = Field(ge=0, lt=1)
    k_alpha: float = Field(ge=0, le=1)
    kprime_alpha: float = Field(ge=0, le=1)


class EigenvalueSpectrum(BaseModel):
    """Window of the single-particle spectrum lambda_m = tanh((m + (1 - sigma)/2) * pi * tau0)."""
    model_config = ConfigDict(frozen=True)

    tau0: float = Field(gt=0)
    sigma: int = Field(ge=0, le=1)
    window: int = Field(ge=0)
    lambdas: List[float]


class RenyiResult(BaseModel):
    """Entropy value (nats) with its provenance and attained tolerance."""
    model_config = ConfigDict(frozen=True)

    value: float
    method: Method
    alpha: Optional[float] = Field(default=None, description="Renyi order; None stands for alpha -> infinity")
    point: PhasePoint
    tol_attained: float = Field(ge=0)


class SweepConfig(BaseModel):
    """Grid definition for a phase-diagram sweep."""
    model_config = ConfigDict(frozen=True)

    h_range: Tuple[float, float, int]
    gamma_range: Tuple[float, float, int]
    alpha_list: List[float] = Field(min_length=1)
    out_path: str
    tol: float = Field(default=1e-13, gt=0)
    series: bool = False
    max_workers: int = Field(default=8, ge=1)

    @field_validator("h_range", "gamma_range")
    @classmethod
    def _check_range(cls, value: Tuple[float, float, int]) -> Tuple[float, float, int]:
        lo, hi, steps = value
        if steps < 1:
            raise ValueError(f"steps must be >= 1, got {steps}")
        if lo < 0 or hi < lo:
            raise ValueError(f"range must satisfy 0 <= min <= max, got {lo}:{hi}")
        return value

    @field_validator("alpha_list")
    @classmethod
    def _check_alphas(cls, value: List[float]) -> List[float]:
        if any(a <= 0 for a in value):
            raise ValueError("alpha_list entries must be > 0")
        return value


class CheckFamily(BaseModel):
    """Outcome of one family of identity or oracle checks."""
    name: str
    checks: int = Field(ge=0)
    max_residual: float
    tolerance: float = Field(gt=0)
    passed: bool
    detail: Optional[str] = None

    @field_serializer("max_residual", when_used="json")
    def _serialize_residual(self, value: float) -> Union[float, str]:
        # JSON has no inf or nan
        return value if math.isfinite(value) else str(value)


class VerifyReport(BaseModel):
    """Result of running one verification suite."""
    suite: str
    checks_run: int = 0
    families: List[CheckFamily] = Field(default_factory=list)
    passed: bool = True

    @model_validator(mode="after")
    def _tally(self) -> "VerifyReport":
        self.checks_run = sum(family.checks for family in self.families)
        self.passed = all(family.passed for family in self.families)
        return self
