import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

ROW_SUM_TOLERANCE = 1e-9


class NoiseSchedule(BaseModel):
    """
    Diffusion noise schedule. ``beta``/``alpha`` are indexed 1..T through
    ``beta_at``/``alpha_at``; ``alpha_bar`` has T + 1 entries so that
    ``alpha_bar[0] == 1``.
    """

    T: int = Field(ge=1)
    kind: str = "linear"
    beta: np.ndarray
    alpha: np.ndarray
    alpha_bar: np.ndarray

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _shapes(self) -> "NoiseSchedule":
        if self.beta.shape != (self.T,) or self.alpha.shape != (self.T,):
            raise ValueError(f"beta/alpha must have {self.T} entries")
        if self.alpha_bar.shape != (self.T + 1,):
            raise ValueError(f"alpha_bar must have {self.T + 1} entries")
        return self

    def beta_at(self, t: int) -> float:
        return float(self.beta[t - 1])

    def alpha_at(self, t: int) -> float:
        return float(self.alpha[t - 1])


class BitSignal(BaseModel):
    """
    n x m real matrix; a clean signal holds the analog bits -1/+1.
    """

    values: np.ndarray

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _matrix(self) -> "BitSignal":
        if self.values.ndim != 2:
            raise ValueError(f"bit signal must be a matrix, got shape {self.values.shape}")
        return self

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape  # type: ignore[return-value]

    @property
    def m(self) -> int:
        return int(self.values.shape[1])


class AdversarialBatch(BaseModel):
    """
    Inputs of the adversarial losses for one sentence (or a flattened batch).

    pred / gold_relaxed: n x |L| probability rows; gold: n label ids;
    d_real / d_fake: discriminator scores in [0, 1].
    """

    pred: np.ndarray
    gold: np.ndarray
    gold_relaxed: np.ndarray
    d_real: np.ndarray
    d_fake: np.ndarray
    lam: float = Field(1.0, ge=0)

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _consistent(self) -> "AdversarialBatch":
        n = self.gold.shape[0]
        if self.pred.ndim != 2 or self.pred.shape[0] != n:
            raise ValueError(f"pred must be {n} x |L|")
        if self.gold_relaxed.shape != self.pred.shape:
            raise ValueError("gold_relaxed must match pred")
        if self.d_real.shape != (n,) or self.d_fake.shape != (n,):
            raise ValueError(f"discriminator scores must have {n} entries")
        for name, rows in (("pred", self.pred), ("gold_relaxed", self.gold_relaxed)):
            if n and np.max(np.abs(rows.sum(axis=1) - 1.0)) > ROW_SUM_TOLERANCE:
                raise ValueError(f"{name} rows must sum to 1")
        return self


class AdversarialLosses(BaseModel):
    """L_G = L_tag + lambda * L_A and L_D = L_Dp + L_DG."""

    l_g: float
    l_d: float
    l_a: float
    l_tag: float
    l_dp: float
    l_dg: float

    model_config = ConfigDict(frozen=True)


class CheckResult(BaseModel):
    """One kernel invariant: measured residual against its tolerance."""

    name: str
    residual: float
    tolerance: float
    passed: bool

    model_config = ConfigDict(frozen=True)
