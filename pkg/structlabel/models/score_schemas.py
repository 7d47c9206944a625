import json

from pydantic import BaseModel, ConfigDict, model_validator

# Stable report keys, in output order.
REPORT_KEYS = ("accuracy", "uas", "las", "uf", "lf", "um", "lm", "wellformed")


class ScoreReport(BaseModel):
    """
    Metric bundle for one evaluation run.

    Every fraction comes with its raw (numerator, denominator) pair in
    ``counts``; F1 values are stored as (2 * matched, gold + predicted).
    A fraction whose denominator is 0 is reported as None.
    """

    accuracy: float | None = None
    uas: float | None = None
    las: float | None = None
    uf: float | None = None
    lf: float | None = None
    um: float | None = None
    lm: float | None = None
    wellformed: float | None = None
    counts: dict[str, tuple[int, int]] = {}

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _fractions_in_range(self) -> "ScoreReport":
        for key, (num, den) in self.counts.items():
            if num < 0 or num > den:
                raise ValueError(f"{key}: numerator {num} outside [0, {den}]")
        for key in REPORT_KEYS:
            value = getattr(self, key)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValueError(f"{key}={value} outside [0, 1]")
        return self

    @classmethod
    def from_counts(cls, **counts: tuple[int, int]) -> "ScoreReport":
        fractions = {key: (num / den if den else None) for key, (num, den) in counts.items()}
        return cls(**fractions, counts=counts)

    @property
    def wellformed_ratio(self) -> float | None:
        return self.wellformed

    def merge(self, other: "ScoreReport") -> "ScoreReport":
        """Union of two reports over disjoint keys (e.g. scores + well-formedness)."""
        return ScoreReport.from_counts(**{**self.counts, **other.counts})

    def as_flat_dict(self) -> dict[str, float | None]:
        return {key: getattr(self, key) for key in REPORT_KEYS if key in self.counts}

    def to_key_value(self) -> str:
        lines = []
        for key, value in self.as_flat_dict().items():
            num, den = self.counts[key]
            shown = "nan" if value is None else f"{value:.4f}"
            lines.append(f"{key}={shown} ({num}/{den})")
        return "\n".join(lines)

    def to_json(self) -> str:
        document = {
            **self.as_flat_dict(),
            "counts": {key: list(pair) for key, pair in self.counts.items()},
        }
        return json.dumps(document, indent=2, sort_keys=False)
