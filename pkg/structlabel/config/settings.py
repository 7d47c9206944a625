from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings

# Word-level tags and labels removed before bracket scoring (COLLINS.prm).
DEFAULT_DELETE_LABELS = "TOP S1 -NONE- , : `` '' ."
DEFAULT_LABEL_EQUIVALENCES = "ADVP=PRT"


class Settings(BaseSettings):
    """Toolkit settings, read from STRUCTLABEL_* variables or a .env file"""

    # Sentence-level worker threads for the batch commands
    threads: int = Field(1, ge=1)

    # Diffusion kernels. T=100 and s=10 are the experiment settings; the
    # beta bounds are the usual linear-schedule defaults.
    diffusion_steps: int = Field(100, ge=1)
    skip_steps: int = Field(10, ge=1)
    beta_start: float = 1e-4
    beta_end: float = 0.02
    schedule_kind: str = "linear"

    # Adversarial kernels
    gumbel_tau: float = Field(1.0, gt=0)
    adversarial_lambda: float = Field(1.0, ge=0)

    seed: int = 0

    # Plane counts for the graph encodings (bracketing / bit encodings)
    graph_bracket_planes: int = Field(3, ge=1)
    graph_bit_planes: int = Field(4, ge=1)

    # Bracket scoring: whitespace-separated delete list and
    # whitespace-separated CANONICAL=ALIAS[,ALIAS] equivalence classes.
    delete_labels: str = DEFAULT_DELETE_LABELS
    label_equivalences: str = DEFAULT_LABEL_EQUIVALENCES

    log_level: str = "INFO"

    model_config = {"env_file": ".env", "env_prefix": "STRUCTLABEL_", "extra": "ignore"}

    @property
    def delete_label_set(self) -> frozenset[str]:
        return parse_delete_labels(self.delete_labels)

    @property
    def equivalence_map(self) -> dict[str, str]:
        return parse_equivalences(self.label_equivalences)


def parse_delete_labels(raw: str) -> frozenset[str]:
    return frozenset(raw.split())


def parse_equivalences(raw: str) -> dict[str, str]:
    """``"ADVP=PRT NP=NX,NAC"`` -> ``{"PRT": "ADVP", "NX": "NP", "NAC": "NP"}``."""
    mapping: dict[str, str] = {}
    for group in raw.split():
        canonical, _, aliases = group.partition("=")
        for alias in aliases.split(","):
            if alias:
                mapping[alias] = canonical
    return mapping


@lru_cache
def get_settings() -> Settings:
    return Settings()
