from enum import StrEnum
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, model_validator

from structlabel.models.corpus_schemas import SourceFormat


class Command(StrEnum):
    ENCODE = "encode"
    DECODE = "decode"
    ROUNDTRIP = "roundtrip"
    EVAL = "eval"
    KERNELS_SELFCHECK = "kernels-selfcheck"


class SchemeFamily(StrEnum):
    CONSTITUENCY = "const"
    DEPENDENCY = "dep"
    GRAPH = "graph"


class RunConfig(BaseModel):
    """
    Resolved options of one CLI invocation (flags over settings over defaults).
    """

    command: Command
    input: Path | None = None
    output: Path | None = None
    scheme: str | None = None
    format: SourceFormat | None = None
    k: int | None = Field(None, ge=1)
    seed: int = 0
    T: int = Field(100, ge=1)
    s: int = Field(10, ge=1)
    beta_start: float = 1e-4
    beta_end: float = 0.02
    schedule_kind: str = "linear"
    delete_labels: frozenset[str] = frozenset()

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _scheme_rules(self) -> "RunConfig":
        # imported here: the registry depends on the services layer
        from structlabel.services.codec_registry import scheme_family

        if self.scheme is None:
            if self.command in (Command.ENCODE, Command.DECODE, Command.ROUNDTRIP):
                raise ValueError(f"{self.command} needs --scheme")
            return self
        family = scheme_family(self.scheme)
        if self.k is not None and family is not SchemeFamily.GRAPH:
            raise ValueError(f"--k only applies to graph schemes, not {self.scheme}")
        return self
