from enum import StrEnum

from pydantic import BaseModel, ConfigDict, model_validator

from structlabel.models.const_models import ConstTree
from structlabel.models.core_models import DepStructure, Sentence, StructureKind


class SourceFormat(StrEnum):
    CONLLU_TREE = "conllu"
    CONLLU_ENHANCED_GRAPH = "conllu-graph"
    PTB_BRACKETS = "ptb"
    SDP_GRAPH = "sdp"

    @property
    def carries_tree(self) -> bool:
        return self is SourceFormat.CONLLU_TREE

    @property
    def carries_graph(self) -> bool:
        return self in (SourceFormat.CONLLU_ENHANCED_GRAPH, SourceFormat.SDP_GRAPH)

    @property
    def carries_constituency(self) -> bool:
        return self is SourceFormat.PTB_BRACKETS


class CorpusEntry(BaseModel):
    """
    One sentence with whichever structure its source provides.
    """

    sentence: Sentence
    dep: DepStructure | None = None
    const: ConstTree | None = None

    model_config = ConfigDict(frozen=True)


class CorpusDocument(BaseModel):
    """
    Parsed treebank file. Every entry carries exactly the structure kind the
    source format promises.
    """

    entries: tuple[CorpusEntry, ...] = ()
    source_format: SourceFormat

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _entries_match_format(self) -> "CorpusDocument":
        fmt = self.source_format
        for entry in self.entries:
            if fmt.carries_constituency != (entry.const is not None):
                raise ValueError(f"sentence {entry.sentence.id!r}: constituency tree presence does not match {fmt}")
            if (fmt.carries_tree or fmt.carries_graph) != (entry.dep is not None):
                raise ValueError(f"sentence {entry.sentence.id!r}: dependency structure presence does not match {fmt}")
            if entry.dep is not None:
                expected = StructureKind.TREE if fmt.carries_tree else StructureKind.GRAPH
                if entry.dep.kind is not expected:
                    raise ValueError(f"sentence {entry.sentence.id!r}: {fmt} carries {expected} structures")
        return self

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def sentences(self) -> list[Sentence]:
        return [e.sentence for e in self.entries]


class LabelRow(BaseModel):
    form: str
    tag: str
    label: str

    model_config = ConfigDict(frozen=True)


class LabelFileSentence(BaseModel):
    id: str
    rows: tuple[LabelRow, ...]

    model_config = ConfigDict(frozen=True)


class LabelFile(BaseModel):
    """
    Label TSV contents: one row (form, tag, rendered label) per token.
    """

    scheme: str
    sentences: tuple[LabelFileSentence, ...] = ()

    model_config = ConfigDict(frozen=True)
