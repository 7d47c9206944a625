"""Scheme name -> codec lookup.

Graph schemes take a plane count as a ``:k`` suffix (``gr-brk:3``); without
it the configured default applies. Every decoder returns
``(structure, repairs)``.
"""

from collections.abc import Callable, Iterable, Sequence
from typing import Any, NamedTuple

from structlabel.config.logger_config import logger
from structlabel.config.settings import get_settings
from structlabel.models.const_models import ConstTree
from structlabel.models.core_models import DepStructure, Sentence
from structlabel.models.label_models import (
    AbsoluteConstLabel,
    AbsoluteDepLabel,
    BitsLabel,
    BracketLabel,
    GraphLabel,
    HexaLabel,
    Label,
    LabelSequence,
    RelativeConstLabel,
    TetraLabel,
)
from structlabel.models.run_schemas import SchemeFamily
from structlabel.services import const_codec_service as const
from structlabel.services import dep_codec_service as dep
from structlabel.services import graph_codec_service as graph
from structlabel.utils.exceptions import UnknownSchemeError

Structure = ConstTree | DepStructure


class Codec(NamedTuple):
    family: SchemeFamily
    label_type: type[Label]
    encode: Callable[..., LabelSequence]
    decode: Callable[..., tuple[Any, int]]
    takes_k: bool = False


class ResolvedScheme(NamedTuple):
    name: str
    base: str
    k: int | None
    codec: Codec


class LabelSpace(NamedTuple):
    """Distinct full labels and distinct structural components seen in a corpus."""

    labels: int
    structural: int


class CodecRegistry:
    def __init__(self) -> None:
        self._codecs: dict[str, Codec] = {}

    def register(self, base: str, codec: Codec) -> None:
        self._codecs[base] = codec

    @property
    def names(self) -> list[str]:
        return sorted(self._codecs)

    def resolve(self, scheme: str) -> ResolvedScheme:
        base, sep, suffix = scheme.partition(":")
        codec = self._codecs.get(base)
        if codec is None:
            raise UnknownSchemeError(f"unknown scheme {scheme!r}; known: {', '.join(self.names)}")
        if not codec.takes_k:
            if sep:
                raise UnknownSchemeError(f"scheme {base!r} takes no plane count")
            return ResolvedScheme(base, base, None, codec)
        if sep:
            if not suffix.isdigit() or int(suffix) < 1:
                raise UnknownSchemeError(f"plane count in {scheme!r} must be a positive integer")
            k = int(suffix)
        else:
            settings = get_settings()
            k = settings.graph_bracket_planes if base == graph.BRACKET_SCHEME else settings.graph_bit_planes
        return ResolvedScheme(graph.scheme_name(base, k), base, k, codec)

    def family(self, scheme: str) -> SchemeFamily:
        return self.resolve(scheme).codec.family

    def encode(self, scheme: str, structure: Structure) -> LabelSequence:
        resolved = self.resolve(scheme)
        if resolved.k is not None:
            return resolved.codec.encode(structure, resolved.k)
        return resolved.codec.encode(structure)

    def decode(self, scheme: str, labels: LabelSequence, sentence: Sentence) -> tuple[Structure, int]:
        resolved = self.resolve(scheme)
        if resolved.codec.family is SchemeFamily.CONSTITUENCY and labels.tags is not None:
            sentence = sentence.with_xpos(labels.tags)
        if resolved.k is not None:
            return resolved.codec.decode(labels, sentence, resolved.k)
        return resolved.codec.decode(labels, sentence)

    def parse_label(self, scheme: str, text: str) -> Label:
        return self.resolve(scheme).codec.label_type.parse(text)

    def parse_labels(self, scheme: str, texts: Iterable[str], tags: Sequence[str] | None = None) -> LabelSequence:
        resolved = self.resolve(scheme)
        labels = tuple(resolved.codec.label_type.parse(text) for text in texts)
        return LabelSequence(scheme=resolved.name, labels=labels, tags=tuple(tags) if tags is not None else None)


def label_space(sequences: Iterable[LabelSequence]) -> LabelSpace:
    rendered: set[str] = set()
    structural: set[str] = set()
    for sequence in sequences:
        for label in sequence.labels:
            rendered.add(label.render())
            structural.add(label.structural)
    logger.debug(f"label space: {len(rendered)} labels, {len(structural)} structural components")
    return LabelSpace(labels=len(rendered), structural=len(structural))


registry = CodecRegistry()
registry.register(const.ABSOLUTE_SCHEME, Codec(SchemeFamily.CONSTITUENCY, AbsoluteConstLabel, const.encode_absolute, const.decode_absolute))
registry.register(const.RELATIVE_SCHEME, Codec(SchemeFamily.CONSTITUENCY, RelativeConstLabel, const.encode_relative, const.decode_relative))
registry.register(const.TETRA_SCHEME, Codec(SchemeFamily.CONSTITUENCY, TetraLabel, const.encode_tetra, const.decode_tetra))
registry.register(dep.ABSOLUTE_SCHEME, Codec(SchemeFamily.DEPENDENCY, AbsoluteDepLabel, dep.encode_absolute_dep, dep.decode_absolute_dep))
registry.register(dep.BRACKET_SCHEME, Codec(SchemeFamily.DEPENDENCY, BracketLabel, dep.encode_bracketing_dep, dep.decode_bracketing_dep))
registry.register(dep.FOUR_BIT_SCHEME, Codec(SchemeFamily.DEPENDENCY, BitsLabel, dep.encode_4bit, dep.decode_4bit))
registry.register(dep.SEVEN_BIT_SCHEME, Codec(SchemeFamily.DEPENDENCY, BitsLabel, dep.encode_7bit, dep.decode_7bit))
registry.register(dep.HEXA_SCHEME, Codec(SchemeFamily.DEPENDENCY, HexaLabel, dep.encode_hexa, dep.decode_hexa))
registry.register(graph.RELATIVE_SCHEME, Codec(SchemeFamily.GRAPH, GraphLabel, graph.encode_relative_graph, graph.decode_relative_graph))
registry.register(graph.BRACKET_SCHEME, Codec(SchemeFamily.GRAPH, GraphLabel, graph.encode_bracketing_graph, graph.decode_bracketing_graph, takes_k=True))
registry.register(graph.FOUR_K_SCHEME, Codec(SchemeFamily.GRAPH, GraphLabel, graph.encode_4k, graph.decode_4k, takes_k=True))
registry.register(graph.SIX_K_SCHEME, Codec(SchemeFamily.GRAPH, GraphLabel, graph.encode_6k, graph.decode_6k, takes_k=True))


def scheme_family(name: str) -> SchemeFamily:
    """Family of a scheme name; raises UnknownSchemeError for anything unregistered."""
    return registry.family(name)
