"""Dependency-graph linearizations: relative heads, k-planar bracketing, 4k-bit and 6k-bit.

Every label is ``x@rho``: a structural component plus the relations of the
token's incoming arcs, ordered by (head position, plane). The bit schemes
reuse the tree bit-stack decoder plane by plane.
"""

import re
from collections.abc import Iterable, Sequence

from structlabel.config.logger_config import logger
from structlabel.models.core_models import Arc, DepStructure, PlaneAssignment, PlaneConstraint, Sentence, StructureKind
from structlabel.models.label_models import GraphLabel, LabelSequence
from structlabel.services.dep_codec_service import (
    BitStep,
    Incoming,
    decode_bit_stacks,
    dependent_sides,
    match_brackets,
    outermost_flags,
    render_brackets,
)
from structlabel.services.structure_service import assign_planes
from structlabel.utils.exceptions import LabelFormatError, LabelLengthError

RELATIVE_SCHEME = "gr-rel"
BRACKET_SCHEME = "gr-brk"
FOUR_K_SCHEME = "gr-4k"
SIX_K_SCHEME = "gr-6k"

NULL_REL = "<null>"
EMPTY = "-"

_OFFSETS = re.compile(r"^\((-?\d+(?:,-?\d+)*)\)$")
_BITS = re.compile(r"^[01]*$")


def scheme_name(base: str, k: int) -> str:
    return f"{base}:{k}"


def _graph_label(x: str, rels: Sequence[str]) -> GraphLabel:
    return GraphLabel(x=x or EMPTY, rels=tuple(rels))


def _check_length(labels: LabelSequence, sentence: Sentence) -> None:
    if len(labels) != sentence.n:
        raise LabelLengthError(sentence.id, sentence.n, len(labels))


def _graph_labels(labels: LabelSequence) -> list[GraphLabel]:
    out = []
    for label in labels.labels:
        if not isinstance(label, GraphLabel):
            raise LabelFormatError(f"{labels.scheme}: expected graph labels, got {type(label).__name__}")
        out.append(label)
    return out


def _attach_rels(
    sentence: Sentence, found: list[list[tuple[int, int]]], labels: list[GraphLabel], ordered: bool = False
) -> tuple[DepStructure, int]:
    """Pair decoded (head, plane) entries with rho; drop null arcs and negative (discarded) heads."""
    arcs: set[Arc] = set()
    repairs = 0
    for d, (heads, label) in enumerate(zip(found, labels), start=1):
        if not ordered:
            heads = sorted(heads)
        if len(heads) != len(label.rels):
            repairs += 1
        rels = list(label.rels) + [""] * (len(heads) - len(label.rels))
        for (h, _), rel in zip(heads, rels):
            if h >= 0 and rel != NULL_REL:
                arcs.add(Arc(head=h, dep=d, rel=rel))
    return DepStructure(sentence=sentence, arcs=frozenset(arcs), kind=StructureKind.GRAPH), repairs


def _report_dropped(graph: DepStructure, assignment: PlaneAssignment) -> None:
    if assignment.dropped:
        logger.warning(
            f"sentence {graph.sentence.id}: {len(assignment.dropped)} arcs fit none of {assignment.k} planes, dropped"
        )


def _incoming_by_plane(n: int, placed: Iterable[tuple[Arc, int]]) -> list[list[tuple[Arc, int]]]:
    incoming: list[list[tuple[Arc, int]]] = [[] for _ in range(n + 1)]
    for arc, p in placed:
        incoming[arc.dep].append((arc, p))
    for entries in incoming:
        entries.sort(key=lambda e: (e[0].head, e[1], e[0].rel))
    return incoming


# ---------------------------------------------------------------------------
# Relative
# ---------------------------------------------------------------------------


def render_offsets(offsets: Sequence[int]) -> str:
    if not offsets:
        return EMPTY
    return "(" + ",".join(str(o) for o in offsets) + ")"


def parse_offsets(x: str) -> list[int]:
    if x == EMPTY:
        return []
    match = _OFFSETS.match(x)
    if not match:
        raise LabelFormatError(f"not a relative head set: {x!r}")
    return [int(o) for o in match.group(1).split(",")]


def encode_relative_graph(graph: DepStructure) -> LabelSequence:
    labels = []
    for d in range(1, graph.n + 1):
        incoming = graph.incoming(d)
        labels.append(_graph_label(render_offsets([a.head - d for a in incoming]), [a.rel for a in incoming]))
    return LabelSequence(scheme=RELATIVE_SCHEME, labels=tuple(labels))


def decode_relative_graph(labels: LabelSequence, sentence: Sentence) -> tuple[DepStructure, int]:
    _check_length(labels, sentence)
    graph_labels = _graph_labels(labels)
    found: list[list[tuple[int, int]]] = []
    discarded = 0
    for d, label in enumerate(graph_labels, start=1):
        heads = []
        for offset in parse_offsets(label.x):
            h = d + offset
            if offset == 0 or not 0 <= h <= sentence.n:
                h = -1
                discarded += 1
            heads.append((h, 0))
        found.append(heads)
    # out-of-range heads keep their rho slot so relations stay aligned
    graph, repairs = _attach_rels(sentence, found, graph_labels, ordered=True)
    return graph, repairs + discarded


# ---------------------------------------------------------------------------
# k-planar bracketing
# ---------------------------------------------------------------------------


def encode_bracketing_graph(graph: DepStructure, k: int) -> LabelSequence:
    assignment = assign_planes(graph, k, PlaneConstraint.NON_CROSSING)
    _report_dropped(graph, assignment)
    brackets = render_brackets(graph.n, assignment.plane_of, k)
    incoming = _incoming_by_plane(graph.n, assignment.plane_of.items())
    labels = tuple(_graph_label(brackets[d - 1], [a.rel for a, _ in incoming[d]]) for d in range(1, graph.n + 1))
    return LabelSequence(scheme=scheme_name(BRACKET_SCHEME, k), labels=labels, dropped_arcs=len(assignment.dropped))


def decode_bracketing_graph(labels: LabelSequence, sentence: Sentence, k: int) -> tuple[DepStructure, int]:
    _check_length(labels, sentence)
    graph_labels = _graph_labels(labels)
    symbols = ["" if label.x == EMPTY else label.x for label in graph_labels]
    found, unmatched = match_brackets(symbols, k, root_in_any_plane=True)
    graph, repairs = _attach_rels(sentence, found, graph_labels)
    return graph, repairs + unmatched


# ---------------------------------------------------------------------------
# 4k-bit and 6k-bit
# ---------------------------------------------------------------------------


def _bits(*flags: bool) -> str:
    return "".join("1" if f else "0" for f in flags)


def _split_groups(labels: list[GraphLabel], k: int, width: int) -> list[list[str]]:
    groups = []
    for label in labels:
        if len(label.x) != k * width or not _BITS.match(label.x):
            raise LabelFormatError(f"expected {k * width} bits, got {label.x!r}")
        groups.append([label.x[p * width : (p + 1) * width] for p in range(k)])
    return groups


def with_artificial_arcs(n: int, assignment: PlaneAssignment) -> list[tuple[Arc, int]]:
    """Complete every plane: a token without a head there gets one from its predecessor."""
    placed = list(assignment.plane_of.items())
    for p in range(1, assignment.k + 1):
        headed = {a.dep for a, q in assignment.plane_of.items() if q == p}
        for d in range(1, n + 1):
            if d not in headed:
                placed.append((Arc(head=d - 1, dep=d, rel=NULL_REL), p))
    return placed


def encode_4k(graph: DepStructure, k: int) -> LabelSequence:
    assignment = assign_planes(graph, k, PlaneConstraint.FOUR_K_BIT)
    _report_dropped(graph, assignment)
    placed = with_artificial_arcs(graph.n, assignment)
    groups = [[""] * k for _ in range(graph.n + 1)]
    for p in range(1, k + 1):
        arcs = [a for a, q in placed if q == p]
        outer = outermost_flags(arcs)
        left, right = dependent_sides(graph.n, arcs)
        for arc in arcs:
            groups[arc.dep][p - 1] = _bits(arc.rightward, outer[arc], left[arc.dep], right[arc.dep])
    incoming = _incoming_by_plane(graph.n, placed)
    labels = tuple(
        _graph_label("".join(groups[d]), [a.rel for a, _ in incoming[d]]) for d in range(1, graph.n + 1)
    )
    return LabelSequence(scheme=scheme_name(FOUR_K_SCHEME, k), labels=labels, dropped_arcs=len(assignment.dropped))


def decode_4k(labels: LabelSequence, sentence: Sentence, k: int) -> tuple[DepStructure, int]:
    _check_length(labels, sentence)
    graph_labels = _graph_labels(labels)
    steps = []
    for groups in _split_groups(graph_labels, k, 4):
        steps.append(
            BitStep(
                left_deps=tuple(g[2] == "1" for g in groups),
                right_deps=tuple(g[3] == "1" for g in groups),
                incoming=tuple(Incoming(p, g[0] == "1", g[1] == "1") for p, g in enumerate(groups)),
            )
        )
    found, stack_repairs = decode_bit_stacks(steps, k, root_planes=range(k))
    graph, repairs = _attach_rels(sentence, found, graph_labels)
    return graph, repairs + stack_repairs


def encode_6k(graph: DepStructure, k: int) -> LabelSequence:
    assignment = assign_planes(graph, k, PlaneConstraint.SIX_K_BIT)
    _report_dropped(graph, assignment)
    groups = []
    for p in range(1, k + 1):
        arcs = assignment.plane(p)
        outer = outermost_flags(arcs)
        left, right = dependent_sides(graph.n, arcs)
        from_left: dict[int, Arc] = {a.dep: a for a in arcs if a.rightward}
        from_right: dict[int, Arc] = {a.dep: a for a in arcs if not a.rightward}
        groups.append(
            [
                _bits(
                    d in from_left,
                    d in from_right,
                    d in from_left and outer[from_left[d]],
                    d in from_right and outer[from_right[d]],
                    left[d],
                    right[d],
                )
                for d in range(1, graph.n + 1)
            ]
        )
    incoming = _incoming_by_plane(graph.n, assignment.plane_of.items())
    labels = tuple(
        _graph_label("".join(groups[p][d - 1] for p in range(k)), [a.rel for a, _ in incoming[d]])
        for d in range(1, graph.n + 1)
    )
    return LabelSequence(scheme=scheme_name(SIX_K_SCHEME, k), labels=labels, dropped_arcs=len(assignment.dropped))


def decode_6k(labels: LabelSequence, sentence: Sentence, k: int) -> tuple[DepStructure, int]:
    _check_length(labels, sentence)
    graph_labels = _graph_labels(labels)
    steps = []
    for groups in _split_groups(graph_labels, k, 6):
        incoming = []
        for p, g in enumerate(groups):
            if g[0] == "1":
                incoming.append(Incoming(p, True, g[2] == "1"))
            if g[1] == "1":
                incoming.append(Incoming(p, False, g[3] == "1"))
        steps.append(
            BitStep(
                left_deps=tuple(g[4] == "1" for g in groups),
                right_deps=tuple(g[5] == "1" for g in groups),
                incoming=tuple(incoming),
            )
        )
    found, stack_repairs = decode_bit_stacks(steps, k, root_planes=range(k))
    graph, repairs = _attach_rels(sentence, found, graph_labels)
    return graph, repairs + stack_repairs
