import pytest
from hypothesis import assume, given, settings

from structlabel.models.core_models import Sentence, StructureKind
from structlabel.models.label_models import GraphLabel, LabelSequence
from structlabel.services import graph_codec_service as graph
from structlabel.utils.exceptions import LabelFormatError, LabelLengthError
from tests.strategies import all_graphs, dep_graphs

GRAPH_CODECS = [
    (lambda g: graph.encode_relative_graph(g), lambda labels, s: graph.decode_relative_graph(labels, s)),
    (lambda g: graph.encode_bracketing_graph(g, 3), lambda labels, s: graph.decode_bracketing_graph(labels, s, 3)),
    (lambda g: graph.encode_4k(g, 3), lambda labels, s: graph.decode_4k(labels, s, 3)),
    (lambda g: graph.encode_6k(g, 3), lambda labels, s: graph.decode_6k(labels, s, 3)),
]


def test_crossing_relative_cells(crossing_graph):
    labels = graph.encode_relative_graph(crossing_graph).render()
    assert labels[1] == "-"
    assert labels[2] == "(-3)@root"
    assert labels[3] == "(-3,1)@b|c"
    assert labels[4] == "(-3)@d"


def test_crossing_bracketing_cells(crossing_graph):
    labels = graph.encode_bracketing_graph(crossing_graph, 3)
    assert labels.scheme == "gr-brk:3"
    assert [label.x for label in labels.labels] == ["/*<", "/**", "\\>", ">*<", "\\>**"]
    assert labels.dropped_arcs == 0


def test_crossing_bracketing_with_two_planes_drops_one_arc(crossing_graph):
    labels = graph.encode_bracketing_graph(crossing_graph, 2)
    assert labels.dropped_arcs == 1


@pytest.mark.parametrize(
    "encode, decode",
    [
        (lambda g: graph.encode_relative_graph(g), lambda labels, s: graph.decode_relative_graph(labels, s)),
        (lambda g: graph.encode_bracketing_graph(g, 3), lambda labels, s: graph.decode_bracketing_graph(labels, s, 3)),
        (lambda g: graph.encode_4k(g, 4), lambda labels, s: graph.decode_4k(labels, s, 4)),
        (lambda g: graph.encode_6k(g, 3), lambda labels, s: graph.decode_6k(labels, s, 3)),
    ],
    ids=["relative", "bracketing", "4k-bit", "6k-bit"],
)
def test_crossing_round_trip(crossing_graph, encode, decode):
    decoded, repairs = decode(encode(crossing_graph), crossing_graph.sentence)
    assert decoded == crossing_graph
    assert decoded.kind is StructureKind.GRAPH
    assert repairs == 0


def test_four_k_labels_carry_null_relations_for_artificial_arcs(crossing_graph):
    labels = graph.encode_4k(crossing_graph, 4)
    assert all(len(label.x) == 16 for label in labels.labels)
    # w2 has no real head: one artificial arc from w1 in each plane
    assert labels.labels[1].rels == (graph.NULL_REL,) * 4


def test_offsets_parse_and_reject():
    assert graph.parse_offsets("(-3,1)") == [-3, 1]
    assert graph.parse_offsets("-") == []
    assert graph.render_offsets([-3, 1]) == "(-3,1)"
    with pytest.raises(LabelFormatError):
        graph.parse_offsets("(x)")


def test_relative_decoding_discards_out_of_range_heads():
    sentence = Sentence.from_forms(["a", "b"])
    labels = LabelSequence(
        scheme=graph.RELATIVE_SCHEME,
        labels=(GraphLabel(x="(5,-1)", rels=("bad", "root")), GraphLabel(x="(-1)", rels=("x",))),
    )
    decoded, repairs = graph.decode_relative_graph(labels, sentence)
    assert {(a.head, a.dep, a.rel) for a in decoded.arcs} == {(0, 1, "root"), (1, 2, "x")}
    assert repairs == 1


def test_relation_count_mismatch_is_a_repair():
    sentence = Sentence.from_forms(["a"])
    labels = LabelSequence(scheme=graph.RELATIVE_SCHEME, labels=(GraphLabel(x="(-1)", rels=()),))
    decoded, repairs = graph.decode_relative_graph(labels, sentence)
    assert [(a.head, a.rel) for a in decoded.arcs] == [(0, "")]
    assert repairs == 1


def test_bit_width_is_checked(crossing_graph):
    labels = graph.encode_4k(crossing_graph, 4)
    with pytest.raises(LabelFormatError):
        graph.decode_4k(labels, crossing_graph.sentence, 3)


def test_length_is_checked(crossing_graph):
    labels = graph.encode_relative_graph(crossing_graph)
    with pytest.raises(LabelLengthError):
        graph.decode_relative_graph(labels, Sentence.from_forms(["a"]))


@settings(max_examples=200, deadline=None)
@given(dep_graphs())
def test_relative_round_trip(g):
    decoded, repairs = graph.decode_relative_graph(graph.encode_relative_graph(g), g.sentence)
    assert decoded == g
    assert repairs == 0


@settings(max_examples=200, deadline=None)
@given(dep_graphs())
def test_planar_encodings_round_trip_when_nothing_is_dropped(g):
    encodings = [
        (graph.encode_bracketing_graph(g, 3), lambda labels: graph.decode_bracketing_graph(labels, g.sentence, 3)),
        (graph.encode_4k(g, 4), lambda labels: graph.decode_4k(labels, g.sentence, 4)),
        (graph.encode_6k(g, 3), lambda labels: graph.decode_6k(labels, g.sentence, 3)),
    ]
    for labels, decode in encodings:
        if labels.dropped_arcs:
            continue
        decoded, repairs = decode(labels)
        assert decoded == g
        assert repairs == 0


@settings(max_examples=100, deadline=None)
@given(dep_graphs())
def test_dropped_arcs_are_the_only_loss(g):
    labels = graph.encode_bracketing_graph(g, 1)
    assume(labels.dropped_arcs > 0)
    decoded, _ = graph.decode_bracketing_graph(labels, g.sentence, 1)
    assert decoded.arcs <= g.arcs
    assert len(g.arcs) - len(decoded.arcs) == labels.dropped_arcs


@pytest.mark.parametrize("n, max_arcs", [(1, None), (2, None), (3, None), (4, 4)])
def test_every_small_graph_round_trips_with_three_planes(n, max_arcs):
    checked = 0
    for g in all_graphs(n, max_arcs):
        for encode, decode in GRAPH_CODECS:
            labels = encode(g)
            if labels.dropped_arcs:
                continue
            assert decode(labels, g.sentence) == (g, 0)
            checked += 1
    assert checked
