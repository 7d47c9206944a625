import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from structlabel.models.core_models import DepStructure, Sentence
from structlabel.models.label_models import (
    LAST_FENCE,
    LEFT_FENCE,
    LEFT_LEAF,
    RIGHT_FENCE,
    RIGHT_LEAF,
    BitsLabel,
    LabelSequence,
)
from structlabel.services import dep_codec_service as dep
from structlabel.services.codec_registry import registry
from structlabel.services.structure_service import is_projective, validate
from structlabel.utils.exceptions import LabelLengthError
from tests.strategies import all_trees, dep_trees

DEP_SCHEMES = [dep.ABSOLUTE_SCHEME, dep.BRACKET_SCHEME, dep.FOUR_BIT_SCHEME, dep.SEVEN_BIT_SCHEME, dep.HEXA_SCHEME]
BRACKET_SYMBOLS = ["<", ">", "/", "\\", "<*", ">*", "/*", "\\*", "<**"]
# lifted-looking relations exercise deprojectivization on arbitrary trees
RANDOM_RELS = ["nsubj", "obj", "root", "case|obl", "det|nsubj"]

BBC_BRACKETS = ["<", "\\>/", "<", "\\>//", "<", "<", "\\\\>", "<", "<", "\\\\>"]
BBC_B4 = "0100 1111 0100 1111 0100 0000 1010 0100 0000 1110".split()
# last cell follows the outermost-bit definition
SHOP_B7 = "0010000 0000000 1011100 0010001 0000000 1001000 1110000 0010000 0000000 1011000".split()


def test_bbc_bracketing_row(bbc_tree):
    labels = dep.encode_bracketing_dep(bbc_tree)
    assert [label.symbols for label in labels.labels] == BBC_BRACKETS
    assert labels.dropped_arcs == 0


def test_shop_bracketing_second_plane(shop_tree):
    symbols = [label.symbols for label in dep.encode_bracketing_dep(shop_tree).labels]
    assert "/*" in symbols[3]
    assert symbols[6] == ">*"


def test_bbc_four_bit_row(bbc_tree):
    labels = dep.encode_4bit(bbc_tree)
    assert [label.bits for label in labels.labels] == BBC_B4
    assert labels.labels[4].render() == "0100@case"
    assert labels.lifted_arcs == 0


def test_shop_seven_bit_row(shop_tree):
    labels = dep.encode_7bit(shop_tree)
    assert [label.bits for label in labels.labels] == SHOP_B7


@pytest.mark.parametrize(
    "encode, decode",
    [
        (dep.encode_absolute_dep, dep.decode_absolute_dep),
        (dep.encode_bracketing_dep, dep.decode_bracketing_dep),
        (dep.encode_4bit, dep.decode_4bit),
        (dep.encode_7bit, dep.decode_7bit),
        (dep.encode_hexa, dep.decode_hexa),
    ],
)
@pytest.mark.parametrize("fixture", ["bbc_tree", "shop_tree"])
def test_example_trees_round_trip(encode, decode, fixture, request):
    tree = request.getfixturevalue(fixture)
    decoded, repairs = decode(encode(tree), tree.sentence)
    assert decoded == tree
    assert repairs == 0


def test_shop_four_bit_lifts_one_arc(shop_tree):
    assert dep.encode_4bit(shop_tree).lifted_arcs == 1
    assert dep.encode_hexa(shop_tree).lifted_arcs == 1


def test_hexa_single_token():
    tree_sentence = Sentence.from_forms(["Yes"])
    tree = DepStructure.from_heads(tree_sentence, [0], ["root"])
    labels = dep.encode_hexa(tree)
    assert labels.render() == ["↖@Ω@root"]
    decoded, repairs = dep.decode_hexa(labels, tree_sentence)
    assert decoded == tree
    assert repairs == 0


def test_binary_head_tree_shape(bbc_tree):
    bht = dep.build_bht(bbc_tree)
    heads, repairs = dep.bht_heads(bht, bbc_tree.n)
    assert heads[1:] == bbc_tree.heads()
    assert repairs == 0


def test_decoders_reject_wrong_length(bbc_tree):
    labels = dep.encode_4bit(bbc_tree)
    short = labels.model_copy(update={"labels": labels.labels[:-1]})
    with pytest.raises(LabelLengthError):
        dep.decode_4bit(short, bbc_tree.sentence)


def test_ill_formed_bits_are_repaired_into_a_tree():
    sentence = Sentence.from_forms(["a", "b", "c"])
    labels = LabelSequence(scheme=dep.FOUR_BIT_SCHEME, labels=tuple(BitsLabel(bits="0000", rel="x") for _ in range(3)))
    tree, repairs = dep.decode_4bit(labels, sentence)
    assert validate(tree).well_formed()
    assert repairs > 0


def test_unmatched_brackets_are_counted():
    sentence = Sentence.from_forms(["a", "b"])
    found, unmatched = dep.match_brackets(["/", "/"], 2, root_in_any_plane=False)
    assert found == [[], []]
    assert unmatched == 2
    labels = dep.encode_bracketing_dep(DepStructure.from_heads(sentence, [0, 1]))
    assert labels.render() == [">/@", ">@"]


def test_outermost_flags_pick_the_farthest_dependent(bbc_tree):
    flags = dep.outermost_flags(bbc_tree.sorted_arcs())
    outer = sorted(arc.dep for arc, flag in flags.items() if flag)
    assert outer == [1, 2, 3, 4, 5, 8, 10]


@settings(max_examples=200, deadline=None)
@given(dep_trees())
def test_absolute_round_trip(tree):
    decoded, repairs = dep.decode_absolute_dep(dep.encode_absolute_dep(tree), tree.sentence)
    assert decoded == tree
    assert repairs == 0


@settings(max_examples=200, deadline=None)
@given(dep_trees())
def test_two_planar_encodings_round_trip(tree):
    brackets = dep.encode_bracketing_dep(tree)
    seven = dep.encode_7bit(tree)
    assume(brackets.dropped_arcs == 0)
    assert seven.dropped_arcs == 0
    for labels, decode in ((brackets, dep.decode_bracketing_dep), (seven, dep.decode_7bit)):
        decoded, repairs = decode(labels, tree.sentence)
        assert decoded == tree
        assert repairs == 0


@settings(max_examples=200, deadline=None)
@given(dep_trees(max_tokens=7))
def test_projective_encodings_round_trip(tree):
    assume(is_projective(tree))
    for encode, decode in ((dep.encode_4bit, dep.decode_4bit), (dep.encode_hexa, dep.decode_hexa)):
        labels = encode(tree)
        assert labels.lifted_arcs == 0
        decoded, repairs = decode(labels, tree.sentence)
        assert decoded == tree
        assert repairs == 0


@settings(max_examples=100, deadline=None)
@given(dep_trees())
def test_decoders_always_return_trees(tree):
    for encode, decode in ((dep.encode_4bit, dep.decode_4bit), (dep.encode_hexa, dep.decode_hexa)):
        decoded, _ = decode(encode(tree), tree.sentence)
        assert validate(decoded).well_formed()


@pytest.mark.parametrize("scheme", DEP_SCHEMES)
def test_relation_with_a_pipe_survives_every_tree_codec(scheme):
    sentence = Sentence.from_forms(["their", "number", "of", "shops"])
    tree = DepStructure.from_heads(sentence, [2, 0, 4, 2], ["det", "root", "case", "nmod|poss"])
    labels = registry.encode(scheme, tree)
    assert labels.lifted_arcs == 0
    decoded, repairs = registry.decode(scheme, labels, sentence)
    assert decoded == tree
    assert repairs == 0


@pytest.mark.parametrize("encode, decode", [(dep.encode_4bit, dep.decode_4bit), (dep.encode_hexa, dep.decode_hexa)])
def test_lifted_tree_keeps_literal_pipes_and_percents(shop_tree, encode, decode):
    rels = [rel or "" for rel in shop_tree.rels()]
    rels[7], rels[8] = "cc%7Cx", "nmod|poss"
    tree = DepStructure.from_heads(shop_tree.sentence, [h or 0 for h in shop_tree.heads()], rels)
    labels = encode(tree)
    assert labels.lifted_arcs == 1
    assert "cc%257Cx" in labels.render()[7]
    decoded, repairs = decode(labels, tree.sentence)
    assert decoded == tree
    assert repairs == 0


@st.composite
def random_dep_labels(draw, scheme: str) -> tuple[Sentence, LabelSequence]:
    """Arbitrary label strings of the scheme's shape, structurally unrelated to any tree."""
    n = draw(st.integers(1, 8))
    if scheme == dep.ABSOLUTE_SCHEME:
        structural = st.integers(-2, n + 2).map(str)
    elif scheme == dep.BRACKET_SCHEME:
        structural = st.lists(st.sampled_from(BRACKET_SYMBOLS), max_size=4).map("".join)
    elif scheme in (dep.FOUR_BIT_SCHEME, dep.SEVEN_BIT_SCHEME):
        structural = st.text("01", min_size=1, max_size=8)
    else:
        structural = st.builds(
            lambda tag, fence, constituent: f"{tag}@{fence}{constituent}",
            st.sampled_from([LEFT_LEAF, RIGHT_LEAF]),
            st.sampled_from([LEFT_FENCE, RIGHT_FENCE, LAST_FENCE]),
            st.sampled_from([dep.BHT_LEFT_HEADED, dep.BHT_RIGHT_HEADED, "", "X"]),
        )
    texts = [f"{draw(structural)}@{draw(st.sampled_from(RANDOM_RELS))}" for _ in range(n)]
    return Sentence.from_forms([f"w{i}" for i in range(1, n + 1)]), registry.parse_labels(scheme, texts)


@pytest.mark.parametrize("scheme", DEP_SCHEMES)
@settings(max_examples=300, deadline=None)
@given(data=st.data())
def test_random_labels_decode_into_trees(scheme, data):
    sentence, labels = data.draw(random_dep_labels(scheme))
    tree, _ = registry.decode(scheme, labels, sentence)
    assert tree.n == sentence.n
    assert validate(tree).well_formed()


@pytest.mark.parametrize("n", range(1, 6))
def test_every_small_tree_round_trips_within_its_class(n):
    for tree in all_trees(n):
        decoded, repairs = dep.decode_absolute_dep(dep.encode_absolute_dep(tree), tree.sentence)
        assert (decoded, repairs) == (tree, 0)
        for encode, decode in ((dep.encode_bracketing_dep, dep.decode_bracketing_dep), (dep.encode_7bit, dep.decode_7bit)):
            labels = encode(tree)
            if labels.dropped_arcs == 0:
                assert decode(labels, tree.sentence) == (tree, 0)
        for encode, decode in ((dep.encode_4bit, dep.decode_4bit), (dep.encode_hexa, dep.decode_hexa)):
            decoded, _ = decode(encode(tree), tree.sentence)
            assert validate(decoded).well_formed()


@pytest.mark.parametrize("n", range(1, 7))
def test_every_small_projective_tree_round_trips(n):
    projective = [tree for tree in all_trees(n) if is_projective(tree)]
    assert projective
    for tree in projective:
        for encode, decode in ((dep.encode_4bit, dep.decode_4bit), (dep.encode_hexa, dep.decode_hexa)):
            labels = encode(tree)
            assert labels.lifted_arcs == 0
            assert decode(labels, tree.sentence) == (tree, 0)
