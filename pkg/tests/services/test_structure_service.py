import pytest
from hypothesis import given, settings

from structlabel.models.core_models import Arc, DepStructure, PlaneConstraint, Sentence, StructureKind
from structlabel.services.structure_service import assign_planes, build_tree, is_projective, validate
from structlabel.utils.exceptions import StructLabelError
from tests.strategies import dep_trees


def test_bbc_is_projective(bbc_tree):
    assert is_projective(bbc_tree)
    assert validate(bbc_tree).well_formed()


def test_shop_is_not_projective(shop_tree):
    assert not is_projective(shop_tree)


def _crossing_pair_exists(tree: DepStructure) -> bool:
    spans = [(min(a.head, a.dep), max(a.head, a.dep)) for a in tree.arcs]
    return any(l1 < l2 < r1 < r2 for l1, r1 in spans for l2, r2 in spans)


def _every_span_is_dominated(tree: DepStructure) -> bool:
    heads = [0, *tree.heads()]

    def dominated(h: int, j: int) -> bool:
        while j not in (0, h):
            j = heads[j]
        return j == h

    return all(
        dominated(h, j) for d, h in enumerate(heads[1:], start=1) for j in range(min(h, d) + 1, max(h, d)) if h != 0
    )


@settings(max_examples=300, deadline=None)
@given(dep_trees(max_tokens=9))
def test_projectivity_agrees_with_brute_force_checks(tree):
    assert is_projective(tree) == (not _crossing_pair_exists(tree))
    assert is_projective(tree) == _every_span_is_dominated(tree)


def test_projectivity_rejects_graphs(crossing_graph):
    with pytest.raises(StructLabelError):
        is_projective(crossing_graph)


def test_validate_flags_each_defect():
    sentence = Sentence.from_forms(["a", "b", "c"])
    two_roots = DepStructure.from_heads(sentence, [0, 0, 2])
    assert not validate(two_roots).rooted

    cycle = DepStructure(
        sentence=sentence,
        arcs=frozenset({Arc(head=0, dep=1), Arc(head=3, dep=2), Arc(head=2, dep=3)}),
    )
    flags = validate(cycle)
    assert not flags.acyclic
    assert not flags.connected
    assert flags.single_headed

    headless = DepStructure(sentence=sentence, arcs=frozenset({Arc(head=0, dep=1), Arc(head=1, dep=2)}))
    assert not validate(headless).single_headed


def test_shop_second_plane_holds_only_the_crossing_arc(shop_tree):
    assignment = assign_planes(shop_tree, 2, PlaneConstraint.SAME_DIRECTION_NON_CROSSING)
    assert assignment.plane(2) == [Arc(head=4, dep=7, rel="case")]
    assert len(assignment.plane(1)) == 9
    assert assignment.dropped == ()


def test_crossing_three_planes(crossing_graph):
    assignment = assign_planes(crossing_graph, 3, PlaneConstraint.NON_CROSSING)
    assert assignment.plane(2) == [Arc(head=1, dep=4, rel="b")]
    assert assignment.plane(3) == [Arc(head=2, dep=5, rel="d")]
    assert assignment.planes_used == 3


def test_arcs_beyond_the_plane_budget_are_dropped(crossing_graph):
    assignment = assign_planes(crossing_graph, 1, PlaneConstraint.NON_CROSSING)
    assert set(assignment.dropped) == {Arc(head=1, dep=4, rel="b"), Arc(head=2, dep=5, rel="d")}


def test_shared_endpoints_do_not_cross():
    assert not Arc(head=1, dep=3).crosses(Arc(head=3, dep=5))
    assert Arc(head=1, dep=3).crosses(Arc(head=2, dep=4))


def test_plane_count_must_be_positive(bbc_tree):
    with pytest.raises(StructLabelError):
        assign_planes(bbc_tree, 0, PlaneConstraint.NON_CROSSING)


def test_build_tree_keeps_valid_candidates(bbc_tree):
    candidates = [[(h, r)] for h, r in zip(bbc_tree.heads(), bbc_tree.rels())]
    tree, repairs = build_tree(bbc_tree.sentence, candidates)
    assert tree == bbc_tree
    assert repairs == 0


def test_build_tree_repairs_headless_and_extra_roots():
    sentence = Sentence.from_forms(["a", "b", "c"])
    tree, repairs = build_tree(sentence, [[], [(0, "root")], [(0, "x")]], rels=["p", "q", "r"])
    # b keeps the root; c loses its second root arc and, like a, falls back to a neighbour
    assert validate(tree).well_formed()
    assert repairs == 3
    assert tree.heads() == [2, 0, 2]


def test_build_tree_breaks_cycles():
    sentence = Sentence.from_forms(["a", "b", "c"])
    tree, repairs = build_tree(sentence, [[(0, "root")], [(3, "x")], [(2, "y")]])
    assert validate(tree).well_formed()
    assert repairs == 1
    assert tree.heads() == [0, 1, 2]


def test_build_tree_discards_out_of_range_and_self_heads():
    sentence = Sentence.from_forms(["a", "b"])
    tree, repairs = build_tree(sentence, [[(0, "root")], [(2, "x"), (7, "y"), (1, "z")]])
    assert tree.heads() == [0, 1]
    assert tree.rels() == ["root", "z"]
    assert repairs == 2


@given(dep_trees())
def test_random_trees_validate(tree):
    assert validate(tree).well_formed()
    assert tree.kind is StructureKind.TREE
