import pytest
from pydantic import ValidationError

from structlabel.models.core_models import Arc, DepStructure, Sentence, StructureKind
from structlabel.models.corpus_schemas import CorpusDocument, CorpusEntry, SourceFormat


def test_self_loops_are_rejected():
    with pytest.raises(ValidationError):
        Arc(head=2, dep=2)


def test_crossing_is_strict():
    assert Arc(head=1, dep=3).crosses(Arc(head=2, dep=4))
    assert Arc(head=4, dep=2).crosses(Arc(head=3, dep=1))
    assert not Arc(head=1, dep=3).crosses(Arc(head=3, dep=4))
    assert not Arc(head=0, dep=4).crosses(Arc(head=1, dep=2))


def test_root_arcs_point_right():
    assert Arc(head=0, dep=3).rightward
    assert not Arc(head=3, dep=1).rightward


def test_arcs_must_stay_inside_the_sentence():
    sentence = Sentence.from_forms(["a", "b"])
    with pytest.raises(ValidationError):
        DepStructure(sentence=sentence, arcs=frozenset({Arc(head=0, dep=3)}))


def test_empty_sentences_are_rejected():
    with pytest.raises(ValidationError):
        Sentence(id="x", tokens=())


def test_heads_and_rels_of_a_graph_take_the_first_head(crossing_graph):
    assert crossing_graph.heads() == [3, None, 0, 1, 2]
    assert crossing_graph.rels() == ["a", None, "root", "b", "d"]
    assert [a.head for a in crossing_graph.incoming(4)] == [1, 5]
    assert crossing_graph.children(3) == [1]


def test_with_xpos_checks_length():
    sentence = Sentence.from_forms(["a", "b"])
    assert [t.xpos for t in sentence.with_xpos(["X", "Y"]).tokens] == ["X", "Y"]
    with pytest.raises(ValueError):
        sentence.with_xpos(["X"])


def test_documents_hold_the_structure_their_format_promises(bbc_tree, crossing_graph):
    CorpusDocument(entries=(CorpusEntry(sentence=bbc_tree.sentence, dep=bbc_tree),), source_format=SourceFormat.CONLLU_TREE)
    with pytest.raises(ValidationError):
        CorpusDocument(entries=(CorpusEntry(sentence=crossing_graph.sentence, dep=crossing_graph),), source_format=SourceFormat.CONLLU_TREE)
    with pytest.raises(ValidationError):
        CorpusDocument(entries=(CorpusEntry(sentence=bbc_tree.sentence),), source_format=SourceFormat.SDP_GRAPH)


def test_structures_are_hashable_values(bbc_tree):
    again = DepStructure.from_heads(bbc_tree.sentence, bbc_tree.heads(), bbc_tree.rels())
    assert again == bbc_tree
    assert again.kind is StructureKind.TREE
