import pytest

from structlabel.config.settings import get_settings
from structlabel.models.const_models import ConstNode, ConstTree
from structlabel.models.core_models import Arc, DepStructure, Sentence, StructureKind

BBC_FORMS = "I had to go to the BBC for this report".split()
BBC_HEADS = [2, 0, 4, 2, 7, 7, 4, 10, 10, 4]
BBC_RELS = ["nsubj", "root", "mark", "xcomp", "case", "det", "obl", "case", "det", "obl"]

SHOP_FORMS = "Any particular shop that you know of and their number".split()
SHOP_HEADS = [3, 3, 0, 6, 6, 3, 4, 10, 10, 3]
SHOP_RELS = ["det", "amod", "root", "obl", "nsubj", "acl:relcl", "case", "cc", "nmod:poss", "conj"]

CROSSING_ARCS = [(0, 3, "root"), (3, 1, "a"), (1, 4, "b"), (5, 4, "c"), (2, 5, "d")]


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached per process; tests that patch the environment need a clean read."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def bbc_tree() -> DepStructure:
    """Projective tree: "I had to go to the BBC for this report"."""
    sentence = Sentence.from_forms(BBC_FORMS, id="bbc")
    return DepStructure.from_heads(sentence, BBC_HEADS, BBC_RELS)


@pytest.fixture
def shop_tree() -> DepStructure:
    """2-planar tree; "of" attaches across "know"."""
    sentence = Sentence.from_forms(SHOP_FORMS, id="shop")
    return DepStructure.from_heads(sentence, SHOP_HEADS, SHOP_RELS)


@pytest.fixture
def crossing_graph() -> DepStructure:
    """Five-token graph: w4 has two heads, w2 none, and two arcs cross the root arc."""
    sentence = Sentence.from_forms([f"w{i}" for i in range(1, 6)], id="crossing")
    arcs = frozenset(Arc(head=h, dep=d, rel=r) for h, d, r in CROSSING_ARCS)
    return DepStructure(sentence=sentence, arcs=arcs, kind=StructureKind.GRAPH)


def preterminal(label: str, i: int) -> ConstNode:
    return ConstNode(label=label, children=(i,))


@pytest.fixture
def flat_const() -> tuple[ConstTree, Sentence]:
    tree = ConstTree(root=ConstNode(label="S", children=(preterminal("DT", 1), preterminal("NN", 2), preterminal("VBZ", 3))))
    return tree, Sentence.from_forms(["the", "dog", "barks"], xpos=["DT", "NN", "VBZ"])


@pytest.fixture
def nested_const() -> tuple[ConstTree, Sentence]:
    """(S (NP (DT The) (NN cat)) (VP (VBD sat)))"""
    np_ = ConstNode(label="NP", children=(preterminal("DT", 1), preterminal("NN", 2)))
    vp = ConstNode(label="VP", children=(preterminal("VBD", 3),))
    tree = ConstTree(root=ConstNode(label="S", children=(np_, vp)))
    return tree, Sentence.from_forms(["The", "cat", "sat"], xpos=["DT", "NN", "VBD"])


BBC_CONLLU = "".join(
    f"{d}\t{form}\t_\t_\t_\t_\t{head}\t{rel}\t_\t_\n"
    for d, (form, head, rel) in enumerate(zip(BBC_FORMS, BBC_HEADS, BBC_RELS), start=1)
)


@pytest.fixture
def bbc_conllu_file(tmp_path):
    path = tmp_path / "bbc.conllu"
    path.write_text("# sent_id = bbc\n" + BBC_CONLLU + "\n", encoding="utf-8")
    return path


@pytest.fixture
def ptb_file(tmp_path):
    path = tmp_path / "trees.ptb"
    path.write_text(
        "(S (NP (DT The) (NN cat)) (VP (VBD sat)))\n(S (NP (PRP It)) (VP (VBZ works) (ADVP (RB well))) (. .))\n",
        encoding="utf-8",
    )
    return path
