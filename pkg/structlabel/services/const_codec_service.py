"""Constituency linearizations.

All encoders work on the unary-collapsed tree: a node whose only child is
another node is merged with it into ``"X:Y"`` (down to the pre-terminal, so
``NP -> PRP -> I`` becomes the pre-terminal ``NP:PRP``). The collapsed
pre-terminal labels travel with the label sequence as its ``tags``; decoders
read them back from the sentence's XPOS column.

Absolute / relative encodings produce n - 1 labels: ``p_i`` is the number of
non-terminals shared by w_i and w_i+1 and ``c_i`` the label of the lowest one.
Tetratagging produces n labels over the right-binarized tree.

Decoders repair rather than raise: depths are clamped to [1, n - 1], the
shallowest depth is renormalized to 1, unlabeled nodes are spliced into their
parent, and tetratag stack faults get implicit nodes or empty slots. Each fix
is counted, and every token ends up under exactly one pre-terminal.
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

from structlabel.config.logger_config import logger
from structlabel.models.const_models import UNARY_DELIMITER, ConstNode, ConstTree
from structlabel.models.core_models import Sentence
from structlabel.models.label_models import (
    LEFT_FENCE,
    LEFT_LEAF,
    RIGHT_FENCE,
    RIGHT_LEAF,
    AbsoluteConstLabel,
    LabelSequence,
    RelativeConstLabel,
    TetraLabel,
)
from structlabel.utils.exceptions import LabelLengthError

BINARIZED_SUFFIX = "|"
FALLBACK_TAG = "XX"
IMPLICIT_LABEL = "X"

ABSOLUTE_SCHEME = "const-abs"
RELATIVE_SCHEME = "const-rel"
TETRA_SCHEME = "tetra"


# ---------------------------------------------------------------------------
# Unary chains
# ---------------------------------------------------------------------------


def split_chain(label: str) -> list[str]:
    """Inverse of ``":".join(chain)`` for chains of non-empty labels.

    A run of 2j empty parts stands for j literal ``":"`` labels (the PTB colon
    tag); an odd leading run additionally holds an empty root label.
    """
    parts = label.split(UNARY_DELIMITER)
    chain: list[str] = []
    i = 0
    while i < len(parts):
        if parts[i]:
            chain.append(parts[i])
            i += 1
            continue
        j = i
        while j < len(parts) and not parts[j]:
            j += 1
        run = j - i
        if i == 0 and run % 2 == 1:
            chain.append("")
            run -= 1
        chain.extend([UNARY_DELIMITER] * (run // 2))
        i = j
    return chain


def join_chain(labels: Sequence[str]) -> str:
    return UNARY_DELIMITER.join(labels)


def _collapse(node: ConstNode) -> ConstNode:
    if node.is_preterminal:
        return node
    children = tuple(c if isinstance(c, int) else _collapse(c) for c in node.children)
    if len(children) == 1 and isinstance(children[0], ConstNode):
        child = children[0]
        merged = join_chain(split_chain(node.label) + split_chain(child.label))
        return ConstNode(label=merged, children=child.children)
    return ConstNode(label=node.label, children=children)


def collapse_unary(tree: ConstTree) -> ConstTree:
    return ConstTree(root=_collapse(tree.root), collapsed=True)


def _expand(node: ConstNode) -> ConstNode:
    children = tuple(c if isinstance(c, int) else _expand(c) for c in node.children)
    chain = split_chain(node.label)
    expanded = ConstNode(label=chain[-1], children=children)
    for label in reversed(chain[:-1]):
        expanded = ConstNode(label=label, children=(expanded,))
    return expanded


def expand_unary(tree: ConstTree) -> ConstTree:
    return ConstTree(root=_expand(tree.root), collapsed=False)


def _ensure_collapsed(tree: ConstTree) -> ConstTree:
    return tree if tree.collapsed else collapse_unary(tree)


# ---------------------------------------------------------------------------
# Binarization
# ---------------------------------------------------------------------------


def _binarize(node: ConstNode) -> ConstNode:
    if node.is_preterminal:
        return node
    children = [c if isinstance(c, int) else _binarize(c) for c in node.children]
    intermediate = node.label + BINARIZED_SUFFIX
    while len(children) > 2:
        last = ConstNode(label=intermediate, children=tuple(children[-2:]))
        children = children[:-2] + [last]
    return ConstNode(label=node.label, children=tuple(children))


def binarize(tree: ConstTree) -> ConstTree:
    """Right-branching: S(A, B, C) -> S(A, S|(B, C))."""
    return ConstTree(root=_binarize(tree.root), collapsed=tree.collapsed)


def _debinarize(node: ConstNode) -> ConstNode:
    if node.is_preterminal:
        return node
    children: list[ConstNode | int] = []
    for child in node.children:
        if isinstance(child, int):
            children.append(child)
            continue
        child = _debinarize(child)
        if child.label.endswith(BINARIZED_SUFFIX) and not child.is_preterminal:
            children.extend(child.children)
        else:
            children.append(child)
    return ConstNode(label=node.label, children=tuple(children))


def debinarize(tree: ConstTree) -> ConstTree:
    return ConstTree(root=_debinarize(tree.root), collapsed=tree.collapsed)


# ---------------------------------------------------------------------------
# Absolute / relative encodings
# ---------------------------------------------------------------------------


def _leaf_paths(root: ConstNode) -> list[list[ConstNode]]:
    """Non-terminal ancestors (root first) of every pre-terminal, left to right."""
    paths: list[list[ConstNode]] = []

    def walk(node: ConstNode, ancestors: list[ConstNode]) -> None:
        if node.is_preterminal:
            paths.append(ancestors)
            return
        for child in node.children:
            walk(child, ancestors + [node])  # type: ignore[arg-type]

    walk(root, [])
    return paths


def _shared_depths(tree: ConstTree) -> tuple[list[int], list[str]]:
    paths = _leaf_paths(tree.root)
    depths: list[int] = []
    consts: list[str] = []
    for left, right in zip(paths, paths[1:]):
        p = 0
        while p < min(len(left), len(right)) and left[p] is right[p]:
            p += 1
        depths.append(p)
        consts.append(left[p - 1].label)
    return depths, consts


def encode_absolute(tree: ConstTree) -> LabelSequence:
    tree = _ensure_collapsed(tree)
    depths, consts = _shared_depths(tree)
    labels = tuple(AbsoluteConstLabel(p=p, c=c) for p, c in zip(depths, consts))
    return LabelSequence(scheme=ABSOLUTE_SCHEME, labels=labels, tags=tuple(tree.preterminal_labels()))


def encode_relative(tree: ConstTree) -> LabelSequence:
    return absolute_to_relative(encode_absolute(tree))


def absolute_to_relative(labels: LabelSequence) -> LabelSequence:
    previous = 0
    out = []
    for label in labels.labels:
        out.append(RelativeConstLabel(dp=label.p - previous, c=label.c))  # type: ignore[attr-defined]
        previous = label.p  # type: ignore[attr-defined]
    return labels.model_copy(update={"scheme": RELATIVE_SCHEME, "labels": tuple(out)})


def relative_to_absolute(labels: LabelSequence) -> LabelSequence:
    depth = 0
    out = []
    for label in labels.labels:
        depth += label.dp  # type: ignore[attr-defined]
        out.append(AbsoluteConstLabel(p=depth, c=label.c))  # type: ignore[attr-defined]
    return labels.model_copy(update={"scheme": ABSOLUTE_SCHEME, "labels": tuple(out)})


def _preterminal(sentence: Sentence, i: int) -> ConstNode:
    return ConstNode(label=sentence.token(i).xpos or FALLBACK_TAG, children=(i,))


@dataclass
class _Phrase:
    label: str | None
    children: list["_Phrase | ConstNode"] = field(default_factory=list)


def _freeze_phrase(phrase: _Phrase) -> tuple[list[ConstNode], int]:
    """Frozen node(s) for ``phrase``; unlabeled phrases dissolve into their children."""
    children: list[ConstNode] = []
    repairs = 0
    for child in phrase.children:
        if isinstance(child, ConstNode):
            children.append(child)
        else:
            frozen, fixed = _freeze_phrase(child)
            children.extend(frozen)
            repairs += fixed
    if phrase.label is None:
        return children, repairs + 1
    return [ConstNode(label=phrase.label, children=tuple(children))], repairs


def _check_length(labels: LabelSequence, sentence: Sentence, expected: int) -> None:
    if len(labels) != expected:
        raise LabelLengthError(sentence.id, expected, len(labels))


def _decode_depths(depths: list[int], consts: list[str], sentence: Sentence) -> tuple[ConstTree, int]:
    n = sentence.n
    if n == 1:
        return ConstTree(root=_preterminal(sentence, 1), collapsed=True), 0

    repairs = 0
    clamped = [min(max(p, 1), n - 1) for p in depths]
    repairs += sum(1 for p, q in zip(depths, clamped) if p != q)
    shift = min(clamped) - 1
    if shift:
        clamped = [p - shift for p in clamped]
        repairs += 1

    path: list[_Phrase] = []
    previous = 0
    for i, (p, c) in enumerate(zip(clamped, consts), start=1):
        while len(path) < p:
            phrase = _Phrase(label=None)
            if path:
                path[-1].children.append(phrase)
            path.append(phrase)
        path[p - 1].label = c
        path[max(previous, p) - 1].children.append(_preterminal(sentence, i))
        del path[p:]
        previous = p
    path[previous - 1].children.append(_preterminal(sentence, n))

    frozen, spliced = _freeze_phrase(path[0])
    repairs += spliced
    root = frozen[0] if len(frozen) == 1 else ConstNode(label=IMPLICIT_LABEL, children=tuple(frozen))
    tree = ConstTree(root=root)
    normalized = collapse_unary(tree)
    if normalized.root != tree.root:
        repairs += 1
    return normalized, repairs


def decode_absolute(labels: LabelSequence, sentence: Sentence) -> tuple[ConstTree, int]:
    _check_length(labels, sentence, sentence.n - 1)
    depths = [label.p for label in labels.labels]  # type: ignore[attr-defined]
    consts = [label.c for label in labels.labels]  # type: ignore[attr-defined]
    return _decode_depths(depths, consts, sentence)


def decode_relative(labels: LabelSequence, sentence: Sentence) -> tuple[ConstTree, int]:
    _check_length(labels, sentence, sentence.n - 1)
    return decode_absolute(relative_to_absolute(labels), sentence)


# ---------------------------------------------------------------------------
# Tetratagging
# ---------------------------------------------------------------------------

TetraStep = tuple[str, str | None, str | None]


def tetratag(root: ConstNode) -> list[TetraStep]:
    """In-order tags of a binary tree: (leaf tag, fence tag, fence label) per token.

    Leaves tagged as left (↗) or right (↖) children; each non-terminal, visited
    between its two subtrees, tagged as left (⇗, also the root) or right (⇖)
    child. The last token has no fencepost.
    """
    leaves: list[str] = []
    fences: list[tuple[str, str]] = []

    def walk(node: ConstNode, left_child: bool, is_root: bool) -> None:
        if node.is_preterminal:
            leaves.append(LEFT_LEAF if left_child and not is_root else RIGHT_LEAF)
            return
        left, right = node.children
        walk(left, True, False)  # type: ignore[arg-type]
        fences.append((LEFT_FENCE if left_child or is_root else RIGHT_FENCE, node.label))
        walk(right, False, False)  # type: ignore[arg-type]

    walk(root, True, True)
    steps: list[TetraStep] = [(leaf, *fence) for leaf, fence in zip(leaves, fences)]
    steps.append((leaves[-1], None, None))
    return steps


@dataclass
class _Open:
    label: str
    left: "_Open | ConstNode | None"
    right: "_Open | ConstNode | None" = None


@dataclass
class _Item:
    root: "_Open | ConstNode"
    hole: _Open | None = None


_EMPTY = ConstNode(label="", children=())


def _close(item: _Item) -> int:
    if item.hole is None:
        return 0
    item.hole.right = _EMPTY
    item.hole = None
    return 1


def _freeze_open(node: "_Open | ConstNode | None") -> ConstNode | None:
    if node is None or node is _EMPTY:
        return None
    if isinstance(node, ConstNode):
        return node
    children = [c for c in (_freeze_open(node.left), _freeze_open(node.right)) if c is not None]
    if not children:
        return None
    if len(children) == 1:
        return children[0]
    return ConstNode(label=node.label, children=tuple(children))


def tetra_decode(steps: Sequence[TetraStep], make_leaf: Callable[[int], ConstNode], implicit_label: str) -> tuple[ConstNode, int]:
    """Single-stack tetratag decoder with repair.

    ↗ pushes the leaf; ↖ fills the hole of the top item; ⇗ pops a complete
    subtree T and pushes X(T, hole); ⇖ pops T and plugs X(T, hole) into the
    hole below.
    """
    n = len(steps)
    stack: list[_Item] = []
    repairs = 0
    for i, (leaf_tag, fence, label) in enumerate(steps, start=1):
        leaf = make_leaf(i)
        if leaf_tag == LEFT_LEAF:
            stack.append(_Item(root=leaf))
        elif stack and stack[-1].hole is not None:
            stack[-1].hole.right = leaf
            stack[-1].hole = None
        else:
            # a lone token is tagged as a right leaf
            repairs += 0 if n == 1 else 1
            stack.append(_Item(root=leaf))

        if i == n:
            if fence is not None:
                repairs += 1
            continue
        if fence is None:
            repairs += 1
            continue
        top = stack.pop()
        repairs += _close(top)
        node = _Open(label=label or "", left=top.root)
        if fence == LEFT_FENCE:
            stack.append(_Item(root=node, hole=node))
        elif stack and stack[-1].hole is not None:
            stack[-1].hole.right = node
            stack[-1].hole = node
        else:
            repairs += 1
            stack.append(_Item(root=node, hole=node))

    for item in stack:
        repairs += _close(item)
    root: _Open | ConstNode = stack[0].root
    for item in stack[1:]:
        repairs += 1
        root = _Open(label=implicit_label, left=root, right=item.root)
    frozen = _freeze_open(root)
    assert frozen is not None  # every step contributes a leaf
    return frozen, repairs


def encode_tetra(tree: ConstTree) -> LabelSequence:
    tree = _ensure_collapsed(tree)
    labels = tuple(TetraLabel(tag=leaf, fence=fence, c=label) for leaf, fence, label in tetratag(binarize(tree).root))
    return LabelSequence(scheme=TETRA_SCHEME, labels=labels, tags=tuple(tree.preterminal_labels()))


def decode_tetra(labels: LabelSequence, sentence: Sentence) -> tuple[ConstTree, int]:
    _check_length(labels, sentence, sentence.n)
    steps = [(label.tag, label.fence, label.c) for label in labels.labels]  # type: ignore[attr-defined]
    root, repairs = tetra_decode(steps, lambda i: _preterminal(sentence, i), IMPLICIT_LABEL)
    tree = debinarize(ConstTree(root=root))
    normalized = collapse_unary(tree)
    if normalized.root != tree.root:
        repairs += 1
    if repairs:
        logger.debug(f"sentence {sentence.id}: {repairs} tetratag repairs")
    return normalized, repairs
