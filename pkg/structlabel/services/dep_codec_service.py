"""Dependency-tree linearizations.

Schemes: absolute heads, 2-planar bracketing, 4-bit, 7-bit and hexatagging.

Bracket strings: per token, ``\\`` for each leftward outgoing arc, ``>`` when
the head is to the left (the root counts as left), ``<`` when it is to the
right, ``/`` for each rightward outgoing arc. Arcs of plane p carry p - 1
stars. Left-side symbols are written plane by plane ascending, right-side
symbols plane by plane descending (``\\>**``, ``>*<``, ``/*<``).

Bits, 4-bit: b0 head on the left, b1 farthest dependent of its head on that
side, b2 has left dependents, b3 has right dependents. 7-bit: b0 head on the
left, b1 head arc in plane 2, b2 farthest on that side in that plane, b3/b4
left/right dependents in plane 1, b5/b6 the same in plane 2.

Every tree decoder finishes with ``structure_service.build_tree``; 4-bit and
hexa decoders also deprojectivize, since their encoders pseudo-projectivize
non-projective input first. Those two escape literal ``%`` and ``|`` in
relations before lifting, so ``|`` in a decoded label always marks a lift.
"""

import re
from collections.abc import Sequence
from typing import NamedTuple

from structlabel.config.logger_config import logger
from structlabel.models.const_models import ConstNode
from structlabel.models.core_models import Arc, DepStructure, PlaneConstraint, Sentence
from structlabel.models.label_models import (
    LAST_FENCE,
    AbsoluteDepLabel,
    BitsLabel,
    BracketLabel,
    HexaLabel,
    LabelSequence,
)
from structlabel.services.const_codec_service import tetra_decode, tetratag
from structlabel.services.pseudo_projective_service import (
    deprojectivize,
    escape_relations,
    pseudo_projectivize,
    unescape_relations,
)
from structlabel.services.structure_service import _require_tree, assign_planes, build_tree, is_projective
from structlabel.utils.exceptions import LabelLengthError

ABSOLUTE_SCHEME = "dep-abs"
BRACKET_SCHEME = "dep-brk"
FOUR_BIT_SCHEME = "dep-4b"
SEVEN_BIT_SCHEME = "dep-7b"
HEXA_SCHEME = "dep-hexa"

STAR = "*"
BHT_LEFT_HEADED = "L"
BHT_RIGHT_HEADED = "R"
_BHT_LEAF = "_"

_SYMBOL = re.compile(r"([<>/\\])(\**)")


def _check_length(labels: LabelSequence, sentence: Sentence) -> None:
    if len(labels) != sentence.n:
        raise LabelLengthError(sentence.id, sentence.n, len(labels))


def _rels(labels: LabelSequence) -> list[str]:
    return [label.rel for label in labels.labels]  # type: ignore[attr-defined]


def _projective_input(tree: DepStructure) -> tuple[DepStructure, int]:
    tree = escape_relations(tree)
    if is_projective(tree):
        return tree, 0
    return pseudo_projectivize(tree)


def _restored(tree: DepStructure) -> DepStructure:
    return unescape_relations(deprojectivize(tree))


# ---------------------------------------------------------------------------
# Absolute
# ---------------------------------------------------------------------------


def encode_absolute_dep(tree: DepStructure) -> LabelSequence:
    _require_tree(tree)
    labels = tuple(AbsoluteDepLabel(head=h if h is not None else 0, rel=r or "") for h, r in zip(tree.heads(), tree.rels()))
    return LabelSequence(scheme=ABSOLUTE_SCHEME, labels=labels)


def decode_absolute_dep(labels: LabelSequence, sentence: Sentence) -> tuple[DepStructure, int]:
    _check_length(labels, sentence)
    candidates = [[(label.head, label.rel)] for label in labels.labels]  # type: ignore[attr-defined]
    return build_tree(sentence, candidates, _rels(labels))


# ---------------------------------------------------------------------------
# Brackets (shared with the graph bracketing encoding)
# ---------------------------------------------------------------------------


def render_brackets(n: int, plane_of: dict[Arc, int], k: int) -> list[str]:
    left_out = [[0] * (k + 1) for _ in range(n + 1)]
    right_out = [[0] * (k + 1) for _ in range(n + 1)]
    in_left = [[0] * (k + 1) for _ in range(n + 1)]
    in_right = [[0] * (k + 1) for _ in range(n + 1)]
    for arc, p in plane_of.items():
        if arc.rightward:
            in_left[arc.dep][p] += 1
            if arc.head:
                right_out[arc.head][p] += 1
        else:
            in_right[arc.dep][p] += 1
            left_out[arc.head][p] += 1

    out = []
    for i in range(1, n + 1):
        parts = []
        for p in range(1, k + 1):
            stars = STAR * (p - 1)
            parts.append(("\\" + stars) * left_out[i][p] + (">" + stars) * in_left[i][p])
        for p in range(k, 0, -1):
            stars = STAR * (p - 1)
            parts.append(("<" + stars) * in_right[i][p] + ("/" + stars) * right_out[i][p])
        out.append("".join(parts))
    return out


def match_brackets(symbol_strings: Sequence[str], k: int, root_in_any_plane: bool) -> tuple[list[list[tuple[int, int]]], int]:
    """Pair brackets with one stack pair per plane.

    Returns (head, plane) candidates per token in decoding order and the number
    of unmatched brackets. Within a token, closing symbols (``\\``, ``>``) are
    processed before opening ones (``<``, ``/``). An unmatched ``>`` means the
    root: always for graphs, only in plane 1 for trees.
    """
    waiting_head = [[] for _ in range(k)]  # '<' tokens, head still to come
    waiting_dep = [[] for _ in range(k)]  # '/' tokens, dependent still to come
    found: list[list[tuple[int, int]]] = [[] for _ in symbol_strings]
    unmatched = 0
    for i, text in enumerate(symbol_strings, start=1):
        symbols = [(ch, len(stars) + 1) for ch, stars in _SYMBOL.findall(text)]
        for ch, p in symbols:
            if p > k:
                unmatched += 1
            elif ch == "\\":
                if waiting_head[p - 1]:
                    d = waiting_head[p - 1].pop()
                    found[d - 1].append((i, p))
                else:
                    unmatched += 1
            elif ch == ">":
                if waiting_dep[p - 1]:
                    found[i - 1].append((waiting_dep[p - 1].pop(), p))
                elif root_in_any_plane or p == 1:
                    found[i - 1].append((0, p))
                else:
                    unmatched += 1
        for ch, p in symbols:
            if p > k:
                continue
            if ch == "<":
                waiting_head[p - 1].append(i)
            elif ch == "/":
                waiting_dep[p - 1].append(i)
    unmatched += sum(len(stack) for stack in waiting_head + waiting_dep)
    return found, unmatched


def encode_bracketing_dep(tree: DepStructure) -> LabelSequence:
    _require_tree(tree)
    assignment = assign_planes(tree, 2, PlaneConstraint.SAME_DIRECTION_NON_CROSSING)
    brackets = render_brackets(tree.n, assignment.plane_of, 2)
    labels = tuple(BracketLabel(symbols=s, rel=r or "") for s, r in zip(brackets, tree.rels()))
    if assignment.dropped:
        logger.warning(f"sentence {tree.sentence.id}: {len(assignment.dropped)} arcs beyond two planes dropped")
    return LabelSequence(scheme=BRACKET_SCHEME, labels=labels, dropped_arcs=len(assignment.dropped))


def decode_bracketing_dep(labels: LabelSequence, sentence: Sentence) -> tuple[DepStructure, int]:
    _check_length(labels, sentence)
    rels = _rels(labels)
    found, unmatched = match_brackets([label.symbols for label in labels.labels], 2, root_in_any_plane=False)  # type: ignore[attr-defined]
    candidates = [[(h, rels[d]) for h, _ in heads] for d, heads in enumerate(found)]
    tree, repairs = build_tree(sentence, candidates, rels)
    return tree, repairs + unmatched


# ---------------------------------------------------------------------------
# Bit encodings (shared with the 4k-bit / 6k-bit graph encodings)
# ---------------------------------------------------------------------------


class Incoming(NamedTuple):
    plane: int
    from_left: bool
    outermost: bool


class BitStep(NamedTuple):
    """What one token's bits say, plane-indexed from 0."""

    left_deps: tuple[bool, ...]
    right_deps: tuple[bool, ...]
    incoming: tuple[Incoming, ...]


def outermost_flags(arcs: Sequence[Arc]) -> dict[Arc, bool]:
    """Whether each arc reaches its head's farthest dependent on that side."""
    farthest: dict[tuple[int, bool], int] = {}
    for arc in arcs:
        key = (arc.head, arc.rightward)
        current = farthest.get(key)
        if current is None or (arc.dep > current if arc.rightward else arc.dep < current):
            farthest[key] = arc.dep
    return {arc: farthest[(arc.head, arc.rightward)] == arc.dep for arc in arcs}


def dependent_sides(n: int, arcs: Sequence[Arc]) -> tuple[list[bool], list[bool]]:
    """(has left dependents, has right dependents), indexed by token (0 unused)."""
    left = [False] * (n + 1)
    right = [False] * (n + 1)
    for arc in arcs:
        if arc.rightward:
            right[arc.head] = True
        else:
            left[arc.head] = True
    return left, right


def decode_bit_stacks(steps: Sequence[BitStep], k: int, root_planes: Sequence[int]) -> tuple[list[list[tuple[int, int]]], int]:
    """Stack reconstruction shared by all bit encodings.

    Per plane: a left stack of (token, outermost) waiting for a head on the
    right, and a right stack of heads waiting for dependents, seeded with 0 in
    ``root_planes`` (0-based). At each token: left dependents pop the left
    stack down to the outermost one; a left head is the right-stack top
    (popped when outermost); a right head means pushing onto the left stack;
    right dependents push the token onto the right stack.
    """
    waiting_head: list[list[tuple[int, bool]]] = [[] for _ in range(k)]
    waiting_dep: list[list[int]] = [[0] if p in root_planes else [] for p in range(k)]
    found: list[list[tuple[int, int]]] = [[] for _ in steps]
    repairs = 0
    for i, step in enumerate(steps, start=1):
        for p in range(k):
            if not step.left_deps[p]:
                continue
            closed = False
            while waiting_head[p] and not closed:
                d, closed = waiting_head[p].pop()
                found[d - 1].append((i, p + 1))
            if not closed:
                repairs += 1
        for inc in step.incoming:
            p = inc.plane
            if inc.from_left:
                if waiting_dep[p]:
                    found[i - 1].append((waiting_dep[p][-1], p + 1))
                    if inc.outermost:
                        waiting_dep[p].pop()
                else:
                    repairs += 1
            else:
                waiting_head[p].append((i, inc.outermost))
        for p in range(k):
            if step.right_deps[p]:
                waiting_dep[p].append(i)
    repairs += sum(len(stack) for stack in waiting_head)
    repairs += sum(1 for stack in waiting_dep for h in stack if h != 0)
    return found, repairs


def _bits(*flags: bool) -> str:
    return "".join("1" if f else "0" for f in flags)


def _bit_candidates(found: list[list[tuple[int, int]]], rels: list[str]) -> list[list[tuple[int, str]]]:
    return [[(h, rels[d]) for h, _ in heads] for d, heads in enumerate(found)]


def encode_4bit(tree: DepStructure) -> LabelSequence:
    _require_tree(tree)
    tree, lifts = _projective_input(tree)
    arcs = tree.sorted_arcs()
    outer = outermost_flags(arcs)
    left, right = dependent_sides(tree.n, arcs)
    labels = tuple(
        BitsLabel(bits=_bits(arc.rightward, outer[arc], left[arc.dep], right[arc.dep]), rel=arc.rel) for arc in arcs
    )
    return LabelSequence(scheme=FOUR_BIT_SCHEME, labels=labels, lifted_arcs=lifts)


def _step4(label: BitsLabel) -> BitStep:
    return BitStep(
        left_deps=(label.bit(2),),
        right_deps=(label.bit(3),),
        incoming=(Incoming(0, label.bit(0), label.bit(1)),),
    )


def decode_4bit(labels: LabelSequence, sentence: Sentence) -> tuple[DepStructure, int]:
    _check_length(labels, sentence)
    rels = _rels(labels)
    found, stack_repairs = decode_bit_stacks([_step4(label) for label in labels.labels], 1, root_planes=(0,))  # type: ignore[arg-type]
    tree, repairs = build_tree(sentence, _bit_candidates(found, rels), rels)
    return _restored(tree), repairs + stack_repairs


def encode_7bit(tree: DepStructure) -> LabelSequence:
    _require_tree(tree)
    assignment = assign_planes(tree, 2, PlaneConstraint.SAME_DIRECTION_NON_CROSSING)
    planes = [assignment.plane(1), assignment.plane(2)]
    outer = {arc: flag for plane in planes for arc, flag in outermost_flags(plane).items()}
    sides = [dependent_sides(tree.n, plane) for plane in planes]
    incoming = {arc.dep: arc for arc in assignment.plane_of}
    labels = []
    for d, rel in enumerate(tree.rels(), start=1):
        arc = incoming.get(d)
        head_bits = (arc.rightward, assignment.plane_of[arc] == 2, outer[arc]) if arc else (False, False, False)
        labels.append(
            BitsLabel(
                bits=_bits(*head_bits, sides[0][0][d], sides[0][1][d], sides[1][0][d], sides[1][1][d]),
                rel=rel or "",
            )
        )
    if assignment.dropped:
        logger.warning(f"sentence {tree.sentence.id}: {len(assignment.dropped)} arcs beyond two planes dropped")
    return LabelSequence(scheme=SEVEN_BIT_SCHEME, labels=tuple(labels), dropped_arcs=len(assignment.dropped))


def _step7(label: BitsLabel) -> BitStep:
    return BitStep(
        left_deps=(label.bit(3), label.bit(5)),
        right_deps=(label.bit(4), label.bit(6)),
        incoming=(Incoming(1 if label.bit(1) else 0, label.bit(0), label.bit(2)),),
    )


def decode_7bit(labels: LabelSequence, sentence: Sentence) -> tuple[DepStructure, int]:
    _check_length(labels, sentence)
    rels = _rels(labels)
    found, stack_repairs = decode_bit_stacks([_step7(label) for label in labels.labels], 2, root_planes=(0,))  # type: ignore[arg-type]
    tree, repairs = build_tree(sentence, _bit_candidates(found, rels), rels)
    return tree, repairs + stack_repairs


# ---------------------------------------------------------------------------
# Hexatagging
# ---------------------------------------------------------------------------


def _bht_leaf(i: int) -> ConstNode:
    return ConstNode(label=_BHT_LEAF, children=(i,))


def build_bht(tree: DepStructure) -> ConstNode:
    """Binary head tree of a projective tree.

    Right dependents are attached first, closest first (constituent L: head in
    the left child), then left dependents, closest first (R: head on the right).
    """
    deps: list[list[int]] = [[] for _ in range(tree.n + 1)]
    root = 0
    for arc in tree.arcs:
        deps[arc.head].append(arc.dep)
        if arc.head == 0:
            root = arc.dep

    def build(h: int) -> ConstNode:
        node = _bht_leaf(h)
        for r in sorted(d for d in deps[h] if d > h):
            node = ConstNode(label=BHT_LEFT_HEADED, children=(node, build(r)))
        for left in sorted((d for d in deps[h] if d < h), reverse=True):
            node = ConstNode(label=BHT_RIGHT_HEADED, children=(build(left), node))
        return node

    return build(root)


def bht_heads(root: ConstNode, n: int) -> tuple[list[int | None], int]:
    """Heads (index 0 unused) read off a binary head tree; unknown constituents count as repairs."""
    heads: list[int | None] = [None] * (n + 1)
    repairs = 0

    def walk(node: ConstNode) -> int:
        nonlocal repairs
        if node.is_preterminal:
            return node.children[0]  # type: ignore[return-value]
        left, right = (walk(c) for c in node.children)  # type: ignore[arg-type]
        if node.label == BHT_RIGHT_HEADED:
            heads[left] = right
            return right
        if node.label != BHT_LEFT_HEADED:
            repairs += 1
        heads[right] = left
        return left

    heads[walk(root)] = 0
    return heads, repairs


def encode_hexa(tree: DepStructure) -> LabelSequence:
    _require_tree(tree)
    tree, lifts = _projective_input(tree)
    rels = [r or "" for r in tree.rels()]
    labels = []
    for (leaf, fence, constituent), rel in zip(tetratag(build_bht(tree)), rels):
        if fence is None:
            labels.append(HexaLabel(tag=leaf, fence=LAST_FENCE, rel=rel))
        else:
            labels.append(HexaLabel(tag=leaf, fence=fence, constituent=constituent or "", rel=rel))
    return LabelSequence(scheme=HEXA_SCHEME, labels=tuple(labels), lifted_arcs=lifts)


def decode_hexa(labels: LabelSequence, sentence: Sentence) -> tuple[DepStructure, int]:
    _check_length(labels, sentence)
    rels = _rels(labels)
    steps = [
        (label.tag, None if label.fence == LAST_FENCE else label.fence, label.constituent)  # type: ignore[attr-defined]
        for label in labels.labels
    ]
    bht, repairs = tetra_decode(steps, _bht_leaf, BHT_LEFT_HEADED)
    heads, unknown = bht_heads(bht, sentence.n)
    candidates = [[(h, rels[d - 1])] if h is not None else [] for d, h in enumerate(heads[1:], start=1)]
    tree, fixes = build_tree(sentence, candidates, rels)
    return _restored(tree), repairs + unknown + fixes
