"""Pseudo-projective transformation, 'head' variant.

An arc h -> d is non-projective when a token strictly between h and d is not
dominated by h. While such arcs exist, the shortest one (leftmost on ties) is
lifted to h's own head. On its first lift the dependent's relation becomes
``r1|r2``: its own relation and the incoming relation of the original head.

``deprojectivize`` walks lifted arcs top-down and re-attaches each to the
first node (breadth-first, left to right) below its current head, outside
its own subtree, whose relation is ``r2``. The transformation is lossy;
``recovery_rate`` measures how many arcs survive the round trip.
"""

from collections import deque
from collections.abc import Iterable

from structlabel.config.logger_config import logger
from structlabel.models.core_models import DepStructure

LIFT_SEPARATOR = "|"
ESCAPE = "%"
ESCAPED_PERCENT = "%25"
ESCAPED_SEPARATOR = "%7C"


def base_relation(rel: str) -> str:
    return rel.split(LIFT_SEPARATOR, 1)[0]


def escape_relations(tree: DepStructure) -> DepStructure:
    """Percent-escape ``%`` and ``|`` in every relation so lift markers stay unambiguous."""
    rels = [r or "" for r in tree.rels()]
    if not any(ESCAPE in r or LIFT_SEPARATOR in r for r in rels):
        return tree
    escaped = [r.replace(ESCAPE, ESCAPED_PERCENT).replace(LIFT_SEPARATOR, ESCAPED_SEPARATOR) for r in rels]
    return DepStructure.from_heads(tree.sentence, [h if h is not None else 0 for h in tree.heads()], escaped)


def unescape_relations(tree: DepStructure) -> DepStructure:
    rels = [r or "" for r in tree.rels()]
    if not any(ESCAPE in r for r in rels):
        return tree
    plain = [r.replace(ESCAPED_SEPARATOR, LIFT_SEPARATOR).replace(ESCAPED_PERCENT, ESCAPE) for r in rels]
    return DepStructure.from_heads(tree.sentence, [h if h is not None else 0 for h in tree.heads()], plain)


def _dominates(heads: list[int], h: int, j: int) -> bool:
    if h == 0:
        return True
    steps = 0
    while j != 0 and steps < len(heads):
        if j == h:
            return True
        j = heads[j]
        steps += 1
    return False


def _shortest_nonprojective(heads: list[int]) -> int | None:
    best: tuple[int, int, int] | None = None
    for d in range(1, len(heads)):
        h = heads[d]
        lo, hi = min(h, d), max(h, d)
        if best is not None and hi - lo > best[0]:
            continue
        if any(not _dominates(heads, h, j) for j in range(lo + 1, hi)):
            key = (hi - lo, lo, d)
            if best is None or key < best:
                best = key
    return None if best is None else best[2]


def pseudo_projectivize(tree: DepStructure) -> tuple[DepStructure, int]:
    """Projective version of ``tree`` plus the number of lift steps."""
    heads: list[int] = [0] + [h if h is not None else 0 for h in tree.heads()]
    rels: list[str] = [""] + [r or "" for r in tree.rels()]
    lifted: set[int] = set()
    lifts = 0
    while (d := _shortest_nonprojective(heads)) is not None:
        h = heads[d]
        if d not in lifted:
            rels[d] = f"{rels[d]}{LIFT_SEPARATOR}{base_relation(rels[h])}"
            lifted.add(d)
        heads[d] = heads[h]
        lifts += 1
    if lifts:
        logger.debug(f"sentence {tree.sentence.id}: {lifts} pseudo-projective lifts over {len(lifted)} arcs")
    return DepStructure.from_heads(tree.sentence, heads[1:], rels[1:]), lifts


def _children(heads: list[int]) -> list[list[int]]:
    children: list[list[int]] = [[] for _ in heads]
    for d in range(1, len(heads)):
        children[heads[d]].append(d)
    return children


def _bfs(children: list[list[int]], start: int) -> list[int]:
    order = []
    queue = deque(children[start])
    while queue:
        v = queue.popleft()
        order.append(v)
        queue.extend(children[v])
    return order


def _reattachment_target(heads: list[int], rels: list[str], h: int, d: int, wanted: str) -> int | None:
    children = _children(heads)
    queue = deque(c for c in children[h] if c != d)
    while queue:
        v = queue.popleft()
        if base_relation(rels[v]) == wanted:
            return v
        queue.extend(children[v])
    return None


def deprojectivize(tree: DepStructure) -> DepStructure:
    heads: list[int] = [0] + [h if h is not None else 0 for h in tree.heads()]
    rels: list[str] = [""] + [r or "" for r in tree.rels()]
    pending = {d for d in range(1, len(heads)) if LIFT_SEPARATOR in rels[d]}
    if not pending:
        return tree
    while pending:
        d = next((v for v in _bfs(_children(heads), 0) if v in pending), min(pending))
        pending.discard(d)
        own, _, wanted = rels[d].partition(LIFT_SEPARATOR)
        target = _reattachment_target(heads, rels, heads[d], d, base_relation(wanted))
        rels[d] = own
        if target is not None:
            heads[d] = target
    return DepStructure.from_heads(tree.sentence, heads[1:], rels[1:])


def recovery_rate(trees: Iterable[DepStructure]) -> float:
    """Fraction of arcs exactly restored by deprojectivize after pseudo_projectivize."""
    total = recovered = 0
    for tree in trees:
        restored = deprojectivize(pseudo_projectivize(tree)[0])
        total += len(tree.arcs)
        recovered += len(tree.arcs & restored.arcs)
    return recovered / total if total else 1.0
