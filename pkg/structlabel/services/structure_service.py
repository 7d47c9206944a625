"""Validity, projectivity and plane analysis shared by every codec.

Plane assignment is greedy: arcs are visited by (dependent, head) and each
goes to the lowest plane where the scheme's constraint still holds. Arcs that
fit nowhere are returned in ``PlaneAssignment.dropped``.

``build_tree`` is the single repair routine behind all tree decoders. It turns
per-token candidate heads into a well-formed tree and counts every fix:

1. the first valid candidate of each token wins, the rest are discarded;
2. only the first root arc survives, later root tokens become headless;
3. a headless token attaches to 0 if no root exists yet, else to the
   preceding token (the first token to the root token);
4. each remaining cycle is broken by attaching its smallest token to the
   root token (or to 0 when there is none).
"""

from collections import deque
from collections.abc import Sequence

from structlabel.config.logger_config import logger
from structlabel.models.core_models import (
    Arc,
    DepStructure,
    PlaneAssignment,
    PlaneConstraint,
    Sentence,
    StructureKind,
    Validity,
)
from structlabel.utils.exceptions import StructLabelError


def validate(structure: DepStructure) -> Validity:
    n = structure.n
    incoming = [0] * (n + 1)
    children: list[list[int]] = [[] for _ in range(n + 1)]
    for arc in structure.arcs:
        incoming[arc.dep] += 1
        children[arc.head].append(arc.dep)

    single_headed = all(incoming[d] == 1 for d in range(1, n + 1))
    rooted = len(children[0]) == 1

    # Kahn's algorithm over the whole arc set
    indegree = incoming[:]
    queue = deque(v for v in range(n + 1) if indegree[v] == 0)
    seen = 0
    while queue:
        v = queue.popleft()
        seen += 1
        for c in children[v]:
            indegree[c] -= 1
            if indegree[c] == 0:
                queue.append(c)
    acyclic = seen == n + 1

    reached = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for c in children[v]:
            if c not in reached:
                reached.add(c)
                stack.append(c)
    connected = len(reached) == n + 1

    return Validity(single_headed=single_headed, acyclic=acyclic, connected=connected, rooted=rooted)


def _require_tree(structure: DepStructure) -> None:
    if structure.kind is not StructureKind.TREE:
        raise StructLabelError(f"sentence {structure.sentence.id!r}: expected a dependency tree, got a graph")


def is_projective(tree: DepStructure) -> bool:
    _require_tree(tree)
    arcs = sorted(tree.arcs, key=lambda a: (a.left, a.right))
    for i, a in enumerate(arcs):
        for b in arcs[i + 1 :]:
            if b.left >= a.right:
                break
            if a.crosses(b):
                return False
    return True


def _fits(arc: Arc, plane: list[Arc], constraint: PlaneConstraint) -> bool:
    for other in plane:
        if constraint is PlaneConstraint.NON_CROSSING:
            if arc.crosses(other):
                return False
            continue
        if arc.rightward == other.rightward and arc.crosses(other):
            return False
        if constraint is PlaneConstraint.FOUR_K_BIT and arc.dep == other.dep:
            return False
        if constraint is PlaneConstraint.SIX_K_BIT and arc.dep == other.dep and arc.rightward == other.rightward:
            return False
    return True


def assign_planes(structure: DepStructure, k: int, constraint: PlaneConstraint) -> PlaneAssignment:
    if k < 1:
        raise StructLabelError(f"plane count must be >= 1, got {k}")
    planes: list[list[Arc]] = [[] for _ in range(k)]
    plane_of: dict[Arc, int] = {}
    dropped: list[Arc] = []
    for arc in structure.sorted_arcs():
        for p, plane in enumerate(planes, start=1):
            if _fits(arc, plane, constraint):
                plane.append(arc)
                plane_of[arc] = p
                break
        else:
            dropped.append(arc)
    if dropped:
        logger.debug(f"sentence {structure.sentence.id}: {len(dropped)} arcs fit none of {k} planes ({constraint})")
    return PlaneAssignment(k=k, constraint=constraint, plane_of=plane_of, dropped=tuple(dropped))


def _find_cycle_nodes(heads: list[int | None]) -> list[int] | None:
    """Tokens of one cycle (sorted), or None when every token reaches 0."""
    n = len(heads) - 1
    state = [0] * (n + 1)  # 0 unvisited, 1 on current path, 2 reaches root
    state[0] = 2
    for start in range(1, n + 1):
        path: list[int] = []
        v = start
        while state[v] == 0:
            state[v] = 1
            path.append(v)
            v = heads[v]  # type: ignore[assignment]
        if state[v] == 1:
            return sorted(path[path.index(v) :])
        for u in path:
            state[u] = 2
    return None


def build_tree(sentence: Sentence, candidates: Sequence[Sequence[tuple[int, str]]], rels: Sequence[str] | None = None) -> tuple[DepStructure, int]:
    """Repair per-token candidate heads into a tree.

    ``candidates[i]`` lists (head, rel) proposals for token ``i + 1`` in
    decoding order; ``rels`` gives the relation used for headless tokens.
    Returns the tree and the number of repairs applied.
    """
    n = sentence.n
    repairs = 0
    heads: list[int | None] = [None] * (n + 1)
    labels: list[str] = [""] * (n + 1)
    if rels is not None:
        labels[1:] = list(rels)

    for d in range(1, n + 1):
        for h, rel in candidates[d - 1]:
            if heads[d] is None and 0 <= h <= n and h != d:
                heads[d] = h
                labels[d] = rel
            else:
                repairs += 1

    root_token: int | None = None
    for d in range(1, n + 1):
        if heads[d] == 0:
            if root_token is None:
                root_token = d
            else:
                heads[d] = None
                repairs += 1

    for d in range(1, n + 1):
        if heads[d] is None:
            repairs += 1
            if root_token is None:
                heads[d] = 0
                root_token = d
            else:
                heads[d] = d - 1 if d > 1 else root_token

    while (cycle := _find_cycle_nodes(heads)) is not None:
        repairs += 1
        v = cycle[0]
        if root_token is None:
            heads[v] = 0
            root_token = v
        else:
            heads[v] = root_token

    if repairs:
        logger.debug(f"sentence {sentence.id}: {repairs} tree repairs")
    tree = DepStructure.from_heads(sentence, [h for h in heads[1:]], labels[1:])  # type: ignore[misc]
    return tree, repairs
