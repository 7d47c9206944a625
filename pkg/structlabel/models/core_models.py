from collections.abc import Iterable, Sequence
from enum import StrEnum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Token(BaseModel):
    """
    One syntactic word. Optional columns hold None when the source has no value.
    """

    form: str
    lemma: str | None = None
    upos: str | None = None
    xpos: str | None = None
    feats: str | None = None
    misc: str | None = None

    model_config = ConfigDict(frozen=True)


class Sentence(BaseModel):
    """
    Token sequence. Positions are 1-based; 0 is the artificial root.
    """

    id: str
    tokens: tuple[Token, ...]

    model_config = ConfigDict(frozen=True)

    @field_validator("tokens")
    @classmethod
    def _non_empty(cls, tokens: tuple[Token, ...]) -> tuple[Token, ...]:
        if not tokens:
            raise ValueError("a sentence needs at least one token")
        return tokens

    @classmethod
    def from_forms(cls, forms: Iterable[str], id: str = "s1", xpos: Sequence[str] | None = None) -> "Sentence":
        forms = list(forms)
        tags: Sequence[str | None] = xpos if xpos is not None else [None] * len(forms)
        return cls(id=id, tokens=tuple(Token(form=f, xpos=t) for f, t in zip(forms, tags, strict=True)))

    @property
    def n(self) -> int:
        return len(self.tokens)

    @property
    def forms(self) -> list[str]:
        return [t.form for t in self.tokens]

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]

    def with_xpos(self, tags: Sequence[str]) -> "Sentence":
        if len(tags) != self.n:
            raise ValueError(f"sentence {self.id!r}: {len(tags)} tags for {self.n} tokens")
        return self.model_copy(update={"tokens": tuple(t.model_copy(update={"xpos": tag}) for t, tag in zip(self.tokens, tags))})


class Arc(BaseModel):
    """
    Directed labelled arc ``head -> dep``.
    """

    head: int = Field(ge=0)
    dep: int = Field(ge=1)
    rel: str = ""

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _no_self_loop(self) -> "Arc":
        if self.head == self.dep:
            raise ValueError(f"self-loop on token {self.dep}")
        return self

    @property
    def left(self) -> int:
        return min(self.head, self.dep)

    @property
    def right(self) -> int:
        return max(self.head, self.dep)

    @property
    def rightward(self) -> bool:
        """Head precedes the dependent (arcs from the root are rightward)."""
        return self.head < self.dep

    def crosses(self, other: "Arc") -> bool:
        """Strict crossing; arcs sharing an endpoint never cross."""
        l1, r1, l2, r2 = self.left, self.right, other.left, other.right
        return l1 < l2 < r1 < r2 or l2 < l1 < r2 < r1

    def sort_key(self) -> tuple[int, int, str]:
        return (self.dep, self.head, self.rel)


class StructureKind(StrEnum):
    TREE = "tree"
    GRAPH = "graph"


class DepStructure(BaseModel):
    """
    Arc set over a sentence.

    ``kind`` records what the structure claims to be; use
    ``structure_service.validate`` to check tree well-formedness.
    """

    sentence: Sentence
    arcs: frozenset[Arc]
    kind: StructureKind = StructureKind.TREE

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _arcs_in_range(self) -> "DepStructure":
        n = self.sentence.n
        for arc in self.arcs:
            if arc.head > n or arc.dep > n:
                raise ValueError(f"arc {arc.head}->{arc.dep} outside sentence of {n} tokens")
        return self

    @classmethod
    def from_heads(cls, sentence: Sentence, heads: Sequence[int], rels: Sequence[str] | None = None) -> "DepStructure":
        """Build a tree from 0-indexed lists: ``heads[i]`` governs token ``i + 1``."""
        rels = rels if rels is not None else [""] * len(heads)
        arcs = frozenset(Arc(head=h, dep=d, rel=r) for d, (h, r) in enumerate(zip(heads, rels, strict=True), start=1))
        return cls(sentence=sentence, arcs=arcs, kind=StructureKind.TREE)

    @property
    def n(self) -> int:
        return self.sentence.n

    def sorted_arcs(self) -> list[Arc]:
        return sorted(self.arcs, key=Arc.sort_key)

    def heads(self) -> list[int | None]:
        """``heads()[d - 1]`` is the first head of ``d`` (None when headless)."""
        out: list[int | None] = [None] * self.n
        for arc in self.sorted_arcs():
            if out[arc.dep - 1] is None:
                out[arc.dep - 1] = arc.head
        return out

    def rels(self) -> list[str | None]:
        out: list[str | None] = [None] * self.n
        for arc in self.sorted_arcs():
            if out[arc.dep - 1] is None:
                out[arc.dep - 1] = arc.rel
        return out

    def incoming(self, dep: int) -> list[Arc]:
        return sorted((a for a in self.arcs if a.dep == dep), key=lambda a: (a.head, a.rel))

    def children(self, head: int) -> list[int]:
        return sorted({a.dep for a in self.arcs if a.head == head})

    def with_arcs(self, arcs: Iterable[Arc]) -> "DepStructure":
        return DepStructure(sentence=self.sentence, arcs=frozenset(arcs), kind=self.kind)


class Validity(BaseModel):
    """
    Tree well-formedness flags computed by ``structure_service.validate``.
    """

    single_headed: bool
    acyclic: bool
    connected: bool
    rooted: bool

    model_config = ConfigDict(frozen=True)

    def well_formed(self) -> bool:
        return self.single_headed and self.acyclic and self.connected and self.rooted


class PlaneConstraint(StrEnum):
    SAME_DIRECTION_NON_CROSSING = "same-direction-non-crossing"
    NON_CROSSING = "non-crossing"
    FOUR_K_BIT = "4k-bit"
    SIX_K_BIT = "6k-bit"


class PlaneAssignment(BaseModel):
    """
    Greedy distribution of arcs into ``k`` planes. ``dropped`` holds the arcs
    that fit no plane, in assignment order.
    """

    k: int = Field(ge=1)
    constraint: PlaneConstraint
    plane_of: dict[Arc, int]
    dropped: tuple[Arc, ...] = ()

    model_config = ConfigDict(frozen=True)

    def plane(self, p: int) -> list[Arc]:
        return sorted((a for a, q in self.plane_of.items() if q == p), key=Arc.sort_key)

    @property
    def planes_used(self) -> int:
        return max(self.plane_of.values(), default=0)
