from collections.abc import Iterator

from pydantic import BaseModel, ConfigDict, model_validator

from structlabel.models.core_models import Sentence

UNARY_DELIMITER = ":"


class ConstNode(BaseModel):
    """
    Constituent. Children are nodes or leaf token indices; a pre-terminal is
    a node whose only child is a token index.
    """

    label: str
    children: tuple["ConstNode | int", ...]

    model_config = ConfigDict(frozen=True)

    @property
    def is_preterminal(self) -> bool:
        return len(self.children) == 1 and isinstance(self.children[0], int)

    def leaves(self) -> list[int]:
        out: list[int] = []
        for child in self.children:
            if isinstance(child, int):
                out.append(child)
            else:
                out.extend(child.leaves())
        return out

    def iter_nodes(self) -> Iterator["ConstNode"]:
        """Pre-order traversal over nodes (pre-terminals included)."""
        yield self
        for child in self.children:
            if isinstance(child, ConstNode):
                yield from child.iter_nodes()

    def preterminals(self) -> list["ConstNode"]:
        return [node for node in self.iter_nodes() if node.is_preterminal]


ConstNode.model_rebuild()


class ConstTree(BaseModel):
    """
    Rooted ordered constituency tree over tokens 1..n.

    ``collapsed`` marks the unary-collapsed form, where no node has exactly
    one non-terminal child (leaf-level chains are folded into the pre-terminal
    label, e.g. ``NP:PRP``).
    """

    root: ConstNode
    collapsed: bool = False

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_leaves(self) -> "ConstTree":
        leaves = self.root.leaves()
        if leaves != list(range(1, len(leaves) + 1)):
            raise ValueError(f"leaves must be 1..n in order, got {leaves}")
        if any(not node.is_preterminal and any(isinstance(c, int) for c in node.children) for node in self.root.iter_nodes()):
            raise ValueError("token indices may only appear under pre-terminals")
        if self.collapsed:
            for node in self.root.iter_nodes():
                if len(node.children) == 1 and isinstance(node.children[0], ConstNode):
                    raise ValueError(f"collapsed tree keeps a unary chain at {node.label!r}")
        return self

    @property
    def n(self) -> int:
        return len(self.root.leaves())

    def preterminal_labels(self) -> list[str]:
        return [node.label for node in self.root.preterminals()]

    def tagged_sentence(self, sentence: Sentence) -> Sentence:
        """``sentence`` with XPOS replaced by this tree's pre-terminal labels."""
        return sentence.with_xpos(self.preterminal_labels())
