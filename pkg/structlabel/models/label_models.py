"""Per-token label types and their canonical string renderings.

Multi-component labels join their components with ``@`` (``0100@nsubj``,
``2@NP``, ``↗@⇗NP``, ``↗@⇖R@nsubj``). Every ``parse`` is the exact inverse of
``render`` and raises ``LabelFormatError`` on anything else.
"""

import re
from typing import Self

from pydantic import BaseModel, ConfigDict, ValidationError, field_validator

from structlabel.utils.exceptions import LabelFormatError

SEP = "@"

# Tetratagging symbols
LEFT_LEAF = "↗"
RIGHT_LEAF = "↖"
LEFT_FENCE = "⇗"
RIGHT_FENCE = "⇖"
LAST_FENCE = "Ω"

_BRACKETS = re.compile(r"^(?:[<>/\\]\**)*$")


class Label(BaseModel):
    """Base class: one label, rendered as a single TSV cell."""

    model_config = ConfigDict(frozen=True)

    def render(self) -> str:
        raise NotImplementedError

    @property
    def structural(self) -> str:
        """The label without its relation / constituent part (bit pattern, bracket string, ...)."""
        raise NotImplementedError

    @classmethod
    def parse(cls, text: str) -> Self:
        raise NotImplementedError

    @classmethod
    def _build(cls, text: str, **fields) -> Self:
        try:
            return cls(**fields)
        except ValidationError as e:
            raise LabelFormatError(f"invalid {cls.__name__} {text!r}: {e.errors()[0]['msg']}")


def _split_int(text: str) -> tuple[int, str]:
    head, sep, rest = text.partition(SEP)
    if not sep:
        raise LabelFormatError(f"missing {SEP!r} in label {text!r}")
    try:
        return int(head), rest
    except ValueError:
        raise LabelFormatError(f"non-integer component in label {text!r}")


class AbsoluteConstLabel(Label):
    """(p, c): constituents shared by w_i and w_i+1, and the lowest shared one."""

    p: int
    c: str

    @property
    def structural(self) -> str:
        return str(self.p)

    def render(self) -> str:
        return f"{self.p}{SEP}{self.c}"

    @classmethod
    def parse(cls, text: str) -> Self:
        p, c = _split_int(text)
        return cls._build(text, p=p, c=c)


class RelativeConstLabel(Label):
    """(p_i - p_i-1, c)."""

    dp: int
    c: str

    @property
    def structural(self) -> str:
        return str(self.dp)

    def render(self) -> str:
        return f"{self.dp}{SEP}{self.c}"

    @classmethod
    def parse(cls, text: str) -> Self:
        dp, c = _split_int(text)
        return cls._build(text, dp=dp, c=c)


class TetraLabel(Label):
    """Leaf tag plus, except for the last token, the fencepost tag and constituent."""

    tag: str
    fence: str | None = None
    c: str | None = None

    @field_validator("tag")
    @classmethod
    def _leaf_tag(cls, tag: str) -> str:
        if tag not in (LEFT_LEAF, RIGHT_LEAF):
            raise ValueError(f"unknown leaf tag {tag!r}")
        return tag

    @field_validator("fence")
    @classmethod
    def _fence_tag(cls, fence: str | None) -> str | None:
        if fence is not None and fence not in (LEFT_FENCE, RIGHT_FENCE):
            raise ValueError(f"unknown fence tag {fence!r}")
        return fence

    @property
    def structural(self) -> str:
        return self.tag + (self.fence or "")

    def render(self) -> str:
        if self.fence is None:
            return self.tag
        return f"{self.tag}{SEP}{self.fence}{self.c or ''}"

    @classmethod
    def parse(cls, text: str) -> Self:
        tag, sep, rest = text.partition(SEP)
        if not sep:
            return cls._build(text, tag=tag)
        if not rest:
            raise LabelFormatError(f"empty fence in label {text!r}")
        return cls._build(text, tag=tag, fence=rest[0], c=rest[1:])


class AbsoluteDepLabel(Label):
    head: int
    rel: str

    @property
    def structural(self) -> str:
        return str(self.head)

    def render(self) -> str:
        return f"{self.head}{SEP}{self.rel}"

    @classmethod
    def parse(cls, text: str) -> Self:
        head, rel = _split_int(text)
        return cls._build(text, head=head, rel=rel)


class BracketLabel(Label):
    """Bracket string (``'*'`` per extra plane) plus the token's relation."""

    symbols: str
    rel: str

    @field_validator("symbols")
    @classmethod
    def _bracket_alphabet(cls, symbols: str) -> str:
        if not _BRACKETS.match(symbols):
            raise ValueError(f"not a bracket string: {symbols!r}")
        return symbols

    @property
    def structural(self) -> str:
        return self.symbols

    def render(self) -> str:
        return f"{self.symbols}{SEP}{self.rel}"

    @classmethod
    def parse(cls, text: str) -> Self:
        symbols, sep, rel = text.partition(SEP)
        if not sep:
            raise LabelFormatError(f"missing {SEP!r} in label {text!r}")
        return cls._build(text, symbols=symbols, rel=rel)


class BitsLabel(Label):
    """Fixed-width bit string (4-bit or 7-bit tree encodings)."""

    bits: str
    rel: str

    @field_validator("bits")
    @classmethod
    def _binary(cls, bits: str) -> str:
        if not bits or set(bits) - {"0", "1"}:
            raise ValueError(f"not a bit string: {bits!r}")
        return bits

    def bit(self, i: int) -> bool:
        return self.bits[i] == "1" if i < len(self.bits) else False

    @property
    def structural(self) -> str:
        return self.bits

    def render(self) -> str:
        return f"{self.bits}{SEP}{self.rel}"

    @classmethod
    def parse(cls, text: str) -> Self:
        bits, sep, rel = text.partition(SEP)
        if not sep:
            raise LabelFormatError(f"missing {SEP!r} in label {text!r}")
        return cls._build(text, bits=bits, rel=rel)


class HexaLabel(Label):
    """(leaf tag, fence + BHT constituent, relation); last token uses fence ``Ω``."""

    tag: str
    fence: str
    constituent: str = ""
    rel: str

    @field_validator("tag")
    @classmethod
    def _leaf_tag(cls, tag: str) -> str:
        if tag not in (LEFT_LEAF, RIGHT_LEAF):
            raise ValueError(f"unknown leaf tag {tag!r}")
        return tag

    @field_validator("fence")
    @classmethod
    def _fence_tag(cls, fence: str) -> str:
        if fence not in (LEFT_FENCE, RIGHT_FENCE, LAST_FENCE):
            raise ValueError(f"unknown fence tag {fence!r}")
        return fence

    @property
    def structural(self) -> str:
        return f"{self.tag}{self.fence}{self.constituent}"

    def render(self) -> str:
        return f"{self.tag}{SEP}{self.fence}{self.constituent}{SEP}{self.rel}"

    @classmethod
    def parse(cls, text: str) -> Self:
        parts = text.split(SEP, 2)
        if len(parts) != 3 or not parts[1]:
            raise LabelFormatError(f"hexa label needs three components: {text!r}")
        tag, fence, rel = parts
        return cls._build(text, tag=tag, fence=fence[0], constituent=fence[1:], rel=rel)


class GraphLabel(Label):
    """
    ``x@rho``: the structural component and the incoming relations ordered by
    (head position, plane). ``x`` alone when there are no relations.
    """

    x: str
    rels: tuple[str, ...] = ()

    @property
    def structural(self) -> str:
        return self.x

    def render(self) -> str:
        if not self.rels:
            return self.x
        return f"{self.x}{SEP}{'|'.join(self.rels)}"

    @classmethod
    def parse(cls, text: str) -> Self:
        x, sep, rho = text.partition(SEP)
        rels = tuple(rho.split("|")) if sep else ()
        return cls._build(text, x=x, rels=rels)


class LabelSequence(BaseModel):
    """
    Labels of one sentence under ``scheme``. Constituency schemes also carry
    the (collapsed) pre-terminal tags their decoders read back.

    ``dropped_arcs`` / ``lifted_arcs`` report what the encoder could not
    represent directly (arcs beyond the plane budget, pseudo-projective lifts).
    """

    scheme: str
    labels: tuple[Label, ...]
    tags: tuple[str, ...] | None = None
    dropped_arcs: int = 0
    lifted_arcs: int = 0

    model_config = ConfigDict(frozen=True)

    def __len__(self) -> int:
        return len(self.labels)

    def render(self) -> list[str]:
        return [label.render() for label in self.labels]
