"""Domain errors.

Everything derives from ``StructLabelError`` (itself a ``ValueError``), so
callers that only care about "bad input" can catch one type, and the CLI
maps the whole family to a usage-error exit code.

Decoders never raise on label *content*: ill-formed label sequences are
repaired and the repairs counted. These errors are for input that cannot be
interpreted at all (unparsable files, wrong lengths, unknown schemes, bad
kernel arguments).
"""


class StructLabelError(ValueError):
    """Base class for all toolkit errors."""


class TreebankParseError(StructLabelError):
    """A treebank file could not be parsed; ``line``/``offset`` locate the problem."""

    def __init__(self, message: str, line: int | None = None, offset: int | None = None):
        self.line = line
        self.offset = offset
        where = []
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"offset {offset}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class StructuralError(TreebankParseError):
    """Well-formed lines that do not add up to a structure (e.g. SDP argument columns)."""


class LabelLengthError(StructLabelError):
    def __init__(self, sentence_id: str, expected: int, actual: int):
        self.sentence_id = sentence_id
        super().__init__(f"sentence {sentence_id!r}: expected {expected} labels, got {actual}")


class LabelFormatError(StructLabelError):
    """A rendered label string does not parse under its scheme."""


class UnknownSchemeError(StructLabelError):
    pass


class UnknownFormatError(StructLabelError):
    pass


class KernelShapeError(StructLabelError):
    pass


class KernelDomainError(StructLabelError):
    """Numeric argument outside its allowed range (bounds, ids, probabilities)."""
