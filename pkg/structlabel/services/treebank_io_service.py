"""Treebank readers and writers, plus the label TSV format.

Readers take any iterable of lines (an open file, ``io.StringIO``, a list)
and return a ``CorpusDocument``; writers return the text. Parse errors carry
the 1-based line number (CoNLL-U, SDP, labels) or character offset (PTB).

Label TSV::

    # scheme=dep-4b
    # id=s1
    The	DT	0100@det
    ...
    <blank line>

Constituency absolute/relative files hold n rows per sentence; the last one
carries the ``<end>`` sentinel.
"""

import re
from collections.abc import Iterable, Iterator, Sequence

from pydantic import ValidationError

from structlabel.config.logger_config import get_logger
from structlabel.models.const_models import ConstNode, ConstTree
from structlabel.models.core_models import Arc, DepStructure, Sentence, StructureKind, Token
from structlabel.models.corpus_schemas import (
    CorpusDocument,
    CorpusEntry,
    LabelFile,
    LabelFileSentence,
    LabelRow,
    SourceFormat,
)
from structlabel.models.label_models import LabelSequence
from structlabel.models.run_schemas import SchemeFamily
from structlabel.services.codec_registry import registry
from structlabel.services.const_codec_service import ABSOLUTE_SCHEME, RELATIVE_SCHEME, expand_unary
from structlabel.utils.exceptions import LabelLengthError, StructuralError, TreebankParseError, UnknownFormatError

logger = get_logger("TreebankIO")

EMPTY_FIELD = "_"
END_LABEL = "<end>"
TOP_REL = "top"
SDP_HEADER = "#SDP 2015"

_PTB_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def _field(value: str) -> str | None:
    return None if value == EMPTY_FIELD else value


def _show(value: str | None) -> str:
    return EMPTY_FIELD if value is None or value == "" else value


def _blocks(lines: Iterable[str]) -> Iterator[list[tuple[int, str]]]:
    """Blank-line separated blocks of (line number, line) pairs."""
    block: list[tuple[int, str]] = []
    for number, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if line.strip():
            block.append((number, line))
        elif block:
            yield block
            block = []
    if block:
        yield block


# ---------------------------------------------------------------------------
# CoNLL-U
# ---------------------------------------------------------------------------


def _conllu_heads(value: str, number: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise TreebankParseError(f"HEAD must be an integer, got {value!r}", line=number)


def _enhanced_arcs(deps: str, dep: int, number: int) -> list[Arc]:
    arcs = []
    if deps == EMPTY_FIELD:
        return arcs
    for item in deps.split("|"):
        head, sep, rel = item.partition(":")
        if not sep:
            raise TreebankParseError(f"DEPS entry {item!r} is not head:relation", line=number)
        if "." in head:
            # arcs from empty nodes are dropped with the nodes themselves
            continue
        arcs.append(Arc(head=_conllu_heads(head, number), dep=dep, rel=rel))
    return arcs


def read_conllu(lines: Iterable[str], enhanced: bool = False) -> CorpusDocument:
    """Basic trees, or with ``enhanced=True`` the DEPS graphs.

    Multiword token ranges and empty nodes are skipped.
    """
    entries = []
    for index, block in enumerate(_blocks(lines), start=1):
        sentence_id = f"s{index}"
        tokens: list[Token] = []
        arcs: list[Arc] = []
        for number, line in block:
            if line.startswith("#"):
                key, sep, value = line[1:].partition("=")
                if sep and key.strip() == "sent_id":
                    sentence_id = value.strip()
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise TreebankParseError(f"expected 10 tab-separated columns, got {len(cols)}", line=number)
            if "-" in cols[0] or "." in cols[0]:
                continue
            if not cols[0].isdigit() or int(cols[0]) != len(tokens) + 1:
                raise TreebankParseError(f"token id {cols[0]!r} out of sequence", line=number)
            d = int(cols[0])
            tokens.append(
                Token(
                    form=cols[1],
                    lemma=_field(cols[2]),
                    upos=_field(cols[3]),
                    xpos=_field(cols[4]),
                    feats=_field(cols[5]),
                    misc=_field(cols[9]),
                )
            )
            try:
                if enhanced:
                    arcs.extend(_enhanced_arcs(cols[8], d, number))
                else:
                    arcs.append(Arc(head=_conllu_heads(cols[6], number), dep=d, rel=cols[7]))
            except ValidationError as e:
                raise TreebankParseError(f"invalid arc: {e.errors()[0]['msg']}", line=number)
        if not tokens:
            continue
        sentence = Sentence(id=sentence_id, tokens=tuple(tokens))
        try:
            structure = DepStructure(
                sentence=sentence,
                arcs=frozenset(arcs),
                kind=StructureKind.GRAPH if enhanced else StructureKind.TREE,
            )
        except ValidationError as e:
            raise TreebankParseError(f"sentence {sentence_id!r}: {e.errors()[0]['msg']}", line=block[0][0])
        entries.append(CorpusEntry(sentence=sentence, dep=structure))
    fmt = SourceFormat.CONLLU_ENHANCED_GRAPH if enhanced else SourceFormat.CONLLU_TREE
    logger.debug(f"read {len(entries)} sentences ({fmt})")
    return CorpusDocument(entries=tuple(entries), source_format=fmt)


def write_conllu(document: CorpusDocument) -> str:
    out = []
    for entry in document.entries:
        structure = entry.dep
        assert structure is not None
        out.append(f"# sent_id = {entry.sentence.id}")
        heads, rels = structure.heads(), structure.rels()
        for d, token in enumerate(entry.sentence.tokens, start=1):
            if structure.kind is StructureKind.GRAPH:
                head_col = rel_col = EMPTY_FIELD
                deps = "|".join(f"{a.head}:{a.rel}" for a in structure.incoming(d)) or EMPTY_FIELD
            else:
                head_col = EMPTY_FIELD if heads[d - 1] is None else str(heads[d - 1])
                rel_col = _show(rels[d - 1])
                deps = EMPTY_FIELD
            cols = [
                str(d),
                token.form,
                _show(token.lemma),
                _show(token.upos),
                _show(token.xpos),
                _show(token.feats),
                head_col,
                rel_col,
                deps,
                _show(token.misc),
            ]
            out.append("\t".join(cols))
        out.append("")
    return "\n".join(out) + ("\n" if out else "")


# ---------------------------------------------------------------------------
# PTB brackets
# ---------------------------------------------------------------------------


class _BracketParser:
    """Recursive descent over ``(``, ``)`` and atoms of one or more trees."""

    def __init__(self, text: str):
        self.tokens = [(m.group(), m.start()) for m in _PTB_TOKEN.finditer(text)]
        self.pos = 0

    def peek(self) -> tuple[str, int] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self, expected: str | None = None, open_at: int | None = None) -> tuple[str, int]:
        """Next token; at end of input the error points at ``open_at``, the unclosed ``(``."""
        token = self.peek()
        if token is None:
            raise TreebankParseError("unexpected end of input, unbalanced brackets", offset=open_at)
        if expected is not None and token[0] != expected:
            raise TreebankParseError(f"expected {expected!r}, got {token[0]!r}", offset=token[1])
        self.pos += 1
        return token

    def at_end(self) -> bool:
        return self.peek() is None

    def tree(self) -> tuple[ConstNode, list[Token]]:
        tokens: list[Token] = []
        root = self._node(tokens)
        return root, tokens

    def _node(self, tokens: list[Token]) -> ConstNode:
        _, start = self._take("(")
        nxt = self.peek()
        if nxt is None:
            raise TreebankParseError("unexpected end of input, unbalanced brackets", offset=start)
        label = ""
        if nxt[0] not in "()":
            label = self._take()[0]
        nxt = self.peek()
        if nxt is not None and nxt[0] not in "()":
            word = self._take()[0]
            self._take(")", open_at=start)
            tokens.append(Token(form=word, xpos=label))
            return ConstNode(label=label, children=(len(tokens),))
        children = []
        while (nxt := self.peek()) is not None and nxt[0] == "(":
            children.append(self._node(tokens))
        if not children:
            raise TreebankParseError(f"constituent {label!r} has no children", offset=start)
        self._take(")", open_at=start)
        return ConstNode(label=label, children=tuple(children))


def read_brackets(lines: Iterable[str]) -> CorpusDocument:
    """One or more bracketed trees; a tree may span lines. Offsets count from the start of the input."""
    parser = _BracketParser("".join(line if line.endswith("\n") else line + "\n" for line in lines))
    entries = []
    while not parser.at_end():
        token = parser.peek()
        if token is not None and token[0] != "(":
            raise TreebankParseError(f"expected '(' at the start of a tree, got {token[0]!r}", offset=token[1])
        root, tokens = parser.tree()
        sentence = Sentence(id=f"s{len(entries) + 1}", tokens=tuple(tokens))
        entries.append(CorpusEntry(sentence=sentence, const=ConstTree(root=root)))
    logger.debug(f"read {len(entries)} bracketed trees")
    return CorpusDocument(entries=tuple(entries), source_format=SourceFormat.PTB_BRACKETS)


def render_tree(tree: ConstTree, sentence: Sentence) -> str:
    def render(node: ConstNode) -> str:
        if node.is_preterminal:
            return f"({node.label} {sentence.token(node.children[0]).form})"  # type: ignore[arg-type]
        inner = " ".join(render(c) for c in node.children)  # type: ignore[arg-type]
        return f"({node.label} {inner})" if node.label else f"( {inner})"

    root = expand_unary(tree).root if tree.collapsed else tree.root
    return render(root)


def write_brackets(document: CorpusDocument) -> str:
    lines = [render_tree(entry.const, entry.sentence) for entry in document.entries if entry.const is not None]
    return "".join(line + "\n" for line in lines)


# ---------------------------------------------------------------------------
# SDP
# ---------------------------------------------------------------------------


def read_sdp(lines: Iterable[str]) -> CorpusDocument:
    """SDP 2015 (id form lemma pos top pred frame args...) or 2014 (no frame column)."""
    entries = []
    for block in _blocks(lines):
        sentence_id = f"s{len(entries) + 1}"
        rows: list[tuple[int, list[str]]] = []
        for number, line in block:
            if line.startswith("#"):
                if line.startswith("#SDP"):
                    continue
                sentence_id = line[1:].strip() or sentence_id
                continue
            rows.append((number, line.split("\t")))
        if not rows:
            continue

        predicates = [d for d, (_, cols) in enumerate(rows, start=1) if len(cols) > 5 and cols[5] == "+"]
        p = len(predicates)
        widths = {len(cols) for _, cols in rows}
        if widths == {7 + p}:
            args_from = 7
        elif widths == {6 + p}:
            args_from = 6
        else:
            raise StructuralError(
                f"sentence {sentence_id!r}: {p} predicates need {6 + p} or {7 + p} columns, got {sorted(widths)}",
                line=rows[0][0],
            )

        tokens = []
        arcs = []
        for d, (number, cols) in enumerate(rows, start=1):
            if cols[0] != str(d):
                raise TreebankParseError(f"token id {cols[0]!r} out of sequence", line=number)
            frame = cols[6] if args_from == 7 else None
            tokens.append(Token(form=cols[1], lemma=_field(cols[2]), xpos=_field(cols[3]), misc=_field(frame) if frame else None))
            if cols[4] == "+":
                arcs.append(Arc(head=0, dep=d, rel=TOP_REL))
            for head, rel in zip(predicates, cols[args_from:]):
                if rel != EMPTY_FIELD:
                    if head == d:
                        raise StructuralError(f"token {d} is its own argument", line=number)
                    arcs.append(Arc(head=head, dep=d, rel=rel))
        sentence = Sentence(id=sentence_id, tokens=tuple(tokens))
        graph = DepStructure(sentence=sentence, arcs=frozenset(arcs), kind=StructureKind.GRAPH)
        entries.append(CorpusEntry(sentence=sentence, dep=graph))
    logger.debug(f"read {len(entries)} SDP graphs")
    return CorpusDocument(entries=tuple(entries), source_format=SourceFormat.SDP_GRAPH)


def write_sdp(document: CorpusDocument) -> str:
    out = [SDP_HEADER]
    for entry in document.entries:
        graph = entry.dep
        assert graph is not None
        predicates = sorted({a.head for a in graph.arcs if a.head})
        column = {h: i for i, h in enumerate(predicates)}
        out.append(f"#{entry.sentence.id}")
        for d, token in enumerate(entry.sentence.tokens, start=1):
            args = [EMPTY_FIELD] * len(predicates)
            top = "-"
            for arc in graph.incoming(d):
                if arc.head == 0:
                    top = "+"
                else:
                    args[column[arc.head]] = arc.rel
            cols = [
                str(d),
                token.form,
                _show(token.lemma),
                _show(token.xpos),
                top,
                "+" if d in column else "-",
                _show(token.misc),
                *args,
            ]
            out.append("\t".join(cols))
        out.append("")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def read_corpus(lines: Iterable[str], fmt: SourceFormat | str) -> CorpusDocument:
    try:
        fmt = SourceFormat(fmt)
    except ValueError:
        raise UnknownFormatError(f"unknown format {fmt!r}; known: {', '.join(f.value for f in SourceFormat)}")
    if fmt is SourceFormat.CONLLU_TREE:
        return read_conllu(lines)
    if fmt is SourceFormat.CONLLU_ENHANCED_GRAPH:
        return read_conllu(lines, enhanced=True)
    if fmt is SourceFormat.PTB_BRACKETS:
        return read_brackets(lines)
    return read_sdp(lines)


def write_corpus(document: CorpusDocument) -> str:
    fmt = document.source_format
    if fmt is SourceFormat.PTB_BRACKETS:
        return write_brackets(document)
    if fmt is SourceFormat.SDP_GRAPH:
        return write_sdp(document)
    return write_conllu(document)


def default_format(family: SchemeFamily) -> SourceFormat:
    return {
        SchemeFamily.CONSTITUENCY: SourceFormat.PTB_BRACKETS,
        SchemeFamily.DEPENDENCY: SourceFormat.CONLLU_TREE,
        SchemeFamily.GRAPH: SourceFormat.SDP_GRAPH,
    }[family]


# ---------------------------------------------------------------------------
# Label TSV
# ---------------------------------------------------------------------------


def _has_end_row(scheme: str) -> bool:
    return scheme in (ABSOLUTE_SCHEME, RELATIVE_SCHEME)


def _tag(token: Token, family: SchemeFamily) -> str:
    if family is SchemeFamily.CONSTITUENCY:
        return _show(token.xpos)
    return _show(token.upos if token.upos is not None else token.xpos)


def write_labels(scheme: str, sentences: Sequence[Sentence], label_seqs: Sequence[LabelSequence]) -> LabelFile:
    resolved = registry.resolve(scheme)
    scheme, family = resolved.name, resolved.codec.family
    out = []
    for sentence, labels in zip(sentences, label_seqs, strict=True):
        if labels.tags is not None:
            sentence = sentence.with_xpos(labels.tags)
        rendered = labels.render() + ([END_LABEL] if _has_end_row(scheme) else [])
        if len(rendered) != sentence.n:
            raise LabelLengthError(sentence.id, sentence.n, len(rendered))
        rows = tuple(LabelRow(form=t.form, tag=_tag(t, family), label=label) for t, label in zip(sentence.tokens, rendered))
        out.append(LabelFileSentence(id=sentence.id, rows=rows))
    return LabelFile(scheme=scheme, sentences=tuple(out))


def render_label_file(label_file: LabelFile) -> str:
    out = [f"# scheme={label_file.scheme}"]
    for sentence in label_file.sentences:
        out.append(f"# id={sentence.id}")
        out.extend(f"{row.form}\t{row.tag}\t{row.label}" for row in sentence.rows)
        out.append("")
    return "\n".join(out) + "\n"


def read_labels(lines: Iterable[str]) -> LabelFile:
    scheme: str | None = None
    sentences = []
    for block in _blocks(lines):
        sentence_id = f"s{len(sentences) + 1}"
        rows = []
        for number, line in block:
            if line.startswith("# scheme="):
                scheme = line.partition("=")[2].strip()
                continue
            if line.startswith("# id="):
                sentence_id = line.partition("=")[2].strip()
                continue
            cols = line.split("\t")
            if len(cols) != 3:
                raise TreebankParseError(f"label rows need 3 tab-separated columns, got {len(cols)}", line=number)
            rows.append(LabelRow(form=cols[0], tag=cols[1], label=cols[2]))
        if rows:
            sentences.append(LabelFileSentence(id=sentence_id, rows=tuple(rows)))
    if scheme is None:
        raise TreebankParseError("missing '# scheme=' header", line=1)
    return LabelFile(scheme=scheme, sentences=tuple(sentences))


def label_file_sequences(label_file: LabelFile) -> list[tuple[Sentence, LabelSequence]]:
    """Sentences (tags restored) and parsed label sequences of a label file."""
    resolved = registry.resolve(label_file.scheme)
    family = resolved.codec.family
    out = []
    for item in label_file.sentences:
        tags = [None if row.tag == EMPTY_FIELD else row.tag for row in item.rows]
        if family is SchemeFamily.CONSTITUENCY:
            tokens = tuple(Token(form=row.form, xpos=tag) for row, tag in zip(item.rows, tags))
        else:
            tokens = tuple(Token(form=row.form, upos=tag) for row, tag in zip(item.rows, tags))
        sentence = Sentence(id=item.id, tokens=tokens)
        texts = [row.label for row in item.rows]
        if _has_end_row(resolved.name):
            if texts[-1] != END_LABEL:
                raise TreebankParseError(f"sentence {item.id!r}: last row must hold {END_LABEL}")
            texts = texts[:-1]
        const_tags = [t or "" for t in tags] if family is SchemeFamily.CONSTITUENCY else None
        out.append((sentence, registry.parse_labels(resolved.name, texts, const_tags)))
    return out
