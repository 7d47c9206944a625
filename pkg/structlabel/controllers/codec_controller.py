from pathlib import Path

import typer

from structlabel.config.logger_config import logger
from structlabel.models.corpus_schemas import CorpusDocument, CorpusEntry, SourceFormat
from structlabel.models.label_models import LabelSequence
from structlabel.models.run_schemas import Command, RunConfig, SchemeFamily
from structlabel.services.codec_registry import label_space, registry
from structlabel.services.treebank_io_service import (
    default_format,
    label_file_sequences,
    read_corpus,
    read_labels,
    render_label_file,
    write_corpus,
    write_labels,
)
from structlabel.utils.cli_helpers import console, handle_errors, read_lines, summary_table, write_text
from structlabel.utils.exceptions import StructLabelError
from structlabel.utils.parallel import ordered_map

router = typer.Typer()


def full_scheme(scheme: str, k: int | None) -> str:
    """``--scheme gr-brk --k 2`` -> ``gr-brk:2``."""
    if k is None or ":" in scheme:
        return scheme
    return f"{scheme}:{k}"


def check_format(family: SchemeFamily, fmt: SourceFormat) -> None:
    ok = {
        SchemeFamily.CONSTITUENCY: fmt.carries_constituency,
        SchemeFamily.DEPENDENCY: fmt.carries_tree,
        SchemeFamily.GRAPH: fmt.carries_graph,
    }[family]
    if not ok:
        raise StructLabelError(f"format {fmt} does not carry {family} structures")


def load_corpus(config: RunConfig) -> tuple[str, CorpusDocument]:
    """Resolve the scheme, read the input in the matching format."""
    assert config.scheme is not None and config.input is not None
    scheme = registry.resolve(full_scheme(config.scheme, config.k)).name
    family = registry.family(scheme)
    fmt = config.format or default_format(family)
    check_format(family, fmt)
    document = read_corpus(read_lines(config.input), fmt)
    logger.info(f"read {len(document)} sentences from {config.input} ({fmt})")
    return scheme, document


def encode_document(scheme: str, document: CorpusDocument) -> list[LabelSequence]:
    def encode(entry: CorpusEntry) -> LabelSequence:
        structure = entry.const if entry.const is not None else entry.dep
        return registry.encode(scheme, structure)  # type: ignore[arg-type]

    return ordered_map(encode, list(document.entries))


def encoding_summary(label_seqs: list[LabelSequence]) -> dict[str, object]:
    space = label_space(label_seqs)
    return {
        "sentences": len(label_seqs),
        "labels": space.labels,
        "structural labels": space.structural,
        "dropped arcs": sum(s.dropped_arcs for s in label_seqs),
        "lifted arcs": sum(s.lifted_arcs for s in label_seqs),
    }


@router.command("encode")
def encode(
    input: Path = typer.Argument(..., help="Treebank file, '-' for stdin"),
    scheme: str = typer.Option(..., "--scheme", help="Encoding scheme, e.g. dep-4b or gr-brk:3"),
    format: SourceFormat | None = typer.Option(None, "--format", help="Input format (default by scheme family)"),
    k: int | None = typer.Option(None, "--k", help="Plane count for graph schemes"),
    out: Path | None = typer.Option(None, "--out", help="Label file (default stdout)"),
):
    """Linearize every structure of a treebank into a label file."""
    with handle_errors():
        config = RunConfig(command=Command.ENCODE, input=input, output=out, scheme=scheme, format=format, k=k)
        scheme_name, document = load_corpus(config)
        label_seqs = encode_document(scheme_name, document)
        label_file = write_labels(scheme_name, document.sentences, label_seqs)
        write_text(render_label_file(label_file), out)

        summary = encoding_summary(label_seqs)
        logger.info(f"{scheme_name}: {summary}")
        console.print(summary_table(f"encode {scheme_name}", summary))


@router.command("decode")
def decode(
    input: Path = typer.Argument(..., help="Label file, '-' for stdin"),
    format: SourceFormat | None = typer.Option(None, "--format", help="Output format (default by scheme family)"),
    out: Path | None = typer.Option(None, "--out", help="Treebank file (default stdout)"),
):
    """Rebuild structures from a label file, repairing ill-formed sequences."""
    with handle_errors():
        label_file = read_labels(read_lines(input))
        RunConfig(command=Command.DECODE, input=input, output=out, format=format, scheme=label_file.scheme)
        family = registry.family(label_file.scheme)
        fmt = format or default_format(family)
        check_format(family, fmt)

        pairs = label_file_sequences(label_file)
        decoded = ordered_map(lambda pair: registry.decode(label_file.scheme, pair[1], pair[0]), pairs)
        entries = []
        for (sentence, _), (structure, _) in zip(pairs, decoded):
            if family is SchemeFamily.CONSTITUENCY:
                entries.append(CorpusEntry(sentence=sentence, const=structure))
            else:
                entries.append(CorpusEntry(sentence=sentence, dep=structure))
        write_text(write_corpus(CorpusDocument(entries=tuple(entries), source_format=fmt)), out)

        repairs = sum(r for _, r in decoded)
        repaired = sum(1 for _, r in decoded if r)
        logger.info(f"decoded {len(entries)} sentences, {repairs} repairs")
        console.print(
            summary_table(
                f"decode {label_file.scheme}",
                {"sentences": len(entries), "repaired sentences": repaired, "repairs": repairs},
            )
        )

