from pathlib import Path

import typer

from structlabel.config.logger_config import logger
from structlabel.config.settings import parse_delete_labels
from structlabel.controllers.codec_controller import encode_document, encoding_summary, load_corpus
from structlabel.models.corpus_schemas import CorpusDocument, SourceFormat
from structlabel.models.label_models import LabelSequence
from structlabel.models.run_schemas import Command, RunConfig, SchemeFamily
from structlabel.models.score_schemas import ScoreReport
from structlabel.services.codec_registry import registry
from structlabel.services.metrics_service import const_f1, dep_scores, graph_scores, wellformed_ratio
from structlabel.services.pseudo_projective_service import recovery_rate
from structlabel.services.structure_service import is_projective
from structlabel.utils.cli_helpers import EXIT_CHECK_FAILED, console, handle_errors, summary_table, write_text
from structlabel.utils.parallel import ordered_map

router = typer.Typer()


def score_roundtrip(
    scheme: str,
    document: CorpusDocument,
    label_seqs: list[LabelSequence],
    delete_labels: frozenset[str] | None = None,
) -> tuple[ScoreReport, str]:
    """Decode the labels, score against the input; returns the report and its headline key.

    ``delete_labels`` replaces the configured bracket delete list for constituency schemes.
    """
    pairs = list(zip(document.sentences, label_seqs))
    decoded = ordered_map(lambda pair: registry.decode(scheme, pair[1], pair[0])[0], pairs)
    family = registry.family(scheme)
    if family is SchemeFamily.CONSTITUENCY:
        report, key = const_f1([e.const for e in document.entries], decoded, delete_labels), "lf"  # type: ignore[misc]
    elif family is SchemeFamily.DEPENDENCY:
        report, key = dep_scores([e.dep for e in document.entries], decoded), "las"  # type: ignore[misc]
    else:
        report, key = graph_scores([e.dep for e in document.entries], decoded), "lf"  # type: ignore[misc]
    return report.merge(wellformed_ratio(document.sentences, label_seqs, scheme)), key


@router.command("roundtrip")
def roundtrip(
    input: Path = typer.Argument(..., help="Treebank file, '-' for stdin"),
    scheme: str = typer.Option(..., "--scheme", help="Encoding scheme"),
    format: SourceFormat | None = typer.Option(None, "--format", help="Input format (default by scheme family)"),
    k: int | None = typer.Option(None, "--k", help="Plane count for graph schemes"),
    delete_labels: str | None = typer.Option(None, "--delete-labels", help="Whitespace-separated bracket delete list"),
    json: bool = typer.Option(False, "--json", help="Print the report as JSON"),
    out: Path | None = typer.Option(None, "--out", help="Report file (default stdout)"),
):
    """Encode, decode and score against the input.

    Exits with 1 when nothing was dropped or lifted and the score is still below 100%.
    """
    with handle_errors():
        deleted = parse_delete_labels(delete_labels) if delete_labels is not None else None
        config = RunConfig(
            command=Command.ROUNDTRIP,
            input=input,
            output=out,
            scheme=scheme,
            format=format,
            k=k,
            delete_labels=deleted or frozenset(),
        )
        scheme_name, document = load_corpus(config)
        label_seqs = encode_document(scheme_name, document)
        report, key = score_roundtrip(scheme_name, document, label_seqs, deleted)

        summary = encoding_summary(label_seqs)
        lifted = summary["lifted arcs"]
        if lifted:
            trees = [e.dep for e in document.entries if e.dep is not None and not is_projective(e.dep)]
            summary["non-projective sentences"] = len(trees)
            summary["lift recovery"] = f"{recovery_rate(trees):.4f}"
        console.print(summary_table(f"roundtrip {scheme_name}", summary))
        write_text((report.to_json() if json else report.to_key_value()) + "\n", out)

        lossless = not summary["dropped arcs"] and not lifted
        score = getattr(report, key)
        if lossless and score is not None and score < 1.0:
            logger.error(f"{scheme_name}: lossless round trip scored {key}={score:.4f}")
            console.print(f"[bold red]FAIL[/bold red] {key}={score:.4f} on a lossless round trip")
            raise typer.Exit(EXIT_CHECK_FAILED)
