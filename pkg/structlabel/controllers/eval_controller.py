from pathlib import Path

import typer

from structlabel.config.logger_config import logger
from structlabel.config.settings import parse_delete_labels
from structlabel.models.corpus_schemas import CorpusDocument, SourceFormat
from structlabel.models.run_schemas import Command, RunConfig
from structlabel.models.score_schemas import ScoreReport
from structlabel.services.metrics_service import const_f1, dep_scores, graph_scores, tagging_accuracy, wellformed_ratio
from structlabel.services.treebank_io_service import label_file_sequences, read_corpus, read_labels
from structlabel.utils.cli_helpers import handle_errors, read_lines, write_text
from structlabel.utils.exceptions import StructLabelError

router = typer.Typer()


def score_documents(gold: CorpusDocument, pred: CorpusDocument, delete_labels: frozenset[str] | None) -> ScoreReport:
    fmt = gold.source_format
    if fmt.carries_constituency:
        return const_f1([e.const for e in gold.entries], [e.const for e in pred.entries], delete_labels)  # type: ignore[misc]
    if fmt.carries_tree:
        return dep_scores([e.dep for e in gold.entries], [e.dep for e in pred.entries])  # type: ignore[misc]
    return graph_scores([e.dep for e in gold.entries], [e.dep for e in pred.entries])  # type: ignore[misc]


def score_label_files(gold_path: Path, pred_path: Path) -> ScoreReport:
    """Label accuracy of a predicted label file, plus how many of its sequences decode cleanly."""
    gold, pred = read_labels(read_lines(gold_path)), read_labels(read_lines(pred_path))
    if gold.scheme != pred.scheme:
        raise StructLabelError(f"scheme mismatch: gold {gold.scheme}, predicted {pred.scheme}")
    accuracy = tagging_accuracy(
        [[row.label for row in s.rows] for s in gold.sentences],
        [[row.label for row in s.rows] for s in pred.sentences],
    )
    pairs = label_file_sequences(pred)
    return accuracy.merge(wellformed_ratio([s for s, _ in pairs], [labels for _, labels in pairs], pred.scheme))


@router.command("eval")
def evaluate(
    gold: Path = typer.Argument(..., help="Gold treebank or label file"),
    pred: Path = typer.Argument(..., help="Predicted treebank or label file"),
    format: SourceFormat | None = typer.Option(None, "--format", help="Treebank format of both files"),
    labels: bool = typer.Option(False, "--labels", help="Compare label files instead of treebanks"),
    delete_labels: str | None = typer.Option(None, "--delete-labels", help="Whitespace-separated bracket delete list"),
    json: bool = typer.Option(False, "--json", help="Print the report as JSON"),
    out: Path | None = typer.Option(None, "--out", help="Report file (default stdout)"),
):
    """Score a predicted file against a gold file."""
    with handle_errors():
        deleted = parse_delete_labels(delete_labels) if delete_labels is not None else None
        RunConfig(command=Command.EVAL, input=pred, output=out, format=format, delete_labels=deleted or frozenset())
        if labels:
            report = score_label_files(gold, pred)
        else:
            if format is None:
                raise StructLabelError("--format is required when scoring treebanks")
            gold_doc = read_corpus(read_lines(gold), format)
            pred_doc = read_corpus(read_lines(pred), format)
            if len(gold_doc) != len(pred_doc):
                raise StructLabelError(f"{len(gold_doc)} gold vs {len(pred_doc)} predicted sentences")
            report = score_documents(gold_doc, pred_doc, deleted)
        logger.info(f"eval {pred}: {report.as_flat_dict()}")
        write_text((report.to_json() if json else report.to_key_value()) + "\n", out)
