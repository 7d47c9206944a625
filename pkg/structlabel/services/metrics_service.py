"""Corpus-level scores.

All F1 values are micro-averaged: matched / gold / predicted counts are
summed over the corpus before the harmonic mean, and stored in the report
as (2 * matched, gold + predicted).
"""

from collections import Counter
from collections.abc import Iterable, Sequence

from structlabel.config.logger_config import get_logger
from structlabel.config.settings import get_settings
from structlabel.models.const_models import ConstNode, ConstTree
from structlabel.models.core_models import DepStructure, Sentence
from structlabel.models.label_models import LabelSequence
from structlabel.models.run_schemas import SchemeFamily
from structlabel.models.score_schemas import ScoreReport
from structlabel.services.codec_registry import registry, scheme_family
from structlabel.services.const_codec_service import expand_unary
from structlabel.services.structure_service import validate
from structlabel.utils.exceptions import StructLabelError

logger = get_logger("MetricsService")

Span = tuple[int, int, str]


def _check_pairs(gold: Sequence, pred: Sequence, what: str) -> None:
    if len(gold) != len(pred):
        raise StructLabelError(f"{what}: {len(gold)} gold vs {len(pred)} predicted sentences")


def tagging_accuracy(gold: Sequence[Sequence[str]], pred: Sequence[Sequence[str]]) -> ScoreReport:
    _check_pairs(gold, pred, "tagging accuracy")
    correct = total = 0
    for i, (g, p) in enumerate(zip(gold, pred)):
        if len(g) != len(p):
            raise StructLabelError(f"sentence {i}: {len(g)} gold vs {len(p)} predicted tags")
        correct += sum(a == b for a, b in zip(g, p))
        total += len(g)
    return ScoreReport.from_counts(accuracy=(correct, total))


def dep_scores(gold: Sequence[DepStructure], pred: Sequence[DepStructure]) -> ScoreReport:
    """UAS/LAS over tokens (root arcs included), UM/LM over sentences."""
    _check_pairs(gold, pred, "dependency scores")
    ua = la = tokens = um = lm = 0
    for g, p in zip(gold, pred):
        if g.n != p.n:
            raise StructLabelError(f"sentence {g.sentence.id!r}: {g.n} gold vs {p.n} predicted tokens")
        heads_ok = [gh == ph for gh, ph in zip(g.heads(), p.heads())]
        rels_ok = [h and gr == pr for h, gr, pr in zip(heads_ok, g.rels(), p.rels())]
        ua += sum(heads_ok)
        la += sum(rels_ok)
        tokens += g.n
        um += all(heads_ok)
        lm += all(rels_ok)
    return ScoreReport.from_counts(uas=(ua, tokens), las=(la, tokens), um=(um, len(gold)), lm=(lm, len(gold)))


# ---------------------------------------------------------------------------
# Bracket scoring
# ---------------------------------------------------------------------------


def _plain(tree: ConstTree) -> ConstNode:
    return expand_unary(tree).root if tree.collapsed else tree.root


def _spans(root: ConstNode, kept: dict[int, int], delete: frozenset[str], equivalences: dict[str, str]) -> Counter[Span]:
    """Labelled spans over kept tokens (renumbered from 0); pre-terminals excluded."""
    spans: Counter[Span] = Counter()
    for node in root.iter_nodes():
        if node.is_preterminal or not node.label or node.label in delete:
            continue
        positions = [kept[i] for i in node.leaves() if i in kept]
        if positions:
            spans[(min(positions), max(positions) + 1, equivalences.get(node.label, node.label))] += 1
    return spans


def bracket_spans(
    gold: ConstTree, pred: ConstTree, delete: frozenset[str], equivalences: dict[str, str]
) -> tuple[Counter[Span], Counter[Span]]:
    """Gold and predicted span multisets after word deletion by gold pre-terminal."""
    gold_root, pred_root = _plain(gold), _plain(pred)
    tags = [node.label for node in gold_root.preterminals()]
    kept: dict[int, int] = {}
    for i, tag in enumerate(tags, start=1):
        if tag not in delete:
            kept[i] = len(kept)
    return _spans(gold_root, kept, delete, equivalences), _spans(pred_root, kept, delete, equivalences)


def _unlabelled(spans: Counter[Span]) -> Counter[tuple[int, int]]:
    out: Counter[tuple[int, int]] = Counter()
    for (start, end, _), count in spans.items():
        out[(start, end)] += count
    return out


def const_f1(
    gold: Sequence[ConstTree],
    pred: Sequence[ConstTree],
    delete_labels: Iterable[str] | None = None,
    equivalences: dict[str, str] | None = None,
) -> ScoreReport:
    settings = get_settings()
    delete = frozenset(delete_labels) if delete_labels is not None else settings.delete_label_set
    equivalences = equivalences if equivalences is not None else settings.equivalence_map
    _check_pairs(gold, pred, "bracket scores")

    matched = unlabelled_matched = gold_total = pred_total = um = lm = 0
    for g, p in zip(gold, pred):
        if g.n != p.n:
            raise StructLabelError(f"bracket scores: {g.n} gold vs {p.n} predicted leaves")
        gold_spans, pred_spans = bracket_spans(g, p, delete, equivalences)
        gold_plain, pred_plain = _unlabelled(gold_spans), _unlabelled(pred_spans)
        matched += sum((gold_spans & pred_spans).values())
        unlabelled_matched += sum((gold_plain & pred_plain).values())
        gold_total += sum(gold_spans.values())
        pred_total += sum(pred_spans.values())
        um += gold_plain == pred_plain
        lm += gold_spans == pred_spans

    total = gold_total + pred_total
    return ScoreReport.from_counts(
        lf=(2 * matched, total),
        uf=(2 * unlabelled_matched, total),
        um=(um, len(gold)),
        lm=(lm, len(gold)),
    )


# ---------------------------------------------------------------------------
# Graph scoring
# ---------------------------------------------------------------------------


def graph_scores(gold: Sequence[DepStructure], pred: Sequence[DepStructure], include_root: bool = True) -> ScoreReport:
    """Labelled / unlabelled arc F1 and exact matches.

    ``include_root=False`` leaves out arcs from token 0, as SDP scorers do
    for top nodes.
    """
    _check_pairs(gold, pred, "graph scores")
    matched = unlabelled_matched = gold_total = pred_total = um = lm = 0
    for g, p in zip(gold, pred):
        if g.n != p.n:
            raise StructLabelError(f"sentence {g.sentence.id!r}: {g.n} gold vs {p.n} predicted tokens")
        gold_arcs = {(a.head, a.dep, a.rel) for a in g.arcs if include_root or a.head}
        pred_arcs = {(a.head, a.dep, a.rel) for a in p.arcs if include_root or a.head}
        gold_plain = {(h, d) for h, d, _ in gold_arcs}
        pred_plain = {(h, d) for h, d, _ in pred_arcs}
        matched += len(gold_arcs & pred_arcs)
        unlabelled_matched += len(gold_plain & pred_plain)
        gold_total += len(gold_arcs)
        pred_total += len(pred_arcs)
        um += gold_plain == pred_plain
        lm += gold_arcs == pred_arcs

    total = gold_total + pred_total
    return ScoreReport.from_counts(
        lf=(2 * matched, total),
        uf=(2 * unlabelled_matched, total),
        um=(um, len(gold)),
        lm=(lm, len(gold)),
    )


# ---------------------------------------------------------------------------
# Well-formedness
# ---------------------------------------------------------------------------


def wellformed_ratio(sentences: Sequence[Sentence], label_seqs: Sequence[LabelSequence], scheme: str) -> ScoreReport:
    """Share of label sequences that decode without any repair.

    Tree schemes additionally require the decoded tree to validate.
    """
    family = scheme_family(scheme)
    _check_pairs(sentences, label_seqs, "well-formedness")
    valid = 0
    for sentence, labels in zip(sentences, label_seqs):
        structure, repairs = registry.decode(scheme, labels, sentence)
        ok = repairs == 0
        if ok and family is SchemeFamily.DEPENDENCY:
            ok = validate(structure).well_formed()  # type: ignore[arg-type]
        valid += ok
    logger.debug(f"{scheme}: {valid}/{len(sentences)} label sequences well-formed")
    return ScoreReport.from_counts(wellformed=(valid, len(sentences)))
