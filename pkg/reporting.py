"""
Report Rendering Module for Silent Speech Decoder

This module turns an evaluation report into a plain-text console summary and a
Markdown document. Both carry the overall and per-label accuracy (mean and
standard deviation across folds), the per-group breakdown, the chance level
and the published reference point for the same condition and scheme.
"""
import os

from emgcore.types import Word
from utils import get_logger

logger = get_logger(__name__)


def _pct(value):
    return "n/a" if value is None else f"{100 * value:.1f}%"


def _mean_std(mean, std):
    if mean is None:
        return "n/a"
    return f"{mean:.3f} ± {std:.3f}" if std is not None else f"{mean:.3f}"


def summary_lines(report):
    """
    Short summary, one line per fact, as logged by the evaluate command.

    Returns:
        List of strings
    """
    agg = report.aggregate
    lines = [
        f"Scheme {report.scheme.value} ({report.condition}, {len(report.per_fold)} fold(s), {report.n_trees} tree(s)): "
        f"overall accuracy {_mean_std(agg.overall_mean, agg.overall_std)}",
        f"chance = {report.chance_level:.3f}",
    ]
    if report.reference:
        mean, std = report.reference
        lines.append(f"reference ({report.condition}, {report.scheme.value}) = {mean:.2f} ± {std:.2f}")
    if report.n_flagged:
        lines.append(f"{report.n_flagged} utterance(s) were flagged for dropped frames")
    return lines


def render_text(report):
    """Plain-text report with per-label and per-group tables."""
    agg = report.aggregate
    lines = summary_lines(report)
    lines.append("")
    lines.append("Per-label accuracy (mean ± std across folds):")
    for word, mean, std in zip(Word, agg.per_label_mean, agg.per_label_std):
        lines.append(f"  {word.name:<9} {_mean_std(mean, std)}")
    lines.append(f"  {'labels':<9} {_mean_std(agg.across_labels_mean, agg.across_labels_std)} (spread across labels)")
    if report.groups:
        lines.append("")
        lines.append("Per-group accuracy:")
        for name, group in report.groups.items():
            lines.append(f"  {name:<12} {_mean_std(group.overall_mean, group.overall_std)}")
    lines.append("")
    lines.append("Folds:")
    for fold in report.per_fold:
        lines.append(f"  {fold.name:<12} {_pct(fold.overall_accuracy):>7}  ({fold.n_test} test / {fold.n_train} train)")
    return "\n".join(lines) + "\n"


def render_markdown(report):
    """Markdown report; the per-label table has one row per word and a column per fold."""
    agg = report.aggregate
    folds = report.per_fold
    out = [
        f"# Evaluation report: {report.scheme.value} ({report.condition})",
        "",
        f"- Overall accuracy: **{_mean_std(agg.overall_mean, agg.overall_std)}** over {len(folds)} fold(s)",
        f"- Chance level: {report.chance_level:.3f}",
    ]
    if report.reference:
        mean, std = report.reference
        out.append(f"- Published reference for this condition and scheme: {mean:.2f} ± {std:.2f} "
                   f"(single-subject data, not reproducible here)")
    out.append(f"- Forest: {report.n_trees} tree(s), seed {report.seed}")
    if report.n_flagged:
        out.append(f"- Flagged utterances (dropped frames): {report.n_flagged}")

    out += ["", "## Per-label accuracy", ""]
    out.append("| word | mean ± std | " + " | ".join(f.name for f in folds) + " |")
    out.append("|---|---|" + "---|" * len(folds))
    for c, word in enumerate(Word):
        cells = [_pct(f.per_label_accuracy[c]) for f in folds]
        out.append(f"| {word.name} | {_mean_std(agg.per_label_mean[c], agg.per_label_std[c])} | " + " | ".join(cells) + " |")
    out.append("| **overall** | " + _mean_std(agg.overall_mean, agg.overall_std) + " | "
               + " | ".join(_pct(f.overall_accuracy) for f in folds) + " |")

    if report.groups:
        out += ["", "## Per-group accuracy", "", "| group | mean ± std |", "|---|---|"]
        for name, group in report.groups.items():
            out.append(f"| {name} | {_mean_std(group.overall_mean, group.overall_std)} |")
    return "\n".join(out) + "\n"


def write_markdown_report(report, out_dir):
    """
    Writes report_<scheme>.md into out_dir.

    Returns:
        Path of the written file
    """
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"report_{report.scheme.value}.md")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(render_markdown(report))
    logger.info(f"Markdown report written to {path}")
    return path
