import numpy as np

from emgcore.types import Word
from learn.evaluation import Aggregate, EvalReport, FoldResult, Scheme
from reporting import render_markdown, render_text, summary_lines, write_markdown_report


def _report(flagged=0):
    y_true = np.array([0, 0, 1, 1, 2, 2, 3, 3, 4, 5, 6, 7])
    y_pred = np.array([0, 1, 1, 1, 2, 2, 3, 0, 4, 5, 6, 7])
    folds = (
        FoldResult.from_predictions("S1-B1", "S1", y_true, y_pred, 100),
        FoldResult.from_predictions("S1-B2", "S1", y_true[:8], y_true[:8], 104),
    )
    return EvalReport(scheme=Scheme.SESSION_7FOLD, condition="vocalized", seed=5, n_trees=10, per_fold=folds,
                      aggregate=Aggregate.over(folds), groups={"S1": Aggregate.over(folds)}, n_flagged=flagged)


def test_summary_lines():
    lines = summary_lines(_report())
    assert lines[0] == "Scheme session (vocalized, 2 fold(s), 10 tree(s)): overall accuracy 0.917 ± 0.083"
    assert lines[1] == "chance = 0.125"
    assert lines[2] == "reference (vocalized, session) = 0.85 ± 0.07"
    assert len(lines) == 3


def test_summary_mentions_flagged_utterances():
    assert summary_lines(_report(flagged=4))[-1] == "4 utterance(s) were flagged for dropped frames"


def test_text_report_lists_labels_groups_and_folds():
    text = render_text(_report())
    for word in Word:
        assert f"  {word.name:<9} " in text
    assert "Per-group accuracy:" in text
    assert "S1-B1" in text and "83.3%" in text


def test_markdown_table_has_a_column_per_fold():
    markdown = render_markdown(_report())
    assert markdown.startswith("# Evaluation report: session (vocalized)\n")
    assert "| word | mean ± std | S1-B1 | S1-B2 |" in markdown
    # the fifth word only occurs in the first fold
    assert f"| {Word(4).name} | 1.000 ± 0.000 | 100.0% | n/a |" in markdown
    assert "- Chance level: 0.125" in markdown


def test_write_markdown_report(tmp_path):
    path = write_markdown_report(_report(), str(tmp_path / "out"))
    assert path.endswith("report_session.md")
    with open(path, encoding="utf-8") as f:
        assert f.read() == render_markdown(_report())
