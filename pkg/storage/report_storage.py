"""
Report Storage Module for Silent Speech Decoder

Writes evaluation reports as a JSON document, as a flat CSV for plotting and
as one confusion-matrix CSV per fold.
"""
import csv
import json
import os

from emgcore.errors import StoreFormatError
from emgcore.types import Word
from learn.evaluation import EvalReport
from utils import get_logger

logger = get_logger(__name__)

REPORT_COLUMNS = ["scheme", "scope", "name", "label", "mean", "std", "n_test"]


def report_file_stem(report):
    return f"report_{report.scheme.value}"


def save_report_json(report, out_dir):
    """
    Saves a report as indented JSON. Same report, same bytes.

    Returns:
        Path of the written file
    """
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{report_file_stem(report)}.json")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(report.to_dict(), f, indent=2, ensure_ascii=False)
        f.write("\n")
    logger.info(f"JSON: Saved {report.scheme.value} report to {path}")
    return path


def load_report_json(path):
    """
    Raises:
        StoreFormatError: If the file is not valid JSON
    """
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise StoreFormatError(f"[report] {path}: invalid JSON: {e}") from e
    return EvalReport.from_dict(data)


def _rows(report):
    scheme = report.scheme.value
    labels = [w.name for w in Word]

    def aggregate_rows(scope, name, agg):
        yield [scheme, scope, name, "overall", agg.overall_mean, agg.overall_std, ""]
        for label, mean, std in zip(labels, agg.per_label_mean, agg.per_label_std):
            yield [scheme, scope, name, label, mean, std, ""]
        yield [scheme, scope, name, "across_labels", agg.across_labels_mean, agg.across_labels_std, ""]

    for fold in report.per_fold:
        yield [scheme, "fold", fold.name, "overall", fold.overall_accuracy, "", fold.n_test]
        for label, accuracy, row in zip(labels, fold.per_label_accuracy, fold.confusion):
            yield [scheme, "fold", fold.name, label, accuracy, "", sum(row)]
    for name, agg in report.groups.items():
        yield from aggregate_rows("group", name, agg)
    yield from aggregate_rows("aggregate", "all", report.aggregate)


def save_report_csv(report, out_dir):
    """
    Saves a report as one flat CSV row per (scope, name, label).

    Undefined accuracies (labels absent from a fold) are left empty.

    Returns:
        Path of the written file
    """
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, f"{report_file_stem(report)}.csv")
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in _rows(report):
            writer.writerow(["" if value is None else value for value in row])
    logger.info(f"CSV: Saved {report.scheme.value} report rows to {path}")
    return path


def save_confusion_csvs(report, out_dir):
    """
    Saves one 8 x 8 confusion matrix per fold (rows true word, columns predicted word).

    Returns:
        List of written paths
    """
    folder = os.path.join(out_dir, f"confusion_{report.scheme.value}")
    os.makedirs(folder, exist_ok=True)
    labels = [w.name for w in Word]
    paths = []
    for fold in report.per_fold:
        path = os.path.join(folder, f"{fold.name}.csv")
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(["true\\predicted"] + labels)
            for label, row in zip(labels, fold.confusion):
                writer.writerow([label] + list(row))
        paths.append(path)
    return paths


def save_report(report, out_dir):
    """JSON, flat CSV and confusion matrices of one report; returns every written path."""
    return [save_report_json(report, out_dir), save_report_csv(report, out_dir)] + save_confusion_csvs(report, out_dir)
