"""
Storage Package for Silent Speech Decoder

This package provides storage handlers for datasets, features and reports.

Available handlers:
- store: Session store (per-session manifest.json plus binary batch files)
- features: Feature/label CSV export, one utterance per row
- json: Evaluation report as JSON
- csv: Evaluation report as a flat CSV plus per-fold confusion matrices

The package also provides the readers for each format and the run manifest writer.
"""
from . import csv_storage, report_storage, run_manifest, session_store
from .csv_storage import load_features_csv, save_features_csv
from .report_storage import load_report_json, save_report, save_report_csv, save_report_json
from .run_manifest import RunManifest, load_run_manifest, write_run_manifest
from .session_store import (is_oracle_store, list_sessions, load_dataset, read_batch_file, save_dataset, save_session,
                            write_batch_file)


def report_csv_handler(report, out_dir):
    """
    Handler function for the flat report CSV together with the confusion matrices.

    Args:
        report: EvalReport to save
        out_dir: Output directory

    Returns:
        List of written paths
    """
    return [report_storage.save_report_csv(report, out_dir)] + report_storage.save_confusion_csvs(report, out_dir)


STORAGE_HANDLERS = {
    "store": session_store.save_dataset,
    "features": csv_storage.save_features_csv,
    "json": report_storage.save_report_json,
    "csv": report_csv_handler,
}

__all__ = [
    "STORAGE_HANDLERS", "RunManifest", "is_oracle_store", "list_sessions", "load_dataset", "load_features_csv",
    "load_report_json", "load_run_manifest", "read_batch_file", "report_csv_handler", "save_dataset", "save_features_csv",
    "save_report", "save_report_csv", "save_report_json", "save_session", "write_batch_file", "write_run_manifest",
]
