"""
CSV Storage Module for Silent Speech Decoder

This module handles saving and reading the feature/label export: a CSV file with a
header row and one utterance per row (session_id, batch_id, word_code, then one
column per feature in FeatureVector layout order).
"""
import csv

import numpy as np

from utils import get_logger

logger = get_logger(__name__)

KEY_COLUMNS = ["session_id", "batch_id", "word_code"]


def save_features_csv(path, dataset, features, feature_names):
    """
    Saves the feature matrix of a dataset to a CSV file.

    Args:
        path: Destination CSV file (overwritten)
        dataset: Dataset the rows belong to, in the same order as features
        features: Utterances x features matrix
        feature_names: Column names for the feature columns

    Returns:
        Path of the written file
    """
    features = np.asarray(features, dtype=np.float64)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(KEY_COLUMNS + list(feature_names))
        for u, row in zip(dataset.utterances, features):
            writer.writerow([u.session_id, u.batch_id, int(u.word)] + [repr(float(v)) for v in row])
    logger.info(f"CSV: Saved {features.shape[0]} feature row(s) x {features.shape[1]} column(s) to {path}")
    return path


def load_features_csv(path):
    """
    Reads a feature CSV written by save_features_csv.

    Returns:
        Tuple (keys as list of (session_id, batch_id, word_code), feature matrix, feature names)
    """
    with open(path, "r", newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader)
        keys = []
        rows = []
        for record in reader:
            keys.append((record[0], record[1], int(record[2])))
            rows.append([float(v) for v in record[len(KEY_COLUMNS):]])
    names = header[len(KEY_COLUMNS):]
    matrix = np.array(rows, dtype=np.float64).reshape(len(rows), len(names))
    return keys, matrix, names
