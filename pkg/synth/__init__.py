"""
Synthetic Data Package for Silent Speech Decoder

Generates labeled EMG-like datasets with the shape of the recording protocol,
trivially separable oracle datasets, label-permuted controls and raw packet
captures for end-to-end ingest checks.

Dataset generators are registered in DATASET_GENERATORS.
"""
from .capture import emit_capture
from .generator import (ClassTemplate, SynthConfig, default_templates, generate_dataset, session_mixing,
                        shuffle_labels_within_batches)
from .oracle import decode_offsets, oracle_dataset

DATASET_GENERATORS = {
    "synthetic": generate_dataset,
    "oracle": oracle_dataset,
}

__all__ = [
    "ClassTemplate", "DATASET_GENERATORS", "SynthConfig", "decode_offsets", "default_templates", "emit_capture",
    "generate_dataset", "oracle_dataset", "session_mixing", "shuffle_labels_within_batches",
]
