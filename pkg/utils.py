"""
Utility Functions for Silent Speech Decoder

This module provides the shared plumbing used by every package:
- Application settings (silent_speech_config.json), created with defaults if missing
- Console logger with the project-wide "[timestamp] [LEVEL] message" format
- SHA-256 checksums for run manifests

All configuration files are automatically created with sensible defaults if they don't exist.
"""
import hashlib
import json
import logging
import os
import sys

LOG_FORMAT = "[%(asctime)s] [%(levelname)s] %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
ROOT_LOGGER = "silent_speech"

DEFAULT_APP_CONFIG = {
    "acquisition": {
        "sample_rate": 500.0,
        "gain": 12.0,
        "vref": 2.4,
        "n_channels_recorded": 16,
        "active_channels": list(range(14)),
    },
    "protocol": {
        "n_words": 8,
        "articulation_s": 4.0,
        "rest_s": 1.0,
        "reps_per_batch": 20,
        "batches_per_session": 7,
        "n_sessions": 3,
    },
    "pipeline": {
        "hp_order": 4,
        "hp_cutoff_hz": 20.0,
        "notch_hz": 50.0,
        "notch_q": 30.0,
        "analysis_s": 1.4,
        "window_s": 0.2,
        "n_windows": 7,
        "wavelet": "db4",
        "dwt_level": 3,
        "band_edges_hz": [20.0, 60.0, 120.0, 200.0, 250.0],
        "taper": "boxcar",
        "apply_filters": True,
    },
    "synth": {
        "seed": 0,
        "condition": "vocalized",
        "snr_db": 10.0,
        "baseline_uv": 5.0,
        "powerline_amp_uv": 20.0,
        "repositioning_strength": 0.5,
    },
    "forest": {
        "n_trees": 100,
        "max_depth": None,
        "min_samples_split": 2,
        "min_samples_leaf": 1,
        "bootstrap": True,
        "seed": 0,
    },
}


def get_logger(name):
    """
    Returns a logger living under the project root logger.

    The root logger is configured once with the console format used across the
    project, writing to stdout. Child loggers propagate to it.

    Args:
        name: Usually the calling module's __name__

    Returns:
        logging.Logger instance
    """
    root = logging.getLogger(ROOT_LOGGER)
    if not root.handlers:
        handler = logging.StreamHandler(sys.stdout)
        handler.setFormatter(logging.Formatter(LOG_FORMAT, LOG_DATE_FORMAT))
        root.addHandler(handler)
        root.setLevel(logging.INFO)
    if name == ROOT_LOGGER or name.startswith(ROOT_LOGGER + "."):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER}.{name}")


def set_verbosity(verbose):
    """Switches the project logger between INFO and DEBUG."""
    logging.getLogger(ROOT_LOGGER).setLevel(logging.DEBUG if verbose else logging.INFO)


logger = get_logger(__name__)


def load_app_config(app_config_path):
    """
    Loads application configuration from a JSON file, creating a default file if it doesn't exist.

    Configuration includes acquisition, protocol, pipeline, synthetic data and forest settings.
    Sections missing from an existing file are filled from the defaults.

    Args:
        app_config_path: Path to the application configuration JSON file

    Returns:
        Dictionary with one entry per configuration section
    """
    if not os.path.exists(app_config_path):
        with open(app_config_path, "w", encoding="utf-8") as f:
            json.dump(DEFAULT_APP_CONFIG, f, indent=4, ensure_ascii=False)
        logger.info(f"Created default config file: {app_config_path}")
        return json.loads(json.dumps(DEFAULT_APP_CONFIG))

    with open(app_config_path, "r", encoding="utf-8") as f:
        config = json.load(f)

    settings = json.loads(json.dumps(DEFAULT_APP_CONFIG))
    for section, values in config.items():
        if section not in settings:
            logger.warning(f"Ignoring unknown config section '{section}' in {app_config_path}")
            continue
        settings[section].update(values)
    return settings


def file_checksum(path, chunk_size=1 << 20):
    """
    Computes the SHA-256 checksum of a file.

    Args:
        path: File to hash
        chunk_size: Read size in bytes

    Returns:
        Hex digest string
    """
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(chunk_size), b""):
            digest.update(chunk)
    return digest.hexdigest()
