"""
Run Manifest Module for Silent Speech Decoder

Every command writes one run_manifest.json next to its outputs, holding what is
needed to reproduce them: the command line, resolved configs, seeds, paths and
the checksum of every artifact.
"""
import json
import os
import time
from dataclasses import asdict, dataclass, field

from utils import file_checksum, get_logger

logger = get_logger(__name__)

MANIFEST_NAME = "run_manifest.json"


@dataclass
class RunManifest:
    command: str
    argv: list
    configs: dict
    seeds: dict
    inputs: dict
    out_dir: str
    checksums: dict = field(default_factory=dict)
    duration_s: float = 0.0
    started_at: float = field(default_factory=time.time)

    def record_artifacts(self, paths):
        """Adds the SHA-256 of every existing file, keyed by its path relative to out_dir."""
        for path in sorted(set(paths)):
            if os.path.isfile(path):
                self.checksums[os.path.relpath(path, self.out_dir)] = file_checksum(path)


def write_run_manifest(manifest):
    """
    Stamps the duration and writes the manifest into its out_dir.

    Returns:
        Path of the manifest file
    """
    manifest.duration_s = round(time.time() - manifest.started_at, 3)
    os.makedirs(manifest.out_dir, exist_ok=True)
    path = os.path.join(manifest.out_dir, MANIFEST_NAME)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(asdict(manifest), f, indent=2, sort_keys=True)
    logger.info(f"Run manifest: {len(manifest.checksums)} artifact checksum(s) written to {path}")
    return path


def load_run_manifest(path):
    with open(path, "r", encoding="utf-8") as f:
        return RunManifest(**json.load(f))
