"""
Session Store Module for Silent Speech Decoder

Persists datasets on disk with the session / batch hierarchy of the recording protocol:

    <root>/store.json                     ordered list of session ids
    <root>/<session_id>/manifest.json     configs, condition and prompt schedule
    <root>/<session_id>/batch_<id>.emgs   binary batch sample file

Batch files hold the batch's utterances back to back. Each schedule entry's
onset_sample indexes into its batch file. Files are written to a temporary name
and renamed into place, so concurrent readers never observe partial files.
"""
import json
import os
import struct

import numpy as np

from emgcore.configs import AcquisitionConfig, ProtocolConfig, from_dict, to_dict
from emgcore.errors import StoreFormatError
from emgcore.types import Condition, Dataset, Recording, Utterance, Word
from utils import get_logger

logger = get_logger(__name__)

BATCH_MAGIC = b"EMGS"
BATCH_VERSION = 1
BATCH_HEADER = struct.Struct("<4sHHQd")
STORE_INDEX = "store.json"
MANIFEST_FILE = "manifest.json"


def _replace_atomically(path, payload):
    tmp_path = f"{path}.tmp"
    with open(tmp_path, "wb") as f:
        f.write(payload)
    os.replace(tmp_path, path)


def write_batch_file(path, samples, sample_rate):
    """
    Writes a batch sample file.

    Layout: little-endian header {magic "EMGS", version u16, n_channels u16,
    n_samples u64, sample_rate_hz f64}, then float32 microvolts, channel-major.

    Args:
        path: Destination file
        samples: Channels x samples array in microvolts
        sample_rate: Samples per second
    """
    samples = np.asarray(samples, dtype="<f4")
    if samples.ndim != 2:
        raise StoreFormatError(f"[store] batch samples must be 2-D, got shape {samples.shape}")
    header = BATCH_HEADER.pack(BATCH_MAGIC, BATCH_VERSION, samples.shape[0], samples.shape[1], float(sample_rate))
    _replace_atomically(path, header + np.ascontiguousarray(samples).tobytes(order="C"))


def read_batch_file(path):
    """
    Reads a batch sample file written by write_batch_file.

    Returns:
        Tuple (samples as channels x samples float32 array, sample_rate)

    Raises:
        StoreFormatError: On a bad header or a size that does not match it
    """
    with open(path, "rb") as f:
        payload = f.read()
    if len(payload) < BATCH_HEADER.size:
        raise StoreFormatError(f"[store] {path}: file shorter than the header")
    magic, version, n_channels, n_samples, sample_rate = BATCH_HEADER.unpack_from(payload)
    if magic != BATCH_MAGIC:
        raise StoreFormatError(f"[store] {path}: bad magic {magic!r}")
    if version != BATCH_VERSION:
        raise StoreFormatError(f"[store] {path}: unsupported version {version}")
    expected = BATCH_HEADER.size + 4 * n_channels * n_samples
    if len(payload) != expected:
        raise StoreFormatError(f"[store] {path}: {len(payload)} bytes, header announces {expected}")
    samples = np.frombuffer(payload, dtype="<f4", offset=BATCH_HEADER.size).reshape(n_channels, n_samples)
    return samples.astype(np.float32), sample_rate


def _batch_file_name(batch_id):
    return f"batch_{batch_id}.emgs"


def _update_index(root, session_id):
    index_path = os.path.join(root, STORE_INDEX)
    sessions = []
    if os.path.exists(index_path):
        with open(index_path, "r", encoding="utf-8") as f:
            sessions = json.load(f)["sessions"]
    if session_id not in sessions:
        sessions.append(session_id)
    _replace_atomically(index_path, json.dumps({"sessions": sessions}, indent=2).encode("utf-8"))


def save_session(root, session_id, utterances, condition, acquisition, protocol, oracle=False):
    """
    Writes one session directory: a batch file per batch plus the manifest.

    Args:
        root: Store directory (created if missing)
        session_id: Session identifier, used as the directory name
        utterances: Utterances of this session, in prompt order
        condition: Condition of the recording
        acquisition: AcquisitionConfig
        protocol: ProtocolConfig
        oracle: Marks the session as the separable oracle dataset

    Returns:
        List of written file paths
    """
    utterances = list(utterances)
    session_dir = os.path.join(root, session_id)
    os.makedirs(session_dir, exist_ok=True)

    batches = {}
    for position, u in enumerate(utterances):
        batches.setdefault(u.batch_id, []).append(position)

    schedule = []
    written = []
    offsets = [0] * len(utterances)
    for batch_id, positions in batches.items():
        onset = 0
        for position in positions:
            offsets[position] = onset
            onset += utterances[position].recording.n_samples
        blocks = [utterances[position].recording.samples for position in positions]
        path = os.path.join(session_dir, _batch_file_name(batch_id))
        write_batch_file(path, np.concatenate(blocks, axis=1), acquisition.sample_rate)
        written.append(path)

    for position, u in enumerate(utterances):
        schedule.append({
            "batch": u.batch_id,
            "index": u.prompt_index,
            "word": u.word.name,
            "onset_sample": offsets[position],
            "n_samples": u.recording.n_samples,
            "flagged": bool(u.flagged),
        })

    manifest = {
        "session_id": session_id,
        "condition": Condition(condition).value,
        "acquisition": to_dict(acquisition),
        "protocol": to_dict(protocol),
        "oracle": bool(oracle),
        "schedule": schedule,
    }
    manifest_path = os.path.join(session_dir, MANIFEST_FILE)
    _replace_atomically(manifest_path, json.dumps(manifest, indent=2).encode("utf-8"))
    written.append(manifest_path)
    _update_index(root, session_id)
    logger.info(f"Store: saved session {session_id} ({len(utterances)} utterance(s), {len(batches)} batch file(s)) to {session_dir}")
    return written


def save_dataset(d, root, oracle=False):
    """
    Writes every session of a dataset into the store.

    Args:
        d: Dataset to persist
        root: Store directory
        oracle: Marks every session as the separable oracle dataset

    Returns:
        List of written file paths (batch files, manifests, store index)
    """
    os.makedirs(root, exist_ok=True)
    written = []
    for session_id in d.session_ids():
        members = [u for u in d.utterances if u.session_id == session_id]
        written.extend(save_session(root, session_id, members, d.condition, d.acquisition, d.protocol,
                                     oracle=oracle))
    written.append(os.path.join(root, STORE_INDEX))
    return written


def _read_manifest(path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise StoreFormatError(f"[store] {path}: invalid JSON: {e}") from e


def list_sessions(root):
    """Session ids of a store, in the order they were written."""
    index_path = os.path.join(root, STORE_INDEX)
    if os.path.exists(index_path):
        with open(index_path, "r", encoding="utf-8") as f:
            return list(json.load(f)["sessions"])
    if not os.path.isdir(root):
        raise StoreFormatError(f"[store] {root} is not a session store")
    return sorted(name for name in os.listdir(root) if os.path.exists(os.path.join(root, name, MANIFEST_FILE)))


def is_oracle_store(root):
    """True if any session of the store was written from the oracle generator."""
    paths = [os.path.join(root, session_id, MANIFEST_FILE) for session_id in list_sessions(root)]
    return any(_read_manifest(path).get("oracle", False) for path in paths if os.path.exists(path))


def load_dataset(root):
    """
    Loads a whole session store back into a Dataset.

    Args:
        root: Store directory

    Returns:
        Dataset with utterances in session, then manifest schedule order

    Raises:
        StoreFormatError: On missing files or manifests that disagree on configs
    """
    utterances = []
    condition = acquisition = protocol = None
    for session_id in list_sessions(root):
        manifest_path = os.path.join(root, session_id, MANIFEST_FILE)
        if not os.path.exists(manifest_path):
            raise StoreFormatError(f"[store] missing manifest {manifest_path}")
        manifest = _read_manifest(manifest_path)
        session_condition = Condition.from_name(manifest["condition"])
        session_acq = from_dict(AcquisitionConfig, manifest["acquisition"])
        session_proto = from_dict(ProtocolConfig, manifest["protocol"])
        if condition is None:
            condition, acquisition, protocol = session_condition, session_acq, session_proto
        elif (session_condition, session_acq, session_proto) != (condition, acquisition, protocol):
            raise StoreFormatError(f"[store] session {session_id} disagrees with earlier sessions on condition or configs")

        batch_cache = {}
        for entry in manifest["schedule"]:
            batch_id = entry["batch"]
            if batch_id not in batch_cache:
                batch_path = os.path.join(root, session_id, _batch_file_name(batch_id))
                if not os.path.exists(batch_path):
                    raise StoreFormatError(f"[store] missing batch file {batch_path}")
                batch_cache[batch_id] = read_batch_file(batch_path)
            samples, sample_rate = batch_cache[batch_id]
            start = int(entry["onset_sample"])
            stop = start + int(entry["n_samples"])
            if stop > samples.shape[1]:
                raise StoreFormatError(f"[store] session {session_id} batch {batch_id}: prompt {entry['index']} "
                                       f"ends at {stop}, file has {samples.shape[1]} samples")
            utterances.append(Utterance(
                word=Word.from_name(entry["word"]),
                recording=Recording(samples[:, start:stop], sample_rate),
                session_id=session_id,
                batch_id=batch_id,
                prompt_index=int(entry["index"]),
                flagged=bool(entry.get("flagged", False)),
            ))

    if condition is None:
        condition, acquisition, protocol = Condition.VOCALIZED, AcquisitionConfig(), ProtocolConfig()
    logger.info(f"Store: loaded {len(utterances)} utterance(s) from {root}")
    return Dataset(tuple(utterances), condition, acquisition, protocol)
