"""
Acquisition frame codec.

Wire layout of one frame (4 + 3 x n_channels bytes):

    byte 0      magic 0xA5
    bytes 1-2   sequence counter, u16 little-endian (wraps modulo 2**16)
    byte 3      reserved, written as 0
    then        one sample per channel, 24-bit big-endian two's complement
"""
from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from emgcore.errors import BadMagic, OutOfBounds, ShortFrame

FRAME_MAGIC = 0xA5
FRAME_HEADER = struct.Struct("<BHB")
CODE_MIN = -(1 << 23)
CODE_MAX = (1 << 23) - 1
SEQ_MODULUS = 1 << 16


@dataclass(frozen=True)
class Frame:
    seq: int
    codes: tuple[int, ...]

    def __post_init__(self):
        for code in self.codes:
            if not CODE_MIN <= code <= CODE_MAX:
                raise OutOfBounds(f"[ingest] code {code} outside the 24-bit range")


def frame_size(n_channels):
    return FRAME_HEADER.size + 3 * n_channels


def _sign_extend(raw):
    raw = np.asarray(raw, dtype=np.int32)
    return np.where(raw & 0x800000, raw - (1 << 24), raw)


def parse_frame(data, n_channels, offset=0):
    """
    Decodes the frame starting at data[offset].

    Args:
        data: Byte sequence
        n_channels: Channels per frame
        offset: Byte offset of the frame within data, used in error reports

    Returns:
        Frame

    Raises:
        ShortFrame: If fewer than frame_size(n_channels) bytes are available
        BadMagic: If the first byte is not 0xA5
    """
    size = frame_size(n_channels)
    chunk = bytes(data[offset:offset + size])
    if len(chunk) < size:
        raise ShortFrame(f"[ingest] truncated frame at byte offset {offset}: {len(chunk)} of {size} bytes", offset)
    magic, seq, _ = FRAME_HEADER.unpack_from(chunk)
    if magic != FRAME_MAGIC:
        raise BadMagic(f"[ingest] bad magic 0x{magic:02X} at byte offset {offset}", offset)
    triples = np.frombuffer(chunk, dtype=np.uint8, offset=FRAME_HEADER.size).reshape(n_channels, 3).astype(np.int32)
    codes = _sign_extend((triples[:, 0] << 16) | (triples[:, 1] << 8) | triples[:, 2])
    return Frame(seq=seq, codes=tuple(int(c) for c in codes))


def emit_frame(seq, codes):
    """Encodes one frame; seq is taken modulo 2**16."""
    return emit_frames([seq], np.asarray(codes, dtype=np.int64).reshape(1, -1))


def emit_frames(seqs, codes):
    """
    Encodes many frames at once.

    Args:
        seqs: Sequence counters, one per frame
        codes: Frames x channels array of 24-bit codes

    Returns:
        Concatenated frame bytes
    """
    codes = np.asarray(codes, dtype=np.int64)
    if codes.size and (codes.min() < CODE_MIN or codes.max() > CODE_MAX):
        raise OutOfBounds(f"[ingest] codes must lie in [{CODE_MIN}, {CODE_MAX}]")
    n_frames, n_channels = codes.shape
    out = np.zeros((n_frames, frame_size(n_channels)), dtype=np.uint8)
    seqs = np.asarray(seqs, dtype=np.int64) % SEQ_MODULUS
    out[:, 0] = FRAME_MAGIC
    out[:, 1] = seqs & 0xFF
    out[:, 2] = seqs >> 8
    raw = codes & 0xFFFFFF
    out[:, 4::3] = raw >> 16
    out[:, 5::3] = (raw >> 8) & 0xFF
    out[:, 6::3] = raw & 0xFF
    return out.tobytes()


def parse_frames(data, n_channels):
    """
    Decodes a concatenation of frames.

    Frame boundaries are fixed by the frame size, so the whole buffer is viewed
    as a frames x bytes matrix and decoded in one pass.

    Returns:
        Tuple (sequence counters, frames x channels code matrix)

    Raises:
        BadMagic: At the first frame boundary without the magic byte
        ShortFrame: If the buffer ends inside a frame
    """
    size = frame_size(n_channels)
    buffer = np.frombuffer(bytes(data), dtype=np.uint8)
    n_frames = buffer.size // size
    frames = buffer[:n_frames * size].reshape(n_frames, size)
    bad = np.flatnonzero(frames[:, 0] != FRAME_MAGIC)
    if bad.size:
        offset = int(bad[0]) * size
        raise BadMagic(f"[ingest] bad magic 0x{int(frames[bad[0], 0]):02X} at byte offset {offset}", offset)
    if buffer.size % size:
        offset = n_frames * size
        raise ShortFrame(f"[ingest] truncated frame at byte offset {offset}: "
                         f"{buffer.size - offset} of {size} bytes", offset)
    seqs = frames[:, 1].astype(np.int64) | (frames[:, 2].astype(np.int64) << 8)
    body = frames[:, 4:].reshape(n_frames, n_channels, 3).astype(np.int32)
    codes = _sign_extend((body[..., 0] << 16) | (body[..., 1] << 8) | body[..., 2])
    return seqs, codes


def lsb_microvolts(cfg):
    """Microvolts per ADC code."""
    return cfg.vref / (cfg.gain * CODE_MAX) * 1e6


def code_to_microvolts(code, cfg):
    """
    Converts ADC codes to microvolts: code x vref / (gain x (2**23 - 1)) x 10**6.

    The largest positive code maps to the full scale vref / gain.
    Works elementwise on arrays.
    """
    return np.asarray(code, dtype=np.float64) * lsb_microvolts(cfg)


def microvolts_to_code(uv, cfg):
    """Nearest ADC code for a microvolt value, clipped to the 24-bit range."""
    codes = np.rint(np.asarray(uv, dtype=np.float64) / lsb_microvolts(cfg))
    return np.clip(codes, CODE_MIN, CODE_MAX).astype(np.int64)
