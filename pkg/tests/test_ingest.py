import json

import numpy as np
import pytest

from emgcore.configs import AcquisitionConfig, ProtocolConfig
from emgcore.errors import BadMagic, InvalidConfig, OutOfBounds, ShortFrame
from emgcore.types import Condition, Recording, Word
from ingest import (Gap, PromptEvent, code_to_microvolts, emit_frame, frame_size, ingest_packet_stream,
                    load_schedule, microvolts_to_code, parse_frame, segment_utterances, validate_schedule)
from ingest.core import schedule_to_dict
from ingest.frames import CODE_MAX, CODE_MIN, emit_frames, parse_frames


def _frame(seq, channel_bytes):
    return bytes([0xA5, seq & 0xFF, seq >> 8, 0]) + bytes(channel_bytes)


@pytest.mark.parametrize("raw, code", [
    ((0x7F, 0xFF, 0xFF), 8388607),
    ((0x80, 0x00, 0x00), -8388608),
    ((0xFF, 0xFF, 0xFF), -1),
    ((0x00, 0x00, 0x01), 1),
])
def test_parse_frame_sign_extends_big_endian_samples(raw, code):
    frame = parse_frame(_frame(513, raw), 1)
    assert frame.seq == 513
    assert frame.codes == (code,)


def test_frame_size():
    assert frame_size(16) == 52
    assert len(emit_frame(0, [0] * 16)) == 52


def test_emit_frame_matches_wire_layout():
    assert emit_frame(0x1234, [1, -1]) == bytes([0xA5, 0x34, 0x12, 0x00, 0x00, 0x00, 0x01, 0xFF, 0xFF, 0xFF])


def test_emit_and_parse_agree():
    codes = [CODE_MAX, CODE_MIN, 0, -2, 123456]
    assert parse_frame(emit_frame(70000, codes), 5).codes == tuple(codes)
    assert parse_frame(emit_frame(70000, codes), 5).seq == 70000 % 65536


def test_random_codes_survive_emit_and_parse():
    rng = np.random.default_rng(21)
    codes = np.concatenate([[CODE_MIN, CODE_MAX], rng.integers(CODE_MIN, CODE_MAX + 1, size=100_000)])
    frames = codes.reshape(-1, 2)
    seqs, parsed = parse_frames(emit_frames(np.arange(len(frames)), frames), 2)
    np.testing.assert_array_equal(parsed, frames)
    np.testing.assert_array_equal(seqs, np.arange(len(frames)))


def test_emit_frame_rejects_out_of_range_codes():
    with pytest.raises(OutOfBounds):
        emit_frame(0, [CODE_MAX + 1])


def test_parse_frame_errors_carry_offsets():
    data = _frame(0, (0, 0, 1)) + bytes([0x00, 0, 0, 0, 0, 0, 0])
    with pytest.raises(BadMagic) as excinfo:
        parse_frame(data, 1, offset=7)
    assert excinfo.value.offset == 7
    with pytest.raises(ShortFrame) as excinfo:
        parse_frame(data[:5], 1)
    assert excinfo.value.offset == 0


def test_parse_frames_reports_first_bad_boundary():
    good = emit_frames(range(3), np.zeros((3, 2), dtype=np.int64))
    size = frame_size(2)
    damaged = bytearray(good)
    damaged[2 * size] = 0x5A
    with pytest.raises(BadMagic) as excinfo:
        parse_frames(bytes(damaged), 2)
    assert excinfo.value.offset == 2 * size
    with pytest.raises(ShortFrame) as excinfo:
        parse_frames(good[:-3], 2)
    assert excinfo.value.offset == 2 * size


def test_code_to_microvolts():
    acq = AcquisitionConfig(gain=12.0, vref=2.4)
    assert code_to_microvolts(0, acq) == 0.0
    assert code_to_microvolts(CODE_MAX, acq) == pytest.approx(200000.0, rel=1e-12)
    assert code_to_microvolts(1, acq) == pytest.approx(0.0238419, rel=1e-5)
    assert code_to_microvolts(-CODE_MAX, acq) == pytest.approx(-200000.0, rel=1e-12)


def test_microvolts_to_code_rounds_and_clips():
    acq = AcquisitionConfig()
    lsb = code_to_microvolts(1, acq)
    np.testing.assert_array_equal(microvolts_to_code([0.4 * lsb, 0.6 * lsb, -1e9, 1e9], acq),
                                  [0, 1, CODE_MIN, CODE_MAX])


def _capture(n_channels, seqs, rng=None):
    rng = rng or np.random.default_rng(0)
    codes = rng.integers(-1000, 1000, size=(len(seqs), n_channels))
    return emit_frames(seqs, codes), codes


def test_contiguous_stream_has_no_gaps():
    acq = AcquisitionConfig(n_channels_recorded=2, active_channels=(0, 1))
    data, codes = _capture(2, np.arange(1000))
    stream, gaps = ingest_packet_stream(data, acq)
    assert stream.n_samples == 1000
    assert gaps == []
    np.testing.assert_array_equal(stream.samples, np.float32(code_to_microvolts(codes, acq).T))


def test_dropped_frame_is_held_and_reported(caplog):
    acq = AcquisitionConfig(n_channels_recorded=2, active_channels=(0, 1))
    data, codes = _capture(2, [0, 1, 3])
    stream, gaps = ingest_packet_stream(data, acq)
    assert stream.n_samples == 4
    assert gaps == [Gap(after_seq=1, lost=1, start_sample=2)]
    np.testing.assert_array_equal(stream.samples[:, 2], stream.samples[:, 1])
    np.testing.assert_array_equal(stream.samples[:, 3], np.float32(code_to_microvolts(codes[2], acq)))
    assert "1 frame(s) lost" in caplog.text


def test_repeated_frame_is_dropped(caplog):
    acq = AcquisitionConfig(n_channels_recorded=1, active_channels=(0,))
    data = emit_frames([0, 1, 1, 2], [[1], [2], [2], [3]])
    stream, gaps = ingest_packet_stream(data, acq)
    assert gaps == []
    np.testing.assert_array_equal(stream.samples[0], np.float32(code_to_microvolts(np.array([1, 2, 3]), acq)))
    assert "Dropping repeated frame seq 1" in caplog.text


def test_late_frame_is_dropped_and_its_slot_held():
    acq = AcquisitionConfig(n_channels_recorded=1, active_channels=(0,))
    data = emit_frames([0, 1, 3, 2, 4], [[10], [11], [13], [12], [14]])
    stream, gaps = ingest_packet_stream(data, acq)
    assert gaps == [Gap(after_seq=1, lost=1, start_sample=2)]
    np.testing.assert_array_equal(stream.samples[0],
                                  np.float32(code_to_microvolts(np.array([10, 11, 11, 13, 14]), acq)))


def test_sequence_counter_wraps():
    acq = AcquisitionConfig(n_channels_recorded=1, active_channels=(0,))
    data, _ = _capture(1, [65534, 65535, 0, 2])
    stream, gaps = ingest_packet_stream(data, acq)
    assert stream.n_samples == 5
    assert gaps == [Gap(after_seq=0, lost=1, start_sample=3)]


def test_empty_capture():
    stream, gaps = ingest_packet_stream(b"", AcquisitionConfig())
    assert stream.n_samples == 0
    assert stream.n_channels == 16
    assert gaps == []


def test_truncated_capture_raises_short_frame():
    acq = AcquisitionConfig()
    data, _ = _capture(16, range(4))
    with pytest.raises(ShortFrame) as excinfo:
        ingest_packet_stream(data[:-10], acq)
    assert excinfo.value.offset == 3 * frame_size(16)


@pytest.fixture
def stream():
    samples = np.arange(3 * 8000, dtype=np.float64).reshape(3, 8000)
    return Recording(samples, 500.0)


def test_segment_utterances_cuts_articulation_interval(stream):
    acq = AcquisitionConfig(n_channels_recorded=3, active_channels=(0, 2))
    events = [PromptEvent("1", 0, Word.GO, 5000)]
    [u] = segment_utterances(stream, events, ProtocolConfig(), acq, session_id="S2")
    assert (u.word, u.session_id, u.batch_id, u.prompt_index, u.flagged) == (Word.GO, "S2", "1", 0, False)
    assert u.recording.n_channels == 2
    np.testing.assert_array_equal(u.recording.samples, stream.samples[[0, 2], 5000:7000])


def test_segment_utterances_160_events():
    proto = ProtocolConfig()
    acq = AcquisitionConfig(n_channels_recorded=1, active_channels=(0,))
    period = proto.prompt_period_samples(500.0)
    long_stream = Recording(np.zeros((1, 160 * period)), 500.0)
    events = [PromptEvent("1", k, Word(k % 8), k * period) for k in range(160)]
    validate_schedule(events, proto, 500.0)
    assert len(segment_utterances(long_stream, events, proto, acq)) == 160


def test_segment_utterances_out_of_bounds_names_event():
    short_stream = Recording(np.zeros((16, 1500)), 500.0)
    event = PromptEvent("1", 0, Word.UP, 100)
    with pytest.raises(OutOfBounds) as excinfo:
        segment_utterances(short_stream, [event], ProtocolConfig())
    assert excinfo.value.event == event


def test_segment_utterances_flags_gap_overlap(stream):
    acq = AcquisitionConfig(n_channels_recorded=3, active_channels=(0,))
    events = [PromptEvent("1", 0, Word.UP, 0), PromptEvent("1", 1, Word.DOWN, 2500)]
    utterances = segment_utterances(stream, events, ProtocolConfig(), acq, gaps=[Gap(4, 3, 2600)])
    assert [u.flagged for u in utterances] == [False, True]


def test_validate_schedule_rejects_crowded_onsets():
    proto = ProtocolConfig()
    with pytest.raises(InvalidConfig):
        validate_schedule([PromptEvent("1", 0, Word.UP, 0), PromptEvent("1", 1, Word.UP, 2499)], proto, 500.0)
    with pytest.raises(InvalidConfig):
        validate_schedule([PromptEvent("1", 0, Word.UP, 5000), PromptEvent("1", 1, Word.UP, 0)], proto, 500.0)


def test_schedule_document_round_trip(tmp_path):
    events = [PromptEvent("2", 0, Word.STOP, 0), PromptEvent("2", 1, Word.LEFT, 2500)]
    path = tmp_path / "schedule.json"
    path.write_text(json.dumps(schedule_to_dict("S3", Condition.SILENT, events)), encoding="utf-8")
    assert load_schedule(str(path)) == ("S3", Condition.SILENT, events)


def test_load_schedule_rejects_malformed(tmp_path):
    path = tmp_path / "schedule.json"
    path.write_text(json.dumps({"events": [{"batch": "1"}]}), encoding="utf-8")
    with pytest.raises(InvalidConfig):
        load_schedule(str(path))
