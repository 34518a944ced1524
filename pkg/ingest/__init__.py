"""
Ingest Package for Silent Speech Decoder

Decodes framed 24-bit acquisition packets, converts ADC codes to microvolts,
reports dropped frames and cuts continuous streams into labeled utterances.
"""
from .core import (Gap, PromptEvent, ingest_packet_stream, load_schedule, schedule_to_dict, segment_utterances,
                   validate_schedule)
from .frames import (Frame, code_to_microvolts, emit_frame, emit_frames, frame_size, microvolts_to_code, parse_frame,
                     parse_frames)

__all__ = [
    "Gap", "PromptEvent", "ingest_packet_stream", "load_schedule", "schedule_to_dict", "segment_utterances",
    "validate_schedule", "Frame", "code_to_microvolts", "emit_frame", "emit_frames", "frame_size",
    "microvolts_to_code", "parse_frame", "parse_frames",
]
