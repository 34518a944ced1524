"""
Core Model Package for Silent Speech Decoder

Domain types (words, recordings, utterances, datasets, feature vectors), the
acquisition/protocol/pipeline configuration, the error hierarchy and the
dataset invariant checks shared by every other package.
"""
from .configs import AcquisitionConfig, PipelineConfig, ProtocolConfig, from_dict, to_dict
from .errors import DecoderError
from .types import Condition, Dataset, FeatureVector, Recording, Utterance, Word
from .validation import Violation, validate_dataset

__all__ = [
    "AcquisitionConfig", "PipelineConfig", "ProtocolConfig", "from_dict", "to_dict",
    "DecoderError", "Condition", "Dataset", "FeatureVector", "Recording", "Utterance", "Word",
    "Violation", "validate_dataset",
]
