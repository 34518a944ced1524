import json

import numpy as np
import pytest

from emgcore.configs import AcquisitionConfig, PipelineConfig, ProtocolConfig
from synth.generator import SynthConfig, build_dataset, generate_dataset


@pytest.fixture
def pipeline():
    return PipelineConfig()


@pytest.fixture
def small_acq():
    """Four recorded channels, three of them active."""
    return AcquisitionConfig(n_channels_recorded=4, active_channels=(0, 1, 3))


@pytest.fixture
def small_proto():
    """One repetition per word and batch, 1.6 s prompts: 56 utterances per session."""
    return ProtocolConfig(articulation_s=1.6, rest_s=0.4, reps_per_batch=1)


@pytest.fixture
def small_dataset(small_proto, small_acq):
    return generate_dataset(small_proto, small_acq, SynthConfig(seed=3))


@pytest.fixture(scope="session")
def skeleton_dataset():
    """Full-size protocol (3 x 7 x 160 utterances) with two-sample recordings, for split bookkeeping."""
    proto = ProtocolConfig()
    acq = AcquisitionConfig(n_channels_recorded=1, active_channels=(0,))
    return build_dataset(proto, acq, "vocalized", lambda word, key: np.zeros((1, 2)), seed=0)


@pytest.fixture
def config_file(tmp_path):
    """Application config with the small protocol and a light forest."""
    path = tmp_path / "silent_speech_config.json"
    path.write_text(json.dumps({
        "acquisition": {"n_channels_recorded": 4, "active_channels": [0, 1, 3]},
        "protocol": {"articulation_s": 1.6, "rest_s": 0.4, "reps_per_batch": 1},
        "forest": {"n_trees": 10},
    }), encoding="utf-8")
    return str(path)
