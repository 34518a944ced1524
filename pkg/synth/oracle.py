"""
Trivially separable dataset for acceptance checks.

Word code w shifts channel 0 by w x separation microvolts on top of small
Gaussian noise. The offset sits at DC, so these datasets are evaluated with
the high-pass and notch stages switched off.
"""
import numpy as np

from emgcore.errors import InvalidConfig
from emgcore.types import Condition

from .generator import _UTTERANCE, _rng, build_dataset, quantize

ORACLE_NOISE_UV = 1.0


def oracle_dataset(proto, acq, separation, seed=0, noise_uv=ORACLE_NOISE_UV, threads=1):
    """
    Args:
        proto: ProtocolConfig
        acq: AcquisitionConfig
        separation: Offset step between consecutive word codes, microvolts
        seed: Seed of prompt orders and noise
        noise_uv: Noise standard deviation on every channel
        threads: Worker threads; the result does not depend on it

    Returns:
        Dataset

    Raises:
        InvalidConfig: Unless separation > 0
    """
    if not separation > 0:
        raise InvalidConfig(f"[synth] oracle separation must be > 0, got {separation}")
    n_samples = proto.articulation_samples(acq.sample_rate)

    def make_samples(word, key):
        samples = noise_uv * _rng(seed, _UTTERANCE, *key).standard_normal((acq.n_active, n_samples))
        samples[0] += int(word) * separation
        return quantize(samples, acq)

    return build_dataset(proto, acq, Condition.VOCALIZED, make_samples, seed, threads)


def decode_offsets(d, separation):
    """Nearest-offset decoding of each utterance's word from its channel-0 mean."""
    means = np.array([u.recording.samples[0].astype(np.float64).mean() for u in d.utterances])
    return np.clip(np.rint(means / separation), 0, 7).astype(np.int64)
