"""
Dataset invariant checks.

Violations are returned as data so callers can log or filter them; nothing
here raises.
"""
from collections import Counter
from dataclasses import dataclass

from .types import Word


@dataclass(frozen=True)
class Violation:
    rule: str
    session_id: str
    batch_id: str
    word: str
    detail: str

    def __str__(self):
        where = f"session {self.session_id} batch {self.batch_id}"
        if self.word:
            where += f" word {self.word}"
        return f"{self.rule}: {where}: {self.detail}"


def validate_dataset(d):
    """
    Checks every Dataset invariant.

    Rules:
        - length: each recording has round(articulation_s x sample_rate) samples
        - channels: each recording has one row per active channel
        - count imbalance: each (session, batch) holds exactly reps_per_batch
          utterances of every word
        - order: a batch's prompt order is not sorted by word

    Args:
        d: Dataset to check

    Returns:
        List of Violation; empty iff the dataset is well formed
    """
    violations = []
    expected_len = d.protocol.articulation_samples(d.acquisition.sample_rate)
    expected_channels = d.acquisition.n_active
    reps = d.protocol.reps_per_batch

    batches = {}
    for u in d.utterances:
        batches.setdefault((u.session_id, u.batch_id), []).append(u)
        rec = u.recording
        if rec.n_samples != expected_len:
            violations.append(Violation("length", u.session_id, u.batch_id, u.word.name,
                                        f"prompt {u.prompt_index} has {rec.n_samples} samples, expected {expected_len}"))
        if rec.n_channels != expected_channels:
            violations.append(Violation("channels", u.session_id, u.batch_id, u.word.name,
                                        f"prompt {u.prompt_index} has {rec.n_channels} channels, expected {expected_channels}"))

    for (session_id, batch_id), members in batches.items():
        counts = Counter(u.word for u in members)
        for word in Word:
            if counts.get(word, 0) != reps:
                violations.append(Violation("count imbalance", session_id, batch_id, word.name,
                                            f"{counts.get(word, 0)} utterances, expected {reps}"))
        ordered = sorted(members, key=lambda u: u.prompt_index)
        codes = [int(u.word) for u in ordered]
        if len(codes) > 1 and len(set(codes)) > 1 and codes == sorted(codes):
            violations.append(Violation("order", session_id, batch_id, "",
                                        "prompt order is sorted by word, expected randomized prompts"))
    return violations
