"""
Cross-validation splitters for the three evaluation strategies.

Every splitter returns index splits into ``dataset.utterances``; train and test
indices are disjoint, sorted, and together cover the evaluated utterances.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from emgcore.errors import MissingBatch, TooFewPerLabel, WrongSessionCount
from emgcore.types import Word


@dataclass(frozen=True, eq=False)
class Split:
    name: str
    train: np.ndarray
    test: np.ndarray
    group: str = ""


def session_7fold(d, session_id):
    """
    Batch-wise cross-validation inside one session.

    Fold k tests batch k and trains on the session's other batches.

    Args:
        d: Dataset
        session_id: Session to split

    Returns:
        One Split per batch (7 with the default protocol)

    Raises:
        MissingBatch: If the session does not hold exactly batches_per_session batches
    """
    batch_ids = d.batch_ids(session_id)
    expected = d.protocol.batches_per_session
    if len(batch_ids) != expected:
        raise MissingBatch(f"[splits] session {session_id} has {len(batch_ids)} batch(es), expected {expected}")
    session_rows = d.indices_where(session_id=session_id)
    batch_of = np.array([d.utterances[i].batch_id for i in session_rows])
    splits = []
    for k, batch_id in enumerate(batch_ids):
        in_test = batch_of == batch_id
        splits.append(Split(
            name=f"{session_id}-B{k + 1}",
            train=session_rows[~in_test],
            test=session_rows[in_test],
            group=session_id,
        ))
    return splits


def global_5fold(d, seed, n_folds=5):
    """
    Stratified k-fold over all sessions pooled together.

    The utterances are shuffled by a generator seeded with ``seed``; then, label
    by label in code order, they are dealt round-robin to the folds. Each label
    picks up at the fold after the one the previous label ended on, so both the
    per-label counts and the fold sizes differ between folds by at most one.

    Args:
        d: Dataset
        seed: Shuffle seed
        n_folds: Number of folds

    Returns:
        n_folds Splits

    Raises:
        TooFewPerLabel: If a present label has fewer than n_folds utterances
    """
    labels = d.labels()
    counts = np.bincount(labels, minlength=len(Word))
    short = [Word(code).name for code, count in enumerate(counts) if 0 < count < n_folds]
    if short:
        raise TooFewPerLabel(f"[splits] label(s) {short} have fewer than {n_folds} utterances")
    if labels.size == 0:
        raise TooFewPerLabel("[splits] dataset is empty")

    order = np.random.default_rng(seed).permutation(labels.size)
    fold_of = np.empty(labels.size, dtype=np.int64)
    dealt = 0
    for code in range(len(Word)):
        members = order[labels[order] == code]
        fold_of[members] = (dealt + np.arange(members.size)) % n_folds
        dealt += members.size

    everything = np.arange(labels.size)
    return [
        Split(name=f"fold{k + 1}", train=everything[fold_of != k], test=everything[fold_of == k])
        for k in range(n_folds)
    ]


def loso_splits(d):
    """
    Leave-one-session-out splits.

    Returns:
        One Split per session, testing that session and training on the others

    Raises:
        WrongSessionCount: If the dataset does not hold exactly n_sessions sessions
    """
    session_ids = d.session_ids()
    expected = d.protocol.n_sessions
    if len(session_ids) != expected:
        raise WrongSessionCount(f"[splits] dataset has {len(session_ids)} session(s), expected {expected}")
    session_of = np.array([u.session_id for u in d.utterances])
    everything = np.arange(len(d))
    return [
        Split(name=f"holdout-{sid}", train=everything[session_of != sid], test=everything[session_of == sid], group=sid)
        for sid in session_ids
    ]


def all_session_folds(d, seed=None):
    """Session-specific folds for every session of the dataset, in session order."""
    splits = []
    for session_id in d.session_ids():
        splits.extend(session_7fold(d, session_id))
    return splits


SPLIT_HANDLERS = {
    "session": all_session_folds,
    "global": global_5fold,
    "loso": lambda d, seed=None: loso_splits(d),
}
