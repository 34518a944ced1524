"""
Learning Package for Silent Speech Decoder

A from-scratch Random Forest classifier, the cross-validation splitters and
the evaluation harness that turns folds into accuracy reports.

Splitters are registered in SPLIT_HANDLERS under the scheme names accepted by
the command line (session, global, loso).
"""
from .evaluation import CHANCE_LEVEL, REFERENCE_ACCURACY, Aggregate, EvalReport, FoldResult, Scheme, evaluate
from .forest import DecisionTree, ForestModel, ForestParams, fit_forest, predict, predict_batch
from .splits import SPLIT_HANDLERS, Split, all_session_folds, global_5fold, loso_splits, session_7fold

__all__ = [
    "CHANCE_LEVEL", "REFERENCE_ACCURACY", "Aggregate", "EvalReport", "FoldResult", "Scheme", "evaluate",
    "DecisionTree", "ForestModel", "ForestParams", "fit_forest", "predict", "predict_batch",
    "SPLIT_HANDLERS", "Split", "all_session_folds", "global_5fold", "loso_splits", "session_7fold",
]
