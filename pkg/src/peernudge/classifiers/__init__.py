"""Five from-scratch binary classifiers with a shared interface."""

from peernudge.classifiers.charcnn import CharCnn, ConvLayer, temporal_conv
from peernudge.classifiers.common import (
    EvalReport,
    LabeledExample,
    evaluate,
    load_checkpoint,
    load_corpus_jsonl,
    save_checkpoint,
    split_indices,
    stack_inputs,
)
from peernudge.classifiers.logreg import LogisticRegression, sigmoid
from peernudge.classifiers.mlp import Mlp, relu
from peernudge.classifiers.svm import LinearSvm
from peernudge.classifiers.tree import DecisionTree, TreeNode, gini_impurity

MODEL_REGISTRY = {
    "logreg": LogisticRegression,
    "dtree": DecisionTree,
    "svm": LinearSvm,
    "mlp": Mlp,
    "charcnn": CharCnn,
}

__all__ = [
    "CharCnn",
    "ConvLayer",
    "DecisionTree",
    "EvalReport",
    "LabeledExample",
    "LinearSvm",
    "LogisticRegression",
    "MODEL_REGISTRY",
    "Mlp",
    "TreeNode",
    "evaluate",
    "gini_impurity",
    "load_checkpoint",
    "load_corpus_jsonl",
    "relu",
    "save_checkpoint",
    "sigmoid",
    "split_indices",
    "stack_inputs",
    "temporal_conv",
]
