"""Train all five classifiers on a synthetic corpus and print the
accuracy/std table.

The corpus hides its label in a noisy character-level pattern: two marker
halves joined by a separator, with "grrrreat"-style letter stretching, plus
standalone half fragments that pollute any bag-of-bigrams view.  Linear
models on hashed bigrams hover near chance, the MLP digs out part of the
pairing rule, and the character CNN reads the contiguous motif directly.

Run:  python3 demos/02_classifier_benchmark.py            (a few minutes)
      python3 demos/02_classifier_benchmark.py --quick    (smaller corpus)
"""

import sys
import time

from peernudge.classifiers import (
    CharCnn,
    DecisionTree,
    LabeledExample,
    LinearSvm,
    LogisticRegression,
    Mlp,
    evaluate,
)
from peernudge.datagen import make_benchmark_corpus
from peernudge.encoding import TextEncoder

quick = "--quick" in sys.argv
n_texts = 800 if quick else 2000
n_runs = 2 if quick else 10
cnn_epochs = 16 if quick else 8

corpus = make_benchmark_corpus(n=n_texts, seed=0)
print("three labeled samples:")
for record in corpus[:3]:
    print(f"  [{record['label']}] {record['text']}")

encoder = TextEncoder(max_len=80, feature_dim=512)
examples = [LabeledExample(encoder.encode(r["text"]), r["label"]) for r in corpus]

factories = {
    "Logistic Regression": lambda: LogisticRegression(learning_rate=0.5, epochs=300),
    "Decision Tree": lambda: DecisionTree(max_depth=12, min_leaf=5),
    "SVM": lambda: LinearSvm(lam=0.01, learning_rate=0.1, epochs=300),
    "MLP": lambda: Mlp(hidden=32, learning_rate=0.5, epochs=300, seed=0),
    "Char-CNN": lambda: CharCnn(learning_rate=0.08, epochs=cnn_epochs,
                                batch_size=64, seed=0),
}

print(f"\nevaluating on {n_texts} texts, {n_runs} random 70/30 splits each\n")
header = f"{'Classifier':<22}{'Accuracy':>10}{'Std Dev':>10}{'Recall':>10}"
print(header)
print("-" * len(header))
for name, factory in factories.items():
    started = time.time()
    r = evaluate(factory, examples, n_runs=n_runs, split=0.7, seed=0)
    print(f"{name:<22}{r.mean_accuracy:>10.4f}{r.std_accuracy:>10.4f}"
          f"{r.mean_recall:>10.4f}   [{time.time() - started:.1f}s]")
