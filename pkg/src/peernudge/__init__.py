"""Pro-tobacco post detection with peer-message intervention matching.

The package splits into five areas:

* :mod:`peernudge.encoding` — character-level text encodings and the
  keyword filter.
* :mod:`peernudge.classifiers` — five from-scratch binary classifiers
  with a shared train/predict/evaluate interface.
* :mod:`peernudge.clustering` / :mod:`peernudge.matching` — metadata
  clustering of message authors and the group decision tree that maps a
  target user to an intervention message.
* :mod:`peernudge.pipeline` — the scan/filter/classify/approve loop with
  an append-only audit log.
* :mod:`peernudge.service` — the HTTP facade used by the operator
  console and scripted clients.
"""

from peernudge.encoding import (
    Alphabet,
    EncodedText,
    KeywordSet,
    TextEncoder,
    featurize,
    load_alphabet,
    load_keywords,
    quantize,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "EncodedText",
    "KeywordSet",
    "TextEncoder",
    "featurize",
    "load_alphabet",
    "load_keywords",
    "quantize",
    "__version__",
]
