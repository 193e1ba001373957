"""Character-level text encoding and keyword filtering.

Raw post text is turned into two representations:

* a one-hot character matrix over a fixed 68-symbol alphabet, consumed by
  the character-convolution classifier, and
* a dense hashed character-bigram vector, consumed by the classical
  classifiers.

A keyword set with word-boundary matching decides which posts enter the
pipeline at all.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

# Canonical symbol order: lowercase letters, digits, punctuation, then a
# single trailing space.  Index of a character is stable across runs.
_LETTERS = "abcdefghijklmnopqrstuvwxyz"
_DIGITS = "0123456789"
_PUNCTUATION = "'\"`-,;.!?:\\/|_@#$%^*~+=<>()[]{}"
DEFAULT_ALPHABET_CHARS = _LETTERS + _DIGITS + _PUNCTUATION + " "

DEFAULT_MAX_LEN = 280
DEFAULT_FEATURE_DIM = 512


@dataclass(frozen=True)
class Alphabet:
    """An ordered set of characters with stable indices."""

    chars: str
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(set(self.chars)) != len(self.chars):
            raise ValueError("alphabet characters must be unique")
        if not self.chars:
            raise ValueError("alphabet must be non-empty")
        object.__setattr__(self, "_index", {c: i for i, c in enumerate(self.chars)})

    @property
    def size(self) -> int:
        return len(self.chars)

    def index_of(self, ch: str):
        """Index of ``ch``, or None if the character is out-of-alphabet."""
        return self._index.get(ch)

    def __contains__(self, ch: str) -> bool:
        return ch in self._index

    def digest(self) -> str:
        """Stable content hash, embedded in model checkpoints."""
        return hashlib.sha256(self.chars.encode("utf-8")).hexdigest()


def load_alphabet() -> Alphabet:
    """The default 68-character alphabet (letters, digits, punctuation, space)."""
    return Alphabet(DEFAULT_ALPHABET_CHARS)


def quantize(text: str, alphabet: Alphabet, max_len: int) -> np.ndarray:
    """One-hot encode ``text`` as an (alphabet.size, max_len) binary matrix.

    Text is lowercased first.  Column j holds the one-hot vector of character
    j; characters outside the alphabet and columns past the end of the text
    are all-zero.  Text longer than ``max_len`` is truncated.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    mat = np.zeros((alphabet.size, max_len), dtype=np.float64)
    for j, ch in enumerate(text.lower()[:max_len]):
        i = alphabet.index_of(ch)
        if i is not None:
            mat[i, j] = 1.0
    return mat


def _fnv1a_32(data: bytes) -> int:
    """32-bit FNV-1a hash; fixed so feature indices never vary across runs."""
    h = 0x811C9DC5
    for byte in data:
        h ^= byte
        h = (h * 0x01000193) & 0xFFFFFFFF
    return h


def featurize(text: str, alphabet: Alphabet, dim: int) -> np.ndarray:
    """Hashed character-bigram count vector, L2-normalized.

    Bigrams are taken over adjacent in-alphabet characters of the lowercased
    text; any out-of-alphabet character breaks adjacency rather than being
    skipped, so no spurious bigram forms around it.  Each bigram is hashed
    with 32-bit FNV-1a into one of ``dim`` buckets.  The zero vector (no
    bigrams) is returned unnormalized.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    vec = np.zeros(dim, dtype=np.float64)
    prev = None
    for ch in text.lower():
        cur = ch if ch in alphabet else None
        if prev is not None and cur is not None:
            vec[_fnv1a_32((prev + cur).encode("utf-8")) % dim] += 1.0
        prev = cur
    norm = float(np.linalg.norm(vec))
    if norm > 0.0:
        vec /= norm
    return vec


@dataclass(frozen=True)
class EncodedText:
    """Both encodings of one post, plus the number of characters considered."""

    onehot: np.ndarray
    features: np.ndarray
    source_len: int


class TextEncoder:
    """Bundles an alphabet with fixed output shapes for repeatable encoding."""

    def __init__(self, alphabet: Alphabet | None = None,
                 max_len: int = DEFAULT_MAX_LEN,
                 feature_dim: int = DEFAULT_FEATURE_DIM):
        self.alphabet = alphabet if alphabet is not None else load_alphabet()
        if max_len < 1 or feature_dim < 1:
            raise ValueError("max_len and feature_dim must be >= 1")
        self.max_len = max_len
        self.feature_dim = feature_dim

    def encode(self, text: str) -> EncodedText:
        return EncodedText(
            onehot=quantize(text, self.alphabet, self.max_len),
            features=featurize(text, self.alphabet, self.feature_dim),
            source_len=len(text.lower()),
        )

    def config(self) -> dict:
        return {
            "alphabet_hash": self.alphabet.digest(),
            "max_len": self.max_len,
            "feature_dim": self.feature_dim,
        }


def _phrase_pattern(phrase: str) -> re.Pattern:
    # Single words match on word boundaries; multi-word phrases match as
    # contiguous word sequences (any run of whitespace between words).
    # Lookarounds instead of \b so phrases starting/ending with non-word
    # characters still anchor correctly.
    tokens = [re.escape(t) for t in phrase.split()]
    return re.compile(r"(?<!\w)" + r"\s+".join(tokens) + r"(?!\w)", re.IGNORECASE)


class KeywordSet:
    """Lowercased keyword phrases with compiled boundary-aware patterns."""

    def __init__(self, phrases):
        cleaned = []
        seen = set()
        for raw in phrases:
            phrase = " ".join(raw.lower().split())
            if phrase and phrase not in seen:
                seen.add(phrase)
                cleaned.append(phrase)
        if not cleaned:
            raise ValueError("keyword set must contain at least one phrase")
        self.phrases = tuple(cleaned)
        self._patterns = [(p, _phrase_pattern(p)) for p in self.phrases]

    def __len__(self) -> int:
        return len(self.phrases)

    def match(self, text: str) -> list[str]:
        """All phrases found in ``text``, in keyword-set order."""
        return [p for p, pat in self._patterns if pat.search(text)]


def load_keywords(path: str | Path | None = None) -> KeywordSet:
    """Load a keyword file: one phrase per line, UTF-8, '#' comments allowed.

    With no path, the bundled tobacco-related keyword list is used.
    """
    if path is None:
        path = Path(__file__).parent / "data" / "keywords.txt"
    lines = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            lines.append(stripped)
    return KeywordSet(lines)
