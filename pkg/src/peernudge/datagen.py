"""Seeded synthetic data: benchmark corpus, message pools, tweet streams.

The labeled benchmark corpus encodes its class in a noisy character-level
pattern.  Each text carries exactly one marker token ``H + sep + G`` built
from two-letter halves with every half letter randomly repeated
("grrrreat"-style stretching); the label is positive exactly when the two
halves belong to the same pair.  Standalone stretched half fragments are
scattered through both classes, so a bag of character bigrams sees which
halves occur but not whether they occur *joined*, while a convolution over
the raw characters sees the contiguous motif directly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from peernudge.matching import InterventionMessage, UserMetadata

HALF_PAIRS = (("sm", "ok"), ("vp", "ar"), ("cg", "ig"))
SEPARATORS = "xzq"

# Filler vocabulary; none of these words contain a marker bigram (the half
# bigrams, their stretch doubles, or a separator letter), checked in tests.
FILLER_WORDS = (
    "the", "and", "you", "for", "with", "this", "that", "just", "like",
    "time", "day", "off", "now", "new", "was", "were", "been", "have",
    "has", "they", "them", "then", "when", "what", "who", "how", "our",
    "your", "his", "her", "its", "not", "but", "can", "will", "would",
    "one", "two", "about", "into", "over", "under", "more", "only",
    "very", "also", "after", "before", "by", "on",
)


def _stretch(word: str, rng: np.random.Generator, max_reps: int = 2) -> str:
    return "".join(ch * int(rng.integers(1, max_reps + 1)) for ch in word)


def _marker_token(pair_idx: int, g_idx: int, rng: np.random.Generator) -> str:
    head = _stretch(HALF_PAIRS[pair_idx][0], rng)
    tail = _stretch(HALF_PAIRS[g_idx][1], rng)
    sep = SEPARATORS[rng.integers(len(SEPARATORS))]
    return head + sep + tail


def _fragment_token(rng: np.random.Generator) -> str:
    side = rng.integers(2)
    half = HALF_PAIRS[rng.integers(len(HALF_PAIRS))][side]
    return _stretch(half, rng)


def make_benchmark_text(label: int, rng: np.random.Generator,
                        max_fragments: int = 2) -> str:
    """One synthetic text; label 1 = matched halves, 0 = mismatched."""
    h = int(rng.integers(len(HALF_PAIRS)))
    if label == 1:
        g = h
    else:
        g = int(rng.integers(len(HALF_PAIRS) - 1))
        if g >= h:
            g += 1
    tokens = [_marker_token(h, g, rng)]
    for _ in range(int(rng.integers(4, 7))):
        tokens.append(FILLER_WORDS[rng.integers(len(FILLER_WORDS))])
    for _ in range(int(rng.integers(0, max_fragments + 1))):
        tokens.append(_fragment_token(rng))
    rng.shuffle(tokens)
    return " ".join(tokens)


def make_benchmark_corpus(n: int = 2000, seed: int = 0,
                          max_fragments: int = 2) -> list[dict]:
    """Balanced labeled corpus of ``n`` texts as {"id", "text", "label"}."""
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n):
        label = i % 2
        records.append({
            "id": f"bench-{i:05d}",
            "text": make_benchmark_text(label, rng, max_fragments=max_fragments),
            "label": label,
        })
    return records


def write_corpus_jsonl(records: list[dict], path: str | Path) -> None:
    lines = [json.dumps(r) for r in records]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def make_author(rng: np.random.Generator) -> UserMetadata:
    """Random but plausible profile metadata."""
    return UserMetadata(
        created_at_mms=int(rng.integers(1, 180)),
        favourites_count=int(rng.lognormal(5.0, 1.5)),
        followers_count=int(rng.lognormal(4.5, 1.8)),
        friends_count=int(rng.lognormal(4.8, 1.2)),
        listed_count=int(rng.lognormal(1.0, 1.2)),
        statuses_count=int(rng.lognormal(6.0, 1.5)),
        default_profile=bool(rng.random() < 0.4),
        default_profile_image=bool(rng.random() < 0.15),
        verified=bool(rng.random() < 0.05),
    )


_QUIT_TEMPLATES = (
    "quitting was the best thing i ever did for my health",
    "one year since my last cigarette and breathing feels brand new",
    "i put down the pack and picked my life back up",
    "cravings fade, the pride of quitting never does",
    "my lungs thanked me within a month of stopping",
    "money saved, mornings clearer, no more smoke breaks",
    "if i could quit after fifteen years anyone can",
    "the first week is the hardest, it truly gets easier",
    "swapped the lighter for running shoes and never looked back",
    "three years free and my sense of taste came back",
)


def make_message_pool(n_authors: int = 60, seed: int = 0) -> list[InterventionMessage]:
    """Synthetic pool of former-smoker posts with author metadata."""
    rng = np.random.default_rng(seed)
    pool = []
    for i in range(n_authors):
        text = _QUIT_TEMPLATES[int(rng.integers(len(_QUIT_TEMPLATES)))]
        pool.append(InterventionMessage(
            message_id=f"msg-{i:04d}",
            text=text,
            author=make_author(rng),
            source_tag="#iquitsmoking",
        ))
    return pool


def write_message_pool_jsonl(pool: list[InterventionMessage], path: str | Path) -> None:
    lines = []
    for message in pool:
        record = message.to_dict()
        record.pop("bin_id", None)
        lines.append(json.dumps(record))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


_PRO_TEMPLATES = (
    "nothing beats vaping with friends after work",
    "that first cigarette with coffee is pure bliss",
    "hookah night again, the cloud game was unreal",
    "new juul pods taste amazing, totally worth it",
    "a good cigar makes any evening better",
)
_NEUTRAL_TEMPLATES = (
    "walked the long way home and the sky was gorgeous",
    "our team shipped the release a day early",
    "learning to bake sourdough is harder than it looks",
    "the match went to penalties and i could not watch",
    "planted tomatoes this weekend, wish them luck",
)
_ANTI_KEYWORD_TEMPLATES = (
    "quit vaping last spring and feel great",
    "tobacco ads should stay away from kids",
    "my dad finally gave up cigarettes this year",
)


def make_tweet_stream(n: int = 200, seed: int = 0) -> list[dict]:
    """Synthetic tweet records; a mix of pro-, anti-, and off-topic posts."""
    rng = np.random.default_rng(seed)
    tweets = []
    for i in range(n):
        roll = rng.random()
        if roll < 0.35:
            text = _PRO_TEMPLATES[int(rng.integers(len(_PRO_TEMPLATES)))]
        elif roll < 0.5:
            text = _ANTI_KEYWORD_TEMPLATES[int(rng.integers(len(_ANTI_KEYWORD_TEMPLATES)))]
        else:
            text = _NEUTRAL_TEMPLATES[int(rng.integers(len(_NEUTRAL_TEMPLATES)))]
        tweets.append({
            "id": f"tw-{i:05d}",
            "text": text,
            "author": make_author(rng).to_dict(),
            "created_at": f"2026-01-01T00:{i // 60:02d}:{i % 60:02d}Z",
            "author_handle": f"user{i:05d}",
        })
    return tweets


def write_tweets_jsonl(tweets: list[dict], path: str | Path) -> None:
    lines = [json.dumps(t) for t in tweets]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
