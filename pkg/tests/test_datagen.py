import numpy as np

from peernudge.datagen import (
    FILLER_WORDS,
    HALF_PAIRS,
    SEPARATORS,
    make_benchmark_corpus,
    make_message_pool,
    make_tweet_stream,
)
from peernudge.encoding import load_alphabet


def test_filler_words_carry_no_marker_bigrams():
    marker_bigrams = set()
    for head, tail in HALF_PAIRS:
        marker_bigrams.add(head)
        marker_bigrams.add(tail)
        for ch in head + tail:
            marker_bigrams.add(ch + ch)
    for word in FILLER_WORDS:
        for sep in SEPARATORS:
            assert sep not in word
        for a, b in zip(word, word[1:]):
            assert a + b not in marker_bigrams, (word, a + b)


def test_corpus_is_balanced_and_deterministic():
    a = make_benchmark_corpus(200, seed=3)
    b = make_benchmark_corpus(200, seed=3)
    assert a == b
    labels = [r["label"] for r in a]
    assert labels.count(0) == labels.count(1) == 100


def test_each_text_contains_exactly_one_marker():
    seps = set(SEPARATORS)
    for record in make_benchmark_corpus(100, seed=11):
        with_sep = [t for t in record["text"].split() if set(t) & seps]
        assert len(with_sep) == 1
        token = with_sep[0]
        squeezed = "".join(ch for ch, prev in zip(token, " " + token) if ch != prev)
        head, _, tail = (squeezed.partition(s) for s in seps if s in squeezed).__next__()
        pair = next(i for i, (h, _) in enumerate(HALF_PAIRS) if h == head)
        tail_pair = next(i for i, (_, g) in enumerate(HALF_PAIRS) if g == tail)
        assert (pair == tail_pair) == bool(record["label"])


def test_texts_fit_default_benchmark_window():
    alphabet = load_alphabet()
    for record in make_benchmark_corpus(300, seed=5):
        assert len(record["text"]) <= 80
        assert all(ch in alphabet for ch in record["text"])


def test_pool_and_stream_are_deterministic():
    assert [m.to_dict() for m in make_message_pool(20, seed=2)] == \
           [m.to_dict() for m in make_message_pool(20, seed=2)]
    assert make_tweet_stream(30, seed=2) == make_tweet_stream(30, seed=2)


def test_stream_mixes_keyword_and_plain_posts(keywords):
    tweets = make_tweet_stream(100, seed=4)
    matched = [t for t in tweets if keywords.match(t["text"])]
    assert 0 < len(matched) < len(tweets)
