"""Shared fixtures and builders for the test suite."""

from __future__ import annotations

import random

import pytest

from actantnet.corpus import EPOCH, Corpus, Tweet
from actantnet.freq import count_frequencies, select_vocabulary
from actantnet.graph import ActantGraph, GraphNode
from actantnet.matrix import build_incidence, cooccurrence


def make_tweet(tid, text, author="someone", language="en", timestamp=EPOCH) -> Tweet:
    return Tweet(str(tid), timestamp, author, language, text)


def corpus_of(*texts, authors=None) -> Corpus:
    authors = authors or ["someone"] * len(texts)
    return Corpus(
        [make_tweet(i + 1, t, author=a) for i, (t, a) in enumerate(zip(texts, authors))]
    )


@pytest.fixture
def tiny_corpus() -> Corpus:
    return corpus_of("#a @x hello", "#a #b @x", "#b world")


@pytest.fixture
def four_tweet_corpus() -> Corpus:
    return corpus_of("#a @x", "#a #b @x", "#b", "#c #d")


def build_cooccurrence(corpus, thresholds=None):
    """corpus -> (vocab, incidence, C) with all-1 thresholds by default."""
    table = count_frequencies(corpus)
    vocab = select_vocabulary(table, thresholds or {"hashtag": 1, "mention": 1})
    inc = build_incidence(corpus, vocab)
    return vocab, inc, cooccurrence(inc)


def random_corpus(rng: random.Random, max_tweets=50, n_hashtags=12, n_mentions=8) -> Corpus:
    """Random corpus over a small actant universe (<= 20 actants)."""
    tags = [f"h{k}" for k in range(n_hashtags)]
    users = [f"m{k}" for k in range(n_mentions)]
    tweets = []
    for i in range(rng.randint(1, max_tweets)):
        parts = []
        min_tags = 1 if i == 0 else 0  # at least one actant in the corpus
        for tag in rng.sample(tags, rng.randint(min_tags, min(4, n_hashtags))):
            parts.append(f"#{tag}")
        for user in rng.sample(users, rng.randint(0, min(3, n_mentions))):
            parts.append(f"@{user}")
        if rng.random() < 0.3:
            parts.append("filler")
        rng.shuffle(parts)
        tweets.append(make_tweet(i + 1, " ".join(parts)))
    return Corpus(tweets)


def naive_pair_counts(corpus, vocab) -> dict[tuple[int, int], int]:
    """Independent oracle: per-document pair counting over actant sets."""
    from actantnet.freq import AUTHOR
    from actantnet.tokenizer import extract_actants

    index = {(e.cls, e.canonical): j for j, e in enumerate(vocab)}
    token_classes = {e.cls for e in vocab if e.cls != AUTHOR}
    counts: dict[tuple[int, int], int] = {}
    for tweet in corpus:
        present = set()
        if token_classes:
            for key in extract_actants(tweet, classes=token_classes):
                if key in index:
                    present.add(index[key])
        if (AUTHOR, tweet.author) in index:
            present.add(index[(AUTHOR, tweet.author)])
        cols = sorted(present)
        for a in range(len(cols)):
            for b in range(a, len(cols)):
                key = (cols[a], cols[b])
                counts[key] = counts.get(key, 0) + 1
    return counts


def random_graph(rng: random.Random, max_nodes=12, coords=False) -> ActantGraph:
    """Random actant graph with unique typed nodes and integer weights."""
    n = rng.randint(1, max_nodes)
    nodes = []
    for k in range(n):
        cls = rng.choice(["hashtag", "mention", "word", "author"])
        marker = {"hashtag": "#", "mention": "@", "author": "&", "word": ""}[cls]
        nodes.append(GraphNode(cls, f"n{k}", f"{marker}n{k}", rng.randint(1, 9)))
    g = ActantGraph(nodes)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.3:
                g.add_edge(i, j, rng.randint(1, 9))
    if coords:
        g.coords = {i: (rng.uniform(-5, 5), rng.uniform(-5, 5)) for i in range(n)}
    return g


def random_connected_graph(rng: random.Random, max_nodes=30) -> ActantGraph:
    n = rng.randint(2, max_nodes)
    nodes = [GraphNode("word", f"n{k}", f"n{k}", 1) for k in range(n)]
    g = ActantGraph(nodes)
    order = list(range(n))
    rng.shuffle(order)
    for a, b in zip(order, order[1:]):  # random spanning tree
        g.add_edge(a, b, rng.randint(1, 5))
    for _ in range(n // 2):
        i, j = rng.sample(range(n), 2)
        key = (min(i, j), max(i, j))
        if key not in g.edges:
            g.add_edge(*key, rng.randint(1, 5))
    return g
