"""Typed tokenization of tweet text.

Splits a message into hashtag, mention, URL, and word tokens:

* mention:  ``@`` immediately followed by 1-15 handle characters
  ``[A-Za-z0-9_]`` (Twitter's handle grammar; the cap keeps trailing
  punctuation such as ``@FAVV_Consument:`` out of the handle);
* hashtag:  ``#`` followed by one or more word characters with at least
  one non-digit (all-digit tags like ``#123`` degrade to a plain word);
* url:      anything starting ``http://``, ``https://`` or ``t.co/`` up
  to the next whitespace;
* word:     a maximal run of letters/digits with interior apostrophes
  (``don't``); every other character splits tokens and is dropped.

Two Twitter-era quirks are handled explicitly: a bare ``@`` used as the
word "at" (``Ted Turner @ UN Foundation dinner``) is dropped unless
``strip_location_at`` is off, and mentions inside a retweet header
``RT @user:`` count as addressed actors unless
``treat_rt_mention_as_address`` is off.

Identity is case-insensitive: the canonical form of a hashtag/mention is
its lowercased body without the marker; words lowercase as-is; URLs keep
their exact surface (schemes and paths are case-sensitive).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

HASHTAG = "hashtag"
MENTION = "mention"
URL = "url"
WORD = "word"

_TOKEN_RE = re.compile(
    r"""
      (?P<url>(?:https?://|t\.co/)\S*)
    | (?P<mention>@[A-Za-z0-9_]{1,15})
    | (?P<hashtag>\#\w+)
    | (?P<at>@)
    | (?P<word>[^\W_](?:['’][^\W_]|[^\W_])*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class TokenizerOptions:
    """Switches for the Twitter-specific tokenization rules."""

    treat_rt_mention_as_address: bool = True
    strip_location_at: bool = True
    keep_urls: bool = False


DEFAULT_OPTIONS = TokenizerOptions()


@dataclass(frozen=True, slots=True)
class Token:
    """One typed token. ``span`` holds byte offsets [start, end) into
    the UTF-8 encoding of the source text."""

    cls: str
    canonical: str
    display: str
    span: tuple[int, int]


def iter_tokens(
    text: str, opts: TokenizerOptions = DEFAULT_OPTIONS
) -> Iterator[tuple[str, str, str, int, int]]:
    """Yield ``(cls, canonical, surface, char_start, char_end)`` tuples.

    Low-level single-pass scanner used by both :func:`tokenize` and the
    frequency counters; spans here are *character* offsets.
    """
    prev_rt = False
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        surface = m.group()
        start, end = m.span()
        if kind == "url":
            if opts.keep_urls:
                yield URL, surface, surface, start, end
            prev_rt = False
        elif kind == "mention":
            if opts.treat_rt_mention_as_address or not prev_rt:
                yield MENTION, surface[1:].lower(), surface, start, end
            prev_rt = False
        elif kind == "hashtag":
            body = surface[1:]
            if body.isdigit():
                # all-digit tag: platform rejects it, keep the digits as a word
                yield WORD, body, body, start + 1, end
            else:
                yield HASHTAG, body.lower(), surface, start, end
            prev_rt = False
        elif kind == "at":
            # bare @ followed by whitespace/punctuation: location "at"
            if not opts.strip_location_at:
                yield WORD, "@", "@", start, end
            prev_rt = False
        else:
            canonical = surface.lower()
            yield WORD, canonical, surface, start, end
            prev_rt = canonical == "rt"


def tokenize(text: str, opts: TokenizerOptions = DEFAULT_OPTIONS) -> list[Token]:
    """Tokenize ``text`` into an ordered list of :class:`Token`.

    Deterministic; spans are non-overlapping, strictly increasing byte
    ranges. Unclassifiable characters (punctuation, emoji) are skipped.
    """
    if text.isascii():
        to_byte = None
    else:
        to_byte = [0] * (len(text) + 1)
        acc = 0
        for i, ch in enumerate(text):
            acc += len(ch.encode("utf-8"))
            to_byte[i + 1] = acc
    out = []
    for cls, canonical, surface, cs, ce in iter_tokens(text, opts):
        if to_byte is None:
            span = (cs, ce)
        else:
            span = (to_byte[cs], to_byte[ce])
        out.append(Token(cls, canonical, surface, span))
    return out


def extract_actants(
    tweet,
    opts: TokenizerOptions = DEFAULT_OPTIONS,
    classes: frozenset[str] | set[str] = frozenset({HASHTAG, MENTION}),
) -> set[tuple[str, str]]:
    """Return the set of ``(class, canonical)`` actants in one tweet.

    Set semantics: a token occurring twice in the same tweet appears
    once. Only the requested classes are returned and URLs never are.
    ``tweet`` may be anything with a ``text`` attribute.
    """
    if not classes:
        raise ValueError("classes must be non-empty")
    want = frozenset(classes) - {URL}
    found = set()
    for cls, canonical, _surface, _s, _e in iter_tokens(tweet.text, opts):
        if cls in want:
            found.add((cls, canonical))
    return found
