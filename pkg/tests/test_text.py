"""Token counting and sentence segmentation rules."""

from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from groundline.text import (
    content_words,
    count_tokens,
    jaccard,
    sentence_spans,
    sentences,
    word_tokens,
)


def test_count_tokens_empty():
    assert count_tokens("") == 0


def test_count_tokens_mixed_whitespace():
    assert count_tokens("a  b\tc") == 3


def test_count_tokens_matches_split_oracle():
    paragraph = (
        "Fiscal decentralization reform, launched in 2016,\n"
        "shifted 40% of revenue  authority\tto district councils."
    )
    assert count_tokens(paragraph) == len(paragraph.split())


@given(st.text())
def test_count_tokens_equals_split_len(text):
    assert count_tokens(text) == len(text.split())


def test_sentence_spans_tile_text():
    text = "First point. Second point! Third? 4th and last"
    spans = sentence_spans(text)
    assert "".join(text[s:e] for s, e in spans) == text
    assert len(spans) == 4


def test_sentence_spans_no_terminator_single_span():
    assert sentence_spans("no terminator here") == [(0, 18)]


def test_sentence_split_requires_upper_or_digit():
    # Lowercase after the period: not a boundary under the documented rule.
    assert len(sentences("e.g. something else")) == 1
    assert len(sentences("End. 2015 began")) == 2


@given(st.text())
def test_sentence_spans_always_tile(text):
    spans = sentence_spans(text)
    assert "".join(text[s:e] for s, e in spans) == text
    for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
        assert e1 == s2
        assert s1 < e1


def test_word_tokens_lowercase_alnum():
    assert word_tokens("Tax-revenue grew 4.5% in 2020!") == [
        "tax", "revenue", "grew", "4", "5", "in", "2020"]


def test_content_words_drop_stopwords():
    assert content_words("What is the Gini coefficient?") == {"gini", "coefficient"}


def test_jaccard_edges():
    assert jaccard(set(), set()) == 0.0
    assert jaccard({"a"}, {"a"}) == 1.0
    assert jaccard({"a", "b"}, {"b", "c"}) == 1 / 3
