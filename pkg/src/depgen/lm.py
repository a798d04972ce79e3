"""Interpolated trigram model over (word, PoS) tokens."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

BOS = ("<s>", "<s>")
EOS = ("</s>", "</s>")
UNK = ("<unk>", "<unk>")

DEFAULT_WEIGHTS = (0.6, 0.3, 0.1)


@dataclass(frozen=True)
class TrigramLM:
    """Fixed-weight interpolation of trigram, bigram and add-one unigram estimates.

    A history never seen in training hands its weight to the next lower order,
    so every conditional distribution sums to one over the vocabulary plus UNK.
    With a one-token history the bigram and unigram weights are renormalized;
    with no history the unigram estimate is used alone.
    """

    unigrams: dict = field(default_factory=dict)
    bigrams: dict = field(default_factory=dict)
    trigrams: dict = field(default_factory=dict)
    weights: tuple = DEFAULT_WEIGHTS

    @cached_property
    def total(self) -> int:
        return sum(self.unigrams.values())

    @cached_property
    def vocab_size(self) -> int:
        """Seen types (EOS included) plus the UNK type."""
        return len(self.unigrams) + 1

    @cached_property
    def _bi_hist(self) -> Counter:
        out = Counter()
        for (v, _), c in self.bigrams.items():
            out[v] += c
        return out

    @cached_property
    def _tri_hist(self) -> Counter:
        out = Counter()
        for (u, v, _), c in self.trigrams.items():
            out[(u, v)] += c
        return out

    def p_unigram(self, w) -> float:
        return (self.unigrams.get(w, 0) + 1) / (self.total + self.vocab_size)

    def p_bigram(self, w, v) -> float:
        h = self._bi_hist.get(v, 0)
        if not h:
            return self.p_unigram(w)
        return self.bigrams.get((v, w), 0) / h

    def p_trigram(self, w, u, v) -> float:
        h = self._tri_hist.get((u, v), 0)
        if not h:
            return self.p_bigram(w, v)
        return self.trigrams.get((u, v, w), 0) / h

    def cond_prob(self, w, context: Sequence = ()) -> float:
        l3, l2, l1 = self.weights
        context = tuple(context)[-2:]
        if len(context) == 2:
            u, v = context
            return l3 * self.p_trigram(w, u, v) + l2 * self.p_bigram(w, v) + l1 * self.p_unigram(w)
        if len(context) == 1:
            (v,) = context
            return (l2 * self.p_bigram(w, v) + l1 * self.p_unigram(w)) / (l2 + l1)
        return self.p_unigram(w)

    def vocabulary(self) -> list:
        return sorted(self.unigrams)

    def validate(self) -> None:
        for table in (self.unigrams, self.bigrams, self.trigrams):
            for key, c in table.items():
                if not isinstance(c, int) or c <= 0:
                    raise ValueError(f"invalid n-gram count {c!r} for {key!r}")
        if abs(sum(self.weights) - 1.0) > 1e-12 or min(self.weights) < 0:
            raise ValueError(f"interpolation weights must be a distribution: {self.weights}")


def train_trigram(sentences: Iterable[Sequence[tuple[str, str]]],
                  weights: tuple = DEFAULT_WEIGHTS) -> TrigramLM:
    uni, bi, tri = Counter(), Counter(), Counter()
    n = 0
    for sent in sentences:
        toks = [BOS, BOS, *[tuple(t) for t in sent], EOS]
        for i in range(2, len(toks)):
            uni[toks[i]] += 1
            bi[(toks[i - 1], toks[i])] += 1
            tri[(toks[i - 2], toks[i - 1], toks[i])] += 1
        n += 1
    if not n:
        raise ValueError("cannot train a language model on zero sentences")
    return TrigramLM(dict(uni), dict(bi), dict(tri), tuple(weights))


def trigram_score(lm: TrigramLM, seq: Sequence, bos: bool = True, eos: bool = True) -> float:
    """Chained log-probability of ``seq``.

    With ``bos`` the first tokens are conditioned on sentence-start sentinels;
    without it they see only the history available inside ``seq``.
    """
    history = [BOS, BOS] if bos else []
    total = 0.0
    for w in seq:
        total += math.log(lm.cond_prob(w, history))
        history.append(w)
    if eos:
        total += math.log(lm.cond_prob(EOS, history))
    return total
