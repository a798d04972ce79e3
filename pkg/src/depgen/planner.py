"""Content planning: which meaning labels to express, and in what order.

Label probabilities are relative frequencies over all aligned training
sentences; sequences are scored with a first-order Markov chain whose
transitions count labels that immediately follow each other in a sentence's
label sequence (intervening words ignored).
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .alignment import AlignedSentence
from .corpus import MeaningLabel

NEG_INF = float("-inf")


class PlanningError(ValueError):
    pass


@dataclass(frozen=True)
class LabelModel:
    unigram_count: dict = field(default_factory=dict)
    bigram_count: dict = field(default_factory=dict)
    start_count: dict = field(default_factory=dict)
    end_count: dict = field(default_factory=dict)

    @property
    def total_labels(self) -> int:
        return sum(self.unigram_count.values())

    def validate(self) -> None:
        for table in (self.unigram_count, self.bigram_count, self.start_count, self.end_count):
            for key, c in table.items():
                if not isinstance(c, int) or c < 0:
                    raise ValueError(f"invalid label count {c!r} for {key!r}")
        out = Counter()
        for (a, _), c in self.bigram_count.items():
            out[a] += c
        for lab, c in self.unigram_count.items():
            if out[lab] + self.end_count.get(lab, 0) != c:
                raise ValueError(f"label counts for {lab} do not add up")
        if sum(self.start_count.values()) != sum(self.end_count.values()):
            raise ValueError("sentence start and end counts differ")


def train_label_model(aligned: Iterable[AlignedSentence]) -> LabelModel:
    uni, bi, start, end = Counter(), Counter(), Counter(), Counter()
    for sent in aligned:
        seq = sent.label_sequence
        if not seq:
            continue
        uni.update(seq)
        bi.update(zip(seq, seq[1:]))
        start[seq[0]] += 1
        end[seq[-1]] += 1
    if not uni:
        raise PlanningError("no meaning labels in training data")
    return LabelModel(dict(uni), dict(bi), dict(start), dict(end))


def label_probability(model: LabelModel, label: MeaningLabel) -> float:
    c = model.unigram_count.get(label, 0)
    return c / model.total_labels if c else 0.0


def transition_probability(model: LabelModel, prev: MeaningLabel, nxt: MeaningLabel) -> float:
    """p(nxt | prev).

    The denominator counts every successor of ``prev`` including the sentence
    end, i.e. it equals c(prev).
    """
    c = model.bigram_count.get((prev, nxt), 0)
    return c / model.unigram_count[prev] if c else 0.0


def sequence_probability(model: LabelModel, seq: Sequence[MeaningLabel]) -> float:
    """Log-probability of a label order; ``-inf`` if any factor is zero."""
    if not seq:
        raise ValueError("empty label sequence")
    p = label_probability(model, seq[0])
    if p == 0.0:
        return NEG_INF
    total = math.log(p)
    for a, b in zip(seq, seq[1:]):
        p = transition_probability(model, a, b)
        if p == 0.0:
            return NEG_INF
        total += math.log(p)
    return total


@dataclass(frozen=True)
class ContentPlan:
    labels: tuple[MeaningLabel, ...]
    log_probability: float


def _better(score, keys, best_score, best_keys) -> bool:
    if score != best_score:
        return score > best_score
    return keys < best_keys


def plan_content(model: LabelModel, candidates: Sequence[MeaningLabel], threshold: float = 0.0,
                 max_exhaustive: int = 8, beam_width: int = 64) -> ContentPlan:
    """Select labels whose probability reaches ``threshold`` and order them.

    Up to ``max_exhaustive`` labels every permutation is scored; larger sets
    use a beam over partial orderings. Equal scores go to the
    lexicographically smaller label order.
    """
    selected = sorted({lab for lab in candidates if label_probability(model, lab) >= threshold})
    if not selected:
        raise PlanningError("content plan empty under threshold")
    if len(selected) <= max_exhaustive:
        best, best_score, best_keys = None, None, None
        for perm in itertools.permutations(selected):
            score = sequence_probability(model, perm)
            if best is not None and score < best_score:
                continue
            keys = [lab.key for lab in perm]
            if best is None or _better(score, keys, best_score, best_keys):
                best, best_score, best_keys = perm, score, keys
        return ContentPlan(tuple(best), best_score)
    return _beam_plan(model, selected, beam_width)


def _beam_plan(model: LabelModel, selected: list[MeaningLabel], width: int) -> ContentPlan:
    def rank(item):
        seq, score = item
        return (-score, [lab.key for lab in seq])

    beam = []
    for lab in selected:
        p = label_probability(model, lab)
        beam.append(((lab,), math.log(p) if p else NEG_INF))
    beam = sorted(beam, key=rank)[:width]
    for _ in range(len(selected) - 1):
        nxt = []
        for seq, score in beam:
            for lab in selected:
                if lab in seq:
                    continue
                p = transition_probability(model, seq[-1], lab)
                nxt.append((seq + (lab,), score + math.log(p) if p else NEG_INF))
        beam = sorted(nxt, key=rank)[:width]
    seq, score = beam[0]
    return ContentPlan(seq, score)
