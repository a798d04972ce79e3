"""Corpus BLEU-4 and slot error rate."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .alignment import consume_mentions, find_value_spans
from .corpus import MeaningRepresentation


def tokenize(sentence: str) -> list[str]:
    return sentence.lower().split()


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def bleu4(candidates: Sequence[str], references: Sequence[Sequence[str]],
          smooth: bool = False) -> float:
    """Corpus-level BLEU with up to 4-grams, uniform weights.

    Clipped n-gram matches and candidate n-gram totals are pooled over the
    corpus before the precisions are formed. The effective reference length
    picks, per segment, the reference closest in length (shorter on ties).
    ``smooth`` adds one to numerator and denominator for orders 2-4.
    """
    if not candidates:
        raise ValueError("empty candidate list")
    if len(candidates) != len(references):
        raise ValueError(f"{len(candidates)} candidates but {len(references)} reference sets")
    matches = [0] * 4
    totals = [0] * 4
    cand_len = ref_len = 0
    for cand, refs in zip(candidates, references):
        if not refs:
            raise ValueError("every candidate needs at least one reference")
        c = tokenize(cand)
        rs = [tokenize(r) for r in refs]
        cand_len += len(c)
        ref_len += min((abs(len(r) - len(c)), len(r)) for r in rs)[1]
        for n in range(1, 5):
            counts = _ngrams(c, n)
            max_ref = Counter()
            for r in rs:
                for g, k in _ngrams(r, n).items():
                    max_ref[g] = max(max_ref[g], k)
            matches[n - 1] += sum(min(k, max_ref[g]) for g, k in counts.items())
            totals[n - 1] += max(len(c) - n + 1, 0)
    if cand_len == 0:
        return 0.0
    log_p = 0.0
    for n in range(4):
        m, t = matches[n], totals[n]
        if smooth and n > 0:
            m, t = m + 1, t + 1
        if m == 0 or t == 0:
            return 0.0
        log_p += math.log(m / t) / 4
    bp = 1.0 if cand_len > ref_len else math.exp(1 - ref_len / cand_len)
    return bp * math.exp(log_p)


@dataclass(frozen=True)
class SlotError:
    redundant: int
    missing: int
    total: int

    @property
    def err(self) -> float:
        return (self.redundant + self.missing) / self.total

    def as_tuple(self) -> tuple:
        return (self.redundant, self.missing, self.total, self.err)


def slot_error(sentence: str, mr: MeaningRepresentation,
               lexicon: Optional[Iterable[str]] = None) -> SlotError:
    """Count missing and redundant slot values in ``sentence``.

    Values are matched as in alignment. Each value's first mention realizes
    it; further mentions are redundant, as are mentions of ``lexicon``
    values that belong to no slot of ``mr``.
    """
    total = len(mr)
    if total == 0:
        raise ValueError("MR has no slots")
    tokens = sentence.split()
    _, unmatched, used, _ = find_value_spans(tokens, mr)
    redundant = sum(consume_mentions(tokens, value, used) for _, value in mr.labelled_values())
    if lexicon is not None:
        own = {v.lower() for _, v in mr.labelled_values()}
        for value in sorted(set(lexicon)):
            if value.lower() not in own:
                redundant += consume_mentions(tokens, value, used)
    return SlotError(redundant, len(unmatched), total)


@dataclass
class EvalReport:
    bleu4: float
    err: float
    per_scenario: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"bleu4": self.bleu4 * 100, "err": self.err, "per_scenario": self.per_scenario}


def evaluate(hypotheses: Sequence[str], references: Sequence[Sequence[str]],
             mrs: Sequence[MeaningRepresentation], ids: Optional[Sequence[str]] = None,
             smooth: bool = False) -> EvalReport:
    if not len(hypotheses) == len(references) == len(mrs):
        raise ValueError("hypotheses, references and MRs must have equal length")
    ids = ids or [str(i) for i in range(len(hypotheses))]
    rows = []
    r = m = n = 0
    for sid, hyp, mr in zip(ids, hypotheses, mrs):
        se = slot_error(hyp, mr)
        rows.append({"scenario": sid, "err": se.err, "redundant": se.redundant,
                     "missing": se.missing, "total": se.total})
        r, m, n = r + se.redundant, m + se.missing, n + se.total
    return EvalReport(bleu4(hypotheses, references, smooth), (r + m) / n, rows)
