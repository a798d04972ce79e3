"""Replace field values in reference sentences with meaning labels."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

from .corpus import CorpusError, DependencyTree, MeaningLabel, MeaningRepresentation, Scenario, Token

log = logging.getLogger(__name__)

_ONES = ["zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
         "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen",
         "seventeen", "eighteen", "nineteen"]
_TENS = ["", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"]


def number_word(n: int) -> str:
    if n < 20:
        return _ONES[n]
    if n == 100:
        return "hundred"
    tens, ones = divmod(n, 10)
    return _TENS[tens] + ("-" + _ONES[ones] if ones else "")


NUMBER_WORDS = {number_word(n): n for n in range(101)}
NUMBER_WORDS["one-hundred"] = 100


class NonConstituentSpan(CorpusError):
    pass


def _norm(text: str) -> tuple[str, ...]:
    return tuple(text.lower().split())


def value_forms(value: str) -> list[tuple[str, ...]]:
    """Token sequences that count as a mention of ``value``.

    Integers 0-100 also match their spelled-out form and vice versa.
    """
    base = _norm(value)
    forms = [base]
    if len(base) == 1:
        tok = base[0]
        if tok.isdigit() and int(tok) <= 100:
            forms.append((number_word(int(tok)),))
        elif tok in NUMBER_WORDS:
            forms.append((str(NUMBER_WORDS[tok]),))
    return forms


def alternate_form(value: str) -> str | None:
    """The spelled-out form of a numeric value, or the digits of a number word."""
    forms = value_forms(value)
    return " ".join(forms[1]) if len(forms) > 1 else None


@dataclass(frozen=True)
class AlignedSentence:
    items: tuple  # str | MeaningLabel
    source_scenario: str = ""
    spans: tuple[tuple[int, int, MeaningLabel], ...] = ()
    unmatched: tuple[MeaningLabel, ...] = ()
    repeated: tuple[MeaningLabel, ...] = ()
    alternate: frozenset = frozenset()  # labels matched through alternate_form

    @property
    def label_sequence(self) -> tuple[MeaningLabel, ...]:
        return tuple(x for x in self.items if isinstance(x, MeaningLabel))

    def text(self) -> str:
        return " ".join(str(x) for x in self.items)

    def report(self, ref_index: int = 0) -> dict:
        return {"scenario": self.source_scenario, "ref_index": ref_index,
                "matched": [str(lab) for _, _, lab in self.spans],
                "unmatched": [str(lab) for lab in self.unmatched],
                "repeated": [str(lab) for lab in self.repeated]}


def find_value_spans(tokens: Sequence, mr: MeaningRepresentation,
                     skip: Sequence[MeaningLabel] = ()):
    """Match MR values against ``tokens``.

    Returns ``(spans, unmatched, used, alternate)`` where spans are
    ``(start, end, label)`` sorted by start, ``used`` flags every consumed
    token and ``alternate`` holds labels matched through their alternate form. Non-string tokens
    count as already consumed. Longer values go first; among equal lengths the
    value earlier in the MR wins.
    """
    lowered = [t.lower() if isinstance(t, str) else None for t in tokens]
    used = [tok is None for tok in lowered]
    candidates = [(lab, value_forms(v)) for lab, v in mr.labelled_values() if lab not in skip]
    order = sorted(range(len(candidates)),
                   key=lambda i: (-max(len(f) for f in candidates[i][1]), i))
    spans = []
    unmatched = []
    alternate = set()
    for i in order:
        label, forms = candidates[i]
        hit = _leftmost(lowered, used, forms)
        if hit is None:
            unmatched.append(label)
            continue
        start, end, form = hit
        if form:
            alternate.add(label)
        for k in range(start, end):
            used[k] = True
        spans.append((start, end, label))
    spans.sort()
    unmatched.sort(key=lambda lab: [c[0] for c in candidates].index(lab))
    return spans, unmatched, used, frozenset(alternate)


def _leftmost(lowered, used, forms):
    best = None
    for which, form in enumerate(forms):
        k = len(form)
        for start in range(len(lowered) - k + 1):
            if any(used[start:start + k]):
                continue
            if tuple(lowered[start:start + k]) == form:
                if best is None or start < best[0]:
                    best = (start, start + k, which)
                break
    return best


def consume_mentions(tokens: Sequence, value: str, used: list) -> int:
    """Count non-overlapping mentions of ``value`` among unused tokens,
    marking them used."""
    lowered = [t.lower() if isinstance(t, str) else None for t in tokens]
    forms = value_forms(value)
    n = 0
    while True:
        hit = _leftmost(lowered, used, forms)
        if hit is None:
            return n
        for k in range(hit[0], hit[1]):
            used[k] = True
        n += 1


def align_tokens(tokens: Sequence, mr: MeaningRepresentation, source: str = "") -> AlignedSentence:
    """Align a token list, which may already contain labels, against ``mr``."""
    tokens = [MeaningLabel.parse(t) or t if isinstance(t, str) else t for t in tokens]
    present = [t for t in tokens if isinstance(t, MeaningLabel)]
    spans, unmatched, used, alternate = find_value_spans(tokens, mr, skip=present)
    items = []
    pos = 0
    for start, end, label in spans:
        items.extend(tokens[pos:start])
        items.append(label)
        pos = end
    items.extend(tokens[pos:])
    leftover = list(used)
    repeated = tuple(lab for lab, v in mr.labelled_values()
                     if lab not in unmatched and lab not in present
                     and consume_mentions(tokens, v, leftover) > 0)
    if repeated:
        log.debug("scenario %s: values repeated beyond first mention: %s",
                  source, ", ".join(map(str, repeated)))
    return AlignedSentence(tuple(items), source, tuple(spans), tuple(unmatched), repeated,
                           alternate)


def align_sentence(scenario: Scenario, ref_index: int) -> AlignedSentence:
    if not 0 <= ref_index < len(scenario.references):
        raise IndexError(f"scenario {scenario.id} has no reference {ref_index}")
    return align_tokens(scenario.references[ref_index].split(), scenario.mr, scenario.id)


def delexicalize_tree(tree: DependencyTree, aligned: AlignedSentence,
                      strict: bool = True) -> DependencyTree:
    """Attach the aligned labels to tree tokens.

    Multi-token value spans collapse onto their syntactic head; the other span
    tokens are removed and their outside dependents re-attached to that head.
    A span with more than one external head raises :class:`NonConstituentSpan`
    when ``strict``; otherwise it is left lexical.
    """
    n = len(tree)
    label_of: dict[int, MeaningLabel] = {}
    dropped: dict[int, int] = {}
    for start, end, label in aligned.spans:
        members = set(range(start + 1, end + 1))
        if max(members) > n:
            raise CorpusError(f"value span {start}:{end} outside tree of {n} tokens")
        heads = [i for i in sorted(members) if tree.token(i).head not in members]
        if len(heads) != 1:
            if strict:
                raise NonConstituentSpan(
                    f"non-constituent value span for {label} at tokens {start + 1}-{end}")
            log.info("non-constituent span for %s left lexical", label)
            continue
        head = heads[0]
        label_of[head] = label
        for i in members - {head}:
            dropped[i] = head
    if not dropped:
        return DependencyTree(tree.tokens, label_of)

    def resolve(h: int) -> int:
        while h in dropped:
            h = dropped[h]
        return h

    keep = [t for t in tree.tokens if t.index not in dropped]
    renum = {t.index: k for k, t in enumerate(keep, start=1)}
    renum[0] = 0
    toks = tuple(Token(renum[t.index], t.word, t.pos, renum[resolve(t.head)], t.deprel)
                 for t in keep)
    return DependencyTree(toks, {renum[i]: lab for i, lab in label_of.items()})


def aligned_tokens(tree: DependencyTree) -> list[tuple[str, str]]:
    """(word, PoS) pairs of a delexicalized tree, labels standing in for words."""
    return [(tree.label_of[t.index].key if t.index in tree.label_of else t.word, t.pos)
            for t in tree.tokens]
