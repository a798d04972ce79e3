"""Turn generated trees into sentences.

PoS nodes get words from word features whose skeleton matches the node's
(parent, node, children) context; label nodes take their MR values. Words
are then ordered bottom-up: at every head the head and its already-ordered
child phrases are permuted and each order is scored by the trigram model,
using only the first and last tokens of child phrases at the junctions.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .alignment import alternate_form
from .corpus import MeaningLabel, MeaningRepresentation, Scenario, all_candidate_labels
from .features import DependencyFeature, WordModel
from .generator import GenerationError, ScoredTree, produce_trees
from .lm import TrigramLM, trigram_score
from .planner import PlanningError, plan_content

WORD_FEATURE = "word-feature"
LABEL_VALUE = "label-value"
POS_BACKOFF = "pos-backoff"


@dataclass(frozen=True)
class LexNode:
    word: str
    pos: str
    origin: str
    children: tuple = ()
    label: Optional[MeaningLabel] = None

    @property
    def lm_token(self) -> tuple[str, str]:
        """Token seen by the language model: labels stay delexicalized."""
        return (self.label.key if self.label is not None else self.word, self.pos)

    @property
    def surface(self) -> tuple[tuple[str, str], ...]:
        return tuple((w, self.pos) for w in self.word.split())

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)


@dataclass(frozen=True)
class Phrase:
    tokens: tuple[tuple[str, str], ...]  # surface (word, pos), values expanded
    lm_tokens: tuple[tuple[str, str], ...]  # one per tree node
    log_score: float

    @property
    def first(self):
        return self.lm_tokens[0]

    @property
    def last(self):
        return self.lm_tokens[-1]

    @property
    def boundary(self) -> tuple:
        if len(self.lm_tokens) == 1:
            return self.lm_tokens
        return (self.first, self.last)

    def text(self) -> str:
        return " ".join(w for w, _ in self.tokens)


def node_skeleton(tree: ScoredTree, i: int) -> DependencyFeature:
    p1, p2 = tree.context(i)
    p3 = tuple((tree.nodes[c].label, tree.nodes[c].pos, tree.nodes[c].deprel)
               for c in tree.children(i))
    return DependencyFeature(p1, p2, p3)


def word_candidates(word_model: WordModel, skeleton: DependencyFeature,
                    parent_word: Optional[str]) -> list[tuple[str, float, str]]:
    """(word, probability, origin) choices for a PoS node, best first.

    Word features agreeing with the parent's chosen word are preferred; if
    none agree, every feature with the skeleton counts.
    """
    wfs = word_model.by_skeleton.get(skeleton)
    if not wfs:
        backoff = word_model.most_frequent_word(skeleton.p2[1])
        word, p = backoff if backoff else (skeleton.p2[1], 1.0)
        return [(word, p, POS_BACKOFF)]
    if parent_word is not None:
        agreeing = [wf for wf in wfs if wf.parent_word == parent_word]
        wfs = agreeing or wfs
    counts: dict[str, int] = defaultdict(int)
    for wf in wfs:
        counts[wf.node_word] += word_model.features[wf]
    total = sum(counts.values())
    out = [(w, c / total, WORD_FEATURE) for w, c in counts.items()]
    out.sort(key=lambda x: (-x[1], x[0]))
    return out


def lexicalize(tree: ScoredTree, word_model: WordModel, mr: MeaningRepresentation,
               candidates: int = 20) -> list[LexNode]:
    """Up to ``candidates`` word assignments for ``tree``, most probable first.

    Assignments are grown node by node in breadth-first order, keeping the
    ``candidates`` best partial assignments by the product of per-node word
    probabilities. Label nodes take their MR value, in the alternate
    (spelled-out or digit) form when training text mostly used that form in
    the same context.
    """
    if candidates < 1:
        raise ValueError("candidate count must be at least 1")
    if not tree.complete:
        raise ValueError("cannot lexicalize an incomplete tree")
    values = dict(mr.labelled_values())
    skeletons = [node_skeleton(tree, i) for i in range(len(tree))]
    beam: list[tuple[float, tuple, tuple]] = [(0.0, (), ())]
    for i, node in enumerate(tree.nodes):
        if node.label is not None:
            if node.label not in values:
                raise GenerationError(f"label {node.label} has no value in the MR")
            value = values[node.label]
            if word_model.prefers_alternate(tree.context(i)):
                value = alternate_form(value) or value
            beam = [(lp, ws + (value,), os + (LABEL_VALUE,)) for lp, ws, os in beam]
            continue
        grown = []
        for lp, ws, os in beam:
            parent = node.parent
            parent_word = None
            if parent >= 0 and tree.nodes[parent].label is None:
                parent_word = ws[parent]
            for word, p, origin in word_candidates(word_model, skeletons[i], parent_word):
                grown.append((lp + math.log(p), ws + (word,), os + (origin,)))
        grown.sort(key=lambda x: (-x[0], x[1]))
        beam = grown[:candidates]

    def build(i, words, origins):
        node = tree.nodes[i]
        return LexNode(words[i], node.pos, origins[i],
                       tuple(build(c, words, origins) for c in tree.children(i)), node.label)

    return [build(0, ws, os) for _, ws, os in beam]


def _orders(n_units: int, perm_cap: int):
    if n_units <= perm_cap:
        return itertools.permutations(range(n_units))
    # too many units: children keep their stored order, only the head moves
    kids = list(range(1, n_units))
    return (tuple(kids[:k] + [0] + kids[k:]) for k in range(n_units))


def _best_order(units: Sequence[Phrase], lm: TrigramLM, at_root: bool, perm_cap: int):
    best = None
    for order in _orders(len(units), perm_cap):
        seq = [tok for k in order for tok in units[k].boundary]
        score = trigram_score(lm, seq, bos=at_root, eos=at_root)
        surface = tuple(tok for k in order for tok in units[k].tokens)
        if best is None or score > best[0] or (score == best[0] and surface < best[1]):
            best = (score, surface, order)
    return best


def linearize(root: LexNode, lm: TrigramLM, perm_cap: int = 7,
              cache: Optional[dict] = None) -> Phrase:
    """Order the words of a lexicalized tree; see the module docstring."""
    if perm_cap < 1:
        raise ValueError("perm_cap must be at least 1")
    cache = {} if cache is None else cache

    def phrase(node: LexNode, at_root: bool) -> Phrase:
        key = (node, at_root, perm_cap)
        hit = cache.get(key)
        if hit is not None:
            return hit
        head = Phrase(node.surface, (node.lm_token,), 0.0)
        units = [head] + [phrase(c, False) for c in node.children]
        score, surface, order = _best_order(units, lm, at_root, perm_cap)
        lm_tokens = tuple(tok for k in order for tok in units[k].lm_tokens)
        out = Phrase(surface, lm_tokens, score + math.fsum(u.log_score for u in units))
        cache[key] = out
        return out

    return phrase(root, True)


@dataclass(frozen=True)
class Realization:
    sentence: str
    score: float
    tree_score: float
    tree: ScoredTree
    lexical: LexNode


def generate(scenario: Scenario, model, beam: int = 20, candidates: int = 20,
             threshold: float = 0.0, perm_cap: int = 7, max_exhaustive: int = 8,
             tree_weight: float = 0.0,
             trace: Optional[Callable[[dict], None]] = None) -> list[Realization]:
    """Ranked, de-duplicated sentences for ``scenario``'s MR.

    ``model`` is a :class:`depgen.model.TrainedModel`. Ranking uses the
    realization score plus ``tree_weight`` times the tree score.
    """
    try:
        plan = plan_content(model.label_model, all_candidate_labels(scenario.mr),
                            threshold, max_exhaustive)
        trees = produce_trees(model.feature_model, plan.labels, beam,
                              max_nodes=model.config.get("max_nodes"), trace=trace)
    except (PlanningError, GenerationError) as exc:
        raise type(exc)(f"scenario {scenario.id}: {exc}") from None
    best: dict[str, Realization] = {}
    cache: dict = {}
    for tree in trees:
        for lex in lexicalize(tree, model.word_model, scenario.mr, candidates):
            phrase = linearize(lex, model.trigram, perm_cap, cache)
            sentence = phrase.text()
            score = phrase.log_score + tree_weight * tree.score
            old = best.get(sentence)
            if old is None or score > old.score:
                best[sentence] = Realization(sentence, score, tree.score, tree, lex)
    return sorted(best.values(), key=lambda r: (-r.score, r.sentence))
