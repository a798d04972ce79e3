"""Three-level sub-tree features extracted from delexicalized trees.

Every token yields one sub-tree: its parent (or the virtual ROOT) with the
connecting relation, the token itself, and its children in surface order.
Words are erased except in *word features*; meaning labels and PoS tags are
kept. A feature renders as::

    ROOT,root → (VBZ) → [[pass;@arg1],(NNP),nsubj],[[pass;@arg2],(NNP),obl]

with ``#`` standing for an empty child list.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .corpus import DependencyTree, MeaningLabel

ARROW = " → "
_SPECIAL = set("\\,()[]#")


def _esc(text: str) -> str:
    if not _SPECIAL & set(text):
        return text
    return "".join("\\" + ch if ch in _SPECIAL else ch for ch in text)


def _lab(label: Optional[MeaningLabel]) -> str:
    return "" if label is None else label.key + ","


@dataclass(frozen=True)
class NodeSignature:
    label: Optional[MeaningLabel]
    pos: str


# p1: (label, pos, deprel) with pos None for the virtual ROOT parent
# p2: (label, pos)
# p3: ((label, pos, deprel), ...) in surface order
ROOT_POS = None


@dataclass(frozen=True)
class SubTree:
    parent: Optional[NodeSignature]  # None is the virtual ROOT
    deprel: str
    node: NodeSignature
    children: tuple[tuple[NodeSignature, str], ...]
    words: tuple = ()  # (parent_word, node_word, child_words); filled for word features

    @property
    def is_root_parent(self) -> bool:
        return self.parent is None


@dataclass(frozen=True)
class DependencyFeature:
    p1: tuple
    p2: tuple
    p3: tuple

    @property
    def is_root(self) -> bool:
        return self.p1[1] is ROOT_POS

    @property
    def context(self) -> tuple:
        return (self.p1, self.p2)

    @cached_property
    def labels(self) -> tuple[MeaningLabel, ...]:
        """Labels carried by the node and its children, node first."""
        out = [self.p2[0]] if self.p2[0] is not None else []
        out.extend(c[0] for c in self.p3 if c[0] is not None)
        return tuple(out)

    @cached_property
    def child_labels(self) -> tuple[MeaningLabel, ...]:
        return tuple(c[0] for c in self.p3 if c[0] is not None)

    @cached_property
    def canonical(self) -> str:
        return render(self.p1, self.p2, self.p3)

    def __str__(self) -> str:
        return self.canonical

    def to_json(self) -> list:
        return [_part_json(self.p1), _part_json(self.p2), [_part_json(c) for c in self.p3]]

    @classmethod
    def from_json(cls, obj) -> "DependencyFeature":
        p1, p2, p3 = obj
        return cls(_part_from(p1), _part_from(p2), tuple(_part_from(c) for c in p3))


def _part_json(part: tuple) -> list:
    return [part[0].to_json() if part[0] is not None else None, *part[1:]]


def _part_from(obj) -> tuple:
    label = MeaningLabel.from_json(obj[0]) if obj[0] is not None else None
    return (label, *obj[1:])


def render(p1, p2, p3, words=None) -> str:
    pw, nw, cws = words if words else (None, None, (None,) * len(p3))

    def node(label, pos, word):
        w = _esc(word) if word is not None else ""
        return f"{_lab(label)}{w}({_esc(pos)})"

    if p1[1] is ROOT_POS:
        first = f"ROOT,{_esc(p1[2])}"
    else:
        first = f"{node(p1[0], p1[1], pw)},{_esc(p1[2])}"
    second = node(p2[0], p2[1], nw)
    if p3:
        third = ",".join(f"[{node(lab, pos, w)},{_esc(dep)}]"
                         for (lab, pos, dep), w in zip(p3, cws))
    else:
        third = "#"
    return first + ARROW + second + ARROW + third


@dataclass(frozen=True)
class WordFeature:
    """A dependency feature whose non-label nodes also carry their words."""

    skeleton: DependencyFeature
    parent_word: Optional[str]
    node_word: Optional[str]
    child_words: tuple

    @cached_property
    def canonical(self) -> str:
        s = self.skeleton
        return render(s.p1, s.p2, s.p3, (self.parent_word, self.node_word, self.child_words))

    def __str__(self) -> str:
        return self.canonical

    def to_json(self) -> list:
        return [self.skeleton.to_json(), self.parent_word, self.node_word, list(self.child_words)]

    @classmethod
    def from_json(cls, obj) -> "WordFeature":
        sk, pw, nw, cws = obj
        return cls(DependencyFeature.from_json(sk), pw, nw, tuple(cws))


def extract_subtrees(tree: DependencyTree) -> list[SubTree]:
    """One sub-tree per token, in token order."""
    kids = defaultdict(list)
    for t in tree.tokens:
        kids[t.head].append(t)

    def sig(tok):
        return NodeSignature(tree.label_of.get(tok.index), tok.pos)

    def word(tok):
        return None if tok.index in tree.label_of else tok.word

    out = []
    for t in tree.tokens:
        parent = None if t.head == 0 else tree.token(t.head)
        children = kids.get(t.index, [])
        out.append(SubTree(
            parent=sig(parent) if parent else None,
            deprel=t.deprel,
            node=sig(t),
            children=tuple((sig(c), c.deprel) for c in children),
            words=(word(parent) if parent else None, word(t), tuple(word(c) for c in children)),
        ))
    return out


def linearize_feature(st: SubTree) -> DependencyFeature:
    if st.parent is None:
        p1 = (None, ROOT_POS, st.deprel)
    else:
        p1 = (st.parent.label, st.parent.pos, st.deprel)
    p2 = (st.node.label, st.node.pos)
    p3 = tuple((sig.label, sig.pos, dep) for sig, dep in st.children)
    return DependencyFeature(p1, p2, p3)


def word_feature(st: SubTree) -> WordFeature:
    pw, nw, cws = st.words
    return WordFeature(linearize_feature(st), pw, nw, tuple(cws))


def _sort_key(feature) -> str:
    return feature.canonical


@dataclass(frozen=True)
class FeatureModel:
    features: dict = field(default_factory=dict)  # DependencyFeature -> count

    @cached_property
    def context_total(self) -> dict:
        totals = Counter()
        for f, c in self.features.items():
            totals[f.context] += c
        return dict(totals)

    @cached_property
    def by_context(self) -> dict:
        index = defaultdict(list)
        for f in self.features:
            index[f.context].append(f)
        return {k: sorted(v, key=_sort_key) for k, v in index.items()}

    @cached_property
    def root_features(self) -> list[DependencyFeature]:
        return sorted((f for f in self.features if f.is_root), key=_sort_key)

    def probability(self, feature: DependencyFeature) -> float:
        c = self.features.get(feature, 0)
        return c / self.context_total[feature.context] if c else 0.0

    def sorted_items(self) -> list[tuple[DependencyFeature, int]]:
        return sorted(self.features.items(), key=lambda kv: kv[0].canonical)

    def __len__(self) -> int:
        return len(self.features)

    def validate(self) -> None:
        for f, c in self.features.items():
            if not isinstance(c, int) or c <= 0:
                raise ValueError(f"invalid feature count {c!r} for {f}")


@dataclass(frozen=True)
class WordModel:
    features: dict = field(default_factory=dict)  # WordFeature -> count
    # (p1, p2) of a label node -> [verbatim count, alternate-form count]
    value_forms: dict = field(default_factory=dict)

    def prefers_alternate(self, context: tuple) -> bool:
        verbatim, alternate = self.value_forms.get(context, (0, 0))
        return alternate > verbatim

    @cached_property
    def by_skeleton(self) -> dict:
        index = defaultdict(list)
        for wf in self.features:
            index[wf.skeleton].append(wf)
        return {k: sorted(v, key=_sort_key) for k, v in index.items()}

    @cached_property
    def word_counts_by_pos(self) -> dict:
        """pos -> Counter of words seen at that tag (each token counted once)."""
        out = defaultdict(Counter)
        for wf, c in self.features.items():
            if wf.node_word is not None:
                out[wf.skeleton.p2[1]][wf.node_word] += c
        return dict(out)

    def most_frequent_word(self, pos: str) -> Optional[tuple[str, float]]:
        counts = self.word_counts_by_pos.get(pos)
        if not counts:
            return None
        word, c = min(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return word, c / sum(counts.values())

    def sorted_items(self) -> list[tuple[WordFeature, int]]:
        return sorted(self.features.items(), key=lambda kv: kv[0].canonical)

    def __len__(self) -> int:
        return len(self.features)

    def validate(self) -> None:
        for f, c in self.features.items():
            if not isinstance(c, int) or c <= 0:
                raise ValueError(f"invalid word feature count {c!r} for {f}")


def train_feature_model(trees: Iterable[DependencyTree]) -> FeatureModel:
    counts = Counter()
    for tree in trees:
        counts.update(linearize_feature(st) for st in extract_subtrees(tree))
    return FeatureModel(dict(counts))


def train_word_features(trees: Iterable[DependencyTree],
                        alternates: Optional[Iterable[set]] = None) -> WordModel:
    """Count word features.

    ``alternates`` gives, per tree, the labels whose value was written in its
    alternate form (e.g. spelled-out numbers); these are tallied per label
    context so realization can reproduce the usual form.
    """
    trees = list(trees)
    alternates = list(alternates) if alternates is not None else [set()] * len(trees)
    counts = Counter()
    forms: dict = defaultdict(lambda: [0, 0])
    for tree, alt in zip(trees, alternates):
        for st in extract_subtrees(tree):
            counts[word_feature(st)] += 1
            if st.node.label is not None:
                forms[linearize_feature(st).context][st.node.label in alt] += 1
    return WordModel(dict(counts), {k: list(v) for k, v in forms.items()})
