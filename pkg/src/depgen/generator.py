"""Build a dependency tree for an ordered label sequence by chaining features.

Search starts from ROOT features that carry the first planned label, then
repeatedly expands the leftmost unexpanded node (breadth-first, left to
right) with a feature whose parent and node parts match the node's context.
A tree's score is the sum of the log-probabilities of the features used.
Candidates for one node are ranked by how many planned labels they place,
then by probability; a global beam keeps the ``beam`` best partial trees.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence

from .corpus import DependencyTree, MeaningLabel
from .features import ROOT_POS, DependencyFeature, FeatureModel, _esc


class GenerationError(RuntimeError):
    pass


@dataclass
class SearchStats:
    comparisons: int = 0
    expansions: int = 0
    steps: int = 0


@dataclass(frozen=True)
class GenNode:
    label: Optional[MeaningLabel]
    pos: str
    deprel: str
    parent: int  # -1 for the tree root
    children: Optional[tuple[int, ...]] = None  # None until expanded

    @property
    def expanded(self) -> bool:
        return self.children is not None


@dataclass(frozen=True)
class ScoredTree:
    nodes: tuple[GenNode, ...]
    score: float
    remaining: tuple[MeaningLabel, ...]
    steps: tuple = ()  # (node index, feature or None, probability)
    cursor: int = 0  # next node to expand; nodes are stored in BFS order

    @property
    def finished(self) -> bool:
        return self.cursor >= len(self.nodes)

    @property
    def complete(self) -> bool:
        return self.finished and not self.remaining

    def __len__(self) -> int:
        return len(self.nodes)

    def context(self, i: int) -> tuple:
        node = self.nodes[i]
        if node.parent < 0:
            p1 = (None, ROOT_POS, node.deprel)
        else:
            par = self.nodes[node.parent]
            p1 = (par.label, par.pos, node.deprel)
        return p1, (node.label, node.pos)

    def children(self, i: int) -> tuple[int, ...]:
        return self.nodes[i].children or ()

    @cached_property
    def canonical(self) -> str:
        return _render(self.nodes, 0, lambda n: n.label, lambda n: n.pos, lambda n: n.deprel,
                       lambda i: self.children(i))

    def labels_in_order(self, plan: Sequence[MeaningLabel]) -> list[MeaningLabel]:
        """Labels under an in-order traversal, each head at its plan-consistent slot."""
        index = {lab: k for k, lab in enumerate(plan)}

        def walk(i):
            node = self.nodes[i]
            blocks = [walk(c) for c in self.children(i)]
            seq = [lab for b in blocks for lab in b]
            if node.label is not None:
                h = index[node.label]
                slot = sum(1 for lab in seq if index[lab] < h)
                seq.insert(slot, node.label)
            return seq

        return walk(0)

    def recomputed_score(self) -> float:
        return math.fsum(math.log(p) for _, f, p in self.steps if f is not None)


def _render(nodes, i, label, pos, dep, kids) -> str:
    n = nodes[i]
    head = (label(n).key + "," if label(n) is not None else "") + _esc(pos(n))
    inner = " ".join(_render(nodes, c, label, pos, dep, kids) for c in kids(i))
    return f"({head} {_esc(dep(n))}{' ' + inner if inner else ''})"


def tree_canonical(tree: DependencyTree) -> str:
    """Canonical string of a (delexicalized) training tree, comparable to
    :attr:`ScoredTree.canonical`."""
    toks = (None,) + tree.tokens
    kids: dict[int, list[int]] = {}
    for t in tree.tokens:
        kids.setdefault(t.head, []).append(t.index)
    return _render(toks, kids[0][0], lambda t: tree.label_of.get(t.index), lambda t: t.pos,
                   lambda t: t.deprel, lambda i: kids.get(i, []))


def _labels_admissible(labels: Sequence[MeaningLabel], remaining: frozenset,
                       plan_index: dict, stats: Optional[SearchStats]) -> bool:
    last = -1
    for lab in labels:
        if stats is not None:
            stats.comparisons += 1
        if lab not in remaining:
            return False
        k = plan_index[lab]
        if k <= last:
            return False
        last = k
    return True


def order_consistent(tree: ScoredTree, plan_index: dict) -> bool:
    """Whether some in-order placement of heads keeps placed labels in plan order.

    Sibling subtrees keep their stored left-to-right order; a head may sit in
    any gap between its children's label blocks.
    """
    ranges: list = [None] * len(tree.nodes)
    for i in range(len(tree.nodes) - 1, -1, -1):
        node = tree.nodes[i]
        lo = hi = None
        for c in tree.children(i):
            r = ranges[c]
            if r is None:
                continue
            if hi is not None and r[0] <= hi:
                return False
            if lo is None:
                lo = r[0]
            hi = r[1]
        if node.label is not None:
            h = plan_index[node.label]
            for c in tree.children(i):
                r = ranges[c]
                if r is not None and r[0] <= h <= r[1]:
                    return False
            lo = h if lo is None else min(lo, h)
            hi = h if hi is None else max(hi, h)
        ranges[i] = None if lo is None else (lo, hi)
    return True


def root_candidates(model: FeatureModel, plan: Sequence[MeaningLabel],
                    stats: Optional[SearchStats] = None) -> list[tuple[DependencyFeature, float]]:
    """ROOT features that carry the first planned label and respect the plan.

    Sorted best first: most planned labels, then probability, then canonical
    string.
    """
    if not plan:
        raise ValueError("empty label plan")
    first = plan[0]
    remaining = frozenset(plan)
    plan_index = {lab: k for k, lab in enumerate(plan)}
    out = []
    for f in model.root_features:
        if stats is not None:
            stats.comparisons += 1
        if first not in f.labels:
            continue
        if f.p2[0] is not None and f.p2[0] not in remaining:
            continue
        if not _labels_admissible(f.child_labels, remaining, plan_index, stats):
            continue
        if f.p2[0] is not None and f.p2[0] in f.child_labels:
            continue
        out.append((f, model.probability(f)))
    out.sort(key=lambda fp: (-len(fp[0].labels), -fp[1], fp[0].canonical))
    return out


def expand_node(model: FeatureModel, tree: ScoredTree, t: int,
                stats: Optional[SearchStats] = None) -> list[tuple[DependencyFeature, float, int]]:
    """Features that can hang children under node ``t``, best first."""
    if tree.nodes[t].expanded:
        raise ValueError(f"node {t} is already expanded")
    remaining = frozenset(tree.remaining)
    plan_index = {lab: k for k, lab in enumerate(tree.remaining)}
    out = []
    for f in model.by_context.get(tree.context(t), ()):
        if stats is not None:
            stats.comparisons += 1
        if not _labels_admissible(f.child_labels, remaining, plan_index, stats):
            continue
        out.append((f, model.probability(f), len(f.child_labels)))
    out.sort(key=lambda x: (-x[2], -x[1], x[0].canonical))
    return out


def _attach(tree: ScoredTree, t: int, feature: Optional[DependencyFeature], prob: float) -> ScoredTree:
    nodes = list(tree.nodes)
    children = ()
    if feature is not None:
        start = len(nodes)
        for lab, pos, dep in feature.p3:
            nodes.append(GenNode(lab, pos, dep, t))
        children = tuple(range(start, len(nodes)))
    nodes[t] = GenNode(nodes[t].label, nodes[t].pos, nodes[t].deprel, nodes[t].parent, children)
    used = set(feature.child_labels) if feature is not None else set()
    score = tree.score + (math.log(prob) if feature is not None else 0.0)
    return ScoredTree(tuple(nodes), score,
                      tuple(lab for lab in tree.remaining if lab not in used),
                      tree.steps + ((t, feature, prob),), t + 1)


def _seed(feature: DependencyFeature, prob: float, plan: Sequence[MeaningLabel]) -> ScoredTree:
    lab, pos = feature.p2
    root = ScoredTree((GenNode(lab, pos, feature.p1[2], -1),), 0.0,
                      tuple(x for x in plan if x != lab))
    return _attach(root, 0, feature, prob)


def _rank(tree: ScoredTree):
    return (-tree.score, tree.canonical)


def produce_trees(model: FeatureModel, plan: Sequence[MeaningLabel], beam: int = 20,
                  max_nodes: Optional[int] = None, stats: Optional[SearchStats] = None,
                  trace: Optional[Callable[[dict], None]] = None) -> list[ScoredTree]:
    """Return up to ``beam`` complete trees for ``plan``, best first."""
    if beam < 1:
        raise ValueError("beam width must be at least 1")
    plan = tuple(plan)
    if len(set(plan)) != len(plan):
        raise ValueError("plan repeats a label")
    plan_index = {lab: k for k, lab in enumerate(plan)}
    roots = root_candidates(model, plan, stats)
    if not roots:
        raise GenerationError("no ROOT feature covers first label")

    complete: list[ScoredTree] = []
    frontier: list[ScoredTree] = []

    def admit(tree: ScoredTree, into: list) -> None:
        if max_nodes is not None and len(tree) > max_nodes:
            return
        if not order_consistent(tree, plan_index):
            return
        if tree.finished:
            if not tree.remaining:
                complete.append(tree)
            return
        into.append(tree)

    for f, p in roots[:beam]:
        admit(_seed(f, p, plan), frontier)
    frontier = sorted(frontier, key=_rank)[:beam]
    step = 0
    while frontier:
        step += 1
        successors: list[ScoredTree] = []
        for tree in frontier:
            t = tree.cursor
            if stats is not None:
                stats.expansions += 1
            cands = expand_node(model, tree, t, stats)
            if not cands:
                admit(_attach(tree, t, None, 1.0), successors)
                continue
            for f, p, _ in cands[:beam]:
                admit(_attach(tree, t, f, p), successors)
        frontier = sorted(successors, key=_rank)[:beam]
        if trace is not None:
            trace({"step": step,
                   "frontier": [{"score": s.score,
                                 "feature": str(s.steps[-1][1]) if s.steps[-1][1] else "#",
                                 "tree": s.canonical} for s in frontier],
                   "complete": len(complete)})
    if stats is not None:
        stats.steps += step
    if not complete:
        raise GenerationError("generation failed for plan")
    return sorted(complete, key=_rank)[:beam]
