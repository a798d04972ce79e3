"""The trained model bundle and the training pipeline."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .alignment import AlignedSentence, align_sentence, aligned_tokens, delexicalize_tree
from .corpus import CorpusError, DependencyTree, Scenario
from .features import FeatureModel, WordModel, train_feature_model, train_word_features
from .lm import DEFAULT_WEIGHTS, TrigramLM, train_trigram
from .planner import LabelModel, train_label_model

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class TrainedModel:
    label_model: LabelModel
    feature_model: FeatureModel
    word_model: WordModel
    trigram: TrigramLM
    config: dict = field(default_factory=dict)
    version: int = FORMAT_VERSION

    def stats(self) -> dict:
        return {"labels": self.label_model.total_labels,
                "label_types": len(self.label_model.unigram_count),
                "features": len(self.feature_model),
                "word_features": len(self.word_model),
                "lm_vocabulary": len(self.trigram.unigrams)}


@dataclass
class TrainingData:
    aligned: list[AlignedSentence]
    trees: list[DependencyTree]
    report: list[dict]


def prepare(scenarios: Sequence[Scenario]) -> TrainingData:
    """Align every reference and delexicalize its tree."""
    aligned, trees, report = [], [], []
    for sc in scenarios:
        sc.check_trainable()
        for k, tree in enumerate(sc.parsed_trees):
            al = align_sentence(sc, k)
            delex = delexicalize_tree(tree, al, strict=False)
            aligned.append(al)
            trees.append(delex)
            entry = al.report(k)
            placed = set(delex.label_of.values())
            entry["non_constituent"] = [str(lab) for _, _, lab in al.spans if lab not in placed]
            report.append(entry)
    if not aligned:
        raise CorpusError("no training scenarios")
    return TrainingData(aligned, trees, report)


def train_model(scenarios: Sequence[Scenario], weights: tuple = DEFAULT_WEIGHTS,
                **config) -> tuple[TrainedModel, list[dict]]:
    """Train all four models; returns the bundle and the alignment report."""
    data = prepare(scenarios)
    label_model = train_label_model(data.aligned)
    feature_model = train_feature_model(data.trees)
    word_model = train_word_features(data.trees, [set(a.alternate) for a in data.aligned])
    lm = train_trigram([aligned_tokens(t) for t in data.trees], weights)
    cfg = {"max_nodes": 2 * max(len(t) for t in data.trees) + 1}
    cfg.update(config)
    model = TrainedModel(label_model, feature_model, word_model, lm, cfg)
    log.info("trained on %d sentences: %s", len(data.trees), model.stats())
    return model, data.report
