"""Deterministic on-disk format for :class:`TrainedModel`.

A model file (``*.dgm.json``) is one JSON document with sorted keys holding
raw counts only, followed by a final line ``#sha256:<hex>`` computed over all
preceding bytes. Probabilities are always re-derived from the counts.
"""
from __future__ import annotations

import hashlib
import json

from .corpus import MeaningLabel
from .features import (DependencyFeature, FeatureModel, WordFeature, WordModel, _part_from,
                       _part_json)
from .lm import TrigramLM
from .model import FORMAT_VERSION, TrainedModel
from .planner import LabelModel

SUFFIX = ".dgm.json"


class ModelFormatError(ValueError):
    pass


def _sorted(rows: list) -> list:
    return sorted(rows, key=lambda r: json.dumps(r, sort_keys=True, ensure_ascii=False))


def _label_table(table: dict) -> list:
    return _sorted([[lab.to_json(), c] for lab, c in table.items()])


def to_document(model: TrainedModel) -> dict:
    lm_ = model.label_model
    lm = model.trigram
    return {
        "version": model.version,
        "config": model.config,
        "label_model": {
            "unigram": _label_table(lm_.unigram_count),
            "start": _label_table(lm_.start_count),
            "end": _label_table(lm_.end_count),
            "bigram": _sorted([[a.to_json(), b.to_json(), c]
                               for (a, b), c in lm_.bigram_count.items()]),
        },
        "feature_model": _sorted([[f.to_json(), c] for f, c in model.feature_model.features.items()]),
        "word_model": {
            "features": _sorted([[f.to_json(), c] for f, c in model.word_model.features.items()]),
            "value_forms": _sorted([[_part_json(p1), _part_json(p2), list(c)]
                                    for (p1, p2), c in model.word_model.value_forms.items()]),
        },
        "trigram": {
            "weights": list(lm.weights),
            "unigram": _sorted([[list(w), c] for w, c in lm.unigrams.items()]),
            "bigram": _sorted([[[list(t) for t in k], c] for k, c in lm.bigrams.items()]),
            "trigram": _sorted([[[list(t) for t in k], c] for k, c in lm.trigrams.items()]),
        },
    }


def dumps(model: TrainedModel) -> bytes:
    body = json.dumps(to_document(model), sort_keys=True, ensure_ascii=False,
                      separators=(",", ":")).encode("utf-8") + b"\n"
    return body + b"#sha256:" + hashlib.sha256(body).hexdigest().encode("ascii") + b"\n"


def save(model: TrainedModel, path) -> None:
    data = dumps(model)
    with open(path, "wb") as fh:
        fh.write(data)


def _count(c) -> int:
    if isinstance(c, bool) or not isinstance(c, int) or c < 0:
        raise ModelFormatError(f"invalid count {c!r}")
    return c


def from_document(doc: dict) -> TrainedModel:
    if doc.get("version") != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported model version {doc.get('version')!r}")
    try:
        lab = doc["label_model"]
        label_model = LabelModel(
            {MeaningLabel.from_json(k): _count(c) for k, c in lab["unigram"]},
            {(MeaningLabel.from_json(a), MeaningLabel.from_json(b)): _count(c)
             for a, b, c in lab["bigram"]},
            {MeaningLabel.from_json(k): _count(c) for k, c in lab["start"]},
            {MeaningLabel.from_json(k): _count(c) for k, c in lab["end"]},
        )
        features = FeatureModel({DependencyFeature.from_json(f): _count(c)
                                 for f, c in doc["feature_model"]})
        wm = doc["word_model"]
        words = WordModel({WordFeature.from_json(f): _count(c) for f, c in wm["features"]},
                          {(_part_from(p1), _part_from(p2)): [_count(a), _count(b)]
                           for p1, p2, (a, b) in wm["value_forms"]})
        tg = doc["trigram"]
        trigram = TrigramLM(
            {tuple(w): _count(c) for w, c in tg["unigram"]},
            {tuple(tuple(t) for t in k): _count(c) for k, c in tg["bigram"]},
            {tuple(tuple(t) for t in k): _count(c) for k, c in tg["trigram"]},
            tuple(tg["weights"]),
        )
        config = dict(doc["config"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ModelFormatError):
            raise
        raise ModelFormatError(f"malformed model document: {exc}") from None
    try:
        label_model.validate()
        features.validate()
        words.validate()
        trigram.validate()
    except ValueError as exc:
        raise ModelFormatError(f"model invariant violated: {exc}") from None
    return TrainedModel(label_model, features, words, trigram, config, FORMAT_VERSION)


def loads(data: bytes) -> TrainedModel:
    body, sep, tail = data.rstrip(b"\n").rpartition(b"\n")
    if not sep or not tail.startswith(b"#sha256:"):
        raise ModelFormatError("truncated model file: missing checksum line")
    body += b"\n"
    if hashlib.sha256(body).hexdigest().encode("ascii") != tail[len(b"#sha256:"):]:
        raise ModelFormatError("model checksum mismatch")
    try:
        doc = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from None
    return from_document(doc)


def load(path) -> TrainedModel:
    with open(path, "rb") as fh:
        return loads(fh.read())
