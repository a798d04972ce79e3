import random
from collections import Counter

import pytest

from depgen import store
from depgen.corpus import CorpusError, DependencyTree, MeaningRepresentation, Scenario, Token
from depgen.model import prepare, train_model
from depgen.toy import build_heldout, build_training_corpus, heldout_corpus, training_corpus

import oracles


def test_bundled_data_matches_builders():
    assert training_corpus() == build_training_corpus()
    assert heldout_corpus() == build_heldout()
    assert len(training_corpus()) == 12
    assert all(not sc.parsed_trees and sc.references for sc in heldout_corpus())


def test_labels_in_trees_match_aligned_sequence():
    rng = random.Random(9)
    scenarios, _ = oracles.random_corpus(rng)
    data = prepare(scenarios)
    for al, tree, row in zip(data.aligned, data.trees, data.report):
        assert Counter(tree.label_of.values()) == Counter(al.label_sequence)
        assert row["non_constituent"] == []


def test_non_constituent_span_is_reported_not_fatal():
    mr = MeaningRepresentation.from_json([{"type": "t", "fields": {"v": "new york", "w": "b"}}])
    tree = DependencyTree((Token(1, "a", "DT", 2, "det"), Token(2, "new", "NNP", 0, "root"),
                           Token(3, "york", "NNP", 4, "x"), Token(4, "b", "NN", 2, "obj")))
    sc = Scenario("nc", mr, ("a new york b",), (tree,))
    model, report = train_model([sc])
    assert report[0]["non_constituent"] == ["[t;@v]"]
    assert model.label_model.total_labels == 2


def test_config_and_determinism(toy_train):
    m1, _ = train_model(toy_train)
    m2, _ = train_model(list(toy_train))
    assert store.dumps(m1) == store.dumps(m2)
    longest = max(len(t) for sc in toy_train for t in sc.parsed_trees)
    assert m1.config["max_nodes"] == 2 * longest + 1


def test_untrainable_scenarios():
    mr = MeaningRepresentation.from_json([{"type": "k", "fields": {"a": "x"}}])
    with pytest.raises(CorpusError, match="no references"):
        train_model([Scenario("e", mr)])
    tree = DependencyTree((Token(1, "x", "NN", 0, "root"),))
    with pytest.raises(CorpusError, match="tokens but its tree has"):
        train_model([Scenario("e", mr, ("x shoots",), (tree,))])
