import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from depgen.alignment import AlignedSentence
from depgen.corpus import MeaningLabel
from depgen.planner import (NEG_INF, PlanningError, label_probability, plan_content,
                            sequence_probability, train_label_model, transition_probability)

L1, L2, L3 = MeaningLabel("a", "x"), MeaningLabel("a", "y"), MeaningLabel("b", "z")


def sent(*items):
    return AlignedSentence(tuple(items))


def two_sentence_model():
    return train_label_model([sent(L1, "passes", "to", L2), sent(L1, L2)])


def test_counting_example():
    m = two_sentence_model()
    assert m.unigram_count == {L1: 2, L2: 2}
    assert m.total_labels == 4
    assert label_probability(m, L1) == 0.5
    assert transition_probability(m, L1, L2) == 1.0
    assert transition_probability(m, L2, L1) == 0.0
    assert label_probability(m, L3) == 0.0


def test_single_label_corpus():
    m = train_label_model([sent("x", L1)])
    assert label_probability(m, L1) == 1.0
    assert m.start_count == {L1: 1} and m.end_count == {L1: 1}


def test_no_labels_error():
    with pytest.raises(PlanningError, match="no meaning labels in training data"):
        train_label_model([sent("just", "words")])


def test_sequence_probability():
    m = two_sentence_model()
    assert sequence_probability(m, [L1, L2]) == pytest.approx(math.log(0.5), abs=1e-15)
    assert sequence_probability(m, [L2, L1]) == NEG_INF
    assert sequence_probability(m, [L1]) == math.log(0.5)


def test_plan_examples():
    m = two_sentence_model()
    plan = plan_content(m, [L2, L1])
    assert plan.labels == (L1, L2)
    assert plan.log_probability <= 0
    assert plan_content(m, [L2]).labels == (L2,)
    with pytest.raises(PlanningError, match="content plan empty under threshold"):
        plan_content(m, [L1, L2], threshold=0.6)


labels = st.sampled_from([MeaningLabel("r", f"f{i}") for i in range(5)])
corpora = st.lists(st.lists(labels, min_size=1, max_size=5, unique=True), min_size=1, max_size=8)


@settings(max_examples=80, deadline=None)
@given(corpora)
def test_distribution_invariants(seqs):
    m = train_label_model([sent(*s) for s in seqs])
    m.validate()
    assert abs(sum(label_probability(m, lab) for lab in m.unigram_count) - 1) <= 1e-12
    for i in m.unigram_count:
        row = sum(transition_probability(m, i, j) for j in m.unigram_count)
        assert abs(m.end_count.get(i, 0) / m.unigram_count[i] + row - 1) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(corpora, st.lists(labels, min_size=1, max_size=5, unique=True), st.randoms())
def test_plan_matches_brute_force_and_ignores_input_order(seqs, cands, rnd):
    m = train_label_model([sent(*s) for s in seqs])
    plan = plan_content(m, cands)
    perms = list(itertools.permutations(cands))
    best = max(sequence_probability(m, p) for p in perms)
    assert plan.log_probability == best
    tied = sorted((p for p in perms if sequence_probability(m, p) == best),
                  key=lambda p: [lab.key for lab in p])
    assert plan.labels == tied[0]
    shuffled = list(cands)
    rnd.shuffle(shuffled)
    assert plan_content(m, shuffled) == plan


def test_beam_fallback_agrees_on_chain():
    chain = [MeaningLabel("c", f"f{i}") for i in range(10)]
    m = train_label_model([sent(*chain)])
    plan = plan_content(m, list(reversed(chain)), max_exhaustive=8)
    assert plan.labels == tuple(chain)
    assert plan.log_probability == pytest.approx(math.log(0.1))
