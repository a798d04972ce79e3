import pytest
from hypothesis import given, settings, strategies as st

from depgen.corpus import DependencyTree, MeaningLabel, MeaningRepresentation, Scenario, Token
from depgen.evaluation import slot_error
from depgen.generator import GenerationError, produce_trees
from depgen.lm import train_trigram
from depgen.model import train_model
from depgen.realizer import (LABEL_VALUE, POS_BACKOFF, WORD_FEATURE, LexNode, generate,
                             lexicalize, linearize)
from depgen.toy import make_scenario, random_mrs

PASS = MeaningRepresentation.from_json([{"type": "pass",
                                         "fields": {"arg1": "pink4", "arg2": "pink7"}}])
PASS_TREE = DependencyTree((Token(1, "pink4", "NNP", 2, "nsubj"),
                            Token(2, "passes", "VBZ", 0, "root"),
                            Token(3, "to", "IN", 4, "case"), Token(4, "pink7", "NNP", 2, "obl")))
PASS_SC = Scenario("s1", PASS, ("pink4 passes to pink7",), (PASS_TREE,))


@pytest.fixture(scope="module")
def one():
    model, _ = train_model([PASS_SC])
    return model


def _words(node):
    return {(node.word, node.origin)} | {w for c in node.children for w in _words(c)}


def test_lexicalize_toy(one):
    [tree] = produce_trees(one.feature_model, [MeaningLabel("pass", "arg1"),
                                               MeaningLabel("pass", "arg2")], beam=1)
    [lex] = lexicalize(tree, one.word_model, PASS, candidates=3)
    assert _words(lex) == {("passes", WORD_FEATURE), ("pink4", LABEL_VALUE),
                           ("pink7", LABEL_VALUE), ("to", WORD_FEATURE)}


def test_multiword_value_expands_in_place(one):
    hotel = MeaningRepresentation.from_json([{"type": "pass", "fields": {
        "arg1": "grant hotel", "arg2": "pink7"}}])
    [best, *_] = generate(Scenario("h", hotel), one, beam=1, candidates=1)
    assert best.sentence == "grant hotel passes to pink7"


def test_pos_backoff(one):
    # word features from a different record type: the IN node's skeleton is
    # unseen, so it takes the most frequent IN word of that corpus
    steal = make_scenario("t", {"type": "turnover", "fields": {"arg1": "pink1", "arg2": "pink2"}},
                          [1])
    other, _ = train_model([steal])
    [tree] = produce_trees(one.feature_model, [MeaningLabel("pass", "arg1"),
                                               MeaningLabel("pass", "arg2")], beam=1)
    [lex] = lexicalize(tree, other.word_model, PASS)
    assert ("from", POS_BACKOFF) in _words(lex)


def test_on_tuesday_july():
    lm = train_trigram([[("On", "IN"), ("Tuesday", "NNP"), ("July", "NNP"), ("5", "CD")],
                        [("On", "IN"), ("Tuesday", "NNP"), ("July", "NNP")]])
    root = LexNode("July", "NNP", WORD_FEATURE,
                   (LexNode("On", "IN", WORD_FEATURE), LexNode("Tuesday", "NNP", WORD_FEATURE)))
    assert linearize(root, lm).text() == "On Tuesday July"


def test_leaf_and_two_units():
    lm = train_trigram([[("b", "X"), ("a", "X")]])
    leaf = LexNode("a", "X", WORD_FEATURE)
    assert linearize(leaf, lm).tokens == (("a", "X"),)
    two = LexNode("a", "X", WORD_FEATURE, (LexNode("b", "X", WORD_FEATURE),))
    assert linearize(two, lm).text() == "b a"


def test_perm_cap_keeps_child_order():
    lm = train_trigram([[("z", "X")]])
    kids = tuple(LexNode(w, "X", WORD_FEATURE) for w in "abcd")
    root = LexNode("h", "X", WORD_FEATURE, kids)
    words = linearize(root, lm, perm_cap=2).text().replace("h", "").split()
    assert words == list("abcd")


def test_round_trip_generation(one):
    out = generate(PASS_SC, one, beam=1, candidates=1)
    assert out[0].sentence == "pink4 passes to pink7"


def test_generate_errors_carry_scenario_id(one):
    mr = MeaningRepresentation.from_json([{"type": "goal", "fields": {"arg1": "pink4"}}])
    with pytest.raises(GenerationError, match="scenario unseen: no ROOT feature covers first label"):
        generate(Scenario("unseen", mr), one)


def test_identical_mrs_identical_output(toy_model):
    a, b = random_mrs(1, 4)[0], random_mrs(1, 4)[0]
    assert [(r.sentence, r.score) for r in generate(a, toy_model)] == \
        [(r.sentence, r.score) for r in generate(b, toy_model)]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 5000), st.sampled_from([1, 3, 20]))
def test_generated_sentence_properties(toy_model, seed, width):
    [sc] = random_mrs(1, seed)
    out = generate(sc, toy_model, beam=width, candidates=width)
    assert out and len(out) <= width * width
    keys = [(-r.score, r.sentence) for r in out]
    assert keys == sorted(keys)
    assert len({r.sentence for r in out}) == len(out)
    for r in out:
        assert slot_error(r.sentence, sc.mr).err == 0.0
        n_words = sum(len(v.split()) - 1 for _, v in sc.mr.labelled_values())
        assert len(r.sentence.split()) == len(r.tree) + n_words
        assert r.lexical.size() == len(r.tree)


def test_spelled_number_form_follows_training():
    rec = {"type": "goal", "fields": {"arg1": "pink2", "minute": "25"}}
    sc = make_scenario("g", rec, [1])
    model, _ = train_model([sc])
    other = MeaningRepresentation.from_json([{"type": "goal",
                                              "fields": {"arg1": "pink3", "minute": "40"}}])
    best = generate(Scenario("g2", other), model, beam=1, candidates=1)[0]
    assert best.sentence == "pink3 scores after forty minutes"
