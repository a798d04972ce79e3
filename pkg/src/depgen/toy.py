"""A small RoboCup-style grammar that produces parsed training scenarios.

Each template is a hand-parsed sentence whose slot tokens (``{arg1}``) are
filled from the record. ``{minute:words}`` spells the number out.
"""
from __future__ import annotations

import random
from importlib import resources
from typing import Optional

from .alignment import number_word
from .corpus import DependencyTree, MeaningRepresentation, Scenario, Token, parse_scenarios

PINK = [f"pink{i}" for i in range(1, 12)]
PURPLE = [f"purple{i}" for i in range(1, 12)]

# (form, pos, head, deprel) rows, 1-based heads
TEMPLATES: dict[str, list[list[tuple]]] = {
    "pass": [
        [("{arg1}", "NNP", 2, "nsubj"), ("passes", "VBZ", 0, "root"),
         ("to", "IN", 4, "case"), ("{arg2}", "NNP", 2, "obl")],
        [("{arg1}", "NNP", 2, "nsubj"), ("passes", "VBZ", 0, "root"), ("the", "DT", 4, "det"),
         ("ball", "NN", 2, "obj"), ("to", "IN", 6, "case"), ("{arg2}", "NNP", 2, "obl")],
        [("{arg1}", "NNP", 2, "nsubj"), ("makes", "VBZ", 0, "root"), ("a", "DT", 5, "det"),
         ("short", "JJ", 5, "amod"), ("pass", "NN", 2, "obj"), ("to", "IN", 7, "case"),
         ("{arg2}", "NNP", 5, "nmod")],
    ],
    "kick": [
        [("{arg1}", "NNP", 2, "nsubj"), ("kicks", "VBZ", 0, "root"), ("the", "DT", 4, "det"),
         ("ball", "NN", 2, "obj")],
        [("{arg1}", "NNP", 2, "nsubj"), ("shoots", "VBZ", 0, "root")],
    ],
    "turnover": [
        [("{arg1}", "NNP", 2, "nsubj"), ("loses", "VBZ", 0, "root"), ("the", "DT", 4, "det"),
         ("ball", "NN", 2, "obj"), ("to", "IN", 6, "case"), ("{arg2}", "NNP", 2, "obl")],
        [("{arg2}", "NNP", 2, "nsubj"), ("steals", "VBZ", 0, "root"), ("the", "DT", 4, "det"),
         ("ball", "NN", 2, "obj"), ("from", "IN", 6, "case"), ("{arg1}", "NNP", 2, "obl")],
    ],
    "badPass": [
        [("{arg1}", "NNP", 2, "nsubj"), ("makes", "VBZ", 0, "root"), ("a", "DT", 5, "det"),
         ("bad", "JJ", 5, "amod"), ("pass", "NN", 2, "obj"), ("to", "IN", 7, "case"),
         ("{arg2}", "NNP", 5, "nmod")],
    ],
    "goal": [
        [("{arg1}", "NNP", 2, "nsubj"), ("scores", "VBZ", 0, "root"), ("in", "IN", 4, "case"),
         ("minute", "NN", 2, "obl"), ("{minute}", "CD", 4, "nummod")],
        [("{arg1}", "NNP", 2, "nsubj"), ("scores", "VBZ", 0, "root"), ("after", "IN", 5, "case"),
         ("{minute:words}", "CD", 5, "nummod"), ("minutes", "NNS", 2, "obl")],
    ],
}

FIELDS = {"pass": ("arg1", "arg2"), "kick": ("arg1",), "turnover": ("arg1", "arg2"),
          "badPass": ("arg1", "arg2"), "goal": ("arg1", "minute")}


def random_record(rng: random.Random, record_type: Optional[str] = None) -> dict:
    """A record drawn from the grammar; attacker and receiver never coincide."""
    record_type = record_type or rng.choice(sorted(TEMPLATES))
    team = rng.choice([PINK, PURPLE])
    a, b = rng.sample(team, 2)
    if record_type == "turnover":
        b = rng.choice(PURPLE if team is PINK else PINK)
    fields = {"arg1": a}
    if "arg2" in FIELDS[record_type]:
        fields["arg2"] = b
    if record_type == "goal":
        fields["minute"] = str(rng.randint(1, 90))
    return {"type": record_type, "fields": fields}


def realize(record: dict, template: list[tuple]) -> tuple[str, DependencyTree]:
    fields = record["fields"]
    words = []
    for form, *_ in template:
        if form.startswith("{"):
            name, _, style = form[1:-1].partition(":")
            value = fields[name]
            words.append(number_word(int(value)) if style == "words" else value)
        else:
            words.append(form)
    toks = tuple(Token(i, w, pos, head, dep)
                 for i, (w, (_, pos, head, dep)) in enumerate(zip(words, template), start=1))
    return " ".join(words), DependencyTree(toks)


def make_scenario(sid: str, record: dict, template_ids: Optional[list[int]] = None,
                  with_trees: bool = True) -> Scenario:
    templates = TEMPLATES[record["type"]]
    ids = range(len(templates)) if template_ids is None else template_ids
    pairs = [realize(record, templates[k]) for k in ids]
    mr = MeaningRepresentation.from_json([record])
    return Scenario(sid, mr, tuple(s for s, _ in pairs),
                    tuple(t for _, t in pairs) if with_trees else ())


def build_training_corpus(seed: int = 7) -> list[Scenario]:
    """Twelve scenarios: every template once, then two extra passes."""
    rng = random.Random(seed)
    out = []
    for rtype in sorted(TEMPLATES):
        for k in range(len(TEMPLATES[rtype])):
            out.append(make_scenario(f"train{len(out) + 1:02d}", random_record(rng, rtype), [k]))
    for k in (0, 1):
        out.append(make_scenario(f"train{len(out) + 1:02d}", random_record(rng, "pass"), [k]))
    return out


def build_heldout(seed: int = 11) -> list[Scenario]:
    """One scenario per record type (two for pass), references from every template."""
    rng = random.Random(seed)
    out = []
    for rtype in sorted(TEMPLATES) + ["pass"]:
        sc = make_scenario(f"test{len(out) + 1:02d}", random_record(rng, rtype))
        out.append(Scenario(sc.id, sc.mr, sc.references, ()))
    return out


def random_mrs(n: int, seed: int = 0) -> list[Scenario]:
    rng = random.Random(seed)
    return [Scenario(f"rand{i:03d}", MeaningRepresentation.from_json([random_record(rng)]))
            for i in range(n)]


def _bundled(name: str) -> list[Scenario]:
    text = resources.files("depgen").joinpath("data", name).read_text(encoding="utf-8")
    return parse_scenarios(text.splitlines())


def training_corpus() -> list[Scenario]:
    """The bundled 12-scenario training corpus."""
    return _bundled("toy_train.jsonl")


def heldout_corpus() -> list[Scenario]:
    """Held-out MRs with paraphrase references (no trees)."""
    return _bundled("toy_heldout.jsonl")
