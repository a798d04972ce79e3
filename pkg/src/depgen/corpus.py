"""Meaning representations, scenarios and pre-parsed dependency trees.

Scenario files are newline-delimited JSON::

    {"id": "s1",
     "records": [{"type": "pass", "fields": {"arg1": "pink4", "arg2": "pink7"}}],
     "references": ["pink4 passes to pink7"],
     "trees": [[[1, "pink4", "NNP", 2, "nsubj"], [2, "passes", "VBZ", 0, "root"], ...]]}

Trees may instead come from a CoNLL-U file, one block per reference, in
file order (see :func:`attach_trees`).
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

_FORBIDDEN_FIELD_CHARS = set(";@[]")
_LABEL_RE = re.compile(r"^\[([^;\[\]@]+);@([^;\[\]@]+)\]$")


class CorpusError(ValueError):
    """Malformed or invariant-violating corpus input."""


@dataclass(frozen=True, order=True)
class MeaningLabel:
    """A delexicalized content unit, rendered ``[record;@field]``.

    ``occurrence`` separates repeated record types inside one MR and never
    shows up in the rendered form.
    """

    record_type: str
    field: str
    occurrence: int = 0

    def __str__(self) -> str:
        return f"[{self.record_type};@{self.field}]"

    @property
    def key(self) -> str:
        """Injective rendering, used wherever labels must stay distinct."""
        if self.occurrence:
            return f"[{self.record_type};@{self.field}]:{self.occurrence}"
        return str(self)

    def to_json(self) -> list:
        return [self.record_type, self.field, self.occurrence]

    @classmethod
    def from_json(cls, obj: Sequence) -> "MeaningLabel":
        record_type, field_name, occurrence = obj
        return cls(str(record_type), str(field_name), int(occurrence))

    @classmethod
    def parse(cls, text: str) -> "MeaningLabel | None":
        """Parse a rendered label (``[pass;@arg1]`` or ``[pass;@arg1]:1``)."""
        base, _, occ = text.partition("]:")
        if occ:
            base += "]"
            if not occ.isdigit():
                return None
        m = _LABEL_RE.match(base)
        if m is None:
            return None
        return cls(m.group(1), m.group(2), int(occ) if occ else 0)


@dataclass(frozen=True)
class FieldValue:
    field: str
    value: str

    def __post_init__(self):
        if not self.field or _FORBIDDEN_FIELD_CHARS & set(self.field):
            raise CorpusError(f"invalid field name {self.field!r}")
        if not self.value or not self.value.strip():
            raise CorpusError(f"empty value for field {self.field!r}")


@dataclass(frozen=True)
class Record:
    record_type: str
    fields: tuple[FieldValue, ...]

    def __post_init__(self):
        if not self.record_type or _FORBIDDEN_FIELD_CHARS & set(self.record_type):
            raise CorpusError(f"invalid record type {self.record_type!r}")
        names = [fv.field for fv in self.fields]
        if len(names) != len(set(names)):
            raise CorpusError(f"duplicate field names in record {self.record_type!r}")

    def get(self, field_name: str) -> str | None:
        for fv in self.fields:
            if fv.field == field_name:
                return fv.value
        return None


@dataclass(frozen=True)
class MeaningRepresentation:
    records: tuple[Record, ...]

    def __post_init__(self):
        if not self.records:
            raise CorpusError("MR must contain at least one record")

    @classmethod
    def from_json(cls, records: Iterable[Mapping]) -> "MeaningRepresentation":
        out = []
        for rec in records:
            if "type" not in rec:
                raise CorpusError("record is missing 'type'")
            fields = rec.get("fields", {})
            if not isinstance(fields, Mapping):
                raise CorpusError("record 'fields' must be an object")
            out.append(Record(str(rec["type"]),
                              tuple(FieldValue(str(k), str(v)) for k, v in fields.items())))
        return cls(tuple(out))

    def to_json(self) -> list:
        return [{"type": r.record_type, "fields": {fv.field: fv.value for fv in r.fields}}
                for r in self.records]

    def labelled_values(self) -> list[tuple[MeaningLabel, str]]:
        """(label, value) pairs in record-then-field order."""
        seen: dict[str, int] = {}
        out = []
        for rec in self.records:
            occ = seen.get(rec.record_type, 0)
            seen[rec.record_type] = occ + 1
            for fv in rec.fields:
                out.append((MeaningLabel(rec.record_type, fv.field, occ), fv.value))
        return out

    def value_of(self, label: MeaningLabel) -> str | None:
        for lab, value in self.labelled_values():
            if lab == label:
                return value
        return None

    def __len__(self) -> int:
        return sum(len(r.fields) for r in self.records)


def all_candidate_labels(mr: MeaningRepresentation) -> list[MeaningLabel]:
    """Every ``[record;@field]`` label the MR could express, in MR order."""
    return [label for label, _ in mr.labelled_values()]


@dataclass(frozen=True)
class Token:
    index: int
    word: str
    pos: str
    head: int
    deprel: str


@dataclass(frozen=True)
class DependencyTree:
    """A rooted dependency tree over 1-based tokens.

    ``label_of`` maps token indices to meaning labels once the tree has been
    delexicalized.
    """

    tokens: tuple[Token, ...]
    label_of: Mapping[int, MeaningLabel] = field(default_factory=dict)

    def __post_init__(self):
        validate_tree(self.tokens)
        for idx in self.label_of:
            if not 1 <= idx <= len(self.tokens):
                raise CorpusError(f"label attached to missing token {idx}")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def root(self) -> Token:
        return next(t for t in self.tokens if t.head == 0)

    def token(self, index: int) -> Token:
        return self.tokens[index - 1]

    def children(self, index: int) -> list[Token]:
        return [t for t in self.tokens if t.head == index]

    @property
    def words(self) -> list[str]:
        return [t.word for t in self.tokens]

    def to_rows(self) -> list[list]:
        return [[t.index, t.word, t.pos, t.head, t.deprel] for t in self.tokens]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "DependencyTree":
        toks = []
        for row in rows:
            if len(row) != 5:
                raise CorpusError(f"tree row must have 5 columns, got {row!r}")
            idx, form, upos, head, deprel = row
            toks.append(Token(int(idx), str(form), str(upos), int(head), str(deprel)))
        return cls(tuple(toks))

    def to_conllu(self) -> str:
        lines = []
        for t in self.tokens:
            lines.append("\t".join([str(t.index), t.word, "_", t.pos, "_", "_",
                                    str(t.head), t.deprel, "_", "_"]))
        return "\n".join(lines) + "\n"


def validate_tree(tokens: Sequence[Token]) -> None:
    if not tokens:
        raise CorpusError("empty dependency tree")
    n = len(tokens)
    for pos, tok in enumerate(tokens, start=1):
        if tok.index != pos:
            raise CorpusError(f"non-contiguous token ids: expected {pos}, got {tok.index}")
    for tok in tokens:
        if tok.head == tok.index:
            raise CorpusError(f"self-loop at token {tok.index}")
        if not 0 <= tok.head <= n:
            raise CorpusError(f"token {tok.index} has head {tok.head} outside the sentence")
        if not tok.pos:
            raise CorpusError(f"token {tok.index} has an empty PoS tag")
        if not tok.deprel:
            raise CorpusError(f"token {tok.index} has an empty dependency relation")
    roots = [t.index for t in tokens if t.head == 0]
    if len(roots) != 1:
        raise CorpusError(f"tree must have exactly one root, found {len(roots)}")
    for tok in tokens:
        seen = set()
        cur = tok.index
        while cur != 0:
            if cur in seen:
                raise CorpusError(f"cyclic head links through token {tok.index}")
            seen.add(cur)
            cur = tokens[cur - 1].head


@dataclass(frozen=True)
class Scenario:
    id: str
    mr: MeaningRepresentation
    references: tuple[str, ...] = ()
    parsed_trees: tuple[DependencyTree, ...] = ()

    def check_trainable(self) -> None:
        if not self.references:
            raise CorpusError(f"scenario {self.id}: no references to train on")
        if len(self.references) != len(self.parsed_trees):
            raise CorpusError(
                f"scenario {self.id}: {len(self.references)} references but "
                f"{len(self.parsed_trees)} trees")
        for ref, tree in zip(self.references, self.parsed_trees):
            if len(ref.split()) != len(tree):
                raise CorpusError(
                    f"scenario {self.id}: reference {ref!r} has {len(ref.split())} "
                    f"tokens but its tree has {len(tree)}")

    def to_json(self) -> dict:
        obj = {"id": self.id, "records": self.mr.to_json(),
               "references": list(self.references)}
        if self.parsed_trees:
            obj["trees"] = [t.to_rows() for t in self.parsed_trees]
        return obj

    @classmethod
    def from_json(cls, obj: Mapping) -> "Scenario":
        sid = obj.get("id")
        if not isinstance(sid, str) or not sid:
            raise CorpusError("scenario is missing a string 'id'")
        try:
            mr = MeaningRepresentation.from_json(obj.get("records", []))
            refs = obj.get("references", [])
            if not isinstance(refs, list) or not all(isinstance(r, str) for r in refs):
                raise CorpusError("'references' must be a list of strings")
            trees = tuple(DependencyTree.from_rows(rows) for rows in obj.get("trees", []))
        except CorpusError as exc:
            raise CorpusError(f"scenario {sid}: {exc}") from None
        if trees and len(trees) != len(refs):
            raise CorpusError(
                f"scenario {sid}: 'trees' has {len(trees)} entries for {len(refs)} references")
        return cls(sid, mr, tuple(refs), trees)


def parse_scenarios(lines: Iterable[str]) -> list[Scenario]:
    out = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"line {lineno}: malformed JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise CorpusError(f"line {lineno}: expected a JSON object")
        try:
            out.append(Scenario.from_json(obj))
        except CorpusError as exc:
            raise CorpusError(f"line {lineno}: {exc}") from None
    return out


def load_scenarios(path) -> list[Scenario]:
    with open(path, encoding="utf-8") as fh:
        return parse_scenarios(fh)


def dump_scenarios(scenarios: Iterable[Scenario], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sc in scenarios:
            fh.write(json.dumps(sc.to_json(), ensure_ascii=False) + "\n")


def parse_conllu(text: str) -> list[DependencyTree]:
    trees = []
    block: list[Token] = []
    for line in text.splitlines() + [""]:
        line = line.rstrip("\r\n")
        if not line.strip():
            if block:
                trees.append(DependencyTree(tuple(block)))
                block = []
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            # whitespace-separated 5-column shorthand
            cols = line.split()
            if len(cols) == 5:
                cols = [cols[0], cols[1], "_", cols[2], "_", "_", cols[3], cols[4], "_", "_"]
        if len(cols) != 10:
            raise CorpusError(f"CoNLL-U line needs 10 columns: {line!r}")
        if "-" in cols[0] or "." in cols[0]:
            continue
        try:
            block.append(Token(int(cols[0]), cols[1], cols[3], int(cols[6]), cols[7]))
        except ValueError:
            raise CorpusError(f"non-integer ID or HEAD in line {line!r}") from None
    return trees


def load_conllu(path) -> list[DependencyTree]:
    with open(path, encoding="utf-8") as fh:
        return parse_conllu(fh.read())


def attach_trees(scenarios: Sequence[Scenario], trees: Sequence[DependencyTree]) -> list[Scenario]:
    """Pair trees with references in file order across all scenarios."""
    needed = sum(len(sc.references) for sc in scenarios)
    if needed != len(trees):
        raise CorpusError(f"{needed} references but {len(trees)} trees in the CoNLL-U file")
    out = []
    it = iter(trees)
    for sc in scenarios:
        mine = tuple(next(it) for _ in sc.references)
        out.append(Scenario(sc.id, sc.mr, sc.references, mine))
    return out
