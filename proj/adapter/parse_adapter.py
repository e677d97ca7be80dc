# Copyright 2026 The causal-patterns Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Raw sentences to CoNLL-U via spaCy, plus template instantiation.

The C++ engine never calls this; it only reads the CoNLL-U this writes.
spaCy is imported lazily so `instantiate` works without it.

  parse_adapter.py parse sentences.jsonl --out trees.conllu
  parse_adapter.py instantiate --templates data/templates.txt \
      --seeds data/seeds.tsv --out dummies.jsonl
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

LOCK_FILE = Path(__file__).with_name("parser.lock")


@dataclasses.dataclass(frozen=True)
class RawSentence:
    sentence_id: str
    text: str


def _words(template: str) -> list[str]:
    return [w.rstrip(",.;:") for w in template.split()]


def instantiate_templates(templates, seed_pairs):
    """Cross product of templates and (cause, effect) pairs, ids t<i>_p<j>."""
    out = []
    for i, t in enumerate(templates):
        words = _words(t)
        if words.count("X") != 1 or words.count("Y") != 1:
            raise ValueError(f"template {t!r} must contain exactly one X and one Y")
        for j, (cause, effect) in enumerate(seed_pairs):
            parts = []
            for w in t.split():
                core = w.rstrip(",.;:")
                tail = w[len(core):]
                parts.append({"X": cause, "Y": effect}.get(core, core) + tail)
            text = " ".join(parts)
            text = text[:1].upper() + text[1:]
            out.append(RawSentence(f"t{i}_p{j}", text))
    return out


def _read_lock():
    lock = {}
    for line in LOCK_FILE.read_text().splitlines():
        if "=" in line and not line.startswith("#"):
            k, v = line.split("=", 1)
            lock[k.strip()] = v.strip()
    return lock


def _load_model():
    lock = _read_lock()
    try:
        import spacy  # noqa: PLC0415
    except ImportError as e:
        raise RuntimeError("spaCy is not installed; see adapter/parser.lock") from e
    nlp = spacy.load(lock["model"])
    if nlp.meta.get("version") != lock["model_version"]:
        print(f"warning: model version {nlp.meta.get('version')} differs from "
              f"locked {lock['model_version']}", file=sys.stderr)
    return nlp


def parse_to_conllu(sentences, nlp=None) -> str:
    """CoNLL-U with lemma, coarse POS and NPHead=Yes on noun-chunk roots."""
    if not sentences:
        return ""
    nlp = nlp or _load_model()
    blocks = []
    for s in sentences:
        doc = nlp(s.text)
        if len(list(doc.sents)) > 1:
            print(f"warning: {s.sentence_id} split by the parser; rejoined", file=sys.stderr)
        heads = {c.root.i for c in doc.noun_chunks}
        roots = [t for t in doc if t.head.i == t.i]
        lines = [f"# sent_id = {s.sentence_id}", f"# text = {s.text}"]
        for t in doc:
            # Extra sentence roots are attached to the first one.
            if t.head.i == t.i:
                head, rel = (0, "ROOT") if t is roots[0] else (roots[0].i + 1, "dep")
            else:
                head, rel = t.head.i + 1, t.dep_
            misc = "NPHead=Yes" if t.i in heads else "_"
            lines.append("\t".join([str(t.i + 1), t.text, t.lemma_, t.pos_, t.tag_, "_",
                                    str(head), rel, "_", misc]))
        blocks.append("\n".join(lines) + "\n")
    return "\n".join(blocks) + "\n"


def _read_sentences(path: Path):
    out = []
    for n, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        if line.lstrip().startswith("{"):
            rec = json.loads(line)
            out.append(RawSentence(rec["sentence_id"], rec["text"]))
        else:
            out.append(RawSentence(f"s{n}", line.strip()))
    return out


def _read_lines(path: Path):
    return [l for l in path.read_text(encoding="utf-8").splitlines()
            if l.strip() and not l.startswith("#")]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("parse")
    p.add_argument("input", type=Path)
    p.add_argument("--out", type=Path)
    i = sub.add_parser("instantiate")
    i.add_argument("--templates", type=Path, required=True)
    i.add_argument("--seeds", type=Path, required=True)
    i.add_argument("--out", type=Path)
    args = ap.parse_args(argv)

    try:
        if args.cmd == "parse":
            text = parse_to_conllu(_read_sentences(args.input))
        else:
            pairs = [tuple(l.split("\t")[:2]) for l in _read_lines(args.seeds)]
            sents = instantiate_templates(_read_lines(args.templates), pairs)
            text = "".join(json.dumps(dataclasses.asdict(s)) + "\n" for s in sents)
    except (RuntimeError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
