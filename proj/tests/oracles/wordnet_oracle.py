#!/usr/bin/env python3
"""Independent line-level reading of the WNDB flat files.

Derives the frozen expected values used by the C++ wordnet tests
(synset counts, first senses, direct hypernyms, synonym sets) straight
from the raw index.* / data.* bytes, without going through the library
under test. Run from the repo root:

    python3 tests/oracles/wordnet_oracle.py third_party/wordnet/dict
"""
import sys
from pathlib import Path

POS_FILES = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}


def data_lines(dict_dir, pos):
    path = Path(dict_dir) / f"data.{POS_FILES[pos]}"
    for line in path.read_text(encoding="latin-1").splitlines():
        if line and not line.startswith(" "):
            yield line


def count_synsets(dict_dir):
    counts = {pos: sum(1 for _ in data_lines(dict_dir, pos)) for pos in POS_FILES}
    counts["total"] = sum(counts.values())
    return counts


def index_line(dict_dir, lemma, pos):
    path = Path(dict_dir) / f"index.{POS_FILES[pos]}"
    for line in path.read_text(encoding="latin-1").splitlines():
        if line.startswith(" "):
            continue
        fields = line.split(" ")
        if fields[0] == lemma:
            return fields
    return None


def index_offsets(fields):
    # lemma pos synset_cnt p_cnt [ptr...] sense_cnt tagsense_cnt offset...
    p_cnt = int(fields[3])
    synset_cnt = int(fields[2])
    return [int(x) for x in fields[4 + p_cnt + 2 : 4 + p_cnt + 2 + synset_cnt]]


def parse_data_line(line):
    body, _, gloss = line.partition("|")
    fields = body.split()
    offset = int(fields[0])
    ss_type = fields[2]
    w_cnt = int(fields[3], 16)
    words = [fields[4 + 2 * i] for i in range(w_cnt)]
    p_idx = 4 + 2 * w_cnt
    p_cnt = int(fields[p_idx])
    pointers = []
    for i in range(p_cnt):
        sym, off, pos, _ = fields[p_idx + 1 + 4 * i : p_idx + 5 + 4 * i]
        pointers.append((sym, int(off), pos))
    return offset, ss_type, words, pointers, gloss.strip()


def find_synset(dict_dir, pos, offset):
    for line in data_lines(dict_dir, pos):
        parsed = parse_data_line(line)
        if parsed[0] == offset:
            return parsed
    raise KeyError((pos, offset))


def describe(dict_dir, lemma, pos):
    fields = index_line(dict_dir, lemma, pos)
    if fields is None:
        print(f"  {lemma!r}/{pos}: not in index")
        return
    offsets = index_offsets(fields)
    first = find_synset(dict_dir, pos, offsets[0])
    off, ss_type, words, pointers, gloss = first
    print(f"  {lemma!r}/{pos}: {len(offsets)} senses, first = {off:08d}-{ss_type}")
    print(f"    words: {words}")
    print(f"    gloss: {gloss[:60]}")
    hyps = [(o, p) for sym, o, p in pointers if sym in ("@", "@i")]
    for o, p in hyps:
        hwords = find_synset(dict_dir, p, o)[2]
        print(f"    hypernym: {o:08d}-{p} words={hwords}")
    syn = set()
    for o in offsets:
        syn.update(w.lower() for w in find_synset(dict_dir, pos, o)[2])
    syn.discard(lemma)
    print(f"    synonyms over all senses (minus query): {sorted(syn)}")


def main():
    dict_dir = sys.argv[1] if len(sys.argv) > 1 else "third_party/wordnet/dict"
    counts = count_synsets(dict_dir)
    print("synset counts:", counts)
    for lemma, pos in [("rose", "n"), ("rose", "v"), ("bloom", "n"), ("bloom", "v"),
                       ("garden", "n"), ("dawn", "n"), ("fragrance", "n"),
                       ("memory", "n"), ("carry", "v"), ("home", "n"), ("entity", "n")]:
        describe(dict_dir, lemma, pos)


if __name__ == "__main__":
    main()
