"""Convert WordNet 3.0 dict files into the flat TSV lexicon shipped with pertcheck.

Usage::

    python scripts/build_lexicon.py WORDNET_DICT_DIR NAMES_DIR GEONAMES_DATA_DIR OUT_DIR

WORDNET_DICT_DIR holds data.noun, index.noun, cntlist.rev, *.exc (the
``wn==0.0.23`` sdist ships them under ``wn/data/wordnet-3.0``). NAMES_DIR holds
the US census ``dist.male.first`` / ``dist.female.first`` / ``dist.all.last``
files (``names`` package). GEONAMES_DATA_DIR holds ``countries.json``,
``cities15000.json`` and ``us_states.json`` (``geonamescache`` package).

Only the generated relation files are written; the hand-maintained tables
(gender, contractions, stopwords, verb agreement) live in OUT_DIR already.
"""

import json
import re
import sys
from collections import defaultdict
from pathlib import Path

POS_FILES = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}
COARSE = {"n": "NOUN", "v": "VERB", "a": "ADJ", "s": "ADJ", "r": "ADV"}
WORD_RE = re.compile(r"^[a-z]+$")

SYNONYM_SENSES = 2
HYPERNYM_SENSES = 2
HYPERNYM_DEPTH = 2
N_FIRST_NAMES = 1000
N_SURNAMES = 1000
MIN_CITY_POPULATION = 1_000_000


def clean(lemma):
    return re.sub(r"\(.*\)$", "", lemma).lower()


def read_data(wn_dir):
    synsets = {}
    for p, name in POS_FILES.items():
        with open(wn_dir / f"data.{name}", encoding="latin-1") as fh:
            for line in fh:
                if line.startswith("  "):
                    continue
                fields = line.split(" | ")[0].split()
                offset, ss_type = fields[0], fields[2]
                n_words = int(fields[3], 16)
                words = [clean(fields[4 + 2 * i]) for i in range(n_words)]
                i = 4 + 2 * n_words
                n_ptrs = int(fields[i])
                ptrs = []
                for j in range(n_ptrs):
                    sym, target, tpos, srctgt = fields[i + 1 + 4 * j : i + 5 + 4 * j]
                    tpos = "a" if tpos == "s" else tpos
                    ptrs.append((sym, (tpos, target), int(srctgt[:2], 16), int(srctgt[2:], 16)))
                synsets[(p, offset)] = {"words": words, "ptrs": ptrs, "type": ss_type}
    return synsets


def read_index(wn_dir):
    index = {}
    for p, name in POS_FILES.items():
        with open(wn_dir / f"index.{name}", encoding="latin-1") as fh:
            for line in fh:
                if line.startswith("  "):
                    continue
                fields = line.split()
                lemma = fields[0]
                n_senses = int(fields[2])
                offsets = fields[-n_senses:]
                index[(lemma, p)] = offsets
    return index


def read_counts(wn_dir):
    counts = defaultdict(int)
    ss_type_to_pos = {"1": "n", "2": "v", "3": "a", "4": "r", "5": "a"}
    with open(wn_dir / "cntlist.rev", encoding="latin-1") as fh:
        for line in fh:
            key, _, cnt = line.split()
            lemma, rest = key.split("%", 1)
            counts[(lemma.lower(), ss_type_to_pos[rest[0]])] += int(cnt)
    return counts


def synset_id(synsets, key):
    return f"{synsets[key]['words'][0]}.{key[0]}{int(key[1])}"


def main(wn_dir, names_dir, geo_dir, out_dir):
    wn_dir, names_dir, geo_dir, out_dir = map(Path, (wn_dir, names_dir, geo_dir, out_dir))
    synsets = read_data(wn_dir)
    index = read_index(wn_dir)
    counts = read_counts(wn_dir)

    vocab = {(w, p) for (w, p) in index if WORD_RE.match(w)}

    lemma_rows = sorted((w, COARSE[p], counts.get((w, p), 0)) for (w, p) in vocab)
    # relation rows only for words attested in SemCor; keeps the shipped data small
    attested = {(w, p) for (w, p) in vocab if counts.get((w, p), 0) > 0}

    syn_rows, ant_rows, hyp_rows = set(), set(), set()
    for (w, p) in sorted(attested):
        offsets = index[(w, p)]
        for off in offsets[:SYNONYM_SENSES]:
            ss = synsets[(p, off)]
            targets = set(ss["words"])
            if p == "a" and ss["type"] == "s":
                for sym, tkey, _, _ in ss["ptrs"]:
                    if sym == "&":
                        targets.update(synsets[tkey]["words"])
            for t in targets:
                if t != w and WORD_RE.match(t):
                    syn_rows.add((w, COARSE[p], "synonym", t))
        for off in offsets[:HYPERNYM_SENSES]:
            key = (p, off)
            if p == "a":
                ss = synsets[key]
                if ss["type"] == "s":
                    for sym, tkey, _, _ in ss["ptrs"]:
                        if sym == "&":
                            hyp_rows.add((w, "ADJ", "similar", synset_id(synsets, tkey)))
                continue
            frontier = [key]
            for _ in range(HYPERNYM_DEPTH):
                nxt = []
                for k in frontier:
                    for sym, tkey, _, _ in synsets[k]["ptrs"]:
                        if sym in ("@", "@i"):
                            hyp_rows.add((w, COARSE[p], "hypernym", synset_id(synsets, tkey)))
                            nxt.append(tkey)
                frontier = nxt

    for (w, p) in sorted(vocab):
        for off in index[(w, p)]:
            ss = synsets[(p, off)]
            for sym, tkey, src, tgt in ss["ptrs"]:
                if sym != "!" or ss["words"][src - 1] != w:
                    continue
                t = synsets[tkey]["words"][tgt - 1]
                if t != w and WORD_RE.match(t):
                    ant_rows.add((w, COARSE[p], "antonym", t))

    # antonym table must be symmetric; keep only pairs recorded in both directions
    ant_set = {(w, p, t) for (w, p, _, t) in ant_rows}
    ant_rows = {r for r in ant_rows if (r[3], r[1], r[0]) in ant_set}

    infl_rows = set()
    for p, name in POS_FILES.items():
        with open(wn_dir / f"{name}.exc", encoding="latin-1") as fh:
            for line in fh:
                form, *lemmas = line.split()
                if WORD_RE.match(form) and lemmas and WORD_RE.match(lemmas[0]):
                    infl_rows.add((form, COARSE[p], lemmas[0]))

    def write(name, header, rows):
        with open(out_dir / name, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(header)
            for r in sorted(rows):
                fh.write("\t".join(map(str, r)) + "\n")

    src = "# generated by scripts/build_lexicon.py from WordNet 3.0; do not edit\n"
    write("synsets.tsv", src + "# word\tpos\trelation\ttarget\n", syn_rows)
    write("antonyms.tsv", src + "# word\tpos\trelation\ttarget\n", ant_rows)
    write("hypernyms.tsv", src + "# word\tpos\trelation\ttarget_synset\n", hyp_rows)
    write("lemmas.tsv", src + "# word\tpos\tsemcor_count\n", lemma_rows)
    write("inflections.tsv", src + "# form\tpos\tlemma\n", infl_rows)

    people = {}
    for fname, gender in (("dist.male.first", "M"), ("dist.female.first", "F")):
        with open(names_dir / fname) as fh:
            for rank, line in enumerate(fh):
                if rank >= N_FIRST_NAMES:
                    break
                name, freq = line.split()[0].title(), float(line.split()[1])
                if name not in people or people[name][1] < freq:
                    people[name] = (gender, freq)
    with open(names_dir / "dist.all.last") as fh:
        for rank, line in enumerate(fh):
            if rank >= N_SURNAMES:
                break
            name = line.split()[0].title()
            people.setdefault(name, ("U", 0.0))
    with open(out_dir / "gazetteer_person.txt", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# name\tgender (M/F/U); US census 1990 first names and surnames\n")
        for name in sorted(people):
            fh.write(f"{name}\t{people[name][0]}\n")

    places = set()
    countries = json.loads((geo_dir / "countries.json").read_text())
    places.update(c["name"] for c in countries.values())
    places.update(s["name"] for s in json.loads((geo_dir / "us_states.json").read_text()).values())
    cities = json.loads((geo_dir / "cities15000.json").read_text())
    places.update(c["name"] for c in cities.values() if c["population"] >= MIN_CITY_POPULATION)
    places = {p for p in places if re.match(r"^[A-Z][A-Za-z .'-]+$", p)}
    with open(out_dir / "gazetteer_place.txt", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# countries, US states, cities with population >= 1M (GeoNames, CC-BY 4.0)\n")
        for p in sorted(places):
            fh.write(p + "\n")

    print(f"lemmas={len(lemma_rows)} synonyms={len(syn_rows)} antonyms={len(ant_rows)} "
          f"hypernyms={len(hyp_rows)} inflections={len(infl_rows)} people={len(people)} places={len(places)}")


if __name__ == "__main__":
    main(*sys.argv[1:5])
