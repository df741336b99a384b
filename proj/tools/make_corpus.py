#!/usr/bin/env python3
# Copyright 2026 The curaug Authors.
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
"""Regenerates data/corpus.jsonl from the King James Version (1769 text).

The verse file ships in the public-domain npm package kjv@1.0.0:

    npm pack kjv@1.0.0 && tar xzf kjv-1.0.0.tgz
    python3 tools/make_corpus.py package/json/verses-1769.json

Verses are taken in canonical order from Genesis on. Paragraph marks and the
italic brackets are removed; verses longer than --max-words are skipped.
"""

import argparse
import json
import re


def clean(verse):
    verse = verse.replace("#", " ").replace("[", "").replace("]", "")
    return re.sub(r"\s+", " ", verse).strip()


def main():
    ap = argparse.ArgumentParser(description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("verses", help="path to verses-1769.json")
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--max-words", type=int, default=30)
    ap.add_argument("--out", default="data/corpus.jsonl")
    args = ap.parse_args()
    with open(args.verses, encoding="utf-8") as fh:
        verses = json.load(fh)
    rows = []
    for ref, text in verses.items():
        text = clean(text)
        if not text or len(text.split()) > args.max_words:
            continue
        book, chapter_verse = ref.rsplit(" ", 1)
        chapter, verse = chapter_verse.split(":")
        rows.append({"id": f"{book.lower().replace(' ', '')}-{int(chapter):03d}-{int(verse):03d}",
                     "text": text})
        if len(rows) == args.count:
            break
    with open(args.out, "w", encoding="utf-8") as fh:
        for r in rows:
            fh.write(json.dumps(r) + "\n")


if __name__ == "__main__":
    main()
