#!/usr/bin/env python3
"""Regenerate the bundled theory fixtures from stdlib_defs.

Run from the repository root:  python tools/gen_stdlib.py
Rewrites src/pvk/stdlib_data (axiom .pvx files, conjecture data, index.json
with pinned digests).
"""

import hashlib
import json
import os
import shutil
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from pvk.stdlib_defs import root2_conjectures, standard_axioms
from pvk.theory import STDLIB_DIR


def main():
    if os.path.exists(STDLIB_DIR):
        shutil.rmtree(STDLIB_DIR)
    index = {"packages": {}}
    for path, items in standard_axioms().items():
        gdir = os.path.join(STDLIB_DIR, "theories", path, "axioms")
        os.makedirs(gdir)
        entry = {"axioms": {}}
        for name, stmt in items:
            data = stmt.sexpr() + "\n"
            with open(os.path.join(gdir, name + ".pvx"), "w",
                      encoding="utf-8") as f:
                f.write(data)
            digest = hashlib.sha256(data.encode("utf-8")).hexdigest()
            entry["axioms"][name] = {"digest": digest}
        index["packages"][path] = entry
    with open(os.path.join(STDLIB_DIR, "index.json"), "w",
              encoding="utf-8") as f:
        json.dump(index, f, indent=1, sort_keys=True, ensure_ascii=False)

    cdir = os.path.join(STDLIB_DIR, "conjecture_data")
    os.makedirs(cdir)
    cindex = {}
    for pos, stmt in enumerate(root2_conjectures(), 1):
        name = f"root2_conjecture{pos:02d}"
        data = stmt.sexpr() + "\n"
        with open(os.path.join(cdir, name + ".pvx"), "w",
                  encoding="utf-8") as f:
            f.write(data)
        cindex[name] = hashlib.sha256(data.encode("utf-8")).hexdigest()
    with open(os.path.join(cdir, "index.json"), "w", encoding="utf-8") as f:
        json.dump(cindex, f, indent=1, sort_keys=True, ensure_ascii=False)
    print(f"wrote {STDLIB_DIR}")


if __name__ == "__main__":
    main()
