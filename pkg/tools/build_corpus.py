"""Regenerate src/cubeflow/data/knots.json from a KnotInfo CSV export.

Usage: python tools/build_corpus.py path/to/knotinfo_data_complete.csv

The CSV ships inside the ``database_knotinfo`` wheel. Only PD codes and a few
reference columns are kept; the reference columns are used by tests as an
external cross-check and never by the library itself.
"""

import csv
import json
import re
import sys
from pathlib import Path

TERM = re.compile(r"^(?:(\d+)\*?)?(?:t(?:\^\((-?\d+)\))?)?\*?(?:q(?:\^\((-?\d+)\))?)?$")


def parse_poly(text):
    ranks = {}
    if not text.strip():
        return []
    for raw in text.replace(" ", "").split("+"):
        m = TERM.match(raw)
        if not m or not raw:
            raise ValueError(f"cannot parse term {raw!r}")
        coef = int(m.group(1)) if m.group(1) else 1
        has_t = "t" in raw
        has_q = "q" in raw
        t = int(m.group(2)) if m.group(2) else (1 if has_t else 0)
        q = int(m.group(3)) if m.group(3) else (1 if has_q else 0)
        ranks[(t, q)] = ranks.get((t, q), 0) + coef
    return [{"t": t, "q": q, "rank": r} for (t, q), r in sorted(ranks.items())]


def main(path):
    csv.field_size_limit(10**9)
    with open(path) as fh:
        rows = list(csv.reader(fh, delimiter="|"))
    head = rows[0]
    idx = {k: i for i, k in enumerate(head)}
    knots = []
    for row in rows[2:]:
        n = int(row[idx["crossing_number"]])
        name = row[idx["name"]]
        if not (3 <= n <= 9) and name != "10_124":
            continue
        knots.append({
            "name": name,
            "crossings": n,
            "pd": json.loads(row[idx["pd_notation"]]),
            "alternating": row[idx["alternating"]] == "Y",
            "reference": {
                "determinant": int(row[idx["determinant"]]),
                "signature": int(row[idx["signature"]]),
                "kh_reduced_mod2": parse_poly(row[idx["khovanov_reduced_mod2_polynomial"]]),
            },
        })
    out = Path(__file__).resolve().parents[1] / "src" / "cubeflow" / "data" / "knots.json"
    doc = {
        "source": "KnotInfo (database_knotinfo), PD read counterclockwise from the incoming under-strand",
        "reference_note": "reference.signature uses the opposite sign convention (right-handed trefoil = -2)",
        "knots": knots,
    }
    lines = ",\n  ".join(json.dumps(k, separators=(",", ":")) for k in knots)
    body = json.dumps({k: v for k, v in doc.items() if k != "knots"}, indent=1)[:-2]
    out.write_text(body + ',\n "knots": [\n  ' + lines + "\n ]\n}\n")
    print(f"wrote {len(knots)} knots to {out}")


if __name__ == "__main__":
    main(sys.argv[1])
