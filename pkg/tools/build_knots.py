"""Regenerate src/artifact/data/knots.json from the KnotInfo database.

Needs the optional ``database_knotinfo`` package. The output is ingestion
data only: the test suite checks every braid against the Seifert-matrix
oracle in :mod:`artifact.seifert`.
"""

import json
import re
from pathlib import Path

from database_knotinfo import link_list

PRIMES = ["3_1", "4_1", "5_1", "5_2", "6_1", "6_2", "6_3"]
PRIMES += [f"7_{i}" for i in range(1, 8)] + [f"8_{i}" for i in range(1, 22)]
ELEVEN = ["11n_34", "11n_42", "11n_45", "11n_67", "11n_73", "11n_97", "11n_152"]
# torus and twist families used for timing
EXTRA = ["9_1", "9_2", "10_1", "10_124"]


def coeffs(text: str) -> list[int]:
    """Integer coefficients of a KnotInfo polynomial in t, lowest degree first."""
    text = text.replace(" ", "").replace("*", "")
    out: dict[int, int] = {}
    for sign, c, var, e in re.findall(r"([+-]?)(\d*)(t?)(?:\^\(?(-?\d+)\)?)?", text):
        if not (c or var):
            continue
        n = int(c) if c else 1
        d = (int(e) if e else 1) if var else 0
        out[d] = out.get(d, 0) + (-n if sign == "-" else n)
    lo, hi = min(out), max(out)
    cs = [out.get(d, 0) for d in range(lo, hi + 1)]
    if sum(cs) < 0:
        cs = [-c for c in cs]
    return cs


def conway_z2(text: str) -> int:
    m = re.search(r"([+-]?\d*)\*?z\^2(?!\d)", text.replace(" ", ""))
    if not m:
        return 0
    s = m.group(1)
    return int(s + "1") if s in ("", "+", "-") else int(s)


def main():
    db = {r["name"]: r for r in link_list()}
    rows = [{"name": "0_1", "crossings": 0, "braid": [], "refs": {"alexander": [1], "genus": 0, "v2": 0}}]
    for name in PRIMES + ELEVEN + EXTRA:
        r = db[name]
        rows.append({
            "name": name.replace("_", "") if name.startswith("11") else name,
            "crossings": int(r["crossing_number"]),
            "braid": json.loads(r["braid_notation"]),
            "refs": {
                "alexander": coeffs(r["alexander_polynomial"]),
                "genus": int(r["three_genus"]),
                "v2": conway_z2(r["conway_polynomial"]),
            },
        })
    out = Path(__file__).resolve().parents[1] / "src" / "artifact" / "data" / "knots.json"
    out.write_text("[\n" + ",\n".join(" " + json.dumps(r) for r in rows) + "\n]\n")
    print(f"wrote {len(rows)} knots to {out}")


if __name__ == "__main__":
    main()
