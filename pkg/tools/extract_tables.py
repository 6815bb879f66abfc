"""Extract the worked array tables from a markdown source into JSON fixtures.

Run once from the repository root:

    python tools/extract_tables.py SOURCE.md src/arpa_forge/data/tables.json
"""

import json
import re
import sys
from collections import Counter


def strip_comments(text):
    out = []
    i = 0
    while True:
        j = text.find("\\comment{", i)
        if j < 0:
            out.append(text[i:])
            break
        out.append(text[i:j])
        depth = 0
        k = j + len("\\comment")
        while True:
            ch = text[k]
            if ch == "{":
                depth += 1
            elif ch == "}":
                depth -= 1
                if depth == 0:
                    break
            k += 1
        i = k + 1
    return "".join(out)


HEADER = re.compile(r"^\s*([QPND])\^[0-9]")
PARAMS = re.compile(r"\\(Gamma|Delta|gamma)\((\d+), (\d+), (\d+)\)")
CELL = re.compile(r"(\d+)")


def parse_table(block):
    lines = block.splitlines()
    arrays = []
    params = []
    i = 0
    while i < len(lines):
        line = lines[i]
        m = PARAMS.search(line)
        if m and ("\\in" in line or "=" in line):
            params.append((m.group(1), tuple(int(g) for g in m.group(2, 3, 4))))
        h = HEADER.match(line)
        if h:
            side = h.group(1)
            rows = []
            i += 1
            while "\\end{array}" not in lines[i]:
                row = lines[i].strip()
                if row and row not in ("\\hline",):
                    row = row.replace("\\hline", "").rstrip("\\").strip()
                    if row:
                        cells = [CELL.search(c).group(1) for c in row.split("&")]
                        rows.append([int(c) for c in cells])
                i += 1
            arrays.append((side, rows))
        i += 1
    return params, arrays


def to_rows(rows):
    counts = Counter(tuple(r) for r in rows)
    return [{"row": list(r), "mult": m} for r, m in sorted(counts.items())]


def main(src, dst):
    text = strip_comments(open(src, encoding="utf-8").read())
    labels = {
        "1": "tab-Gamma-ex",
        "2": "tab-Delta-ex",
        "3": "tab-gamma-reg",
        "5": "tab-gamma_q_k_k",
        "6": "tab-gamma_q_p_1",
        "7": "tab-gamma_q_p_2",
    }
    out = {}
    for key, label in labels.items():
        start = text.index("\\label{%s}" % label)
        end = text.index("\\end{table}", start)
        params, arrays = parse_table(text[start:end])
        pairs = []
        for n, (kind_sym, (a, b, c)) in enumerate(params):
            first, second = arrays[2 * n], arrays[2 * n + 1]
            kind = "cpa" if first[0] == "N" else "arpa"
            pkeys = ("nu", "d", "k") if kind == "cpa" else ("q", "p", "k")
            pairs.append(
                {
                    "kind": kind,
                    "params": dict(zip(pkeys, (a, b, c))),
                    "first": to_rows(first[1]),
                    "second": to_rows(second[1]),
                }
            )
        out[key] = pairs
    with open(dst, "w", encoding="utf-8") as fh:
        json.dump(out, fh, indent=1)
        fh.write("\n")


if __name__ == "__main__":
    main(*sys.argv[1:3])
