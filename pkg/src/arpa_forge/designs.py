"""Explicit arrays, brute-force verification of ARPA/CPA conditions, and pi_q.

An array is stored as a canonical multiset (sorted word -> multiplicity), so
equality "up to the order of the rows" is plain equality of objects.  ARPA rows
are words over {0..q-1} indexed from 0; CPA rows are Boolean words.
"""

from __future__ import annotations

import itertools
import json
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .exactmath import binom

Word = tuple[int, ...]

__all__ = [
    "DesignArray",
    "DesignPair",
    "Verdict",
    "weight",
    "identity_word",
    "all_ones",
    "check_k_equal",
    "k_equal_witness",
    "check_cpa",
    "check_arpa",
    "ratio",
    "pi_q",
    "pi_array",
    "pi_pair",
    "interprets_as",
    "theorem3_bound",
    "weight_profile",
    "weight_equalities",
    "weight_residuals",
    "extend_arpa",
    "pair_to_json",
    "pair_from_json",
    "load_pair",
    "dump_pair",
    "pair_to_text",
    "pair_from_text",
]


def weight(word: Iterable[int]) -> int:
    """Number of non-zero coordinates."""
    return sum(1 for c in word if c)


def identity_word(q: int) -> Word:
    return tuple(range(q))


def all_ones(nu: int) -> Word:
    return (1,) * nu


@dataclass(frozen=True)
class DesignArray:
    """A multiset of fixed-length rows over {0..alphabet-1}."""

    columns: int
    alphabet: int
    rows: tuple[tuple[Word, int], ...]

    def __post_init__(self):
        if self.columns < 1 or self.alphabet < 1:
            raise ValueError("columns and alphabet must be positive")
        merged: Counter = Counter()
        for word, mult in self.rows:
            word = tuple(int(c) for c in word)
            if len(word) != self.columns:
                raise ValueError(f"row {word} has {len(word)} coordinates, expected {self.columns}")
            if any(c < 0 or c >= self.alphabet for c in word):
                raise ValueError(f"row {word} leaves the alphabet {{0..{self.alphabet - 1}}}")
            if mult < 0:
                raise ValueError(f"negative multiplicity for row {word}")
            merged[word] += int(mult)
        canon = tuple(sorted((w, m) for w, m in merged.items() if m > 0))
        if not canon:
            raise ValueError("an array needs at least one row")
        object.__setattr__(self, "rows", canon)

    @classmethod
    def from_counts(cls, counts: Mapping[Word, int], columns=None, alphabet=2) -> "DesignArray":
        items = list(counts.items())
        if columns is None:
            columns = len(items[0][0])
        return cls(columns, alphabet, tuple(items))

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], alphabet=None) -> "DesignArray":
        counts = Counter(tuple(r) for r in rows)
        if not counts:
            raise ValueError("an array needs at least one row")
        columns = len(next(iter(counts)))
        if alphabet is None:
            alphabet = columns
        return cls(columns, alphabet, tuple(counts.items()))

    @property
    def R(self) -> int:
        return sum(m for _, m in self.rows)

    @property
    def counts(self) -> dict[Word, int]:
        return dict(self.rows)

    def multiplicity(self, word: Iterable[int]) -> int:
        return self.counts.get(tuple(word), 0)

    def __iter__(self) -> Iterator[Word]:
        for word, mult in self.rows:
            for _ in range(mult):
                yield word

    def project(self, cols: tuple[int, ...]) -> Counter:
        out: Counter = Counter()
        for word, mult in self.rows:
            out[tuple(word[j] for j in cols)] += mult
        return out

    def scaled(self, factor: int) -> "DesignArray":
        return DesignArray(self.columns, self.alphabet, tuple((w, m * factor) for w, m in self.rows))


@dataclass(frozen=True)
class DesignPair:
    """(Q, P) for kind 'arpa' or (N, D) for kind 'cpa'; params = (q|nu, p|d, k)."""

    kind: str
    first: DesignArray
    second: DesignArray
    params: tuple[int, int, int]

    def __post_init__(self):
        if self.kind not in ("arpa", "cpa"):
            raise ValueError(f"unknown pair kind {self.kind!r}")
        if self.first.columns != self.second.columns:
            raise ValueError("both arrays must have the same number of columns")
        if self.first.alphabet != self.second.alphabet:
            raise ValueError("both arrays must share the alphabet")
        object.__setattr__(self, "params", tuple(int(p) for p in self.params))

    @property
    def columns(self) -> int:
        return self.first.columns

    @property
    def target(self) -> Word:
        if self.kind == "arpa":
            return identity_word(self.columns)
        return all_ones(self.columns)

    @property
    def r_star(self) -> int:
        return self.first.multiplicity(self.target)

    @property
    def R(self) -> int:
        return self.second.R

    def scaled(self, factor: int) -> "DesignPair":
        return DesignPair(self.kind, self.first.scaled(factor), self.second.scaled(factor), self.params)


@dataclass
class Verdict:
    """Outcome of a membership check: one boolean per condition, plus the first witness of failure."""

    kind: str
    params: tuple[int, int, int]
    checks: dict[str, bool] = field(default_factory=dict)
    witnesses: dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def failed(self) -> list[str]:
        return [name for name, ok in self.checks.items() if not ok]

    def __bool__(self) -> bool:
        return self.passed

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": list(self.params),
            "passed": self.passed,
            "checks": dict(self.checks),
            "witnesses": {k: _jsonable(v) for k, v in self.witnesses.items()},
        }


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (tuple, list)):
        return [_jsonable(x) for x in v]
    return v


def _thread_count() -> int:
    raw = os.environ.get("ARPA_FORGE_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def _subset_mismatch(a: DesignArray, b: DesignArray, cols: tuple[int, ...]):
    pa, pb = a.project(cols), b.project(cols)
    if pa == pb:
        return None
    for key in sorted(set(pa) | set(pb)):
        if pa[key] != pb[key]:
            return {"columns": cols, "projection": key, "first": pa[key], "second": pb[key]}
    return None  # pragma: no cover


def _check_shapes(a: DesignArray, b: DesignArray, k: int):
    if a.columns != b.columns or a.alphabet != b.alphabet:
        raise ValueError("arrays differ in column count or alphabet")
    if k < 1:
        raise ValueError("strength k must be at least 1")
    if k > a.columns:
        raise ValueError(f"strength k={k} exceeds the {a.columns} columns")


def k_equal_witness(a: DesignArray, b: DesignArray, k: int):
    """First column subset on which the k-projections differ, or None."""
    _check_shapes(a, b, k)
    subsets = list(itertools.combinations(range(a.columns), k))
    threads = _thread_count()
    if threads > 1 and len(subsets) >= 256:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for hit in pool.map(lambda cols: _subset_mismatch(a, b, cols), subsets):
                if hit is not None:
                    return hit
        return None
    for cols in subsets:
        hit = _subset_mismatch(a, b, cols)
        if hit is not None:
            return hit
    return None


def check_k_equal(a: DesignArray, b: DesignArray, k: int) -> bool:
    """True iff every k-column projection of a and b agrees as a multiset."""
    return k_equal_witness(a, b, k) is None


def check_cpa(pair: DesignPair, nu: int, d: int, k: int) -> Verdict:
    if pair.kind != "cpa":
        raise ValueError("check_cpa needs a pair of kind 'cpa'")
    if pair.columns != nu or pair.first.alphabet != 2:
        raise ValueError(f"expected Boolean arrays with {nu} columns")
    verdict = Verdict("cpa", (nu, d, k))
    ones = all_ones(nu)
    verdict.checks["Delta_N"] = pair.first.multiplicity(ones) > 0
    if not verdict.checks["Delta_N"]:
        verdict.witnesses["Delta_N"] = {"missing_row": ones}
    heavy = [w for w, _ in pair.second.rows if weight(w) > d]
    verdict.checks["Delta_D"] = not heavy
    if heavy:
        verdict.witnesses["Delta_D"] = {"row": heavy[0], "weight": weight(heavy[0])}
    hit = k_equal_witness(pair.first, pair.second, k)
    verdict.checks["k_equal"] = hit is None
    if hit is not None:
        verdict.witnesses["k_equal"] = hit
    return verdict


def check_arpa(pair: DesignPair, q: int, p: int, k: int) -> Verdict:
    if pair.kind != "arpa":
        raise ValueError("check_arpa needs a pair of kind 'arpa'")
    if pair.columns != q or pair.first.alphabet != q:
        raise ValueError(f"expected arrays with {q} columns over {q} symbols")
    verdict = Verdict("arpa", (q, p, k))
    ident = identity_word(q)
    verdict.checks["Gamma_Q"] = pair.first.multiplicity(ident) > 0
    if not verdict.checks["Gamma_Q"]:
        verdict.witnesses["Gamma_Q"] = {"missing_row": ident}
    wide = [w for w, _ in pair.second.rows if len(set(w)) > p]
    verdict.checks["Gamma_P"] = not wide
    if wide:
        verdict.witnesses["Gamma_P"] = {"row": wide[0], "symbols": len(set(wide[0]))}
    hit = k_equal_witness(pair.first, pair.second, k)
    verdict.checks["k_equal"] = hit is None
    if hit is not None:
        verdict.witnesses["k_equal"] = hit
    return verdict


def ratio(pair: DesignPair) -> Fraction:
    """R*/R: multiplicity of the target row in the first array over the row count."""
    return Fraction(pair.r_star, pair.R)


def pi_q(word: Iterable[int]) -> Word:
    """Boolean word marking the positions j with word[j] == j."""
    return tuple(1 if c == j else 0 for j, c in enumerate(word))


def pi_array(a: DesignArray) -> DesignArray:
    counts: Counter = Counter()
    for word, mult in a.rows:
        counts[pi_q(word)] += mult
    return DesignArray(a.columns, 2, tuple(counts.items()))


def pi_pair(pair: DesignPair) -> DesignPair:
    if pair.kind != "arpa":
        raise ValueError("pi_pair maps ARPAs to CPAs")
    return DesignPair("cpa", pi_array(pair.first), pi_array(pair.second), pair.params)


def interprets_as(arpa: DesignPair, cpa: DesignPair) -> bool:
    """True iff pi maps Q onto N and P onto D as multisets."""
    if arpa.kind != "arpa" or cpa.kind != "cpa":
        raise ValueError("interprets_as takes an ARPA and a CPA")
    if arpa.columns != cpa.columns:
        return False
    if arpa.first.R != cpa.first.R or arpa.second.R != cpa.second.R:
        return False
    return pi_array(arpa.first) == cpa.first and pi_array(arpa.second) == cpa.second


def theorem3_bound(nu: int, k: int) -> Fraction:
    """Upper bound 2 / (sum_h C(nu,h) C(nu-1-h,k-h) + 1) on R*/R over CPAs with d = k."""
    if not (nu > k >= 1):
        raise ValueError(f"need nu > k >= 1, got nu={nu}, k={k}")
    s = sum(binom(nu, h) * binom(nu - 1 - h, k - h) for h in range(k + 1))
    return Fraction(2, s + 1)


def weight_profile(a: DesignArray) -> list[int]:
    """Row counts per weight, indexed 0..columns."""
    prof = [0] * (a.columns + 1)
    for word, mult in a.rows:
        prof[weight(word)] += mult
    return prof


def _cpa_d_equals_k(pair: DesignPair, nu: int, k: int):
    if pair.kind != "cpa":
        raise ValueError("weight equalities apply to CPAs")
    if pair.params[1] != k:
        raise ValueError(f"weight equalities need d = k, got d={pair.params[1]}, k={k}")
    if pair.columns != nu:
        raise ValueError(f"expected {nu} columns")


def weight_equalities(pair: DesignPair, nu: int, k: int) -> bool:
    """Aggregated (k_=) equalities between the weight profiles of N and D, for every h."""
    _cpa_d_equals_k(pair, nu, k)
    b = weight_profile(pair.first)
    a = weight_profile(pair.second)
    if any(a[i] for i in range(k + 1, nu + 1)):
        return False
    for h in range(k + 1):
        lhs = sum(binom(i, h) * binom(nu - i, k - h) * b[i] for i in range(h, nu - k + h + 1))
        rhs = sum(binom(i, h) * binom(nu - i, k - h) * a[i] for i in range(h, k + 1))
        if lhs != rhs:
            return False
    return True


def weight_residuals(pair: DesignPair, nu: int, k: int) -> list[int]:
    """a_h - b_h - (-1)^(k-h) sum_{i>k} C(i,h) C(i-1-h,k-h) b_i for h = 0..k; all zero on valid pairs."""
    _cpa_d_equals_k(pair, nu, k)
    b = weight_profile(pair.first)
    a = weight_profile(pair.second)
    out = []
    for h in range(k + 1):
        tail = sum(binom(i, h) * binom(i - 1 - h, k - h) * b[i] for i in range(k + 1, nu + 1))
        out.append(a[h] - b[h] - (-1) ** (k - h) * tail)
    return out


def extend_arpa(pair: DesignPair, q: int, p: int, k: int) -> DesignPair:
    """Append the suffix (q-p+k, ..., q-1) to every row of a (q-p+k, k)-ARPA of strength k."""
    if not (q >= p >= k >= 1):
        raise ValueError(f"need q >= p >= k >= 1, got {(q, p, k)}")
    base = q - p + k
    verdict = check_arpa(pair, base, k, k)
    if not verdict.passed:
        raise ValueError(f"input is not in Gamma({base}, {k}, {k}): failed {verdict.failed}")
    suffix = tuple(range(base, q))

    def grow(a: DesignArray) -> DesignArray:
        return DesignArray(q, q, tuple((w + suffix, m) for w, m in a.rows))

    return DesignPair("arpa", grow(pair.first), grow(pair.second), (q, p, k))


# -- file formats ------------------------------------------------------------

_PARAM_KEYS = {"arpa": ("q", "p", "k"), "cpa": ("nu", "d", "k")}


def pair_to_json(pair: DesignPair) -> dict:
    keys = _PARAM_KEYS[pair.kind]
    return {
        "kind": pair.kind,
        "params": dict(zip(keys, pair.params)),
        "first": [{"row": list(w), "mult": m} for w, m in pair.first.rows],
        "second": [{"row": list(w), "mult": m} for w, m in pair.second.rows],
    }


def pair_from_json(obj: Mapping) -> DesignPair:
    kind = obj["kind"]
    if kind not in _PARAM_KEYS:
        raise ValueError(f"unknown pair kind {kind!r}")
    params = tuple(int(obj["params"][key]) for key in _PARAM_KEYS[kind])
    columns = params[0]
    alphabet = columns if kind == "arpa" else 2

    def side(entries) -> DesignArray:
        return DesignArray(
            columns, alphabet, tuple((tuple(e["row"]), int(e.get("mult", 1))) for e in entries)
        )

    return DesignPair(kind, side(obj["first"]), side(obj["second"]), params)


def load_pair(path: str) -> DesignPair:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return pair_from_json(json.loads(text))
    return pair_from_text(text)


def dump_pair(pair: DesignPair, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if path.endswith(".json"):
            json.dump(pair_to_json(pair), fh, indent=1)
            fh.write("\n")
        else:
            fh.write(pair_to_text(pair))


def _text_order(word: Word):
    return (weight(pi_q(word)), word)


def pair_to_text(pair: DesignPair) -> str:
    """Plain grid: a header line, then one row per line with an optional ``x<m>`` suffix."""
    keys = _PARAM_KEYS[pair.kind]
    head = " ".join(f"{k}={v}" for k, v in zip(keys, pair.params))
    lines = [f"# kind={pair.kind} {head}"]
    order = _text_order if pair.kind == "arpa" else (lambda w: (weight(w), w))
    for name, arr in (("first", pair.first), ("second", pair.second)):
        lines.append(f"[{name}]")
        for word, mult in sorted(arr.rows, key=lambda wm: order(wm[0])):
            row = " ".join(str(c) for c in word)
            lines.append(row if mult == 1 else f"{row} x{mult}")
    return "\n".join(lines) + "\n"


def pair_from_text(text: str) -> DesignPair:
    kind = None
    params: dict[str, int] = {}
    sides: dict[str, list] = {"first": [], "second": []}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                if "=" in tok:
                    key, val = tok.split("=", 1)
                    if key == "kind":
                        kind = val
                    else:
                        params[key] = int(val)
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            if current not in sides:
                raise ValueError(f"unknown section {line}")
            continue
        if current is None:
            raise ValueError("row found before a [first]/[second] section")
        toks = line.split()
        mult = 1
        if toks[-1].startswith("x"):
            mult = int(toks.pop()[1:])
        sides[current].append({"row": [int(t) for t in toks], "mult": mult})
    if kind is None:
        raise ValueError("missing '# kind=...' header")
    return pair_from_json({"kind": kind, "params": params, **sides})
