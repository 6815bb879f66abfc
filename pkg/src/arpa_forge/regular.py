"""Regular CPAs: symmetrization, representative vectors and z-encodings."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce
from typing import Mapping, Sequence

from .designs import DesignArray, DesignPair, check_k_equal, weight, weight_profile
from .exactmath import binom

__all__ = [
    "RepVec",
    "ZEnc",
    "words_of_weight",
    "is_regular",
    "symmetrize",
    "rep_vector",
    "materialize",
    "check_eq4",
    "strip_common",
    "to_z",
    "from_z",
    "verify_materialized",
]


def words_of_weight(nu: int, i: int):
    for ones in itertools.combinations(range(nu), i):
        word = [0] * nu
        for j in ones:
            word[j] = 1
        yield tuple(word)


@dataclass(frozen=True)
class RepVec:
    """Per-weight multiplicities (y for N, x for D) of a regular (nu, d)-CPA."""

    nu: int
    d: int
    y: tuple[int, ...]
    x: tuple[int, ...]
    k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "y", tuple(int(v) for v in self.y))
        object.__setattr__(self, "x", tuple(int(v) for v in self.x))
        if not (1 <= self.d <= self.nu):
            raise ValueError(f"need 1 <= d <= nu, got d={self.d}, nu={self.nu}")
        if len(self.y) != self.nu + 1 or len(self.x) != self.d + 1:
            raise ValueError("y needs nu+1 entries and x needs d+1 entries")
        if any(v < 0 for v in self.y + self.x):
            raise ValueError("multiplicities must be non-negative")

    @property
    def r_star(self) -> int:
        return self.y[self.nu]

    @property
    def R(self) -> int:
        return sum(binom(self.nu, i) * v for i, v in enumerate(self.y))

    @property
    def R_from_x(self) -> int:
        return sum(binom(self.nu, i) * v for i, v in enumerate(self.x))

    def as_dict(self) -> dict:
        return {"nu": self.nu, "d": self.d, "k": self.k, "y": list(self.y), "x": list(self.x)}

    @classmethod
    def from_dict(cls, obj: Mapping) -> "RepVec":
        return cls(int(obj["nu"]), int(obj["d"]), tuple(obj["y"]), tuple(obj["x"]), obj.get("k"))


@dataclass(frozen=True)
class ZEnc:
    """Signed single-family encoding: z_i < 0 puts weight i in N, z_i > 0 in D."""

    nu: int
    d: int
    k: int
    z: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "z", tuple(int(v) for v in self.z))
        if len(self.z) != self.nu + 1:
            raise ValueError("z needs nu+1 entries")
        if self.z[self.nu] >= 0:
            raise ValueError("z_nu must be negative (the all-ones rows live in N)")
        if any(self.z[i] > 0 for i in range(self.d + 1, self.nu + 1)):
            raise ValueError("weights above d cannot appear in D")

    def satisfies_eq6(self) -> bool:
        nu, k = self.nu, self.k
        return all(
            sum(binom(nu - k, i - h) * self.z[i] for i in range(h, nu - k + h + 1)) == 0
            for h in range(k + 1)
        )

    def as_dict(self) -> dict:
        return {"nu": self.nu, "d": self.d, "k": self.k, "z": list(self.z)}

    @classmethod
    def from_dict(cls, obj: Mapping) -> "ZEnc":
        return cls(int(obj["nu"]), int(obj["d"]), int(obj["k"]), tuple(obj["z"]))


def _require_boolean(a: DesignArray):
    if a.alphabet != 2:
        raise ValueError("regularity is defined for Boolean arrays")


def _regular_classes(a: DesignArray):
    """Per-weight common multiplicity, or None if some weight class is not uniform."""
    nu = a.columns
    seen: dict[int, set] = {}
    for word, mult in a.rows:
        seen.setdefault(weight(word), set()).add(mult)
    out = [0] * (nu + 1)
    sizes = [0] * (nu + 1)
    for word, _ in a.rows:
        sizes[weight(word)] += 1
    for i, mults in seen.items():
        if len(mults) != 1 or sizes[i] != binom(nu, i):
            return None
        out[i] = mults.pop()
    return out


def is_regular(a: DesignArray) -> bool:
    """Every weight class occurs with a single multiplicity (possibly zero)."""
    _require_boolean(a)
    return _regular_classes(a) is not None


def _array_from_classes(nu: int, mults: Sequence[int]) -> DesignArray:
    rows = []
    for i, m in enumerate(mults):
        if m:
            rows.extend((w, m) for w in words_of_weight(nu, i))
    return DesignArray(nu, 2, tuple(rows))


def symmetrize(pair: DesignPair, reduce_gcd: bool = False) -> DesignPair:
    """Union of all nu! column permutations of each side.

    A weight-i word ends up with i! (nu-i)! times the number of weight-i rows of the
    source array; the permutations are never enumerated.
    """
    if pair.kind != "cpa":
        raise ValueError("symmetrize takes a CPA")
    nu = pair.columns
    side_mults = []
    for arr in (pair.first, pair.second):
        _require_boolean(arr)
        prof = weight_profile(arr)
        side_mults.append(
            [math.factorial(i) * math.factorial(nu - i) * prof[i] for i in range(nu + 1)]
        )
    if reduce_gcd:
        g = reduce(math.gcd, side_mults[0] + side_mults[1])
        side_mults = [[m // g for m in ms] for ms in side_mults]
    return DesignPair(
        "cpa",
        _array_from_classes(nu, side_mults[0]),
        _array_from_classes(nu, side_mults[1]),
        pair.params,
    )


def rep_vector(pair: DesignPair) -> RepVec:
    if pair.kind != "cpa":
        raise ValueError("rep_vector takes a CPA")
    nu, d, k = pair.params
    y = _regular_classes(pair.first)
    x = _regular_classes(pair.second)
    if y is None or x is None:
        raise ValueError("pair is not regular")
    if any(x[i] for i in range(d + 1, nu + 1)):
        raise ValueError(f"D has rows of weight above d={d}")
    return RepVec(nu, d, tuple(y), tuple(x[: d + 1]), k)


def check_eq4(v: RepVec, k: int) -> bool:
    """Balance equations between y and x for h = 0..k."""
    nu, d = v.nu, v.d
    if not 1 <= k <= d:
        raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
    for h in range(k + 1):
        lhs = sum(binom(nu - k, i - h) * v.y[i] for i in range(h, nu - k + h + 1))
        rhs = sum(binom(nu - k, i - h) * v.x[i] for i in range(h, d + 1))
        if lhs != rhs:
            return False
    return True


def materialize(v: RepVec, k: int | None = None) -> DesignPair:
    """Explicit regular CPA with each weight-i word repeated y_i (resp. x_i) times."""
    k = v.k if k is None else k
    if k is None:
        raise ValueError("a strength k is required")
    if v.r_star <= 0:
        raise ValueError("y_nu must be positive: N needs the all-ones row")
    if not check_eq4(v, k):
        raise ValueError(f"representative vector violates the strength-{k} balance equations")
    x = list(v.x) + [0] * (v.nu - v.d)
    return DesignPair(
        "cpa",
        _array_from_classes(v.nu, v.y),
        _array_from_classes(v.nu, x),
        (v.nu, v.d, k),
    )


def strip_common(v: RepVec) -> RepVec:
    """Remove equal multiplicities of shared weight classes from both sides."""
    y = list(v.y)
    x = list(v.x)
    for i in range(v.d + 1):
        m = min(y[i], x[i])
        y[i] -= m
        x[i] -= m
    return RepVec(v.nu, v.d, tuple(y), tuple(x), v.k)


def to_z(v: RepVec, k: int | None = None) -> ZEnc:
    k = v.k if k is None else k
    if k is None:
        raise ValueError("a strength k is required")
    shared = [i for i in range(v.d + 1) if v.y[i] and v.x[i]]
    if shared:
        raise ValueError(f"N and D share weight classes {shared}; call strip_common first")
    z = [v.x[i] - v.y[i] if i <= v.d else -v.y[i] for i in range(v.nu + 1)]
    return ZEnc(v.nu, v.d, k, tuple(z))


def from_z(z: ZEnc) -> RepVec:
    y = tuple(max(-c, 0) for c in z.z)
    x = tuple(max(c, 0) for c in z.z[: z.d + 1])
    return RepVec(z.nu, z.d, y, x, z.k)


def verify_materialized(v: RepVec, k: int) -> bool:
    """Brute-force (k_=) on the explicit pair, independent of the balance equations."""
    x = list(v.x) + [0] * (v.nu - v.d)
    if v.r_star <= 0:
        return False
    n = _array_from_classes(v.nu, v.y)
    if not any(x):
        return False
    dd = _array_from_classes(v.nu, x)
    return check_k_equal(n, dd, k)
