"""Lifting a regular CPA (given by its z-encoding) to an ARPA over nu symbols.

Every Boolean class u(J) of the CPA is spread over the q-ary words g(J) and
g^c(J), all of which map back to u(J) under pi.  Entries are accumulated as exact
fractions and scaled once by the lcm of their denominators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .designs import (
    DesignArray,
    DesignPair,
    Verdict,
    Word,
    check_arpa,
    identity_word,
    interprets_as,
    k_equal_witness,
    pi_q,
)
from .exactmath import binom, lcm_of_denominators
from .regular import ZEnc

__all__ = [
    "ZTilde",
    "LiftReport",
    "c_star",
    "g_word",
    "g_c_word",
    "top_weight",
    "d_prime",
    "lift",
    "materialize_lift",
    "f_z_eval",
    "r_hlv",
    "table4_case",
    "table4_expression",
    "verify_lift",
    "ztilde_to_json",
    "ztilde_from_json",
    "ztilde_to_text",
]


def _b(n: int, r: int) -> int:
    return 0 if n < 0 else binom(n, r)


def _indicator(J: Iterable[int], nu: int) -> Word:
    J = set(J)
    return tuple(1 if j in J else 0 for j in range(nu))


def c_star(J: Iterable[int], nu: int, r: int) -> int:
    """min(J together with nu - r)."""
    return min(set(J) | {nu - r})


def g_word(J: Iterable[int], nu: int, r: int) -> Word:
    J = set(J)
    c = c_star(J, nu, r)
    return tuple(j if j in J else c for j in range(nu))


def g_c_word(J: Iterable[int], c: int, nu: int, r: int | None = None) -> Word:
    J = set(J)
    if c < 0:
        raise ValueError("c must be non-negative")
    if r is not None and c >= c_star(J, nu, r):
        raise ValueError(f"c={c} must be below c*(J)={c_star(J, nu, r)}")
    if J and c >= min(J):
        raise ValueError(f"c={c} must be below min(J)={min(J)}")
    return tuple(j if j in J else (c + 1 if j <= c else c) for j in range(nu))


def top_weight(z: ZEnc) -> int:
    """r: the largest weight in {d..nu-1} carrying a non-zero entry of z."""
    hits = [i for i in range(z.d, z.nu) if z.z[i] != 0]
    if not hits:
        raise ValueError("z vanishes on every weight in {d..nu-1}")
    return max(hits)


def d_prime(z: ZEnc) -> int:
    """Symbol budget of the lifted ARPA."""
    if z.z[z.d] <= 0:
        raise ValueError(f"z_d must be positive (the source must use weight d={z.d} in D)")
    r = top_weight(z)
    if r > z.d:
        return z.d + 2
    if z.d >= 1 and z.z[z.d - 1] > 0:
        return z.d + 1
    return z.d


@dataclass(frozen=True)
class ZTilde:
    """Integral signed encoding of an ARPA: negative values form Q, positive ones P."""

    nu: int
    k: int
    d_prime: int
    entries: tuple[tuple[Word, int], ...]
    scale: int

    @classmethod
    def from_items(cls, nu, k, d_prime, items: Iterable[tuple[Iterable[int], int]], scale=1) -> "ZTilde":
        seen: dict[Word, int] = {}
        for word, value in items:
            word = tuple(int(c) for c in word)
            if word in seen:
                raise ValueError(f"word {word} appears twice")
            if len(word) != nu or any(not 0 <= c < nu for c in word):
                raise ValueError(f"word {word} is not in Sigma_{nu}^{nu}")
            if int(value) != value or value == 0:
                raise ValueError(f"entry for {word} must be a non-zero integer, got {value}")
            seen[word] = int(value)
        return cls(nu, k, d_prime, tuple(sorted(seen.items())), int(scale))

    def as_dict(self) -> dict[Word, int]:
        return dict(self.entries)

    def class_sums(self) -> dict[Word, int]:
        out: dict[Word, int] = {}
        for word, value in self.entries:
            key = pi_q(word)
            out[key] = out.get(key, 0) + value
        return out


def lift(z: ZEnc, require_balance: bool = True) -> tuple[ZTilde, int]:
    """Run the lifting algorithm on z; returns the scaled encoding and d'.

    ``require_balance=False`` skips the strength check on z, which is only
    useful for exercising the row-counting identities on arbitrary inputs.
    """
    nu, d, k = z.nu, z.d, z.k
    if not (1 <= k <= d < nu):
        raise ValueError(f"need 1 <= k <= d < nu, got (nu, d, k) = {(nu, d, k)}")
    if require_balance and not z.satisfies_eq6():
        raise ValueError("z violates the strength-k balance equations")
    dp = d_prime(z)
    r = top_weight(z)
    zz = z.z
    raw: dict[Word, Fraction] = {}
    source: dict[Word, tuple[int, ...]] = {}

    def emit(word: Word, value: Fraction, J: tuple[int, ...]):
        if word in raw:
            raise AssertionError(f"word {word} emitted twice (classes {source[word]} and {J})")
        if pi_q(word) != _indicator(J, nu):
            raise AssertionError(f"word {word} does not interpret as u({J})")
        raw[word] = value
        source[word] = J

    emit(identity_word(nu), Fraction(zz[nu]), tuple(range(nu)))
    for J in itertools.combinations(range(nu), r):
        emit(g_word(J, nu, r), Fraction(zz[r]), J)
    for i in range(r):
        if zz[i] == 0:
            continue
        den = binom(nu - 1 - i, r - i)
        for J in itertools.combinations(range(nu), i):
            cs = c_star(J, nu, r)
            for c in range(cs):
                coef = Fraction(binom(nu - c - 2 - i, r - 1 - i), den)
                emit(g_c_word(J, c, nu), coef * zz[i], J)
            if cs < nu - r:
                coef = Fraction(binom(nu - cs - 1 - i, r - i), den)
                emit(g_word(J, nu, r), coef * zz[i], J)

    scale = lcm_of_denominators(raw.values())
    items = [(w, v * scale) for w, v in raw.items() if v != 0]
    t = ZTilde.from_items(nu, k, dp, [(w, int(v)) for w, v in items], scale)

    sums = t.class_sums()
    for i, zi in enumerate(zz):
        if i < nu and i > r:
            continue
        for J in itertools.combinations(range(nu), i):
            got = sums.get(_indicator(J, nu), 0)
            if got != scale * zi:
                raise AssertionError(
                    f"conservation broken on class {J}: {got} != {scale} * {zi}"
                )
    return t, dp


def materialize_lift(t: ZTilde) -> DesignPair:
    q_rows = [(w, -v) for w, v in t.entries if v < 0]
    p_rows = [(w, v) for w, v in t.entries if v > 0]
    if not q_rows or not p_rows:
        raise ValueError("both arrays need at least one row")
    pair = DesignPair(
        "arpa",
        DesignArray(t.nu, t.nu, tuple(q_rows)),
        DesignArray(t.nu, t.nu, tuple(p_rows)),
        (t.nu, t.d_prime, t.k),
    )
    if pair.first.R != pair.second.R:
        raise AssertionError(f"row counts differ: R(Q)={pair.first.R}, R(P)={pair.second.R}")
    return pair


def f_z_eval(z: ZEnc, h: int, lam: int, c: int, r: int | None = None) -> Fraction:
    """sum_{i=h}^{r} C(nu-c-h-lam, i-h) C(nu-c-i, r-i) / C(nu-1-i, r-i) z_i."""
    nu = z.nu
    if r is None:
        r = top_weight(z)
    total = Fraction(0)
    for i in range(h, r + 1):
        top = _b(nu - c - h - lam, i - h)
        if top == 0 or z.z[i] == 0:
            continue
        total += Fraction(top * _b(nu - c - i, r - i), binom(nu - 1 - i, r - i)) * z.z[i]
    return total


def r_hlv(t: ZTilde, H: Iterable[int], L: Iterable[int], v: Iterable[int]) -> int:
    """Sum of entries u with u_j = j on H and u_L = v (L read in increasing order)."""
    H = tuple(H)
    L = tuple(sorted(L))
    v = tuple(v)
    return sum(
        val
        for word, val in t.entries
        if all(word[j] == j for j in H) and all(word[l] == x for l, x in zip(L, v))
    )


def table4_case(nu: int, k: int, r: int, H, L, v):
    """Classify (H, L, v) into one of the six non-trivial cases.

    Returns (case, s, c, lam) or None when no lifted row can match.
    """
    H = tuple(sorted(H))
    L = tuple(sorted(L))
    v = tuple(v)
    h = len(H)
    if h >= k or len(L) != k - h or len(v) != k - h:
        raise ValueError("need |H| < k and |L| = |v| = k - |H|")
    # v must read (c+1)^s c^(k-h-s) with s < k-h
    c = v[-1]
    s = sum(1 for x in v if x == c + 1)
    if any(x != c + 1 for x in v[:s]) or any(x != c for x in v[s:]) or s >= k - h:
        return None
    if c > min(H + (nu - r,)):
        return None
    lam = sum(1 for l in L if l > c)
    in_h = c in H
    if s > 0:
        if not in_h and L[s - 1] <= c < L[s] and c < nu - r:
            return ("C1", s, c, lam)
        return None
    if not in_h:
        if L[0] < c < L[-1] and c < nu - r:
            return ("C2", s, c, lam)
        if c < L[0] and c < nu - r:
            return ("C3", s, c, lam)
        if L[-1] < c:
            return ("C4", s, c, lam)
        return None
    if c < L[-1] and c < nu - r:
        return ("C5", s, c, lam)
    if L[-1] < c:
        return ("C6", s, c, lam)
    return None


def table4_expression(z: ZEnc, H, L, v) -> tuple[str | None, Fraction]:
    """R(H, L, v) predicted from f_z (before scaling), with the case label."""
    nu, k = z.nu, z.k
    r = top_weight(z)
    hit = table4_case(nu, k, r, H, L, v)
    if hit is None:
        return None, Fraction(0)
    case, s, c, lam = hit
    h = len(tuple(H))
    f = lambda a, b, cc: f_z_eval(z, a, b, cc, r)  # noqa: E731
    edge = nu - r
    if case == "C1":
        val = f(h, lam, edge) if c == edge - 1 else f(h, lam, c + 1) - f(h, lam - 1, c + 2)
    elif case == "C2":
        val = f(h + 1, lam - 1, c + 1)
    elif case == "C3":
        m = k - h - 1
        val = f(h, m, edge) if c == edge - 1 else f(h, m, c + 1) - f(h, m, c + 2)
    elif case == "C4":
        val = f(h, 0, edge) if c == edge else f(h, 0, c) - f(h, 0, c + 1)
    elif case == "C5":
        val = f(h, lam - 1, c + 1)
    else:
        val = f(h, 0, c)
    return case, val


def _hlv_data(nu: int, k: int):
    """All (H, L, v) with |H| < k, v_s != l_s, v of the shape (c+1)^s c^t."""
    for h in range(k):
        for K in itertools.combinations(range(nu), k):
            for H in itertools.combinations(K, h):
                L = tuple(x for x in K if x not in H)
                m = len(L)
                for c in range(nu):
                    for s in range(m):
                        v = (c + 1,) * s + (c,) * (m - s)
                        if any(x >= nu for x in v) or any(x == l for x, l in zip(v, L)):
                            continue
                        yield H, L, v


@dataclass
class LiftReport:
    interprets: bool
    gamma_p: bool
    k_equal: bool
    table4: bool | None = None
    witnesses: dict | None = None

    @property
    def passed(self) -> bool:
        return self.interprets and self.gamma_p and self.k_equal and self.table4 is not False

    def as_dict(self) -> dict:
        out = {
            "passed": self.passed,
            "interprets": self.interprets,
            "gamma_p": self.gamma_p,
            "k_equal": self.k_equal,
            "table4": self.table4,
        }
        if self.witnesses:
            out["witnesses"] = self.witnesses
        return out


def verify_lift(
    arpa: DesignPair,
    cpa: DesignPair,
    d_prime: int,
    ztilde: ZTilde | None = None,
    z: ZEnc | None = None,
    table4_limit: int = 7,
) -> LiftReport:
    """Check interpretation, the symbol budget d', and strength k of a lifted pair.

    With both ``ztilde`` and ``z`` given and nu <= table4_limit, every (H, L, v)
    is also counted directly and compared to its f_z expression.
    """
    k = cpa.params[2]
    nu = arpa.columns
    witnesses: dict = {}
    interp = interprets_as(arpa, cpa)
    wide = [w for w, _ in arpa.second.rows if len(set(w)) > d_prime]
    if wide:
        witnesses["gamma_p"] = {"row": list(wide[0])}
    hit = k_equal_witness(arpa.first, arpa.second, k)
    if hit is not None:
        witnesses["k_equal"] = hit
    t4 = None
    if ztilde is not None and z is not None and nu <= table4_limit:
        t4 = True
        for H, L, v in _hlv_data(nu, k):
            case, expected = table4_expression(z, H, L, v)
            got = r_hlv(ztilde, H, L, v)
            if got != expected * ztilde.scale:
                t4 = False
                witnesses["table4"] = {"H": H, "L": L, "v": v, "case": case, "count": got}
                break
    return LiftReport(interp, not wide, hit is None, t4, witnesses or None)


def ztilde_to_json(t: ZTilde) -> dict:
    return {
        "nu": t.nu,
        "k": t.k,
        "d_prime": t.d_prime,
        "scale": t.scale,
        "entries": [{"row": list(w), "value": v} for w, v in t.entries],
    }


def ztilde_from_json(obj: Mapping) -> ZTilde:
    return ZTilde.from_items(
        int(obj["nu"]),
        int(obj["k"]),
        int(obj["d_prime"]),
        [(e["row"], e["value"]) for e in obj["entries"]],
        int(obj.get("scale", 1)),
    )


def ztilde_to_text(t: ZTilde) -> str:
    """One line per word; matched coordinates (w_j = j) are bracketed."""
    lines = []
    order = sorted(t.entries, key=lambda e: (e[1] > 0, -sum(pi_q(e[0])), e[0]))
    for word, value in order:
        cells = " ".join(f"[{c}]" if c == j else f" {c} " for j, c in enumerate(word))
        side = "Q" if value < 0 else "P"
        lines.append(f"{side} {cells}  x{abs(value)}")
    return "\n".join(lines) + "\n"
