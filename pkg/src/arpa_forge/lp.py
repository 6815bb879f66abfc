"""Vertices of the linear program whose optimum gives delta(nu, d, k).

Bases are enumerated combinatorially and their basic solutions are written in
closed form; no generic LP solver is involved.  Variable ``("y", i)`` is the
multiplicity of weight-i words in N (i < nu), ``("x", i)`` the one in D.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .exactmath import binom, lcm_of_denominators
from .regular import RepVec

Var = tuple[str, int]

__all__ = [
    "Base",
    "OptSequence",
    "NoClosedForm",
    "lp_matrix",
    "matrix_rank",
    "is_base",
    "enumerate_bases",
    "basic_solution",
    "constraint_residuals",
    "lp_objective",
    "base_value",
    "is_feasible_base",
    "is_feasible_by_sign",
    "feasible_bases",
    "delta_by_bases",
    "sequence_value",
    "sequence_multiplicities",
    "delta_opt",
    "min_rstar",
    "optimal_cpa",
    "closed_form",
    "gamma",
]


class NoClosedForm(ValueError):
    """Raised when no closed-form expression is known for the requested triple."""


def _check_params(nu: int, d: int, k: int):
    if not (1 <= k <= d < nu):
        raise ValueError(f"need 1 <= k <= d < nu, got (nu, d, k) = {(nu, d, k)}")


@dataclass(frozen=True)
class Base:
    Y: frozenset
    X: frozenset

    def __init__(self, Y, X):
        object.__setattr__(self, "Y", frozenset(Y))
        object.__setattr__(self, "X", frozenset(X))

    @property
    def support(self) -> list[int]:
        return sorted(self.Y | self.X)

    def variables(self) -> list[Var]:
        return [("y", i) for i in sorted(self.Y)] + [("x", i) for i in sorted(self.X)]


@dataclass(frozen=True)
class OptSequence:
    """0 = i_0 < i_1 < ... < i_k = d < i_{k+1} = nu."""

    i: tuple[int, ...]

    def __post_init__(self):
        i = tuple(int(v) for v in self.i)
        object.__setattr__(self, "i", i)
        if len(i) < 3:
            raise ValueError("a sequence needs at least i_0, i_1 = d and i_2 = nu")
        if i[0] != 0 or any(a >= b for a, b in zip(i, i[1:])):
            raise ValueError(f"sequence {i} must start at 0 and increase strictly")

    @property
    def k(self) -> int:
        return len(self.i) - 2

    @property
    def d(self) -> int:
        return self.i[-2]

    @property
    def nu(self) -> int:
        return self.i[-1]


def lp_matrix(nu: int, d: int, k: int) -> list[list[int]]:
    """(k+1) x (nu+d+1) constraint matrix; column i < nu is y_i, column nu+i is x_i."""
    _check_params(nu, d, k)
    m = nu - k
    return [
        [-binom(m, i - h) if i < nu else binom(m, i - nu - h) for i in range(nu + d + 1)]
        for h in range(k + 1)
    ]


def matrix_rank(rows: list[list]) -> int:
    """Rank over the rationals by fraction-exact Gaussian elimination."""
    a = [[Fraction(v) for v in row] for row in rows]
    if not a:
        return 0
    rank = 0
    ncols = len(a[0])
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(a)) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][col] != 0:
                f = a[r][col] / a[rank][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == len(a):
            break
    return rank


def _column(var: Var, nu: int) -> int:
    kind, i = var
    return i if kind == "y" else nu + i


def is_base(Y, X, k: int) -> bool:
    Y, X = set(Y), set(X)
    return not (Y & X) and len(Y | X) == k + 1


def enumerate_bases(nu: int, d: int, k: int) -> Iterator[Base]:
    """Every base (Y, X) of the LP: a (k+1)-set of weights, each assigned to y or x."""
    _check_params(nu, d, k)
    for support in itertools.combinations(range(nu), k + 1):
        choices = [("y", "x") if i <= d else ("y",) for i in support]
        for sides in itertools.product(*choices):
            yield Base(
                [i for i, s in zip(support, sides) if s == "y"],
                [i for i, s in zip(support, sides) if s == "x"],
            )


def _signed_coefficient(i: int, support, nu: int) -> Fraction:
    prod = Fraction(1)
    for a in support:
        if a != i:
            prod *= Fraction(nu - a, i - a)
    return prod / binom(nu, i)


def basic_solution(b: Base, nu: int) -> dict[Var, Fraction]:
    """Closed-form basic solution: only the basic variables are listed (the rest are zero)."""
    support = b.support
    sol: dict[Var, Fraction] = {}
    for i in sorted(b.Y):
        sol[("y", i)] = -_signed_coefficient(i, support, nu)
    for i in sorted(b.X):
        sol[("x", i)] = _signed_coefficient(i, support, nu)
    return sol


def constraint_residuals(sol: dict[Var, Fraction], nu: int, d: int, k: int) -> list[Fraction]:
    """M v - e_k; all zero iff the solution satisfies (c_0) .. (c_k)."""
    M = lp_matrix(nu, d, k)
    res = []
    for h, row in enumerate(M):
        val = sum((row[_column(v, nu)] * c for v, c in sol.items()), Fraction(0))
        res.append(val - (1 if h == k else 0))
    return res


def lp_objective(sol: dict[Var, Fraction], nu: int) -> Fraction:
    return sum((binom(nu, i) * c for (_, i), c in sol.items()), Fraction(0))


def base_value(b: Base, nu: int) -> Fraction:
    """Objective of a feasible base: sum_i prod_{a != i} (nu - a) / |i - a|."""
    support = b.support
    total = Fraction(0)
    for i in support:
        prod = Fraction(1)
        for a in support:
            if a != i:
                prod *= Fraction(nu - a, abs(i - a))
        total += prod
    return total


def is_feasible_base(b: Base, k: int) -> bool:
    """Sorted decreasingly, the support alternates X, Y, X, ... starting in X."""
    if not is_base(b.Y, b.X, k):
        raise ValueError("not a base")
    for rank, i in enumerate(sorted(b.Y | b.X, reverse=True)):
        want = b.X if rank % 2 == 0 else b.Y
        if i not in want:
            return False
    return True


def is_feasible_by_sign(b: Base, nu: int) -> bool:
    return all(c >= 0 for c in basic_solution(b, nu).values())


def feasible_bases(nu: int, d: int, k: int, prune: bool = False) -> Iterator[Base]:
    for b in enumerate_bases(nu, d, k):
        if prune and (d not in b.X or min(b.support) != 0):
            continue
        if is_feasible_base(b, k):
            yield b


def delta_by_bases(nu: int, d: int, k: int, prune: bool = False) -> tuple[Fraction, list[Base]]:
    """2 / (opt + 1) from exhaustive feasible-base enumeration; also returns all optimal bases."""
    best = None
    winners: list[Base] = []
    for b in feasible_bases(nu, d, k, prune=prune):
        v = base_value(b, nu)
        if best is None or v < best:
            best, winners = v, [b]
        elif v == best:
            winners.append(b)
    if best is None:
        raise ValueError(f"no feasible base for {(nu, d, k)}")
    return Fraction(2) / (best + 1), winners


def sequence_value(seq: OptSequence) -> Fraction:
    """2 / (1 + sum_r prod_{s<r} (nu-i_s)/(i_r-i_s) * prod_{s>r} (nu-i_s)/(i_s-i_r))."""
    i, nu, k = seq.i, seq.nu, seq.k
    total = Fraction(0)
    for r in range(k + 1):
        term = Fraction(1)
        for s in range(k + 1):
            if s < r:
                term *= Fraction(nu - i[s], i[r] - i[s])
            elif s > r:
                term *= Fraction(nu - i[s], i[s] - i[r])
        total += term
    return Fraction(2) / (1 + total)


def sequence_multiplicities(seq: OptSequence) -> list[Fraction]:
    """Per-word multiplicity of weight i_r, r = 0..k, for R* = 1."""
    i, nu, k = seq.i, seq.nu, seq.k
    out = []
    for r in range(k + 1):
        prod = Fraction(1)
        for s in range(k + 1):
            if s != r:
                prod *= Fraction(nu - i[s], abs(i[r] - i[s]))
        out.append(prod / binom(nu, i[r]))
    return out


def delta_opt(nu: int, d: int, k: int) -> tuple[Fraction, OptSequence]:
    """Maximum over interior sequences; ties go to the lexicographically smallest."""
    if d >= nu:
        raise ValueError("delta_opt needs d < nu; gamma(q, q, k) = 1 is handled by gamma()")
    _check_params(nu, d, k)
    best = None
    best_seq = None
    for interior in itertools.combinations(range(1, d), k - 1):
        seq = OptSequence((0, *interior, d, nu))
        v = sequence_value(seq)
        if best is None or v > best:
            best, best_seq = v, seq
    return best, best_seq


def min_rstar(seq: OptSequence, nu: int | None = None) -> int:
    """Smallest R* > 0 making every multiplicity of the sequence integral."""
    if nu is not None and nu != seq.nu:
        raise ValueError(f"sequence ends at {seq.nu}, not nu={nu}")
    return lcm_of_denominators(sequence_multiplicities(seq))


def optimal_cpa(nu: int, d: int, k: int, seq: OptSequence | None = None, r_star: int | None = None) -> RepVec:
    """Representative vector of a regular CPA realizing delta(nu, d, k)."""
    if seq is None:
        _, seq = delta_opt(nu, d, k)
    elif (seq.nu, seq.d, seq.k) != (nu, d, k):
        raise ValueError("sequence does not match (nu, d, k)")
    if r_star is None:
        r_star = min_rstar(seq)
    y = [0] * (nu + 1)
    x = [0] * (d + 1)
    for r, m in enumerate(sequence_multiplicities(seq)):
        count = m * r_star
        if count.denominator != 1:
            raise ValueError(f"R*={r_star} leaves a fractional multiplicity {count}")
        if r % 2 == k % 2:
            x[seq.i[r]] = int(count)
        else:
            y[seq.i[r]] = int(count)
    y[nu] = r_star
    return RepVec(nu, d, tuple(y), tuple(x), k)


def closed_form(q: int, p: int, k: int) -> Fraction:
    """Known closed forms for p = k, k = 1 and k = 2 (q > p)."""
    if not (1 <= k <= p < q):
        raise ValueError(f"need 1 <= k <= p < q, got {(q, p, k)}")
    if p == k:
        return Fraction(2, 1 + sum(binom(q, i) * binom(q - i - 1, k - i) for i in range(k + 1)))
    if k == 1:
        return Fraction(p, q)
    if k == 2:
        hi, lo = (p + 1) // 2, p // 2
        return Fraction(hi * lo, (q - hi) * (q - lo))
    raise NoClosedForm(f"no closed form for (q, p, k) = {(q, p, k)}")


def gamma(q: int, p: int, k: int) -> Fraction:
    """Optimal ARPA ratio; equals delta(q, p, k), and 1 when p = q."""
    if not (1 <= k <= p <= q):
        raise ValueError(f"need 1 <= k <= p <= q, got {(q, p, k)}")
    if p == q:
        return Fraction(1)
    return delta_opt(q, p, k)[0]
