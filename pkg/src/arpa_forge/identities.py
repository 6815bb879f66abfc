"""Randomized checks of the standalone identities the constructions rely on."""

from __future__ import annotations

import random
from fractions import Fraction

from .exactmath import binom, h_lagrange, lcm_of_denominators, s_sum, u_sum
from .lift import f_z_eval, top_weight
from .lp import basic_solution, constraint_residuals, enumerate_bases
from .regular import ZEnc

__all__ = ["nullspace", "random_balanced_z", "SUITES", "run_suites"]


def nullspace(rows: list[list[int]], ncols: int) -> list[list[Fraction]]:
    """Basis of the rational kernel of a matrix (reduced row echelon form)."""
    a = [[Fraction(v) for v in row] for row in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        lead = a[r][col]
        a[r] = [x / lead for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        vec = [Fraction(0)] * ncols
        vec[fcol] = Fraction(1)
        for i, pcol in enumerate(pivots):
            vec[pcol] = -a[i][fcol]
        basis.append(vec)
    return basis


def random_balanced_z(rng: random.Random, nu_max: int = 8, tries: int = 200) -> ZEnc:
    """A random z with z_nu < 0 satisfying the strength-k balance equations.

    d is read off as the largest weight below nu with a positive entry.
    """
    for _ in range(tries):
        nu = rng.randint(2, nu_max)
        k = rng.randint(1, nu - 1)
        r = rng.randint(k, nu - 1)
        support = list(range(r + 1)) + [nu]
        rows = [
            [binom(nu - k, i - h) if h <= i <= nu - k + h else 0 for i in support]
            for h in range(k + 1)
        ]
        basis = nullspace(rows, len(support))
        if not basis:
            continue
        coefs = [rng.randint(-4, 4) for _ in basis]
        coefs[rng.randrange(len(coefs))] = rng.choice((-3, -2, -1, 1, 2, 3))
        vec = [Fraction(0)] * len(support)
        for coef, b in zip(coefs, basis):
            vec = [x + coef * y for x, y in zip(vec, b)]
        m = lcm_of_denominators(vec)
        ints = [int(x * m) for x in vec]
        if ints[-1] == 0:
            continue
        if ints[-1] > 0:
            ints = [-x for x in ints]
        z = [0] * (nu + 1)
        for i, val in zip(support, ints):
            z[i] = val
        positive = [i for i in range(nu) if z[i] > 0]
        if not positive or max(positive) < k:
            continue
        d = max(positive)
        return ZEnc(nu, d, k, tuple(z))
    raise RuntimeError("could not draw a balanced z")


def _lagrange(rng: random.Random) -> bool:
    size_b = rng.randint(1, 6)
    B = rng.sample(range(-10, 11), size_b)
    size_a = rng.randint(0, size_b - 1)
    A = rng.sample(B, size_a) if rng.random() < 0.5 else rng.sample(range(-10, 11), size_a)
    want = 1 if size_b == size_a + 1 else 0
    return h_lagrange(A, B) == want


def _s_identity(rng: random.Random) -> bool:
    b = rng.randint(0, 12)
    c = rng.randint(0, b)
    a = rng.randint(0, b)
    return s_sum(a, b, c) == binom(b - a, c)


def _u_identity(rng: random.Random) -> bool:
    a = rng.randint(1, 12)
    d = rng.randint(a, 12)
    c = rng.randint(0, a - 1)
    e = rng.randint(max(0, d - c), d)
    return u_sum(a, a - 1, c, d, e) == (-1) ** c * binom(d - a, d - e)


def _f_vanishing(rng: random.Random) -> bool:
    z = random_balanced_z(rng)
    r = top_weight(z)
    ok = True
    for h in range(z.k):
        for lam in range(z.k - h):
            for c in range(z.nu - r + 1):
                val = f_z_eval(z, h, lam, c, r)
                if val != 0:
                    ok = False
                if lam > 0:
                    rec = f_z_eval(z, h, lam - 1, c, r) - f_z_eval(z, h + 1, lam - 1, c, r)
                    ok = ok and rec == val
    return ok


def _basic_solutions(rng: random.Random) -> bool:
    nu = rng.randint(2, 7)
    d = rng.randint(1, nu - 1)
    k = rng.randint(1, d)
    bases = list(enumerate_bases(nu, d, k))
    b = rng.choice(bases)
    return all(v == 0 for v in constraint_residuals(basic_solution(b, nu), nu, d, k))


SUITES = {
    "lagrange": _lagrange,
    "s_sum": _s_identity,
    "u_sum": _u_identity,
    "f_z": _f_vanishing,
    "basic_solution": _basic_solutions,
}


def run_suites(seed: int = 0, iters: int = 500, names=None) -> dict[str, dict]:
    """Run each suite ``iters`` times from a seeded generator; report failures."""
    out = {}
    for name in names or SUITES:
        rng = random.Random(f"{seed}:{name}")
        fails = sum(0 if SUITES[name](rng) else 1 for _ in range(iters))
        out[name] = {"cases": iters, "failures": fails}
    return out
