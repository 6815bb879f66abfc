"""Exact constructions and checks for alphabet reduction pairs and cover pairs of arrays."""

from .designs import (
    DesignArray,
    DesignPair,
    Verdict,
    check_arpa,
    check_cpa,
    check_k_equal,
    extend_arpa,
    interprets_as,
    pi_pair,
    pi_q,
    ratio,
    theorem3_bound,
)
from .exactmath import Rational, binom, h_lagrange, s_sum, u_sum
from .lift import ZTilde, lift, materialize_lift, verify_lift
from .lp import Base, OptSequence, closed_form, delta_by_bases, delta_opt, gamma, min_rstar, optimal_cpa
from .regular import RepVec, ZEnc, materialize, rep_vector, symmetrize, to_z, from_z

__version__ = "0.1.0"

__all__ = [
    "DesignArray",
    "DesignPair",
    "Verdict",
    "check_arpa",
    "check_cpa",
    "check_k_equal",
    "extend_arpa",
    "interprets_as",
    "pi_pair",
    "pi_q",
    "ratio",
    "theorem3_bound",
    "Rational",
    "binom",
    "h_lagrange",
    "s_sum",
    "u_sum",
    "ZTilde",
    "lift",
    "materialize_lift",
    "verify_lift",
    "Base",
    "OptSequence",
    "closed_form",
    "delta_by_bases",
    "delta_opt",
    "gamma",
    "min_rstar",
    "optimal_cpa",
    "RepVec",
    "ZEnc",
    "materialize",
    "rep_vector",
    "symmetrize",
    "to_z",
    "from_z",
]
