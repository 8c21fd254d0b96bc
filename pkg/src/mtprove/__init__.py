"""Certified proofs of mixed trigonometric polynomial inequalities and the
Cusa-Huygens type sinc bounds built on them."""

from .check import diagnose, verify_certificate
from .corpus import InequalityProblem, build_case, reduce_bound_to_mtp
from .expr import MTPExpression, MTPTerm, ParseError, XPolynomial, format_expr, normalize, parse
from .numeric import BigRational, PiPolynomial, PrecisionExhausted, RationalInterval, pi_enclosure, sign_of
from .prover import Disproved, GaveUp, ProofCertificate, ProverConfig, prove
from .sturm import count_roots, prove_sign, sturm_chain

__version__ = "0.1.0"
