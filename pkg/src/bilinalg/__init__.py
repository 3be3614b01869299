"""Bilinear multiplication algorithms over finite fields and truncated
algebras A_q(m, l), synthesized by interpolation on curves of genus 0 and 1."""

from .algebra import StructureAlgebra, TruncatedAlgebra, truncated
from .bilinear import BilinearAlgorithm, verify
from .bounds import BoundCertificate, BoundTable, improve, reproduce_fixture
from .elliptic import EllipticCurve, curve_with_trace, parse_curve
from .extfield import ExtField, field
from .gf import GF
from .interchange import FormatError, dump, dumps, load, loads
from .p1 import ProjectiveLine
from .rank import brute_force_rank
from .synthesis import InterpolationPlan, PreconditionError, SearchExhausted, assemble

__version__ = "0.1.0"

__all__ = [
    "BilinearAlgorithm", "BoundCertificate", "BoundTable", "EllipticCurve", "ExtField",
    "FormatError", "GF", "InterpolationPlan", "PreconditionError", "ProjectiveLine",
    "SearchExhausted", "StructureAlgebra", "TruncatedAlgebra", "assemble", "brute_force_rank",
    "curve_with_trace", "dump", "dumps", "field", "improve", "load", "loads", "parse_curve",
    "reproduce_fixture", "truncated", "verify",
]
