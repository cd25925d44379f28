"""Positive-primitive formula calculus over rings with finite-module semantics."""

from .errors import CapExceeded, PpCalcError, PpSyntaxError
from .rings import INTEGERS, ring_from_spec, zmod
from .dsl import parse, to_text
from .formulas import PpFormula, conj, dual, psum, pushforward, sigma_colon_phi
from .modules import cyclic_module, module_from_spec, tensor
from .semantics import evaluate, holds, leq_syntactic

__all__ = [
    "CapExceeded", "PpCalcError", "PpSyntaxError", "INTEGERS", "ring_from_spec", "zmod", "parse", "to_text",
    "PpFormula", "conj", "dual", "psum", "pushforward", "sigma_colon_phi", "cyclic_module", "module_from_spec",
    "tensor", "evaluate", "holds", "leq_syntactic",
]
__version__ = "0.1.0"
