"""Partition regularity of polynomial patterns in x and y.

Exact verdicts with derivations (:mod:`.analyzer`), colourings used as
blocking certificates (:mod:`.colourings`) and finite-scale search
(:mod:`.search`, :mod:`.witness`, :mod:`.sequences`).
"""

from .analyzer import Rule, Status, Verdict, analyze
from .colourings import BinLen, Explicit, Product, ResidueMod, SmodVal, parse_colouring_spec
from .parser import ParseError, parse_pattern
from .pattern import BilinearPiece, Linear, Pattern, Ratio, make_pattern, render
from .search import (
    BlockReport,
    SolutionTuple,
    auto_block,
    enumerate_solutions,
    find_monochromatic,
    propose_blocking,
    verify_blocking,
)
from .sequences import derive_sequences, fs_ratio_search, fs_set, product_sum_set, ratio_set
from .witness import BudgetExhausted, Unsat, Witness, search_witness

__version__ = "0.1.0"

__all__ = [
    "BilinearPiece", "BinLen", "BlockReport", "BudgetExhausted", "Explicit", "Linear", "ParseError",
    "Pattern", "Product", "Ratio", "ResidueMod", "Rule", "SmodVal", "SolutionTuple", "Status", "Unsat",
    "Verdict", "Witness", "analyze", "auto_block", "derive_sequences", "enumerate_solutions",
    "find_monochromatic", "fs_ratio_search", "fs_set", "make_pattern", "parse_colouring_spec",
    "parse_pattern", "product_sum_set", "propose_blocking", "ratio_set", "render", "search_witness",
    "verify_blocking",
]
