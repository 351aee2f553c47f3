"""Benchmark cases, runner and reporting."""
from .cases import CaseSpec, MaterialSpec, QuantitySpec, builtin_cases, select_cases
from .report import compare, emit_table
from .runner import CaseResult, QuantityResult, run_case

__all__ = ["CaseSpec", "MaterialSpec", "QuantitySpec", "builtin_cases", "select_cases",
           "compare", "emit_table", "CaseResult", "QuantityResult", "run_case"]
