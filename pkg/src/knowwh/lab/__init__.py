"""Brute-force validity and satisfiability checking over small models."""

from .enumeration import BudgetTooLarge
from .search import SearchBudget, Verdict, frame_valid, model_kind, sat_search, valid

__all__ = ["BudgetTooLarge", "SearchBudget", "Verdict", "frame_valid", "model_kind",
           "sat_search", "valid"]
