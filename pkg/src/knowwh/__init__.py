"""Model checking and validity testing for logics of knowing whether,
knowing value and knowing how."""

from .parser import ParseError, parse, parse_model
from .syntax import Formula, FragmentTag, fragment, print_formula, subst

__version__ = "0.1.0"

__all__ = ["Formula", "FragmentTag", "ParseError", "fragment", "parse", "parse_model",
           "print_formula", "subst"]
