"""Computational toolkit for q-difference value distribution in several
complex variables: exact polynomial algebra, slice-based Nevanlinna
functions, Casoratian machinery, graded filtrations, and inequality
verification harnesses."""

__version__ = "0.1.0"

from .errors import (HypothesisFailure, NevlabError, NumericError,
                     SizeError, UsageError)

__all__ = ["HypothesisFailure", "NevlabError", "NumericError",
           "SizeError", "UsageError", "__version__"]
