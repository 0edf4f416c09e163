"""Exact computations around Kochen operators, p-adic holomorphy rings and diophantine families over Q."""

__version__ = "0.1.0"
