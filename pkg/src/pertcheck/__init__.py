"""Perturbation checklists for stress-testing automatic NLG evaluation metrics."""

__version__ = "0.1.0"
