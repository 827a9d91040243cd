"""Verbatim OT-in-NT quotation detection over Strong's-number n-grams, with
book clustering and report generation."""

__version__ = "0.1.0"
