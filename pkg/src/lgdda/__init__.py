"""Graded distributed doxastic attitudes: parsing, model checking, model
transformations and a tableau decision procedure with countermodels."""

__version__ = "0.1.0"
