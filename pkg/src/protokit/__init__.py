"""Construction and verification tools for Prolog / PDDL reasoning datasets."""

__version__ = "0.1.0"
