"""Randomized rule-based labeling for small dominating sets in cubic graphs of large girth."""

__version__ = "0.1.0"
