"""Augmented labeled multi-Bernoulli filtering for group target tracking."""

__version__ = '0.1.0'
