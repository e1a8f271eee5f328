"""Exact chain calculus for tail swindles on products of trees."""

__version__ = "0.1.0"
