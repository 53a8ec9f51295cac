"""Finite groupoid quantum mechanics: amplitude algebras, states, dynamics, classical limits."""

__version__ = "0.1.0"
