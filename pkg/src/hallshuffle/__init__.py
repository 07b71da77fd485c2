"""Exact Hall algebras of P^1 over finite fields and their shuffle-algebra models."""

__version__ = "0.1.0"
