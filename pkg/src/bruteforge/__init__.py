"""Brute-force laboratory: certificate-producing SAT solving, Pythagorean
triple colorings, cap sets, equational reasoning, and quantifier
classification, behind one deterministic command-line tool."""

__version__ = "0.1.0"
