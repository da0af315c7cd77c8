"""Oriented m-Cayley digraphs whose automorphism group is exactly the right regular copy of the group."""

__version__ = "0.1.0"
