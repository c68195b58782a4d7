"""Regular maps with Euler characteristic -p^4: coset enumeration,
permutation groups and the classification scan over PG(2, p)."""

__version__ = "0.1.0"
