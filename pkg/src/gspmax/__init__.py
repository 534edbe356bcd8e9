"""Explicit hyperelliptic curves over Q with maximal mod-l Galois images.

The library builds an even-degree integer polynomial f(x) whose local
behavior at a planned set of primes forces the mod-l monodromy of the
Jacobian of y^2 = f(x) to be as large as possible for every prime l, and
verifies such certificates after the fact.
"""

__version__ = "0.1.0"
