"""modp-invariants: exact modular invariant theory and characteristic-class
calculus at small primes."""

__version__ = "0.1.0"
