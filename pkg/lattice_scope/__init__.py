"""
Lattice Scope - Euler totient and lattice-point visibility toolkit
Sieve tables for phi, mu and omega; visible-point densities; CRT-built hidden
blocks and blind spots; greedy, exact and explicit visibility covers of the
grid {0..n}^2.
"""

__version__ = '1.0.0'
