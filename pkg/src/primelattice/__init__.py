"""primelattice: exact prime-tuple counting and lattice-point counting.

Subpackages are plain modules; import what you need:

    sieve      smallest-prime-factor tables, mu/Lambda, pi(x), Pi(x), J(x)
    tuples     k-tuple counting, ray enumeration, localization sums
    special    Ei/li, zeta on the real axis, Riemann-Siegel Z
    explicit   explicit-formula evaluations, Perron integrals, prime zeta
    density    singular series and average tuple densities
    lattice    exact lattice-point counts and error-exponent fits
    cli        the ``primelattice`` command line tool
"""

__version__ = "0.1.0"

from . import density, explicit, lattice, quadrature, sieve, special, tuples  # noqa: F401
