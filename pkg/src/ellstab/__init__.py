"""Exact K-stability analyzer for elliptic fibrations over the projective line.

Submodules:
  exactmath    -- rationals, polynomials, binary forms, places, divisors
  weierstrass  -- Weierstrass models, discriminants, Kodaira fiber types
  canbundle    -- lct/Euler tables, discriminant divisor, moduli degree
  stability    -- log-twisted K-stability of the base, adiabatic verdicts
  dfweights    -- Donaldson-Futaki and Hilbert-Mumford weight machinery
  cli          -- command line front end
"""

__version__ = "0.1.0"
