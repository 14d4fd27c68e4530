"""Exact tools for quasirandom-forcing tournament densities.

Subpackages: :mod:`qrt.tournaments`, :mod:`qrt.density`,
:mod:`qrt.tournamenton`, :mod:`qrt.flags`, :mod:`qrt.catalog`,
:mod:`qrt.certify`, :mod:`qrt.negative`, :mod:`qrt.sampler`, :mod:`qrt.cli`.
"""

__version__ = "0.1.0"
