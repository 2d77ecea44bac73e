"""Unit conventions and physical constants.

All energies and rates in this package are expressed in eV, all times in ps.
A quantity given in eV is converted to an angular rate in 1/ps by dividing by
``HBAR_EV_PS``.
"""

import scipy.constants as _sc

# hbar in eV ps (CODATA): 6.582119569e-4
HBAR_EV_PS = _sc.hbar / _sc.e * 1e12

# speed of light in nm/ps
C_NM_PS = _sc.c * 1e-3

# one Debye in C m
DEBYE_CM = 1e-21 / _sc.c


def rate_from_ev(energy_ev: float) -> float:
    """Angular rate (1/ps) corresponding to an energy in eV."""
    return energy_ev / HBAR_EV_PS
