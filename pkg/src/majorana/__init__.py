"""Real-valued quantum mechanics of a free Majorana bispinor.

Submodules: ``clifford`` (real Dirac algebra), ``axial`` (axial plane waves and
the helicity basis), ``spectral`` (paired-mode evolution and packets),
``weyl`` (map from right-handed Weyl bispinors), ``grid`` (lattice integrator
used as an oracle), ``poincare`` (covariant and Wigner amplitudes) and ``cli``.
"""
from .axial import Momentum3, helicity_basis
from .spectral import PairedAxialMode, WavePacket, evolve, plancherel, synthesize

__all__ = ["Momentum3", "PairedAxialMode", "WavePacket", "evolve", "helicity_basis", "plancherel", "synthesize"]
