"""Numerical laboratory for quasiparticle decay rates of weakly interacting
1d lattice models: golden-rule integrals, ladder resummation, self-consistent
memory-matrix evolution, and classical Floquet Monte Carlo."""

__version__ = "0.1.0"
