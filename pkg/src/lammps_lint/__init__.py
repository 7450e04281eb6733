"""Static analysis and evaluation toolkit for LAMMPS input scripts."""

__version__ = "0.1.0"
