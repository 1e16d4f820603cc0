"""Exact verification kernel for Hopf quasigroups and their twisted Yetter-Drinfeld quasimodules."""

__version__ = "0.1.0"
