"""Track Guide - Frenet-frame lattice planning and guidance for runners on athletics tracks."""

__version__ = "1.0.0"
