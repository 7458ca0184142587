"""
jcwitness - Entanglement Witnesses for the Jaynes-Cummings Model

Parametrized orthonormal bases, projector-based witnesses, closed-form
Jaynes-Cummings dynamics and witness detection sweeps.

License: MIT
"""

__version__ = "1.1.0"
