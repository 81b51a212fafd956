"""Phase-locking laboratory: arithmetic, classical dynamics, quantum and Galois phase states."""

from . import arith, dynamics, entangle, galois, locking, qphase

__all__ = ["arith", "dynamics", "entangle", "galois", "locking", "qphase"]
__version__ = "0.1.0"
