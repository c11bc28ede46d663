"""JSON helpers for complex matrices and vectors."""

from __future__ import annotations

import numpy as np


def _entry(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex entries are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(float(v))


def complex_matrix_from_json(obj) -> np.ndarray:
    """Nested rows of numbers or ``[re, im]`` pairs -> complex 2-d array."""
    rows = [[_entry(v) for v in row] for row in obj]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("matrix rows must be nonempty and of equal length")
    return np.array(rows, dtype=complex)


def complex_matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def complex_vector_to_json(v) -> list:
    return [[float(x.real), float(x.imag)] for x in np.asarray(v, dtype=complex).ravel()]


def complex_vector_from_json(obj) -> np.ndarray:
    return np.array([_entry(v) for v in obj], dtype=complex)
