"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np

# moduli bands used by the random separated-spectrum matrices; the gaps at
# 1.0 and 2.0 are where tests place region boundaries
BANDS = ((0.3, 0.7), (1.3, 1.7), (2.3, 2.7))
SPLIT_RADII = (1.0, 2.0)


def separated_matrix(rng: np.random.Generator, n: int = 20) -> tuple[np.ndarray, np.ndarray]:
    """Random n x n matrix whose spectrum splits into three modulus bands.

    Eigenvalue moduli are lattice-spaced inside each band so they stay well
    clear of the band edges; a random strictly upper part and a Haar-ish
    unitary conjugation make the matrix non-normal without moving eigenvalues.
    Returns (matrix, band counts).
    """
    counts = rng.multinomial(n, [1 / 3, 1 / 3, 1 / 3])
    moduli = []
    for (lo, hi), k in zip(BANDS, counts):
        moduli.extend(lo + (hi - lo) * (np.arange(k) + 0.5) / k)
    phases = rng.uniform(0, 2 * np.pi, n)
    diag = np.array(moduli) * np.exp(1j * phases)
    upper = 0.5 * np.triu(
        rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)), 1
    )
    core = np.diag(diag) + upper
    q = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))[0]
    return q @ core @ q.conj().T, counts
