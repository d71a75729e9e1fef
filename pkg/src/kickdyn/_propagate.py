"""Shared kicked-evolution engine: one-period sample propagators, exact
stroboscopic powers and chunked population statistics."""
from __future__ import annotations

import numpy as np
from scipy.linalg import schur

from .linalg import expm_hermitian, expm_hermitian_batch

CHUNK_PERIODS = 4096


def period_samples(H, M, period, samples_per_period):
    """Propagators from the start of a period to ``tau_k = k T / s`` for ``k = 1..s``.

    The last entry includes the kick, so it is the full one-period map
    ``exp(-i M) exp(-i H T)``.
    """
    if samples_per_period < 1:
        raise ValueError("samples_per_period must be >= 1")
    taus = period * np.arange(1, samples_per_period + 1) / samples_per_period
    Us = expm_hermitian_batch(H, taus)
    Us[-1] = expm_hermitian(M) @ Us[-1]
    return taus, Us


def strobe_states(U, psi0, n):
    """States ``U^k psi0`` for ``k = 0..n-1`` from the Schur form of the unitary ``U``.

    For a unitary matrix the complex Schur form is diagonal, so the powers
    are exact phases and the cost does not grow with ``k``.
    """
    tri, Z = schur(U, output="complex")
    lam = np.diag(tri)
    lam = lam / np.abs(lam)
    c = Z.conj().T @ psi0
    k = np.arange(n)[:, None]
    return (np.exp(1j * k * np.angle(lam)[None, :]) * c[None, :]) @ Z.T


def population_extrema(H, M, period, samples_per_period, psi0, n_periods,
                       chunk=CHUNK_PERIODS):
    """Per-level minimum and maximum population over ``n_periods`` kicked periods.

    Includes ``t = 0`` and every intra-period sample.
    """
    _, Us = period_samples(H, M, period, samples_per_period)
    U = Us[-1]
    psi0 = np.asarray(psi0, dtype=complex)
    p0 = np.abs(psi0) ** 2
    pmin, pmax = p0.copy(), p0.copy()
    start = psi0
    done = 0
    while done < n_periods:
        m = min(chunk, n_periods - done)
        states = strobe_states(U, start, m)
        amps = np.einsum("kij,nj->nki", Us, states)
        P = np.abs(amps) ** 2
        pmin = np.minimum(pmin, P.min(axis=(0, 1)))
        pmax = np.maximum(pmax, P.max(axis=(0, 1)))
        start = Us[-1] @ states[-1]
        done += m
    return pmin, pmax
