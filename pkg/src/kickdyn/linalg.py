"""Dense 2x2 / 3x3 algebra: Hamiltonian builders, exact propagators,
spectral exponentials and a principal-branch unitary logarithm.

All frequencies are in units of the reference coupling Omega1 and all times
in units of 1/Omega1.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import schur

from .errors import BranchAmbiguity, InvalidMatrix, NotSpecialCase, NumericalDomain

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
CLAMP_TOL = 1e-12


def two_level_hamiltonian(delta, omega, theta=0.0):
    """``delta |2><2| + omega e^{i theta} |1><2| + h.c.``"""
    c = omega * np.exp(1j * theta)
    return np.array([[0.0, c], [np.conj(c), delta]], dtype=complex)


def ladder_hamiltonian(delta1, delta2, omega1, omega2, theta1=0.0, theta2=0.0):
    """Three-level ladder with level energies (0, delta1, delta2) and
    couplings 1-2 and 2-3."""
    c1 = omega1 * np.exp(1j * theta1)
    c2 = omega2 * np.exp(1j * theta2)
    return np.array(
        [[0.0, c1, 0.0], [np.conj(c1), delta1, c2], [0.0, np.conj(c2), delta2]],
        dtype=complex,
    )


def max_abs(a) -> float:
    return float(np.max(np.abs(a)))


def is_hermitian(H, tol=HERMITIAN_TOL) -> bool:
    H = np.asarray(H)
    return max_abs(H - H.conj().T) < tol * max(1.0, max_abs(H))


def is_unitary(U, tol=1e-12) -> bool:
    U = np.asarray(U)
    return max_abs(U.conj().T @ U - np.eye(U.shape[0])) < tol


def phase_distance(A, B) -> float:
    """``max|A - e^{i phi} B|`` at the phase that best aligns ``B`` with ``A``."""
    A = np.asarray(A)
    B = np.asarray(B)
    overlap = np.vdot(B, A)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return max_abs(A - phase * B)


def _check_square(H):
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] not in (2, 3):
        raise InvalidMatrix(f"expected a 2x2 or 3x3 matrix, got shape {H.shape}")
    return H


def expm_hermitian(H, t=1.0):
    """Return ``exp(-i H t)`` from the spectral decomposition of ``H``.

    Raises
    ------
    InvalidMatrix
        If ``H`` is not Hermitian.
    """
    H = _check_square(H)
    if not is_hermitian(H):
        raise InvalidMatrix("matrix is not hermitian")
    w, V = np.linalg.eigh(0.5 * (H + H.conj().T))
    return (V * np.exp(-1j * w * t)) @ V.conj().T


def expm_hermitian_batch(H, ts):
    """Stack of ``exp(-i H t)`` for every ``t`` in ``ts``; shape ``(len(ts), d, d)``."""
    H = _check_square(H)
    if not is_hermitian(H):
        raise InvalidMatrix("matrix is not hermitian")
    w, V = np.linalg.eigh(0.5 * (H + H.conj().T))
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    phases = np.exp(-1j * np.outer(ts, w))
    return np.einsum("ij,tj,kj->tik", V, phases, V.conj())


def su2_propagator(delta, omega, theta, t):
    """Two-level propagator with the global phase ``e^{-i delta t/2}`` removed.

    Also used for the kick operator (``t = 1``), where ``omega`` may be zero.
    """
    E = np.sqrt(omega**2 + delta**2 / 4.0)
    c = np.cos(E * t)
    # sin(E t)/E -> t as E -> 0
    sinc = np.sin(E * t) / E if E > 0 else float(t)
    off = -1j * omega * sinc
    return np.array(
        [
            [c + 0.5j * delta * sinc, off * np.exp(1j * theta)],
            [off * np.exp(-1j * theta), c - 0.5j * delta * sinc],
        ],
        dtype=complex,
    )


def propagator_two_level(sys, t):
    """Closed-form two-level propagator, global phase ``e^{-i Delta1 t/2}`` factored out.

    The result is in SU(2). Multiply by ``exp(-0.5j * sys.delta1 * t)`` to get
    ``exp(-i H1 t)`` exactly.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    return su2_propagator(sys.delta1, sys.omega1, sys.theta1, t)


def special_ladder_propagator(delta, omega, theta, t):
    """Closed-form propagator of the ladder with (Delta, 2 Delta, Omega, Omega, theta, theta),
    including the prefactor ``e^{-i Delta t}/E^2``."""
    E = np.hypot(delta, np.sqrt(2.0) * omega)
    if E < 1e-150:
        return np.eye(3, dtype=complex)
    # entries are written in the ratios delta/E and omega/E so that tiny
    # couplings do not underflow E^2
    a = delta / E
    b = omega / E
    c = np.cos(E * t)
    s = np.sin(E * t)
    e = np.exp(1j * theta)
    u11 = b**2 + (a**2 + b**2) * c + 1j * a * s
    u22 = a**2 + 2.0 * b**2 * c
    lower = b * (a - a * c - 1j * s)
    upper = b * (a * c - a - 1j * s)
    u13 = b**2 * e**2 * (c - 1.0)
    u = np.array(
        [
            [u11, e * lower, u13],
            [lower / e, u22, e * upper],
            [np.conj(u13), upper / e, np.conj(u11)],
        ],
        dtype=complex,
    )
    return np.exp(-1j * delta * t) * u


def propagator_three_level_special(sys, t):
    """Closed-form propagator of the special three-level ladder.

    ``sys`` needs ``delta1``, ``omega1``, ``theta1``; if it also carries
    ``delta2``/``omega2``/``theta2`` these must satisfy
    ``delta2 == 2*delta1``, ``omega2 == omega1`` and ``theta2 == theta1``.
    """
    if hasattr(sys, "delta2"):
        if not (
            sys.delta2 == 2 * sys.delta1
            and sys.omega2 == sys.omega1
            and sys.theta2 == sys.theta1
        ):
            raise NotSpecialCase(
                "special propagator needs delta2 = 2 delta1, omega2 = omega1, theta2 = theta1"
            )
    return special_ladder_propagator(sys.delta1, sys.omega1, sys.theta1, t)


def _clamp_unit(x, what):
    if abs(x) > 1.0 + CLAMP_TOL:
        raise NumericalDomain(f"{what} argument {x!r} outside [-1, 1]")
    return min(1.0, max(-1.0, x))


def _tridiagonal_eigvalsh(delta1, delta2, omega1, omega2):
    return np.linalg.eigvalsh(
        np.array([[0.0, omega1, 0.0], [omega1, delta1, omega2], [0.0, omega2, delta2]])
    )


def ladder_eigenvalues(delta1, delta2, omega1, omega2):
    """Trigonometric solution of the ladder's characteristic cubic.

    Returned in the order of the phase offsets 0, 2pi/3, 4pi/3.
    """
    s = delta1 + delta2
    p = delta1 * delta2 - omega1**2 - omega2**2 - s**2 / 3.0
    q = (
        delta2 * omega1**2
        + s * (delta1 * delta2 - omega1**2 - omega2**2) / 3.0
        - 2.0 * s**3 / 27.0
    )
    if p >= 0.0:
        # p == 0 only for a scalar Hamiltonian
        return np.full(3, s / 3.0)
    scale = max(abs(delta1), abs(delta2), omega1, omega2, 1.0)
    if -p < 1e-24 * scale**2:
        # nearly scalar: the arccos argument would overflow; keep the
        # offset order, which is largest, smallest, middle
        w = _tridiagonal_eigvalsh(delta1, delta2, omega1, omega2)
        return w[[2, 0, 1]]
    arg = _clamp_unit(-0.5 * q * (-p / 3.0) ** -1.5, "arccos")
    u = np.arccos(arg) / 3.0
    offsets = np.array([0.0, 2.0 * np.pi / 3.0, 4.0 * np.pi / 3.0])
    roots = s / 3.0 + np.sqrt(-4.0 * p / 3.0) * np.cos(u + offsets)
    # arccos near +-1 resolves a close pair only to sqrt(eps); the phases drop
    # out of the spectrum, so a real tridiagonal eigensolve recovers it
    gaps = np.abs(roots - np.roll(roots, 1))
    if gaps.min() < 1e-4 * scale:
        exact = _tridiagonal_eigvalsh(delta1, delta2, omega1, omega2)
        order = np.argsort(roots)
        roots[order] = exact
    return roots


def _null_vector(A, scale):
    rows = [A[0], A[1], A[2]]
    best = None
    best_norm = 0.0
    for i, j in ((0, 1), (0, 2), (1, 2)):
        c = np.cross(rows[i], rows[j])
        n = np.linalg.norm(c)
        if n > best_norm:
            best, best_norm = c, n
    if best is None or best_norm < 1e-14 * scale**2:
        return None
    return best / best_norm


def _eigh_in_order(H, energies):
    w, V = np.linalg.eigh(H)
    order = np.argsort(np.argsort(energies))
    return [(float(w[k]), V[:, k]) for k in order]


def eig_three_level(sys):
    """Eigenpairs of the general three-level ladder Hamiltonian.

    Eigenvalues come from the trigonometric cubic solution and eigenvectors
    from the closed-form ansatz
    ``[Omega1 e^{i theta1}(E - Delta2), E(E - Delta2), Omega2 e^{-i theta2} E]``.
    When that vector vanishes (decoupled levels, two-photon resonance) the
    null vector of ``H - E`` is built from cross products of its rows.
    Spectra with a relative gap below 1e-6 are handed to ``numpy.linalg.eigh``.

    Returns
    -------
    list of (float, ndarray)
        ``(E_n, |E_n>)`` in the order of the phase offsets 0, 2pi/3, 4pi/3.
    """
    d1, d2 = sys.delta1, sys.delta2
    o1, o2 = sys.omega1, sys.omega2
    t1, t2 = getattr(sys, "theta1", 0.0), getattr(sys, "theta2", 0.0)
    H = ladder_hamiltonian(d1, d2, o1, o2, t1, t2)
    scale = max(1.0, max_abs(H))
    energies = ladder_eigenvalues(d1, d2, o1, o2)

    # near-degenerate spectra: the closed forms lose accuracy, use eigh
    gaps = np.abs(energies - np.roll(energies, 1))
    if gaps.min() < 1e-6 * scale:
        return _eigh_in_order(H, energies)

    vecs = []
    for E in energies:
        v = np.array(
            [o1 * np.exp(1j * t1) * (E - d2), E * (E - d2), o2 * np.exp(-1j * t2) * E],
            dtype=complex,
        )
        norm = np.linalg.norm(v)
        if norm <= 1e-6 * scale**2:
            v = _null_vector(H - E * np.eye(3), scale)
            if v is None:
                return _eigh_in_order(H, energies)
            norm = 1.0
        vecs.append(v / norm)
    return [(float(E), v) for E, v in zip(energies, vecs)]


def unitary_log_traceless(U, T):
    """Traceless Hermitian ``H`` with ``exp(-i H T) = U e^{i phi}``.

    Eigenphases of ``U`` are taken on the principal branch ``(-pi, pi]``.

    Raises
    ------
    InvalidMatrix
        ``U`` is not unitary or ``T <= 0``.
    BranchAmbiguity
        An eigenphase sits at ``+-pi``.
    """
    U = _check_square(U)
    if T <= 0:
        raise InvalidMatrix("period must be positive")
    if not is_unitary(U, UNITARY_TOL):
        raise InvalidMatrix("matrix is not unitary")
    tri, Z = schur(U, output="complex")
    phases = np.angle(np.diag(tri))
    if np.any(np.abs(phases) > np.pi - 1e-12):
        raise BranchAmbiguity("eigenphase at +-pi; logarithm branch is ambiguous")
    H = -(Z * phases) @ Z.conj().T / T
    H = 0.5 * (H + H.conj().T)
    d = H.shape[0]
    return H - np.trace(H).real / d * np.eye(d)
