"""Independent reference computations for the test-suite.

Nothing here imports the package; every routine is a brute-force route
(Taylor series, scipy expm, polynomial roots, explicit time stepping).
"""
import numpy as np
from scipy.linalg import expm


def taylor_expm(A, terms=40):
    """exp(A) by scaling-and-squaring around a plain Taylor series."""
    A = np.asarray(A, dtype=complex)
    s = max(0, int(np.ceil(np.log2(max(np.abs(A).sum(axis=1).max(), 1e-300)))) + 1)
    B = A / 2**s
    out = np.eye(A.shape[0], dtype=complex)
    term = np.eye(A.shape[0], dtype=complex)
    for k in range(1, terms + 1):
        term = term @ B / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def h2(delta, omega, theta):
    return np.array([[0, omega * np.exp(1j * theta)], [omega * np.exp(-1j * theta), delta]])


def h3(d1, d2, o1, o2, t1=0.0, t2=0.0):
    return np.array([
        [0, o1 * np.exp(1j * t1), 0],
        [o1 * np.exp(-1j * t1), d1, o2 * np.exp(1j * t2)],
        [0, o2 * np.exp(-1j * t2), d2],
    ])


def ladder_char_roots(d1, d2, o1, o2):
    """Roots of det(E - H) for the ladder, from its characteristic polynomial."""
    coeffs = [1.0, -(d1 + d2), d1 * d2 - o1**2 - o2**2, d2 * o1**2]
    return np.sort(np.roots(coeffs).real)


def period_unitary(H, M, T):
    return expm(-1j * M) @ expm(-1j * H * T)


def strobe_populations(H, M, T, n, psi0=None):
    """|<j|U^k psi0>|^2 for k = 0..n by repeated multiplication."""
    U = period_unitary(H, M, T)
    psi = np.zeros(H.shape[0], complex)
    psi[0] = 1
    if psi0 is not None:
        psi = np.asarray(psi0, complex)
    out = [np.abs(psi) ** 2]
    for _ in range(n):
        psi = U @ psi
        out.append(np.abs(psi) ** 2)
    return np.array(out)


def effective_populations(Heff, T, n, psi0=None):
    w, V = np.linalg.eigh(Heff)
    psi = np.zeros(Heff.shape[0], complex)
    psi[0] = 1
    if psi0 is not None:
        psi = np.asarray(psi0, complex)
    c = V.conj().T @ psi
    t = T * np.arange(n + 1)
    amps = (np.exp(-1j * np.outer(t, w)) * c) @ V.T
    return np.abs(amps) ** 2


def f_from_unitary(U):
    """Read (f1..f4) off exp(-iM)exp(-iHT) after removing its determinant phase."""
    W = U / np.sqrt(np.linalg.det(U))
    return W[0, 0].real, W[0, 0].imag, -W[0, 1].imag, W[0, 1].real, W


def dense_population_max(H, M, T, n_periods, samples, level):
    """max_t P_level(t) with free evolution sampled on a fine grid by expm."""
    steps = [expm(-1j * H * T * k / samples) for k in range(1, samples + 1)]
    K = expm(-1j * M)
    psi = np.zeros(H.shape[0], complex)
    psi[0] = 1
    best = abs(psi[level]) ** 2
    for _ in range(n_periods):
        for S in steps[:-1]:
            best = max(best, abs((S @ psi)[level]) ** 2)
        psi = K @ steps[-1] @ psi
        best = max(best, abs(psi[level]) ** 2)
    return best
