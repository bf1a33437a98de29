"""Independent reference implementations used to derive expected values."""

import numpy as np


def faddeev_leverrier(A):
    """Characteristic polynomial coefficients of ``A`` (highest degree first)."""
    n = A.shape[0]
    coeffs = [1.0 + 0j]
    M = np.zeros_like(A)
    eye = np.eye(n)
    for k in range(1, n + 1):
        M = A @ M + coeffs[-1] * eye
        coeffs.append(-np.trace(A @ M) / k)
    return np.array(coeffs)


def durand_kerner(coeffs, iters=2000, tol=1e-15):
    """All roots of a monic polynomial by simultaneous iteration."""
    c = np.asarray(coeffs, dtype=complex) / coeffs[0]
    n = c.size - 1
    z = (0.4 + 0.9j) ** np.arange(n) * (1 + np.abs(c).max())
    for _ in range(iters):
        num = np.polyval(c, z)
        den = np.prod(z[:, None] - z[None, :] + np.eye(n), axis=1)
        step = num / den
        z = z - step
        if np.abs(step).max() < tol * max(1.0, np.abs(z).max()):
            break
    return z


def char_poly_roots(A):
    return durand_kerner(faddeev_leverrier(np.asarray(A, dtype=complex)))


def schatten_via_gram(A, p):
    """Schatten norm from the eigenvalues of ``A^* A``."""
    ev = np.clip(np.linalg.eigvalsh(A.conj().T @ A), 0, None)
    return float(np.sum(ev ** (p / 2)) ** (1 / p))


def rayleigh_samples(A, n, rng):
    """Random points ``<A x, x>`` of the numerical range."""
    X = rng.standard_normal((n, A.shape[0])) + 1j * rng.standard_normal((n, A.shape[0]))
    X /= np.linalg.norm(X, axis=1, keepdims=True)
    return np.einsum("ki,ij,kj->k", X.conj(), A, X)


def free_resolvent_truncated(lam, N):
    """``(lam - J0)^{-1}`` on ``-N..N`` by a dense solve."""
    n = 2 * N + 1
    J0 = np.eye(n, k=1) + np.eye(n, k=-1)
    return np.linalg.inv(lam * np.eye(n) - J0)


def single_site_eigenvalues(b0):
    """Eigenvalues of ``J0 + b0 delta_0``: ``l = w + 1/w`` with ``1/w - w = b0``, ``|w| < 1``."""
    w = np.roots([1, b0, -1])
    w = w[np.abs(w) < 1 - 1e-12]
    return w + 1 / w


def rect_sum(h, r, n=200000):
    """Circle mean of ``log|h|`` by the rectangle rule (spectrally accurate for smooth h)."""
    t = 2 * np.pi * np.arange(n) / n
    return float(np.mean(np.log(np.abs(h(r * np.exp(1j * t))))))
