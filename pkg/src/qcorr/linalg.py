"""Dense complex linear algebra kernel for small multipartite operators.

Everything here works on plain numpy arrays (row-major, complex128).
System sizes in this package never exceed dimension 8, so no sparse or
blocked paths are provided.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DimensionError, DomainError, NumericalError

#: Default eigenvalue clip threshold.  Eigenvalues of density operators that
#: fall below this (including small negatives from roundoff) are treated as
#: exactly zero.  This is the single sanctioned way of handling numerically
#: negative eigenvalues in the package.
CLIP_EPS = 1e-12

HERMITICITY_TOL = 1e-9


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise DimensionError("matrix contains NaN/Inf entries")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return m.conj().T


def hermitize(m: np.ndarray) -> np.ndarray:
    """Hermitian part (m + m†)/2."""
    return (m + m.conj().T) / 2


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(mats: Iterable[np.ndarray]) -> np.ndarray:
    out = None
    for m in mats:
        out = np.asarray(m, dtype=complex) if out is None else np.kron(out, m)
    if out is None:
        raise DimensionError("kron_all of an empty sequence")
    return out


def permute_parties(m: np.ndarray, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of an operator on ``⊗_i C^{dims[i]}``.

    ``order[k]`` is the original party index that ends up in slot ``k``.
    """
    m = as_matrix(m)
    dims = list(dims)
    n = len(dims)
    if sorted(order) != list(range(n)):
        raise DimensionError(f"order {order} is not a permutation of 0..{n - 1}")
    t = m.reshape(dims + dims)
    perm = list(order) + [n + p for p in order]
    t = t.transpose(perm)
    d = int(np.prod(dims))
    return t.reshape(d, d)


def partial_trace(m, dims: Sequence[int], keep) -> np.ndarray:
    """Trace out all parties not in ``keep``; party order is preserved.

    ``dims`` are the local dimensions in tensor order, ``keep`` the indices
    of the parties to retain.
    """
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    n = len(dims)
    d_total = int(np.prod(dims))
    if m.shape != (d_total, d_total):
        raise DimensionError(
            f"matrix shape {m.shape} does not match dims {dims} (product {d_total})")
    keep = sorted(set(int(k) for k in keep))
    if not keep or any(k < 0 or k >= n for k in keep):
        raise DimensionError(f"keep={keep} is not a nonempty subset of parties 0..{n - 1}")
    t = m.reshape(dims + dims)
    # Trace out discarded parties one at a time, highest index first.
    traced = [p for p in range(n) if p not in keep]
    for p in sorted(traced, reverse=True):
        nleft = t.ndim // 2
        t = np.trace(t, axis1=p, axis2=nleft + p)
    d_keep = int(np.prod([dims[k] for k in keep]))
    return t.reshape(d_keep, d_keep)


def hermitian_eig(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a (nearly) Hermitian matrix.

    Returns ``(eigenvalues ascending, eigenvector columns)``.  The input is
    symmetrized first; deviations from Hermiticity beyond 1e-9 raise.
    """
    m = as_matrix(m)
    dev = np.max(np.abs(m - m.conj().T))
    if dev > HERMITICITY_TOL:
        raise DimensionError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    h = hermitize(m)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - eigh rarely fails at dim 8
        raise NumericalError(f"eigendecomposition did not converge: {exc}") from exc
    return w, v


def apply_spectral(m, f: Callable[[np.ndarray], np.ndarray],
                   clip_eps: float = CLIP_EPS,
                   zero_value: float | None = None) -> np.ndarray:
    """Apply a real function to the spectrum of a Hermitian PSD matrix.

    Eigenvalues below ``clip_eps`` are treated as exactly zero.  If
    ``zero_value`` is given it is used as f(0) (e.g. 0.0 for log, realizing
    the 0·log 0 = 0 convention at the level of spectral support); otherwise
    f is evaluated at 0 directly.
    """
    w, v = hermitian_eig(m)
    w = np.where(w < clip_eps, 0.0, w)
    fw = np.empty_like(w)
    pos = w > 0
    with np.errstate(divide="raise", invalid="raise"):
        try:
            fw[pos] = f(w[pos])
            if zero_value is not None:
                fw[~pos] = zero_value
            else:
                fw[~pos] = f(w[~pos])
        except FloatingPointError as exc:
            raise DomainError(f"spectral function undefined on clipped spectrum: {exc}") from exc
    if not np.all(np.isfinite(fw)):
        raise DomainError("spectral function produced non-finite values")
    return (v * fw) @ v.conj().T


def clip_spectrum(w: np.ndarray, clip_eps: float = CLIP_EPS) -> np.ndarray:
    """Zero out eigenvalues below the clip threshold."""
    return np.where(w < clip_eps, 0.0, w)
