"""Product-basis parameterization used by the discord optimizer.

A product basis assigns one orthonormal basis per partition block.  A
2-dimensional block uses two real coordinates (t, φ) via

    col0 = ( √(1−t²),  t·e^{iφ} )
    col1 = ( t,       −√(1−t²)·e^{iφ} )

which covers every basis up to irrelevant per-vector phases.  A
d-dimensional block uses d(d−1) reals parameterizing a chain of two-level
rotations with phases.  Parameters are accepted unconstrained: t is folded
into [0, 1] by reflection and phases are periodic, so the optimizer can
search over all of R^n without boundary kinks.

Each basis point may additionally carry a per-block "frame" unitary that
left-multiplies the parameterized unitary.  Deterministic optimizer starts
(computational basis, marginal eigenbasis) are frames with zero parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import BasisError

GRAM_TOL = 1e-10


def param_count(dim: int) -> int:
    """Number of real coordinates for one block of the given dimension."""
    return 2 if dim == 2 else dim * (dim - 1)


def fold_t(raw: float) -> float:
    """Reflect an unconstrained coordinate into [0, 1]."""
    t = math.fmod(abs(raw), 2.0)
    return 2.0 - t if t > 1.0 else t


def qubit_unitary(t_raw: float, phi: float) -> np.ndarray:
    t = fold_t(t_raw)
    c = math.sqrt(max(0.0, 1.0 - t * t))
    e = complex(math.cos(phi), math.sin(phi))
    return np.array([[c, t], [t * e, -c * e]], dtype=complex)


def block_unitary(dim: int, params: Sequence[float]) -> np.ndarray:
    """Unitary whose columns form the block basis."""
    params = np.asarray(params, dtype=float)
    if params.size != param_count(dim):
        raise BasisError(
            f"block of dim {dim} needs {param_count(dim)} parameters, got {params.size}")
    if dim == 2:
        return qubit_unitary(params[0], params[1])
    u = np.eye(dim, dtype=complex)
    k = 0
    for i, j in combinations(range(dim), 2):
        theta, phi = params[k], params[k + 1]
        k += 2
        c, s = math.cos(theta), math.sin(theta)
        e = complex(math.cos(phi), math.sin(phi))
        g = np.eye(dim, dtype=complex)
        g[i, i] = c
        g[i, j] = s * e
        g[j, i] = -s * np.conj(e)
        g[j, j] = c
        u = u @ g
    return u


def check_orthonormal(u: np.ndarray, tol: float = GRAM_TOL) -> None:
    gram = u.conj().T @ u
    dev = np.max(np.abs(gram - np.eye(u.shape[0])))
    if dev > tol:
        raise BasisError(f"basis not orthonormal (Gram deviation {dev:.3e})")


@dataclass(frozen=True)
class ProductBasisPoint:
    """One orthonormal basis per block, as unitary column matrices."""

    block_dims: tuple[int, ...]
    unitaries: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.block_dims) != len(self.unitaries):
            raise BasisError("one unitary per block required")
        for d, u in zip(self.block_dims, self.unitaries):
            u = np.asarray(u, dtype=complex)
            if u.shape != (d, d):
                raise BasisError(f"unitary shape {u.shape} does not match block dim {d}")
            check_orthonormal(u)

    @classmethod
    def computational(cls, block_dims: Sequence[int]) -> "ProductBasisPoint":
        dims = tuple(int(d) for d in block_dims)
        return cls(dims, tuple(np.eye(d, dtype=complex) for d in dims))

    @classmethod
    def from_params(cls, block_dims: Sequence[int], params: Sequence[float],
                    frames: Sequence[np.ndarray] | None = None) -> "ProductBasisPoint":
        dims = tuple(int(d) for d in block_dims)
        params = np.asarray(params, dtype=float)
        expected = sum(param_count(d) for d in dims)
        if params.size != expected:
            raise BasisError(f"expected {expected} parameters, got {params.size}")
        mats = []
        k = 0
        for b, d in enumerate(dims):
            n = param_count(d)
            u = block_unitary(d, params[k:k + n])
            k += n
            if frames is not None:
                u = np.asarray(frames[b], dtype=complex) @ u
            mats.append(u)
        return cls(dims, tuple(mats))

    def full_unitary(self) -> np.ndarray:
        """Kronecker product of the block unitaries (basis vectors as columns)."""
        out = np.array([[1.0 + 0j]])
        for u in self.unitaries:
            out = np.kron(out, u)
        return out


def split_params(block_dims: Sequence[int], params: Sequence[float]) -> list[np.ndarray]:
    params = np.asarray(params, dtype=float)
    out, k = [], 0
    for d in block_dims:
        n = param_count(d)
        out.append(params[k:k + n])
        k += n
    return out
