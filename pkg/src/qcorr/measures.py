"""Closed-form (non-optimized) correlation functionals.

All entropies are in bits (base-2 logarithms).  Relative entropy reports a
support violation as a tagged +inf sentinel rather than letting float
infinities leak into arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .bases import ProductBasisPoint
from .errors import BasisError, DimensionError, StateValidationError
from .states import MultipartiteState, Partition

LOG2 = math.log(2.0)

#: Squared-overlap threshold between ρ's support and σ's kernel above which
#: S(ρ||σ) is declared infinite.  Far above the 1e-12 eigenvalue clip, so
#: genuine rank deficiency is separated from eigensolver noise.
SUPPORT_TOL = 1e-8


@dataclass(frozen=True)
class EntropyValue:
    """An entropy in bits, with an explicit infinite-value flag."""

    value: float
    support_violation: bool = False

    @property
    def finite(self) -> bool:
        return not self.support_violation

    def __float__(self) -> float:
        return math.inf if self.support_violation else self.value


def _rho_of(s) -> np.ndarray:
    return s.rho if isinstance(s, MultipartiteState) else linalg.as_matrix(s)


def shannon_entropy(p, clip_eps: float = linalg.CLIP_EPS) -> float:
    """Base-2 Shannon entropy of a probability vector (0·log 0 = 0)."""
    p = np.asarray(p, dtype=float)
    if p.min() < -1e-12:
        raise DimensionError(f"negative probability {p.min():.3e}")
    p = np.where(p < clip_eps, 0.0, p)
    total = p.sum()
    if abs(total - 1.0) > 1e-9:
        raise DimensionError(f"probabilities sum to {total}, not 1")
    p = p / total
    pos = p[p > 0]
    return float(-np.sum(pos * np.log2(pos)))


def binary_entropy(p: float) -> float:
    """H(p, 1−p) in bits."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * math.log2(p) - (1 - p) * math.log2(1 - p))


def von_neumann_entropy(s, clip_eps: float = linalg.CLIP_EPS) -> EntropyValue:
    """S(ρ) = −Tr[ρ log₂ ρ] over the clipped spectrum."""
    rho = _rho_of(s)
    w, _ = linalg.hermitian_eig(rho)
    w = linalg.clip_spectrum(w, clip_eps)
    pos = w[w > 0]
    return EntropyValue(float(-np.sum(pos * np.log2(pos))))


def relative_entropy(rho_s, sigma_s, clip_eps: float = linalg.CLIP_EPS) -> EntropyValue:
    """S(ρ||σ) = Tr[ρ log₂ρ − ρ log₂σ]; +inf sentinel on support violation."""
    rho = _rho_of(rho_s)
    sigma = _rho_of(sigma_s)
    if rho.shape != sigma.shape:
        raise DimensionError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    ws, vs = linalg.hermitian_eig(sigma)
    ws = linalg.clip_spectrum(ws, clip_eps)
    kernel = vs[:, ws == 0]
    if kernel.shape[1]:
        # Weight of ρ inside σ's kernel.
        leak = float(np.real(np.trace(kernel.conj().T @ rho @ kernel)))
        if leak >= SUPPORT_TOL:
            return EntropyValue(math.inf, support_violation=True)
    wr, _ = linalg.hermitian_eig(rho)
    wr = linalg.clip_spectrum(wr, clip_eps)
    pos_r = wr[wr > 0]
    tr_rho_log_rho = float(np.sum(pos_r * np.log2(pos_r)))
    support = ws > 0
    diag = np.real(np.einsum("ik,ij,jk->k", vs.conj(), rho, vs))[support]
    tr_rho_log_sigma = float(np.sum(diag * np.log2(ws[support])))
    return EntropyValue(tr_rho_log_rho - tr_rho_log_sigma)


def block_entropies(s: MultipartiteState, part: Partition) -> list[float]:
    return [von_neumann_entropy(s.reduced(b)).value for b in part.blocks]


def total_mutual_information(s: MultipartiteState, part: Partition) -> float:
    """T = Σ_blocks S(ρ_block) − S(ρ) on the parties covered by the partition.

    Blocks are composite parties: T(AB:C) and T(A:B:C) are distinct.
    Parties outside the partition are traced out first.
    """
    sub = s if part.parties == tuple(range(s.n_parties)) else s.reduced(part.parties)
    # Partition indices relative to the reduced state.
    pos = {p: i for i, p in enumerate(part.parties)}
    rel = Partition(tuple(tuple(pos[p] for p in b) for b in part.blocks))
    joint = von_neumann_entropy(sub).value
    return sum(block_entropies(sub, rel)) - joint


def _contiguous_form(s: MultipartiteState, part: Partition):
    """Reduce to the partition's parties and permute blocks to be contiguous.

    Returns (rho, block_dims, inverse_order) where ``inverse_order`` restores
    the original party order of the reduced state.
    """
    sub = s if part.parties == tuple(range(s.n_parties)) else s.reduced(part.parties)
    pos = {p: i for i, p in enumerate(part.parties)}
    order = [pos[p] for b in part.blocks for p in b]
    rho = linalg.permute_parties(sub.rho, sub.dims, order)
    dims_perm = [sub.dims[i] for i in order]
    block_dims = tuple(int(np.prod([s.dims[p] for p in b])) for b in part.blocks)
    inverse = np.argsort(order).tolist()
    return rho, dims_perm, block_dims, inverse


def basis_diagonal(s: MultipartiteState, part: Partition,
                   basis: ProductBasisPoint) -> np.ndarray:
    """Probabilities ⟨k|ρ|k⟩ of ρ in the product basis of the partition."""
    rho, _, block_dims, _ = _contiguous_form(s, part)
    if tuple(basis.block_dims) != block_dims:
        raise BasisError(
            f"basis block dims {basis.block_dims} do not match partition {block_dims}")
    u = basis.full_unitary()
    return np.real(np.einsum("ik,ij,jk->k", u.conj(), rho, u))


def lambda_functional(s: MultipartiteState, part: Partition,
                      basis: ProductBasisPoint) -> float:
    """Shannon entropy of the diagonal of ρ in a product basis."""
    d = basis_diagonal(s, part, basis)
    return shannon_entropy(np.clip(d, 0.0, None))


def dephase(s: MultipartiteState, part: Partition,
            basis: ProductBasisPoint) -> MultipartiteState:
    """Σ_k ⟨k|ρ|k⟩ |k⟩⟨k| in the given product basis (original party order)."""
    rho, dims_perm, block_dims, inverse = _contiguous_form(s, part)
    if tuple(basis.block_dims) != block_dims:
        raise BasisError(
            f"basis block dims {basis.block_dims} do not match partition {block_dims}")
    u = basis.full_unitary()
    d = np.real(np.einsum("ik,ij,jk->k", u.conj(), rho, u))
    d = np.clip(d, 0.0, None)
    d = d / d.sum()
    chi = (u * d) @ u.conj().T
    chi = linalg.permute_parties(chi, dims_perm, inverse)
    dims = tuple(s.dims[p] for p in part.parties)
    return MultipartiteState(dims, linalg.hermitize(chi), "dephased")


def is_classical(chi: MultipartiteState, part: Partition,
                 basis: ProductBasisPoint | None = None, tol: float = 1e-8) -> bool:
    """Check χ is diagonal in a product basis of the partition blocks.

    With an explicit basis this is exact.  Without one, χ is compared to its
    dephasing in the product of its block-marginal eigenbases, which covers
    every classical state whose block marginals are non-degenerate, plus any
    state that happens to be invariant anyway (e.g. dephased GHZ).
    """
    if basis is not None:
        return float(np.max(np.abs(chi.rho - dephase(chi, _self_partition(chi, part), basis).rho))) <= tol
    rel = _self_partition(chi, part)
    frames = []
    for b in rel.blocks:
        _, v = linalg.hermitian_eig(chi.reduced(b).rho)
        frames.append(v)
    bp = ProductBasisPoint(tuple(int(np.prod([chi.dims[p] for p in b])) for b in rel.blocks),
                           tuple(frames))
    return float(np.max(np.abs(chi.rho - dephase(chi, rel, bp).rho))) <= tol


def _self_partition(chi: MultipartiteState, part: Partition) -> Partition:
    """Re-index a partition of the original state onto χ's own parties."""
    if part.parties == tuple(range(chi.n_parties)):
        return part
    pos = {p: i for i, p in enumerate(part.parties)}
    return Partition(tuple(tuple(pos[p] for p in b) for b in part.blocks))


def classical_correlation(s: MultipartiteState, part: Partition,
                          chi: MultipartiteState,
                          basis: ProductBasisPoint | None = None) -> float:
    """C = S(χ||closest product state) = T(χ) over the partition blocks.

    χ must be the closest classically correlated state to ``s`` for this
    partition (as produced by the discord optimizer); the closest product
    state to χ is the product of its block marginals.
    """
    rel = _self_partition(chi, part)
    if tuple(int(np.prod([chi.dims[p] for p in b])) for b in rel.blocks) != \
            tuple(int(np.prod([s.dims[p] for p in b])) for b in part.blocks):
        raise StateValidationError("chi does not match the partition's block dimensions")
    if not is_classical(chi, part, basis):
        raise StateValidationError("chi is not classical for this partition")
    return total_mutual_information(chi, rel)
