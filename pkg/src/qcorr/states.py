"""Multipartite density operators: families, sampling, (de)serialization.

All named families live on three qubits (dims [2,2,2]), party order
A, B, C with A the leftmost tensor factor.  Family parameters are
squared-amplitude weights in [0, 1].
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .errors import DimensionError, FormatError, ParamError, StateValidationError

STATE_TOL = 1e-9

KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)
KET_PLUS = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2)
KET_MINUS = np.array([1.0, -1.0], dtype=complex) / math.sqrt(2)


def ket(*factors: np.ndarray) -> np.ndarray:
    """Tensor product of single-party vectors."""
    out = np.array([1.0], dtype=complex)
    for f in factors:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def projector(vec: np.ndarray) -> np.ndarray:
    v = np.asarray(vec, dtype=complex)
    return np.outer(v, v.conj())


@dataclass(frozen=True)
class MultipartiteState:
    """A density operator together with its local-dimension factorization."""

    dims: tuple[int, ...]
    rho: np.ndarray
    label: str = ""

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        rho = linalg.as_matrix(self.rho)
        object.__setattr__(self, "rho", rho)
        d = int(np.prod(dims))
        if rho.shape != (d, d):
            raise StateValidationError(
                f"matrix shape {rho.shape} does not match dims {dims}")
        if np.max(np.abs(rho - rho.conj().T)) > STATE_TOL:
            raise StateValidationError("density matrix is not Hermitian within 1e-9")
        tr = complex(np.trace(rho))
        if abs(tr - 1.0) > STATE_TOL:
            raise StateValidationError(f"trace {tr} differs from 1 beyond 1e-9")
        w = np.linalg.eigvalsh(linalg.hermitize(rho))
        if w.min() < -STATE_TOL:
            raise StateValidationError(
                f"negative eigenvalue {w.min():.3e} beyond tolerance")

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.dims))

    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))

    def is_pure(self, tol: float = 1e-9) -> bool:
        return self.purity() >= 1.0 - tol

    def reduced(self, keep: Sequence[int], label: str = "") -> "MultipartiteState":
        """Reduced state on the kept parties (original party order)."""
        keep = sorted(set(keep))
        sub = linalg.partial_trace(self.rho, self.dims, keep)
        sub = linalg.hermitize(sub)
        return MultipartiteState(tuple(self.dims[k] for k in keep), sub, label)


@dataclass(frozen=True)
class Partition:
    """Ordered grouping of party indices into disjoint blocks.

    Parties of the state that appear in no block are traced out before a
    measure is evaluated, so ``Partition`` doubles as a sub-system selector
    (e.g. A:B on a three-party state).
    """

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(p) for p in b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        flat = [p for b in blocks for p in b]
        if len(set(flat)) != len(flat):
            raise DimensionError(f"partition blocks overlap: {blocks}")
        if len(blocks) < 2:
            raise DimensionError("a correlation measure needs at least two blocks")

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse partition syntax like "A:B:C", "AB:C", "BC:A"."""
        blocks = []
        for chunk in text.strip().split(":"):
            chunk = chunk.strip()
            if not chunk:
                raise DimensionError(f"empty block in partition {text!r}")
            blocks.append(tuple(ord(c.upper()) - ord("A") for c in chunk))
        return cls(tuple(blocks))

    @property
    def parties(self) -> tuple[int, ...]:
        return tuple(sorted(p for b in self.blocks for p in b))

    def permuted(self, perm: Sequence[int]) -> "Partition":
        """Apply a relabeling: party p becomes perm[p]."""
        return Partition(tuple(tuple(perm[p] for p in b) for b in self.blocks))

    def __str__(self) -> str:
        return ":".join("".join(chr(ord("A") + p) for p in b) for b in self.blocks)


@dataclass(frozen=True)
class AcinParams:
    """Canonical five-amplitude form of a three-qubit pure state."""

    lambdas: tuple[float, float, float, float, float]
    phi: float = 0.0

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lambdas)
        object.__setattr__(self, "lambdas", lam)
        if any(x < 0 for x in lam):
            raise ParamError("amplitudes must be nonnegative")
        norm = sum(x * x for x in lam)
        if abs(norm - 1.0) > 1e-12:
            raise ParamError(f"sum of squared amplitudes is {norm}, not 1")


def from_acin(p: AcinParams) -> MultipartiteState:
    """|ψ⟩ = λ0|000⟩ + e^{iφ}λ1|100⟩ + λ2|101⟩ + λ3|110⟩ + λ4|111⟩."""
    l0, l1, l2, l3, l4 = p.lambdas
    psi = np.zeros(8, dtype=complex)
    psi[0b000] = l0
    psi[0b100] = l1 * np.exp(1j * p.phi)
    psi[0b101] = l2
    psi[0b110] = l3
    psi[0b111] = l4
    return MultipartiteState((2, 2, 2), projector(psi), "acin")


def _check_weight(params: Mapping[str, float], key: str, default=None) -> float:
    if key not in params:
        if default is not None:
            return default
        raise ParamError(f"missing family parameter {key!r}")
    v = float(params[key])
    if not (0.0 <= v <= 1.0):
        raise ParamError(f"parameter {key}={v} outside [0, 1]")
    return v


def _pure(psi: np.ndarray, label: str) -> MultipartiteState:
    n = np.linalg.norm(psi)
    if abs(n - 1.0) > 1e-9:
        raise ParamError(f"amplitudes not normalized (norm {n})")
    return MultipartiteState((2, 2, 2), projector(psi), label)


def named_state(family: str, params: Mapping[str, float] | None = None) -> MultipartiteState:
    """Construct one of the built-in three-qubit families.

    Families: ghz, ghz_general(alpha2), ghz_plus(p), w, w_general(alpha2
    [,beta2,gamma2]; beta2 defaults to (1-alpha2)/2), w_white(p),
    ghz_white(p), w_asym(p), counterexample(p).
    Parameters are squared-amplitude weights.
    """
    params = dict(params or {})
    fam = family.lower()
    eye8 = np.eye(8, dtype=complex) / 8.0
    if fam == "ghz":
        psi = (ket(KET0, KET0, KET0) + ket(KET1, KET1, KET1)) / math.sqrt(2)
        return _pure(psi, "ghz")
    if fam == "ghz_general":
        a2 = _check_weight(params, "alpha2")
        psi = math.sqrt(a2) * ket(KET0, KET0, KET0) + math.sqrt(1 - a2) * ket(KET1, KET1, KET1)
        return _pure(psi, f"ghz_general({a2})")
    if fam == "ghz_plus":
        # √p|000⟩ + √(1−p)|+11⟩
        p = _check_weight(params, "p")
        psi = math.sqrt(p) * ket(KET0, KET0, KET0) + math.sqrt(1 - p) * ket(KET_PLUS, KET1, KET1)
        return _pure(psi, f"ghz_plus({p})")
    if fam == "w":
        psi = (ket(KET0, KET0, KET1) + ket(KET0, KET1, KET0) + ket(KET1, KET0, KET0)) / math.sqrt(3)
        return _pure(psi, "w")
    if fam == "w_general":
        a2 = _check_weight(params, "alpha2")
        b2 = _check_weight(params, "beta2", default=(1.0 - a2) / 2.0)
        g2 = _check_weight(params, "gamma2", default=max(0.0, 1.0 - a2 - b2))
        if abs(a2 + b2 + g2 - 1.0) > 1e-9:
            raise ParamError(f"weights sum to {a2 + b2 + g2}, not 1")
        psi = (math.sqrt(a2) * ket(KET0, KET0, KET1)
               + math.sqrt(b2) * ket(KET0, KET1, KET0)
               + math.sqrt(g2) * ket(KET1, KET0, KET0))
        return _pure(psi, f"w_general({a2},{b2},{g2})")
    if fam == "w_white":
        # (1−p)|W⟩⟨W| + p·I/8
        p = _check_weight(params, "p")
        w = named_state("w")
        rho = (1 - p) * w.rho + p * eye8
        return MultipartiteState((2, 2, 2), rho, f"w_white({p})")
    if fam == "ghz_white":
        p = _check_weight(params, "p")
        g = named_state("ghz")
        rho = (1 - p) * g.rho + p * eye8
        return MultipartiteState((2, 2, 2), rho, f"ghz_white({p})")
    if fam == "w_asym":
        # (1−p)|W⟩⟨W| + (p/2)(|000⟩⟨000| + |1+1⟩⟨1+1|)
        p = _check_weight(params, "p")
        w = named_state("w")
        rho = ((1 - p) * w.rho
               + (p / 2) * projector(ket(KET0, KET0, KET0))
               + (p / 2) * projector(ket(KET1, KET_PLUS, KET1)))
        return MultipartiteState((2, 2, 2), rho, f"w_asym({p})")
    if fam == "counterexample":
        # p|000⟩⟨000| + (1−p)|1+1⟩⟨1+1|
        p = _check_weight(params, "p")
        rho = (p * projector(ket(KET0, KET0, KET0))
               + (1 - p) * projector(ket(KET1, KET_PLUS, KET1)))
        return MultipartiteState((2, 2, 2), rho, f"counterexample({p})")
    raise ParamError(f"unknown state family {family!r}")


def sample_random_pure(seed: int, method: str = "acin_uniform") -> MultipartiteState:
    """Seeded random three-qubit pure state.

    ``acin_uniform`` draws the squared canonical amplitudes uniformly on the
    4-simplex and the phase uniformly on [0, 2π); ``haar`` draws a normalized
    complex-Gaussian 8-vector.
    """
    rng = np.random.default_rng(seed)
    if method == "acin_uniform":
        lam2 = rng.dirichlet(np.ones(5))
        phi = rng.uniform(0.0, 2 * math.pi)
        return from_acin(AcinParams(tuple(np.sqrt(lam2)), phi))
    if method == "haar":
        z = rng.normal(size=8) + 1j * rng.normal(size=8)
        z /= np.linalg.norm(z)
        return MultipartiteState((2, 2, 2), projector(z), "haar")
    raise ParamError(f"unknown sampling method {method!r}")


def sample_random_mixed(seed: int, rank: int = 8) -> MultipartiteState:
    """Seeded random mixed three-qubit state of the given rank.

    Obtained as the partial trace of a Haar-random pure state on the system
    tensored with a rank-dimensional ancilla.
    """
    rank = int(rank)
    if not (1 <= rank <= 8):
        raise ParamError(f"rank {rank} outside 1..8")
    rng = np.random.default_rng(seed)
    z = rng.normal(size=8 * rank) + 1j * rng.normal(size=rank * 8)
    z /= np.linalg.norm(z)
    full = projector(z)
    rho = linalg.partial_trace(full, [8, rank], [0])
    rho = linalg.hermitize(rho)
    return MultipartiteState((2, 2, 2), rho, f"random_mixed(seed={seed},rank={rank})")


def save_state(state: MultipartiteState, path) -> None:
    """Write a state as JSON with ≥17 significant digits per real."""
    # json emits Python floats via repr, i.e. 17 significant digits.
    matrix = [[[float(z.real), float(z.imag)] for z in row] for row in state.rho]
    doc = {"dims": list(state.dims), "label": state.label, "matrix": matrix}
    with open(path, "w") as fh:
        json.dump(doc, fh)


def load_state(path) -> MultipartiteState:
    """Load a state file: full-matrix schema or named-family shorthand."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read state file {path}: {exc}") from exc
    return state_from_dict(doc)


def state_from_dict(doc) -> MultipartiteState:
    if not isinstance(doc, dict):
        raise FormatError("state document must be a JSON object")
    if "family" in doc:
        return named_state(doc["family"], doc.get("params", {}))
    try:
        dims = tuple(int(d) for d in doc["dims"])
        raw = doc["matrix"]
        label = str(doc.get("label", ""))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed state document: {exc}") from exc
    d = int(np.prod(dims))
    if len(raw) != d or any(len(row) != d for row in raw):
        raise FormatError(
            f"matrix is {len(raw)} rows but dims {dims} require {d}x{d}")
    try:
        rho = np.array([[complex(c[0], c[1]) for c in row] for row in raw])
    except (TypeError, IndexError) as exc:
        raise FormatError(f"matrix entries must be [re, im] pairs: {exc}") from exc
    return MultipartiteState(dims, rho, label)
