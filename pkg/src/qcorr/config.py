"""Shared optimizer configuration."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for the multi-start derivative-free searches.

    ``starts`` counts the random starts; the computational basis and the
    marginal-eigenbasis starts are always added on top.  ``tol`` is the
    per-start convergence tolerance on the objective.
    """

    starts: int = 20
    seed: int = 0
    tol: float = 1e-10
    max_iter: int = 2000
    cluster_value_tol: float = 1e-6
    cluster_state_tol: float = 1e-3
    #: Re-polish the winning start with a much tighter simplex so that the
    #: reported basis (not just the value) is accurate.
    tight_polish: bool = True
    #: Frank-Wolfe iterations for the separable-state estimator.
    ree_iters: int = 60
    #: Ensemble size headroom for the separable-state estimator; None means
    #: (total dimension)².
    ree_terms: int | None = None

    def with_(self, **kw) -> "OptimizerConfig":
        return replace(self, **kw)


FAST = OptimizerConfig(starts=4, tight_polish=False, ree_iters=20)
