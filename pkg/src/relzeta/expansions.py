"""Asymptotic-expansion containers and the operator-pair contract fed to the zeta engine."""
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import DomainError

LAMBDA = "lambda"  # terms in (-lambda)**exponent * log(-lambda)**log_power
V_LOG = "v"        # terms in v**exponent * log(v)**log_power


@dataclass(frozen=True)
class ExpansionTerm:
    exponent: float
    log_power: int
    coefficient: float

    def __post_init__(self):
        if self.log_power < 0:
            raise DomainError("log_power must be >= 0")
        if not np.isfinite(self.coefficient):
            raise DomainError(f"non-finite coefficient at exponent {self.exponent}")


@dataclass(frozen=True)
class Expansion:
    """Ordered asymptotic expansion.

    ``order="decreasing"`` is the large-argument form (exponents run down),
    ``"increasing"`` the small-argument form.  Several terms may share an
    exponent when they differ in log power.
    """

    terms: Tuple[ExpansionTerm, ...] = ()
    convention: str = LAMBDA
    order: str = "decreasing"

    def __post_init__(self):
        terms = tuple(t if isinstance(t, ExpansionTerm) else ExpansionTerm(*t) for t in self.terms)
        object.__setattr__(self, "terms", terms)
        if self.order not in ("decreasing", "increasing"):
            raise DomainError(f"unknown order {self.order!r}")
        exps = [t.exponent for t in terms]
        pairs = list(zip(exps, exps[1:]))
        if self.order == "decreasing" and any(b > a for a, b in pairs):
            raise DomainError("large-argument exponents must not increase")
        if self.order == "increasing" and any(b < a for a, b in pairs):
            raise DomainError("small-argument exponents must not decrease")
        keys = [(t.exponent, t.log_power) for t in terms]
        if len(set(keys)) != len(keys):
            raise DomainError("duplicate (exponent, log_power) term")

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    @property
    def exponents(self):
        """Distinct exponents in expansion order."""
        out = []
        for t in self.terms:
            if not out or out[-1] != t.exponent:
                out.append(t.exponent)
        return out

    def coefficient(self, exponent, log_power=0):
        for t in self.terms:
            if t.exponent == exponent and t.log_power == log_power:
                return t.coefficient
        return 0.0

    def evaluate(self, x):
        """Sum the terms at ``x`` = (-lambda) or v, depending on the convention."""
        x = np.asarray(x, dtype=complex)
        lx = np.log(x)
        out = np.zeros_like(x)
        for t in self.terms:
            out = out + t.coefficient * x ** t.exponent * lx ** t.log_power
        return out


@dataclass(frozen=True)
class RelativeModel:
    """A pair (A, A0) as seen by the zeta engine.

    Parameters
    ----------
    trace : callable
        ``kappa -> r(-kappa**2)``, vectorised, for ``Re kappa >= 0``, ``kappa != 0``.
    small_lambda : Expansion
        Terms ``b_j (-lambda)**beta_j`` as lambda -> 0 (no logarithms).
    large_lambda : Expansion
        Terms ``a_jk (-lambda)**alpha_j log(-lambda)**k`` as lambda -> inf.
    name : str
    density : callable, optional
        Direct ``v -> e(v)``; overrides the branch-cut evaluation of ``trace``.
        Used for synthetic models.
    bound_states : tuple of float
        Known negative eigenvalues of A (empty when the spectrum is purely
        continuous).
    next_large_exponent : float, optional
        Exponent of the first large-lambda term *not* listed; tells the tail
        integrator how fast the subtracted residual decays.
    extended_large : Expansion, optional
        Further large-lambda terms beyond ``large_lambda``.  The engine uses
        them only to speed up tail integrals (they are subtracted and added
        back exactly), never to define poles.
    """

    trace: Callable
    small_lambda: Expansion = Expansion(order="increasing")
    large_lambda: Expansion = Expansion(order="decreasing")
    name: str = "model"
    density: Optional[Callable] = None
    bound_states: Tuple[float, ...] = ()
    next_large_exponent: Optional[float] = None
    extended_large: Optional[Expansion] = None
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.small_lambda.order != "increasing":
            raise DomainError("small-lambda expansion must be in increasing order")
        if self.large_lambda.order != "decreasing":
            raise DomainError("large-lambda expansion must be in decreasing order")
        if any(t.log_power for t in self.small_lambda):
            raise DomainError("small-lambda expansion may not carry logarithms")
        small = [t.exponent for t in self.small_lambda if t.coefficient != 0.0]
        large = [t.exponent for t in self.large_lambda if t.coefficient != 0.0]
        if small and small[0] < -1:
            raise DomainError(f"leading small-lambda exponent {small[0]} < -1")
        if small and large and not large[0] < small[0]:
            raise DomainError(
                f"leading large-lambda exponent {large[0]} must be below the leading "
                f"small-lambda exponent {small[0]}")

    @property
    def has_bound_state(self):
        return bool(self.bound_states)
