"""Tolerance configuration shared by every numeric check."""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class ToleranceConfig:
    """Named tolerances; all strictly positive.

    rank_tol      relative singular-value cutoff for rank decisions
    psd_tol       slack for semidefiniteness verdicts on Hermitian forms
    residual_tol  allowed residual for identities checked in floating point
    tail_tol      target bound for truncated series tails
    """

    rank_tol: float = 1e-10
    psd_tol: float = 1e-10
    residual_tol: float = 1e-9
    tail_tol: float = 1e-10

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if not (value > 0.0):
                raise ValueError(f"{f.name} must be strictly positive, got {value!r}")


DEFAULT_TOL = ToleranceConfig()
