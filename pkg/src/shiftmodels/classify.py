"""Classification of structured operators.

The central Hermitian form is the defect  T*T*TT - 2 T*T + Id  (written on
vectors: ||T^2 x||^2 - 2 ||Tx||^2 + ||x||^2).  An operator is concave when
the form is negative semidefinite, a 2-contraction when it is positive
semidefinite, and a 2-isometry when it vanishes; the 2-isometries are exactly
the concave 2-contractions, and the report keeps those flags consistent by
deriving all three from the same spectral data.

Shift weights give closed forms: the defect acts diagonally with scalar
d_k = w_k^2 w_{k+1}^2 - 2 w_k^2 + 1, so semidefiniteness reduces to the range
of d_k, finitely checkable for eventually constant weights and exact for the
named laws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import NotConcave, UnsupportedRegime
from .numkit import (
    ComplexMatrix,
    hermitian_max_eig,
    hermitian_min_eig,
    null_space_basis,
    singular_values,
    two_norm,
)
from .operators import (
    Dense,
    DirectSum,
    FiniteSupportVector,
    Shift,
    StructuredOperator,
    apply,
)

__all__ = [
    "ClassificationReport",
    "GeneratorConcavity",
    "classify_operator",
    "generator_concavity_criterion",
    "concave_power_growth_check",
]


@dataclass(frozen=True)
class ClassificationReport:
    """Verdicts with the margins that produced them.

    concavity_defect    largest eigenvalue of the defect form (<= tol: concave)
    contraction_margin  smallest eigenvalue of the defect form (>= -tol: 2-contraction)
    isometry_defect     spectral bound of the defect form (<= tol: 2-isometry)
    lower_bound         greatest C with ||Tx|| >= C ||x|| (numerically: sigma_min)
    """

    regime: str
    bounded_below: bool
    lower_bound: float
    concave: bool
    concavity_defect: float
    two_contraction: bool
    contraction_margin: float
    two_isometry: bool
    isometry_defect: float
    pure: bool
    pure_method: str
    wandering: bool
    wandering_method: str


@dataclass(frozen=True)
class GeneratorConcavity:
    """Result of the generator-side concavity criterion."""

    satisfied: bool
    margin: float


def _report_from_defect_range(
    regime: str,
    d_inf: float,
    d_sup: float,
    bounded_below: bool,
    lower_bound: float,
    pure: bool,
    pure_method: str,
    wandering: bool,
    wandering_method: str,
    tol: ToleranceConfig,
) -> ClassificationReport:
    concave = d_sup <= tol.psd_tol
    two_contraction = d_inf >= -tol.psd_tol
    isometry_defect = max(abs(d_inf), abs(d_sup))
    return ClassificationReport(
        regime=regime,
        bounded_below=bounded_below,
        lower_bound=lower_bound,
        concave=concave,
        concavity_defect=d_sup,
        two_contraction=two_contraction,
        contraction_margin=d_inf,
        two_isometry=concave and two_contraction,
        isometry_defect=isometry_defect,
        pure=pure,
        pure_method=pure_method,
        wandering=wandering,
        wandering_method=wandering_method,
    )


def _classify_dense(T: Dense, tol: ToleranceConfig) -> ClassificationReport:
    arr = T.matrix.array
    n = arr.shape[0]
    gram = arr.conj().T @ arr
    sq = arr @ arr
    defect = sq.conj().T @ sq - 2.0 * gram + np.eye(n, dtype=np.complex128)
    d_sup = hermitian_max_eig(defect, tol)
    d_inf = hermitian_min_eig(defect, tol)

    s = singular_values(arr)
    sigma_min = float(s[-1]) if s.size else 0.0
    bounded_below = bool(s.size and s[0] > 0.0 and s[-1] > tol.rank_tol * s[0])

    # purity = nilpotency: the normalized n-th power must vanish
    norm = two_norm(arr)
    if norm == 0.0:
        pure = True
        pure_residual = 0.0
    else:
        power = np.linalg.matrix_power(arr / norm, n)
        pure_residual = two_norm(power)
        pure = pure_residual <= tol.rank_tol
    pure_method = f"nilpotency residual of normalized {n}-th power = {pure_residual:.3e}"

    # wandering subspace: iterates of the defect space must fill the ambient
    defect_basis = null_space_basis(arr.conj().T, tol)
    if defect_basis.shape[1] == 0:
        wandering = n == 0
        span_dim = 0
    else:
        blocks = [defect_basis]
        current = defect_basis
        for _ in range(n - 1):
            current = arr @ current
            col_norms = np.linalg.norm(current, axis=0)
            col_norms[col_norms == 0.0] = 1.0
            current = current / col_norms
            blocks.append(current)
        stacked = np.hstack(blocks)
        sv = np.linalg.svd(stacked, compute_uv=False)
        span_dim = int(np.count_nonzero(sv > tol.rank_tol * sv[0])) if sv.size and sv[0] > 0 else 0
        wandering = span_dim == n
    wandering_method = f"defect iterates span {span_dim} of {n} dimensions"

    return _report_from_defect_range(
        "dense",
        d_inf,
        d_sup,
        bounded_below,
        sigma_min,
        pure,
        pure_method,
        wandering,
        wandering_method,
        tol,
    )


def _classify_shift(T: Shift, tol: ToleranceConfig) -> ClassificationReport:
    d_inf, d_sup = T.weights.defect_range()
    return _report_from_defect_range(
        "shift",
        d_inf,
        d_sup,
        True,
        T.weights.inf(),
        True,
        "shift structure: intersection of ranges of powers is trivial",
        True,
        "shift structure: defect iterates span by construction",
        tol,
    )


def classify_operator(
    T: StructuredOperator, tol: ToleranceConfig = DEFAULT_TOL
) -> ClassificationReport:
    """Classify a structured operator; direct sums combine their parts."""
    if isinstance(T, Dense):
        return _classify_dense(T, tol)
    if isinstance(T, Shift):
        return _classify_shift(T, tol)
    if isinstance(T, DirectSum):
        reports = [classify_operator(p, tol) for p in T.parts]
        d_sup = max(r.concavity_defect for r in reports)
        d_inf = min(r.contraction_margin for r in reports)
        return _report_from_defect_range(
            "direct_sum",
            d_inf,
            d_sup,
            all(r.bounded_below for r in reports),
            min(r.lower_bound for r in reports),
            all(r.pure for r in reports),
            "all parts pure" if all(r.pure for r in reports) else "some part is not pure",
            all(r.wandering for r in reports),
            "all parts wandering" if all(r.wandering for r in reports) else "some part is not wandering",
            tol,
        )
    raise UnsupportedRegime(f"cannot classify operator of type {type(T).__name__}")


def generator_concavity_criterion(
    A: ComplexMatrix, tol: ToleranceConfig = DEFAULT_TOL
) -> GeneratorConcavity:
    """Generator-side test: Re<A^2 y, y> + ||Ay||^2 <= 0 for all y.

    The quadratic form is the Hermitian matrix sym(A^2) + A*A; the criterion
    holds exactly when its largest eigenvalue is nonpositive (at psd_tol).
    """
    arr = A.array
    sq = arr @ arr
    form = (sq + sq.conj().T) / 2.0 + arr.conj().T @ arr
    margin = hermitian_max_eig(form, tol)
    return GeneratorConcavity(satisfied=margin <= tol.psd_tol, margin=margin)


def concave_power_growth_check(
    T: StructuredOperator,
    x: FiniteSupportVector,
    N: int,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> bool:
    """Linear growth bound ||T^n x||^2 <= ||x||^2 + n (||Tx||^2 - ||x||^2).

    Requires a concave operator (concavity makes n -> ||T^n x||^2 concave, so
    its increments are dominated by the first one); checked for n = 1 .. N
    with residual_tol slack.
    """
    report = classify_operator(T, tol)
    if not report.concave:
        raise NotConcave(
            f"power growth bound needs a concave operator (defect {report.concavity_defect:.3e})"
        )
    base = x.norm() ** 2
    current = apply(T, x)
    first = current.norm() ** 2
    slope = first - base
    for n in range(1, N + 1):
        if n > 1:
            current = apply(T, current)
        value = current.norm() ** 2
        if value > base + n * slope + tol.residual_tol:
            return False
    return True
