"""Truncated power series with the handful of exact recurrences the lab needs.

Coefficients are stored lowest degree first as a read-only complex array.
``series_exp`` uses the derivative recurrence g' = f' g and ``series_inv`` the
matching convolution recurrence; both are exact degree-by-degree statements,
so truncation order is the only approximation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import NonFinite, ZeroConstantTerm

__all__ = [
    "PowerSeries",
    "series_mul",
    "series_add",
    "series_scale",
    "series_shift_up",
    "series_exp",
    "series_inv",
    "series_eval",
]


@dataclass(frozen=True)
class PowerSeries:
    """Truncated power series; ``coeffs[k]`` is the z^k coefficient."""

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.asarray(self.coeffs, dtype=np.complex128)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError(f"series needs a nonempty 1-d coefficient array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
            raise NonFinite("series contains NaN or infinite coefficients")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    @classmethod
    def from_coefficients(cls, values: Sequence[complex]) -> "PowerSeries":
        return cls(np.array(list(values), dtype=np.complex128))

    @classmethod
    def constant(cls, value: complex, N: int = 0) -> "PowerSeries":
        arr = np.zeros(N + 1, dtype=np.complex128)
        arr[0] = value
        return cls(arr)

    @classmethod
    def geometric(cls, ratio: complex, N: int) -> "PowerSeries":
        return cls(np.power(complex(ratio), np.arange(N + 1)))

    def truncate(self, N: int) -> "PowerSeries":
        if N + 1 <= self.coeffs.size:
            return PowerSeries(self.coeffs[: N + 1])
        out = np.zeros(N + 1, dtype=np.complex128)
        out[: self.coeffs.size] = self.coeffs
        return PowerSeries(out)

    def to_json(self) -> list:
        return [[float(c.real), float(c.imag)] for c in self.coeffs]

    @classmethod
    def from_json(cls, data: list) -> "PowerSeries":
        try:
            return cls(np.array([complex(re, im) for re, im in data], dtype=np.complex128))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"malformed series coefficients: {exc}") from exc


def series_mul(f: PowerSeries, g: PowerSeries, N: int | None = None) -> PowerSeries:
    """Cauchy product truncated to degree N (default: max input order)."""
    order = max(f.order, g.order) if N is None else N
    full = np.convolve(f.coeffs, g.coeffs)
    return PowerSeries(full[: order + 1]).truncate(order)


def series_add(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    order = max(f.order, g.order)
    out = np.zeros(order + 1, dtype=np.complex128)
    out[: f.coeffs.size] += f.coeffs
    out[: g.coeffs.size] += g.coeffs
    return PowerSeries(out)


def series_scale(f: PowerSeries, c: complex) -> PowerSeries:
    return PowerSeries(c * f.coeffs)


def series_shift_up(f: PowerSeries) -> PowerSeries:
    """Multiply by z (degree grows by one)."""
    return PowerSeries(np.concatenate(([0.0 + 0.0j], f.coeffs)))


def series_exp(f: PowerSeries, N: int | None = None) -> PowerSeries:
    """exp(f) via the derivative recurrence n g_n = sum_k k f_k g_{n-k}."""
    order = f.order if N is None else N
    fc = f.truncate(order).coeffs
    out = np.zeros(order + 1, dtype=np.complex128)
    out[0] = np.exp(fc[0])
    for n in range(1, order + 1):
        acc = 0.0 + 0.0j
        for k in range(1, n + 1):
            acc += k * fc[k] * out[n - k]
        out[n] = acc / n
    return PowerSeries(out)


def series_inv(f: PowerSeries, N: int | None = None) -> PowerSeries:
    """Reciprocal series; requires a nonzero constant term."""
    order = f.order if N is None else N
    fc = f.truncate(order).coeffs
    if fc[0] == 0:
        raise ZeroConstantTerm("series inversion needs a nonzero constant term")
    out = np.zeros(order + 1, dtype=np.complex128)
    out[0] = 1.0 / fc[0]
    for n in range(1, order + 1):
        acc = 0.0 + 0.0j
        for k in range(1, n + 1):
            acc += fc[k] * out[n - k]
        out[n] = -acc / fc[0]
    return PowerSeries(out)


def series_eval(f: PowerSeries, z: complex) -> complex:
    """Evaluate by Horner's rule at a point."""
    acc = 0.0 + 0.0j
    for c in f.coeffs[::-1]:
        acc = acc * z + c
    return complex(acc)
