"""Fuzzy conjunction/disjunction/negation operators.

Three matched t-norm / t-conorm pairs are provided (product, Gödel,
Łukasiewicz) together with the standard negation 1 - a. Each operator exists
in scalar form, as a non-empty left fold, and element-wise over vectors.

Degrees are plain floats in [0, 1], validated on entry; arithmetic never
clamps (out-of-range inputs are bugs, not data).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyList, InvalidDegree


class OperatorFamily(enum.Enum):
    """A t-norm together with its dual t-conorm."""

    PRODUCT = "product"
    GOEDEL = "goedel"
    LUKASIEWICZ = "lukasiewicz"

    @classmethod
    def from_name(cls, name: str) -> "OperatorFamily":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = "|".join(f.value for f in cls)
            raise ValueError(f"unknown operator family {name!r} (use {valid})") from None


@dataclass(frozen=True)
class FuzzyConfig:
    """Operator triple used for every evaluation in one session.

    Negation is always the standard 1 - a; only the t-norm family varies.
    """

    family: OperatorFamily = field(default=OperatorFamily.PRODUCT)

    @classmethod
    def from_name(cls, name: str) -> "FuzzyConfig":
        return cls(OperatorFamily.from_name(name))


def _check_degree(a: float) -> float:
    if not 0.0 <= a <= 1.0:
        raise InvalidDegree(a)
    return a


def tnorm(config: FuzzyConfig, a: float, b: float) -> float:
    """Fuzzy conjunction of two degrees under the configured family."""
    _check_degree(a)
    _check_degree(b)
    if config.family is OperatorFamily.PRODUCT:
        return a * b
    if config.family is OperatorFamily.GOEDEL:
        return min(a, b)
    return max(0.0, a + b - 1.0)


def tconorm(config: FuzzyConfig, a: float, b: float) -> float:
    """Fuzzy disjunction, the dual of :func:`tnorm`."""
    _check_degree(a)
    _check_degree(b)
    if config.family is OperatorFamily.PRODUCT:
        return a + b - a * b
    if config.family is OperatorFamily.GOEDEL:
        return max(a, b)
    return min(1.0, a + b)


def negate(config: FuzzyConfig, a: float) -> float:
    """Standard negation 1 - a (involutive)."""
    _check_degree(a)
    return 1.0 - a


def fold_tnorm(config: FuzzyConfig, values: Iterable[float]) -> float:
    """Left fold of the t-norm over a non-empty sequence."""
    return _fold(config, values, tnorm)


def fold_tconorm(config: FuzzyConfig, values: Iterable[float]) -> float:
    """Left fold of the t-conorm over a non-empty sequence."""
    return _fold(config, values, tconorm)


def _fold(config, values, op):
    it = iter(values)
    try:
        acc = _check_degree(next(it))
    except StopIteration:
        raise EmptyList("fold over an empty list") from None
    for v in it:
        acc = op(config, acc, v)
    return acc


# --- element-wise vector forms ------------------------------------------------
#
# These mirror the scalar operators exactly: the same IEEE-754 expressions
# applied per index, so scalar and vector paths agree bit for bit.

def _as_vector(values: Sequence[float] | np.ndarray) -> np.ndarray:
    vec = np.asarray(values, dtype=np.float64)
    if vec.ndim != 1:
        raise ValueError("expected a 1-D vector of degrees")
    if vec.size and (np.min(vec) < 0.0 or np.max(vec) > 1.0):
        bad = vec[(vec < 0.0) | (vec > 1.0)][0]
        raise InvalidDegree(float(bad))
    return vec


def _check_dims(u: np.ndarray, v: np.ndarray) -> None:
    if u.shape[0] != v.shape[0]:
        raise DimensionMismatch(u.shape[0], v.shape[0])


def elementwise_tnorm(config: FuzzyConfig, u, v) -> np.ndarray:
    u, v = _as_vector(u), _as_vector(v)
    _check_dims(u, v)
    if config.family is OperatorFamily.PRODUCT:
        return u * v
    if config.family is OperatorFamily.GOEDEL:
        return np.minimum(u, v)
    return np.maximum(0.0, u + v - 1.0)


def elementwise_tconorm(config: FuzzyConfig, u, v) -> np.ndarray:
    u, v = _as_vector(u), _as_vector(v)
    _check_dims(u, v)
    if config.family is OperatorFamily.PRODUCT:
        return u + v - u * v
    if config.family is OperatorFamily.GOEDEL:
        return np.maximum(u, v)
    return np.minimum(1.0, u + v)


def elementwise_negate(config: FuzzyConfig, u) -> np.ndarray:
    return 1.0 - _as_vector(u)


def elementwise(config: FuzzyConfig, op: str, *vectors) -> np.ndarray:
    """Dispatch by operator token: 'tnorm' | 'tconorm' | 'negate'."""
    if op == "tnorm":
        return elementwise_tnorm(config, *vectors)
    if op == "tconorm":
        return elementwise_tconorm(config, *vectors)
    if op == "negate":
        return elementwise_negate(config, *vectors)
    raise ValueError(f"unknown element-wise operator {op!r}")
