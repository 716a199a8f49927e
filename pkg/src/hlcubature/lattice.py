"""Dominant weights and level-m alcoves for the root systems A_{n-1} and BC_n.

Weights are stored through their coordinates in the fundamental weight basis
(the label vector ``l``).  For ensemble ``"a"`` there are ``n - 1`` labels and
the weight is ``l_1 w_1 + ... + l_{n-1} w_{n-1}`` with
``w_j = e_1 + ... + e_j - (j/n)(e_1 + ... + e_n)``; for ensemble ``"b"`` there
are ``n`` labels and ``w_j = e_1 + ... + e_j``.  In both cases the level of a
weight is the label sum, i.e. ``mu_1 - mu_n`` (type a) or ``mu_1`` (type b).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Iterator, Sequence

from .errors import ParameterError

__all__ = [
    "ENSEMBLES",
    "Weight",
    "FundamentalData",
    "check_ensemble",
    "fundamental_data",
    "enumerate_alcove",
    "enumerate_shell",
    "alcove_size",
    "dominance_leq",
    "multiplicity",
]

ENSEMBLES = ("a", "b")


def check_ensemble(ensemble: str) -> str:
    if ensemble not in ENSEMBLES:
        raise ParameterError(f"ensemble must be 'a' or 'b', got {ensemble!r}")
    return ensemble


def _check_dimension(ensemble: str, n: int) -> None:
    check_ensemble(ensemble)
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParameterError(f"n must be an integer, got {n!r}")
    if ensemble == "a" and n < 2:
        raise ParameterError(f"type a requires n >= 2, got n={n}")
    if ensemble == "b" and n < 1:
        raise ParameterError(f"type b requires n >= 1, got n={n}")


@dataclass(frozen=True, order=True)
class Weight:
    """A dominant weight, identified by its fundamental-weight labels."""

    ensemble: str
    labels: tuple[int, ...]

    def __post_init__(self):
        check_ensemble(self.ensemble)
        labels = tuple(int(l) for l in self.labels)
        if any(l < 0 for l in labels):
            raise ParameterError(f"labels must be nonnegative, got {labels}")
        if self.ensemble == "a" and len(labels) < 1:
            raise ParameterError("type a weights need at least one label (n >= 2)")
        if self.ensemble == "b" and len(labels) < 1:
            raise ParameterError("type b weights need at least one label (n >= 1)")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_partition(cls, ensemble: str, parts: Sequence[int]) -> "Weight":
        """Build a weight from a weakly decreasing integer vector.

        For type a the vector is taken modulo the diagonal (only the
        differences ``parts[j] - parts[j+1]`` matter); for type b it must also
        be nonnegative.
        """
        check_ensemble(ensemble)
        parts = [int(p) for p in parts]
        if any(parts[j] < parts[j + 1] for j in range(len(parts) - 1)):
            raise ParameterError(f"{parts} is not weakly decreasing")
        if ensemble == "a":
            return cls("a", tuple(parts[j] - parts[j + 1] for j in range(len(parts) - 1)))
        if parts and parts[-1] < 0:
            raise ParameterError(f"type b weights must be nonnegative, got {parts}")
        return cls("b", tuple(parts[j] - parts[j + 1] for j in range(len(parts) - 1)) + (parts[-1],))

    @classmethod
    def zero(cls, ensemble: str, n: int) -> "Weight":
        _check_dimension(ensemble, n)
        return cls(ensemble, (0,) * (n - 1 if ensemble == "a" else n))

    @classmethod
    def fundamental(cls, ensemble: str, n: int, j: int) -> "Weight":
        """The fundamental weight ``w_j`` (``j = 0`` gives the zero weight)."""
        w = cls.zero(ensemble, n)
        if j == 0:
            return w
        if not 1 <= j <= len(w.labels):
            raise ParameterError(f"fundamental weight index {j} out of range for n={n}")
        labels = [0] * len(w.labels)
        labels[j - 1] = 1
        return cls(ensemble, tuple(labels))

    @property
    def n(self) -> int:
        return len(self.labels) + 1 if self.ensemble == "a" else len(self.labels)

    @property
    def level(self) -> int:
        return sum(self.labels)

    @cached_property
    def partition(self) -> tuple[int, ...]:
        """Integer representative ``p`` with ``p_j = l_j + ... + l_{n-1}`` (and ``p_n = 0`` for type a)."""
        labels = self.labels
        tail = [sum(labels[j:]) for j in range(len(labels))]
        return tuple(tail + [0]) if self.ensemble == "a" else tuple(tail)

    @cached_property
    def coords(self) -> tuple[Fraction, ...]:
        """Exact coordinates in R^n (type a: projected onto the zero-sum hyperplane)."""
        p = self.partition
        if self.ensemble == "b":
            return tuple(Fraction(x) for x in p)
        shift = Fraction(sum(p), self.n)
        return tuple(Fraction(x) - shift for x in p)

    def float_coords(self):
        return [float(c) for c in self.coords]

    def dual(self) -> "Weight":
        """``-reverse(mu)``; for type a this reverses the label vector."""
        if self.ensemble != "a":
            raise ParameterError("dual weights are only defined for type a")
        return Weight("a", tuple(reversed(self.labels)))

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


@dataclass(frozen=True)
class FundamentalData:
    ensemble: str
    n: int
    fundamental_weights: tuple[tuple[Fraction, ...], ...]
    rho: tuple[Fraction, ...]


def fundamental_data(ensemble: str, n: int) -> FundamentalData:
    """Fundamental weights and the half-sum vector ``rho`` for the ensemble."""
    _check_dimension(ensemble, n)
    if ensemble == "a":
        omegas = tuple(
            tuple(Fraction(int(i < j)) - Fraction(j, n) for i in range(n)) for j in range(1, n)
        )
        rho = tuple(Fraction(n + 1 - 2 * j, 2) for j in range(1, n + 1))
    else:
        omegas = tuple(tuple(Fraction(int(i < j)) for i in range(n)) for j in range(1, n + 1))
        rho = tuple(Fraction(n + 1 - j) for j in range(1, n + 1))
    return FundamentalData(ensemble, n, omegas, rho)


def _compositions_of(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    # lexicographically descending
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions_of(total - first, parts - 1):
            yield (first,) + rest


def _weights_of_level(ensemble: str, n: int, level: int) -> Iterator[Weight]:
    nlabels = n - 1 if ensemble == "a" else n
    for labels in _compositions_of(level, nlabels):
        yield Weight(ensemble, labels)


def alcove_size(ensemble: str, n: int, m: int) -> int:
    _check_dimension(ensemble, n)
    return comb(m + n - 1, m) if ensemble == "a" else comb(m + n, m)


def enumerate_alcove(ensemble: str, n: int, m: int) -> list[Weight]:
    """All dominant weights of level at most ``m``.

    Ordered by level, then lexicographically descending in the labels, so
    that for ``m = 1`` the order is ``0, w_1, w_2, ...``.
    """
    _check_dimension(ensemble, n)
    if not isinstance(m, int) or m < 0:
        raise ParameterError(f"level m must be a nonnegative integer, got {m!r}")
    return [w for level in range(m + 1) for w in _weights_of_level(ensemble, n, level)]


def enumerate_shell(ensemble: str, n: int, m: int) -> list[Weight]:
    """Weights of level exactly ``m + 1``: the set difference of consecutive alcoves."""
    _check_dimension(ensemble, n)
    return list(_weights_of_level(ensemble, n, m + 1))


def dominance_leq(x: Sequence, y: Sequence) -> bool:
    """True iff every partial sum of ``x`` is at most the corresponding one of ``y``."""
    if len(x) != len(y):
        raise ParameterError(f"length mismatch: {len(x)} != {len(y)}")
    sx = sy = 0
    for a, b in zip(x, y):
        sx += a
        sy += b
        if sx > sy:
            return False
    return True


def multiplicity(x, v: Sequence) -> int:
    """Number of entries of ``v`` equal to ``x`` (exact comparison)."""
    return sum(1 for e in v if e == x)
