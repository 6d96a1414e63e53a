"""Exact roots of unity.

Two representations are used throughout the package:

* :class:`Phase` -- an element of Q/Z, read as ``exp(2*pi*i*q)``.  All cocycle
  values are phases.
* integer vectors of length ``N`` along the last axis -- elements of the group
  ring Z[C_N], i.e. formal sums ``sum_k a[k] * zeta_N**k``.  Character values on
  the exact path live here.  The group-ring form is not canonical (for N = 3,
  ``1 + zeta + zeta**2 == 0``); :func:`reduce` maps to canonical coordinates in
  the power basis of Z[zeta_N] by reducing modulo the cyclotomic polynomial.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np


@dataclass(frozen=True, order=True)
class Phase:
    """An element of Q/Z, stored as a reduced fraction in [0, 1)."""

    value: Fraction = Fraction(0)

    def __post_init__(self):
        q = Fraction(self.value) % 1
        object.__setattr__(self, "value", q)

    @classmethod
    def of(cls, num, den=1) -> "Phase":
        return cls(Fraction(num, den))

    @classmethod
    def parse(cls, text: str) -> "Phase":
        """Parse ``"num/den"`` (or a bare integer)."""
        return cls(Fraction(text.strip()))

    def __mul__(self, other: "Phase") -> "Phase":
        return Phase(self.value + other.value)

    def __truediv__(self, other: "Phase") -> "Phase":
        return Phase(self.value - other.value)

    def __pow__(self, k: int) -> "Phase":
        return Phase(self.value * k)

    def inverse(self) -> "Phase":
        return Phase(-self.value)

    @property
    def is_trivial(self) -> bool:
        return self.value == 0

    def to_complex(self) -> complex:
        return complex(np.exp(2j * np.pi * float(self.value)))

    def __str__(self):
        return f"{self.value.numerator}/{self.value.denominator}"

    def __repr__(self):
        return f"Phase({self})"


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _exact_divide(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    # den is monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    assert not any(num), "non-exact polynomial division"
    return out


@lru_cache(maxsize=None)
def _reduction_matrix(n: int) -> np.ndarray:
    # row k = coordinates of x^k modulo Phi_n in the basis 1, x, ..., x^(phi-1)
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    red = np.zeros((n, deg), dtype=np.int64)
    cur = [0] * deg
    cur[0] = 1
    for k in range(n):
        red[k] = cur
        # multiply by x and reduce
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi[:-1])]
    red.setflags(write=False)
    return red


def totient(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


def conj(a: np.ndarray) -> np.ndarray:
    """Complex conjugation: zeta**k -> zeta**(-k) along the last axis."""
    n = a.shape[-1]
    idx = (-np.arange(n)) % n
    return a[..., idx]


def lift(a: np.ndarray, n_to: int) -> np.ndarray:
    """Re-express Z[C_n] vectors inside Z[C_{n_to}] (n must divide n_to)."""
    n = a.shape[-1]
    if n == n_to:
        return a
    if n_to % n:
        raise ValueError(f"cannot lift conductor {n} to {n_to}")
    out = np.zeros(a.shape[:-1] + (n_to,), dtype=a.dtype)
    out[..., np.arange(n) * (n_to // n)] = a
    return out


def multiply(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pointwise product of group-ring vectors (cyclic convolution)."""
    n = a.shape[-1]
    if b.shape[-1] != n:
        raise ValueError("conductor mismatch")
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.result_type(a, b))
    for k in range(n):
        ak = a[..., k : k + 1]
        if np.any(ak):
            out = out + ak * np.roll(b, k, axis=-1)
    return out


def pair_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``out[r, q] = sum_m a[r, m] * b[q, m]`` in Z[C_N].

    ``a`` has shape (R, M, N) and ``b`` shape (Q, M, N); the result has shape
    (R, Q, N).
    """
    n = a.shape[-1]
    out = np.zeros((a.shape[0], b.shape[0], n), dtype=np.int64)
    for k in range(n):
        ak = a[:, :, k]
        if not ak.any():
            continue
        for j in range(n):
            bj = b[:, :, j]
            if bj.any():
                out[:, :, (k + j) % n] += ak @ bj.T
    return out


def reduce(a: np.ndarray) -> np.ndarray:
    """Canonical power-basis coordinates of group-ring vectors."""
    return a @ _reduction_matrix(a.shape[-1])


def as_rational(a: np.ndarray) -> np.ndarray:
    """Rational-integer part of group-ring vectors; raises if any is irrational."""
    r = reduce(np.asarray(a))
    if np.any(r[..., 1:]):
        raise ValueError("value is not a rational integer")
    return r[..., 0]


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    n = lcm(a.shape[-1], b.shape[-1])
    return bool(np.array_equal(reduce(lift(a, n)), reduce(lift(b, n))))


def to_complex(a: np.ndarray) -> np.ndarray:
    n = a.shape[-1]
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    return a @ roots


def root(k: int, n: int) -> np.ndarray:
    """The group-ring vector of zeta_n**k."""
    v = np.zeros(n, dtype=np.int64)
    v[k % n] = 1
    return v


def integer(c: int, n: int = 1) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    v[0] = c
    return v


def phase_sum(a: np.ndarray) -> list[tuple[Phase, int]]:
    """Formal phase-sum form of one group-ring vector, zero terms dropped."""
    n = a.shape[-1]
    return [(Phase.of(k, n), int(c)) for k, c in enumerate(a) if c]


def format_phase_sum(a: np.ndarray) -> str:
    try:
        return str(int(as_rational(a)))
    except ValueError:
        pass
    terms = phase_sum(a)
    if not terms:
        return "0"
    parts = []
    for ph, c in terms:
        if ph.is_trivial:
            parts.append(str(c))
        else:
            coeff = "" if c == 1 else ("-" if c == -1 else f"{c}*")
            parts.append(f"{coeff}e({ph})")
    return " + ".join(parts).replace("+ -", "- ")
