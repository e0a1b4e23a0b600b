"""Exact Weingarten calculus for the unitary group.

Conventions used throughout:

- a *permutation* is a tuple ``p`` with ``p[i]`` the 0-based image of ``i``;
- a *partition* (cycle type, Young diagram) is a weakly decreasing tuple of
  positive integers;
- all exact values are returned as ``fractions.Fraction``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cache

import numpy as np

from ._rational import rational, to_fraction
from .errors import (
    DimensionMismatch,
    DimensionTooSmall,
    DomainError,
    RowOverflow,
    SingularGram,
    SizeMismatch,
)

__all__ = [
    "compose",
    "inverse",
    "cycle_type",
    "partitions",
    "character_chi",
    "unitary_irrep_dimension",
    "weingarten",
    "gram_weingarten_oracle",
    "haar_average_BB_minus_AA",
]

GRAM_MAX_ORDER = 6  # p! x p! exact solves stay desk-scale up to here


# ---------------------------------------------------------------------------
# permutations


def compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Composition p∘q, i.e. the permutation x -> p[q[x]]."""
    if len(p) != len(q):
        raise SizeMismatch(f"cannot compose permutations of sizes {len(p)} and {len(q)}")
    return tuple(p[qi] for qi in q)


def inverse(p: tuple[int, ...]) -> tuple[int, ...]:
    """Inverse permutation."""
    out = [0] * len(p)
    for i, pi in enumerate(p):
        out[pi] = i
    return tuple(out)


def cycle_type(p: tuple[int, ...]) -> tuple[int, ...]:
    """Cycle lengths of a permutation, weakly decreasing."""
    seen = [False] * len(p)
    parts = []
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = p[x]
            length += 1
        parts.append(length)
    return tuple(sorted(parts, reverse=True))


def permutation_with_cycle_type(ct: tuple[int, ...]) -> tuple[int, ...]:
    """A canonical permutation of 0..sum(ct)-1 realizing the cycle type."""
    ct = _check_partition(ct, "cycle type")
    perm = []
    offset = 0
    for length in ct:
        perm.extend(offset + (i + 1) % length for i in range(length))
        offset += length
    return tuple(perm)


def partitions(p: int) -> list[tuple[int, ...]]:
    """All partitions of p as weakly decreasing tuples."""

    def gen(remaining: int, cap: int):
        if remaining == 0:
            yield ()
            return
        for first in range(min(cap, remaining), 0, -1):
            for rest in gen(remaining - first, first):
                yield (first,) + rest

    return list(gen(p, p))


def _check_partition(parts: tuple[int, ...], name: str) -> tuple[int, ...]:
    parts = tuple(int(x) for x in parts)
    if any(x <= 0 for x in parts):
        raise SizeMismatch(f"{name} must have positive parts, got {parts}")
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise SizeMismatch(f"{name} must be weakly decreasing, got {parts}")
    return parts


# ---------------------------------------------------------------------------
# symmetric group characters (Murnaghan-Nakayama over beta-numbers)


def _beta_to_partition(beta: tuple[int, ...]) -> tuple[int, ...]:
    # beta strictly decreasing; lambda_i = beta_i - (len - 1 - i), zeros dropped
    ell = len(beta)
    lam = tuple(b - (ell - 1 - i) for i, b in enumerate(beta))
    return tuple(x for x in lam if x > 0)


@cache
def _chi(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    if not mu:
        return 1
    t, rest = mu[0], mu[1:]
    ell = len(lam)
    beta = tuple(lam[i] + (ell - 1 - i) for i in range(ell))
    bset = set(beta)
    total = 0
    for b in beta:
        low = b - t
        if low < 0 or low in bset:
            continue
        # removing a border strip of size t: replace b by b - t in the beta-set;
        # sign is (-1)^(number of beta elements jumped over)
        height = sum(1 for x in beta if low < x < b)
        sign = -1 if height % 2 else 1
        new_beta = tuple(sorted((bset - {b}) | {low}, reverse=True))
        total += sign * _chi(_beta_to_partition(new_beta), rest)
    return total


def character_chi(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    """Character of the S_p irrep labeled by the partition lam, evaluated on
    the conjugacy class of cycle type mu.

    Computed by the Murnaghan-Nakayama border-strip recursion. Both partitions
    must have the same size p.
    """
    lam = _check_partition(lam, "lam")
    mu = _check_partition(mu, "mu")
    if sum(lam) != sum(mu):
        raise SizeMismatch(f"|lam|={sum(lam)} but |mu|={sum(mu)}")
    return _chi(lam, mu)


def unitary_irrep_dimension(lam: tuple[int, ...], n: int) -> int:
    """Dimension of the U(n) irrep labeled by lam (Weyl/hook-content formula).

    Raises RowOverflow when lam has more than n rows.
    """
    lam = _check_partition(lam, "lam")
    if n < len(lam):
        raise RowOverflow(f"partition has {len(lam)} rows but n={n}")
    conj = [sum(1 for x in lam if x > j) for j in range(lam[0])] if lam else []
    num = 1
    den = 1
    for i, row in enumerate(lam):
        for j in range(row):
            num *= n + j - i
            den *= (row - j) + (conj[j] - i) - 1  # hook length of cell (i, j)
    q, r = divmod(num, den)
    if r:
        raise SingularGram("hook-content product is not an integer")  # unreachable
    return q


# ---------------------------------------------------------------------------
# Weingarten function


def weingarten(n: int, sigma: tuple[int, ...]) -> Fraction:
    """Exact Weingarten function Wg(n, sigma) for a cycle type sigma of S_p.

    Requires n >= p; the character sum runs over all partitions of p, each
    weighted by the squared dimension of the S_p irrep and divided by the
    dimension of the corresponding U(n) irrep.
    """
    sigma = _check_partition(sigma, "sigma")
    p = sum(sigma)
    if n < p:
        raise DimensionTooSmall(f"need n >= p, got n={n}, p={p}")
    identity = (1,) * p
    total = rational(0)
    for lam in partitions(p):
        dim_sp = _chi(lam, identity)
        total += rational(dim_sp * dim_sp * _chi(lam, sigma), unitary_irrep_dimension(lam, n))
    fact = 1
    for i in range(2, p + 1):
        fact *= i
    return to_fraction(total / (fact * fact))


def _gram_solution(n: int, p: int) -> dict[tuple[int, ...], Fraction]:
    """Solve G x = e_id over the rationals for the full S_p Gram matrix
    G(sigma, tau) = n^(#cycles(sigma^-1 tau)); returns x indexed by permutation."""
    perms = list(itertools.permutations(range(p)))
    size = len(perms)
    npow = [rational(n) ** c for c in range(p + 1)]
    rows = []
    for s in perms:
        s_inv = inverse(s)
        rows.append([npow[len(cycle_type(compose(s_inv, t)))] for t in perms])
    rhs = [rational(0)] * size
    rhs[perms.index(tuple(range(p)))] = rational(1)

    # forward elimination with partial pivoting, exact arithmetic
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if piv is None:
            raise SingularGram(f"zero pivot at column {col} (n={n}, p={p})")
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            rhs[col], rhs[piv] = rhs[piv], rhs[col]
        pivot = rows[col][col]
        for r in range(col + 1, size):
            factor = rows[r][col]
            if factor == 0:
                continue
            scale = factor / pivot
            row_r, row_c = rows[r], rows[col]
            for c in range(col, size):
                row_r[c] -= scale * row_c[c]
            rhs[r] -= scale * rhs[col]
    x = [rational(0)] * size
    for r in range(size - 1, -1, -1):
        acc = rhs[r]
        row = rows[r]
        for c in range(r + 1, size):
            acc -= row[c] * x[c]
        x[r] = acc / row[r]
    return {perm: to_fraction(val) for perm, val in zip(perms, x)}


def gram_weingarten_oracle(n: int, p: int) -> dict[tuple[int, ...], Fraction]:
    """Independent Weingarten oracle: invert the S_p Gram matrix exactly.

    Builds the p! x p! matrix G(sigma, tau) = n^(#cycles(sigma^-1 tau)), solves
    G x = e_id over the rationals, and returns the per-cycle-type values (the
    solution is constant on conjugacy classes, which is verified).
    """
    if p < 1:
        raise DomainError(f"need p >= 1, got p={p}")
    if p > GRAM_MAX_ORDER:
        raise DomainError(f"gram oracle supports p <= {GRAM_MAX_ORDER}, got p={p}")
    if n < p:
        raise DimensionTooSmall(f"need n >= p, got n={n}, p={p}")
    by_perm = _gram_solution(n, p)
    out: dict[tuple[int, ...], Fraction] = {}
    for perm, val in by_perm.items():
        ct = cycle_type(perm)
        if ct in out:
            if out[ct] != val:
                raise SingularGram(f"Gram solution not constant on class {ct}")
        else:
            out[ct] = val
    return out


# ---------------------------------------------------------------------------
# averaged matrix (second-moment building block)


def haar_average_BB_minus_AA(n: int, a, b, pi) -> np.ndarray:
    """Closed form of E[U B U+ P U B U+ - U A U^T P conj(U) A U+] over Haar U,
    for diagonal A = diag(a), B = diag(b) and a diagonal 0/1 projector
    P = diag(pi).

    Returns the n x n real matrix

        c_p * P + c_i * I

    with c_p = [(tr B)^2 - tr A^2]/(n^2-1) + [tr A^2 - tr B^2]/(n(n^2-1)) and
    c_i = tr P * ([tr B^2 - tr A^2]/(n^2-1) + [tr A^2 - (tr B)^2]/(n(n^2-1))).
    """
    if n < 2:
        raise DimensionTooSmall(f"need n >= 2, got n={n}")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    pi = np.asarray(pi, dtype=float)
    if a.shape != (n,) or b.shape != (n,) or pi.shape != (n,):
        raise DimensionMismatch(
            f"expected three length-{n} vectors, got shapes {a.shape}, {b.shape}, {pi.shape}"
        )
    tr_b = b.sum()
    tr_b2 = (b * b).sum()
    tr_a2 = (a * a).sum()
    tr_pi = pi.sum()
    c1 = 1.0 / (n * n - 1)
    c2 = 1.0 / (n * (n * n - 1))
    c_pi = c1 * (tr_b**2 - tr_a2) + c2 * (tr_a2 - tr_b2)
    c_id = tr_pi * (c1 * (tr_b2 - tr_a2) + c2 * (tr_a2 - tr_b**2))
    return c_pi * np.diag(pi) + c_id * np.eye(n)
