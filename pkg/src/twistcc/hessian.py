"""Hessian of f in Cartesian and twist coordinates, and Morse indices.

The twist-basis entries come in three kinds, depending on how many body
indices the two pairs share: a diagonal entry v_ij^T H v_ij, a
shared-vertex entry v_ij^T H v_ik, and a disjoint entry v_ij^T H v_kl.
Each kind has a raw closed form and a normalized form for the rescaled
vectors v_ij / (m_i m_j r_ij).  The normalized forms are exact algebraic
rescalings of the raw ones; the sine-like factors lam_abc/(r_ab*r_ac) are
kept *signed* so that this holds for every orientation.

The entry evaluators are generic over the scalar type: they only use
+, -, *, /, ** on values pulled from a table object exposing r, R, S, T
indexed by [i, j] plus lam(i,j,k) and dot(i,j,k,l).  The same code paths
therefore serve both the float PairTable and the interval tables used for
rigorous certification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import PairTable, PlanarConfig, PotentialParams, build_pair_table
from .twist import TwistPair, canon_pair

__all__ = [
    "cartesian_hessian", "twist_hessian_diag", "twist_hessian_share",
    "twist_hessian_disjoint", "normalized_twist_hessian", "twist_hessian_entry",
    "TwistDirection", "TwistMatrix", "assemble_twist_hessian",
    "lagrange_char_poly_coeffs", "morse_index", "AngleTable",
]


def cartesian_hessian(config: PlanarConfig, params: PotentialParams) -> np.ndarray:
    """2n x 2n Hessian of f over flat coordinates.

    Off-diagonal blocks are m_i m_k (S_ik Id - A T_ik q_ik q_ik^T); the
    diagonal blocks are the negated row sums, which makes the translation
    kernel exact by construction.
    """
    params.require_f_domain()
    t = build_pair_table(config, params)
    m = config.masses
    A = params.A
    n = config.n
    mm = m[:, None] * m[None, :]
    hxx = mm * (t.S - A * t.dx ** 2 * t.T)
    hyy = mm * (t.S - A * t.dy ** 2 * t.T)
    hxy = -mm * A * t.T * t.dx * t.dy
    for blk in (hxx, hyy, hxy):
        np.fill_diagonal(blk, 0.0)
        np.fill_diagonal(blk, -blk.sum(axis=1))
    H = np.empty((2 * n, 2 * n))
    H[0::2, 0::2] = hxx
    H[1::2, 1::2] = hyy
    H[0::2, 1::2] = hxy
    H[1::2, 0::2] = hxy.T
    return H


# --- generic twist-basis entries ---------------------------------------------

def _raw_diag(t, m, A, i, j):
    rij2 = t.r[i, j] * t.r[i, j]
    acc = ((m[i] + m[j]) ** 2) * rij2 * t.S[i, j]
    for k in range(len(m)):
        if k == i or k == j:
            continue
        lam2 = t.lam(i, j, k) ** 2
        acc = acc + m[k] * (rij2 * (m[j] * t.S[i, k] + m[i] * t.S[j, k])
                            - A * lam2 * (m[j] * t.T[i, k] + m[i] * t.T[j, k]))
    return -(m[i] * m[j]) * acc


def _raw_share(t, m, A, i, j, k):
    # shared vertex i: v_ij^T H v_ik
    n = len(m)
    ssum = t.zero
    for l in range(n):
        if l != i:
            ssum = ssum + m[l] * t.S[i, l]
    acc = t.dot(i, j, i, k) * (m[i] * (t.S[k, j] - t.S[i, j] - t.S[i, k]) - ssum)
    acc = acc - m[i] * A * t.T[j, k] * t.lam(i, j, k) ** 2
    for l in range(n):
        if l in (i, j, k):
            continue
        acc = acc + A * m[l] * t.T[i, l] * t.lam(i, j, l) * t.lam(i, k, l)
    return m[i] * m[j] * m[k] * acc


def _raw_disjoint(t, m, A, i, j, k, l):
    acc = -A * (t.T[i, k] * t.lam(i, k, l) * t.lam(i, k, j)
                + t.T[j, k] * t.lam(j, k, l) * t.lam(j, k, i)
                + t.T[i, l] * t.lam(i, l, k) * t.lam(i, l, j)
                + t.T[j, l] * t.lam(j, l, i) * t.lam(j, l, k))
    acc = acc + t.dot(i, j, k, l) * (t.R[i, k] + t.R[j, l] - t.R[j, k] - t.R[i, l])
    return m[i] * m[j] * m[k] * m[l] * acc


def _sin(t, a, b, c):
    # signed sine of the angle at vertex a between q_ab and q_ac
    return t.lam(a, b, c) / (t.r[a, b] * t.r[a, c])


def _norm_diag(t, m, A, i, j):
    acc = -(2 + m[i] / m[j] + m[j] / m[i]) * t.S[i, j]
    for k in range(len(m)):
        if k == i or k == j:
            continue
        acc = acc + (-(m[k] / m[i]) * t.S[i, k] - (m[k] / m[j]) * t.S[j, k]
                     + A * ((m[k] / m[i]) * t.R[i, k] * _sin(t, i, j, k) ** 2
                            + (m[k] / m[j]) * t.R[j, k] * _sin(t, j, i, k) ** 2))
    return acc


def _norm_share(t, m, A, i, j, k):
    n = len(m)
    ssum = t.zero
    for l in range(n):
        if l != i:
            ssum = ssum + (m[l] / m[i]) * t.S[i, l]
    cos_i = t.dot(i, j, i, k) / (t.r[i, j] * t.r[i, k])
    acc = cos_i * (t.S[k, j] - t.S[i, j] - t.S[i, k] - ssum)
    acc = acc - A * t.R[j, k] * _sin(t, j, i, k) * _sin(t, k, j, i)
    for l in range(n):
        if l in (i, j, k):
            continue
        acc = acc + A * (m[l] / m[i]) * t.R[i, l] * _sin(t, i, j, l) * _sin(t, i, k, l)
    return acc


def _norm_disjoint(t, m, A, i, j, k, l):
    acc = -A * (t.R[i, k] * _sin(t, i, k, j) * _sin(t, k, l, i)
                + t.R[j, k] * _sin(t, j, k, i) * _sin(t, k, l, j)
                + t.R[i, l] * _sin(t, i, l, j) * _sin(t, l, k, i)
                + t.R[j, l] * _sin(t, j, l, i) * _sin(t, l, k, j))
    cos4 = t.dot(i, j, k, l) / (t.r[i, j] * t.r[k, l])
    return acc + cos4 * (t.R[i, k] + t.R[j, l] - t.R[j, k] - t.R[i, l])


def generic_entry(t, m, A, p: TwistPair, q: TwistPair, normalized: bool):
    """One twist-basis Hessian entry, dispatched on the shared index count."""
    i, j = p
    k, l = q
    shared = {i, j} & {k, l}
    if len(shared) == 2:
        return _norm_diag(t, m, A, i, j) if normalized else _raw_diag(t, m, A, i, j)
    if len(shared) == 1:
        s = shared.pop()
        a = j if i == s else i
        b = l if k == s else k
        return _norm_share(t, m, A, s, a, b) if normalized else _raw_share(t, m, A, s, a, b)
    return (_norm_disjoint(t, m, A, i, j, k, l) if normalized
            else _raw_disjoint(t, m, A, i, j, k, l))


# --- float-facing wrappers ----------------------------------------------------

def twist_hessian_diag(table: PairTable, masses, params: PotentialParams, pair) -> float:
    """v_ij^T H v_ij from the closed form."""
    params.require_f_domain()
    i, j = canon_pair(table.n, pair)
    return float(_raw_diag(table, masses, params.A, i, j))


def twist_hessian_share(table: PairTable, masses, params: PotentialParams,
                        pair_ij, pair_ik) -> float:
    """v_ij^T H v_ik for pairs sharing exactly one body."""
    params.require_f_domain()
    p = canon_pair(table.n, pair_ij)
    q = canon_pair(table.n, pair_ik)
    if len(set(p) & set(q)) != 1:
        raise ValueError(f"pairs {p} and {q} must share exactly one body")
    return float(generic_entry(table, masses, params.A, p, q, normalized=False))


def twist_hessian_disjoint(table: PairTable, masses, params: PotentialParams,
                           pair_ij, pair_kl) -> float:
    """v_ij^T H v_kl for four distinct bodies."""
    params.require_f_domain()
    p = canon_pair(table.n, pair_ij)
    q = canon_pair(table.n, pair_kl)
    if set(p) & set(q):
        raise ValueError(f"pairs {p} and {q} must be disjoint")
    return float(generic_entry(table, masses, params.A, p, q, normalized=False))


def normalized_twist_hessian(table: PairTable, masses, params: PotentialParams,
                             pair1, pair2=None) -> float:
    """Entry for the normalized vectors v_ij/(m_i m_j r_ij); any pair kind."""
    params.require_f_domain()
    p = canon_pair(table.n, pair1)
    q = p if pair2 is None else canon_pair(table.n, pair2)
    return float(generic_entry(table, masses, params.A, p, q, normalized=True))


def twist_hessian_entry(table: PairTable, masses, params: PotentialParams,
                        pair1, pair2, normalized: bool = False) -> float:
    params.require_f_domain()
    p = canon_pair(table.n, pair1)
    q = canon_pair(table.n, pair2)
    return float(generic_entry(table, masses, params.A, p, q, normalized))


# --- assembled matrices --------------------------------------------------------

@dataclass(frozen=True)
class TwistDirection:
    """A named linear combination of twist pairs."""

    name: str
    terms: tuple[tuple[float, TwistPair], ...]

    @classmethod
    def from_pair(cls, pair: TwistPair) -> "TwistDirection":
        i, j = pair
        return cls(f"v{i}-{j}", ((1.0, (i, j)),))


@dataclass(frozen=True, eq=False)
class TwistMatrix:
    """Symmetric Hessian matrix over a list of twist directions."""

    matrix: np.ndarray
    directions: tuple[TwistDirection, ...]
    normalized: bool


def _as_direction(d) -> TwistDirection:
    if isinstance(d, TwistDirection):
        return d
    return TwistDirection.from_pair(tuple(d))


def assemble_twist_hessian(config: PlanarConfig, params: PotentialParams,
                           directions, normalized: bool = False) -> TwistMatrix:
    """Bilinear expansion of the Hessian over (combinations of) twist pairs."""
    params.require_f_domain()
    dirs = tuple(_as_direction(d) for d in directions)
    table = build_pair_table(config, params)
    m = config.masses
    A = params.A
    cache: dict[tuple[TwistPair, TwistPair], float] = {}

    def entry(p: TwistPair, q: TwistPair) -> float:
        key = (p, q) if p <= q else (q, p)
        if key not in cache:
            cache[key] = float(generic_entry(table, m, A, key[0], key[1], normalized))
        return cache[key]

    size = len(dirs)
    M = np.zeros((size, size))
    for a in range(size):
        for b in range(a, size):
            acc = 0.0
            for ca, pa in dirs[a].terms:
                pa = canon_pair(config.n, pa)
                for cb, pb in dirs[b].terms:
                    pb = canon_pair(config.n, pb)
                    acc += ca * cb * entry(pa, pb)
            M[a, b] = M[b, a] = acc
    return TwistMatrix(M, dirs, normalized)


def lagrange_char_poly_coeffs(masses) -> tuple[float, float, float]:
    """(a0, a1, a2) of the quadratic factor lam^2 + a1*lam + a0 of the
    3-body equilateral twist Hessian, after removing the 3A/4 scale and
    the rotational zero root.  a2 is 1 by normalization and
    a1 = -(sum of all six mass ratios), so both roots are positive."""
    m1, m2, m3 = (float(v) for v in masses)
    if min(m1, m2, m3) <= 0:
        raise ValueError("masses must be positive")
    B = np.array([
        [m3 / m1 + m3 / m2, -1.0, -1.0],
        [-1.0, m2 / m1 + m2 / m3, -1.0],
        [-1.0, -1.0, m1 / m2 + m1 / m3],
    ])
    a2 = 1.0
    a1 = -float(np.trace(B))
    a0 = 0.0
    for i in range(3):
        for j in range(i + 1, 3):
            a0 += B[i, i] * B[j, j] - B[i, j] * B[j, i]
    return (float(a0), a1, a2)


def morse_index(matrix, zero_tol: float = 1e-8) -> tuple[int, int, int]:
    """(n_neg, n_zero, n_pos) eigenvalue counts of a symmetric matrix.

    Eigenvalues with |lam| < zero_tol * max|lam| count as zero.
    """
    M = matrix.matrix if isinstance(matrix, TwistMatrix) else np.asarray(matrix, dtype=float)
    w = np.linalg.eigvalsh(M)
    top = float(np.abs(w).max()) if w.size else 0.0
    if top == 0.0:
        return (0, int(w.size), 0)
    thr = zero_tol * top
    n_zero = int((np.abs(w) < thr).sum())
    n_neg = int((w <= -thr).sum())
    return (n_neg, n_zero, int(w.size) - n_neg - n_zero)


class AngleTable:
    """Signed sines/cosines of the inter-pair angles of a configuration.

    sin3(i,j,k) is lam_ijk/(r_ij*r_ik), the signed sine of the angle at
    vertex i between q_ij and q_ik; cos3 is the matching cosine from the
    dot product, and cos4(i,j,k,l) the cosine between q_ij and q_kl.
    """

    def __init__(self, table: PairTable):
        self.t = table

    def sin3(self, i, j, k) -> float:
        return float(self.t.lam(i, j, k) / (self.t.r[i, j] * self.t.r[i, k]))

    def cos3(self, i, j, k) -> float:
        return float(self.t.dot(i, j, i, k) / (self.t.r[i, j] * self.t.r[i, k]))

    def cos4(self, i, j, k, l) -> float:
        return float(self.t.dot(i, j, k, l) / (self.t.r[i, j] * self.t.r[k, l]))
