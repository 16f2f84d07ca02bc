"""Rigorous certification of kite Hessian block indices over shape boxes.

All quantities are enclosed with outward-rounded interval arithmetic, so
a decided certificate holds for *every* shape in the input box:

  * the Dziobek scale is enclosed by interval bisection with verified
    sign changes of the residual at the bracket endpoints;
  * the 2x2 block H_s is enclosed through its explicit closed-form
    entries and its index decided from the signs of det and trace;
  * the 3x3 block H_a always carries the rotational zero eigenvalue, so
    its deflated index is decided by conjugating with an exactly
    orthogonal Householder reflector built from a floating-point
    approximate kernel vector: the off-pivot column norm rho bounds the
    perturbation, leaving two eigenvalue enclosures to sign-check
    (interval entries of the 2x2 compression, widened by rho).

`None`-valued certificates mean Unknown; Unknown is always a sound
answer and the expected one on boxes straddling a bifurcation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import PotentialParams
from .hessian import _norm_diag, _norm_disjoint, _norm_share
from .intervals import Interval, IntervalDomainError, IntervalError, _up
from .kite import (KiteError, KiteQuantities, KiteShape, build_kite,
                   hs_explicit, kite_blocks, kite_scale, mass_ratio_terms)

SQRT3_I = Interval(3.0).sqrt()


@dataclass(frozen=True)
class CertifiedIndex:
    """Index count guaranteed over the whole box, or None for Unknown."""

    value: int | None
    certificate: str

    @property
    def known(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class BoxCertificate:
    z3: Interval
    z4: Interval
    hs: CertifiedIndex
    ha: CertifiedIndex

    @property
    def total(self) -> int | None:
        if self.hs.known and self.ha.known:
            return self.hs.value + self.ha.value
        return None


def box_admissible(z3: Interval, z4: Interval) -> str | None:
    """'tall'/'wide' if the whole box is strictly inside one class, else None."""
    if z4.lo <= 0.0 or z3.lo <= z4.hi:
        return None
    yc = 0.5 * z3 - 0.5 / z3
    if z3.lo > SQRT3_I.hi and z4.lo > yc.hi and z4.hi < (SQRT3_I / 2.0).lo:
        return "tall"
    if z3.hi < SQRT3_I.lo and z4.hi < yc.lo:
        return "wide"
    return None


def _dziso_interval(z3: Interval, z4: Interval, x2: Interval, A: float) -> Interval:
    r12 = 2.0 * x2
    r13 = x2 * (1.0 + z3.sq()).sqrt()
    r14 = x2 * (1.0 + z4.sq()).sqrt()
    r34 = x2 * (z3 - z4)
    S12 = r12.pow_real(-A) - 1.0
    S13 = r13.pow_real(-A) - 1.0
    S14 = r14.pow_real(-A) - 1.0
    S34 = r34.pow_real(-A) - 1.0
    return S12 * S34 - S13 * S14


def certify_kite_scale(z3: Interval, z4: Interval, params: PotentialParams,
                       *, max_bisect: int = 200) -> Interval | None:
    """Enclosure of the Dziobek scale valid for every shape in the box.

    Brackets the residual with verified constant signs at both endpoints,
    then bisects while the midpoint sign stays decidable.  Returns None
    when no verified bracket exists (e.g. a box straddling the symmetric
    shape, where the residual is identically zero).
    """
    params.require_f_domain()
    A = params.A
    if z3.lo <= z4.hi or z4.lo <= 0.0:
        return None
    try:
        x2c = kite_scale(KiteShape(z3.mid, z4.mid), params)
    except KiteError:
        return None

    def sign_at(x: float) -> int:
        try:
            g = _dziso_interval(z3, z4, Interval(x), A)
        except (IntervalError, IntervalDomainError):
            return 0
        if g.is_positive():
            return 1
        if g.is_negative():
            return -1
        return 0

    lo = hi = None
    slo = shi = 0
    w = 1e-8
    while w < 0.8:
        clo, chi = x2c * (1.0 - w), x2c * (1.0 + w)
        slo, shi = sign_at(clo), sign_at(chi)
        if slo != 0 and shi != 0 and slo != shi:
            lo, hi = clo, chi
            break
        w *= 2.0
    if lo is None:
        return None

    # Quarter-point probing instead of midpoint bisection: the sign right at
    # the root is never decidable, but both bracket ends can still close in
    # until the undecidable core (a few ulps wide) is reached.
    for _ in range(max_bisect):
        width = hi - lo
        if width <= 1e-14 * lo:
            break
        m1 = lo + 0.25 * width
        m2 = lo + 0.75 * width
        if not (lo < m1 < m2 < hi):
            break
        progressed = False
        s1 = sign_at(m1)
        if s1 == slo:
            lo = m1
            progressed = True
        elif s1 == shi:
            hi = m1
            progressed = True
        if hi - lo > 1e-14 * lo and m2 < hi:
            s2 = sign_at(m2)
            if s2 == shi:
                hi = m2
                progressed = True
            elif s2 == slo:
                lo = m2
                progressed = True
        if not progressed:
            break
    enclosure = Interval(lo, hi)
    # The substitution t = x2^(-A) solves the residual equation exactly:
    # x2 = (D/N)^(1/A); its direct interval evaluation is a second valid
    # enclosure, so intersecting can only tighten the bracket.
    try:
        p2 = 2.0 ** -A
        pd = (z3 - z4) ** -A
        p3 = (1.0 + z3 * z3) ** (-A / 2.0)
        p4 = (1.0 + z4 * z4) ** (-A / 2.0)
        D = p2 * pd - p3 * p4
        N = p2 + pd - p3 - p4
        closed = (D / N) ** (1.0 / A)
        enclosure = enclosure.intersect(closed)
    except (IntervalError, IntervalDomainError):
        pass
    return enclosure


def interval_kite_quantities(z3: Interval, z4: Interval, x2: Interval,
                             params: PotentialParams) -> KiteQuantities:
    """KiteQuantities with Interval fields, including mass-ratio enclosures.

    The mass ratios are evaluated in their shape-only form (x2 cancels
    exactly), which keeps their enclosures free of the scale enclosure's
    width.
    """
    A = params.A
    y3, y4 = z3 * x2, z4 * x2
    r12 = 2.0 * x2
    r13 = x2 * (1.0 + z3.sq()).sqrt()
    r14 = x2 * (1.0 + z4.sq()).sqrt()
    r34 = x2 * (z3 - z4)
    R12, R13 = r12.pow_real(-A), r13.pow_real(-A)
    R14, R34 = r14.pow_real(-A), r34.pow_real(-A)
    mu31, mu41 = mass_ratio_terms(z3, z4, A)
    if not (mu31.is_positive() and mu41.is_positive()):
        raise IntervalDomainError("mass-ratio enclosures not strictly positive")
    return KiteQuantities(A, x2, y3, y4, r12, r13, r14, r34,
                          R12, R13, R14, R34,
                          R12 - 1.0, R13 - 1.0, R14 - 1.0, R34 - 1.0, mu31, mu41)


def certify_hs_index(z3: Interval, z4: Interval,
                     params: PotentialParams) -> CertifiedIndex:
    """Index of H_s over the box, decided by the signs of det and trace."""
    if box_admissible(z3, z4) is None:
        return CertifiedIndex(None, "box not verified inside one admissible class")
    x2 = certify_kite_scale(z3, z4, params)
    if x2 is None:
        return CertifiedIndex(None, "no verified scale enclosure")
    try:
        q = interval_kite_quantities(z3, z4, x2, params)
        h11, h22, h12 = hs_explicit(q)
    except (IntervalError, IntervalDomainError) as exc:
        return CertifiedIndex(None, f"interval evaluation failed: {exc}")
    det = h11 * h22 - h12.sq()
    tr = h11 + h22
    if det.is_positive() and tr.is_positive():
        return CertifiedIndex(0, "det(Hs) > 0 and tr(Hs) > 0")
    if det.is_positive() and tr.is_negative():
        return CertifiedIndex(2, "det(Hs) > 0 and tr(Hs) < 0")
    if det.is_negative():
        return CertifiedIndex(1, "det(Hs) < 0")
    return CertifiedIndex(None, "sign of det/tr undecided over the box")


class _IntervalKiteTable:
    """Pair-table protocol over intervals for the generic twist entries."""

    def __init__(self, q: KiteQuantities):
        z = Interval(0.0)
        self.qx = [-q.x2, q.x2, z, z]
        self.qy = [z, z, q.y3, q.y4]
        self.zero = z
        A = q.A
        self.r = {}
        self.R = {}
        self.S = {}
        self.T = {}
        dist = {(0, 1): q.r12, (0, 2): q.r13, (1, 2): q.r13,
                (0, 3): q.r14, (1, 3): q.r14, (2, 3): q.r34}
        for (i, j), r in dist.items():
            R = {(0, 1): q.R12, (0, 2): q.R13, (1, 2): q.R13,
                 (0, 3): q.R14, (1, 3): q.R14, (2, 3): q.R34}[(i, j)]
            T = r.pow_real(-A - 2.0)
            for key in ((i, j), (j, i)):
                self.r[key] = r
                self.R[key] = R
                self.S[key] = R - 1.0
                self.T[key] = T

    def lam(self, i, j, k):
        dxij = self.qx[i] - self.qx[j]
        dyij = self.qy[i] - self.qy[j]
        dxik = self.qx[i] - self.qx[k]
        dyik = self.qy[i] - self.qy[k]
        return dxij * dyik - dxik * dyij

    def dot(self, i, j, k, l):
        return ((self.qx[i] - self.qx[j]) * (self.qx[k] - self.qx[l])
                + (self.qy[i] - self.qy[j]) * (self.qy[k] - self.qy[l]))


def interval_ha_matrix(q: KiteQuantities) -> list[list[Interval]]:
    """Entries of H_a over the symmetry-adapted basis (a3, a4, t34).

    The reduced combinations use the kite's reflection symmetry
    (v23^T H v24 = v13^T H v14 etc.), which holds exactly for the
    mirror-symmetric interval coordinates.
    """
    t = _IntervalKiteTable(q)
    m = [Interval(1.0), Interval(1.0), q.mu31, q.mu41]
    A = q.A
    sqrt2 = Interval(2.0).sqrt()
    a11 = _norm_diag(t, m, A, 0, 2) + _norm_share(t, m, A, 2, 0, 1)
    a22 = _norm_diag(t, m, A, 0, 3) + _norm_share(t, m, A, 3, 0, 1)
    a33 = _norm_diag(t, m, A, 2, 3)
    a12 = _norm_share(t, m, A, 0, 2, 3) + _norm_disjoint(t, m, A, 0, 2, 1, 3)
    a13 = sqrt2 * _norm_share(t, m, A, 2, 0, 3)
    a23 = sqrt2 * _norm_share(t, m, A, 3, 0, 2)
    return [[a11, a12, a13], [a12, a22, a23], [a13, a23, a33]]


def _interval_matmul(A_, B_):
    n = len(A_)
    return [[sum((A_[i][k] * B_[k][j] for k in range(n)), Interval(0.0))
             for j in range(n)] for i in range(n)]


def certify_ha_index(z3: Interval, z4: Interval,
                     params: PotentialParams) -> CertifiedIndex:
    """Deflated index of H_a over the box (rotational zero excluded)."""
    if box_admissible(z3, z4) is None:
        return CertifiedIndex(None, "box not verified inside one admissible class")
    x2 = certify_kite_scale(z3, z4, params)
    if x2 is None:
        return CertifiedIndex(None, "no verified scale enclosure")
    try:
        q = interval_kite_quantities(z3, z4, x2, params)
        H = interval_ha_matrix(q)
    except (IntervalError, IntervalDomainError) as exc:
        return CertifiedIndex(None, f"interval evaluation failed: {exc}")

    # approximate kernel direction from a float evaluation at the midpoint
    try:
        kite_mid = build_kite(KiteShape(z3.mid, z4.mid), params)
        ha_mid = kite_blocks(kite_mid, params).h_a
    except KiteError as exc:
        return CertifiedIndex(None, f"midpoint evaluation failed: {exc}")
    w, vecs = np.linalg.eigh(ha_mid)
    u = vecs[:, int(np.argmin(np.abs(w)))]

    # exactly orthogonal Householder reflector from float data: Q e1 ~ +-u
    v = u.copy()
    v[0] += math.copysign(np.linalg.norm(u), u[0] if u[0] != 0.0 else 1.0)
    vi = [Interval(float(c)) for c in v]
    vtv = vi[0].sq() + vi[1].sq() + vi[2].sq()
    Q = [[(1.0 if a == b else 0.0) - 2.0 * vi[a] * vi[b] / vtv
          for b in range(3)] for a in range(3)]
    Qt = [[Q[b][a] for b in range(3)] for a in range(3)]
    M = _interval_matmul(Qt, _interval_matmul(H, Q))

    b1 = M[1][0].intersect(M[0][1])
    b2 = M[2][0].intersect(M[0][2])
    rho_sq = b1.sq() + b2.sq()
    rho = _up(math.sqrt(rho_sq.hi))
    rot = M[0][0].widened(rho)
    if not rot.contains_zero():
        return CertifiedIndex(None, "pivot enclosure does not contain the rotational zero")

    c11, c22 = M[1][1], M[2][2]
    c12 = M[1][2].intersect(M[2][1])
    disc = (c11 - c22).sq() + 4.0 * c12.sq()
    disc = Interval(max(disc.lo, 0.0), disc.hi)
    root = disc.sqrt()
    lam_hi = ((c11 + c22 + root) * 0.5).widened(rho)
    lam_lo = ((c11 + c22 - root) * 0.5).widened(rho)
    decided = []
    for lam in (lam_lo, lam_hi):
        if lam.is_negative():
            decided.append(-1)
        elif lam.is_positive():
            decided.append(1)
        else:
            return CertifiedIndex(None, "deflated eigenvalue enclosure straddles zero")
    idx = sum(1 for s in decided if s < 0)
    return CertifiedIndex(idx, f"deflated eigenvalues signs {decided}, rho = {rho:.3e}")


def certify_box(z3: Interval, z4: Interval, params: PotentialParams) -> BoxCertificate:
    return BoxCertificate(z3, z4,
                          certify_hs_index(z3, z4, params),
                          certify_ha_index(z3, z4, params))
