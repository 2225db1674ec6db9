"""Moebius transformations, boundary points, geodesics, and the disk model.

Matrices act on the upper half plane and its boundary line; the unit disk
is reached through the standard conjugation z -> (z - i)/(z + i), whose
boundary restriction identifies the extended line with the circle.
"""

from __future__ import annotations

import mpmath as mp

from .errors import AmbiguousClassification
from .scalars import INF, ExtendedReal, RealScalar

__all__ = [
    "MoebiusMap",
    "DiskPoint",
    "GeodesicH",
    "apply",
    "cayley",
    "inv_cayley",
    "cayley_point",
    "inv_cayley_point",
    "naive_height",
    "conjugate_normalize",
    "IDENTITY",
]

_PI = None


def _pi() -> mp.mpf:
    return +mp.pi


def _norm_angle(theta: mp.mpf) -> mp.mpf:
    """Normalize an angle to [-pi, pi)."""
    pi = _pi()
    t = mp.fmod(theta, 2 * pi)
    if t < -pi:
        t += 2 * pi
    elif t >= pi:
        t -= 2 * pi
    return t


class DiskPoint:
    """A point of the boundary circle, stored as an angle in [-pi, pi)."""

    __slots__ = ("angle", "err")

    def __init__(self, angle, err=0):
        self.angle = _norm_angle(mp.mpf(angle))
        self.err = mp.mpf(err)

    def unit(self) -> mp.mpc:
        return mp.mpc(mp.cos(self.angle), mp.sin(self.angle))

    def clockwise_to(self, other: "DiskPoint") -> mp.mpf:
        """Arc length walked clockwise from self to other, in [0, 2*pi)."""
        pi = _pi()
        d = mp.fmod(self.angle - other.angle, 2 * pi)
        if d < 0:
            d += 2 * pi
        return d

    def close_to(self, other: "DiskPoint", tol=0) -> bool:
        d = self.clockwise_to(other)
        gap = min(d, 2 * _pi() - d)
        return gap <= mp.mpf(tol) + self.err + other.err

    def __repr__(self):
        return f"DiskPoint({mp.nstr(self.angle, 15)})"


class MoebiusMap:
    """A projective real 2x2 matrix, normalized to determinant one.

    Two maps are equal iff the entries agree up to a global sign; the stored
    representative fixes the sign by making the first entry that is certainly
    nonzero positive.
    """

    __slots__ = ("a", "b", "c", "d", "_disk")

    def __init__(self, a, b, c, d, normalize: bool = True):
        a, b, c, d = (x if isinstance(x, RealScalar) else RealScalar(x) for x in (a, b, c, d))
        if normalize:
            det = a * d - b * c
            if not det.certainly_positive():
                raise ValueError(f"determinant not certainly positive: {det!r}")
            if det.value != 1:
                s = det.sqrt()
                a, b, c, d = a / s, b / s, c / s, d / s
            for entry in (a, b, c, d):
                if abs(entry.value) > entry.err:
                    if entry.value < 0:
                        a, b, c, d = -a, -b, -c, -d
                    break
        self.a, self.b, self.c, self.d = a, b, c, d
        self._disk = None

    # -- basic algebra -----------------------------------------------------

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        return MoebiusMap(a, b, c, d)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def trace(self) -> RealScalar:
        return self.a + self.d

    def det(self) -> RealScalar:
        return self.a * self.d - self.b * self.c

    def entries(self) -> tuple[RealScalar, RealScalar, RealScalar, RealScalar]:
        return (self.a, self.b, self.c, self.d)

    def proj_equal(self, other: "MoebiusMap", tol=1e-12) -> bool:
        tol = mp.mpf(tol)
        for flip in (1, -1):
            ok = True
            for x, y in zip(self.entries(), other.entries()):
                if abs(x.value - flip * y.value) > tol + x.err + y.err:
                    ok = False
                    break
            if ok:
                return True
        return False

    def __eq__(self, other):
        return isinstance(other, MoebiusMap) and self.proj_equal(other, tol=0)

    def __hash__(self):
        raise TypeError("MoebiusMap is unhashable; compare projectively")

    def __repr__(self):
        vals = ", ".join(mp.nstr(x.value, 12) for x in self.entries())
        return f"MoebiusMap({vals})"

    # -- actions -----------------------------------------------------------

    def apply(self, z: ExtendedReal) -> ExtendedReal:
        """Homographic image of a boundary point; total on the extended line."""
        if z.is_infinity:
            if self.c.contains_zero():
                return INF
            return ExtendedReal(self.a / self.c)
        x = z.unwrap()
        denom = self.c * x + self.d
        if abs(denom.value) <= denom.err:
            return INF
        return ExtendedReal((self.a * x + self.b) / denom)

    def apply_interior(self, z: mp.mpc) -> mp.mpc:
        a, b, c, d = (e.value for e in self.entries())
        return (a * z + b) / (c * z + d)

    def _disk_matrix(self) -> tuple[mp.mpc, mp.mpc, mp.mpc, mp.mpc]:
        """Conjugated complex matrix acting on the unit circle, det 1."""
        if self._disk is None:
            a, b, c, d = (e.value for e in self.entries())
            i = mp.mpc(0, 1)
            # C m C^-1 with C = [[1, -i], [1, i]] / sqrt(2i)
            A = (a + d) + (b - c) * i
            B = (a - d) - (b + c) * i
            C = (a - d) + (b + c) * i
            D = (a + d) - (b - c) * i
            self._disk = (A / 2, B / 2, C / 2, D / 2)
        return self._disk

    def apply_disk(self, p: DiskPoint) -> DiskPoint:
        A, B, C, D = self._disk_matrix()
        w = p.unit()
        denom = C * w + D
        w2 = (A * w + B) / denom
        # |map'(w)| = 1/|Cw + D|^2 for a det-1 matrix
        deriv = 1 / abs(denom) ** 2
        return DiskPoint(mp.atan2(w2.imag, w2.real), p.err * deriv + 4 * mp.eps)

    def classify(self) -> str:
        """One of identity / elliptic / parabolic / hyperbolic."""
        if self.b.value == 0 and self.c.value == 0 and self.a.value == self.d.value:
            return "identity"
        t = abs(self.trace())
        gap = t.value - 2
        if gap == 0:
            return "parabolic"
        if abs(gap) <= t.err:
            raise AmbiguousClassification(
                f"|trace| - 2 = {mp.nstr(gap, 5)} within error band {mp.nstr(t.err, 5)}"
            )
        return "hyperbolic" if gap > 0 else "elliptic"

    def fixed_points(self) -> list[ExtendedReal]:
        """Boundary fixed points; for hyperbolic maps [repelling, attracting]."""
        a, b, c, d = self.entries()
        if abs(c.value) <= c.err:
            # fixes infinity; other fixed point solves (a-d) x + b = 0
            pts = [INF]
            if abs((a - d).value) > (a - d).err:
                pts.append(ExtendedReal(b / (d - a)))
            # infinity attracts iff |a| > |d|; order is [repelling, attracting]
            if len(pts) == 2 and abs(a.value) > abs(d.value):
                pts.reverse()
            return pts
        disc = self.trace() * self.trace() - RealScalar(4)
        if disc.value < 0:
            return []
        root = disc.sqrt() if disc.value > 0 else RealScalar(0)
        two_c = RealScalar(2) * c
        x1 = (a - d - root) / two_c
        x2 = (a - d + root) / two_c
        if disc.value == 0:
            return [ExtendedReal(x1)]
        # attracting fixed point has |derivative| = 1/(c x + d)^2 < 1
        attract2 = abs(c * x2 + d).value > 1
        pair = [ExtendedReal(x1), ExtendedReal(x2)]
        return pair if attract2 else [pair[1], pair[0]]


IDENTITY = MoebiusMap(1, 0, 0, 1)


def apply(m: MoebiusMap, z: ExtendedReal) -> ExtendedReal:
    return m.apply(z)


def cayley(z: ExtendedReal) -> DiskPoint:
    """Boundary conjugation line -> circle; infinity maps to angle 0."""
    if z.is_infinity:
        return DiskPoint(0)
    x = z.unwrap()
    theta = mp.atan2(-2 * x.value, x.value * x.value - 1)
    deriv = 2 / (1 + x.value * x.value)
    return DiskPoint(theta, x.err * deriv + 4 * mp.eps)


def inv_cayley(p: DiskPoint) -> ExtendedReal:
    """Boundary conjugation circle -> line; angle 0 maps to infinity."""
    if p.angle == 0 and p.err == 0:
        return INF
    half = p.angle / 2
    s = mp.sin(half)
    if s == 0:
        return INF
    x = -mp.cos(half) / s
    deriv = (1 + x * x) / 2
    return ExtendedReal(RealScalar(x, p.err * deriv + _ulp_like(x)))


def _ulp_like(x: mp.mpf) -> mp.mpf:
    return mp.eps * max(mp.mpf(1), abs(x))


def cayley_point(z: mp.mpc) -> mp.mpc:
    """Interior conjugation: upper half plane -> unit disk."""
    i = mp.mpc(0, 1)
    return (z - i) / (z + i)


def inv_cayley_point(w: mp.mpc) -> mp.mpc:
    """Interior conjugation: unit disk -> upper half plane."""
    i = mp.mpc(0, 1)
    return i * (1 + w) / (1 - w)


class GeodesicH:
    """An oriented complete geodesic given by its two ideal endpoints."""

    __slots__ = ("backward", "forward")

    def __init__(self, backward: ExtendedReal, forward: ExtendedReal):
        if backward == forward:
            raise ValueError("geodesic endpoints must differ")
        self.backward = backward
        self.forward = forward

    def __repr__(self):
        return f"GeodesicH({self.backward!r} -> {self.forward!r})"


def naive_height(g: GeodesicH) -> ExtendedReal:
    """Half the endpoint gap (the Euclidean radius); infinite if an endpoint is."""
    if g.backward.is_infinity or g.forward.is_infinity:
        return INF
    return ExtendedReal(abs(g.backward.unwrap() - g.forward.unwrap()) / RealScalar(2))


def conjugate_normalize(
    group_gens: list[MoebiusMap], lam: RealScalar, nu: RealScalar
) -> tuple[list[MoebiusMap], RealScalar]:
    """Conjugate generators by [[lam, nu], [0, 1/lam]].

    Returns the conjugated generators together with the value-transport
    factor 1/lam^2: multiplying a Lagrange value computed in the conjugated
    frame by this factor returns it to the original frame.
    """
    lam = lam if isinstance(lam, RealScalar) else RealScalar(lam)
    nu = nu if isinstance(nu, RealScalar) else RealScalar(nu)
    if lam.contains_zero():
        raise ValueError("lambda must be nonzero")
    g_bar = MoebiusMap(lam, nu, RealScalar(0), RealScalar(1) / lam)
    g_inv = g_bar.inverse()
    conjugated = [g_bar.compose(g).compose(g_inv) for g in group_gens]
    scale = RealScalar(1) / (lam * lam)
    return conjugated, scale
