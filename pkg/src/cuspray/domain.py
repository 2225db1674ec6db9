"""Ideal-polygon fundamental domains: labels, side pairings, validation, IO.

A domain is given by 2d ideal vertices in clockwise order on the circle
(the first one at angle 0, i.e. at infinity on the line), one side arc per
letter, a generator per letter pairing opposite sides, a distinguished
parabolic letter whose generator is the cusp translation, the cusp width,
and the Margulis height.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import mpmath as mp

from .errors import InvalidDomain, ParseError, UnboundedDisc
from .moebius import DiskPoint, MoebiusMap, cayley, inv_cayley
from .scalars import INF, ExtendedReal, RealScalar

__all__ = [
    "Letter",
    "Arc",
    "IdealPolygonDomain",
    "ValidationReport",
    "validate",
    "builtin_thrice_punctured",
    "load_domain",
    "domain_to_dict",
    "save_domain",
    "arc_of_letter",
]


@dataclass(frozen=True)
class Letter:
    """One of the 2d side labels; bar flags the involution partner."""

    index: int
    bar: bool
    base: str

    @property
    def name(self) -> str:
        return self.base + "~" if self.bar else self.base

    def barred(self) -> "Letter":
        return Letter(self.index, not self.bar, self.base)

    def __repr__(self):
        return f"Letter({self.name})"


@dataclass(frozen=True)
class Arc:
    """A closed circle arc from `left` to `right` walking clockwise."""

    left: DiskPoint
    right: DiskPoint

    @property
    def length(self) -> mp.mpf:
        return self.left.clockwise_to(self.right)

    def midpoint(self) -> DiskPoint:
        return DiskPoint(self.left.angle - self.length / 2,
                         (self.left.err + self.right.err) / 2)

    def contains(self, p: DiskPoint, tol=0) -> bool:
        return self.left.clockwise_to(p) <= self.length + mp.mpf(tol)

    def half_length(self) -> mp.mpf:
        return self.length / 2


@dataclass
class ConditionResult:
    name: str
    passed: bool
    residual: float
    detail: str = ""


@dataclass
class ValidationReport:
    conditions: list[ConditionResult] = field(default_factory=list)
    margulis_note: str = ""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def add(self, name: str, passed: bool, residual, detail: str = "") -> None:
        self.conditions.append(ConditionResult(name, bool(passed), float(residual), detail))

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "conditions": [
                {"name": c.name, "passed": c.passed, "residual": c.residual, "detail": c.detail}
                for c in self.conditions
            ],
            "margulis_note": self.margulis_note,
        }


class IdealPolygonDomain:
    """A validated ideal polygon with labeled, paired sides."""

    def __init__(
        self,
        base_names: list[str],
        side_order_names: list[str],
        vertices_h: list[ExtendedReal],
        generators_by_name: dict[str, MoebiusMap],
        eta_name: str,
        mu: RealScalar,
        margulis: RealScalar,
    ):
        self.d = len(base_names)
        if self.d < 2:
            raise InvalidDomain("need at least 2 base letters (4 sides)")
        if len(side_order_names) != 2 * self.d or len(vertices_h) != 2 * self.d:
            raise InvalidDomain("side order and vertex count must both equal 2d")

        self.base_names = tuple(base_names)
        letters = {}
        for i, base in enumerate(base_names):
            letters[base] = Letter(i, False, base)
            letters[base + "~"] = Letter(i, True, base)
        self._by_name = letters
        self.alphabet = tuple(letters[n] for n in sorted(letters, key=lambda s: (letters[s].index, letters[s].bar)))

        try:
            self.side_order = tuple(letters[n] for n in side_order_names)
        except KeyError as exc:
            raise InvalidDomain(f"unknown letter in side order: {exc}") from exc
        if len(set(self.side_order)) != 2 * self.d:
            raise InvalidDomain("side order must list every letter exactly once")
        self.pos = {letter: k for k, letter in enumerate(self.side_order)}

        self.eta = letters.get(eta_name)
        if self.eta is None:
            raise InvalidDomain("eta not designated")
        self.mu = mu
        self.margulis = margulis

        gens: dict[Letter, MoebiusMap] = {}
        for name, m in generators_by_name.items():
            if name not in letters:
                raise InvalidDomain(f"generator for unknown letter {name}")
            gens[letters[name]] = m
        for base in base_names:
            plain, barred = letters[base], letters[base + "~"]
            if plain in gens and barred not in gens:
                gens[barred] = gens[plain].inverse()
            elif barred in gens and plain not in gens:
                gens[plain] = gens[barred].inverse()
        missing = [l.name for l in self.side_order if l not in gens]
        if missing:
            raise InvalidDomain(f"missing generators for {missing}")
        self.generators = gens

        self.vertices_h = tuple(vertices_h)
        self.vertices_disk = tuple(cayley(v) for v in vertices_h)
        n = 2 * self.d
        self.arcs = {
            self.side_order[k]: Arc(self.vertices_disk[k], self.vertices_disk[(k + 1) % n])
            for k in range(n)
        }
        # clockwise positions of vertices measured from angle 0
        two_pi = 2 * mp.pi
        self._vertex_pos = []
        for p in self.vertices_disk:
            t = mp.fmod(-p.angle, two_pi)
            if t < 0:
                t += two_pi
            self._vertex_pos.append(t)

        # cuspidal chain tables: the unique continuation sharing the left
        # (resp. right) arc endpoint
        self.left_next = {}
        self.right_next = {}
        for lam in self.side_order:
            j = self.pos[lam.barred()]
            self.left_next[lam] = self.side_order[(j + 1) % n]
            self.right_next[lam] = self.side_order[(j - 1) % n]

    # -- lookups -----------------------------------------------------------

    def letter(self, name: str) -> Letter:
        try:
            return self._by_name[name]
        except KeyError as exc:
            raise ParseError(f"unknown letter {name!r}") from exc

    def gen(self, letter: Letter) -> MoebiusMap:
        return self.generators[letter]

    def arc(self, letter: Letter) -> Arc:
        return self.arcs[letter]

    def vertex_index_left_of(self, letter: Letter) -> int:
        """Index of the vertex that is the left endpoint of the letter's arc."""
        return self.pos[letter]

    def children_clockwise(self, last: Letter) -> list[Letter]:
        """Admissible continuations of a word ending in `last`, in the
        clockwise order their subarcs appear inside the parent arc."""
        j = self.pos[last.barred()]
        n = 2 * self.d
        return [self.side_order[(j + 1 + t) % n] for t in range(n - 1)]

    def word_map(self, letters) -> MoebiusMap:
        m = None
        for letter in letters:
            g = self.generators[letter]
            m = g if m is None else m.compose(g)
        if m is None:
            raise ValueError("empty word")
        return m

    def to_line(self, p: DiskPoint) -> ExtendedReal:
        return inv_cayley(p)

    def to_circle(self, x: ExtendedReal) -> DiskPoint:
        return cayley(x)

    def locate(self, p: DiskPoint, tie_tol=0) -> tuple[Letter, int]:
        """Arc containing p, plus the index of the vertex p is nearest to
        when it sits on an endpoint (signalled by the caller's tolerance)."""
        two_pi = 2 * mp.pi
        t = mp.fmod(-p.angle, two_pi)
        if t < 0:
            t += two_pi
        n = 2 * self.d
        lo, hi = 0, n
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if self._vertex_pos[mid] <= t:
                lo = mid
            else:
                hi = mid
        k = lo
        band = mp.mpf(tie_tol) + p.err
        # distance to flanking vertices along the circle
        d_prev = t - self._vertex_pos[k]
        d_next = (self._vertex_pos[(k + 1) % n] - t) if k + 1 < n else (two_pi - t)
        if d_prev <= band:
            return self.side_order[k], k
        if d_next <= band:
            return self.side_order[k], (k + 1) % n
        return self.side_order[k], -1

    def __repr__(self):
        return (f"IdealPolygonDomain(d={self.d}, mu={mp.nstr(self.mu.value, 8)}, "
                f"eta={self.eta.name})")


def arc_of_letter(domain: IdealPolygonDomain, letter: Letter) -> Arc:
    return domain.arc(letter)


# -- validation -------------------------------------------------------------


def _supporting_disc(arc: Arc) -> tuple[mp.mpc, mp.mpf]:
    """Center and radius of the Euclidean disc whose boundary carries the
    geodesic side under `arc`; raises when the side is a diameter."""
    length = arc.length
    if abs(length - mp.pi) < mp.mpf(10) * mp.eps:
        raise UnboundedDisc("side is a diameter; supporting disc unbounded")
    mid_angle = arc.left.angle - length / 2
    dist = 1 / mp.cos(length / 2)
    radius = abs(mp.tan(length / 2))
    center = mp.mpc(mp.cos(mid_angle), mp.sin(mid_angle)) * dist
    return center, radius


def validate(domain: IdealPolygonDomain, tol: float = 1e-10) -> ValidationReport:
    """Check the five construction conditions plus the pairing identities."""
    report = ValidationReport()
    tol = mp.mpf(tol)

    # condition 1: ideal polygon with first vertex at angle 0 (= infinity)
    res1 = abs(domain.vertices_disk[0].angle)
    order_ok = all(
        domain._vertex_pos[k] < domain._vertex_pos[k + 1]
        for k in range(2 * domain.d - 1)
    )
    total = sum(domain.arcs[l].length for l in domain.side_order)
    res_tiling = abs(total - 2 * mp.pi)
    report.add("vertex_anchor_and_order", res1 <= tol and order_ok and res_tiling <= tol,
               max(res1, res_tiling), "first vertex at infinity, clockwise tiling")

    # condition 2: eta generator is the cusp translation z -> z + mu
    p_expected = MoebiusMap(RealScalar(1), domain.mu, RealScalar(0), RealScalar(1))
    g_eta = domain.gen(domain.eta)
    res2 = max(
        abs(x.value - y.value)
        for x, y in zip(g_eta.entries(), p_expected.entries())
    ) if g_eta.a.value > 0 else mp.mpf(2)
    eta_anchored = (domain.vertex_index_left_of(domain.eta) == 0
                    and domain.pos[domain.eta.barred()] == 2 * domain.d - 1)
    report.add("parabolic_generator", res2 <= tol and eta_anchored, res2,
               "g_eta is the width-mu translation and its sides share the vertex at infinity")

    # condition 3: the neighbors of infinity map to +/- mu/2
    half = domain.mu / RealScalar(2)
    v1 = domain.vertices_h[1]
    v_last = domain.vertices_h[2 * domain.d - 1]
    if v1.is_infinity or v_last.is_infinity:
        report.add("cusp_neighbors", False, 1.0, "neighbor vertex at infinity")
    else:
        res3 = max(abs(v1.unwrap().value - half.value),
                   abs(v_last.unwrap().value + half.value))
        report.add("cusp_neighbors", res3 <= tol, res3,
                   "vertices adjacent to infinity sit at +/- mu/2")

    # condition 4: the disk origin is interior to the polygon
    margin = None
    for letter in domain.side_order:
        try:
            center, radius = _supporting_disc(domain.arcs[letter])
        except UnboundedDisc:
            margin = mp.mpf(0)
            break
        m = abs(center) - radius
        margin = m if margin is None else min(margin, m)
    report.add("origin_interior", margin > tol, min(margin, 1),
               "origin clears every side's supporting disc")

    # condition 5: every side arc is shorter than a half circle
    max_len = max(domain.arcs[l].length for l in domain.side_order)
    res5 = mp.pi - max_len
    report.add("arcs_below_half_circle", res5 > tol, min(res5, 1),
               "all side arcs strictly shorter than pi")

    # pairing identities on arc endpoints
    worst = mp.mpf(0)
    for letter in domain.side_order:
        g = domain.gen(letter)
        bar_arc = domain.arcs[letter.barred()]
        arc = domain.arcs[letter]
        for img, target in ((g.apply_disk(bar_arc.right), arc.left),
                            (g.apply_disk(bar_arc.left), arc.right)):
            gap = img.clockwise_to(target)
            worst = max(worst, min(gap, 2 * mp.pi - gap))
    report.add("side_pairing", worst <= tol, worst,
               "each generator carries its partner side's endpoints to its own")

    # involution / inverse consistency
    inv_ok = all(
        domain.gen(l.barred()).proj_equal(domain.gen(l).inverse(), tol)
        for l in domain.side_order
    )
    report.add("involution", inv_ok, 0 if inv_ok else 1,
               "barred generators are inverses")

    # Margulis height: isometric-circle images of the horoball stay below it
    min_c = _min_lower_left_entry(domain)
    if min_c is None:
        report.margulis_note = "no generator moves the cusp; margulis unchecked"
    else:
        res_m = abs(domain.margulis.value * min_c - 1)
        note = "" if res_m <= mp.mpf("1e-9") else (
            f"margulis height {mp.nstr(domain.margulis.value, 8)} differs from "
            f"1/min|c| = {mp.nstr(1 / min_c, 8)}"
        )
        report.add("margulis_height", res_m <= mp.mpf("1e-9"), res_m,
                   "horoball images below the horoball")
        report.margulis_note = note or "normalized"
    return report


def _min_lower_left_entry(domain: IdealPolygonDomain, depth: int = 4) -> mp.mpf | None:
    """Min |c| over reduced words up to `depth` whose maps move infinity."""
    best = None
    stack = [(letter, domain.gen(letter)) for letter in domain.side_order]
    for _ in range(depth - 1):
        new_stack = []
        for last, m in stack:
            c = abs(m.c.value)
            if c > m.c.err:
                best = c if best is None else min(best, c)
            for nxt in domain.children_clockwise(last):
                new_stack.append((nxt, m.compose(domain.gen(nxt))))
        stack = new_stack
    for last, m in stack:
        c = abs(m.c.value)
        if c > m.c.err:
            best = c if best is None else min(best, c)
    return best


# -- built-in domain ---------------------------------------------------------


def builtin_thrice_punctured(normalized: bool = True) -> IdealPolygonDomain:
    """The thrice-punctured sphere.

    The normalized model has Margulis height 1: cusp width 4, translation
    z -> z + 4 and the pairing z -> z/(z + 1), polygon vertices at
    infinity, 2, 0, -2.  The raw model is the half-width variant (vertices
    at infinity, 1, 0, -1; width 2; Margulis height 1/2), the image of the
    disk quadrilateral with vertices at the fourth roots of unity.
    """
    if normalized:
        p = MoebiusMap(1, 4, 0, 1)
        q = MoebiusMap(1, 0, 1, 1)
        verts = [INF, ExtendedReal.of(2), ExtendedReal.of(0), ExtendedReal.of(-2)]
        mu, m = RealScalar(4), RealScalar(1)
    else:
        p = MoebiusMap(1, 2, 0, 1)
        q = MoebiusMap(1, 0, 2, 1)
        verts = [INF, ExtendedReal.of(1), ExtendedReal.of(0), ExtendedReal.of(-1)]
        mu, m = RealScalar(2), RealScalar("0.5")
    return IdealPolygonDomain(
        base_names=["e", "b"],
        side_order_names=["e", "b", "b~", "e~"],
        vertices_h=verts,
        generators_by_name={"e": p, "b": q},
        eta_name="e",
        mu=mu,
        margulis=m,
    )


BUILTINS = {"t3sphere": lambda: builtin_thrice_punctured(True),
            "t3sphere-raw": lambda: builtin_thrice_punctured(False)}


# -- serialization ------------------------------------------------------------


def _scalar_str(x: RealScalar) -> str:
    v = x.value
    if v == mp.floor(v) and abs(v) < mp.mpf(10) ** 30:
        return str(int(v))
    return mp.nstr(v, 40, strip_zeros=True)


def _ext_str(x: ExtendedReal) -> str:
    return "inf" if x.is_infinity else _scalar_str(x.unwrap())


def _parse_ext(text: str) -> ExtendedReal:
    if text.strip() in ("inf", "+inf", "Infinity"):
        return INF
    return ExtendedReal(RealScalar.from_decimal(text.strip()))


def domain_to_dict(domain: IdealPolygonDomain) -> dict:
    return {
        "d": domain.d,
        "letters": [
            {"name": l.name, "bar_of": l.barred().name} for l in domain.alphabet
        ],
        "generators": {
            base: [
                [_scalar_str(domain.gen(domain.letter(base)).a),
                 _scalar_str(domain.gen(domain.letter(base)).b)],
                [_scalar_str(domain.gen(domain.letter(base)).c),
                 _scalar_str(domain.gen(domain.letter(base)).d)],
            ]
            for base in domain.base_names
        },
        "eta": domain.eta.name,
        "mu": _scalar_str(domain.mu),
        "margulis": _scalar_str(domain.margulis),
        "side_order": [l.name for l in domain.side_order],
        "vertices": [_ext_str(v) for v in domain.vertices_h],
    }


def save_domain(domain: IdealPolygonDomain, path) -> None:
    Path(path).write_text(json.dumps(domain_to_dict(domain), indent=2))


def load_domain(source, tol: float = 1e-10) -> IdealPolygonDomain:
    """Load and validate a domain from a dict, JSON string, or file path."""
    if isinstance(source, dict):
        data = source
    else:
        text = Path(source).read_text() if Path(str(source)).exists() else str(source)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad domain JSON: {exc}") from exc

    for key in ("d", "letters", "generators", "eta", "mu", "margulis",
                "side_order", "vertices"):
        if key not in data:
            if key == "eta":
                raise InvalidDomain("eta not designated")
            raise InvalidDomain(f"missing field {key!r}")

    names = [entry["name"] for entry in data["letters"]]
    base_names = [n for n in names if not n.endswith("~")]
    for entry in data["letters"]:
        expected = entry["name"][:-1] if entry["name"].endswith("~") else entry["name"] + "~"
        if entry.get("bar_of") != expected:
            raise InvalidDomain("bar table is not an involution")
    if len(base_names) != int(data["d"]):
        raise InvalidDomain("letter count does not match d")

    gens = {}
    for name, rows in data["generators"].items():
        entries = [RealScalar.from_decimal(str(x)) for row in rows for x in row]
        gens[name] = MoebiusMap(*entries)

    domain = IdealPolygonDomain(
        base_names=base_names,
        side_order_names=list(data["side_order"]),
        vertices_h=[_parse_ext(str(v)) for v in data["vertices"]],
        generators_by_name=gens,
        eta_name=str(data["eta"]),
        mu=RealScalar.from_decimal(str(data["mu"])),
        margulis=RealScalar.from_decimal(str(data["margulis"])),
    )
    report = validate(domain, tol=tol)
    if not report.passed:
        bad = [c.name for c in report.conditions if not c.passed]
        raise InvalidDomain(f"domain failed validation: {bad}")
    return domain
