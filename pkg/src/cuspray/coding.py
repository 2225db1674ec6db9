"""Boundary expansions: the expanding circle map, nested arcs, cutting
sequences, letter streams, and normalized geodesics.

Words are finite sequences of letters subject to no-backtracking (a letter
is never followed by its involution partner).  Streams generate letters on
demand so bi-infinite witness words never need materialization.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import mpmath as mp

from .domain import Arc, IdealPolygonDomain, Letter
from .errors import (CuspidalBoundary, DoesNotMeetDomain, InadmissibleWord,
                     ParseError, PoleProximity)
from .moebius import DiskPoint, GeodesicH, MoebiusMap
from .scalars import ExtendedReal, RealScalar

__all__ = [
    "Word",
    "LetterStream",
    "BiInfiniteWordSpec",
    "parse_word",
    "format_word",
    "bs_step",
    "expand",
    "arc_of_word",
    "point_of_stream",
    "endpoint_forward",
    "endpoint_backward",
    "cutting_sequence",
    "normalized_geodesic",
    "random_admissible_word",
]


class Word:
    """An immutable finite letter sequence."""

    __slots__ = ("letters",)

    def __init__(self, letters):
        self.letters = tuple(letters)

    def is_admissible(self) -> bool:
        return all(
            self.letters[i + 1] != self.letters[i].barred()
            for i in range(len(self.letters) - 1)
        )

    def require_admissible(self) -> "Word":
        if not self.is_admissible():
            raise InadmissibleWord(f"backtracking in {format_word(self)}")
        return self

    def bar_reversed(self) -> "Word":
        return Word(tuple(l.barred() for l in reversed(self.letters)))

    def __len__(self):
        return len(self.letters)

    def __getitem__(self, i):
        got = self.letters[i]
        return Word(got) if isinstance(i, slice) else got

    def __iter__(self):
        return iter(self.letters)

    def __add__(self, other):
        other_letters = other.letters if isinstance(other, Word) else tuple(other)
        return Word(self.letters + other_letters)

    def __eq__(self, other):
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return f"Word({format_word(self)})"


def parse_word(domain: IdealPolygonDomain, text: str) -> Word:
    """Parse whitespace-separated letter names ('~' suffix for barred)."""
    names = text.split()
    if not names:
        raise ParseError("empty word text")
    return Word([domain.letter(n) for n in names])


def format_word(w: Word) -> str:
    return " ".join(l.name for l in w.letters)


class LetterStream:
    """A finite or lazily generated admissible letter sequence.

    Sources: an explicit word, an eventually periodic description, or the
    itinerary of a boundary point under the expanding map.
    """

    def __init__(self, kind: str, *, word: Word | None = None,
                 preperiod: Word | None = None, period: Word | None = None,
                 domain: IdealPolygonDomain | None = None,
                 point: DiskPoint | None = None):
        self.kind = kind
        self.word = word
        self.preperiod = preperiod
        self.period = period
        self.domain = domain
        self.point = point
        self._cache: list[Letter] = []
        self._state: DiskPoint | None = point
        if kind == "periodic":
            if not period or len(period) == 0:
                raise InadmissibleWord("empty period")
            joined = Word((preperiod.letters if preperiod else ()) +
                          period.letters + period.letters)
            joined.require_admissible()
        elif kind == "explicit":
            word.require_admissible()

    # -- constructors ------------------------------------------------------

    @classmethod
    def explicit(cls, word: Word) -> "LetterStream":
        return cls("explicit", word=word)

    @classmethod
    def periodic(cls, period: Word, preperiod: Word | None = None) -> "LetterStream":
        return cls("periodic", preperiod=preperiod, period=period)

    @classmethod
    def from_point(cls, domain: IdealPolygonDomain, point: DiskPoint) -> "LetterStream":
        return cls("from_point", domain=domain, point=point)

    @classmethod
    def parse(cls, domain: IdealPolygonDomain, text: str) -> "LetterStream":
        """Parse `pre | period` or a plain explicit word."""
        if "|" in text:
            pre_text, per_text = text.split("|", 1)
            pre = parse_word(domain, pre_text) if pre_text.strip() else None
            return cls.periodic(parse_word(domain, per_text), pre)
        return cls.explicit(parse_word(domain, text))

    # -- access ------------------------------------------------------------

    def __len__(self):
        if self.kind == "explicit":
            return len(self.word)
        raise TypeError("infinite stream has no length")

    @property
    def finite(self) -> bool:
        return self.kind == "explicit"

    def letter(self, i: int) -> Letter:
        if i < 0:
            raise IndexError(i)
        if self.kind == "explicit":
            if i >= len(self.word):
                raise IndexError(f"explicit stream exhausted at {i}")
            return self.word[i]
        if self.kind == "periodic":
            pre = self.preperiod.letters if self.preperiod else ()
            if i < len(pre):
                return pre[i]
            return self.period.letters[(i - len(pre)) % len(self.period)]
        while len(self._cache) <= i:
            letter, self._state = bs_step(self.domain, self._state)
            self._cache.append(letter)
        return self._cache[i]

    def prefix(self, n: int) -> Word:
        return Word([self.letter(i) for i in range(n)])

    def as_dict(self) -> dict:
        if self.kind == "explicit":
            return {"kind": "explicit", "word": format_word(self.word)}
        if self.kind == "periodic":
            return {
                "kind": "periodic",
                "preperiod": format_word(self.preperiod) if self.preperiod else "",
                "period": format_word(self.period),
            }
        return {"kind": "from_point", "angle": mp.nstr(self.point.angle, 40)}

    @classmethod
    def from_dict(cls, domain: IdealPolygonDomain, data: dict) -> "LetterStream":
        if data["kind"] == "explicit":
            return cls.explicit(parse_word(domain, data["word"]))
        if data["kind"] == "periodic":
            pre = parse_word(domain, data["preperiod"]) if data.get("preperiod") else None
            return cls.periodic(parse_word(domain, data["period"]), pre)
        return cls.from_point(domain, DiskPoint(mp.mpf(data["angle"])))


class BiInfiniteWordSpec:
    """A two-sided word: letters at indices n >= 0 come from `nonnegative`;
    the stream `negative` holds the bar-reversed past, i.e. its k-th letter
    is the involution of the letter at index -1-k."""

    def __init__(self, negative: LetterStream, nonnegative: LetterStream):
        self.negative = negative
        self.nonnegative = nonnegative
        if negative.letter(0) == nonnegative.letter(0):
            raise InadmissibleWord("junction backtracks at index 0")

    def letter(self, n: int) -> Letter:
        if n >= 0:
            return self.nonnegative.letter(n)
        return self.negative.letter(-1 - n).barred()

    def forward_word(self, start: int, length: int) -> Word:
        return Word([self.letter(start + i) for i in range(length)])

    def backward_word(self, start: int, length: int) -> Word:
        """Letters at start-1, start-2, ... bar-reversed (a past expansion)."""
        return Word([self.letter(start - 1 - i).barred() for i in range(length)])

    @classmethod
    def from_period(cls, period: Word) -> "BiInfiniteWordSpec":
        """The bi-infinite periodic extension of a cyclically admissible word."""
        period.require_admissible()
        if period[-1] == period[0].barred():
            raise InadmissibleWord("period does not close up")
        return cls(
            negative=LetterStream.periodic(period.bar_reversed()),
            nonnegative=LetterStream.periodic(period),
        )


# -- the expanding map --------------------------------------------------------


def bs_step(domain: IdealPolygonDomain, xi: DiskPoint,
            tie_tol=0) -> tuple[Letter, DiskPoint]:
    """One step of the expanding boundary map: find the arc containing the
    point and pull back by that side's generator."""
    letter, vertex = domain.locate(xi, tie_tol=tie_tol)
    if vertex >= 0:
        raise CuspidalBoundary(
            f"point at angle {mp.nstr(xi.angle, 12)} sits on vertex {vertex}",
            index=vertex,
        )
    return letter, domain.gen(letter).inverse().apply_disk(xi)


def expand(domain: IdealPolygonDomain, xi: DiskPoint, depth: int,
           tie_tol=0) -> Word:
    """First `depth` itinerary letters of a boundary point."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    letters = []
    point = xi
    for i in range(depth):
        try:
            letter, point = bs_step(domain, point, tie_tol=tie_tol)
        except CuspidalBoundary as exc:
            raise CuspidalBoundary(f"cuspidal at index {i}: {exc}", index=i) from exc
        letters.append(letter)
    return Word(letters)


def arc_of_word(domain: IdealPolygonDomain, w: Word) -> Arc:
    """The closed nested arc of all points whose expansion starts with w."""
    if len(w) == 0:
        raise InadmissibleWord("empty word has no arc")
    w.require_admissible()
    base = domain.arc(w[-1])
    if len(w) == 1:
        return base
    prefix = domain.word_map(w.letters[:-1])
    return Arc(prefix.apply_disk(base.left), prefix.apply_disk(base.right))


def point_of_stream(domain: IdealPolygonDomain, s: LetterStream,
                    depth: int) -> tuple[DiskPoint, RealScalar]:
    """Midpoint of the level-`depth` arc, with half its length as the bound."""
    w = s.prefix(depth + 1)
    arc = arc_of_word(domain, w)
    half = arc.half_length()
    mid = arc.midpoint()
    return DiskPoint(mid.angle, mid.err), RealScalar(half, 0)


def _arc_to_line(domain: IdealPolygonDomain, arc: Arc,
                 pole_tol=0) -> tuple[ExtendedReal, RealScalar]:
    """Transport an arc to the line; center value and half-width bound."""
    origin = DiskPoint(0)
    if origin.close_to(arc.left, pole_tol) or origin.close_to(arc.right, pole_tol):
        raise PoleProximity("arc endpoint touches the point over infinity")
    if arc.contains(origin):
        raise PoleProximity("arc contains the point over infinity")
    a = domain.to_line(arc.left).unwrap()
    b = domain.to_line(arc.right).unwrap()
    lo, hi = (b, a) if a.value >= b.value else (a, b)
    center = (lo + hi) / RealScalar(2)
    half = (hi - lo) / RealScalar(2)
    return ExtendedReal(center), RealScalar(half.value, half.err + center.err)


def endpoint_forward(domain: IdealPolygonDomain, s: LetterStream,
                     depth: int) -> tuple[ExtendedReal, RealScalar]:
    """Line value of the stream's limit point, with its truncation bound."""
    w = s.prefix(depth + 1)
    return _arc_to_line(domain, arc_of_word(domain, w))


def endpoint_backward(domain: IdealPolygonDomain, s: LetterStream,
                      depth: int) -> tuple[ExtendedReal, RealScalar]:
    """Backward-convention value: the forward value of the barred stream."""
    w = s.prefix(depth + 1)
    barred = Word([l.barred() for l in w])
    return _arc_to_line(domain, arc_of_word(domain, barred))


def cutting_sequence(domain: IdealPolygonDomain, g: GeodesicH,
                     window: tuple[int, int], tie_tol=0) -> Word:
    """Crossing letters of a geodesic through the polygon, indices
    window[0]..window[1] inclusive, index 0 being the first forward crossing."""
    j_min, j_max = window
    if j_min > j_max:
        raise ValueError("empty window")
    fwd_pt = domain.to_circle(g.forward)
    bwd_pt = domain.to_circle(g.backward)
    fwd_letter, _ = domain.locate(fwd_pt, tie_tol=tie_tol)
    bwd_letter, _ = domain.locate(bwd_pt, tie_tol=tie_tol)
    if fwd_letter == bwd_letter:
        raise DoesNotMeetDomain(
            f"both endpoints lie under the side {fwd_letter.name}"
        )
    letters = []
    if j_max >= 0:
        forward = expand(domain, fwd_pt, j_max + 1, tie_tol=tie_tol)
    if j_min < 0:
        backward = expand(domain, bwd_pt, -j_min, tie_tol=tie_tol)
    for j in range(j_min, j_max + 1):
        letters.append(forward[j] if j >= 0 else backward[-1 - j].barred())
    return Word(letters)


def normalized_geodesic(domain: IdealPolygonDomain, w: BiInfiniteWordSpec,
                        j: int, depth: int = 40
                        ) -> tuple[GeodesicH, RealScalar, RealScalar]:
    """The j-th renormalized geodesic: forward endpoint from the letters at
    j, j+1, ...; backward endpoint from the bar-reversed past.  Returns the
    geodesic and the two endpoint truncation bounds (backward, forward)."""
    fwd = LetterStream.explicit(w.forward_word(j, depth + 1))
    bwd = LetterStream.explicit(w.backward_word(j, depth + 1))
    y, y_err = endpoint_forward(domain, fwd, depth)
    x, x_err = endpoint_forward(domain, bwd, depth)
    return GeodesicH(x, y), x_err, y_err


def random_admissible_word(domain: IdealPolygonDomain, length: int,
                           rng: random.Random, run_cap: int | None = None,
                           cyclic: bool = False) -> Word:
    """A seeded random admissible word; optionally cap cuspidal runs and
    require cyclic admissibility (for use as a period)."""
    from .cuspidal import suffix_runs  # local import to avoid a cycle

    while True:
        letters: list[Letter] = []
        runs = (0, 0)
        for i in range(length):
            options = (list(domain.side_order) if i == 0
                       else domain.children_clockwise(letters[-1]))
            rng.shuffle(options)
            placed = False
            for cand in options:
                new_runs = suffix_runs(domain, letters[-1] if letters else None,
                                       runs, cand)
                if run_cap is not None and max(new_runs) > run_cap:
                    continue
                letters.append(cand)
                runs = new_runs
                placed = True
                break
            if not placed:
                break
        if len(letters) != length:
            continue
        word = Word(letters)
        if cyclic and (word[-1] == word[0].barred()):
            continue
        return word
