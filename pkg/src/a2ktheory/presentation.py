"""Triangle presentations: representation, file format, verification, search.

A triangle presentation compatible with a bijection ``lam: points -> lines``
is a set of ordered point triples ``(x, y, z)`` such that

(i)   ``(x, y)`` extends to a triple iff ``y`` lies on ``lam(x)``,
(ii)  the set is closed under ``(x, y, z) -> (y, z, x)``,
(iii) each pair ``(x, y)`` extends in at most one way.

Equivalently: draw the digraph with an arc ``x -> y`` whenever ``y`` is on
``lam(x)``. A presentation is a partition of its arcs (loops included) into
closed walks of length three. :func:`search` enumerates such partitions as an
exact-cover problem whose items are arcs and whose options are triangles.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import Interrupted, ParseError, ValidationError
from .plane import (
    ProjectivePlane,
    _int,
    _tokens,
    canonical_difference_set,
    canonical_plane,
    difference_set_plane,
    format_line_rows,
    parse_line_rows,
)

TORSION_CRITERION = "no-ξ³-relator"


def shift(triple):
    x, y, z = triple
    return (y, z, x)


@dataclass(frozen=True)
class PointLineCorrespondence:
    """A bijection from points to lines, ``lam[p]`` being the line of ``p``."""

    plane: ProjectivePlane
    lam: tuple

    def __post_init__(self):
        lam = tuple(self.lam)
        object.__setattr__(self, "lam", lam)
        n = self.plane.n
        if len(lam) != n or sorted(lam) != list(range(n)):
            raise ValueError("lambda must be a bijection from points to lines")

    @property
    def inverse(self):
        inv = [0] * len(self.lam)
        for p, l in enumerate(self.lam):
            inv[l] = p
        return tuple(inv)

    def __call__(self, point):
        return self.lam[point]

    def out_neighbours(self, point):
        """Points ``y`` with ``y`` on ``lam(point)``, ascending."""
        return self.plane.lines[self.lam[point]]

    @classmethod
    def identity(cls, plane):
        return cls(plane, tuple(range(plane.n)))


@dataclass(frozen=True)
class TrianglePresentation:
    """Plane, correspondence and lexicographically sorted triples.

    Construction does not validate; use :func:`verify` or
    :meth:`checked`.
    """

    correspondence: PointLineCorrespondence
    triples: tuple

    def __post_init__(self):
        object.__setattr__(self, "triples", tuple(sorted(set(map(tuple, self.triples)))))

    @property
    def plane(self):
        return self.correspondence.plane

    @property
    def q(self):
        return self.plane.q

    @property
    def lam(self):
        return self.correspondence.lam

    def __len__(self):
        return len(self.triples)

    def checked(self):
        report = verify(self)
        if not report.valid:
            raise ValidationError(report)
        return self


@dataclass(frozen=True)
class Violation:
    axiom: str  # "i", "ii", "iii", "range" or "count"
    message: str
    witness: tuple = ()

    def __str__(self):
        return f"axiom ({self.axiom}): {self.message} {self.witness}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    size: int = 0
    expected_size: int = 0

    @property
    def valid(self):
        return not self.violations

    def axioms(self):
        return sorted({v.axiom for v in self.violations})

    def summary(self):
        if self.valid:
            return f"valid: |T|={self.size}"
        return "invalid: " + "; ".join(str(v) for v in self.violations[:10]) + (
            f" (+{len(self.violations) - 10} more)" if len(self.violations) > 10 else "")


def verify(tp):
    """Check axioms (i)-(iii) exhaustively and report every violation."""
    plane, lam = tp.plane, tp.lam
    n, q = plane.n, plane.q
    report = ValidationReport(size=len(tp.triples), expected_size=(q + 1) * n)
    triples = set(tp.triples)
    bad = [t for t in tp.triples if any(not 0 <= x < n for x in t)]
    for t in bad:
        report.violations.append(Violation("range", "point index out of range", t))
    if bad:
        return report
    extensions = {}
    for x, y, z in tp.triples:
        extensions.setdefault((x, y), []).append(z)
    for (x, y), zs in sorted(extensions.items()):
        if not plane.incident(y, lam[x]):
            report.violations.append(Violation(
                "i", f"{y} is not incident to lambda({x}) = line {lam[x]}", (x, y)))
        if len(zs) > 1:
            report.violations.append(Violation(
                "iii", f"pair ({x}, {y}) extends to {len(zs)} points", (x, y, *zs)))
    for x in range(n):
        for y in plane.lines[lam[x]]:
            if (x, y) not in extensions:
                report.violations.append(Violation(
                    "i", f"allowed pair ({x}, {y}) extends to no triple", (x, y)))
    for t in tp.triples:
        if shift(t) not in triples:
            report.violations.append(Violation(
                "ii", f"cyclic shift {shift(t)} of {t} missing", (t, shift(t))))
    if report.valid and report.size != report.expected_size:  # pragma: no cover
        report.violations.append(Violation(
            "count", f"|T| = {report.size} != {report.expected_size}", ()))
    return report


def is_torsion_free(tp):
    """True iff no triple has the form ``(x, x, x)``."""
    return not any(x == y == z for x, y, z in tp.triples)


def singer_presentation(q):
    """The cyclic presentation on the difference-set plane.

    Uses ``lam(i) = l_i = i + D`` with ``D`` fixed under multiplication by
    ``q``; triples are ``(i, i + d, i + d + q*d)`` for ``i`` mod ``n`` and
    ``d`` in ``D``. For q = 2 this is the orbit family of ``(i, i+1, i+3)``.
    """
    plane = difference_set_plane(q)
    n = plane.n
    ds = canonical_difference_set(q)
    triples = [(i, (i + d) % n, (i + d + q * d) % n) for i in range(n) for d in ds]
    return TrianglePresentation(PointLineCorrespondence.identity(plane), triples)


# ---------------------------------------------------------------------------
# exact-cover search

def _options(corr, torsion_free_only):
    """Triangle options per arc as ``(z, arcs covered)``, ``z`` ascending."""
    plane = corr.plane
    lam = corr.lam
    arcs = [(x, y) for x in range(plane.n) for y in plane.lines[lam[x]]]
    by_arc = {}
    for x, y in arcs:
        opts = []
        for z in plane.lines[lam[y]]:
            if plane.incident(x, lam[z]):
                if torsion_free_only and x == y == z:
                    continue
                opts.append((z, frozenset({(x, y), (y, z), (z, x)})))
        by_arc[(x, y)] = opts
    return arcs, by_arc


def _cover_search(corr, torsion_free_only, cancel):
    """Yield arc -> third point maps in lexicographic order of triple lists."""
    arcs, by_arc = _options(corr, torsion_free_only)
    index = {a: i for i, a in enumerate(arcs)}
    # live[a]: options for arc a (as (z, arcset)) that do not clash
    live = {a: list(opts) for a, opts in by_arc.items()}
    assignment = {}
    uncovered = set(arcs)
    # arcs sharing a candidate triangle with a given arc
    neighbours = {a: set() for a in arcs}
    for opts in by_arc.values():
        for _, arcset in opts:
            for b in arcset:
                neighbours[b].update(arcset)

    def apply(arcset):
        """Cover arcs; return the removal log and whether some arc is left dead."""
        removed = []
        for a in arcset:
            uncovered.discard(a)
        touched = set()
        for a in arcset:
            for b in neighbours[a]:
                if b in uncovered:
                    touched.add(b)
        dead = False
        for b in touched:
            keep = []
            for opt in live[b]:
                if opt[1] & arcset:
                    removed.append((b, opt))
                else:
                    keep.append(opt)
            live[b] = keep
            if not keep:
                dead = True
        return removed, dead

    def undo(arcset, removed):
        for b, opt in reversed(removed):
            live[b].append(opt)
        for b in {b for b, _ in removed}:
            live[b].sort(key=lambda o: o[0])
        for a in arcset:
            uncovered.add(a)

    def choose(arc, z, arcset):
        x, y = arc
        assignment[(x, y)] = z
        assignment[(y, z)] = x
        assignment[(z, x)] = y

    def unchoose(arcset):
        for a in arcset:
            assignment.pop(a, None)

    def forced():
        """Apply single-option arcs until none remain; return (log, conflict)."""
        log = []
        while True:
            single = None
            for a in uncovered:
                k = len(live[a])
                if k == 0:
                    return log, True
                if k == 1 and (single is None or index[a] < index[single]):
                    single = a
            if single is None:
                return log, False
            z, arcset = live[single][0]
            choose(single, z, arcset)
            removed, dead = apply(arcset)
            log.append((arcset, removed))
            if dead:
                return log, True

    def rollback(log):
        for arcset, removed in reversed(log):
            undo(arcset, removed)
            unchoose(arcset)

    def recurse():
        if cancel is not None and cancel.is_set():
            raise Interrupted("search cancelled")
        log, dead = forced()
        if not dead:
            if not uncovered:
                yield dict(assignment)
            else:
                arc = min(uncovered, key=index.__getitem__)
                for z, arcset in list(live[arc]):
                    choose(arc, z, arcset)
                    removed, dead_here = apply(arcset)
                    if not dead_here:
                        yield from recurse()
                    undo(arcset, removed)
                    unchoose(arcset)
        rollback(log)

    if any(not opts for opts in live.values()):
        return
    yield from recurse()


def search(plane, lam=None, limit=None, torsion_free_only=False, cancel=None):
    """Enumerate triangle presentations on ``plane``.

    With ``lam`` given (a :class:`PointLineCorrespondence` or a sequence of
    line indices), presentations are produced in lexicographic order of their
    sorted triple lists. With ``lam=None`` (only for q = 2) every bijection is
    tried in lexicographic order. ``limit`` caps the number yielded;
    ``cancel`` is an optional ``threading.Event`` that raises
    :class:`Interrupted` when set.
    """
    if limit is not None and limit <= 0:
        return
    if lam is None:
        if plane.q != 2:
            raise ValueError("lambda must be supplied for q >= 3")
        corrs = (PointLineCorrespondence(plane, perm)
                 for perm in itertools.permutations(range(plane.n)))
    elif isinstance(lam, PointLineCorrespondence):
        corrs = [lam]
    else:
        corrs = [PointLineCorrespondence(plane, tuple(lam))]
    count = 0
    for corr in corrs:
        for assignment in _cover_search(corr, torsion_free_only, cancel):
            triples = [(x, y, z) for (x, y), z in assignment.items()]
            yield TrianglePresentation(corr, triples)
            count += 1
            if limit is not None and count >= limit:
                return


# ---------------------------------------------------------------------------
# text format

def parse_presentation(text, verify_result=True):
    """Parse the presentation file format; return a verified presentation.

    Raises :class:`ParseError` for malformed input and
    :class:`ValidationError` if the axioms fail.
    """
    q = None
    plane_kind = None
    line_rows = []
    lam_rows = []
    triple_rows = []
    for lineno, toks in _tokens(text):
        key = toks[0]
        if key == "q":
            if q is not None or len(toks) != 2:
                raise ParseError("bad q header", lineno)
            q = _int(toks[1], lineno)
            if q < 2:
                raise ParseError(f"bad order {q}", lineno)
        elif q is None:
            raise ParseError(f"{key!r} before q header", lineno)
        elif key == "plane":
            if plane_kind is not None or len(toks) != 2:
                raise ParseError("bad plane row", lineno)
            plane_kind = toks[1]
            if plane_kind not in ("canonical", "canonical-difference-set", "inline"):
                raise ParseError(f"unknown plane kind {plane_kind!r}", lineno)
        elif key == "line":
            line_rows.append((lineno, toks))
        elif key == "lambda":
            if len(toks) != 3:
                raise ParseError("lambda row needs point and line", lineno)
            lam_rows.append((lineno, _int(toks[1], lineno), _int(toks[2], lineno)))
        elif key == "triple":
            if len(toks) != 4:
                raise ParseError("triple row needs three points", lineno)
            triple_rows.append((lineno, tuple(_int(t, lineno) for t in toks[1:])))
        else:
            raise ParseError(f"unknown keyword {key!r}", lineno)
    if q is None:
        raise ParseError("missing q header")
    plane_kind = plane_kind or "canonical"
    if plane_kind == "inline":
        plane = parse_line_rows(line_rows, q)
    else:
        if line_rows:
            raise ParseError("line rows only allowed with 'plane inline'", line_rows[0][0])
        plane = canonical_plane(plane_kind, q)
    n = plane.n
    lam = [None] * n
    for lineno, p, l in lam_rows:
        if not (0 <= p < n and 0 <= l < n):
            raise ParseError("index out of range", lineno)
        if lam[p] is not None:
            raise ParseError(f"duplicate lambda for point {p}", lineno)
        lam[p] = l
    if len(lam_rows) != n or len(set(lam)) != n:
        raise ParseError(f"lambda must list a bijection on {n} points")
    for lineno, t in triple_rows:
        if any(not 0 <= x < n for x in t):
            raise ParseError("index out of range", lineno)
    tp = TrianglePresentation(PointLineCorrespondence(plane, tuple(lam)),
                              [t for _, t in triple_rows])
    return tp.checked() if verify_result else tp


def parse_correspondence(text):
    """Parse a file with q, plane and lambda rows only (no triples)."""
    tp = parse_presentation(text, verify_result=False)
    return tp.correspondence


def format_correspondence(corr):
    plane = corr.plane
    out = [f"q {plane.q}\n"]
    if plane.label:
        out.append(f"plane {plane.label}\n")
    else:
        out.append("plane inline\n")
        out.append(format_line_rows(plane))
    out.extend(f"lambda {p} {l}\n" for p, l in enumerate(corr.lam))
    return "".join(out)


def format_presentation(tp):
    out = [format_correspondence(tp.correspondence)]
    out.extend(f"triple {x} {y} {z}\n" for x, y, z in tp.triples)
    out.append(f"# count={len(tp.triples)}\n")
    return "".join(out)
