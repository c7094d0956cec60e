import itertools
import random
import threading

import pytest

from a2ktheory.errors import Interrupted, ParseError, ValidationError
from a2ktheory.plane import difference_set_plane, make_plane
from a2ktheory.presentation import (
    PointLineCorrespondence,
    TrianglePresentation,
    format_correspondence,
    format_presentation,
    is_torsion_free,
    parse_correspondence,
    parse_presentation,
    search,
    shift,
    singer_presentation,
    verify,
)


def cyclic_family():
    return {t for i in range(7) for t in [(i, (i + 1) % 7, (i + 3) % 7)]}


def closure(triples):
    out = set()
    for t in triples:
        out.update({t, shift(t), shift(shift(t))})
    return out


def brute_force_presentations(corr):
    """Every presentation for ``corr`` as a set of disjoint triangle orbits.

    Branches on the uncovered arc with fewest compatible orbits, then sorts,
    so it shares neither order nor propagation with the library search.
    """
    plane, lam = corr.plane, corr.lam
    n = plane.n
    arcs = {(x, y) for x in range(n) for y in plane.lines[lam[x]]}
    orbits = set()
    for x, y in arcs:
        for z in range(n):
            if (y, z) in arcs and (z, x) in arcs:
                orbits.add(frozenset(closure([(x, y, z)])))
    covering = {a: [] for a in arcs}
    for o in orbits:
        for t in o:
            covering[t[:2]].append(o)
    found = []

    def go(used, chosen):
        if len(used) == len(arcs):
            found.append(sorted(t for o in chosen for t in o))
            return
        best = None
        for a in arcs - used:
            opts = [o for o in covering[a] if not any(t[:2] in used for t in o)]
            if best is None or len(opts) < len(best):
                best = opts
            if not opts:
                return
        for o in best:
            go(used | {t[:2] for t in o}, chosen + [o])

    go(frozenset(), [])
    return sorted(found)


def test_cyclic_family_is_the_singer_presentation(cyclic_tp):
    assert set(cyclic_tp.triples) == closure(cyclic_family())
    assert len(cyclic_tp) == 21


def test_verify_cyclic(cyclic_tp):
    report = verify(cyclic_tp)
    assert report.valid and report.summary() == "valid: |T|=21"


def test_verify_cyclic_by_hand(cyclic_tp, fano):
    # independent axiom check
    ts = set(cyclic_tp.triples)
    for x in range(7):
        for y in range(7):
            ext = [t for t in ts if t[:2] == (x, y)]
            assert len(ext) == (1 if y in fano.lines[x] else 0)
    assert all(shift(t) in ts for t in ts)


def test_missing_triple(cyclic_tp):
    tp = TrianglePresentation(cyclic_tp.correspondence,
                              [t for t in cyclic_tp.triples if t != (0, 1, 3)])
    report = verify(tp)
    assert not report.valid
    assert report.axioms() == ["i", "ii"]
    ii = [v for v in report.violations if v.axiom == "ii"]
    # the witness is (t, shift(t)) with shift(t) missing
    assert [v.witness for v in ii] == [((3, 0, 1), (0, 1, 3))]
    assert any(v.axiom == "i" and v.witness == (0, 1) for v in report.violations)


def test_extra_extension(cyclic_tp):
    extra = closure([(0, 1, 5)])
    tp = TrianglePresentation(cyclic_tp.correspondence, list(cyclic_tp.triples) + list(extra))
    report = verify(tp)
    assert "iii" in report.axioms()
    assert any(v.axiom == "iii" and v.witness[:2] == (0, 1) for v in report.violations)


def test_non_incident_pair(cyclic_tp):
    tp = TrianglePresentation(cyclic_tp.correspondence, list(cyclic_tp.triples) + [(0, 5, 0)])
    report = verify(tp)
    assert any(v.axiom == "i" and v.witness == (0, 5) for v in report.violations)
    with pytest.raises(ValidationError, match="axiom \\(i\\)"):
        tp.checked()


def test_out_of_range(cyclic_tp):
    tp = TrianglePresentation(cyclic_tp.correspondence, [(0, 1, 9)])
    assert verify(tp).axioms() == ["range"]


def test_torsion_free():
    assert is_torsion_free(singer_presentation(2))
    assert not is_torsion_free(singer_presentation(3))
    plane = make_plane(2)
    tp = TrianglePresentation(PointLineCorrespondence.identity(plane), [(0, 0, 0)])
    assert not is_torsion_free(tp)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_singer_presentation_valid(q):
    tp = singer_presentation(q)
    assert verify(tp).valid
    assert len(tp) == (q + 1) * (q * q + q + 1)
    assert is_torsion_free(tp) == (q % 3 != 0)


def test_lambda_must_be_bijection(fano):
    with pytest.raises(ValueError):
        PointLineCorrespondence(fano, (0,) * 7)
    lam = PointLineCorrespondence(fano, (3, 4, 5, 6, 0, 1, 2))
    assert lam.inverse == (4, 5, 6, 0, 1, 2, 3)
    assert lam(0) == 3 and lam.out_neighbours(0) == fano.lines[3]


# -- search

def test_search_limit_one(fano, fano_lambda):
    found = list(search(fano, fano_lambda, limit=1))
    assert len(found) == 1 and verify(found[0]).valid


def test_search_limit_zero(fano, fano_lambda):
    assert list(search(fano, fano_lambda, limit=0)) == []
    assert list(search(fano, fano_lambda, limit=-3)) == []


def test_search_matches_brute_force_canonical(fano, fano_lambda, cyclic_tp):
    got = [list(tp.triples) for tp in search(fano, fano_lambda)]
    assert got == brute_force_presentations(fano_lambda)
    assert len(got) == 2
    assert list(cyclic_tp.triples) in got


def test_search_matches_brute_force_random_lambdas(fano):
    rng = random.Random(7)
    for _ in range(25):
        perm = list(range(7))
        rng.shuffle(perm)
        corr = PointLineCorrespondence(fano, perm)
        got = [list(tp.triples) for tp in search(fano, corr)]
        assert got == brute_force_presentations(corr)


def test_search_q3_matches_brute_force():
    plane = difference_set_plane(3)
    corr = PointLineCorrespondence.identity(plane)
    got = [list(tp.triples) for tp in search(plane, corr)]
    assert got == brute_force_presentations(corr)
    assert list(singer_presentation(3).triples) in got


def test_search_is_deterministic(fano, fano_lambda):
    a = [format_presentation(tp) for tp in search(fano, fano_lambda)]
    b = [format_presentation(tp) for tp in search(fano, fano_lambda)]
    assert a == b


def test_search_accepts_plain_lambda(fano):
    assert len(list(search(fano, list(range(7))))) == 2


def test_search_all_lambdas_matches_brute_force(fano):
    plain = list(search(fano, None))
    expected = [(perm, t) for perm in itertools.permutations(range(7))
                for t in brute_force_presentations(PointLineCorrespondence(fano, perm))]
    assert [(tp.lam, list(tp.triples)) for tp in plain] == expected
    assert len(plain) == 744
    tf = list(search(fano, None, torsion_free_only=True))
    assert [tp for tp in plain if is_torsion_free(tp)] == tf
    assert len(tf) == 408


def test_search_all_lambdas_only_for_q2():
    with pytest.raises(ValueError):
        next(search(difference_set_plane(3)))


def test_search_cancel(fano, fano_lambda):
    cancel = threading.Event()
    cancel.set()
    with pytest.raises(Interrupted):
        list(search(fano, fano_lambda, cancel=cancel))


# -- file format

CYCLIC_FILE = "q 2\nplane canonical-difference-set\n" + "".join(
    f"lambda {i} {i}\n" for i in range(7))


def cyclic_text(drop=None, extra=()):
    rows = sorted(closure(cyclic_family())) + list(extra)
    return CYCLIC_FILE + "".join(f"triple {x} {y} {z}\n" for x, y, z in rows if (x, y, z) != drop)


def test_parse_valid(cyclic_tp):
    assert parse_presentation(cyclic_text()) == cyclic_tp


def test_parse_missing_triple():
    with pytest.raises(ValidationError) as exc:
        parse_presentation(cyclic_text(drop=(2, 3, 5)))
    assert "i" in exc.value.report.axioms()


def test_parse_not_incident():
    with pytest.raises(ValidationError) as exc:
        parse_presentation(cyclic_text(extra=[(0, 5, 0)]))
    assert any(v.axiom == "i" and v.witness == (0, 5) for v in exc.value.report.violations)


def test_parse_unverified_keeps_bad_input():
    tp = parse_presentation(cyclic_text(drop=(2, 3, 5)), verify_result=False)
    assert len(tp) == 20


@pytest.mark.parametrize("text", [
    "",
    "plane canonical\n",
    "q 2\nq 2\n",
    "q x\n",
    "q 2\nplane weird\n",
    "q 2\nfoo 1\n",
    "q 2\nlambda 0\n",
    "q 2\ntriple 0 1\n",
    "q 2\n" + "".join(f"lambda {i} 0\n" for i in range(7)),
    CYCLIC_FILE + "triple 0 1 8\n",
    "q 2\nline 0 1 2 4\n",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_presentation(text)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_round_trip(q):
    tp = singer_presentation(q)
    assert parse_presentation(format_presentation(tp)) == tp


def test_round_trip_inline_plane(fano):
    plane = difference_set_plane(2)
    inline = type(plane)(2, plane.lines, label=None)
    corr = PointLineCorrespondence(inline, tuple(range(7)))
    tp = TrianglePresentation(corr, singer_presentation(2).triples)
    text = format_presentation(tp)
    assert "plane inline" in text
    again = parse_presentation(text)
    assert again.triples == tp.triples and again.plane.lines == plane.lines


def test_correspondence_round_trip():
    corr = PointLineCorrespondence.identity(make_plane(3))
    assert parse_correspondence(format_correspondence(corr)) == corr


def test_data_files_parse(data_dir):
    for q in (2, 3, 4, 5):
        tp = parse_presentation((data_dir / f"singer_q{q}.tp").read_text())
        assert tp == singer_presentation(q)
