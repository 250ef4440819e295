import json
from fractions import Fraction as F

import pytest

import sheafcalc as sc
from sheafcalc.errors import ConventionError, TamarkinClassError, ValidationError
from sheafcalc.intervals import (
    LEFT_CLOSED,
    MIXED,
    RIGHT_CLOSED,
    barcode_from_json,
    barcode_to_json,
)

from conftest import rand_tamarkin_barcode


def test_empty_and_degenerate_intervals_rejected():
    with pytest.raises(ValidationError):
        sc.interval(2, 1)
    with pytest.raises(ValidationError):
        sc.interval(1, 1)  # [1,1) is empty
    assert sc.singleton(1).is_singleton


def test_canonicalize_merges_equal_bars():
    b = sc.GradedBarcode((sc.bar(0, 1), sc.bar(0, 1)))
    cb = sc.canonicalize(b)
    assert len(cb.bars) == 1 and cb.bars[0].mult == 2
    assert cb.total_mult() == 2


def test_canonicalize_empty_and_sorting():
    assert sc.canonicalize(sc.GradedBarcode(())).bars == ()
    b = sc.GradedBarcode((sc.bar(2, 3, degree=1), sc.bar(0, 1)))
    cb = sc.canonicalize(b)
    assert cb.bars[0].interval.lo.value == 0 and cb.bars[0].degree == 0


def test_canonicalize_idempotent(rng):
    for _ in range(30):
        b = rand_tamarkin_barcode(rng)
        assert sc.canonicalize(sc.canonicalize(b)) == sc.canonicalize(b)


def test_stalk_respects_endpoint_flags():
    b = sc.barcode(sc.bar(0, 2))
    assert sc.stalk(b, F(0)) == sc.HomSpace({0: 1})
    assert sc.stalk(b, F(2)) == sc.HomSpace()
    oc = sc.barcode(sc.GradedBar(sc.interval(0, 2, False, True), 1))
    assert sc.stalk(oc, F(0)) == sc.HomSpace()
    assert sc.stalk(oc, F(2)) == sc.HomSpace({1: 1})


def test_stalk_constant_on_strata(rng):
    for _ in range(20):
        b = rand_tamarkin_barcode(rng)
        s = sc.spec(b)
        for a, c in zip(s, s[1:]):
            third = (c - a) / 3
            assert sc.stalk(b, a + third) == sc.stalk(b, a + 2 * third)


def test_spec():
    b = sc.barcode(sc.bar(0, 2), sc.bar(1, "+inf"))
    assert sc.spec(b) == [0, 1, 2]
    assert sc.spec(sc.GradedBarcode(())) == []
    b3 = sc.barcode(sc.bar(0, 2, mult=3))
    assert sc.spec(b3) == [0, 2]


def test_ray_sections_rule():
    assert sc.ray_sections(sc.barcode(sc.bar(0, "+inf")), F(1)) == sc.HomSpace({0: 1})
    assert sc.ray_sections(sc.barcode(sc.bar(0, 1)), F(2)) == sc.HomSpace()
    assert sc.ray_sections(sc.barcode(sc.bar(0, 3)), F(1)) == sc.HomSpace({0: 1})
    with pytest.raises(TamarkinClassError):
        sc.ray_sections(sc.barcode(sc.GradedBar(sc.interval(0, 1, False, True))), F(1))


def test_ray_sections_constant_between_spec(rng):
    for _ in range(20):
        b = rand_tamarkin_barcode(rng)
        s = sc.spec(b)
        for a, c in zip(s, s[1:]):
            third = (c - a) / 3
            assert sc.ray_sections(b, a + third) == sc.ray_sections(b, a + 2 * third)


def test_ray_sections_against_quiver_oracle(rng):
    # sections over the open ray (-oo, c) are RHom(k_(-oo,c), -), which the
    # stratification-model oracle computes independently of the per-bar rule
    from sheafcalc.stratmodel import rhom_oracle

    for _ in range(25):
        b = rand_tamarkin_barcode(rng, max_bars=3)
        cs = sc.spec(b) or [F(0)]
        probes = list(cs) + [cs[0] - 1, cs[-1] + 1] + [
            (x + y) / 2 for x, y in zip(cs, cs[1:])
        ]
        for c in probes:
            ray = sc.interval("-inf", c, False, False)
            expect = sc.HomSpace()
            for iv, deg in sc.expanded_bars(b):
                h = rhom_oracle(ray, iv)
                expect = expect + sc.HomSpace({d + deg: n for d, n in h.dims.items()})
            assert sc.ray_sections(b, c) == expect


def test_convention_inference():
    assert sc.barcode(sc.bar(0, 1)).convention == LEFT_CLOSED
    rc = sc.barcode(sc.GradedBar(sc.interval(0, 1, False, True)))
    assert rc.convention == RIGHT_CLOSED
    mixed = sc.barcode(sc.bar(0, 1), sc.GradedBar(sc.interval(2, 3, False, True)))
    assert mixed.convention == MIXED
    assert sc.barcode(sc.GradedBar(sc.singleton(0))).convention == LEFT_CLOSED


def test_convert_convention():
    # the persistence <-> sheaf equivalence fixes interval data
    v = sc.barcode(sc.GradedBar(sc.interval(1, 2, False, True)))
    assert sc.convert_convention(v, RIGHT_CLOSED) == v
    assert sc.convert_convention(sc.GradedBarcode(()), LEFT_CLOSED) == sc.GradedBarcode(())
    # reparametrization variant: t -> -t
    got = sc.convert_convention(v, LEFT_CLOSED)
    assert got == sc.barcode(sc.bar(-2, -1))
    # round trip
    assert sc.convert_convention(got, RIGHT_CLOSED) == v
    with pytest.raises(ConventionError):
        sc.convert_convention(
            sc.barcode(sc.bar(0, 1), sc.GradedBar(sc.interval(2, 3, False, True))),
            LEFT_CLOSED,
        )


def test_reflect_involution(rng):
    for _ in range(20):
        b = rand_tamarkin_barcode(rng)
        assert sc.reflect_barcode(sc.reflect_barcode(b)) == b


def test_ss_describe():
    d = sc.ss_describe(sc.interval(0, 2))
    assert d.base == sc.interval(0, 2, True, True)
    assert d.rays == ((F(0), 1), (F(2), 1))
    s = sc.ss_describe(sc.singleton(3))
    assert s.rays == ((F(3), 0),)
    h = sc.ss_describe(sc.interval(1, "+inf"))
    assert h.rays == ((F(1), 1),)
    oc = sc.ss_describe(sc.interval(0, 2, False, True))
    assert oc.rays == ((F(0), -1), (F(2), -1))
    op = sc.ss_describe(sc.interval(0, 2, False, False))
    assert op.rays == ((F(0), -1), (F(2), 1))
    cc = sc.ss_describe(sc.interval(0, 2, True, True))
    assert cc.rays == ((F(0), 1), (F(2), -1))


def test_barcode_json_schema_round_trip(rng):
    for _ in range(20):
        b = rand_tamarkin_barcode(rng)
        j = barcode_to_json(b)
        assert barcode_from_json(json.loads(json.dumps(j))) == b
    # the documented shape
    j = barcode_to_json(sc.barcode(sc.bar(0, 2)))
    assert j == {
        "convention": "left-closed",
        "bars": [
            {
                "lo": {"v": "0", "closed": True},
                "hi": {"v": "2", "closed": False},
                "deg": 0,
                "mult": 1,
            }
        ],
    }


def test_barcode_json_infinite_and_pi_endpoints():
    from sheafcalc.exactnum import PiRational

    b = sc.barcode(
        sc.bar("-inf", 0, lo_closed=False),
        sc.GradedBar(sc.interval(PiRational(F(1), F(0)), PiRational(F(2), F(0)))),
    )
    j = barcode_to_json(b)
    assert barcode_from_json(j) == b
    lows = {json.dumps(rec["lo"]["v"], sort_keys=True) for rec in j["bars"]}
    assert '"-inf"' in lows


def test_declared_convention_mismatch_rejected():
    j = barcode_to_json(sc.barcode(sc.bar(0, 2)))
    j["convention"] = "right-closed"
    with pytest.raises(ValidationError):
        barcode_from_json(j)
