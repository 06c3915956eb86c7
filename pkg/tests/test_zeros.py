import io
import math
from decimal import Decimal

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetaphase.errors import DomainError, MonotonicityError, ParseError, RangeNotCovered
from zetaphase.zeros import (GapReport, ZeroRecord, _floor_1sig, export_zeros, find_zeros,
                             find_zeros_parallel, import_zeros, recommend_dx, scan_min_gaps,
                             validate, zero_count)


def test_find_first_three():
    zs = find_zeros(14, 26)
    assert [z.k for z in zs] == [1, 2, 3]
    for z in zs:
        assert z.gamma == pytest.approx(float(mpmath.zetazero(z.k).imag), abs=1e-8)
        assert isinstance(z.gamma, float)


def test_find_indexes_from_count():
    zs = find_zeros(1000.0, 1010.0)
    assert zs[0].k == 650
    for z in zs:
        assert z.gamma == pytest.approx(float(mpmath.zetazero(z.k).imag), abs=1e-8)


def test_find_domain():
    with pytest.raises(DomainError):
        find_zeros(1, 10)
    with pytest.raises(DomainError):
        find_zeros(100, 2e5)


def test_parallel_windows_match_serial():
    a, b = find_zeros_parallel(10, 200, windows=3), find_zeros(10, 200)
    assert [z.k for z in a] == [z.k for z in b]
    # different scan grids, same zeros to the bisection width
    assert max(abs(x.gamma - y.gamma) for x, y in zip(a, b)) <= 2e-9


def test_parallel_independent_of_jobs():
    a = find_zeros_parallel(10, 2100, jobs=1)
    b = find_zeros_parallel(10, 2100, jobs=2)
    assert a == b
    assert a[-1].k == len(a)


@pytest.mark.parametrize("t,n", [(10.0, 0), (14.2, 1), (100.0, 29), (1000.0, 649)])
def test_zero_count(t, n):
    assert zero_count(t) == pytest.approx(n, abs=1e-6)


def test_import_plain_and_indexed():
    text = "# header\n14.134725141734693\r\n\n21.022039638771555\n"
    zs = import_zeros(text, "plain", first_index=1)
    assert zs == [ZeroRecord(1, 14.134725141734693), ZeroRecord(2, 21.022039638771555)]
    again = import_zeros(export_zeros(zs).encode(), "indexed")
    assert again == zs
    assert import_zeros(io.BytesIO(b""), "indexed") == []


def test_import_errors_carry_line():
    with pytest.raises(ParseError) as e:
        import_zeros("1 14.1\n2 abc\n", "indexed")
    assert e.value.line == 2
    with pytest.raises(MonotonicityError) as e:
        import_zeros("1 21.0\n2 14.1\n", "indexed")
    assert e.value.line == 2
    with pytest.raises(ValueError):
        import_zeros("14.1\n", "plain")


@settings(max_examples=50)
@given(st.lists(st.floats(0.001, 10), min_size=1, max_size=50), st.integers(1, 10 ** 7))
def test_export_import_roundtrip(gaps, k0):
    g, zs = 10.0, []
    for i, d in enumerate(gaps):
        g += d
        zs.append(ZeroRecord(k0 + i, g))
    assert import_zeros(export_zeros(zs), "indexed") == zs


@settings(max_examples=100)
@given(st.lists(st.floats(1e-4, 3), min_size=3, max_size=80), st.integers(0, 10))
def test_scan_matches_brute_force(gaps, count):
    g, zs = 10.0, [ZeroRecord(1, 10.0)]
    for i, d in enumerate(gaps):
        g += d
        zs.append(ZeroRecord(i + 2, g))
    k_hi = len(zs) - 1
    rep = scan_min_gaps(zs, 1, k_hi, count)
    deltas = [(zs[i + 1].gamma - zs[i].gamma, zs[i].k) for i in range(k_hi)]
    brute = sorted(deltas, key=lambda p: p[0])  # stable: ties keep k order
    assert rep.entries == [(k, d) for d, k in brute[:count]]
    if count and count < len(brute):
        assert rep.floor <= brute[count][0]


def test_scan_range_checks():
    zs = [ZeroRecord(k, 10.0 + k) for k in range(1, 6)]
    with pytest.raises(RangeNotCovered):
        scan_min_gaps(zs, 2, 5, 1)
    with pytest.raises(RangeNotCovered):
        scan_min_gaps([], 1, 2, 1)


def test_floor_one_digit():
    assert _floor_1sig(0.0057) == 0.005
    assert _floor_1sig(0.005) == 0.005
    assert _floor_1sig(0.0499) == 0.04
    assert _floor_1sig(12.3) == 10
    assert _floor_1sig(9.999999999976694e-05) == 9e-05


@given(st.floats(1e-300, 1e300))
def test_floor_one_digit_never_exceeds(x):
    f = _floor_1sig(x)
    assert f <= x and f > x / 10
    assert len(Decimal(repr(f)).normalize().as_tuple().digits) == 1


def test_recommend_dx():
    assert recommend_dx(GapReport(floor=0.005), 0.5) == 0.0025
    assert recommend_dx(GapReport(floor=0.01), 0.5) == 0.005
    assert recommend_dx(GapReport(floor=0.01), 1.0) == 0.01
    with pytest.raises(ValueError):
        recommend_dx(GapReport(floor=0.01), 0.0)


def test_validate_rejects_nonpositive():
    with pytest.raises(MonotonicityError):
        validate([ZeroRecord(1, -1.0)])
    with pytest.raises(MonotonicityError):
        validate([ZeroRecord(1, math.nan)])
