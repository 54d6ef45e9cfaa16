import pytest

from diverseflow.convex import binom, breakpoint_profile, cov, square, validate_table


def test_square_eval():
    phi = square(4)
    assert phi.eval(0) == 0
    assert [phi(x) for x in range(5)] == [0, 1, 4, 9, 16]


def test_cov_eval():
    phi = cov(5)
    assert phi.eval(1) == 0
    assert phi.eval(4) == 3
    assert phi.eval(0) == 0


def test_binom_eval():
    phi = binom(4)
    assert phi.eval(3) == 3
    assert [phi(x) for x in range(5)] == [0, 0, 1, 3, 6]


def test_eval_out_of_range():
    with pytest.raises(ValueError):
        square(3).eval(4)
    with pytest.raises(ValueError):
        square(3).eval(-1)


def test_breakpoints_square_every_integer():
    prof = breakpoint_profile(square(4), 4)
    assert prof.points == (0, 1, 2, 3, 4)
    assert prof.z == 4


def test_breakpoints_cov():
    prof = breakpoint_profile(cov(5), 5)
    assert prof.points == (0, 1, 5)
    assert prof.left_slopes == (0,)
    assert prof.right_slopes == (1,)


def test_breakpoints_binom():
    prof = breakpoint_profile(binom(3), 3)
    assert prof.points == (0, 1, 2, 3)


def test_breakpoints_cov_k1_degenerate():
    prof = breakpoint_profile(cov(1), 1)
    assert prof.points == (0, 1)
    assert prof.z == 1
    assert prof.segment_slope(0) == 0


def test_table_accepts_cov_then_steeper():
    phi = validate_table([0, 0, 1, 3])
    assert phi.eval(3) == 3


def test_table_rejects_non_monotone():
    with pytest.raises(ValueError, match="monotonicity.*index 2"):
        validate_table([0, 2, 1])


def test_table_rejects_non_convex():
    # at x=1: 0 + 1 >= 2*1 fails
    with pytest.raises(ValueError, match="convexity.*index 1"):
        validate_table([0, 1, 1, 3])


def test_table_rejects_nonzero_origin():
    with pytest.raises(ValueError, match="phi\\(0\\)"):
        validate_table([1, 2, 3])


@pytest.mark.parametrize("make,k", [(square, 7), (binom, 6), (cov, 9), (lambda k: validate_table([0, 0, 0, 2, 5, 9, 13, 17, 21, 25][: k + 1]), 6)])
def test_piecewise_reconstruction(make, k):
    phi = make(k)
    prof = breakpoint_profile(phi, k)
    # rebuild phi from the profile segment by segment
    val = 0
    rebuilt = {0: 0}
    for seg in range(prof.z):
        slope = prof.segment_slope(seg)
        for x in range(prof.points[seg] + 1, prof.points[seg + 1] + 1):
            val += slope
            rebuilt[x] = val
    assert all(rebuilt[x] == phi.eval(x) for x in range(k + 1))


def test_slope_scan_up_to_64():
    # at every interior breakpoint left < right; elsewhere slopes agree
    for make in (square, binom, cov):
        k = 64
        phi = make(k)
        prof = breakpoint_profile(phi, k)
        interior = set(prof.points[1:-1])
        for x in range(1, k):
            ls = phi.eval(x) - phi.eval(x - 1)
            rs = phi.eval(x + 1) - phi.eval(x)
            if x in interior:
                assert ls < rs
            else:
                assert ls == rs


def test_slope_telescoping():
    prof = breakpoint_profile(square(5), 5)
    for i in range(len(prof.left_slopes) - 1):
        assert prof.right_slopes[i] == prof.left_slopes[i + 1]
        assert prof.left_slopes[i + 1] < prof.right_slopes[i + 1]
