from dataclasses import replace

import pytest

from pointed_coalgebras.address import AddressWord, all_words, fold_dyadic, word_distance, words_equivalent
from pointed_coalgebras.completion import psi, truncate
from pointed_coalgebras.core import (
    AlphabetMismatchError,
    BIPOINTED,
    ContractError,
    Dyadic,
    ONE,
    OutOfCarrierError,
    TRIPOINTED,
    ZERO,
)
from pointed_coalgebras.experiments import APEX, INTERVAL_E, TRIANGLE_E, TrianglePoint, interval_e_branches
from pointed_coalgebras.morphisms import (
    BIP_ALG,
    DYADIC_PHI,
    FREYD_I,
    TRIP_ALG,
    algebra_fold,
    algebra_square_failures,
    check_algebra_square,
    check_coalgebra_square,
    coalgebra_iterate,
    continuity_bound,
    continuity_defect,
    mediating_final,
    square_bound,
    tensor_iterate,
    validate_algebra,
    validate_coalgebra,
)


def bi(text):
    letters, base = text.split(".")
    return AddressWord(BIPOINTED, tuple(letters), base)


def tri(text):
    letters, base = text.split(".")
    return AddressWord(TRIPOINTED, tuple(letters), base)


def test_coalgebra_iterate_examples():
    assert str(coalgebra_iterate(INTERVAL_E, Dyadic(3, 3), 4)) == "llrr.T"
    assert str(coalgebra_iterate(INTERVAL_E, ONE, 4)) == "rrrr.T"
    assert str(coalgebra_iterate(FREYD_I, Dyadic(3, 3), 3)) == "lrl.T"
    assert str(coalgebra_iterate(TRIANGLE_E, APEX, 3)) == "aaa.T"


def test_coalgebra_iterate_rejects_bad_input():
    with pytest.raises(ValueError):
        coalgebra_iterate(INTERVAL_E, ZERO, 0)
    with pytest.raises(OutOfCarrierError):
        coalgebra_iterate(INTERVAL_E, Dyadic(3, 1), 2)


def test_tensor_iterate_returns_residual():
    letters, residual = tensor_iterate(FREYD_I, Dyadic(3, 3), 2)
    assert letters == ("l", "r")
    assert residual == Dyadic(1, 1)


def test_branch_policies_agree_at_overlaps():
    for x in (Dyadic(1, 1), Dyadic(3, 3), Dyadic(5, 4)):
        for p in range(1, 8):
            first = coalgebra_iterate(FREYD_I, x, p, "first")
            last = coalgebra_iterate(FREYD_I, x, p, "last")
            assert words_equivalent(first, last)
    assert str(coalgebra_iterate(FREYD_I, Dyadic(1, 1), 1, "last")) == "r.B"


def test_freyd_iteration_folds_back_to_the_point():
    for i in range(17):
        x = Dyadic(i, 4)
        assert fold_dyadic(coalgebra_iterate(FREYD_I, x, 6)) == x


def test_coalgebra_square_defect_within_bound():
    points = [
        (INTERVAL_E, Dyadic(3, 3)),
        (INTERVAL_E, Dyadic(7, 5)),
        (FREYD_I, Dyadic(5, 4)),
        (TRIANGLE_E, TrianglePoint(Dyadic(11, 5))),
        (TRIANGLE_E, TrianglePoint(ZERO, apex=True)),
    ]
    for c, x in points:
        for p in range(2, 9):
            assert check_coalgebra_square(c, x, p) <= square_bound(p)
    with pytest.raises(ValueError):
        check_coalgebra_square(FREYD_I, ZERO, 1)


def test_coalgebra_square_compares_depth_p_with_one_level_finer():
    x, p = Dyadic(7, 5), 6
    m1, x1 = INTERVAL_E.step(x)
    left = truncate(mediating_final(INTERVAL_E, x1), p - 1).prepend(m1)
    head, tail = psi(mediating_final(INTERVAL_E, x))
    right = truncate(tail, p).prepend(head)
    assert (left.depth, right.depth) == (p, p + 1)
    assert check_coalgebra_square(INTERVAL_E, x, p) == word_distance(left, right)


def test_continuity_defect_within_bound_on_a_grid():
    grid = [Dyadic(i, 4) for i in range(17)]
    for c in (FREYD_I, INTERVAL_E):
        for p in range(1, 9):
            for i, x in enumerate(grid):
                for y in grid[i + 1:]:
                    assert continuity_defect(c, x, y, p) <= continuity_bound(p), (c.name, x, y, p)


def test_continuity_defect_vanishes_on_distinguished_residuals():
    # freyd-i sends k/2^p to a residual in {0, 1} after p steps, so θ_p and g_p coincide
    for p in range(4, 7):
        assert continuity_defect(FREYD_I, Dyadic(3, 4), Dyadic(13, 4), p) == ZERO
    assert continuity_defect(INTERVAL_E, ONE, ZERO, 3) == ZERO


def test_continuity_defect_needs_the_unit_interval():
    with pytest.raises(AlphabetMismatchError):
        continuity_defect(TRIANGLE_E, APEX, APEX, 2)


def test_builtin_algebras_fold():
    assert algebra_fold(BIP_ALG, bi(".T")) == ONE
    assert algebra_fold(BIP_ALG, bi("rrr.B")) == ZERO
    assert algebra_fold(BIP_ALG, bi("rrr.T")) == ONE
    assert algebra_fold(TRIP_ALG, tri("aa.T")) == "T"
    assert algebra_fold(TRIP_ALG, tri("aa.L")) == "L"
    assert algebra_fold(TRIP_ALG, tri("cb.R")) == "L"


def test_dyadic_phi_is_fold_dyadic():
    for depth in range(6):
        for w in all_words(BIPOINTED, depth):
            assert algebra_fold(DYADIC_PHI, w) == fold_dyadic(w)


def test_algebra_squares_commute():
    for a in (BIP_ALG, TRIP_ALG, DYADIC_PHI):
        assert validate_algebra(a).ok
        assert list(algebra_square_failures(a, 3)) == []
    assert check_algebra_square(TRIP_ALG, "c", tri("b.T"))


def test_algebra_fold_rejects_broken_gluing():
    broken = replace(BIP_ALG, name="broken", op=lambda m, x: x)
    report = validate_algebra(broken)
    assert "gluing" in report.axioms()
    with pytest.raises(ContractError):
        algebra_fold(broken, bi("l.T"))


def test_algebra_fold_rejects_other_alphabet():
    with pytest.raises(ValueError):
        algebra_fold(BIP_ALG, tri("a.T"))


def test_validate_builtin_coalgebras():
    grid = [Dyadic(i, 4) for i in range(17)]
    assert validate_coalgebra(FREYD_I, grid).ok
    assert validate_coalgebra(INTERVAL_E, grid).ok
    assert validate_coalgebra(TRIANGLE_E, [TrianglePoint(x) for x in grid]).ok


def test_validate_coalgebra_flags_broken_distinguished_point():
    def broken(x):
        if x == ZERO:
            return [("r", ZERO)]
        return interval_e_branches(x)

    c = replace(INTERVAL_E, name="broken", branches=broken)
    report = validate_coalgebra(c, [ZERO])
    assert "distinguished" in report.axioms()


def test_step_rejects_letters_outside_alphabet():
    c = replace(FREYD_I, name="bad-letters", branches=lambda x: [("a", x)])
    with pytest.raises(ContractError):
        c.step(ZERO)
