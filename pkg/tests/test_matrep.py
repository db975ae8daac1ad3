import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from z2z2.kernel import GradingKind
from z2z2.matrep import (
    PARITY,
    TRANSCRIPTION_FIXES,
    VARIANTS,
    DPoly,
    ExcludedFamilyError,
    GradedMatrix,
    Representation,
    SECTOR_ENTRIES,
    SectorError,
    bracket_matrices,
    family_rep,
    grade_vector,
    listed_variant_matrices,
    prove_no_rep,
    quaternion_identifications,
    quaternion_law_residuals,
    quaternion_units,
    random_params,
    sector_of_matrix,
    verify_rep,
    z2_rep,
)
from z2z2.structure import TableLabel, Z2Constants, table_entry

ALG, SUP = GradingKind.Z2Z2_ALGEBRA, GradingKind.Z2Z2_SUPERALGEBRA
M = GradedMatrix.sparse


def test_sector_of_matrix_examples():
    assert sector_of_matrix(GradedMatrix.diag([1, 2, 3, 4])) == (0, 0)
    assert sector_of_matrix(M({"12": 1, "21": 2, "34": 3, "43": 4})) == (1, 1)
    with pytest.raises(SectorError):
        sector_of_matrix(M({"12": 1, "13": 1}))
    assert sector_of_matrix(GradedMatrix.zero()) is None


def test_grade_vector_examples():
    assert grade_vector([5, 0, 0, 0]) == (0, 0)
    assert grade_vector([0, 5, 0, 0]) == (1, 1)
    assert grade_vector([0, 0, 0, 5]) == (0, 1)
    with pytest.raises(SectorError):
        grade_vector([1, 1, 0, 0])


def test_parity_projectors():
    P = PARITY
    i4 = GradedMatrix.identity()
    for p, q in ((P.P1_plus, P.P1_minus), (P.P2_plus, P.P2_minus)):
        assert p * p == p and q * q == q
        assert (p * q).is_zero()
        assert p + q == i4
    assert P.P1_plus * P.P2_minus == P.P2_minus * P.P1_plus
    assert P.N3 == P.N1 * P.N2
    # the four products project onto single basis vectors
    for a in (P.P1_plus, P.P1_minus):
        for b in (P.P2_plus, P.P2_minus):
            assert len((a * b).support()) == 1


def test_bracket_matrices_examples():
    a = M({"13": 1, "31": 2})
    b = M({"14": 3, "41": 1})
    assert bracket_matrices(ALG, a, b) == a * b + b * a
    assert bracket_matrices(SUP, a, b) == a * b - b * a
    assert sector_of_matrix(bracket_matrices(ALG, a, b)) == (1, 1)
    d = GradedMatrix.diag([1, 1, 1, 1])
    assert bracket_matrices(ALG, d, d).is_zero()


entries = st.fractions(min_value=-5, max_value=5, max_denominator=4)
sectors = st.sampled_from(sorted(SECTOR_ENTRIES))


def homogeneous(sector, values):
    rows = [[0] * 4 for _ in range(4)]
    for (i, j), v in zip(SECTOR_ENTRIES[sector], values):
        rows[i][j] = v
    return GradedMatrix(rows)


@given(sectors, sectors, st.lists(entries, min_size=4, max_size=4),
       st.lists(entries, min_size=4, max_size=4), st.sampled_from([ALG, SUP]))
def test_sector_arithmetic(ga, gb, va, vb, kind):
    a, b = homogeneous(ga, va), homogeneous(gb, vb)
    r = bracket_matrices(kind, a, b, ga, gb)
    if not r.is_zero():
        assert sector_of_matrix(r) == ((ga[0] + gb[0]) % 2, (ga[1] + gb[1]) % 2)


def test_dpoly_ring():
    D = DPoly.symbol()
    assert (D + 1) * (D - 1) == D * D - 1
    assert (D * 3).degree() == 1
    assert DPoly((2, 4)) / 2 == 1 + 2 * D
    with pytest.raises(ZeroDivisionError):
        DPoly((1,)) / D


# ---------------------------------------------------------------------------
# families


@pytest.mark.parametrize("variant", VARIANTS, ids=lambda v: v.key)
def test_family_closes_on_random_draws(variant):
    rng = random.Random(variant.key)
    for _ in range(100):
        P = random_params(variant, rng)
        rep = verify_rep(family_rep(variant, P))
        assert rep.ok, (P, rep.failures())


def test_s10_example_draws():
    rng = random.Random(7)
    for _ in range(100):
        P = {"lam": Fraction(rng.randint(1, 20), rng.randint(1, 20)),
             "eps": rng.choice((1, -1)),
             "p": Fraction(rng.randint(1, 20), rng.randint(1, 20)),
             "q": -Fraction(rng.randint(1, 20), rng.randint(1, 20))}
        if P["p"] == P["eps"] * P["q"]:
            continue
        assert verify_rep(family_rep("S10", P)).ok


def test_s10_degenerate_locus():
    # Z is proportional to p - eps*q
    rep = verify_rep(family_rep("S10", {"lam": Fraction(2), "eps": -1, "p": Fraction(1), "q": Fraction(-1)}))
    assert rep.closure_ok and rep.zero_generators == ["Z"]


def test_wrong_constants_fail():
    rep = family_rep("A1", {"lam": Fraction(2), "mu": Fraction(3), "eps": 1})
    wrong = Representation(rep.kind, rep.mats, table_entry(TableLabel("A2", eps=1)))
    assert not verify_rep(wrong).closure_ok


def test_excluded_and_bad_parameters():
    for key in ("A5", "S13", "A6"):
        with pytest.raises(ExcludedFamilyError):
            family_rep(key, {})
    with pytest.raises(ZeroDivisionError):
        family_rep("S2", {"lam": Fraction(1), "p": Fraction(0)})
    with pytest.raises(ValueError):
        family_rep("S10", {"lam": Fraction(1)})


@pytest.mark.parametrize("key,entry,listed,used", TRANSCRIPTION_FIXES)
def test_listed_entries_fail_and_fixed_entries_pass(key, entry, listed, used):
    rng = random.Random(key)
    from z2z2.matrep import VARIANTS_BY_KEY
    v = VARIANTS_BY_KEY[key]
    failures = 0
    for _ in range(30):
        P = random_params(v, rng)
        rep = family_rep(v, P)
        assert verify_rep(rep).ok
        listed = listed_variant_matrices(key, P)
        listed_ok = verify_rep(Representation(rep.kind, listed, rep.constants)).closure_ok
        # the listed matrices close only where they coincide with the fixed ones
        assert listed_ok == (tuple(listed) == rep.mats)
        failures += not listed_ok
    assert failures >= 5


def test_z2_reps():
    for r, s in ((0, 0), (0, 1), (1, 0), (Fraction(-2), 0), (0, Fraction(3))):
        h, q = z2_rep(r, s, lam=Fraction(5, 2))
        assert h * q - q * h == q * r
        assert q * q * 2 == h * (2 * s)
    with pytest.raises(ValueError):
        z2_rep(1, 1)


def test_dmodule_promotion():
    # lam -> D, a central symbol, still closes
    D = DPoly.symbol()
    rep = family_rep("A1:mu=lam", {"lam": D, "eps": 1})
    assert verify_rep(rep).closure_ok
    rep = family_rep("S7:second", {"lam": D, "eps": -1, "p": 1})
    assert verify_rep(rep).closure_ok


# ---------------------------------------------------------------------------
# quaternions


@pytest.mark.parametrize("split", [False, True])
def test_quaternion_laws(split):
    units = quaternion_units(split)
    assert units[0] == GradedMatrix.identity()
    assert all(r.is_zero() for r in quaternion_law_residuals(units, split).values())


def test_split_law_distinguishes():
    assert not all(r.is_zero() for r in quaternion_law_residuals(quaternion_units(True), False).values())


def test_quaternion_identifications():
    for key, params, split, factors in quaternion_identifications():
        assert all(f is not None and f != 0 for f in factors), (key, params, factors)
        assert factors[0] is not None


def test_a7_printed_setting_gives_split_units():
    # lam=1, p=q=-1 is proportional to the split units, not the plain ones
    rep = family_rep("A7", {"lam": Fraction(1), "p": Fraction(-1), "q": Fraction(-1)})
    from z2z2.matrep import scalar_factor
    split = [scalar_factor(m, u) for m, u in zip(rep.mats, quaternion_units(True))]
    plain = [scalar_factor(m, u) for m, u in zip(rep.mats, quaternion_units(False))]
    assert None not in split
    assert None in plain


# ---------------------------------------------------------------------------
# nonexistence search


def _mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)] for i in range(4)]


def _lin(*terms):
    out = [[0] * 4 for _ in range(4)]
    for c, m in terms:
        for i in range(4):
            for j in range(4):
                out[i][j] += c * m[i][j]
    return out


def test_s13_proven():
    for eps in (1, -1):
        r = prove_no_rep(TableLabel("S13", eps=eps))
        assert r.status == "proven"
        assert "Q2" in r.trace[0]


@pytest.mark.parametrize("label", [TableLabel("A5"), TableLabel("A6", x=Fraction(1, 3)),
                                   TableLabel("A6", x=Fraction(0)), TableLabel("A6", x=Fraction(2))])
def test_exceptional_algebras_have_counterexamples(label):
    r = prove_no_rep(label)
    assert r.status == "refuted"
    rep = r.counterexample
    assert verify_rep(rep).ok
    # recheck with plain nested lists
    h, q1, q2, q3 = ([[m[i, j] for j in range(4)] for i in range(4)] for m in rep.mats)
    c = table_entry(label)
    zero = [[0] * 4 for _ in range(4)]
    assert _lin((1, _mul(h, q1)), (-1, _mul(q1, h)), (-c.b1, q1)) == zero
    assert _lin((1, _mul(h, q2)), (-1, _mul(q2, h)), (-c.b2, q2)) == zero
    assert _lin((1, _mul(h, q3)), (-1, _mul(q3, h)), (-c.b3, q3)) == zero
    assert _lin((1, _mul(q1, q2)), (1, _mul(q2, q1)), (-c.d3, q3)) == zero
    assert _lin((1, _mul(q2, q3)), (1, _mul(q3, q2)), (-c.d1, q1)) == zero
    assert _lin((1, _mul(q1, q3)), (1, _mul(q3, q1)), (-c.d2, q2)) == zero
    assert all(m != zero for m in (h, q1, q2, q3)) or c.b == (0, 0, 0)


def test_prove_no_rep_rejects_other_labels():
    with pytest.raises(ExcludedFamilyError):
        prove_no_rep(TableLabel("A6", x=Fraction(1, 2)))
    with pytest.raises(ExcludedFamilyError):
        prove_no_rep(TableLabel("A1", eps=1))


def test_small_budget_is_inconclusive():
    r = prove_no_rep(TableLabel("A5"), budget=10)
    assert r.status == "inconclusive"
    assert r.to_json()["status"] == "inconclusive"
