import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from z2z2.kernel import Field, GaussianRational, jacobi_combination
from z2z2.structure import (
    ALGEBRA_FAMILIES,
    SUPERALGEBRA_FAMILIES,
    AlgebraConstants,
    AlgebraWitness,
    InadmissibleError,
    RestrictionError,
    SuperalgebraConstants,
    SuperalgebraWitness,
    TableLabel,
    WitnessError,
    Z2Constants,
    Z2Witness,
    apply_equivalence,
    bracket_algebra,
    classify_z2,
    generic_jacobi_residuals,
    identity_witness,
    is_admissible,
    jacobi_residuals_algebra,
    jacobi_residuals_superalgebra,
    jacobi_residuals_z2,
    normalize,
    random_algebra_constants,
    random_superalgebra_constants,
    random_witness,
    residuals,
    sample_labels,
    table_entry,
    verify_tables,
)

A = AlgebraConstants.from_values
S = SuperalgebraConstants.from_values


def test_z2_residual_examples():
    assert jacobi_residuals_z2(Z2Constants.from_values([0, 2])) == 0
    assert jacobi_residuals_z2(Z2Constants.from_values([1, 0])) == 0
    assert jacobi_residuals_z2(Z2Constants.from_values([1, 1])) == 1


def test_classify_z2():
    assert classify_z2(Z2Constants()).label.family == "Z2i"
    n = classify_z2(Z2Constants.from_values([0, 3]))
    assert n.label.family == "Z2ii"
    assert apply_equivalence(Z2Constants.from_values([0, 3]), n.witness) == Z2Constants.from_values([0, 1])
    n = classify_z2(Z2Constants.from_values([-2, 0]))
    assert n.label.family == "Z2iii" and n.witness.lam_h == Fraction(-1, 2)
    with pytest.raises(InadmissibleError):
        classify_z2(Z2Constants.from_values([1, 1]))


def test_algebra_residual_examples():
    assert jacobi_residuals_algebra(table_entry(TableLabel("A1", eps=-1))) == (0, 0, 0)
    assert jacobi_residuals_algebra(table_entry(TableLabel("A5"))) == (0, 0, 0)
    assert jacobi_residuals_algebra(A([1, 1, 1, 1, 0, 0])) == (1, -1, -1)


def test_superalgebra_residual_examples():
    assert not any(jacobi_residuals_superalgebra(table_entry(TableLabel("S10", eps=-1))))
    assert not any(jacobi_residuals_superalgebra(table_entry(TableLabel("S21", y=Fraction(2, 7)))))
    assert jacobi_residuals_superalgebra(S([1, 0, 0, 1, 0, 0, 0, 0]))[0] == -1


def test_table_entry_examples():
    assert table_entry(TableLabel("A3", eps=-1)) == A([0, -1, 1, 0, 1, 1])
    x = Fraction(3, 4)
    assert table_entry(TableLabel("S19", x=x)) == S([1, x, 1 - x, 0, 0, 0, 0, 1])
    assert table_entry(TableLabel("S7", eps=-1)) == S([0, 0, 0, 0, -1, 1, -1, 1])


@pytest.mark.parametrize("label", [
    TableLabel("A6", x=Fraction(-1)),
    TableLabel("A8", y=Fraction(1), z=Fraction(1, 2)),
    TableLabel("A8", y=Fraction(0), z=Fraction(2)),
    TableLabel("S17", x=Fraction(0)),
    TableLabel("S21", y=Fraction(0)),
    TableLabel("S18", y=Fraction(3, 2), z=Fraction(1)),
    TableLabel("A6", x=GaussianRational(1, 1)),
])
def test_restrictions(label):
    with pytest.raises(RestrictionError):
        table_entry(label)


def test_label_parameters_checked():
    with pytest.raises(RestrictionError):
        TableLabel("A1")
    with pytest.raises(RestrictionError):
        TableLabel("A1", eps=2)
    with pytest.raises(RestrictionError):
        TableLabel("A7", x=Fraction(1))


def test_complex_upper_half_plane_for_a6():
    table_entry(TableLabel("A6", x=GaussianRational(-1, 1)), Field.C)
    with pytest.raises(RestrictionError):
        table_entry(TableLabel("A6", x=GaussianRational(1, -1)), Field.C)


# ---------------------------------------------------------------------------
# true graded Jacobi identity


# Components of the graded Jacobi identity for generic superalgebra
# constants, obtained once with sympy from symbolic brackets and frozen here.
def true_superalgebra_identity(c):
    a1, a2, b, cc = c.a1, c.a2, c.b, c.c
    al1, al2, be1, be2 = c.alpha1, c.alpha2, c.beta1, c.beta2
    return (
        cc * (a1 + a2 - b),
        be1 * (a1 - a2 + b),
        be2 * (a1 - a2 - b),
        a1 * al1,
        a2 * al2,
        2 * be1 * cc - a2 * al1,
        a1 * al2 + 2 * be2 * cc,
        al1 * b - 2 * be1 * cc,
        al2 * b + 2 * be2 * cc,
        al1 * be2 - al2 * be1,
    )


def test_frozen_identity_matches_sympy_derivation():
    sympy = pytest.importorskip("sympy")
    names = SuperalgebraConstants.NAMES
    syms = sympy.symbols(" ".join(names))
    c = SuperalgebraConstants.__new__(SuperalgebraConstants)
    object.__setattr__(c, "field", Field.R)
    for n, s in zip(names, syms):
        object.__setattr__(c, n, s)
    found = set()
    for vec in generic_jacobi_residuals(c).values():
        for v in vec.values():
            e = sympy.factor(sympy.expand(v))
            if e != 0:
                found.add(sympy.expand(e))
    frozen = {sympy.expand(e) for e in true_superalgebra_identity(c)}
    # each generic component is a nonzero multiple of a frozen one and vice versa
    def covered(e, pool):
        return any(sympy.simplify(e / f).is_number for f in pool)
    assert all(covered(e, frozen) for e in found)
    assert all(covered(f, found) for f in frozen)


sparse_q = st.one_of(st.just(Fraction(0)), st.just(Fraction(1)), st.just(Fraction(-1)),
                     st.fractions(min_value=-3, max_value=3, max_denominator=3))


@given(st.lists(sparse_q, min_size=8, max_size=8))
def test_generic_identity_vanishes_iff_frozen_components_vanish(vals):
    c = S(vals)
    assert (not generic_jacobi_residuals(c)) == (not any(true_superalgebra_identity(c)))


@given(st.lists(sparse_q, min_size=6, max_size=6))
def test_algebra_closed_form_matches_brackets(vals):
    c = A(vals)
    assert (not generic_jacobi_residuals(c)) == (not any(jacobi_residuals_algebra(c)))


def test_listed_rows_admit_non_jacobi_constants():
    # satisfies the eight listed rows and a_i alpha_i = 0, yet the brackets
    # violate the identity because the mixed rows need a factor 2; this is
    # exactly the S13 row
    c = S([0, 1, 1, 1, 1, 0, 1, 0])
    assert is_admissible(c)
    assert any(true_superalgebra_identity(c))
    assert normalize(c).label == TableLabel("S13", eps=1)


@pytest.mark.parametrize("family", ALGEBRA_FAMILIES + SUPERALGEBRA_FAMILIES)
def test_table_rows_satisfy_the_identity(family):
    for label in sample_labels(family):
        c = table_entry(label)
        assert not any(residuals(c))
        if family == "S13":
            continue
        assert not generic_jacobi_residuals(c), label


def test_s13_violates_the_identity():
    for eps in (1, -1):
        c = table_entry(TableLabel("S13", eps=eps))
        gen = generic_jacobi_residuals(c)
        assert gen[(1, 1, 2)] == {2: eps}


def test_bracket_algebra_antisymmetry():
    alg = bracket_algebra(table_entry(TableLabel("S10", eps=1)))
    # [Q2, Q1] = -[Q1, Q2] because 10 and 01 commute in the superalgebra kind
    assert alg.bracket_generators(2, 1) == {3: -1}
    assert alg.bracket_generators(1, 1) == {0: 1}


# ---------------------------------------------------------------------------
# equivalence and normalization


def test_apply_equivalence_examples():
    c = A([0, 0, 1, 0, 0, 0])
    assert apply_equivalence(c, AlgebraWitness()) == c
    assert apply_equivalence(c, AlgebraWitness(perm=(2, 0, 1))) == A([1, 0, 0, 0, 0, 0])
    s12 = S([0, 1, 0, 0, 0, 0, 0, 0])
    assert apply_equivalence(s12, SuperalgebraWitness(swap=True)) == S([1, 0, 0, 0, 0, 0, 0, 0])


def test_relabeling_matches_recomputed_brackets():
    # relabel generators by hand and recompute the brackets
    c = A([2, 3, 5, 7, 11, 13])
    perm = (1, 2, 0)
    moved = apply_equivalence(c, AlgebraWitness(perm=perm))
    old = bracket_algebra(c)
    new = bracket_algebra(moved)
    idx = [0] + [1 + p for p in perm]
    for i in range(4):
        for j in range(4):
            want = {idx.index(k): v for k, v in old.bracket_generators(idx[i], idx[j]).items()}
            assert new.bracket_generators(i, j) == want


def test_witness_errors():
    with pytest.raises(WitnessError):
        AlgebraWitness(perm=(0, 0, 1))
    with pytest.raises(WitnessError):
        AlgebraWitness(sq=(Fraction(1), Fraction(1), Fraction(4)), prod=Fraction(3))
    with pytest.raises(WitnessError):
        apply_equivalence(A([0] * 6), SuperalgebraWitness())
    with pytest.raises(ValueError):
        Z2Witness(lam_h=0)


def test_normalize_examples():
    assert normalize(A([0] * 6)).label == TableLabel("A7")
    n = normalize(A([0, 0, 5, 2, 3, 5]))
    assert n.label == TableLabel("A6", x=Fraction(1, 10))
    assert normalize(A([3, 2, 6, 0, 0, 0]), Field.R).label == TableLabel("A1", eps=1)
    assert normalize(S([0] * 8)).label == TableLabel("S1")
    assert normalize(S([0, 0, 0, 1, 1, 1, 0, 0])).label == TableLabel("S10", eps=1)
    c = S([2, 2, 4, 3, 0, 0, 0, 0])
    n = normalize(c)
    assert n.label == TableLabel("S21", y=Fraction(1)) and n.witness.lam_h == Fraction(1, 2)
    assert apply_equivalence(c, n.witness) == table_entry(n.label)


def test_normalize_rejects_inadmissible():
    with pytest.raises(InadmissibleError):
        normalize(A([1, 1, 1, 1, 0, 0]))
    with pytest.raises(InadmissibleError):
        normalize(S([1, 0, 0, 0, 1, 0, 0, 0]))


def test_complex_mode_collapses_eps():
    for fam in ("A1", "A2", "S7", "S10"):
        c = table_entry(TableLabel(fam, eps=-1))
        assert normalize(c, Field.R).label == TableLabel(fam, eps=-1)
        assert normalize(c, Field.C).label == TableLabel(fam, eps=1)


@pytest.mark.parametrize("fld", [Field.R, Field.C])
@pytest.mark.parametrize("family", ALGEBRA_FAMILIES + SUPERALGEBRA_FAMILIES)
def test_idempotence(family, fld):
    for label in sample_labels(family, fld)[:6]:
        c = table_entry(label, fld)
        n = normalize(c, fld)
        assert apply_equivalence(c, n.witness) == table_entry(n.label, fld)
        if family != "S13" and fld is Field.R and label in n.candidates:
            assert n.label == min(n.candidates, key=TableLabel.sort_key)


seeds = st.integers(0, 2 ** 32 - 1)


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from([Field.R, Field.C]), st.booleans())
def test_roundtrip(seed, fld, superalgebra):
    rng = random.Random(seed)
    gen = random_superalgebra_constants if superalgebra else random_algebra_constants
    c = gen(rng, fld)
    assert is_admissible(c)
    n = normalize(c, fld)
    target = table_entry(n.label, fld)
    assert apply_equivalence(c, n.witness) == target
    assert apply_equivalence(target, n.witness.inverse()) == c


@settings(max_examples=80, deadline=None)
@given(seeds, st.sampled_from(["z2", "algebra", "superalgebra"]))
def test_group_action(seed, kind):
    rng = random.Random(seed)
    gen = {"z2": lambda r: Z2Constants.from_values([r.randint(-5, 5), r.randint(-5, 5)]),
           "algebra": random_algebra_constants,
           "superalgebra": random_superalgebra_constants}[kind]
    c = gen(rng)
    w1, w2 = random_witness(kind, rng), random_witness(kind, rng)
    assert apply_equivalence(apply_equivalence(c, w1), w2) == apply_equivalence(c, w1.then(w2))
    assert apply_equivalence(apply_equivalence(c, w1), w1.inverse()) == c
    assert apply_equivalence(c, identity_witness(kind)) == c
    # residuals are equivariant
    assert is_admissible(c) == is_admissible(apply_equivalence(c, w1))


def test_verify_tables():
    for fld in (Field.R, Field.C):
        rep = verify_tables(fld)
        assert rep.ok
        assert len(rep.families) == 29
        for f in rep.families:
            if f.family not in ("A1", "A2", "A3", "A4", "A5", "A7", "S1", "S2", "S3", "S4",
                                "S5", "S6", "S7", "S8", "S9", "S10", "S11", "S12", "S13",
                                "S14", "S15", "S16", "S20"):
                assert f.samples >= 25, f.family
        s13 = next(f for f in rep.families if f.family == "S13")
        assert s13.generic_jacobi_failures


def test_distinct_parameters_stay_distinct():
    a = normalize(table_entry(TableLabel("A8", y=Fraction(1, 2), z=Fraction(1, 2))))
    b = normalize(table_entry(TableLabel("A8", y=Fraction(1, 3), z=Fraction(1, 2))))
    assert a.label != b.label


@settings(max_examples=60, deadline=None)
@given(st.lists(sparse_q, min_size=8, max_size=8))
def test_sorted_triples_cover_every_ordering(vals):
    alg = bracket_algebra(S(vals))
    sorted_res = alg.jacobi_residuals()
    for triple in itertools.product(range(4), repeat=3):
        res = jacobi_combination(alg.kind, [alg.generator(i) for i in triple],
                                 [alg.gradings[i] for i in triple], alg.bracket)
        key = tuple(sorted(triple))
        if key in sorted_res:
            assert res in (sorted_res[key], sorted_res[key] * -1)
        else:
            assert not res
