import random
from fractions import Fraction
from itertools import permutations

import pytest

from formcalc import (
    Chart,
    DegenerateStructure,
    Form,
    GradeMismatch,
    KindMismatch,
    Multivector,
    Polynomial,
    SymplecticData,
    contract,
    coordinate_field,
    coordinate_form,
    coordinates,
    differential,
    exterior_derivative,
    form_power,
    lie_derivative,
    magnetic_form,
    mv_from_form,
    pair,
    poisson_bivector,
    standard_form,
    wedge,
)

from tests.helpers import darboux, qp, rand_form, rand_multivector, rand_poly

C2 = darboux(1)  # (q1, p1)
C4 = darboux(2)


def d(name, chart=C2):
    return coordinate_form(chart, name)


def e(name, chart=C2):
    return coordinate_field(chart, name)


class TestWedge:
    def test_square_vanishes(self):
        assert wedge(d("q1"), d("q1")).is_zero()

    def test_basis_product(self):
        assert wedge(d("q1"), d("p1")) == Form(C2, 2, {(0, 1): 1})

    def test_antisymmetry(self):
        assert wedge(d("p1"), d("q1")) == -wedge(d("q1"), d("p1"))

    def test_kind_mismatch(self):
        with pytest.raises(KindMismatch):
            wedge(d("q1"), e("p1"))

    def test_graded_commutativity(self):
        rng = random.Random(11)
        for ga in (0, 1, 2, 3):
            for gb in (0, 1, 2):
                a = rand_form(rng, C4, ga)
                b = rand_form(rng, C4, gb)
                sign = -1 if (ga * gb) % 2 else 1
                assert wedge(a, b) == wedge(b, a) * sign

    def test_associativity(self):
        rng = random.Random(12)
        for _ in range(10):
            a = rand_form(rng, C4, 1)
            b = rand_form(rng, C4, 1)
            c = rand_form(rng, C4, 1)
            assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


class TestExteriorDerivative:
    def test_coefficient_times_basis(self):
        q1, p1 = coordinates(C2)
        a = Form(C2, 1, {(1,): q1})  # q1 * dp1
        assert exterior_derivative(a) == Form(C2, 2, {(0, 1): 1})

    def test_d_squared_zero(self):
        rng = random.Random(13)
        for grade in (0, 1, 2, 3):
            a = rand_form(rng, C4, grade)
            assert exterior_derivative(exterior_derivative(a)).is_zero()

    def test_magnetic_closedness_tracks_divergence(self):
        chart = darboux(3)
        qs, _ = qp(chart)
        solenoidal = magnetic_form(chart, qs[1], qs[2], qs[0])
        assert exterior_derivative(solenoidal).is_zero()
        zero = Polynomial.zero(chart)
        divergent = magnetic_form(chart, qs[0], zero, zero)
        assert not exterior_derivative(divergent).is_zero()


class TestFormPower:
    def test_binomial_expansion(self):
        omega = standard_form(C4)
        block = wedge(
            wedge(d("p1", C4), d("q1", C4)), wedge(d("p2", C4), d("q2", C4))
        )
        assert form_power(omega, 2) == block * 2

    def test_magnetic_cube_collapses(self):
        chart = darboux(3)
        qs, _ = qp(chart)
        omega_b = magnetic_form(chart, qs[1], qs[2], qs[0])
        assert form_power(omega_b, 3) == form_power(standard_form(chart), 3)

    def test_power_beyond_top_vanishes(self):
        omega = standard_form(C4)
        assert form_power(omega, 3).is_zero()


class TestContract:
    def test_counts_pairs(self):
        omega = standard_form(C4)
        lam = poisson_bivector(omega)
        assert contract(lam, omega) == Form.from_polynomial(Polynomial.constant(C4, 2))

    def test_on_square(self):
        omega = standard_form(C4)
        lam = poisson_bivector(omega)
        assert contract(lam, form_power(omega, 2)) == omega * 2

    def test_single_direction(self):
        a = wedge(d("q1"), d("p1"))
        assert contract(e("q1"), a) == d("p1")

    def test_grade_guard(self):
        with pytest.raises(GradeMismatch):
            contract(Multivector(C2, 2, {(0, 1): 1}), d("q1"))

    def test_antiderivation(self):
        rng = random.Random(14)
        for ga in (1, 2):
            for gb in (1, 2):
                x = rand_multivector(rng, C4, 1)
                a = rand_form(rng, C4, ga)
                b = rand_form(rng, C4, gb)
                left = contract(x, wedge(a, b))
                sign = -1 if ga % 2 else 1
                right = wedge(contract(x, a), b) + wedge(a, contract(x, b)) * sign
                assert left == right


def pairing_oracle(a: Form, field: Multivector) -> Polynomial:
    """Independent determinant pairing via explicit permutation expansion."""
    total = Polynomial.zero(a.chart)
    for key_a, ca in a.terms.items():
        for key_b, cb in field.terms.items():
            for sigma in permutations(range(len(key_b))):
                if tuple(key_b[s] for s in sigma) != key_a:
                    continue
                parity = 1
                perm = list(sigma)
                for i in range(len(perm)):
                    for j in range(i + 1, len(perm)):
                        if perm[i] > perm[j]:
                            parity = -parity
                total = total + ca * cb * parity
    return total


class TestPair:
    def test_defining_equation_n1(self):
        omega = standard_form(C2)
        lam = poisson_bivector(omega)
        q1, p1 = coordinates(C2)
        value = pair(wedge(differential(q1), differential(p1)), lam)
        assert value * omega == wedge(differential(q1), differential(p1))

    def test_vector_field_action(self):
        rng = random.Random(15)
        for _ in range(10):
            f = rand_poly(rng, C4)
            x = rand_multivector(rng, C4, 1)
            expected = Polynomial.zero(C4)
            for (i,), c in x.terms.items():
                expected = expected + c * f.diff(i)
            assert pair(differential(f), x) == expected

    def test_matching_tuple_only(self):
        chart = C4
        field = Multivector(chart, 2, {(0, 1): 1, (2, 3): 1})
        a = wedge(d("q1", chart), d("q2", chart))
        assert pair(a, field) == pairing_oracle(a, field)
        assert pair(a, field) == Polynomial.constant(chart, 1)

    def test_against_oracle_random(self):
        rng = random.Random(16)
        for grade in (1, 2, 3):
            for _ in range(8):
                a = rand_form(rng, C4, grade)
                field = rand_multivector(rng, C4, grade)
                assert pair(a, field) == pairing_oracle(a, field)

    def test_grade_mismatch(self):
        with pytest.raises(GradeMismatch):
            pair(d("q1"), Multivector(C2, 2, {(0, 1): 1}))


class TestVolumeTransfer:
    def test_volume_to_one(self):
        volume = Form(C4, 4, {(0, 1, 2, 3): 3})
        one = Multivector.from_polynomial(Polynomial.constant(C4, 1))
        assert mv_from_form(volume, volume) == one

    def test_round_trip(self):
        rng = random.Random(17)
        volume = Form(C4, 4, {(0, 1, 2, 3): Fraction(-2, 3)})
        for grade in (0, 1, 2, 3, 4):
            a = rand_form(rng, C4, 4 - grade)
            lam = mv_from_form(volume, a)
            assert contract(lam, volume) == a

    def test_inverse_of_contraction(self):
        rng = random.Random(18)
        volume = Form(C4, 4, {(0, 1, 2, 3): 5})
        for grade in (0, 1, 2, 3, 4):
            lam = rand_multivector(rng, C4, grade)
            assert mv_from_form(volume, contract(lam, volume)) == lam

    def test_standard_pair_normalization(self):
        sym = SymplecticData(standard_form(C4))
        volume = sym.volume()
        assert mv_from_form(volume, sym.omega) == sym.bivector

    def test_rejects_nonconstant_volume(self):
        q1 = Polynomial.variable(C4, "q1")
        volume = Form(C4, 4, {(0, 1, 2, 3): q1})
        with pytest.raises(DegenerateStructure):
            mv_from_form(volume, volume)

    def test_rejects_non_top(self):
        with pytest.raises(DegenerateStructure):
            mv_from_form(standard_form(C4), standard_form(C4))


class TestPoissonBivector:
    def test_one_degree_of_freedom(self):
        lam = poisson_bivector(standard_form(C2))
        assert lam == Multivector(C2, 2, {(0, 1): -1})  # e(p1)^e(q1)

    def test_magnetic_block(self):
        chart = darboux(3)
        qs, _ = qp(chart)
        omega_b = magnetic_form(chart, qs[1], qs[2], qs[0])
        lam = poisson_bivector(omega_b)
        # momentum-momentum block carries the field components
        assert lam.coefficient((3, 4)) == qs[0]
        assert lam.coefficient((4, 5)) == qs[1]
        assert lam.coefficient((5, 3)) == qs[2]
        # position-position block vanishes, mixed block is the identity
        assert lam.coefficient((0, 1)).is_zero()
        assert lam.coefficient((3, 0)) == Polynomial.constant(chart, 1)

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateStructure):
            poisson_bivector(Form.zero(C2, 2))

    def test_odd_dimension_rejected(self):
        chart = Chart(("x", "y", "z"))
        with pytest.raises(DegenerateStructure):
            poisson_bivector(Form(chart, 2, {(0, 1): 1}))

    def test_nonconstant_determinant_rejected(self):
        q1 = Polynomial.variable(C2, "q1")
        with pytest.raises(DegenerateStructure):
            poisson_bivector(Form(C2, 2, {(0, 1): q1 * q1 + 1}))


class TestLieDerivative:
    def test_translation_direction(self):
        q1, _ = coordinates(C2)
        a = Form(C2, 1, {(1,): q1})  # q1 * dp1
        assert lie_derivative(e("q1"), a) == d("p1")

    def test_commutes_with_d(self):
        rng = random.Random(19)
        for grade in (0, 1, 2):
            x = rand_multivector(rng, C4, 1)
            a = rand_form(rng, C4, grade)
            assert lie_derivative(x, exterior_derivative(a)) == exterior_derivative(
                lie_derivative(x, a)
            )


class TestSymplecticData:
    def test_rejects_open_form(self):
        chart = darboux(3)
        qs, _ = qp(chart)
        zero = Polynomial.zero(chart)
        with pytest.raises(DegenerateStructure):
            SymplecticData(magnetic_form(chart, qs[0], zero, zero))

    def test_power_contraction_ladder(self):
        for n in (1, 2, 3):
            chart = darboux(n)
            omega = standard_form(chart)
            lam = poisson_bivector(omega)
            for k in range(1, n + 1):
                left = contract(lam, form_power(omega, k))
                right = form_power(omega, k - 1) * Fraction(k * (n - k + 1))
                assert left == right

    def test_pairing_volume_identity_random(self):
        rng = random.Random(20)
        chart = Chart(("x1", "x2", "x3", "x4"))
        for k in (1, 2, 3, 4):
            for _ in range(6):
                lam = rand_multivector(rng, chart, k)
                volume = Form(chart, 4, {(0, 1, 2, 3): rand_poly(rng, chart)})
                if volume.is_zero():
                    continue
                dfw = None
                for _ in range(k):
                    df = differential(rand_poly(rng, chart))
                    dfw = df if dfw is None else wedge(dfw, df)
                assert pair(dfw, lam) * volume == wedge(dfw, contract(lam, volume))
