import random
from fractions import Fraction
from itertools import permutations

import pytest

from formcalc import (
    ArityMismatch,
    BracketDef,
    Chart,
    Form,
    JacobiDef,
    Multivector,
    Polynomial,
    RationalExpr,
    SymplecticData,
    bracket,
    contract,
    coordinate_field,
    coordinates,
    derived_vf,
    differential,
    form_power,
    hamiltonian_vf,
    homogenization_check,
    jacobi_bracket,
    jacobiator,
    lie_derivative,
    magnetic_form,
    nambu_top_bracket,
    omega_power_bracket,
    pair,
    schouten,
    standard_form,
    wedge_all,
)

from tests.helpers import darboux, qp, rand_poly


def permutation_parity(sigma) -> int:
    parity = 1
    items = list(sigma)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                parity = -parity
    return parity


class TestBracketDef:
    def test_minimal_binary(self):
        chart = darboux(1)
        q1, p1 = coordinates(chart)
        omega = standard_form(chart)
        bdef = BracketDef(omega, Form.from_polynomial(Polynomial.constant(chart, 1)))
        assert bracket(bdef, p1, q1) == Polynomial.constant(chart, 1)

    def test_repeated_argument_vanishes(self):
        chart = darboux(2)
        sym = SymplecticData(standard_form(chart))
        rng = random.Random(30)
        f = rand_poly(rng, chart)
        g = rand_poly(rng, chart)
        assert omega_power_bracket(sym, 2, f, f, g, g + 1).is_zero()

    def test_constant_argument_vanishes(self):
        chart = darboux(1)
        q1, _ = coordinates(chart)
        sym = SymplecticData(standard_form(chart))
        one = Polynomial.constant(chart, 1)
        assert omega_power_bracket(sym, 1, one, q1).is_zero()

    def test_arity_guard(self):
        chart = darboux(1)
        sym = SymplecticData(standard_form(chart))
        with pytest.raises(ArityMismatch):
            omega_power_bracket(sym, 1, Polynomial.constant(chart, 1))

    def test_power_index_out_of_range(self):
        chart = darboux(1)
        q1, p1 = coordinates(chart)
        sym = SymplecticData(standard_form(chart))
        with pytest.raises(ArityMismatch):
            omega_power_bracket(sym, 2, q1, p1, q1, p1)
        with pytest.raises(ArityMismatch):
            derived_vf(sym, 0)

    def test_nonconstant_volume_falls_back_to_quotient(self):
        chart = darboux(1)
        q1, p1 = coordinates(chart)
        volume = Form(chart, 2, {(0, 1): q1 * q1 + 1})
        bdef = BracketDef(volume, Form.from_polynomial(Polynomial.constant(chart, 1)))
        value = bracket(bdef, p1, q1)
        assert isinstance(value, RationalExpr)
        assert value == RationalExpr(Polynomial.constant(chart, -1), q1 * q1 + 1)


class TestPowerBracket:
    def test_full_arity_value(self):
        # direct expansion oracle: { q1, p1, q2, p2 } with k = n = 2
        chart = darboux(2)
        q1, q2, p1, p2 = coordinates(chart)
        sym = SymplecticData(standard_form(chart))
        top = tuple(range(4))
        dfw = wedge_all([differential(f) for f in (q1, p1, q2, p2)])
        volume = sym.volume()
        oracle = dfw.terms[top] * 2 / volume.terms[top].constant_value()
        assert oracle == Polynomial.constant(chart, 2)
        assert omega_power_bracket(sym, 2, q1, p1, q2, p2) == oracle

    def test_mixed_pairs_are_kronecker(self):
        for n in (1, 2, 3):
            chart = darboux(n)
            qs, ps = qp(chart)
            sym = SymplecticData(standard_form(chart))
            for i in range(n):
                for j in range(n):
                    value = omega_power_bracket(sym, 1, ps[i], qs[j])
                    assert value == Polynomial.constant(chart, 1 if i == j else 0)
                    assert omega_power_bracket(sym, 1, qs[i], qs[j]).is_zero()
                    assert omega_power_bracket(sym, 1, ps[i], ps[j]).is_zero()

    def test_magnetic_momentum_brackets(self):
        chart = darboux(3)
        qs, ps = qp(chart)
        sym = SymplecticData(magnetic_form(chart, qs[1], qs[2], qs[0]))
        assert omega_power_bracket(sym, 1, ps[0], ps[1]) == qs[0]
        assert omega_power_bracket(sym, 1, ps[1], ps[2]) == qs[1]
        assert omega_power_bracket(sym, 1, ps[2], ps[0]) == qs[2]

    def test_generator_is_wedge_power(self):
        from math import factorial

        for n in (1, 2, 3):
            chart = darboux(n)
            sym = SymplecticData(standard_form(chart))
            for k in range(1, n + 1):
                alpha = sym.power(n - k) * Fraction(factorial(k), factorial(n - k))
                bdef = BracketDef(sym.volume(), alpha)
                assert bdef.generator == sym.bivector_power(k)
                assert contract(sym.bivector_power(k), sym.volume()) == alpha

    def test_total_antisymmetry(self):
        chart = darboux(2)
        sym = SymplecticData(standard_form(chart))
        rng = random.Random(31)
        fs = [rand_poly(rng, chart, degree=1) for _ in range(4)]
        base = omega_power_bracket(sym, 2, *fs)
        for sigma in permutations(range(4)):
            shuffled = omega_power_bracket(sym, 2, *(fs[i] for i in sigma))
            assert shuffled == base * permutation_parity(sigma)

    def test_leibniz_in_a_slot(self):
        chart = darboux(2)
        sym = SymplecticData(standard_form(chart))
        rng = random.Random(32)
        for _ in range(10):
            f, f2, g, h, w = (rand_poly(rng, chart, degree=1) for _ in range(5))
            left = omega_power_bracket(sym, 2, f * f2, g, h, w)
            right = f * omega_power_bracket(sym, 2, f2, g, h, w) + f2 * omega_power_bracket(
                sym, 2, f, g, h, w
            )
            assert left == right

    def test_jacobi_identity_binary(self):
        chart = darboux(2)
        sym = SymplecticData(standard_form(chart))
        rng = random.Random(33)
        for _ in range(10):
            f, g, h = (rand_poly(rng, chart) for _ in range(3))
            assert jacobiator(sym, f, g, h).is_zero()

    def test_generator_self_commutes(self):
        for n in (2, 3):
            chart = darboux(n)
            sym = SymplecticData(standard_form(chart))
            for k in range(1, n + 1):
                power = sym.bivector_power(k)
                assert schouten(power, power).is_zero()


class TestNambu:
    def test_identity_jacobian(self):
        chart = Chart(("x", "y"))
        x, y = coordinates(chart)
        volume = Form(chart, 2, {(0, 1): 1})
        one = Polynomial.constant(chart, 1)
        assert nambu_top_bracket(volume, one, x, y) == one

    def test_function_weight(self):
        chart = Chart(("x", "y"))
        x, y = coordinates(chart)
        volume = Form(chart, 2, {(0, 1): 1})
        assert nambu_top_bracket(volume, x, x, y) == x

    def test_odd_permutation_flips_sign(self):
        chart = Chart(("x", "y", "z"))
        x, y, z = coordinates(chart)
        volume = Form(chart, 3, {(0, 1, 2): 1})
        gamma = x * y + 2
        assert nambu_top_bracket(volume, gamma, y, x, z) == -gamma

    def test_arity_guard(self):
        chart = Chart(("x", "y"))
        x, _ = coordinates(chart)
        volume = Form(chart, 2, {(0, 1): 1})
        with pytest.raises(ArityMismatch):
            nambu_top_bracket(volume, x, x)


class TestHamiltonianField:
    def test_momentum_generates_translation(self):
        chart = darboux(1)
        q1, p1 = coordinates(chart)
        sym = SymplecticData(standard_form(chart))
        x = hamiltonian_vf(sym, p1)
        assert x == coordinate_field(chart, "q1")
        assert pair(differential(q1), x) == omega_power_bracket(sym, 1, p1, q1)

    def test_constant_gives_zero(self):
        chart = darboux(2)
        sym = SymplecticData(standard_form(chart))
        assert hamiltonian_vf(sym, Polynomial.constant(chart, 7)).is_zero()

    def test_contraction_convention(self):
        chart = darboux(2)
        sym = SymplecticData(standard_form(chart))
        rng = random.Random(34)
        for _ in range(10):
            f = rand_poly(rng, chart)
            x = hamiltonian_vf(sym, f)
            assert contract(x, sym.omega) == -differential(f)

    def test_preserves_the_form(self):
        chart = darboux(2)
        sym = SymplecticData(standard_form(chart))
        rng = random.Random(35)
        for _ in range(10):
            x = hamiltonian_vf(sym, rand_poly(rng, chart))
            assert lie_derivative(x, sym.omega).is_zero()

    def test_action_is_the_bracket(self):
        chart = darboux(2)
        sym = SymplecticData(standard_form(chart))
        rng = random.Random(36)
        for _ in range(10):
            f = rand_poly(rng, chart)
            g = rand_poly(rng, chart)
            assert pair(differential(g), hamiltonian_vf(sym, f)) == omega_power_bracket(
                sym, 1, f, g
            )


class TestDerivedField:
    def test_magnetic_drift(self):
        chart = darboux(3)
        qs, ps = qp(chart)
        sym = SymplecticData(magnetic_form(chart, qs[1], qs[2], qs[0]))
        x = derived_vf(sym, 2, ps[0], ps[1], ps[2])
        expected = Multivector(chart, 1, {(0,): qs[1], (1,): qs[2], (2,): qs[0]})
        assert x == expected

    def test_standard_form_gives_zero(self):
        chart = darboux(3)
        _, ps = qp(chart)
        sym = SymplecticData(standard_form(chart))
        assert derived_vf(sym, 2, ps[0], ps[1], ps[2]).is_zero()

    def test_reduces_to_hamiltonian_field(self):
        chart = darboux(2)
        sym = SymplecticData(standard_form(chart))
        rng = random.Random(37)
        for _ in range(6):
            f = rand_poly(rng, chart)
            assert derived_vf(sym, 1, f) == hamiltonian_vf(sym, f)

    def test_three_function_expansion(self):
        rng = random.Random(38)
        for n in (2, 3):
            chart = darboux(n)
            sym = SymplecticData(standard_form(chart))
            for _ in range(8):
                f1, f2, f3 = (rand_poly(rng, chart) for _ in range(3))
                left = derived_vf(sym, 2, f1, f2, f3)
                pb = lambda a, b: omega_power_bracket(sym, 1, a, b)
                right = (
                    hamiltonian_vf(sym, f3) * pb(f1, f2)
                    + hamiltonian_vf(sym, f1) * pb(f2, f3)
                    + hamiltonian_vf(sym, f2) * pb(f3, f1)
                )
                assert left == right

    def test_not_a_derivation_witness(self):
        # on the linear-field chart the drift field fails the Leibniz rule
        chart = darboux(3)
        qs, ps = qp(chart)
        sym = SymplecticData(magnetic_form(chart, qs[1], qs[2], qs[0]))
        x = derived_vf(sym, 2, ps[0], ps[1], ps[2])
        f, g = ps[1], ps[2]
        pb = lambda a, b: omega_power_bracket(sym, 1, a, b)
        act = lambda h: pair(differential(h), x)
        left = act(pb(f, g))
        right = pb(act(f), g) + pb(f, act(g))
        assert left != right


class TestJacobiBracket:
    CONTACT = Chart(("x", "y", "z"))

    def contact_pair(self):
        y = Polynomial.variable(self.CONTACT, "y")
        lam = Multivector(self.CONTACT, 2, {(0, 1): 1, (1, 2): -y})
        return JacobiDef(lam, coordinate_field(self.CONTACT, "z"))

    def test_flag_recomputed(self):
        jdef = self.contact_pair()
        assert jdef.is_jacobi
        bad = JacobiDef(
            Multivector(self.CONTACT, 2, {(0, 1): 1}),
            coordinate_field(self.CONTACT, "z"),
        )
        assert not bad.is_jacobi

    def test_reduces_to_poisson_bracket(self):
        chart = darboux(2)
        sym = SymplecticData(standard_form(chart))
        jdef = JacobiDef(sym.bivector, Multivector.zero(chart, 1))
        rng = random.Random(39)
        for _ in range(6):
            f, g = rand_poly(rng, chart), rand_poly(rng, chart)
            assert jacobi_bracket(jdef, f, g) == omega_power_bracket(sym, 1, f, g)

    def test_antisymmetry(self):
        jdef = self.contact_pair()
        rng = random.Random(40)
        f = rand_poly(rng, self.CONTACT)
        assert jacobi_bracket(jdef, f, f).is_zero()

    def test_contact_value(self):
        # hand expansion: L(x, y) = 1 and the field terms vanish
        jdef = self.contact_pair()
        x, y, _ = coordinates(self.CONTACT)
        assert jacobi_bracket(jdef, x, y) == Polynomial.constant(self.CONTACT, 1)

    def test_jacobi_identity_when_flag_holds(self):
        jdef = self.contact_pair()
        rng = random.Random(41)
        for _ in range(20):
            f, g, h = (rand_poly(rng, self.CONTACT) for _ in range(3))
            assert jacobiator(jdef, f, g, h).is_zero()


class TestHomogenization:
    CONTACT = Chart(("x", "y", "z"))

    def contact_pair(self):
        y = Polynomial.variable(self.CONTACT, "y")
        lam = Multivector(self.CONTACT, 2, {(0, 1): 1, (1, 2): -y})
        return JacobiDef(lam, coordinate_field(self.CONTACT, "z"))

    def test_trivial_pair(self):
        jdef = JacobiDef(Multivector.zero(self.CONTACT, 2), Multivector.zero(self.CONTACT, 1))
        one = Polynomial.constant(self.CONTACT, 1)
        assert homogenization_check(jdef, one, one)

    def test_constants(self):
        jdef = self.contact_pair()
        one = Polynomial.constant(self.CONTACT, 1)
        assert homogenization_check(jdef, one, one)

    def test_random_pairs(self):
        jdef = self.contact_pair()
        rng = random.Random(42)
        for _ in range(20):
            f, g = rand_poly(rng, self.CONTACT), rand_poly(rng, self.CONTACT)
            assert homogenization_check(jdef, f, g)

    def test_name_collision_rejected(self):
        chart = Chart(("x", "s"))
        jdef = JacobiDef(Multivector.zero(chart, 2), Multivector.zero(chart, 1))
        one = Polynomial.constant(chart, 1)
        with pytest.raises(Exception):
            homogenization_check(jdef, one, one)


class TestJacobiator:
    def test_magnetic_cases(self):
        chart = darboux(3)
        qs, ps = qp(chart)
        zero = Polynomial.zero(chart)
        closed = SymplecticData(magnetic_form(chart, qs[1], qs[2], qs[0]))
        assert jacobiator(closed, ps[0], ps[1], ps[2]).is_zero()
        # open case: go through a bracket definition, no closedness needed
        omega_open = magnetic_form(chart, qs[0], zero, zero)
        volume = form_power(omega_open, 3) * Fraction(1, 6)
        alpha = form_power(omega_open, 2) * Fraction(1, 2)
        bdef = BracketDef(volume, alpha)
        value = jacobiator(bdef, ps[0], ps[1], ps[2])
        assert value == Polynomial.constant(chart, 1)  # equals div B
