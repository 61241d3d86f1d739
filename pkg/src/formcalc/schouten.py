"""The graded bracket of multivector fields and structure tests built on it.

The bracket is pinned by four properties:

* ``[X, f] = X(f)`` for a vector field ``X`` and a function ``f``;
* ``[X, Y]`` is the Lie bracket of vector fields;
* graded Leibniz rule ``[A, B^C] = [A,B]^C + (-1)^((a-1)*b) B^[A,C]``;
* graded antisymmetry ``[A, B] = -(-1)^((a-1)*(b-1)) [B, A]``,

where ``a``, ``b`` are the grades.  These force the coordinate formula

    [A, B] = (-1)^(a-1) * sum_i (delta_i A)^(d_i B)  -  sum_i (d_i A)^(delta_i B)

with ``delta_i`` the interior product against ``dx_i`` (index removal with
parity sign) and ``d_i`` the coefficientwise partial derivative.  A grade-2
multivector generates a bracket satisfying the Jacobi identity exactly when
it commutes with itself under this bracket.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ChartMismatch, DegenerateStructure, GradeMismatch, KindMismatch
from .exterior import (
    Form,
    Multivector,
    _accumulate,
    _merge_sign,
    contract,
    exterior_derivative,
    wedge,
)

def _delta_terms(field: Multivector, index: int) -> dict:
    out: dict = {}
    for key, coefficient in field.terms.items():
        if index not in key:
            continue
        position = key.index(index)
        rest = key[:position] + key[position + 1:]
        _accumulate(out, rest, coefficient if position % 2 == 0 else -coefficient)
    return out


def _diff_terms(field: Multivector, index: int) -> dict:
    out: dict = {}
    for key, coefficient in field.terms.items():
        dc = coefficient.diff(index)
        if not dc.is_zero():
            out[key] = dc
    return out


def schouten(a: Multivector, b: Multivector) -> Multivector:
    """The graded bracket ``[a, b]`` of two multivector fields."""
    if not isinstance(a, Multivector) or not isinstance(b, Multivector):
        raise KindMismatch("schouten takes two multivectors")
    if a.chart != b.chart:
        raise ChartMismatch("operands live on different charts")
    chart = a.chart
    grade = a.grade + b.grade - 1
    if grade < 0:
        return Multivector.zero(chart, 0)
    front = 1 if (a.grade - 1) % 2 == 0 else -1
    table: dict = {}
    for i in range(chart.dim):
        delta_a = _delta_terms(a, i)
        if delta_a:
            diff_b = _diff_terms(b, i)
            for ka, ca in delta_a.items():
                for kb, cb in diff_b.items():
                    key, sign = _merge_sign(ka, kb)
                    if key is None:
                        continue
                    value = ca * cb
                    _accumulate(table, key, value if front * sign == 1 else -value)
        diff_a = _diff_terms(a, i)
        if diff_a:
            delta_b = _delta_terms(b, i)
            for ka, ca in diff_a.items():
                for kb, cb in delta_b.items():
                    key, sign = _merge_sign(ka, kb)
                    if key is None:
                        continue
                    value = ca * cb
                    _accumulate(table, key, -value if sign == 1 else value)
    result = Multivector(chart, min(grade, chart.dim))
    result.terms = table
    return result


def is_poisson(bivector: Multivector) -> bool:
    """True exactly when the grade-2 field commutes with itself."""
    if bivector.grade != 2:
        raise GradeMismatch("is_poisson needs a grade-2 multivector")
    return schouten(bivector, bivector).is_zero()


def is_n_poisson(field: Multivector) -> bool:
    """Self-commutation test for an even-grade multivector field."""
    if field.grade % 2:
        raise GradeMismatch("is_n_poisson needs an even-grade multivector")
    return schouten(field, field).is_zero()


def _require_volume(volume: Form):
    if not isinstance(volume, Form) or volume.grade != volume.chart.dim or volume.is_zero():
        raise DegenerateStructure("expected a nonzero top-grade form")


def _contract_or_zero(field: Multivector, a: Form) -> Form:
    # contraction past the form grade is zero, not an error, inside identities
    if field.grade > a.grade:
        return Form.zero(a.chart, 0)
    return contract(field, a)


def volume_poisson_criterion(bivector: Multivector, volume: Form) -> bool:
    """Volume-form test for the Jacobi identity of a bivector's bracket.

    Evaluates ``d i_{L^L} V == 2 i_L d i_L V`` exactly; for a nondegenerate
    volume this is equivalent to ``is_poisson``.
    """
    if not isinstance(bivector, Multivector) or bivector.grade != 2:
        raise GradeMismatch("expected a grade-2 multivector")
    _require_volume(volume)
    left = exterior_derivative(contract(wedge(bivector, bivector), volume))
    right = _contract_or_zero(bivector, exterior_derivative(contract(bivector, volume))) * 2
    return left == right


def schouten_volume_identity_check(l1: Multivector, l2: Multivector, volume: Form) -> bool:
    """Cross-validation of the graded bracket against contraction and d.

    For bivectors and a volume form (so ``dV = 0``) the bracket satisfies,
    with this module's sign conventions,

        i_{[L1,L2]} V  ==  d i_{L2^L1} V  -  i_{L1} d i_{L2} V  -  i_{L2} d i_{L1} V.
    """
    for field in (l1, l2):
        if not isinstance(field, Multivector) or field.grade != 2:
            raise GradeMismatch("expected grade-2 multivectors")
    _require_volume(volume)
    left = contract(schouten(l1, l2), volume)
    right = exterior_derivative(contract(wedge(l2, l1), volume))
    right = right - _contract_or_zero(l1, exterior_derivative(contract(l2, volume)))
    right = right - _contract_or_zero(l2, exterior_derivative(contract(l1, volume)))
    return left == right


def jacobi_pair_check(bivector: Multivector, field: Multivector) -> bool:
    """Compatibility of a bivector with a vector field as a Jacobi structure.

    With this module's bracket signs the two conditions read ``[X, L] = 0``
    and ``[L, L] = -2 X^L``; when they hold, the bracket
    ``L(f,g) + f*X(g) - g*X(f)`` satisfies the ordinary Jacobi identity.
    """
    if not isinstance(bivector, Multivector) or bivector.grade != 2:
        raise GradeMismatch("expected a grade-2 multivector")
    if not isinstance(field, Multivector) or field.grade != 1:
        raise GradeMismatch("expected a grade-1 multivector")
    if not schouten(field, bivector).is_zero():
        return False
    return schouten(bivector, bivector) == wedge(field, bivector) * Fraction(-2)
