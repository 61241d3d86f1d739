"""Bracket constructions: form-defined k-brackets, symplectic-power brackets,
Nambu top brackets, derived and Hamiltonian vector fields, and Jacobi-type
brackets with their exponential homogenization check.

Normalizations.  Two families of brackets share the volume ``omega^n/n!``:

* :func:`omega_power_bracket` pairs ``2k`` functions against
  ``k! * omega^{n-k}/(n-k)!``; it is generated by the k-th wedge power of the
  inverse bivector.
* the *section* bracket behind :func:`derived_vf` drops the ``k!`` factor
  (``alpha = omega^{n-k}/(n-k)!``).  This is the normalization for which
  ``X_{f1,f2,f3} = {f1,f2} X_{f3} + {f2,f3} X_{f1} + {f3,f1} X_{f2}`` holds
  exactly, and for which the magnetic-chart field ``X_{p1,p2,p3}`` equals
  ``B^i e(q_i)`` with no extra constant.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .chart import Chart
from .errors import (
    AlgebraError,
    ArityMismatch,
    ChartMismatch,
    DegenerateStructure,
    GradeMismatch,
)
from .exterior import (
    Form,
    Multivector,
    SymplecticData,
    contract,
    differential,
    mv_from_form,
    pair,
    wedge,
)
from .poly import (
    ExpPoly,
    Polynomial,
    RationalExpr,
    coordinates,
    matrix_determinant,
)
from .schouten import jacobi_pair_check


class BracketDef:
    """A k-ary bracket cut out by a volume form and a complementary form.

    The bracket of ``k = dim - grade(alpha)`` functions is the scalar ``s``
    with ``s * volume == df_1 ^ ... ^ df_k ^ alpha``.  When the volume
    coefficient is a rational constant the generating k-multivector is cached
    at construction and evaluation doubles as a consistency check between the
    pairing route and the form-division route; otherwise evaluation falls
    back to a :class:`RationalExpr` quotient of top-form coefficients.
    """

    __slots__ = ("volume", "alpha", "arity", "generator", "_top", "_vol_coeff", "_vol_const")

    def __init__(self, volume: Form, alpha: Form):
        if not isinstance(volume, Form) or not isinstance(alpha, Form):
            raise AlgebraError("BracketDef takes two forms")
        if volume.chart != alpha.chart:
            raise ChartMismatch("volume and alpha live on different charts")
        chart = volume.chart
        m = chart.dim
        if volume.grade != m or volume.is_zero():
            raise DegenerateStructure("volume must be a nonzero top form")
        arity = m - alpha.grade
        if arity < 1:
            raise GradeMismatch("alpha leaves no argument slots")
        self.volume = volume
        self.alpha = alpha
        self.arity = arity
        self._top = tuple(range(m))
        self._vol_coeff = volume.terms[self._top]
        try:
            self._vol_const = self._vol_coeff.constant_value()
        except ValueError:
            self._vol_const = None
        if self._vol_const is not None:
            self.generator = mv_from_form(volume, alpha)
            if contract(self.generator, volume) != alpha:
                raise AlgebraError("internal: generator does not reproduce alpha")
        else:
            self.generator = None

    @property
    def chart(self) -> Chart:
        return self.volume.chart


def _differential_wedge(chart: Chart, functions) -> Form:
    result = None
    for f in functions:
        if f.chart != chart:
            raise ChartMismatch("bracket argument lives on a different chart")
        df = differential(f)
        result = df if result is None else wedge(result, df)
    return result


def bracket(bdef: BracketDef, *functions: Polynomial):
    """Evaluate a form-defined bracket on ``arity`` polynomial arguments."""
    if len(functions) != bdef.arity:
        raise ArityMismatch(f"bracket takes {bdef.arity} arguments, got {len(functions)}")
    chart = bdef.chart
    dfw = _differential_wedge(chart, functions)
    top = wedge(dfw, bdef.alpha)
    numerator = top.terms.get(bdef._top, Polynomial.zero(chart))
    if bdef.generator is None:
        return RationalExpr(numerator, bdef._vol_coeff)
    value = pair(dfw, bdef.generator)
    if value * bdef._vol_const != numerator:
        raise AlgebraError("internal: pairing and form-division routes disagree")
    return value


def _power_def(sym: SymplecticData, k: int, with_factorial: bool) -> BracketDef:
    if not 1 <= k <= sym.n:
        raise ArityMismatch(f"power index must lie in 1..{sym.n}")
    key = ("bracket_def", k, with_factorial)

    def build():
        scale = Fraction(factorial(k) if with_factorial else 1, factorial(sym.n - k))
        return BracketDef(sym.volume(), sym.power(sym.n - k) * scale)

    return sym.cached(key, build)


def omega_power_bracket(sym: SymplecticData, k: int, *functions: Polynomial) -> Polynomial:
    """The 2k-ary bracket with ``alpha = k! * omega^{n-k}/(n-k)!``.

    Generated by the k-th wedge power of the inverse bivector; ``k = 1`` is
    the ordinary Poisson bracket of the symplectic form.
    """
    bdef = _power_def(sym, k, with_factorial=True)
    if len(functions) != 2 * k:
        raise ArityMismatch(f"power bracket of index {k} takes {2 * k} arguments")
    return bracket(bdef, *functions)


def poisson_bracket(sym: SymplecticData, f: Polynomial, g: Polynomial) -> Polynomial:
    """Shorthand for the binary case of :func:`omega_power_bracket`."""
    return omega_power_bracket(sym, 1, f, g)


def nambu_top_bracket(volume: Form, gamma: Polynomial, *functions: Polynomial) -> Polynomial:
    """Top-arity bracket ``gamma * det(df_i/dx_j)`` scaled against the volume.

    Computed both by wedging the differentials and by a cofactor determinant
    of the Jacobian matrix; the two routes must agree.
    """
    chart = volume.chart
    m = chart.dim
    if volume.grade != m or volume.is_zero():
        raise DegenerateStructure("volume must be a nonzero top form")
    top = tuple(range(m))
    try:
        c = volume.terms[top].constant_value()
    except ValueError:
        raise DegenerateStructure("volume coefficient must be a rational constant") from None
    if gamma.chart != chart:
        raise ChartMismatch("gamma lives on a different chart")
    if len(functions) != m:
        raise ArityMismatch(f"top bracket takes {m} arguments, got {len(functions)}")
    dfw = _differential_wedge(chart, functions)
    wedge_value = gamma * dfw.terms.get(top, Polynomial.zero(chart)) * (Fraction(1) / c)
    jacobian = [[f.diff(j) for j in range(m)] for f in functions]
    det_value = gamma * matrix_determinant(jacobian, chart) * (Fraction(1) / c)
    if wedge_value != det_value:
        raise AlgebraError("internal: wedge and determinant routes disagree")
    return wedge_value


def hamiltonian_vf(sym: SymplecticData, f: Polynomial) -> Multivector:
    """The vector field ``X_f`` with ``i_{X_f} omega = -df`` and ``X_f(g) = {f,g}``."""
    if f.chart != sym.chart:
        raise ChartMismatch("function lives on a different chart")
    m = sym.chart.dim
    components = [Polynomial.zero(sym.chart) for _ in range(m)]
    for (a, b), coefficient in sym.bivector.terms.items():
        components[b] = components[b] + coefficient * f.diff(a)
        components[a] = components[a] - coefficient * f.diff(b)
    return Multivector(sym.chart, 1, {(i,): components[i] for i in range(m)})


def derived_vf(sym: SymplecticData, k: int, *functions: Polynomial) -> Multivector:
    """The vector field obtained by fixing all but the last slot of the
    section-normalized 2k-bracket (``alpha = omega^{n-k}/(n-k)!``).

    Equals ``1/k!`` times the corresponding slice of
    :func:`omega_power_bracket`; for ``k = 1`` it reduces to
    :func:`hamiltonian_vf`.
    """
    bdef = _power_def(sym, k, with_factorial=False)
    if len(functions) != 2 * k - 1:
        raise ArityMismatch(f"derived field of index {k} takes {2 * k - 1} arguments")
    components = {}
    for i, w in enumerate(coordinates(sym.chart)):
        value = bracket(bdef, *functions, w)
        if not value.is_zero():
            components[(i,)] = value
    return Multivector(sym.chart, 1, components)


class JacobiDef:
    """A bivector paired with a vector field, with its compatibility flag.

    ``is_jacobi`` is recomputed at construction via
    :func:`~formcalc.schouten.jacobi_pair_check`; when it holds, the bracket
    below satisfies the ordinary Jacobi identity.
    """

    __slots__ = ("bivector", "field", "is_jacobi")

    def __init__(self, bivector: Multivector, field: Multivector):
        if bivector.chart != field.chart:
            raise ChartMismatch("bivector and field live on different charts")
        if bivector.grade != 2 or field.grade != 1:
            raise GradeMismatch("JacobiDef takes a grade-2 and a grade-1 multivector")
        self.bivector = bivector
        self.field = field
        self.is_jacobi = jacobi_pair_check(bivector, field)

    @property
    def chart(self) -> Chart:
        return self.bivector.chart


def jacobi_bracket(jdef: JacobiDef, f: Polynomial, g: Polynomial) -> Polynomial:
    """``L(f,g) + f*X(g) - g*X(f)`` for the pair ``(L, X)``."""
    if f.chart != jdef.chart or g.chart != jdef.chart:
        raise ChartMismatch("arguments live on a different chart")
    lam_part = pair(wedge(differential(f), differential(g)), jdef.bivector)
    xf = pair(differential(f), jdef.field)
    xg = pair(differential(g), jdef.field)
    return lam_part + f * xg - g * xf


def _extend_polynomial(p: Polynomial, extended: Chart) -> Polynomial:
    return Polynomial(extended, {e + (0,): c for e, c in p.terms.items()})


def homogenization_check(
    jdef: JacobiDef, f: Polynomial, g: Polynomial, s_name: str = "s"
) -> bool:
    """Exponential-weight reformulation of the Jacobi bracket.

    On the chart extended by a fresh coordinate ``s``, evaluating the
    bivector ``L + e(s)^X`` on ``exp(s)*f`` and ``exp(s)*g`` and rescaling by
    ``exp(-2s)`` must reproduce ``jacobi_bracket(jdef, f, g)``.  Returns the
    exact equality of the two sides.
    """
    if f.chart != jdef.chart or g.chart != jdef.chart:
        raise ChartMismatch("arguments live on a different chart")
    try:
        extended = jdef.chart.extended(s_name)
    except ValueError:
        raise ChartMismatch(f"coordinate {s_name!r} is already in use") from None
    s_index = extended.dim - 1

    # entries of the extended bivector, as (i, j, coefficient) with i < j
    entries = [
        (i, j, _extend_polynomial(c, extended))
        for (i, j), c in jdef.bivector.terms.items()
    ]
    for (i,), c in jdef.field.terms.items():
        # e(s)^e(x_i) = -e(x_i)^e(s)
        entries.append((i, s_index, -_extend_polynomial(c, extended)))

    def lift(p: Polynomial, weight: int = 0) -> ExpPoly:
        return ExpPoly.from_polynomial(_extend_polynomial(p, extended), s_index, weight)

    u = lift(f, weight=1)
    v = lift(g, weight=1)
    total = ExpPoly(extended, s_index)
    for i, j, c in entries:
        value = u.diff(i) * v.diff(j) - u.diff(j) * v.diff(i)
        total = total + ExpPoly.from_polynomial(c, s_index) * value
    left = ExpPoly.exponential(extended, s_index, -2) * total
    right = lift(jacobi_bracket(jdef, f, g))
    return left == right


def _binary_bracket(source):
    if isinstance(source, SymplecticData):
        return lambda f, g: omega_power_bracket(source, 1, f, g)
    if isinstance(source, BracketDef):
        if source.arity != 2:
            raise ArityMismatch("jacobiator needs a binary bracket definition")
        return lambda f, g: bracket(source, f, g)
    if isinstance(source, JacobiDef):
        return lambda f, g: jacobi_bracket(source, f, g)
    if callable(source):
        return source
    raise AlgebraError("unsupported bracket source for the jacobiator")


def jacobiator(source, f: Polynomial, g: Polynomial, h: Polynomial) -> Polynomial:
    """``{f,{g,h}} + {g,{h,f}} + {h,{f,g}}`` for any binary bracket source."""
    b = _binary_bracket(source)
    return b(f, b(g, h)) + b(g, b(h, f)) + b(h, b(f, g))
