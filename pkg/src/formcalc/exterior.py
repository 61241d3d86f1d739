"""Differential forms and multivector fields on a coordinate chart.

Both kinds of tensors are grade-homogeneous and stored sparsely as maps from
strictly increasing coordinate-index tuples to nonzero polynomial
coefficients; inserting a term with an unordered tuple normalizes it with the
permutation parity sign.

Sign conventions.  Every sign in the package follows from two choices made
here:

* Contraction of a decomposable multivector applies its first factor first
  (innermost): ``i_{X1^...^Xk} a = i_{Xk}(...(i_{X1} a))``.  With the
  standard pair ``omega0 = sum_j dp_j^dq_j`` and ``Lambda0 = sum_j
  dd p_j ^ dd q_j`` this makes ``i_{Lambda0} omega0 = n`` on a 2n-dimensional
  chart, and more generally ``i_{Lambda0} omega0^k = k(n-k+1) omega0^{k-1}``.
* The scalar pairing of a k-form with a k-multivector is the determinant
  pairing normalized to ``+1`` on matching increasing basis tuples.  Given
  the contraction convention this is exactly the normalization for which

      <df1^...^dfk, L> * V  ==  df1^...^dfk ^ (i_L V)

  holds for every top form ``V``; a self-test at import time re-derives this
  identity on a reference chart so the two conventions can never drift apart.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .chart import Chart
from .errors import ChartMismatch, DegenerateStructure, GradeMismatch, KindMismatch
from .poly import Polynomial, matrix_adjugate, matrix_determinant

IndexTuple = tuple[int, ...]


def _normalize_index_tuple(indices) -> tuple[IndexTuple | None, int]:
    """Sort into increasing order, tracking parity; ``(None, 0)`` on a repeat."""
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return None, 0
    return tuple(idx), sign


def _merge_sign(left: IndexTuple, right: IndexTuple) -> tuple[IndexTuple | None, int]:
    """Wedge-merge two increasing tuples; ``(None, 0)`` if they overlap."""
    inversions = 0
    for a in left:
        for b in right:
            if a == b:
                return None, 0
            if a > b:
                inversions += 1
    merged = tuple(sorted(left + right))
    return merged, (-1 if inversions % 2 else 1)


def _accumulate(table: dict, key, value: Polynomial):
    acc = table.get(key)
    total = value if acc is None else acc + value
    if total.is_zero():
        table.pop(key, None)
    else:
        table[key] = total


class _Graded:
    """Shared storage and linear structure of forms and multivectors."""

    __slots__ = ("chart", "grade", "terms")
    _atom = "?"

    def __init__(self, chart: Chart, grade: int, terms: Mapping | None = None):
        if not 0 <= grade <= chart.dim:
            raise GradeMismatch(f"grade must lie between 0 and {chart.dim}")
        table: dict[IndexTuple, Polynomial] = {}
        if terms:
            for indices, coefficient in terms.items():
                if isinstance(coefficient, (int, Fraction)):
                    coefficient = Polynomial.constant(chart, coefficient)
                if coefficient.chart != chart:
                    raise ChartMismatch("coefficient lives on a different chart")
                if len(tuple(indices)) != grade:
                    raise GradeMismatch("index tuple length must equal the grade")
                key, sign = _normalize_index_tuple(indices)
                if key is None or coefficient.is_zero():
                    continue
                if key and (key[0] < 0 or key[-1] >= chart.dim):
                    raise ValueError("coordinate index out of range")
                _accumulate(table, key, coefficient if sign == 1 else -coefficient)
        self.chart = chart
        self.grade = grade
        self.terms = table

    @classmethod
    def zero(cls, chart: Chart, grade: int):
        return cls(chart, grade)

    @classmethod
    def from_polynomial(cls, p: Polynomial):
        return cls(p.chart, 0, {(): p})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, indices) -> Polynomial:
        """The coefficient of the given index tuple, with parity sign applied."""
        key, sign = _normalize_index_tuple(indices)
        if key is None:
            return Polynomial.zero(self.chart)
        value = self.terms.get(key)
        if value is None:
            return Polynomial.zero(self.chart)
        return value if sign == 1 else -value

    def _check_peer(self, other):
        if type(other) is not type(self):
            raise KindMismatch("cannot combine a form with a multivector")
        if other.chart != self.chart:
            raise ChartMismatch("operands live on different charts")

    def __add__(self, other):
        self._check_peer(other)
        if self.terms and other.terms and self.grade != other.grade:
            raise GradeMismatch("cannot add tensors of different grades")
        grade = self.grade if self.terms or not other.terms else other.grade
        out = dict(self.terms)
        for key, value in other.terms.items():
            _accumulate(out, key, value)
        result = type(self)(self.chart, grade)
        result.terms = out
        return result

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        result = type(self)(self.chart, self.grade)
        result.terms = {k: -v for k, v in self.terms.items()}
        return result

    def __mul__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            scalar = Polynomial.constant(self.chart, scalar)
        if not isinstance(scalar, Polynomial):
            return NotImplemented
        if scalar.chart != self.chart:
            raise ChartMismatch("scalar lives on a different chart")
        out: dict[IndexTuple, Polynomial] = {}
        if not scalar.is_zero():
            for key, value in self.terms.items():
                product = value * scalar
                if not product.is_zero():
                    out[key] = product
        result = type(self)(self.chart, self.grade)
        result.terms = out
        return result

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, (int, Fraction)):
            return self * (Fraction(1) / Fraction(scalar))
        return NotImplemented

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if self.chart != other.chart or self.terms != other.terms:
            return False
        return self.grade == other.grade or (not self.terms and not other.terms)

    def _coefficient_text(self, p: Polynomial) -> tuple[str, str]:
        # returns (sign, body) with multi-term coefficients parenthesized
        if p.is_constant():
            c = p.constant_value()
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            return sign, ("" if magnitude == 1 else str(magnitude))
        if len(p.terms) == 1:
            exponent, c = next(iter(p.terms.items()))
            mono = Polynomial(self.chart, {exponent: abs(c)})
            return ("-" if c < 0 else "+"), str(mono)
        return "+", f"({p})"

    def __str__(self):
        if not self.terms:
            return "0"
        if self.grade == 0:
            return str(self.terms[()])
        names = self.chart.names
        parts = []
        for key in sorted(self.terms):
            sign, coeff = self._coefficient_text(self.terms[key])
            atoms = "^".join(f"{self._atom}({names[i]})" for i in key)
            body = f"{coeff} * {atoms}" if coeff else atoms
            parts.append((sign, body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"{type(self).__name__}({self})"


class Form(_Graded):
    """A grade-homogeneous differential form with polynomial coefficients."""

    _atom = "d"


class Multivector(_Graded):
    """A grade-homogeneous multivector field with polynomial coefficients."""

    _atom = "e"


def coordinate_form(chart: Chart, name: str) -> Form:
    """The coordinate differential ``d(name)``."""
    return Form(chart, 1, {(chart.index(name),): Fraction(1)})


def coordinate_field(chart: Chart, name: str) -> Multivector:
    """The coordinate vector field ``e(name)``."""
    return Multivector(chart, 1, {(chart.index(name),): Fraction(1)})


def _require_same_chart(a, b):
    if a.chart != b.chart:
        raise ChartMismatch("operands live on different charts")


def wedge(a, b):
    """Exterior product of two forms or two multivectors."""
    if not isinstance(a, _Graded) or type(a) is not type(b):
        raise KindMismatch("wedge needs two forms or two multivectors")
    _require_same_chart(a, b)
    chart = a.chart
    grade = a.grade + b.grade
    if grade > chart.dim:
        return type(a).zero(chart, chart.dim)
    out: dict[IndexTuple, Polynomial] = {}
    for ka, ca in a.terms.items():
        for kb, cb in b.terms.items():
            key, sign = _merge_sign(ka, kb)
            if key is None:
                continue
            product = ca * cb
            _accumulate(out, key, product if sign == 1 else -product)
    result = type(a)(chart, grade)
    result.terms = out
    return result


def wedge_all(factors: Sequence) -> "_Graded":
    """Left-to-right wedge of a nonempty sequence of tensors of one kind."""
    if not factors:
        raise ValueError("need at least one factor")
    result = factors[0]
    for factor in factors[1:]:
        result = wedge(result, factor)
    return result


def exterior_derivative(a: Form) -> Form:
    """The exterior derivative; on grade-0 forms this is the differential."""
    if not isinstance(a, Form):
        raise KindMismatch("exterior derivative applies to forms")
    chart = a.chart
    if a.grade >= chart.dim:
        return Form.zero(chart, chart.dim)
    out: dict[IndexTuple, Polynomial] = {}
    for key, coefficient in a.terms.items():
        for i in range(chart.dim):
            dc = coefficient.diff(i)
            if dc.is_zero():
                continue
            merged, sign = _merge_sign((i,), key)
            if merged is None:
                continue
            _accumulate(out, merged, dc if sign == 1 else -dc)
    result = Form(chart, a.grade + 1)
    result.terms = out
    return result


def differential(f: Polynomial) -> Form:
    """``df`` for a scalar function given as a polynomial."""
    return exterior_derivative(Form.from_polynomial(f))


def _contract_single(terms: dict[IndexTuple, Polynomial], index: int) -> dict:
    """Interior product against the coordinate direction ``index``."""
    out: dict[IndexTuple, Polynomial] = {}
    for key, coefficient in terms.items():
        if index not in key:
            continue
        position = key.index(index)
        rest = key[:position] + key[position + 1:]
        _accumulate(out, rest, coefficient if position % 2 == 0 else -coefficient)
    return out


def contract(field: Multivector, a: Form) -> Form:
    """Interior product ``i_field a``; first factors of wedges act first."""
    if not isinstance(field, Multivector) or not isinstance(a, Form):
        raise KindMismatch("contract takes a multivector and a form")
    _require_same_chart(field, a)
    if field.grade > a.grade:
        raise GradeMismatch("cannot contract into a form of lower grade")
    chart = a.chart
    out: dict[IndexTuple, Polynomial] = {}
    for key, coefficient in field.terms.items():
        current = a.terms
        for index in key:
            current = _contract_single(current, index)
            if not current:
                break
        for k, v in current.items():
            _accumulate(out, k, v * coefficient)
    result = Form(chart, a.grade - field.grade)
    result.terms = out
    return result


def pair(a: Form, field: Multivector) -> Polynomial:
    """Determinant pairing of a k-form with a k-multivector."""
    if not isinstance(field, Multivector) or not isinstance(a, Form):
        raise KindMismatch("pair takes a form and a multivector")
    _require_same_chart(field, a)
    if field.grade != a.grade:
        raise GradeMismatch("pairing needs equal grades")
    total = Polynomial.zero(a.chart)
    small, large = (a.terms, field.terms) if len(a.terms) <= len(field.terms) else (field.terms, a.terms)
    for key, value in small.items():
        other = large.get(key)
        if other is not None:
            total = total + value * other
    return total


def mv_from_form(volume: Form, a: Form) -> Multivector:
    """The unique multivector ``L`` with ``contract(L, volume) == a``.

    The volume must be a top form whose single coefficient is a nonzero
    rational constant.
    """
    if not isinstance(volume, Form) or not isinstance(a, Form):
        raise KindMismatch("mv_from_form takes two forms")
    _require_same_chart(volume, a)
    chart = volume.chart
    m = chart.dim
    if volume.grade != m or volume.is_zero():
        raise DegenerateStructure("volume must be a nonzero top form")
    top = tuple(range(m))
    try:
        c = volume.terms[top].constant_value()
    except ValueError:
        raise DegenerateStructure("volume coefficient must be a rational constant") from None
    k = m - a.grade
    out: dict[IndexTuple, Polynomial] = {}
    for key, coefficient in a.terms.items():
        complement = tuple(i for i in top if i not in key)
        # sign of contracting the complement out of the full top tuple
        epsilon = -1 if (sum(complement) - k * (k - 1) // 2) % 2 else 1
        out[complement] = coefficient * (Fraction(epsilon) / c)
    return Multivector(chart, k, out)


def form_power(a: Form, power: int) -> Form:
    """Repeated wedge ``a^power``; ``power == 0`` gives the constant-one 0-form."""
    if not isinstance(power, int) or power < 0:
        raise ValueError("form powers must be nonnegative integers")
    result = Form.from_polynomial(Polynomial.constant(a.chart, 1))
    for _ in range(power):
        result = wedge(result, a)
    return result


def poisson_bivector(omega: Form) -> Multivector:
    """The inverse bivector of a nondegenerate 2-form.

    Oriented so that the standard form ``sum_j dp_j^dq_j`` maps to
    ``sum_j e(p_j)^e(q_j)``; the induced binary bracket then satisfies
    ``{p_j, q_j} = 1``.  Requires an even-dimensional chart and a constant
    nonzero determinant of the coefficient matrix.
    """
    if not isinstance(omega, Form) or omega.grade != 2:
        raise GradeMismatch("expected a grade-2 form")
    chart = omega.chart
    m = chart.dim
    if m % 2:
        raise DegenerateStructure("chart dimension must be even")
    zero = Polynomial.zero(chart)
    matrix = [[zero for _ in range(m)] for _ in range(m)]
    for (i, j), coefficient in omega.terms.items():
        matrix[i][j] = coefficient
        matrix[j][i] = -coefficient
    det = matrix_determinant(matrix, chart)
    if det.is_zero() or not det.is_constant():
        raise DegenerateStructure("coefficient matrix needs a constant nonzero determinant")
    det_value = det.constant_value()
    adjugate = matrix_adjugate(matrix, chart)
    terms: dict[IndexTuple, Polynomial] = {}
    for i in range(m):
        for j in range(i + 1, m):
            entry = adjugate[i][j] * (Fraction(-1) / det_value)
            if not entry.is_zero():
                terms[(i, j)] = entry
    return Multivector(chart, 2, terms)


def lie_derivative(field: Multivector, a: Form) -> Form:
    """Lie derivative along a vector field, via ``i_X d + d i_X``."""
    if not isinstance(field, Multivector) or field.grade != 1:
        raise GradeMismatch("lie_derivative needs a grade-1 multivector")
    if not isinstance(a, Form):
        raise KindMismatch("lie_derivative acts on forms")
    _require_same_chart(field, a)
    result = contract(field, exterior_derivative(a))
    if a.grade >= 1:
        result = result + exterior_derivative(contract(field, a))
    return result


def standard_form(chart: Chart) -> Form:
    """``sum_j dp_j ^ dq_j`` where the first half of the chart is q, second half p."""
    m = chart.dim
    if m % 2:
        raise DegenerateStructure("chart dimension must be even")
    n = m // 2
    return Form(chart, 2, {(j, n + j): Fraction(-1) for j in range(n)})


class SymplecticData:
    """A closed nondegenerate 2-form together with its inverse bivector.

    Construction checks closedness, constant nonzero determinant, and that
    contracting the bivector into the form yields the half-dimension ``n``.
    Power forms and bivector powers are memoized; instances are otherwise
    immutable.
    """

    __slots__ = ("chart", "omega", "bivector", "n", "_cache")

    def __init__(self, omega: Form):
        if not isinstance(omega, Form) or omega.grade != 2:
            raise GradeMismatch("expected a grade-2 form")
        chart = omega.chart
        if chart.dim % 2:
            raise DegenerateStructure("chart dimension must be even")
        if not exterior_derivative(omega).is_zero():
            raise DegenerateStructure("symplectic form must be closed")
        bivector = poisson_bivector(omega)
        n = chart.dim // 2
        trace = contract(bivector, omega)
        if trace != Form.from_polynomial(Polynomial.constant(chart, n)):
            raise DegenerateStructure("bivector does not invert the form")
        self.chart = chart
        self.omega = omega
        self.bivector = bivector
        self.n = n
        self._cache = {}

    def cached(self, key, build):
        value = self._cache.get(key)
        if value is None:
            value = build()
            self._cache[key] = value
        return value

    def power(self, k: int) -> Form:
        """``omega^k``."""
        return self.cached(("power", k), lambda: form_power(self.omega, k))

    def volume(self) -> Form:
        """``omega^n / n!``, the canonical volume form."""
        return self.cached(
            "volume", lambda: self.power(self.n) * Fraction(1, factorial(self.n))
        )

    def bivector_power(self, k: int) -> Multivector:
        """The k-fold wedge of the inverse bivector."""
        def build():
            result = Multivector.from_polynomial(Polynomial.constant(self.chart, 1))
            for _ in range(k):
                result = wedge(result, self.bivector)
            return result

        return self.cached(("bivector_power", k), build)

    def __repr__(self):
        return f"SymplecticData(n={self.n}, chart={self.chart!r})"


def _convention_selftest():
    # Re-derive the pairing/contraction compatibility on a reference chart so
    # the two conventions cannot drift apart.
    chart = Chart(("u", "v"))
    u = Polynomial.variable(chart, "u")
    v = Polynomial.variable(chart, "v")
    field = Multivector(chart, 2, {(0, 1): u + 1})
    volume = Form(chart, 2, {(0, 1): Fraction(5)})
    f1 = u * u + 3 * v
    f2 = u * v - 2
    dd = wedge(differential(f1), differential(f2))
    left = pair(dd, field) * volume
    right = wedge(dd, contract(field, volume))
    if left != right:
        raise AssertionError("pairing/contraction conventions are inconsistent")
    qp = Chart(("q", "p"))
    omega0 = standard_form(qp)
    lam0 = poisson_bivector(omega0)
    if contract(lam0, omega0) != Form.from_polynomial(Polynomial.constant(qp, 1)):
        raise AssertionError("bivector orientation convention is inconsistent")


_convention_selftest()
