"""Built-in identity suites runnable from the CLI.

Each suite re-derives a family of exact identities from scratch and returns
``(ok, detail)``.  Random instances use fixed seeds so reports stay
byte-identical run to run.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import Callable

from .brackets import (
    BracketDef,
    bracket,
    derived_vf,
    hamiltonian_vf,
    jacobiator,
    omega_power_bracket,
)
from .chart import Chart
from .errors import AlgebraError
from .exterior import (
    Form,
    Multivector,
    SymplecticData,
    contract,
    differential,
    form_power,
    pair,
    poisson_bivector,
    standard_form,
    wedge,
)
from .poly import Polynomial, coordinates
from .schouten import (
    is_poisson,
    schouten,
    schouten_volume_identity_check,
    volume_poisson_criterion,
)


def darboux_chart(n: int) -> Chart:
    """Chart ``(q1..qn, p1..pn)``."""
    return Chart([f"q{i}" for i in range(1, n + 1)] + [f"p{i}" for i in range(1, n + 1)])


def magnetic_form(chart: Chart, b1: Polynomial, b2: Polynomial, b3: Polynomial) -> Form:
    """The standard form plus a field-strength term on the first three coordinates.

    Oriented so that the induced binary bracket gives ``{p1,p2} = b3``,
    ``{p2,p3} = b1`` and ``{p3,p1} = b2`` with ``{p_i, q_j}`` unchanged.
    """
    if chart.dim != 6:
        raise AlgebraError("the magnetic example lives on a 6-dimensional chart")
    beta = Form(chart, 2, {(0, 1): -b3, (0, 2): b2, (1, 2): -b1})
    return standard_form(chart) + beta


def _random_poly(rng: random.Random, chart: Chart, degree: int = 2, nterms: int = 3) -> Polynomial:
    terms: dict = {}
    for _ in range(nterms):
        exponent = [0] * chart.dim
        for _ in range(rng.randint(0, degree)):
            exponent[rng.randrange(chart.dim)] += 1
        c = rng.randint(-2, 2)
        if c:
            key = tuple(exponent)
            terms[key] = terms.get(key, 0) + c
    return Polynomial(chart, {k: Fraction(v) for k, v in terms.items() if v})


def _random_multivector(rng: random.Random, chart: Chart, grade: int) -> Multivector:
    table = {}
    for key in combinations(range(chart.dim), grade):
        if rng.random() < 0.6:
            p = _random_poly(rng, chart)
            if not p.is_zero():
                table[key] = p
    return Multivector(chart, grade, table)


def suite_power_contraction(n: int | None) -> tuple[bool, str]:
    """``i_L omega^k == k(n-k+1) omega^{k-1}`` for the standard pair, k = 1..n."""
    top = n or 3
    for nn in range(1, top + 1):
        chart = darboux_chart(nn)
        omega = standard_form(chart)
        lam = poisson_bivector(omega)
        for k in range(1, nn + 1):
            left = contract(lam, form_power(omega, k))
            right = form_power(omega, k - 1) * Fraction(k * (nn - k + 1))
            if left != right:
                return False, f"failed at n={nn}, k={k}"
    return True, f"checked n=1..{top}, all k"


def suite_pairing_consistency(n: int | None) -> tuple[bool, str]:
    """``<df1^...^dfk, L> * V == df1^...^dfk ^ i_L V`` on random instances."""
    count = n or 52
    rng = random.Random(90125)
    chart = Chart(("x1", "x2", "x3", "x4"))
    checked = 0
    while checked < count:
        for k in range(1, 5):
            lam = _random_multivector(rng, chart, k)
            volume = Form(chart, 4, {(0, 1, 2, 3): _random_poly(rng, chart)})
            if volume.is_zero():
                continue
            dfw = None
            for _ in range(k):
                df = differential(_random_poly(rng, chart))
                dfw = df if dfw is None else wedge(dfw, df)
            if pair(dfw, lam) * volume != wedge(dfw, contract(lam, volume)):
                return False, f"failed at instance {checked}, k={k}"
            checked += 1
    return True, f"checked {checked} random instances, k=1..4"


def suite_power_bracket(n: int | None) -> tuple[bool, str]:
    """Wedge-power generators and both evaluation routes for the 2k-brackets."""
    top = n or 3
    rng = random.Random(42424)
    for nn in range(1, top + 1):
        chart = darboux_chart(nn)
        sym = SymplecticData(standard_form(chart))
        for k in range(1, nn + 1):
            alpha = sym.power(nn - k) * Fraction(_factorial(k), _factorial(nn - k))
            bdef = BracketDef(sym.volume(), alpha)
            if bdef.generator != sym.bivector_power(k):
                return False, f"generator mismatch at n={nn}, k={k}"
            if not schouten(sym.bivector_power(k), sym.bivector_power(k)).is_zero():
                return False, f"wedge power does not self-commute at n={nn}, k={k}"
            for _ in range(3):
                fs = [_random_poly(rng, chart) for _ in range(2 * k)]
                via_def = bracket(bdef, *fs)
                via_power = omega_power_bracket(sym, k, *fs)
                via_pairing = pair(_wedge_differentials(fs), sym.bivector_power(k))
                if not (via_def == via_power == via_pairing):
                    return False, f"route mismatch at n={nn}, k={k}"
    return True, f"checked n=1..{top}, all k, generators and routes"


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _wedge_differentials(fs):
    result = None
    for f in fs:
        df = differential(f)
        result = df if result is None else wedge(result, df)
    return result


def suite_volume_poisson(n: int | None) -> tuple[bool, str]:
    """Volume criterion agrees with bracket self-commutation on random bivectors."""
    count = n or 30
    rng = random.Random(777)
    chart = Chart(("x1", "x2", "x3", "x4"))
    volume = Form(chart, 4, {(0, 1, 2, 3): Fraction(1)})
    agree = 0
    for _ in range(count):
        lam = _random_multivector(rng, chart, 2)
        if volume_poisson_criterion(lam, volume) != is_poisson(lam):
            return False, "criterion disagreed with self-commutation"
        agree += 1
    return True, f"agreed on {agree} random bivectors"


def suite_schouten_volume(n: int | None) -> tuple[bool, str]:
    """Bracket-contraction identity on random bivector pairs."""
    count = n or 30
    rng = random.Random(1618)
    chart = Chart(("x1", "x2", "x3", "x4"))
    volume = Form(chart, 4, {(0, 1, 2, 3): Fraction(1)})
    for i in range(count):
        l1 = _random_multivector(rng, chart, 2)
        l2 = _random_multivector(rng, chart, 2)
        if not schouten_volume_identity_check(l1, l2, volume):
            return False, f"identity failed at instance {i}"
    return True, f"checked {count} random bivector pairs"


def suite_magnetic(n: int | None) -> tuple[bool, str]:
    """The charged-particle chart: brackets, derived field, volume collapse."""
    chart = darboux_chart(3)
    q1, q2, q3, p1, p2, p3 = coordinates(chart)
    omega0 = standard_form(chart)
    cases = {
        "linear": (q2, q3, q1),
        "constant": tuple(Polynomial.constant(chart, c) for c in (1, 2, 3)),
    }
    eps = {(0, 1): 2, (1, 2): 0, (2, 0): 1}  # {p_i, p_j} -> index of B component
    for label, b in cases.items():
        omega_b = magnetic_form(chart, *b)
        if form_power(omega_b, 3) != form_power(omega0, 3):
            return False, f"[{label}] cubes differ"
        sym = SymplecticData(omega_b)
        ps = [p1, p2, p3]
        qs = [q1, q2, q3]
        for (i, j), bidx in eps.items():
            if omega_power_bracket(sym, 1, ps[i], ps[j]) != b[bidx]:
                return False, f"[{label}] momentum bracket mismatch at {(i, j)}"
        for i in range(3):
            for j in range(3):
                expected = Fraction(1 if i == j else 0)
                if omega_power_bracket(sym, 1, ps[i], qs[j]) != Polynomial.constant(chart, expected):
                    return False, f"[{label}] {{p,q}} mismatch at {(i, j)}"
                if not omega_power_bracket(sym, 1, qs[i], qs[j]).is_zero():
                    return False, f"[{label}] {{q,q}} nonzero at {(i, j)}"
        x = derived_vf(sym, 2, p1, p2, p3)
        expected_field = Multivector(chart, 1, {(0,): b[0], (1,): b[1], (2,): b[2]})
        if x != expected_field:
            return False, f"[{label}] derived field mismatch"
        if not jacobiator(sym, p1, p2, p3).is_zero():
            return False, f"[{label}] jacobiator nonzero"
    sym0 = SymplecticData(omega0)
    if not derived_vf(sym0, 2, p1, p2, p3).is_zero():
        return False, "derived field does not vanish for the standard form"
    return True, "linear and constant field cases all reproduced"


def suite_angular_momentum(n: int | None) -> tuple[bool, str]:
    """Derived field of the angular-momentum triple is proportional to the
    Hamiltonian field of the squared-norm invariant."""
    chart = darboux_chart(3)
    q1, q2, q3, p1, p2, p3 = coordinates(chart)
    sym = SymplecticData(standard_form(chart))
    j1 = q2 * p3 - q3 * p2
    j2 = q3 * p1 - q1 * p3
    j3 = q1 * p2 - q2 * p1
    invariant = j1 * j1 + j2 * j2 + j3 * j3
    derived = derived_vf(sym, 2, j1, j2, j3)
    casimir_field = hamiltonian_vf(sym, invariant)
    constant = None
    for key, value in derived.terms.items():
        other = casimir_field.terms.get(key)
        if other is None:
            continue
        for exponent, c in value.terms.items():
            oc = other.terms.get(exponent)
            if oc:
                constant = c / oc
                break
        if constant is not None:
            break
    if constant is None:
        return False, "no matching component found"
    if derived != casimir_field * constant:
        return False, "fields are not exactly proportional"
    return True, f"proportional with constant {constant}"


SUITES: dict[str, Callable[[int | None], tuple[bool, str]]] = {
    "power-contraction": suite_power_contraction,
    "pairing-consistency": suite_pairing_consistency,
    "power-bracket": suite_power_bracket,
    "volume-poisson": suite_volume_poisson,
    "schouten-volume": suite_schouten_volume,
    "magnetic": suite_magnetic,
    "angular-momentum": suite_angular_momentum,
}


def suite_names() -> list[str]:
    return sorted(SUITES)


def run_suite(name: str, n: int | None = None) -> tuple[bool, str]:
    try:
        suite = SUITES[name]
    except KeyError:
        raise AlgebraError(
            f"unknown suite {name!r}; available: {', '.join(suite_names())}"
        ) from None
    return suite(n)
