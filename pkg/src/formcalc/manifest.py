"""Line-oriented scenario manifests for the CLI.

A scenario file has three sections::

    # comments run to end of line, blank lines are ignored
    [chart]
    q1 q2 p1 p2

    [define]
    f = q1^2 - 3/2*p1
    omega = d(p1)^d(q1) + d(p2)^d(q2)
    th = constraints(q2, p2)

    [tasks]
    t1 = power-bracket omega k=1 p1 q1 expect 1
    t2 = dirac-matrix omega th p1 q1 expect 1

The chart is declared exactly once, before any definition.  Definitions bind
names to polynomials, forms, multivectors or constraint lists; polynomial
names may be reused inside later expressions.  Task arguments are whitespace
tokens: a defined name, an inline space-free expression, or ``k=<int>`` /
``n=<int>`` where a command takes one.  An optional trailing ``expect
<value>`` records the expected result.  All names, arities and expected
values are validated while parsing, before anything is computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .chart import Chart
from .errors import ParseError
from .exterior import Form, Multivector
from .parsing import parse_expr, parse_tensor, parse_value
from .poly import Polynomial
from .suites import SUITES

COMMANDS = (
    "bracket",
    "power-bracket",
    "nambu",
    "dirac-matrix",
    "dirac-form",
    "derived-vf",
    "schouten",
    "check-jacobi",
    "check-poisson",
    "check-jacobi-pair",
    "calibrate-dirac",
    "verify-suite",
)


@dataclass
class Task:
    name: str
    command: str
    arg_tokens: list[str]
    resolved: list
    expect_text: str | None
    expected: object | None
    line: int


@dataclass
class Scenario:
    chart: Chart
    definitions: dict[str, object]
    poly_env: dict[str, Polynomial]
    tasks: list[Task] = field(default_factory=list)


def _fail(message: str, line: int, column: int | None = None):
    raise ParseError(message, line, column)


class _Builder:
    def __init__(self):
        self.chart: Chart | None = None
        self.definitions: dict[str, object] = {}
        self.poly_env: dict[str, Polynomial] = {}
        self.tasks: list[Task] = []
        self.task_names: set[str] = set()

    # -- definitions -------------------------------------------------------

    def add_chart(self, body: str, line: int):
        if self.chart is not None:
            _fail("chart declared more than once", line)
        names = body.split()
        try:
            self.chart = Chart(names)
        except ValueError as exc:
            _fail(str(exc), line)

    def _need_chart(self, line: int) -> Chart:
        if self.chart is None:
            _fail("the [chart] section must come first", line)
        return self.chart

    def add_definition(self, body: str, line: int):
        chart = self._need_chart(line)
        name, eq, rest = body.partition("=")
        name = name.strip()
        rest = rest.strip()
        if not eq or not name or not rest:
            _fail("expected 'name = expression'", line)
        if name in self.definitions or name in chart:
            _fail(f"name {name!r} is already declared", line)
        rest_raw = body.partition("=")[2]
        rest_offset = body.index("=") + 1 + (len(rest_raw) - len(rest_raw.lstrip()))
        try:
            if rest.startswith("constraints(") and rest.endswith(")"):
                inner = rest[len("constraints("):-1]
                parts = [p for p in inner.split(",")]
                if not any(p.strip() for p in parts):
                    _fail("empty constraint list", line)
                value = [parse_expr(p, chart, self.poly_env) for p in parts]
            else:
                value = parse_tensor(rest, chart, self.poly_env)
        except ParseError as exc:
            _fail(exc.message, line, (exc.column or 0) + rest_offset)
        self.definitions[name] = value
        if isinstance(value, Polynomial):
            self.poly_env[name] = value

    # -- task argument resolution -------------------------------------------

    def _entity(self, token: str, wanted, label: str, line: int):
        value = self.definitions.get(token)
        if value is None:
            _fail(f"undeclared name {token!r}", line)
        if wanted in (Form, Multivector) and isinstance(value, Polynomial):
            return wanted.from_polynomial(value)  # grade-0 embeds a function
        if not isinstance(value, wanted):
            _fail(f"{token!r} is not {label}", line)
        return value

    def _polynomial(self, token: str, line: int) -> Polynomial:
        value = self.definitions.get(token)
        if value is not None:
            if not isinstance(value, Polynomial):
                _fail(f"{token!r} is not a function", line)
            return value
        try:
            return parse_expr(token, self._need_chart(line), self.poly_env)
        except ParseError as exc:
            _fail(exc.message, line)

    def _integer_option(self, token: str, key: str, line: int) -> int:
        prefix = key + "="
        if not token.startswith(prefix) or not token[len(prefix):].isdigit():
            _fail(f"expected '{key}=<integer>', got {token!r}", line)
        return int(token[len(prefix):])

    def add_task(self, body: str, line: int):
        chart = self._need_chart(line)
        name, eq, rest = body.partition("=")
        name = name.strip()
        if not eq or not name:
            _fail("expected 'name = command arguments...'", line)
        if name in self.task_names:
            _fail(f"task name {name!r} is already used", line)
        tokens = rest.split()
        if not tokens:
            _fail("missing command", line)
        command, *args = tokens
        if command not in COMMANDS:
            _fail(f"unknown command {command!r}", line)
        expect_text = None
        if "expect" in args:
            where = args.index("expect")
            expect_tokens = args[where + 1:]
            if not expect_tokens:
                _fail("'expect' needs a value", line)
            expect_text = " ".join(expect_tokens)
            args = args[:where]
        resolved = self._resolve(command, args, line)
        expected = None
        if expect_text is not None:
            try:
                expected = parse_value(expect_text, chart, self.poly_env)
            except ParseError as exc:
                _fail(f"bad expected value: {exc.message}", line)
        task = Task(name, command, args, resolved, expect_text, expected, line)
        self.tasks.append(task)
        self.task_names.add(name)

    def _resolve(self, command: str, args: list[str], line: int) -> list:
        chart = self.chart
        need = lambda count: len(args) >= count or _fail(
            f"{command} needs at least {count} arguments", line
        )
        if command == "bracket":
            need(3)
            volume = self._entity(args[0], Form, "a form", line)
            alpha = self._entity(args[1], Form, "a form", line)
            functions = [self._polynomial(t, line) for t in args[2:]]
            expected_arity = chart.dim - alpha.grade
            if len(functions) != expected_arity:
                _fail(f"bracket takes {expected_arity} functions here, got {len(functions)}", line)
            return [volume, alpha, functions]
        if command in ("power-bracket", "derived-vf"):
            need(2)
            omega = self._entity(args[0], Form, "a form", line)
            k = self._integer_option(args[1], "k", line)
            functions = [self._polynomial(t, line) for t in args[2:]]
            wanted = 2 * k if command == "power-bracket" else 2 * k - 1
            if chart.dim % 2:
                _fail("this command needs an even-dimensional chart", line)
            if not 1 <= k <= chart.dim // 2:
                _fail(f"k must lie in 1..{chart.dim // 2}", line)
            if len(functions) != wanted:
                _fail(f"{command} with k={k} takes {wanted} functions, got {len(functions)}", line)
            return [omega, k, functions]
        if command == "nambu":
            need(2)
            volume = self._entity(args[0], Form, "a form", line)
            gamma = self._polynomial(args[1], line)
            functions = [self._polynomial(t, line) for t in args[2:]]
            if len(functions) != chart.dim:
                _fail(f"nambu takes {chart.dim} functions, got {len(functions)}", line)
            return [volume, gamma, functions]
        if command in ("dirac-matrix", "dirac-form"):
            if len(args) != 4:
                _fail(f"{command} takes: omega constraints f g", line)
            omega = self._entity(args[0], Form, "a form", line)
            thetas = self._entity(args[1], list, "a constraint list", line)
            f = self._polynomial(args[2], line)
            g = self._polynomial(args[3], line)
            return [omega, thetas, f, g]
        if command == "calibrate-dirac":
            if len(args) != 2:
                _fail("calibrate-dirac takes: omega constraints", line)
            omega = self._entity(args[0], Form, "a form", line)
            thetas = self._entity(args[1], list, "a constraint list", line)
            return [omega, thetas]
        if command == "schouten":
            if len(args) != 2:
                _fail("schouten takes two multivectors", line)
            return [
                self._entity(args[0], Multivector, "a multivector", line),
                self._entity(args[1], Multivector, "a multivector", line),
            ]
        if command == "check-poisson":
            if len(args) != 1:
                _fail("check-poisson takes one form or multivector", line)
            value = self.definitions.get(args[0])
            if value is None:
                _fail(f"undeclared name {args[0]!r}", line)
            if not isinstance(value, (Form, Multivector)):
                _fail(f"{args[0]!r} is not a form or multivector", line)
            return [value]
        if command == "check-jacobi":
            if len(args) != 4:
                _fail("check-jacobi takes: omega f g h", line)
            omega = self._entity(args[0], Form, "a form", line)
            return [omega] + [self._polynomial(t, line) for t in args[1:]]
        if command == "check-jacobi-pair":
            if len(args) != 2:
                _fail("check-jacobi-pair takes: bivector field", line)
            return [
                self._entity(args[0], Multivector, "a multivector", line),
                self._entity(args[1], Multivector, "a multivector", line),
            ]
        if command == "verify-suite":
            need(1)
            suite = args[0]
            if suite not in SUITES:
                _fail(f"unknown suite {suite!r}", line)
            n = None
            if len(args) == 2:
                n = self._integer_option(args[1], "n", line)
            elif len(args) > 2:
                _fail("verify-suite takes: suite-name [n=<int>]", line)
            return [suite, n]
        _fail(f"unknown command {command!r}", line)


def parse_scenario_text(text: str) -> Scenario:
    builder = _Builder()
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in ("chart", "define", "tasks"):
                _fail(f"unknown section {section!r}", lineno)
            continue
        if section is None:
            _fail("content before the first section header", lineno)
        if section == "chart":
            builder.add_chart(line, lineno)
        elif section == "define":
            builder.add_definition(line, lineno)
        else:
            builder.add_task(line, lineno)
    if builder.chart is None:
        _fail("no [chart] section", 1)
    return Scenario(builder.chart, builder.definitions, builder.poly_env, builder.tasks)


def parse_scenario(path) -> Scenario:
    """Parse and fully validate a scenario file."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_scenario_text(text)
