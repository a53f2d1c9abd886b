"""Shared generators and oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest
import sympy
from hypothesis import settings
from hypothesis import strategies as st

from diffhopf.scalar import RatFunc

settings.register_profile("repo", max_examples=100, deadline=None, derandomize=True)
settings.load_profile("repo")

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "diffhopf" / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


# ---------------------------------------------------------------------------
# random elements

def random_scalar(rng: random.Random, field, allow_t: bool = True):
    c = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    if field.has_t and allow_t and rng.random() < 0.3:
        num = [rng.randint(-3, 3) for _ in range(rng.randint(1, 3))]
        den = [rng.randint(1, 3)] + ([rng.randint(-2, 2), 1] if rng.random() < 0.5 else [])
        return RatFunc.make(num, den)
    return c


def random_element(A, rng: random.Random, legs: int = 1, max_order: int = 2,
                   terms: int = 4, max_den: int = 2):
    """A random fraction over the designated denominators of ``A``."""
    ring = A.ring(legs)
    ngen = len(A.generators)
    acc = ring.zero()
    for _ in range(rng.randint(1, terms)):
        x = ring.const(random_scalar(rng, A.field))
        if ngen:
            for _ in range(rng.randint(0, 3)):
                x = x * ring.var(rng.randrange(legs), rng.randrange(ngen), rng.randint(0, max_order))
        for k in range(ring.nden):
            for _ in range(rng.randint(0, max_den) if rng.random() < 0.5 else 0):
                x = x * ring.den_inverse(k)
        acc = acc + x
    return acc


def elements(A, legs: int = 1, **kw):
    """Hypothesis strategy over :func:`random_element`."""
    return st.randoms(use_true_random=False).map(lambda r: random_element(A, r, legs, **kw))


# ---------------------------------------------------------------------------
# sympy oracle

def sym_var(v):
    leg, order, gen = v
    return sympy.Symbol(f"x_{leg}_{gen}_{order}")


def sym_scalar(c):
    if isinstance(c, RatFunc):
        t = sympy.Symbol("t")
        num = sum(sympy.Integer(a) * t ** k for k, a in enumerate(c.num))
        den = sum(sympy.Integer(a) * t ** k for k, a in enumerate(c.den))
        return num / den
    return sympy.Rational(c.numerator, c.denominator)


def sym_poly(poly):
    out = sympy.Integer(0)
    for mono, c in poly.items():
        term = sym_scalar(c)
        for v, e in mono:
            term *= sym_var(v) ** e
        out += term
    return out


def to_sympy(x):
    """An element as a sympy rational expression in symbols ``x_leg_gen_order``."""
    expr = sym_poly(x.num)
    for k, e in enumerate(x.den):
        if e:
            expr /= sym_poly(x.ring.den_poly(k)) ** e
    return expr


def sym_equal(a, b) -> bool:
    return sympy.simplify(a - b) == 0


# ---------------------------------------------------------------------------
# acceptance summary: one line per criterion

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    if report.when == "call" or report.failed:
        number, title = marker
        prev = _CRITERIA.get(number, (title, True))
        _CRITERIA[number] = (title, prev[1] and report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
