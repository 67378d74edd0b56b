from fractions import Fraction

from hypothesis import strategies as st

from yangbethe.scalars import mpq

ACCEPTANCE_LINES = []


def rationals(bound=20, max_den=12):
    return st.fractions(min_value=-bound, max_value=bound, max_denominator=max_den).map(
        lambda f: mpq(f.numerator, f.denominator))


def q(s):
    f = Fraction(s)
    return mpq(f.numerator, f.denominator)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
