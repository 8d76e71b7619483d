import json
import pathlib

import mpmath
import pytest

DATA = pathlib.Path(__file__).parent / "data" / "corpus.json"

_CRITERIA = {}


@pytest.fixture(scope="session")
def corpus():
    return json.loads(DATA.read_text())


def pari_real(s: str):
    with mpmath.workprec(220):
        return mpmath.mpf(s)


def pari_complex(s: str):
    with mpmath.workprec(220):
        return _complex(s)


def _complex(s: str):
    s = s.replace(" ", "")
    if "*I" not in s:
        return mpmath.mpc(mpmath.mpf(s), 0)
    body = s.replace("*I", "")
    # split at the sign that separates real and imaginary parts
    for i in range(len(body) - 1, 0, -1):
        if body[i] in "+-" and body[i - 1] not in "e":
            return mpmath.mpc(mpmath.mpf(body[:i]), mpmath.mpf(body[i:]))
    return mpmath.mpc(0, mpmath.mpf(body))


@pytest.fixture
def criterion(request):
    """Record a pass/fail line for an acceptance criterion."""

    def record(number: int, passed: bool, detail: str = ""):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}" + (f"  ({detail})" if detail else "")
        _CRITERIA[number] = line
        print(line, flush=True)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[n])
