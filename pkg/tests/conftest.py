import numpy as np
import pytest

from bladeangle.ga_core import Multivector

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    num, title = marker.args
    prev = _CRITERIA.get(num, (title, True))
    _CRITERIA[num] = (title, prev[1] and report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        title, ok = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {title}")


# Brute-force basis products on explicit index lists, independent of the
# bitmask/popcount sign rule used by the library.


def brute_basis_product(a, b):
    """Product of basis blades given as index lists -> (sign, sorted indices)."""
    seq = list(a) + list(b)
    sign = 1
    # bubble sort, counting swaps of distinct neighbours
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    out = []
    for x in seq:
        if out and out[-1] == x:
            out.pop()  # e_i e_i = +1
        else:
            out.append(x)
    return sign, out


def _indices(bits):
    return [i + 1 for i in range(bits.bit_length()) if bits >> i & 1]


def brute_gp(M: Multivector, N: Multivector) -> Multivector:
    n = M.n
    out = np.zeros(1 << n)
    for a in range(1 << n):
        if M.coeffs[a] == 0:
            continue
        for b in range(1 << n):
            if N.coeffs[b] == 0:
                continue
            sign, idx = brute_basis_product(_indices(a), _indices(b))
            bits = sum(1 << (i - 1) for i in idx)
            out[bits] += sign * M.coeffs[a] * N.coeffs[b]
    return Multivector(n, out)


def random_mv(rng, n):
    return Multivector(n, rng.standard_normal(1 << n))


def random_blade_vectors(rng, n, r):
    return rng.standard_normal((r, n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)
