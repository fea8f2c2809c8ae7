"""End-to-end acceptance checks, one per criterion.

Each test prints a single PASS/FAIL line, visible even without ``-s``.
The whole module takes several minutes; deselect it with ``-m "not slow"``.
"""

import pytest

from oasp.acceptance import CHECKS


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number, capsys):
    result = CHECKS[number]()
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.failures[:5]
