from __future__ import annotations

import random

import pytest
from hypothesis import HealthCheck, settings

from dekomp.decompose import is_isomorphic
from dekomp.matrix import random_matrix
from dekomp.rings import parse_ring

settings.register_profile(
    "dekomp", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("dekomp")

# finite local rings of size <= 16 with a certifying engine
LOCAL_RINGS = [
    "GF(2)", "GF(3)", "GF(5)", "GF(7)", "GF(11)", "GF(13)",
    "GF(2)[x]/m^2", "GF(2)[x]/m^3", "GF(2)[x]/m^4", "GF(3)[x]/m^2",
    "GF(2)[x,y]/m^2", "GF(2)[x,y,z]/m^2",
    "Z/4", "Z/8", "Z/9", "Z/16",
]
ALGEBRA_RINGS = [r for r in LOCAL_RINGS if not r.startswith("Z/")]


def population(count: int, seed: int = 0, rings=LOCAL_RINGS):
    """Deterministic list of ``count`` random matrices with u, v <= 3, cycling through ``rings``."""
    rng = random.Random(seed)
    out = []
    for k in range(count):
        ring = parse_ring(rings[k % len(rings)])
        u, v = rng.randint(1, 3), rng.randint(1, 3)
        out.append(random_matrix(ring, u, v, rng, zero_prob=rng.choice([0.2, 0.4, 0.6])))
    return out


def iso_classes(report):
    return [(s.presentation, s.multiplicity) for s in report.summands]


def same_multiset(r1, r2):
    """Summand iso-class multisets agree (matched by isomorphism, not by text)."""
    left = iso_classes(r1)
    right = iso_classes(r2)
    if sorted(m for _, m in left) != sorted(m for _, m in right):
        return False
    unused = list(right)
    for p, m in left:
        hit = next((k for k, (q, n) in enumerate(unused) if n == m and is_isomorphic(p, q)), None)
        if hit is None:
            return False
        unused.pop(hit)
    return True


ACCEPTANCE: dict[int, tuple[str, str]] = {}


@pytest.fixture
def record():
    """Store a one-line acceptance verdict, printed in the terminal summary."""
    def _record(criterion: int, ok: bool, detail: str):
        ACCEPTANCE[criterion] = ("PASS" if ok else "FAIL", detail)
        return ok
    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {status}  {detail}")
