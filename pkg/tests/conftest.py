from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from setvi import conlinear as cl
from setvi.conlinear import ConeSpec, GSet
from setvi.instance import load_instance
from setvi.polyhedral import HRep, VRep
from setvi.setfun import MaxAffineMap, Tracks, extend

settings.register_profile(
    "setvi",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("setvi")

INSTANCES = Path(__file__).resolve().parent.parent / "instances"


def pareto(dim: int = 2) -> ConeSpec:
    return ConeSpec.create([tuple(-1 if i == j else 0 for i in range(dim)) for j in range(dim)])


def pt(*xs) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


def point_set(cone: ConeSpec, *z) -> GSet:
    return GSet.point(cone, z)


def vset(cone: ConeSpec, verts, rays=()) -> GSet:
    return cl.normalize(VRep.of(cone.dim, verts, rays), cone)


def identity_map(lo: int = -2, hi: int = 2, cone: ConeSpec | None = None):
    cone = cone or pareto()
    dom = HRep.of(2, [((1, 0), hi), ((-1, 0), -lo), ((0, 1), hi), ((0, -1), -lo)])
    psi = MaxAffineMap.of(dom, [[((1, 0), 0)], [((0, 1), 0)]])
    grid = [pt(i, j) for i in range(lo, hi + 1) for j in range(lo, hi + 1)]
    return extend(psi, cone, declared_convex=True), grid


def triangle():
    """f(t) = co{(-t, 2t), (2t, -t)} + R^2_+ on [0, 1]."""
    return Tracks.of(pareto(), 0, 1, [((0, 0), (-1, 2)), ((0, 0), (2, -1))], declared_convex=True)


@pytest.fixture
def C2() -> ConeSpec:
    return pareto()


@pytest.fixture
def instance():
    return lambda name: load_instance(INSTANCES / f"{name}.json")


# -- acceptance reporting ----------------------------------------------------

ACCEPTANCE: dict[str, tuple[bool, str]] = {}


class _Criterion:
    def __init__(self, key: str, title: str):
        self.key, self.title, self.detail = key, title, ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        ok = exc_type is None
        detail = self.detail if ok or self.detail else f"{exc_type.__name__}: {exc}"
        ACCEPTANCE[self.key] = (ok, f"{self.title}: {detail}")
        return False


@pytest.fixture
def criterion():
    return _Criterion


def _sort_key(key: str):
    head, _, tail = key.partition(" ")
    return (int(head), tail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=_sort_key):
        ok, text = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'} - {text}")
