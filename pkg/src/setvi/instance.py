"""Instance files: JSON documents with exact ``"p/q"`` rationals.

Layout::

    {
      "name": "...", "description": "...",
      "space_dim": n,
      "cone": {"dual_base": [[...], ...], "interior_point": [...], "unit_ball": [[...], ...]},
      "function": {"kind": ..., ...},
      "candidates": [[...], ...],
      "directions": [[...], ...],
      "options": {"steps": {"kind": "harmonic" | "dyadic", "n": k},
                  "extra_duals": [[...], ...], "convex": bool}
    }

Function kinds:

* ``max_affine``: ``domain`` rows ``{"normal": a, "offset": c}`` meaning
  ``a.x <= c``; ``components`` lists of ``{"slope": a, "offset": b}``.
* ``piecewise_1d``: ``pieces`` with ``lo, hi, lo_closed, hi_closed, slope, offset``.
* ``tracks``: ``lo, hi, lo_closed, hi_closed``, ``tracks`` of
  ``{"start": p, "velocity": d}`` and optional ``rays``.
* ``profiles``: scalarizations on the line, each ``{"dual": z*, "expr": text,
  "lo": a, "hi": b}`` or ``{"dual": z*, "pieces": [...]}``; the cone may be
  ``null`` here.
* ``tangent_truncation``: ``{"n_max": N}``, the parabola against tangent lines.

Numbers are integers or strings ``"p"``/``"p/q"``; decimals are rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .conlinear import ConeError, ConeSpec
from .dini import default_steps, harmonic_steps
from .extreal import parse_rational
from .polyhedral import HRep, VRep
from .setfun import ExprProfile, MaxAffineMap, Piecewise1DMap, PLProfile, Profiles, SetFun, Tracks, extend

__all__ = ["InstanceError", "Instance", "load_instance", "parse_instance"]

FUNCTION_KINDS = ("max_affine", "piecewise_1d", "tracks", "profiles", "tangent_truncation")


class InstanceError(ValueError):
    """Malformed instance document."""


def _q(v: Any, where: str) -> Fraction:
    if isinstance(v, float):
        raise InstanceError(f"{where}: floating-point literal {v!r}; write it as 'p/q'")
    try:
        return parse_rational(v)
    except ValueError as exc:
        raise InstanceError(f"{where}: {exc}") from None


def _pt(v: Any, where: str, dim: int | None = None) -> tuple[Fraction, ...]:
    if not isinstance(v, list):
        raise InstanceError(f"{where}: expected a list of rationals")
    out = tuple(_q(c, f"{where}[{i}]") for i, c in enumerate(v))
    if dim is not None and len(out) != dim:
        raise InstanceError(f"{where}: expected {dim} coordinates, got {len(out)}")
    return out


def _bool(v: Any, where: str, default: bool) -> bool:
    if v is None:
        return default
    if not isinstance(v, bool):
        raise InstanceError(f"{where}: expected true/false")
    return v


def _req(d: dict, key: str, where: str) -> Any:
    if not isinstance(d, dict) or key not in d:
        raise InstanceError(f"{where}: missing '{key}'")
    return d[key]


@dataclass
class Instance:
    name: str
    description: str
    space_dim: int
    cone: ConeSpec | None
    kind: str
    function: SetFun | Profiles | None
    data: dict
    candidates: list[tuple[Fraction, ...]]
    directions: list[tuple[Fraction, ...]]
    steps: list[Fraction] | None = None
    extra_duals: list[tuple[Fraction, ...]] = field(default_factory=list)
    convex: bool = False

    @property
    def is_extension(self) -> bool:
        return isinstance(self.function, SetFun) and self.function.is_extension

    @property
    def psi(self):
        return self.function.psi if self.is_extension else None


def _cone(block: Any, dim: int) -> ConeSpec:
    where = "cone"
    base = [_pt(m, f"{where}.dual_base[{i}]", dim) for i, m in enumerate(_req(block, "dual_base", where))]
    e = block.get("interior_point")
    ball = block.get("unit_ball")
    ball_v = None
    if ball is not None:
        ball_v = VRep.of(dim, [_pt(v, f"{where}.unit_ball[{i}]", dim) for i, v in enumerate(ball)])
    try:
        return ConeSpec.create(base, None if e is None else _pt(e, f"{where}.interior_point", dim), ball_v)
    except ConeError as exc:
        raise ConeError(f"invalid cone: {exc}") from None


def _pl_pieces(items: Any, where: str) -> list[tuple]:
    out = []
    for i, p in enumerate(items):
        w = f"{where}[{i}]"
        out.append((
            _q(_req(p, "lo", w), f"{w}.lo"),
            _q(_req(p, "hi", w), f"{w}.hi"),
            _bool(p.get("lo_closed"), f"{w}.lo_closed", True),
            _bool(p.get("hi_closed"), f"{w}.hi_closed", True),
            _req(p, "slope", w),
            _req(p, "offset", w),
        ))
    return out


def _function(block: Any, dim: int, cone: ConeSpec | None, convex: bool) -> tuple[str, Any]:
    kind = _req(block, "kind", "function")
    if kind not in FUNCTION_KINDS:
        raise InstanceError(f"function.kind: unknown kind {kind!r}")
    if kind == "profiles":
        profs = []
        for i, p in enumerate(_req(block, "profiles", "function")):
            w = f"function.profiles[{i}]"
            dual = _pt(_req(p, "dual", w), f"{w}.dual")
            if "expr" in p:
                prof = ExprProfile.parse(p["expr"], _q(_req(p, "lo", w), f"{w}.lo"), _q(_req(p, "hi", w), f"{w}.hi"))
            else:
                pieces = [
                    (lo, hi, lc, hc, _q(s, f"{w}.slope"), _q(o, f"{w}.offset"))
                    for lo, hi, lc, hc, s, o in _pl_pieces(_req(p, "pieces", w), f"{w}.pieces")
                ]
                prof = PLProfile.of(pieces)
            profs.append((dual, prof))
        return kind, Profiles(tuple(profs), cone)
    if kind == "tangent_truncation":
        n = _req(block, "n_max", "function")
        if not isinstance(n, int) or n < 1:
            raise InstanceError("function.n_max: expected a positive integer")
        return kind, None
    if cone is None:
        raise InstanceError(f"function.kind {kind!r} needs a cone block")
    if kind == "max_affine":
        dom_rows = []
        for i, r in enumerate(_req(block, "domain", "function")):
            w = f"function.domain[{i}]"
            dom_rows.append((_pt(_req(r, "normal", w), f"{w}.normal", dim), _q(_req(r, "offset", w), f"{w}.offset")))
        comps = []
        for i, comp in enumerate(_req(block, "components", "function")):
            pieces = []
            for j, piece in enumerate(comp):
                w = f"function.components[{i}][{j}]"
                pieces.append((_pt(_req(piece, "slope", w), f"{w}.slope", dim), _q(_req(piece, "offset", w), f"{w}.offset")))
            comps.append(pieces)
        if len(comps) != cone.dim:
            raise InstanceError(f"function.components: {len(comps)} components for a cone in dimension {cone.dim}")
        psi = MaxAffineMap.of(HRep.of(dim, dom_rows), comps)
        return kind, extend(psi, cone, declared_convex=convex)
    if kind == "piecewise_1d":
        pieces = [
            (lo, hi, lc, hc, _pt(s, "function.pieces.slope", cone.dim), _pt(o, "function.pieces.offset", cone.dim))
            for lo, hi, lc, hc, s, o in _pl_pieces(_req(block, "pieces", "function"), "function.pieces")
        ]
        return kind, extend(Piecewise1DMap.of(pieces), cone, declared_convex=convex)
    # tracks
    w = "function"
    tracks = []
    for i, t in enumerate(_req(block, "tracks", w)):
        tw = f"{w}.tracks[{i}]"
        tracks.append((_pt(_req(t, "start", tw), f"{tw}.start", cone.dim), _pt(_req(t, "velocity", tw), f"{tw}.velocity", cone.dim)))
    rays = [_pt(r, f"{w}.rays[{i}]", cone.dim) for i, r in enumerate(block.get("rays", []))]
    return kind, Tracks.of(
        cone,
        _q(_req(block, "lo", w), f"{w}.lo"),
        _q(_req(block, "hi", w), f"{w}.hi"),
        tracks,
        rays,
        _bool(block.get("lo_closed"), f"{w}.lo_closed", True),
        _bool(block.get("hi_closed"), f"{w}.hi_closed", True),
        declared_convex=convex,
    )


def _steps(block: Any) -> list[Fraction] | None:
    if block is None:
        return None
    kind = _req(block, "kind", "options.steps")
    n = _req(block, "n", "options.steps")
    if not isinstance(n, int) or n < 2:
        raise InstanceError("options.steps.n: expected an integer >= 2")
    if kind == "harmonic":
        return harmonic_steps(n)
    if kind == "dyadic":
        return default_steps(n)
    raise InstanceError(f"options.steps.kind: unknown kind {kind!r}")


def parse_instance(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceError("instance must be a JSON object")
    dim = _req(doc, "space_dim", "instance")
    if not isinstance(dim, int) or dim < 1:
        raise InstanceError("space_dim: expected a positive integer")
    opts = doc.get("options", {}) or {}
    convex = _bool(opts.get("convex"), "options.convex", False)
    cone_block = doc.get("cone")
    cone = None
    if cone_block is not None:
        base = _req(cone_block, "dual_base", "cone")
        cdim = len(base[0]) if base and isinstance(base[0], list) else 0
        cone = _cone(cone_block, cdim)
    kind, fn = _function(_req(doc, "function", "instance"), dim, cone, convex)
    cands = [_pt(c, f"candidates[{i}]", dim) for i, c in enumerate(doc.get("candidates", []))]
    dirs = [_pt(c, f"directions[{i}]", dim) for i, c in enumerate(doc.get("directions", []))]
    extra = [_pt(z, f"options.extra_duals[{i}]") for i, z in enumerate(opts.get("extra_duals", []))]
    return Instance(
        name=str(doc.get("name", "")),
        description=str(doc.get("description", "")),
        space_dim=dim,
        cone=cone,
        kind=kind,
        function=fn,
        data=doc,
        candidates=cands,
        directions=dirs,
        steps=_steps(opts.get("steps")),
        extra_duals=extra,
        convex=convex,
    )


def load_instance(path: str | Path) -> Instance:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"{path}: not valid JSON ({exc})") from None
    return parse_instance(doc)
