"""Declarative scene files for the command-line front end.

A scene is a JSON (canonical) or TOML (convenience) document with sections

    groups / cocycles / representations / algebras / channels / tasks

in which every entry may reference names declared in earlier sections.
Complex entries are written either as plain numbers or as ``[re, im]`` pairs;
matrices are nested arrays of such entries.  Cocycles may be full tables or
the named generator ``{"weyl": d}``.

Validation errors raise :class:`SceneError` carrying the document path of the
offending entry (JSON parse errors keep their line/column context).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .channels import ChannelMap
from .frobenius import (
    FrobeniusAlgebra,
    matrix_algebra,
    multimatrix_algebra,
    tensor_product,
)
from .groups import (
    Cocycle2,
    FiniteAbelianGroup,
    GradedAlgebra,
    ProjectiveRep,
    clock_shift_rep,
    coboundary,
    covariant_channel_matrix,
    trivial_cocycle,
    twisted_group_algebra,
    weyl_cocycle,
)

__all__ = [
    "SceneError",
    "Scene",
    "load_scene_text",
    "parse_scene",
    "parse_weyl_name",
    "complex_to_json",
    "matrix_to_json",
    "matrix_from_json",
    "algebra_to_json",
    "channel_to_json",
]


class SceneError(Exception):
    """Schema violation, carrying the path of the offending entry."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


@dataclass
class Scene:
    groups: dict[str, FiniteAbelianGroup] = field(default_factory=dict)
    cocycles: dict[str, Cocycle2] = field(default_factory=dict)
    representations: dict[str, ProjectiveRep] = field(default_factory=dict)
    algebras: dict[str, FrobeniusAlgebra] = field(default_factory=dict)
    channels: dict[str, ChannelMap] = field(default_factory=dict)
    tasks: list[dict] = field(default_factory=list)
    cocycle_weyl_dim: dict[str, int] = field(default_factory=dict)


def load_scene_text(text: str, fmt: str) -> dict:
    """Parse raw scene text; ``fmt`` is ``json`` or ``toml``."""
    if fmt == "json":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SceneError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from exc
    elif fmt == "toml":
        try:
            import tomllib as toml_reader  # Python >= 3.11
        except ModuleNotFoundError:
            import tomli as toml_reader
        try:
            raw = toml_reader.loads(text)
        except toml_reader.TOMLDecodeError as exc:
            raise SceneError("toml", str(exc)) from exc
    else:
        raise ValueError(f"unknown scene format {fmt!r}")
    if not isinstance(raw, dict):
        raise SceneError("$", "scene document must be an object")
    return raw


def _complex_from_json(value, path: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, (int, float)) for v in value):
        return complex(value[0], value[1])
    raise SceneError(path, f"expected a number or [re, im] pair, got {value!r}")


def matrix_from_json(value, path: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise SceneError(path, "expected a nonempty nested array")
    rows = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or not row:
            raise SceneError(f"{path}[{i}]", "expected a nonempty array row")
        rows.append([_complex_from_json(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)])
    lengths = {len(r) for r in rows}
    if len(lengths) != 1:
        raise SceneError(path, "rows have inconsistent lengths")
    return np.array(rows, dtype=complex)


def complex_to_json(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def matrix_to_json(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=complex)
    return [[complex_to_json(z) for z in row] for row in m]


def algebra_to_json(alg: FrobeniusAlgebra) -> dict:
    out = {
        "dim": alg.dim,
        "label": alg.label,
        "mult": matrix_to_json(alg.mult),
        "unit": matrix_to_json(alg.unit),
    }
    if isinstance(alg, GradedAlgebra):
        out["group"] = list(alg.group.orders)
        out["grading"] = [list(g) for g in alg.grading]
    return out


def channel_to_json(ch: ChannelMap) -> dict:
    return {
        "source": algebra_to_json(ch.source),
        "target": algebra_to_json(ch.target),
        "matrix": matrix_to_json(ch.matrix),
    }


def _expect_dict(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise SceneError(path, "expected an object")
    return value


def _parse_group(spec, path: str) -> FiniteAbelianGroup:
    spec = _expect_dict(spec, path)
    orders = spec.get("cyclic_orders")
    if not isinstance(orders, list) or not all(isinstance(n, int) and n >= 2 for n in orders):
        raise SceneError(f"{path}.cyclic_orders", "expected a list of integers >= 2")
    return FiniteAbelianGroup(tuple(orders))


def parse_weyl_name(text: str) -> int | None:
    """Dimension of a ``weyl:d`` generator name, or None if it is not one."""
    if isinstance(text, str) and text.startswith("weyl:"):
        tail = text[len("weyl:") :]
        if tail.isdigit() and int(tail) >= 2:
            return int(tail)
    return None


def _parse_cocycle(spec, path: str, scene: Scene, name: str) -> Cocycle2:
    if isinstance(spec, str):
        d = parse_weyl_name(spec)
        if d is None:
            raise SceneError(path, f"unknown cocycle generator {spec!r} (expected 'weyl:d')")
        scene.cocycle_weyl_dim[name] = d
        return weyl_cocycle(d)
    spec = _expect_dict(spec, path)
    if "weyl" in spec:
        d = spec["weyl"]
        if not isinstance(d, int) or d < 2:
            raise SceneError(f"{path}.weyl", "expected an integer >= 2")
        scene.cocycle_weyl_dim[name] = d
        psi = weyl_cocycle(d)
        if "group" in spec:
            g = _resolve(scene.groups, spec["group"], f"{path}.group")
            if g != psi.group:
                raise SceneError(f"{path}.group", f"the weyl generator lives on Z{d}xZ{d}")
        return psi
    g = _resolve(scene.groups, spec.get("group"), f"{path}.group")
    if spec.get("trivial"):
        return trivial_cocycle(g)
    if "coboundary" in spec:
        vals = spec["coboundary"]
        if not isinstance(vals, list) or len(vals) != g.order:
            raise SceneError(f"{path}.coboundary", f"expected {g.order} cochain values")
        phi = [_complex_from_json(v, f"{path}.coboundary[{i}]") for i, v in enumerate(vals)]
        return coboundary(g, phi)
    if "table" in spec:
        table = matrix_from_json(spec["table"], f"{path}.table")
        if table.shape != (g.order, g.order):
            raise SceneError(f"{path}.table", f"expected a {g.order}x{g.order} table")
        return Cocycle2(g, table)
    raise SceneError(path, "cocycle needs one of: weyl, trivial, coboundary, table")


def _parse_representation(spec, path: str) -> ProjectiveRep:
    spec = _expect_dict(spec, path)
    d = spec.get("clock_shift")
    if not isinstance(d, int) or d < 2:
        raise SceneError(f"{path}.clock_shift", "expected an integer >= 2")
    return clock_shift_rep(d)


def _resolve(table: dict, name, path: str):
    if not isinstance(name, str) or name not in table:
        raise SceneError(path, f"unknown or missing reference {name!r}")
    return table[name]


def _parse_algebra(spec, path: str, scene: Scene) -> FrobeniusAlgebra:
    spec = _expect_dict(spec, path)
    if "matrix" in spec:
        d = spec["matrix"]
        if not isinstance(d, int) or d < 1:
            raise SceneError(f"{path}.matrix", "expected a positive integer")
        return matrix_algebra(d)
    if "multimatrix" in spec:
        blocks = spec["multimatrix"]
        if not isinstance(blocks, list) or not blocks or not all(isinstance(b, int) and b >= 1 for b in blocks):
            raise SceneError(f"{path}.multimatrix", "expected a nonempty list of positive integers")
        return multimatrix_algebra(blocks)
    if "twisted_group" in spec:
        sub = _expect_dict(spec["twisted_group"], f"{path}.twisted_group")
        g = _resolve(scene.groups, sub.get("group"), f"{path}.twisted_group.group")
        phi = None
        if sub.get("cocycle") is not None:
            phi = _resolve(scene.cocycles, sub["cocycle"], f"{path}.twisted_group.cocycle")
            if phi.group != g:
                raise SceneError(f"{path}.twisted_group.cocycle", "cocycle lives on a different group")
        try:
            return twisted_group_algebra(g, phi)
        except ValueError as exc:
            raise SceneError(f"{path}.twisted_group", str(exc)) from exc
    if "tensor" in spec:
        names = spec["tensor"]
        if not isinstance(names, list) or len(names) < 2:
            raise SceneError(f"{path}.tensor", "expected at least two algebra names")
        algs = [_resolve(scene.algebras, n, f"{path}.tensor[{i}]") for i, n in enumerate(names)]
        out = algs[0]
        for a in algs[1:]:
            out = tensor_product(out, a)
        return out
    raise SceneError(path, "algebra needs one of: matrix, multimatrix, twisted_group, tensor")


def _parse_channel(spec, path: str, scene: Scene) -> ChannelMap:
    spec = _expect_dict(spec, path)
    src = _resolve(scene.algebras, spec.get("source"), f"{path}.source")
    tgt = _resolve(scene.algebras, spec.get("target", spec.get("source")), f"{path}.target")
    if "matrix" in spec:
        mat = matrix_from_json(spec["matrix"], f"{path}.matrix")
        if mat.shape != (tgt.dim, src.dim):
            raise SceneError(f"{path}.matrix", f"expected shape ({tgt.dim}, {src.dim}), got {mat.shape}")
        return ChannelMap(src, tgt, mat)
    if "stochastic" in spec:
        from .coding import ClassicalChannel, classical_channel_map

        mat = matrix_from_json(spec["stochastic"], f"{path}.stochastic")
        if np.abs(mat.imag).max() > 0:
            raise SceneError(f"{path}.stochastic", "stochastic entries must be real")
        if not isinstance(src, GradedAlgebra) or not isinstance(tgt, GradedAlgebra):
            raise SceneError(path, "stochastic channels need graded (twisted_group) algebras")
        try:
            return classical_channel_map(src, tgt, ClassicalChannel(mat.real))
        except ValueError as exc:
            raise SceneError(f"{path}.stochastic", str(exc)) from exc
    if "covariant_weights" in spec:
        if not isinstance(src, GradedAlgebra) or src is not tgt and src.dim != tgt.dim:
            raise SceneError(path, "covariant_weights channels need a graded algebra")
        w = spec["covariant_weights"]
        if not isinstance(w, list):
            raise SceneError(f"{path}.covariant_weights", "expected a list of weights")
        try:
            return ChannelMap(src, tgt, covariant_channel_matrix(src, [float(x) for x in w]))
        except (TypeError, ValueError) as exc:
            raise SceneError(f"{path}.covariant_weights", str(exc)) from exc
    raise SceneError(path, "channel needs one of: matrix, stochastic, covariant_weights")


_SECTIONS = ("groups", "cocycles", "representations", "algebras", "channels", "tasks")


def parse_scene(raw: dict) -> Scene:
    """Build all declared objects, section by section, validating references."""
    for key in raw:
        if key not in _SECTIONS:
            raise SceneError(key, "unknown section")
    scene = Scene()
    for name, spec in _expect_dict(raw.get("groups", {}), "groups").items():
        scene.groups[name] = _parse_group(spec, f"groups.{name}")
    for name, spec in _expect_dict(raw.get("cocycles", {}), "cocycles").items():
        scene.cocycles[name] = _parse_cocycle(spec, f"cocycles.{name}", scene, name)
    for name, spec in _expect_dict(raw.get("representations", {}), "representations").items():
        scene.representations[name] = _parse_representation(spec, f"representations.{name}")
    for name, spec in _expect_dict(raw.get("algebras", {}), "algebras").items():
        scene.algebras[name] = _parse_algebra(spec, f"algebras.{name}", scene)
    for name, spec in _expect_dict(raw.get("channels", {}), "channels").items():
        scene.channels[name] = _parse_channel(spec, f"channels.{name}", scene)
    tasks = raw.get("tasks", [])
    if not isinstance(tasks, list):
        raise SceneError("tasks", "expected a list")
    for i, task in enumerate(tasks):
        task = _expect_dict(task, f"tasks[{i}]")
        if "check" not in task:
            raise SceneError(f"tasks[{i}]", "only 'check' tasks are recognised")
        name = task["check"]
        declared = set(scene.cocycles) | set(scene.algebras) | set(scene.channels)
        if name not in declared:
            raise SceneError(f"tasks[{i}].check", f"unknown object {name!r}")
        scene.tasks.append({"check": name})
    return scene
