"""Command-line front end.

Subcommands:

* ``check``      run axiom/channel/cocycle verification on a scene's objects
* ``transform``  twist a covariant channel by a declared cocycle
* ``capacity``   capacities of a classical channel, optionally certifying its
                 twisted quantum image
* ``demo``       bundled end-to-end scenarios (teleport-d2, teleport-d3,
                 densecode-d2, bsc-capacity)

Scenes are JSON (or TOML with a ``.toml`` suffix / ``--scene-format toml``);
``-`` reads from stdin.  Reports go to stdout as JSON (default) or text and
are byte-identical across runs for identical inputs; timing is only included
when ``--timing`` is requested since it would break that guarantee.

Exit codes: 0 all checks pass, 1 verification failure, 2 schema error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .channels import ChannelMap, is_channel
from .coding import (
    ClassicalChannel,
    blahut_arimoto,
    capacity_weakly_symmetric,
    carrier_to_stochastic,
    dense_coding_scheme,
    entanglement_assisted_capacity_report,
    is_weakly_symmetric,
    teleportation_scheme,
    verify_scheme,
)
from .frobenius import check_algebra
from .groups import (
    GradedAlgebra,
    check_cocycle,
    clock_shift_rep,
    is_covariant,
    is_grading_preserving,
)
from .scenes import (
    Scene,
    SceneError,
    channel_to_json,
    load_scene_text,
    parse_scene,
)
from .tensors import Tolerance
from .twists import UptInstance, transform_channel

DEMO_NAMES = ("teleport-d2", "teleport-d3", "densecode-d2", "bsc-capacity")


def _read_scene(args) -> Scene:
    if args.scene == "-":
        text = sys.stdin.read()
        fmt = args.scene_format or "json"
    else:
        with open(args.scene, "r", encoding="utf-8") as fh:
            text = fh.read()
        fmt = args.scene_format or ("toml" if args.scene.endswith(".toml") else "json")
    return parse_scene(load_scene_text(text, fmt))


def _task(name: str, kind: str, status: bool, **fields) -> dict:
    out = {"name": name, "kind": kind, "status": "pass" if status else "fail"}
    out.update(fields)
    return out


def _check_tasks(scene: Scene, tol: Tolerance) -> list[dict]:
    tasks = []
    wanted = {t["check"] for t in scene.tasks} if scene.tasks else None

    def selected(name: str) -> bool:
        return wanted is None or name in wanted

    for name, psi in scene.cocycles.items():
        if not selected(name):
            continue
        rep = check_cocycle(psi, tol)
        ok = max(rep.unit_modulus, rep.cocycle_identity) <= tol.epsilon
        tasks.append(
            _task(
                name,
                "cocycle",
                ok,
                residuals={
                    "unit_modulus": rep.unit_modulus,
                    "cocycle_identity": rep.cocycle_identity,
                    "normalized": rep.normalized,
                },
                symmetric_residual=rep.symmetric,
            )
        )
    for name, alg in scene.algebras.items():
        if not selected(name):
            continue
        rep = check_algebra(alg, tol)
        ok = rep.is_frobenius
        tasks.append(
            _task(
                name,
                "algebra",
                ok,
                residuals=rep.residuals(),
                flags={
                    "special": rep.is_special,
                    "symmetric": rep.is_symmetric,
                    "commutative": rep.is_commutative,
                    "standard": rep.is_standard,
                },
            )
        )
    for name, ch in scene.channels.items():
        if not selected(name):
            continue
        rep = is_channel(ch, tol)
        fields = {
            "residuals": {"counit": rep.counit_residual},
            "witness": {
                "cp_min_eigenvalue": rep.cp_min_eigenvalue,
                "cp_hermitian_residual": rep.cp_hermitian_residual,
            },
        }
        if isinstance(ch.source, GradedAlgebra) and isinstance(ch.target, GradedAlgebra):
            if ch.source.group == ch.target.group:
                cov_ok, cov_res = is_covariant(ch.matrix, ch.source, ch.target, tol)
                gp_ok, gp_res = is_grading_preserving(ch.matrix, ch.source, ch.target, tol)
                fields["covariant"] = cov_ok
                fields["residuals"]["covariance"] = cov_res
                fields["residuals"]["grading"] = gp_res
        tasks.append(_task(name, "channel", rep.passes, **fields))
    return tasks


def cmd_check(args) -> tuple[int, dict]:
    scene = _read_scene(args)
    tol = Tolerance(epsilon=args.tol)
    tasks = _check_tasks(scene, tol)
    ok = all(t["status"] == "pass" for t in tasks)
    return (0 if ok else 1), {"command": "check", "tasks": tasks}


def cmd_transform(args) -> tuple[int, dict]:
    scene = _read_scene(args)
    tol = Tolerance(epsilon=args.tol)
    if args.channel not in scene.channels:
        raise SceneError("channels", f"unknown channel {args.channel!r}")
    if args.cocycle not in scene.cocycles:
        raise SceneError("cocycles", f"unknown cocycle {args.cocycle!r}")
    f = scene.channels[args.channel]
    psi = scene.cocycles[args.cocycle]
    if not isinstance(f.source, GradedAlgebra) or not isinstance(f.target, GradedAlgebra):
        raise SceneError(f"channels.{args.channel}", "transform needs graded algebras")
    cov_ok, cov_res = is_covariant(f.matrix, f.source, f.target, tol)
    if not cov_ok:
        report = {
            "command": "transform",
            "tasks": [
                _task(
                    args.channel,
                    "transform",
                    False,
                    residuals={"covariance": cov_res},
                    reason="channel is not covariant; transformation undefined",
                )
            ],
        }
        return 1, report
    out = transform_channel(f, psi, tol)
    chan_rep = is_channel(out, tol)
    gp_ok, gp_res = is_grading_preserving(out.matrix, out.source, out.target, tol)
    ok = chan_rep.passes and gp_ok
    task = _task(
        args.channel,
        "transform",
        ok,
        residuals={
            "covariance": cov_res,
            "offdiagonal": gp_res,
            "counit": chan_rep.counit_residual,
        },
        witness={"cp_min_eigenvalue": chan_rep.cp_min_eigenvalue},
        transformed=channel_to_json(out),
    )
    return (0 if ok else 1), {"command": "transform", "tasks": [task]}


def _capacity_task(name: str, c: ClassicalChannel) -> dict:
    ws = is_weakly_symmetric(c)
    fields = {
        "weakly_symmetric": ws,
        "blahut_arimoto_bits": blahut_arimoto(c),
        "input_size": c.input_size,
        "output_size": c.output_size,
    }
    if ws:
        fields["capacity_bits"] = capacity_weakly_symmetric(c)
        ok = abs(fields["capacity_bits"] - fields["blahut_arimoto_bits"]) <= 1e-5
    else:
        fields["capacity_bits"] = None
        ok = True
    return _task(name, "capacity", ok, **fields)


def _quantum_image_upt(args, scene: Scene | None) -> UptInstance:
    from .scenes import parse_weyl_name

    name = args.quantum_image
    d = parse_weyl_name(name)
    if d is None and scene is not None and name in scene.cocycles:
        d = scene.cocycle_weyl_dim.get(name)
        if d is None:
            raise SceneError(
                f"cocycles.{name}",
                "quantum-image certification needs a weyl cocycle (its clock/shift"
                " representation supplies the entangled resource)",
            )
    if d is None:
        raise SceneError(
            "quantum-image",
            f"{name!r} is neither a declared weyl cocycle nor a 'weyl:d' literal",
        )
    from .groups import weyl_cocycle

    return UptInstance(cocycle=weyl_cocycle(d), rep=clock_shift_rep(d))


def cmd_capacity(args) -> tuple[int, dict]:
    tol = Tolerance(epsilon=args.tol)
    tasks = []
    if args.csv is not None:
        from .coding import classical_channel_from_csv
        from .groups import FiniteAbelianGroup, twisted_group_algebra
        from .coding import classical_channel_map

        with open(args.csv, "r", encoding="utf-8") as fh:
            try:
                c = classical_channel_from_csv(fh.read())
            except ValueError as exc:
                raise SceneError(args.csv, str(exc)) from exc
        name = args.channel or args.csv
        tasks.append(_capacity_task(name, c))
        if args.quantum_image is not None:
            upt = _quantum_image_upt(args, None)
            d = upt.resource_dim
            if c.matrix.shape != (d * d, d * d):
                raise SceneError(
                    args.csv,
                    f"quantum-image by weyl:{d} needs a {d * d}x{d * d} matrix",
                )
            alg = twisted_group_algebra(FiniteAbelianGroup((d, d)), None)
            f = classical_channel_map(alg, alg, c)
            tasks.append(_try_quantum_image_task(name, f, upt, tol))
        ok = all(t["status"] == "pass" for t in tasks)
        return (0 if ok else 1), {"command": "capacity", "tasks": tasks}

    if args.scene is None:
        raise SceneError("capacity", "need a scene (with --channel) or --csv input")
    scene = _read_scene(args)
    if args.channel is None or args.channel not in scene.channels:
        raise SceneError("channels", f"unknown channel {args.channel!r}")
    f = scene.channels[args.channel]
    if not isinstance(f.source, GradedAlgebra) or not isinstance(f.target, GradedAlgebra):
        raise SceneError(f"channels.{args.channel}", "capacity needs graded algebras")
    c = carrier_to_stochastic(f)
    tasks.append(_capacity_task(args.channel, c))
    if args.quantum_image is not None:
        upt = _quantum_image_upt(args, scene)
        tasks.append(_try_quantum_image_task(args.channel, f, upt, tol))
    ok = all(t["status"] == "pass" for t in tasks)
    return (0 if ok else 1), {"command": "capacity", "tasks": tasks}


def _try_quantum_image_task(name: str, f: ChannelMap, upt: UptInstance, tol: Tolerance) -> dict:
    try:
        rep = entanglement_assisted_capacity_report(f, upt, tol)
    except ValueError as exc:
        return _task(f"{name}~quantum-image", "entanglement_assisted_capacity", False, reason=str(exc))
    return _quantum_image_task(name, rep)


def _quantum_image_task(name: str, rep) -> dict:
    return _task(
        f"{name}~quantum-image",
        "entanglement_assisted_capacity",
        rep.certified,
        c_e_bits=rep.entanglement_assisted_bits,
        q_e_bits=rep.q_e_bits,
        classical_bits=rep.classical_bits,
        blahut_arimoto_bits=rep.blahut_arimoto_bits,
        residuals={
            "scheme_to_classical": rep.scheme_residuals[0],
            "scheme_to_quantum": rep.scheme_residuals[1],
            "covariance": rep.covariance_residual,
            "unital": rep.unital_residual,
        },
    )


def _demo_scheme_tasks(d: int, tol: Tolerance) -> list[dict]:
    tele = teleportation_scheme(d)
    dense = dense_coding_scheme(d)
    r1 = verify_scheme(tele, tol)
    r2 = verify_scheme(dense, tol)
    return [
        _task(
            f"teleportation-d{d}",
            "coding_scheme",
            r1.passes,
            residuals={"pipeline": r1.pipeline_residual},
            resource_dim=d,
        ),
        _task(
            f"dense-coding-d{d}",
            "coding_scheme",
            r2.passes,
            residuals={"pipeline": r2.pipeline_residual},
            resource_dim=d,
        ),
    ]


def cmd_demo(args) -> tuple[int, dict]:
    tol = Tolerance(epsilon=args.tol)
    tasks: list[dict] = []
    if args.name in ("teleport-d2", "teleport-d3"):
        d = int(args.name[-1])
        tasks.extend(_demo_scheme_tasks(d, tol))
    elif args.name == "densecode-d2":
        tasks.extend(_demo_scheme_tasks(2, tol))
        from .groups import FiniteAbelianGroup, twisted_group_algebra, weyl_cocycle

        alg = twisted_group_algebra(FiniteAbelianGroup((2, 2)), None)
        upt = UptInstance(cocycle=weyl_cocycle(2), rep=clock_shift_rep(2))
        ident = ChannelMap(alg, alg, np.eye(4, dtype=complex))
        rep = entanglement_assisted_capacity_report(ident, upt, tol)
        tasks.append(
            _task(
                "noiseless-4-level~quantum-image",
                "entanglement_assisted_capacity",
                rep.certified,
                c_e_bits=rep.entanglement_assisted_bits,
                q_e_bits=rep.q_e_bits,
                residuals={
                    "scheme_to_classical": rep.scheme_residuals[0],
                    "scheme_to_quantum": rep.scheme_residuals[1],
                },
            )
        )
    elif args.name == "bsc-capacity":
        for p in (0.0, 0.11, 0.25, 0.5):
            c = ClassicalChannel([[1 - p, p], [p, 1 - p]])
            tasks.append(_capacity_task(f"bsc-{p}", c))
    else:
        raise SceneError("demo", f"unknown demo {args.name!r}")
    ok = all(t["status"] == "pass" for t in tasks)
    return (0 if ok else 1), {"command": "demo", "name": args.name, "tasks": tasks}


def _render(report: dict, args, elapsed_s: float) -> str:
    report = dict(report)
    report["seed"] = args.seed
    report["tolerance"] = args.tol
    report["status"] = "pass" if all(t["status"] == "pass" for t in report["tasks"]) else "fail"
    if args.timing:
        report["elapsed_ms"] = round(elapsed_s * 1000.0, 3)
    if args.format == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    lines = [f"# {report['command']} (tol={args.tol:g}, seed={args.seed})"]
    for t in report["tasks"]:
        bits = []
        for key, value in t.items():
            if key in ("name", "kind", "status"):
                continue
            if isinstance(value, dict):
                bits.extend(f"{key}.{k}={_fmt(v)}" for k, v in value.items())
            else:
                bits.append(f"{key}={_fmt(value)}")
        lines.append(f"{t['status'].upper():4s} {t['kind']} {t['name']}  " + " ".join(bits))
    lines.append(f"status: {report['status'].upper()}")
    if args.timing:
        lines.append(f"elapsed_ms: {report['elapsed_ms']}")
    return "\n".join(lines) + "\n"


def _fmt(value) -> str:
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, (list, dict)):
        return "<matrix>"
    return str(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entsym",
        description="Verify Frobenius-algebra structure, channels and cocycle "
        "twists; build teleportation-style interconversion schemes and "
        "capacity certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scene: bool) -> None:
        if scene:
            p.add_argument("scene", help="scene file path, or - for stdin")
            p.add_argument(
                "--scene-format", choices=("json", "toml"), default=None,
                help="override scene format detection",
            )
        p.add_argument("--tol", type=float, default=1e-10, help="verification tolerance")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--seed", type=int, default=0, help="seed recorded in the report")
        p.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identical reports)")

    p = sub.add_parser("check", help="verify all declared objects")
    common(p, scene=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("transform", help="twist a covariant channel by a cocycle")
    common(p, scene=True)
    p.add_argument("--channel", required=True)
    p.add_argument("--cocycle", required=True)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("capacity", help="capacities of a classical channel")
    p.add_argument("scene", nargs="?", default=None, help="scene file path, or - for stdin")
    p.add_argument("--scene-format", choices=("json", "toml"), default=None,
                   help="override scene format detection")
    p.add_argument("--tol", type=float, default=1e-10, help="verification tolerance")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, default=0, help="seed recorded in the report")
    p.add_argument("--timing", action="store_true",
                   help="include wall-clock time (breaks byte-identical reports)")
    p.add_argument("--channel", default=None, help="channel name in the scene")
    p.add_argument("--csv", default=None, metavar="FILE",
                   help="column-stochastic transition matrix as CSV (no scene needed)")
    p.add_argument("--quantum-image", default=None, metavar="COCYCLE",
                   help="certify the twisted quantum image (scene cocycle name or 'weyl:d')")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("demo", help="run a bundled scenario")
    p.add_argument("name", choices=DEMO_NAMES)
    common(p, scene=False)
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        code, report = args.func(args)
    except SceneError as exc:
        sys.stderr.write(f"scene error at {exc}\n")
        return 2
    sys.stdout.write(_render(report, args, time.perf_counter() - start))
    return code


if __name__ == "__main__":
    sys.exit(main())
