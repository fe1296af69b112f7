"""``geocurve`` command line: generate, frames, classify, verify.

Exit codes: 0 success (classification verdicts are data, never errors);
1 failed verification checks; 2 invalid configuration or unreadable input;
3 numerical instability while framing a curve.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import io
from .ambient import Kind, SpaceSpec, inner
from .classification import TOL_ORIGIN, TOL_REL, classify_curve
from .curves import (
    DEFAULT_N,
    FourierLoopSpec,
    generate_geodesic,
    generate_geodesic_sphere_curve,
    generate_random_curve,
    generate_totally_geodesic_curve,
    random_point,
    tangent_basis,
)
from .errors import GeocurveError, NumericalInstabilityError
from .framing import euclidean_frenet_general, frenet_frame_3d, rm_transport
from .verify import VerifyConfig, format_table, random_section_normal, run_all

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_INVALID, EXIT_UNSTABLE = 0, 1, 2, 3
KINDS = ("geodesic-sphere", "totally-geodesic", "geodesic", "random")


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    space: str = "sphere"
    m: int = 2
    radius: float = 1.0
    n: int = DEFAULT_N
    seed: int = 0
    z0: float | None = None
    kind: str = "geodesic-sphere"
    tol_residual: float = TOL_REL
    tol_origin: float = TOL_ORIGIN
    fmt: str = "json"
    in_path: str | None = None
    out_path: str | None = None

    def __post_init__(self):
        if self.n < 5:
            raise ConfigError(f"--n must be at least 5, got {self.n}")
        if not (self.tol_residual > 0 and self.tol_origin > 0):
            raise ConfigError("tolerances must be positive")
        if self.in_path and self.out_path and os.path.abspath(self.in_path) == os.path.abspath(
                self.out_path):
            raise ConfigError("--in and --out must be different files")

    def space_spec(self) -> SpaceSpec:
        try:
            return SpaceSpec(Kind(self.space), self.m, self.radius)
        except (ValueError, GeocurveError) as exc:
            raise ConfigError(str(exc)) from exc


def _seed_from_env() -> int:
    raw = os.environ.get("GEOCURVE_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"GEOCURVE_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geocurve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, space=False, tol=False, fmt=False, io_in=False):
        if space:
            p.add_argument("--space", choices=[k.value for k in Kind], default="sphere")
            p.add_argument("--m", type=int, default=2)
            p.add_argument("--radius", type=float, default=1.0)
            p.add_argument("--kind", choices=KINDS, default="geodesic-sphere")
            p.add_argument("--z0", type=float, default=None)
        p.add_argument("--n", type=int, default=DEFAULT_N)
        p.add_argument("--seed", type=int, default=None)
        if tol:
            p.add_argument("--tol-residual", type=float, default=TOL_REL)
            p.add_argument("--tol-origin", type=float, default=TOL_ORIGIN)
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")
        if io_in:
            p.add_argument("--in", dest="in_path", required=True)
        p.add_argument("--out", dest="out_path", default=None)

    common(sub.add_parser("generate", help="write a generated curve"), space=True, fmt=True)
    common(sub.add_parser("frames", help="RM (and Frenet) frames of a curve"), fmt=True,
           io_in=True)
    common(sub.add_parser("classify", help="classification report of a curve"), tol=True,
           io_in=True)
    common(sub.add_parser("verify", help="run the seeded verification suite"), tol=True)
    return parser


def config_from_args(args) -> RunConfig:
    fields = {"command": args.command, "n": args.n,
              "seed": args.seed if args.seed is not None else _seed_from_env()}
    for name in ("space", "m", "radius", "z0", "kind", "tol_residual", "tol_origin",
                 "in_path", "out_path"):
        if hasattr(args, name):
            fields[name] = getattr(args, name)
    if hasattr(args, "format"):
        fields["fmt"] = args.format
    return RunConfig(**fields)


def _emit(cfg: RunConfig, text: str):
    if cfg.out_path:
        io.write_text(cfg.out_path, text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _tolist(x):
    return np.asarray(x, dtype=float).tolist()


def generate(cfg: RunConfig):
    """Generated curve and its ground-truth metadata."""
    space = cfg.space_spec()
    rng = np.random.default_rng(cfg.seed)
    meta = {"kind": cfg.kind, "seed": cfg.seed}
    if cfg.kind == "geodesic-sphere":
        z0 = cfg.z0 if cfg.z0 is not None else 0.5 * (space.r if space.embedded else 1.0)
        p = random_point(space, rng)
        loop = FourierLoopSpec.random(space.m + 1, seed=int(rng.integers(2**31)))
        curve = generate_geodesic_sphere_curve(space, p, z0, loop, cfg.n)
        meta.update(center=_tolist(p), z0=float(z0))
    elif cfg.kind == "totally-geodesic":
        nu = random_section_normal(space, rng)
        loop = None
        if space.m > 1:
            loop = FourierLoopSpec.random(space.m, seed=int(rng.integers(2**31)))
        curve = generate_totally_geodesic_curve(space, nu, loop, cfg.n)
        meta.update(normal=_tolist(nu))
    elif cfg.kind == "geodesic":
        p = random_point(space, rng)
        v = tangent_basis(space, p).T @ rng.standard_normal(space.m + 1) if space.embedded \
            else rng.standard_normal(space.dim)
        v = v / np.sqrt(inner(space, v, v))
        length = 2 * np.pi * space.r if space.kind is Kind.SPHERE else 2.0 * space.r
        curve = generate_geodesic(space, p, v, length, cfg.n)
        meta.update(base_point=_tolist(p), direction=_tolist(v))
    else:
        curve = generate_random_curve(space, cfg.seed, cfg.n)
    return curve, meta


def cmd_generate(cfg: RunConfig) -> int:
    curve, meta = generate(cfg)
    if cfg.fmt == "csv":
        _emit(cfg, io.curve_to_csv(curve))
    else:
        _emit(cfg, io.dumps(io.curve_to_dict(curve, meta)))
    return EXIT_OK


def cmd_frames(cfg: RunConfig) -> int:
    curve, _ = io.read_curve_json(cfg.in_path)
    rm = rm_transport(curve.space, curve)
    frenet, warnings = None, []
    if curve.space.m == 2:
        try:
            frenet = (euclidean_frenet_general(curve) if curve.space.kind is Kind.EUCLIDEAN
                      else frenet_frame_3d(curve.space, curve))
        except GeocurveError as exc:
            warnings.append(f"Frenet frame omitted: {exc}")
            print(f"warning: Frenet frame omitted: {exc}", file=sys.stderr)
    if cfg.fmt == "csv":
        _emit(cfg, io.frames_to_csv(rm, frenet))
    else:
        _emit(cfg, io.dumps(io.frames_to_dict(rm, frenet, warnings)))
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    curve, _ = io.read_curve_json(cfg.in_path)
    report = classify_curve(curve, cfg.tol_residual, cfg.tol_origin)
    _emit(cfg, io.dumps(io.report_to_dict(report)))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    vcfg = VerifyConfig(seed=cfg.seed, tol_residual=cfg.tol_residual,
                        tol_origin=cfg.tol_origin, n=cfg.n)
    results = run_all(vcfg)
    table = format_table(results)
    sys.stdout.write(table)
    if cfg.out_path:
        io.write_text(cfg.out_path, io.dumps({
            "seed": cfg.seed,
            "checks": [{"name": r.name, "passed": r.passed, "metrics": r.metrics,
                        "failures": r.failures} for r in results],
        }))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILED


COMMANDS = {"generate": cmd_generate, "frames": cmd_frames, "classify": cmd_classify,
            "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except NumericalInstabilityError as exc:
        print(f"geocurve {args.command}: numerical instability: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except (ConfigError, GeocurveError, OSError) as exc:
        print(f"geocurve {args.command}: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
