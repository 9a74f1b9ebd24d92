"""Command line interface: ``dunklkit <subcommand> ...``.

Exit codes: 0 success, 1 failed verification or NotHypoelliptic, 2
Inconclusive, 64 usage error, 65 bad input data, 70 internal error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .foundation import GroupConfig, QuadratureError

EX_USAGE, EX_DATAERR, EX_SOFTWARE = 64, 65, 70
MIN_TOL = 1e-12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EX_USAGE)


@dataclass
class RunConfig:
    group: GroupConfig
    tol: float = 1e-8
    seed: int = 0
    order: int | None = None
    box_halfwidth: float | None = None
    out: str | None = None
    fmt: str = "csv"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.tol >= MIN_TOL:
            raise UsageError(f"tolerance must be >= {MIN_TOL}")

    def digest(self) -> str:
        payload = {
            "group": self.group.to_dict(), "tol": self.tol, "seed": self.seed, "order": self.order,
            "box_halfwidth": self.box_halfwidth, "extra": self.extra,
        }
        text = json.dumps(payload, sort_keys=True, default=str)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_table(rc: RunConfig, command: str, header, rows, meta: dict) -> str:
    """CSV with a '#' comment header carrying the config hash, seed and quadrature metadata."""
    buf = io.StringIO()
    buf.write(f"# dunklkit {command}\n")
    buf.write(f"# config_hash={rc.digest()} seed={rc.seed}\n")
    buf.write(f"# config={rc.group.to_json()}\n")
    buf.write(f"# quadrature={json.dumps(meta, sort_keys=True, default=_fmt)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def write_json(rc: RunConfig, command: str, payload: dict) -> str:
    doc = {"command": command, "config_hash": rc.digest(), "seed": rc.seed, "config": rc.group.to_dict(),
           "result": payload}
    return json.dumps(doc, indent=2, sort_keys=True, default=_fmt) + "\n"


def _emit(rc: RunConfig, text: str):
    if rc.out:
        with open(rc.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table_out(rc, command, header, rows, meta):
    if rc.fmt == "json":
        _emit(rc, write_json(rc, command, {"header": header, "rows": [[_fmt(v) for v in r] for r in rows],
                                           "quadrature": meta}))
    else:
        _emit(rc, write_table(rc, command, header, rows, meta))


# ---------------------------------------------------------------- parsing helpers


def parse_axis(text: str) -> np.ndarray:
    """'a:b:n' (inclusive linspace) or a comma list."""
    text = text.strip()
    if text.count(":") == 2:
        a, b, n = text.split(":")
        return np.linspace(float(a), float(b), int(n))
    return np.array([float(v) for v in text.split(",") if v.strip()])


def parse_points(text: str, d: int) -> np.ndarray:
    """Points separated by ';' with coordinates separated by ','; or one axis spec used per coordinate."""
    if ";" in text or (d > 1 and text.count(":") != 2 and text.count(",") == d - 1):
        pts = [[float(c) for c in p.split(",")] for p in text.split(";") if p.strip()]
        arr = np.array(pts, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != d:
            raise ValueError(f"points must have {d} coordinates")
        return arr
    axis = parse_axis(text)
    if d == 1:
        return axis[:, None]
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def parse_complex_list(text: str) -> list:
    return [complex(v.strip().replace(" ", "").replace("i", "j")) for v in text.split(",") if v.strip()]


def load_run_config(args) -> RunConfig:
    data = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except FileNotFoundError:
            raise ValueError(f"config file not found: {args.config}") from None
        except json.JSONDecodeError as exc:
            raise ValueError(f"config is not valid JSON: {exc}") from None
    if args.k is not None:
        ks = [float(Fraction(v.strip())) for v in args.k.split(",")]
        data["k"] = ks
        data.setdefault("variant", "rank1" if len(ks) == 1 else "product")
    if "k" not in data:
        raise UsageError("a group configuration is required (--config or --k)")
    data.setdefault("variant", "rank1" if len(np.atleast_1d(data["k"])) == 1 else "product")
    group = GroupConfig.from_dict(data)
    quad = data.get("quadrature", {}) or {}
    tol = args.tol if args.tol is not None else float(data.get("tol", 1e-8))
    seed = args.seed if args.seed is not None else int(data.get("seed", 0))
    return RunConfig(group, tol=tol, seed=seed, order=quad.get("order"), box_halfwidth=data.get("box_halfwidth"),
                     out=args.out, fmt=args.format)


# ---------------------------------------------------------------- subcommands


def cmd_kernel(rc: RunConfig, args) -> int:
    from .kernel import kernel_1d_integral, kernel_values

    d = rc.group.dimension
    xs = parse_points(args.x, d)
    zs = parse_complex_list(args.z)
    if len(zs) != d:
        raise ValueError(f"--z needs {d} complex components")
    z = np.array(zs)
    vals, errs = kernel_values(rc.group, xs, z[None, :], with_error=True)
    rows = []
    for x, v, e in zip(xs, vals, errs):
        row = list(x) + [v.real, v.imag, e, "Series" if d == 1 else "Product"]
        if args.both and d == 1:
            iv = kernel_1d_integral(rc.group.multiplicities[0], x[0], z[0])
            row += [iv.value.real, iv.value.imag, abs(iv.value - v)]
        rows.append(row)
    header = [f"x{j + 1}" for j in range(d)] + ["re", "im", "est_error", "route"]
    if args.both and d == 1:
        header += ["integral_re", "integral_im", "route_diff"]
    _table_out(rc, "kernel", header, rows, {"z": [str(c) for c in zs]})
    return 0


def cmd_vk(rc: RunConfig, args) -> int:
    from .functions import make_function
    from .intertwine import vk_function, vk_poly, vk_transmutation_solver
    from .polyalg import RationalK, eval_poly, parse_poly

    d = rc.group.dimension
    if args.poly:
        p = parse_poly(args.poly, d)
        kq = RationalK(tuple(Fraction(v).limit_denominator(10**6) for v in rc.group.multiplicities))
        q = vk_poly(kq, p)
        if args.check and q != vk_transmutation_solver(kq, p):
            raise AssertionError("V_k routes disagree")
        if not args.grid:
            _emit(rc, write_json(rc, "vk", {"input": p.to_string(), "vk": q.to_string()}) if rc.fmt == "json"
                  else f"{q.to_string()}\n")
            return 0
        pts = parse_points(args.grid, d)
        vals = eval_poly(q, pts)
        meta = {"route": "moments", "k_exact": [str(v) for v in kq.values]}
    else:
        f = make_function(args.func, rc.group)
        pts = parse_points(args.grid or "-2:2:9", d)
        vals = vk_function(rc.group, f, pts, tol=rc.tol)
        meta = {"route": "quadrature", "tol": rc.tol}
    rows = [list(x) + [float(np.real(v)), float(np.imag(v))] for x, v in zip(pts, np.atleast_1d(vals))]
    _table_out(rc, "vk", [f"x{j + 1}" for j in range(d)] + ["re", "im"], rows, meta)
    return 0


def cmd_transform(rc: RunConfig, args) -> int:
    from .functions import make_function
    from .transform import dunkl_transform, inverse_dunkl_transform

    d = rc.group.dimension
    f = make_function(args.func, rc.group)
    ys = parse_points(args.grid, d)
    op = inverse_dunkl_transform if args.inverse else dunkl_transform
    res = op(rc.group, f, ys, tol=rc.tol, n=rc.order, half_width=rc.box_halfwidth)
    rows = [list(y) + [v.real, v.imag, res.meta["tail_bound"]] for y, v in zip(ys, res.values)]
    _table_out(rc, "transform", [f"y{j + 1}" for j in range(d)] + ["re", "im", "tail_bound"], rows, res.meta)
    return 0


def cmd_translate(rc: RunConfig, args) -> int:
    from .convolve import translate_1d, translate_radial
    from .functions import make_function

    d = rc.group.dimension
    f = make_function(args.func, rc.group)
    shift = np.array([float(v) for v in args.y.split(",")])
    if len(shift) != d:
        raise ValueError(f"--y needs {d} components")
    xs = parse_points(args.grid, d)
    if d == 1 and f.radial_profile is None:
        vals = translate_1d(rc.group.multiplicities[0], shift[0], f, xs[:, 0])
        route = "explicit-1d"
    else:
        # tau_y f(x) = tau_x f(y); the radial formula integrates in its first argument
        vals = np.array([translate_radial(rc.group, shift, f, x) for x in xs])
        route = "radial"
    rows = [list(x) + [float(v)] for x, v in zip(xs, np.atleast_1d(vals))]
    _table_out(rc, "translate", [f"x{j + 1}" for j in range(d)] + ["value"], rows, {"route": route})
    return 0


def cmd_convolve(rc: RunConfig, args) -> int:
    from .convolve import dunkl_convolve
    from .functions import make_function

    d = rc.group.dimension
    f = make_function(args.f, rc.group)
    g = make_function(args.g, rc.group)
    xs = parse_points(args.grid, d)
    vals = dunkl_convolve(rc.group, f, g, xs, tol=rc.tol)
    rows = [list(x) + [float(v)] for x, v in zip(xs, np.atleast_1d(vals))]
    _table_out(rc, "convolve", [f"x{j + 1}" for j in range(d)] + ["value"], rows, {"tol": rc.tol})
    return 0


def cmd_check_hypo(rc: RunConfig, args) -> int:
    from .hypo import verdict

    rep = verdict(rc.group, args.op, seed=rc.seed)
    payload = rep.to_dict()
    text = json.dumps({"command": "check-hypo", "config_hash": rc.digest(), "seed": rc.seed,
                       "config": rc.group.to_dict(), "operator": args.op, "report": payload},
                      indent=2, sort_keys=True, default=_fmt) + "\n"
    _emit(rc, text)
    summary = (f"symbol {rep.symbol}: {rep.verdict} (growth pass={rep.growth.passed}, A={rep.growth.A}, "
               f"M={rep.growth.M}; zero-set pass={rep.zeroset.passed})")
    print(summary, file=sys.stderr)
    return {"Hypoelliptic": 0, "NotHypoelliptic": 1}.get(rep.verdict, 2)


def cmd_verify(rc: RunConfig, args) -> int:
    from .verify import SUITES, run_suite

    names = list(SUITES) if args.suite == "all" else [args.suite]
    rows = []
    for name in names:
        rows.extend(run_suite(name, rc.group, seed=rc.seed, tol_override=args.tol))
    all_ok = all(r[3] for r in rows)
    _table_out(rc, "verify", ["suite", "check", "measured", "tol", "pass"],
               [(s, c, m, t, p) for (c, m, t, p, s) in rows], {"suites": names})
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="group configuration JSON file")
    common.add_argument("--k", help="multiplicities, comma separated (alternative to --config)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    parser = _Parser(prog="dunklkit", description="Dunkl kernel, transform, convolution and hypoellipticity tools")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("kernel", parents=[common], help="evaluate K(x, z)")
    p.add_argument("--x", required=True, help="points, e.g. '-2:2:9' or '0.5,1;1,2'")
    p.add_argument("--z", required=True, help="complex vector, e.g. '1+2i' or '1,0.5i'")
    p.add_argument("--both", action="store_true", help="also evaluate the integral route (d=1)")
    p.set_defaults(run=cmd_kernel)

    p = sub.add_parser("vk", parents=[common], help="intertwining operator")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--poly", help="polynomial literal in x1..xd")
    g.add_argument("--func", help="named test function")
    p.add_argument("--grid", help="evaluation points")
    p.add_argument("--check", action="store_true", help="cross-check against the transmutation solver")
    p.set_defaults(run=cmd_vk)

    p = sub.add_parser("transform", parents=[common], help="Dunkl transform")
    p.add_argument("--func", required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--inverse", action="store_true")
    p.set_defaults(run=cmd_transform)

    p = sub.add_parser("translate", parents=[common], help="Dunkl translation tau_y f")
    p.add_argument("--func", required=True)
    p.add_argument("--y", required=True, help="shift vector, comma separated")
    p.add_argument("--grid", required=True)
    p.set_defaults(run=cmd_translate)

    p = sub.add_parser("convolve", parents=[common], help="Dunkl convolution f *_D g")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--grid", required=True)
    p.set_defaults(run=cmd_convolve)

    p = sub.add_parser("check-hypo", parents=[common], help="hypoellipticity verdict for P(T) delta")
    p.add_argument("--op", required=True, help="operator literal in T1..Td, e.g. 'T1^2+T2^2'")
    p.set_defaults(run=cmd_check_hypo)

    p = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    p.add_argument("--suite", default="all",
                   choices=("all", "kernel", "intertwine", "plancherel", "inversion", "radial", "convolve", "hypo"))
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_help(sys.stderr)
        return EX_USAGE
    try:
        rc = load_run_config(args)
        return args.run(rc, args)
    except UsageError as exc:
        print(f"dunklkit: {exc}", file=sys.stderr)
        return EX_USAGE
    except (ValueError, QuadratureError, ArithmeticError, OSError) as exc:
        print(f"dunklkit: {exc}", file=sys.stderr)
        return EX_DATAERR
    except Exception as exc:  # noqa: BLE001
        print(f"dunklkit: internal error: {exc!r}", file=sys.stderr)
        return EX_SOFTWARE


def run(argv=None) -> int:
    try:
        return main(argv)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
