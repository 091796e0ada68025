"""Command-line front end.

Every subcommand builds a JSON-serialisable report; ``--json PATH`` writes
it (``-`` for stdout) and a short human summary goes to stdout otherwise.
Exit codes: 2 for unreadable input, 3 for math-domain violations, 4 for
series that fail to settle.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from . import linalg_core as lc
from .asymptotics import AsymptoticModel, predict_H_smallr, predict_logF
from .bounds import (DEFAULT_C, SCHUR_SEARCH, TWO_GAUGE, BoundFunction, departure_budget,
                     resolvent_bound, true_resolvent_norm)
from .errors import ParseError, SpecBoundError
from .matrix_io import read_matrix
from .perturbation import spectral_distance_bound, spectral_variation_bound, truncation_certify
from .pseudospectra import inclusion_disks, pseudospectrum_grid
from .weights import EXPLICIT, EXPONENTIAL, parse_weight

C_WARNING = "bound values assume C = {C:g} is a valid constant in the nilpotent power estimate"


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------

def _clean(x):
    """Recursively convert to JSON-safe values; non-finite floats become strings."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_clean(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [_clean(float(x.real)), _clean(float(x.imag))]
    if isinstance(x, (float, np.floating)):
        v = float(x)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return x


def dumps_report(report):
    return json.dumps(_clean(report), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


class Context:
    def __init__(self, args, argv):
        self.args = args
        self.warnings = []
        self.report = {
            "tool": "specbound",
            "tool_version": __version__,
            "command": list(argv),
            "subcommand": args.command,
        }
        if getattr(args, "weight", None) is not None:
            self.weight = parse_weight(args.weight)
            self.report["weight"] = str(self.weight)
            if self.weight.zero_extended:
                self.warn("explicit weight is extended by zeros past its last listed value")
        else:
            self.weight = None
        self.report["dostanic_C"] = args.dostanic_c
        self.report["seed"] = args.seed

    def warn(self, msg):
        if msg not in self.warnings:
            self.warnings.append(msg)

    def c_warning(self):
        self.warn(C_WARNING.format(C=self.args.dostanic_c))

    def bound_function(self):
        return BoundFunction.for_weight(self.weight, self.args.dostanic_c)

    def budget(self, A):
        b = departure_budget(A, self.weight, strategy=self.args.strategy,
                             ordering=self.args.ordering)
        if not b.normal:
            self.warn("departure budgets are upper bounds; ordering search may not attain the infimum")
        return b

    def finish(self):
        self.report["warnings"] = list(self.warnings)
        return self.report


def _load(path):
    return read_matrix(path)


def _budget_dict(b):
    return {
        "nu_upper": b.nu_upper,
        "source": b.source,
        "gauge": b.gauge,
        "schur_gauge": b.schur_gauge,
        "normal": b.normal,
    }


def _parse_complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise ParseError(f"not a complex number: {text!r}", source="--z") from None


def _parse_floats(text, count, flag):
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise ParseError(f"expected {count} comma-separated numbers, got {text!r}", source=flag) from None
    if len(vals) != count:
        raise ParseError(f"expected {count} comma-separated numbers, got {text!r}", source=flag)
    return vals


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_gauge(ctx):
    A = _load(ctx.args.matrix)
    s = lc.singular_values(A)
    n = s.size
    wv = ctx.weight.values(n)
    zt = lc.numerical_zero(s, A.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(s <= zt, 0.0, np.where(wv > 0, s / np.where(wv > 0, wv, 1.0), np.inf))
    g = lc.w_gauge(A, ctx.weight)
    if math.isinf(g):
        ctx.warn("a nonzero singular value meets a zero weight: the matrix is outside the weight class")
    ctx.report.update({
        "shape": list(A.shape),
        "singular_values": s,
        "weights": wv,
        "ratios": ratio,
        "gauge": g,
    })


def _z_points(args):
    pts = [_parse_complex(t) for t in (args.z or [])]
    if args.grid:
        try:
            re0, re1, im0, im1, num = args.grid.split(",")
            num = int(num)
            re0, re1, im0, im1 = map(float, (re0, re1, im0, im1))
        except ValueError:
            raise ParseError(f"--grid expects re0,re1,im0,im1,n, got {args.grid!r}", source="--grid") from None
        re = np.linspace(re0, re1, num)
        im = np.linspace(im0, im1, num)
        pts.extend((re[None, :] + 1j * im[:, None]).ravel().tolist())
    if not pts:
        raise ParseError("no evaluation points: pass --z or --grid", source="resolvent")
    return np.array(pts, dtype=np.complex128)


def cmd_resolvent(ctx):
    A = _load(ctx.args.matrix)
    z = _z_points(ctx.args)
    b = ctx.budget(A)
    bf = ctx.bound_function()
    tol = ctx.args.tolerance if ctx.args.tolerance is not None else lc.default_tol(A)
    vals = resolvent_bound(A, ctx.weight, z, budget=b, bf=bf, tol=tol)
    sigma = lc.eigenvalues(A)
    rows = []
    observed = true_resolvent_norm(A, z) if ctx.args.verify else None
    for i, zi in enumerate(z):
        row = {"z": zi, "distance": float(lc.distance_to_set(zi, sigma)), "bound": float(vals[i])}
        if observed is not None:
            row["observed"] = float(observed[i])
            row["holds"] = bool(observed[i] <= vals[i] * (1 + 1e-12))
        rows.append(row)
    if not b.normal:
        ctx.c_warning()
    ctx.report.update({"spectrum": sigma, "budget": _budget_dict(b), "points": rows})


def cmd_distance(ctx):
    A = _load(ctx.args.matrix_a)
    B = _load(ctx.args.matrix_b)
    bf = ctx.bound_function()
    ba, bb = ctx.budget(A), ctx.budget(B)
    var = spectral_variation_bound(A, B, ctx.weight, bf=bf, budget=ba, verify=ctx.args.verify)
    dist = spectral_distance_bound(A, B, ctx.weight, bf=bf, budgets=(ba, bb),
                                   verify=ctx.args.verify)
    if not (ba.normal and bb.normal):
        ctx.c_warning()
    ctx.report.update({
        "budget_a": _budget_dict(ba),
        "budget_b": _budget_dict(bb),
        "variation": var.to_dict(),
        "distance": dist.to_dict(),
    })


def cmd_pseudo(ctx):
    args = ctx.args
    A = _load(args.matrix)
    eps = args.epsilon
    region = _parse_floats(args.region, 4, "--region")
    grid = pseudospectrum_grid(A, region, args.resolution, eps)
    b = ctx.budget(A)
    disks = inclusion_disks(A, ctx.weight, eps, budget=b, bf=ctx.bound_function())
    z = grid.points
    inner = disks.in_inner(z)
    outer = disks.in_outer(z)
    member = grid.member
    counts = {
        "inside": int(np.sum(member == 1)),
        "outside": int(np.sum(member == 0)),
        "indeterminate": int(np.sum(member == 2)),
    }
    ctx.report.update({
        "epsilon": eps,
        "region": region,
        "resolution": args.resolution,
        "budget": _budget_dict(b),
        "disks": disks.to_dict(),
        "counts": counts,
    })
    if args.verify:
        slack = grid.spacing
        d = lc.distance_to_set(z, disks.centers)
        inner_ok = bool(np.all((member != 0) | (d >= eps - slack)))
        outer_ok = bool(np.all((member != 1) | (d < disks.outer_radius + slack)))
        ctx.report["verify"] = {
            "inner_disks_inside_mask": inner_ok,
            "mask_inside_outer_disks": outer_ok,
            "grid_spacing": slack,
            "inner_nodes": int(inner.sum()),
            "outer_nodes": int(outer.sum()),
        }
        if args.perturbations:
            rng = np.random.default_rng(args.seed)
            n = A.shape[0]
            misses = 0
            for _ in range(args.perturbations):
                E = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
                E *= 0.999 * eps * rng.uniform() / lc.operator_norm(E)
                for mu in np.linalg.eigvals(A + E):
                    near = np.abs(z - mu) <= slack
                    if not np.any(near & (member != 0)):
                        misses += 1
            ctx.report["verify"]["perturbation_trials"] = args.perturbations
            ctx.report["verify"]["perturbed_eigenvalues_outside_mask"] = misses
    if not b.normal:
        ctx.c_warning()
    if args.csv:
        grid.write_csv(args.csv)
        ctx.report["csv"] = args.csv


def cmd_truncate(ctx):
    A = _load(ctx.args.matrix)
    res = truncation_certify(A, ctx.args.k, ctx.weight, dostanic_C=ctx.args.dostanic_c,
                             ordering=ctx.args.ordering, verify=ctx.args.verify,
                             bf=ctx.bound_function())
    if res.certificate.bound_kind != "normal_exact":
        ctx.c_warning()
    ctx.report.update({
        "k": res.k,
        "block_spectrum": res.block_spectrum,
        "centers": res.centers,
        "radius": res.radius,
        "certificate": res.certificate.to_dict(),
    })


def cmd_asym(ctx):
    args = ctx.args
    w = parse_weight(args.family)
    if w.chain:
        raise ParseError("--family takes a plain sl:... or exp:... weight", source="--family")
    if w.kind == EXPLICIT:
        raise ParseError("--family must be sl:p=.. or exp:a=..,alpha=..", source="--family")
    C = args.dostanic_c
    if w.kind == EXPONENTIAL:
        model = AsymptoticModel.exponential(*w.params, dostanic_C=C)
    else:
        model = AsymptoticModel.schatten_lorentz(*w.params, dostanic_C=C)
    bf = model.bound_function
    rows = []
    for r in _parse_list(args.r, "--r"):
        lf = bf.log_F(r)
        pred = predict_logF(model, r)
        rows.append({"r": r, "log_F": lf, "predicted_log_F": pred, "ratio": lf / pred})
    small = []
    for r in _parse_list(args.small_r, "--small-r") if args.small_r else []:
        h = bf.H(r)
        pred = predict_H_smallr(model, r)
        small.append({"r": r, "H": h, "predicted_H": pred, "ratio": h / pred})
    ctx.report.update({"model": model.to_dict(), "large_r": rows, "small_r": small})
    ctx.report["weight"] = str(w)


def _parse_list(text, flag):
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ParseError(f"expected comma-separated numbers, got {text!r}", source=flag) from None
    if any(not v > 0 for v in vals):
        raise ParseError("values must be positive", source=flag)
    return vals


COMMANDS = {
    "gauge": cmd_gauge,
    "resolvent": cmd_resolvent,
    "distance": cmd_distance,
    "pseudo": cmd_pseudo,
    "truncate": cmd_truncate,
    "asym": cmd_asym,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dostanic-c", type=float, default=DEFAULT_C,
                        help="constant C of the nilpotent power estimate (default 2.0)")
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for any random sampling")
    common.add_argument("--verify", action="store_true",
                        help="add oracle observations next to every bound")
    common.add_argument("--json", metavar="PATH", help="write the JSON report ('-' for stdout)")
    common.add_argument("--tolerance", type=float, default=None,
                        help="distance below which a point counts as on the spectrum")
    common.add_argument("--ordering", choices=[lc.SEARCH, lc.MODULUS], default=lc.SEARCH,
                        help="Schur eigenvalue ordering used for departure budgets")
    common.add_argument("--strategy", choices=[SCHUR_SEARCH, TWO_GAUGE], default=SCHUR_SEARCH)

    p = argparse.ArgumentParser(prog="specbound", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"specbound {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gauge", parents=[common], help="singular values against a weight")
    g.add_argument("matrix")
    g.add_argument("--weight", required=True)

    r = sub.add_parser("resolvent", parents=[common], help="resolvent norm bounds")
    r.add_argument("matrix")
    r.add_argument("--weight", required=True)
    r.add_argument("--z", action="append", help="evaluation point, e.g. 1+0.5j (repeatable)")
    r.add_argument("--grid", help="re0,re1,im0,im1,n square grid of points")

    d = sub.add_parser("distance", parents=[common], help="spectral variation and distance")
    d.add_argument("matrix_a")
    d.add_argument("matrix_b")
    d.add_argument("--weight", required=True)

    ps = sub.add_parser("pseudo", parents=[common], help="pseudospectrum grid and inclusion disks")
    ps.add_argument("matrix")
    ps.add_argument("--weight", required=True)
    ps.add_argument("--epsilon", type=float, required=True)
    ps.add_argument("--region", required=True, help="re0,re1,im0,im1")
    ps.add_argument("--resolution", type=int, default=100)
    ps.add_argument("--csv", metavar="PATH", help="write the grid as CSV")
    ps.add_argument("--perturbations", type=int, default=0,
                    help="with --verify: random perturbations whose eigenvalues must land in the mask")

    t = sub.add_parser("truncate", parents=[common], help="leading-block truncation enclosure")
    t.add_argument("matrix")
    t.add_argument("--k", type=int, required=True)
    t.add_argument("--weight", required=True)

    a = sub.add_parser("asym", parents=[common], help="growth of F and decay of H")
    a.add_argument("--family", required=True, help="sl:p=.. or exp:a=..,alpha=..")
    a.add_argument("--r", default="10,100,1000", help="large arguments for log F")
    a.add_argument("--small-r", default="1e-3,1e-6,1e-12", help="small arguments for H")
    return p


def _summary(report):
    lines = [f"specbound {report['tool_version']} {report['subcommand']}"]
    for key, val in report.items():
        if key in ("tool", "tool_version", "command", "subcommand", "warnings"):
            continue
        lines.append(f"{key}: {json.dumps(_clean(val), allow_nan=False)}")
    for wmsg in report.get("warnings", []):
        lines.append(f"warning: {wmsg}")
    return "\n".join(lines) + "\n"


def run(argv=None):
    """Run the CLI and return ``(exit_code, report_or_None)``."""
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        ctx = Context(args, argv)
        COMMANDS[args.command](ctx)
        report = ctx.finish()
    except SpecBoundError as exc:
        print(f"specbound: error: {exc}", file=sys.stderr)
        return exc.exit_code, None
    text = dumps_report(report)
    if args.json == "-":
        sys.stdout.write(text)
    else:
        if args.json:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(text)
        sys.stdout.write(_summary(report))
    return 0, report


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
