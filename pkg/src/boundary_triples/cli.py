"""Command-line front end.

Commands: ``spectrum``, ``verify``, ``dtn-export``, ``krein-demo`` and
``counterexample``.  Exit codes: 0 success, 1 verification failure,
2 usage error, 3 model error.

Boundary conditions are given with ``--theta``:

* ``dirichlet``      trace0 f = 0
* ``neumann``        trace1 f = 0
* ``robin:A``        trace1 f = A trace0 f (A real or complex, e.g. ``robin:-2``)
* ``kvn:ETA``        the extension with parameter 0 in the regularized triple at ETA
* ``relation:FILE``  ``(trace0 f, trace1 f)`` in the relation stored in FILE

Negative ranges need the ``=`` form: ``--range=-5:-1``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import extensions as ext
from . import models
from . import relations as rel
from . import triple_core as core
from .errors import BoundaryTripleError, ModelError, PoleProximityError, ScaleDegenerateError

log = logging.getLogger("boundary_triples")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_MODEL = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    model: str = "interval"
    modes: int = 8
    quad: int = 0  # 0 selects the model default
    mode_list: Optional[list] = None
    eta: Optional[float] = None
    theta: str = "dirichlet"
    range: tuple = (0.0, 50.0)
    grid: int = 400
    tol: float = 1e-8
    seed: int = 0
    out: Optional[str] = None
    format: str = "json"
    lam: complex = complex(-1.0, 0.5)
    imag: float = 0.0
    sizes: list = field(default_factory=lambda: [4, 8, 12, 16])
    fault: Optional[str] = None

    def to_dict(self):
        d = asdict(self)
        d["range"] = list(self.range)
        d["lam"] = [self.lam.real, self.lam.imag]
        return d

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["range"] = tuple(d["range"])
        d["lam"] = complex(*d["lam"])
        return cls(**d)


# --- parsing -------------------------------------------------------------------------


def parse_range(text):
    try:
        a, b = text.split(":")
        a, b = float(a), float(b)
    except ValueError as exc:
        raise UsageError(f"range must look like A:B, got {text!r}") from exc
    if not (math.isfinite(a) and math.isfinite(b)) or b <= a:
        raise UsageError(f"range {text!r} is empty")
    return a, b


def parse_int_list(text):
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc
    if not vals:
        raise UsageError("empty integer list")
    return vals


def parse_complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise UsageError(f"not a complex number: {text!r}") from exc


def parse_theta(text):
    """Split a boundary-condition spec into ``(kind, argument)``."""
    kind, _, arg = text.partition(":")
    if kind in ("dirichlet", "neumann"):
        if arg:
            raise UsageError(f"{kind} takes no argument")
        return kind, None
    if kind in ("robin", "kvn"):
        if not arg:
            raise UsageError(f"{kind} needs a value, e.g. {kind}:1")
        return kind, parse_complex(arg) if kind == "robin" else float(parse_complex(arg).real)
    if kind == "relation":
        if not arg:
            raise UsageError("relation needs a file name")
        return kind, arg
    raise UsageError(f"unknown boundary condition {text!r}")


def build_model(cfg):
    if cfg.model == "interval":
        return models.IntervalModel(quad_size=cfg.quad or 512, eta=-1.0 if cfg.eta is None else cfg.eta)
    if cfg.model == "disk":
        return models.DiskModel(
            modes=cfg.modes,
            radial_quad=cfg.quad or 128,
            eta=-1.0 if cfg.eta is None else cfg.eta,
            mode_list=cfg.mode_list,
        )
    if cfg.model == "counterexample":
        return models.make_counterexample(cfg.modes)
    raise ModelError(f"unknown model {cfg.model!r}")


def build_handle(model, theta_spec, eta=None):
    kind, arg = parse_theta(theta_spec)
    g = model.boundary_dim
    if kind == "kvn":
        handle, _ = ext.krein_von_neumann(model, eta=arg)
        return handle
    if kind == "dirichlet":
        vartheta = rel.multivalued(g)
    elif kind == "neumann":
        vartheta = rel.graph(np.zeros((g, g)))
    elif kind == "robin":
        vartheta = models.robin_parameter(model, arg)
    else:
        try:
            vartheta = rel.load_relation(arg)
        except OSError as exc:
            raise UsageError(f"cannot read relation file: {exc}") from exc
    return ext.from_vartheta(model, vartheta, eta=eta)


class _FlippedTrace1:
    """Wrapper that negates trace1; the verify suite must catch it."""

    def __init__(self, model):
        self._model = model

    def __getattr__(self, name):
        return getattr(self._model, name)

    def trace1(self, f):
        return -self._model.trace1(f)


# --- commands ------------------------------------------------------------------------


def cmd_spectrum(cfg):
    model = build_model(cfg)
    handle = build_handle(model, cfg.theta, cfg.eta)
    a, b = cfg.range
    found = ext.eigenvalues_in(handle, a, b, grid=cfg.grid)
    rows = []
    for e in found:
        caveats = [ext.TRUNCATION_CAVEAT] + ([e.tag] if e.tag else [])
        rows.append({"lambda": e.value, "multiplicity": e.multiplicity, "kernel_dim": int(e.kernel.shape[1]), "caveats": caveats})
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["lambda", "multiplicity", "kernel_dim", "tag"])
        for e in found:
            w.writerow([repr(e.value), e.multiplicity, e.kernel.shape[1], e.tag])
        return EXIT_OK, buf.getvalue()
    report = {
        "model": model.describe(),
        "theta": cfg.theta,
        "range": list(cfg.range),
        "hypotheses": handle.hypotheses,
        "eigenvalues": rows,
    }
    return EXIT_OK, json.dumps(report, indent=2)


def _random_relation(rng, g):
    d = int(rng.integers(0, 2 * g + 1))
    v = rng.standard_normal((2 * g, d)) + 1j * rng.standard_normal((2 * g, d))
    return rel.make_relation(v, g)


def relation_axiom_failures(rng, count, g=3, tol=1e-9):
    """Number of random relations violating an adjoint/inverse identity at ``tol``."""
    bad = 0
    for _ in range(count):
        r = _random_relation(rng, g)
        bad += max(rel.axiom_residuals(r).values()) > tol
    return bad


def _gamma_field_residual(model, lam):
    gm = core.gamma_field(model, lam)
    eye = np.eye(model.boundary_dim)
    dirichlet = np.linalg.norm(model.trace0(gm) - eye) / math.sqrt(model.boundary_dim)
    interior = np.max(model.norm(model.apply_T(gm) - lam * gm) / np.maximum(model.norm(gm), 1e-300))
    return float(max(dirichlet, interior))


def _regularization_rank(triple, model):
    eye = np.eye(model.dim, dtype=complex)
    ups = np.vstack([triple.ups0(eye), triple.ups1(eye)])
    s = np.linalg.svd(ups, compute_uv=False)
    return int(np.count_nonzero(s > 1e-10 * s[0]))


def cmd_verify(cfg):
    model = build_model(cfg)
    if cfg.fault == "flip-trace1":
        model = _FlippedTrace1(model)
    rng = np.random.default_rng(cfg.seed)
    checks, warnings = [], []

    def record(name, value, tol, passed=None):
        passed = bool(value <= tol) if passed is None else bool(passed)
        checks.append({"name": name, "value": float(value), "tol": float(tol), "passed": passed})

    record("green_identity", core.check_green(model, rng=rng), 1e-9)
    shift = 0.5 * max(1.0, abs(model.eta))
    pts = [complex(model.eta + shift * rng.standard_normal(), rng.uniform(0.5, 3.0) * rng.choice([-1, 1])) for _ in range(4)]
    worst_mg = worst_conj = 0.0
    for lam in pts:
        mu = complex(model.eta + shift * rng.standard_normal(), rng.uniform(0.5, 3.0))
        r = core.weyl_identity_residual(model, lam, mu)
        worst_mg, worst_conj = max(worst_mg, r["difference"]), max(worst_conj, r["conjugate"])
    record("weyl_difference_identity", worst_mg, 1e-8)
    record("weyl_conjugation", worst_conj, 1e-8)
    record("gamma_field", max(_gamma_field_residual(model, lam) for lam in pts), 1e-8)
    try:
        scale = core.gelfand_scale(model)
    except ScaleDegenerateError as exc:
        warnings.append(f"Lambda degenerate: {exc}")
        scale = None
    if scale is not None:
        # the PDE models have condition of order g; much more means the scale degenerates
        if scale.condition > 10 * model.boundary_dim:
            warnings.append(f"Lambda ill-conditioned (condition {scale.condition:.3e}, boundary dimension {model.boundary_dim})")
        triple = core.regularize(model, scale)
        g = model.boundary_dim
        rank = _regularization_rank(triple, model)
        record("regularization_rank_defect", 2 * g - rank, 0)
        handle = ext.from_vartheta(model, models.robin_parameter(model, 1.0), scale=scale)
        f = model.sample_functions(rng, 3)
        worst = 0.0
        for lam in pts:
            try:
                out = ext.krein_resolvent(handle, lam, f)
            except BoundaryTripleError as exc:
                warnings.append(f"krein skipped at {lam}: {exc}")
                continue
            r = ext.krein_residual(handle, lam, f, out)
            worst = max(worst, r["interior"], r["boundary"])
        record("krein_residual", worst, 1e-6)
    record("relation_axiom_failures", relation_axiom_failures(rng, 100), 0)
    passed = all(c["passed"] for c in checks)
    report = {"model": model.describe(), "seed": cfg.seed, "checks": checks, "warnings": warnings, "passed": passed}
    return (EXIT_OK if passed else EXIT_FAIL), json.dumps(report, indent=2)


def cmd_dtn_export(cfg):
    model = build_model(cfg)
    a, b = cfg.range
    if cfg.grid < 1:
        raise UsageError("empty grid")
    lams = np.linspace(a, b, cfg.grid) if cfg.grid > 1 else np.array([a])
    g = model.boundary_dim
    header = ["lambda_re", "lambda_im"]
    for i in range(g):
        for j in range(g):
            header += [f"m{i}{j}_re", f"m{i}{j}_im"]
    rows, skipped = [], []
    for x in lams:
        lam = complex(x, cfg.imag)
        try:
            m = core.weyl(model, lam).matrix
        except PoleProximityError:
            skipped.append(float(x))
            continue
        row = [lam.real, lam.imag]
        for v in m.ravel():
            row += [v.real, v.imag]
        rows.append(row)
    if skipped:
        log.warning("skipped %d grid points next to Dirichlet eigenvalues", len(skipped))
    if cfg.format == "json":
        return EXIT_OK, json.dumps({"columns": header, "rows": rows, "skipped": skipped})
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(v)) for v in r])
    return EXIT_OK, buf.getvalue()


def cmd_krein_demo(cfg):
    model = build_model(cfg)
    handle = build_handle(model, cfg.theta, cfg.eta)
    rng = np.random.default_rng(cfg.seed)
    f = model.sample_functions(rng, 5)
    out = ext.krein_resolvent(handle, cfg.lam, f)
    res = ext.krein_residual(handle, cfg.lam, f, out)
    point = ext.classify_point(handle, cfg.lam)
    passed = max(res.values()) <= max(cfg.tol, 1e-6)
    report = {
        "model": model.describe(),
        "theta": cfg.theta,
        "lambda": [cfg.lam.real, cfg.lam.imag],
        "point": point.to_dict(),
        "residuals": res,
        "passed": passed,
    }
    return (EXIT_OK if passed else EXIT_FAIL), json.dumps(report, indent=2)


def cmd_counterexample(cfg):
    sizes = sorted(cfg.sizes)
    trace = models.counterexample_truncation(sizes)
    rng = np.random.default_rng(cfg.seed)
    green = [core.check_green(models.make_counterexample(n), rng=rng) for n, _ in trace]
    sig = [s for _, s in trace]
    decreasing = all(y < x for x, y in zip(sig[:-1], sig[1:]))
    report = {
        "trace": [{"N": n, "sigma_min": s, "green_residual": gr} for (n, s), gr in zip(trace, green)],
        "strictly_decreasing": decreasing,
        "bound_holds": all(s <= 4.0 * 2.0 ** (-n) for n, s in trace),
    }
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["N", "sigma_min", "green_residual"])
        for row in report["trace"]:
            w.writerow([row["N"], repr(row["sigma_min"]), repr(row["green_residual"])])
        return EXIT_OK, buf.getvalue()
    return EXIT_OK, json.dumps(report, indent=2)


COMMANDS = {
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "dtn-export": cmd_dtn_export,
    "krein-demo": cmd_krein_demo,
    "counterexample": cmd_counterexample,
}


def _parser():
    p = argparse.ArgumentParser(prog="boundary-triples", description="Extensions of symmetric operators via quasi boundary triples.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", help="model configuration JSON file")
    p.add_argument("--model", choices=["interval", "disk", "counterexample"], default=None)
    p.add_argument("--modes", type=int, default=None, help="disk: |n| <= MODES; counterexample: truncation size")
    p.add_argument("--mode-list", default=None, help="disk: explicit comma-separated Fourier modes")
    p.add_argument("--quad", type=int, default=None, help="quadrature nodes")
    p.add_argument("--eta", type=float, default=None, help="real regular point of the regularized triple")
    p.add_argument("--theta", default="dirichlet", help="dirichlet | neumann | robin:A | kvn:ETA | relation:FILE")
    p.add_argument("--range", default=None, help="A:B")
    p.add_argument("--grid", type=int, default=None, help="scan points (spectrum) or grid size (dtn-export)")
    p.add_argument("--tol", type=float, default=1e-8, help="residual threshold for krein-demo (floored at 1e-6)")
    p.add_argument("--seed", type=int, default=0, help="seed for random test functions")
    p.add_argument("--out", default=None, help="write output to this file")
    p.add_argument("--format", choices=["json", "csv"], default=None)
    p.add_argument("--lam", default="-1+0.5j", help="spectral parameter for krein-demo")
    p.add_argument("--imag", type=float, default=0.0, help="imaginary part of the dtn-export grid")
    p.add_argument("--sizes", default="4,8,12,16", help="counterexample truncation sizes")
    p.add_argument("--fault", choices=["flip-trace1"], default=None, help=argparse.SUPPRESS)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args):
    defaults = {"spectrum": ((0.0, 50.0), 400, "json"), "dtn-export": ((-5.0, -1.0), 5, "csv")}
    rng_default, grid_default, fmt_default = defaults.get(args.command, ((0.0, 50.0), 400, "json"))
    file_cfg = {}
    if args.config:
        try:
            with open(args.config) as fh:
                file_cfg = json.load(fh)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
    model = args.model or file_cfg.get("model", "interval")
    modes = args.modes if args.modes is not None else int(file_cfg.get("modes", 4 if model == "counterexample" else 8))
    quad = args.quad if args.quad is not None else int(file_cfg.get("quad", 0))
    if modes < 0 or quad < 0:
        raise UsageError("modes and quad must be non-negative")
    return RunConfig(
        command=args.command,
        model=model,
        modes=modes,
        quad=quad,
        mode_list=parse_int_list(args.mode_list) if args.mode_list else None,
        eta=args.eta,
        theta=args.theta,
        range=parse_range(args.range) if args.range else rng_default,
        grid=args.grid if args.grid is not None else grid_default,
        tol=args.tol,
        seed=args.seed,
        out=args.out,
        format=args.format or fmt_default,
        lam=parse_complex(args.lam),
        imag=args.imag,
        sizes=parse_int_list(args.sizes),
        fault=args.fault,
    )


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(args)
        if cfg.command in ("spectrum", "krein-demo"):
            parse_theta(cfg.theta)
        code, text = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoundaryTripleError as exc:
        print(f"model error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_MODEL
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
