"""Command-line front end: ``strichartz <command> ...``.

Exit codes: 0 ok, 1 assertion or check failure, 2 parse or argument error,
3 under-resolved grid (including a time range past the validity horizon).

Every option may also come from a JSON config file (``--config``) whose keys
are the option names with dashes replaced by underscores; explicit flags
take precedence over the file, which takes precedence over the defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import atoms, boundary, estimator, verify, whitney
from ._validation import as_fraction, as_recip, as_sigma, check_dimension, parse_rational_list
from .exceptions import HorizonError, ParseError, StrichartzError, UnderResolvedError
from .exponents import (
    GapRegion,
    Pair,
    Quad,
    acceptable_verdict,
    gap_region,
    local_region_oracle,
    satisfies_global,
    satisfies_local,
    schrodinger_global_necessary,
    schrodinger_local_necessary,
    sharp_admissible_verdict,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_RESOLUTION = 0, 1, 2, 3

DEFAULTS = {
    "out": None,
    "seed": 0,
    "exact": False,
    "assert_": False,
    "quad": None,
    "pair": None,
    "sigma": None,
    "n": None,
    "r": None,
    "rt": None,
    "eps": None,
    "R": None,
    "t": None,
    "eta": None,
    "tolerance": None,
    "space_samples": 8,
    "time_samples": 4,
    "window": "0,8",
    "kmin": -4,
    "kmax": 3,
    "N": None,
    "trials": None,
    "p": "1/2",
    "samples": 64,
    "weight": "1",
    "resolution": 24,
}


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ParseError(message)


def _common(parser: argparse.ArgumentParser) -> None:
    s = argparse.SUPPRESS
    parser.add_argument("--out", default=s, help="output path (file, prefix or directory)")
    parser.add_argument("--seed", type=int, default=s, help="seed for every randomized step")
    parser.add_argument("--exact", action="store_true", default=s, help="emit exact rationals")
    parser.add_argument("--assert", dest="assert_", action="store_true", default=s, help="exit 1 on a negative verdict")
    parser.add_argument("--config", default=s, help="JSON file of option values")


def build_parser() -> argparse.ArgumentParser:
    s = argparse.SUPPRESS
    parser = _ArgumentParser(prog="strichartz", description="Strichartz exponent regions, decompositions and counterexample sweeps.")
    _common(parser)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("region", help="membership verdict for an exponent region")
    p.add_argument("region", choices=["sharp", "acceptable", "local", "global", "nec-local", "nec-global", "gap"])
    p.add_argument("--quad", default=s, help="1/q,1/r,1/qt,1/rt (e.g. 1/2,1/6,1/2,1/6; inf allowed)")
    p.add_argument("--pair", default=s, help="1/q,1/r")
    p.add_argument("--sigma", default=s)
    p.add_argument("--n", default=s)
    p.add_argument("--r", default=s, help="1/r for the gap classifier")
    p.add_argument("--rt", default=s, help="1/rt for the gap classifier")
    _common(p)

    p = sub.add_parser("sweep", help="counterexample slope sweep")
    p.add_argument("family", choices=[f.value for f in estimator.Family])
    p.add_argument("--quad", default=s)
    p.add_argument("--r", default=s, help="bump only: 1/r (the quad becomes 0,1/r,0,0)")
    p.add_argument("--n", default=s)
    p.add_argument("--eps", default=s, help="eps ladder for flash/focusing")
    p.add_argument("--R", default=s, help="R ladder for oscillatory")
    p.add_argument("--t", default=s, help="output times for bump")
    p.add_argument("--eta", default=s)
    p.add_argument("--tolerance", type=float, default=s, help="relative slope tolerance")
    p.add_argument("--space-samples", type=int, default=s)
    p.add_argument("--time-samples", type=int, default=s)
    _common(p)

    p = sub.add_parser("whitney", help="Whitney decomposition tools")
    wsub = p.add_subparsers(dest="action", required=True, parser_class=_ArgumentParser)
    w = wsub.add_parser("export", help="selected squares as CSV")
    w.add_argument("--window", default=s, help="lo,hi")
    w.add_argument("--kmin", type=int, default=s)
    w.add_argument("--kmax", type=int, default=s)
    _common(w)

    p = sub.add_parser("atoms", help="atomic decomposition tools")
    asub = p.add_subparsers(dest="action", required=True, parser_class=_ArgumentParser)
    a = asub.add_parser("demo", help="decompose a random sampled function")
    a.add_argument("--p", default=s, help="1/p")
    a.add_argument("--samples", type=int, default=s)
    a.add_argument("--weight", default=s)
    _common(a)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("suite", choices=list(verify.SUITES))
    p.add_argument("--n", default=s)
    p.add_argument("--N", type=int, default=s)
    p.add_argument("--window", default=s)
    p.add_argument("--kmin", type=int, default=s)
    p.add_argument("--kmax", type=int, default=s)
    p.add_argument("--trials", type=int, default=s)
    _common(p)

    p = sub.add_parser("export-figure", help="region boundaries of a figure")
    p.add_argument("figure", type=int, choices=sorted(boundary.FIGURES))
    p.add_argument("--sigma", default=s)
    p.add_argument("--n", default=s)
    p.add_argument("--resolution", type=int, default=s)
    _common(p)
    return parser


def resolve_options(ns: argparse.Namespace) -> dict:
    """Merge defaults, the config file and explicit flags (in that order)."""
    opts = dict(DEFAULTS)
    explicit = vars(ns)
    if "config" in explicit:
        try:
            config = json.loads(Path(explicit["config"]).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read config {explicit['config']!r}: {exc}") from exc
        if not isinstance(config, dict):
            raise ParseError("config file must hold a JSON object")
        for key, value in config.items():
            key = key.replace("-", "_")
            key = "assert_" if key == "assert" else key
            if key not in opts:
                raise ParseError(f"unknown config key {key!r}")
            opts[key] = value
    opts.update({k: v for k, v in explicit.items() if k != "config"})
    return opts


def _text(value) -> str:
    return value if isinstance(value, str) else json.dumps(value) if isinstance(value, list) else str(value)


def _list(value, *, recip=False) -> list[Fraction]:
    if isinstance(value, list):
        conv = as_recip if recip else as_fraction
        return [conv(v if not isinstance(v, float) else str(v)) for v in value]
    return parse_rational_list(_text(value), recip=recip)


def _quad(value) -> Quad:
    vals = _list(value, recip=True)
    if len(vals) != 4:
        raise ParseError("--quad takes four reciprocals")
    return Quad(*vals)


def _require(opts: dict, key: str, flag: str | None = None):
    if opts.get(key) is None:
        raise ParseError(f"missing required option --{flag or key}")
    return opts[key]


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _emit(opts: dict, text: str) -> None:
    if opts["out"]:
        _write_atomic(Path(opts["out"]), text)
    else:
        sys.stdout.write(text)


def _dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


# -- commands ----------------------------------------------------------------


def cmd_region(opts: dict) -> int:
    region = opts["region"]
    if region == "gap":
        r = as_recip(_text(_require(opts, "r")))
        rt = as_recip(_text(_require(opts, "rt")))
        n = check_dimension(_require(opts, "n"))
        cls = gap_region(r, rt, n)
        report = {"region": "gap", "r": str(r), "rt": str(rt), "n": n, "class": cls.value, "member": cls is GapRegion.COVERED}
        _emit(opts, _dumps(report))
        return EXIT_FAIL if opts["assert_"] and not report["member"] else EXIT_OK

    if region in ("sharp", "acceptable"):
        vals = _list(_require(opts, "pair"), recip=True)
        if len(vals) != 2:
            raise ParseError("--pair takes two reciprocals")
        sigma = as_sigma(_text(_require(opts, "sigma")))
        test = sharp_admissible_verdict if region == "sharp" else acceptable_verdict
        verdict = test(Pair(*vals), sigma)
        report = {"region": region, "pair": [str(v) for v in vals], "sigma": str(sigma), **verdict.to_dict()}
    else:
        quad = _quad(_require(opts, "quad"))
        report = {"region": region, "quad": [str(v) for v in quad]}
        if region.startswith("nec-"):
            n = check_dimension(_require(opts, "n"))
            test = schrodinger_local_necessary if region == "nec-local" else schrodinger_global_necessary
            verdict = test(quad, n)
            report["n"] = n
        else:
            if opts.get("sigma") is None and opts.get("n") is not None:
                sigma = Fraction(check_dimension(opts["n"]), 2)
            else:
                sigma = as_sigma(_text(_require(opts, "sigma")))
            verdict = (satisfies_local if region == "local" else satisfies_global)(quad, sigma)
            report["sigma"] = str(sigma)
            if region == "local":
                report["oracle"] = local_region_oracle(quad, sigma)
        report.update(verdict.to_dict())
    _emit(opts, _dumps(report))
    return EXIT_FAIL if opts["assert_"] and not report["member"] else EXIT_OK


def cmd_sweep(opts: dict) -> int:
    family = estimator.Family(opts["family"])
    if opts.get("quad") is not None:
        quad = _quad(opts["quad"])
    elif family is estimator.Family.BUMP and opts.get("r") is not None:
        quad = Quad(0, as_recip(_text(opts["r"])), 0, 0)
    else:
        raise ParseError("missing required option --quad" + (" (or --r)" if family is estimator.Family.BUMP else ""))
    n = check_dimension(opts["n"] if opts.get("n") is not None else 1, max_dim=2)
    key = {"flash": "eps", "focusing": "eps", "oscillatory": "R", "bump": "t"}[family.value]
    params = _list(opts[key]) if opts.get(key) is not None else None
    res = estimator.Resolution(space=int(opts["space_samples"]), time=int(opts["time_samples"]))
    report = estimator.sweep(
        family,
        quad,
        n,
        params,
        eta=_text(opts["eta"]) if opts.get("eta") is not None else None,
        tolerance=opts.get("tolerance"),
        resolution=res,
    )
    if opts["out"]:
        out = Path(opts["out"])
        stem = out.with_suffix("") if out.suffix in (".json", ".csv") else out
        _write_atomic(stem.with_suffix(".json"), report.to_json())
        _write_atomic(stem.with_suffix(".csv"), report.to_csv())
    else:
        sys.stdout.write(report.to_json())
    return EXIT_OK if report.verdict else EXIT_FAIL


def _window(value) -> whitney.Window:
    vals = _list(value)
    if len(vals) != 2:
        raise ParseError("--window takes lo,hi")
    return whitney.Window(*vals)


def cmd_whitney_export(opts: dict) -> int:
    window = _window(opts["window"])
    squares = whitney.decompose(window, int(opts["kmin"]), int(opts["kmax"]))
    fmt = str if opts["exact"] else (lambda x: f"{float(x):.12g}")
    lines = ["k,i,j,s_lo,s_hi,t_lo,t_hi"]
    for sq in squares:
        k, i, j, *ends = sq.as_row()
        lines.append(",".join([str(k), str(i), str(j)] + [fmt(e) for e in ends]))
    _emit(opts, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_atoms_demo(opts: dict) -> int:
    rng = np.random.default_rng(int(opts["seed"]))
    p = as_recip(_text(opts["p"]))
    size = int(opts["samples"])
    if size < 1:
        raise ParseError("--samples must be positive")
    f = atoms.SampledFunction(rng.standard_cauchy(size), as_fraction(_text(opts["weight"])))
    dec = atoms.decompose(f, p)
    bands = []
    for k in sorted(dec.atoms):
        atom = dec.atoms[k]
        bands.append(
            {
                "k": k,
                "lambda": str(atom.size),
                "support_size": int(len(atom.support)),
                "measure": str(atom.measure),
                "coefficient": dec.coeffs[k],
                "sup_norm": atom.norm(0),
                "sup_bound": 2.0 ** (-k * float(p)),
            }
        )
    recon = float(np.max(np.abs(dec.reconstruct(size, 1) - f.values)))
    report = {
        "p_recip": str(p),
        "samples": size,
        "weight": str(f.weight),
        "seed": int(opts["seed"]),
        "bands": bands,
        "f_norm": f.norm(p),
        "coefficient_norm": dec.coefficient_norm(p),
        "reconstruction_error": recon,
    }
    _emit(opts, _dumps(report))
    ok = recon <= 1e-12 * max(1.0, float(np.max(np.abs(f.values)))) and all(b["sup_norm"] <= b["sup_bound"] * (1 + 1e-12) for b in bands)
    return EXIT_FAIL if opts["assert_"] and not ok else EXIT_OK


def cmd_verify(opts: dict) -> int:
    suite = opts["suite"]
    seed = int(opts["seed"])
    n = check_dimension(opts["n"], max_dim=2) if opts.get("n") is not None else 1
    trials = opts.get("trials")
    if suite == "energy":
        checks = verify.energy(n, int(opts["N"] or 256), int(trials or 100), rng=seed)
    elif suite == "group":
        checks = verify.group(n, int(opts["N"] or 256), int(trials or 20), rng=seed)
    elif suite == "dispersion":
        checks = verify.dispersion(n, opts["N"])
    elif suite == "whitney":
        window = _window(opts["window"])
        checks = verify.whitney_suite(window.lo, window.hi, int(opts["kmin"]), int(opts["kmax"]), int(trials or 20), rng=seed)
    elif suite == "atoms":
        checks = verify.atoms_suite(int(trials or 200), rng=seed)
    else:
        checks = verify.duality(int(trials or 20), rng=seed)
    text = "\n".join(c.line() for c in checks) + "\n"
    if opts["out"]:
        _write_atomic(Path(opts["out"]), _dumps({"suite": suite, "seed": seed, "checks": [c.to_dict() for c in checks]}))
    sys.stdout.write(text)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


def cmd_export_figure(opts: dict) -> int:
    kind, regions = boundary.figure_regions(int(opts["figure"]))
    if kind == "sigma":
        param = as_sigma(_text(opts["sigma"] if opts.get("sigma") is not None else "1"))
    else:
        param = check_dimension(opts["n"] if opts.get("n") is not None else 3)
    res = int(opts["resolution"])
    outputs = {}
    for region in regions:
        verts = boundary.export_region_boundary(region, param, res)
        outputs[region] = boundary.to_exact_json(verts) + "\n" if opts["exact"] else boundary.to_csv(verts)
    ext = ".json" if opts["exact"] else ".csv"
    if opts["out"]:
        outdir = Path(opts["out"])
        for region, text in outputs.items():
            _write_atomic(outdir / f"{region}{ext}", text)
    else:
        for region, text in outputs.items():
            sys.stdout.write(f"# {region}\n{text}")
    return EXIT_OK


def _dispatch(opts: dict) -> int:
    cmd = opts["command"]
    if cmd == "region":
        return cmd_region(opts)
    if cmd == "sweep":
        return cmd_sweep(opts)
    if cmd == "whitney":
        return cmd_whitney_export(opts)
    if cmd == "atoms":
        return cmd_atoms_demo(opts)
    if cmd == "verify":
        return cmd_verify(opts)
    return cmd_export_figure(opts)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        opts = resolve_options(ns)
        return _dispatch(opts)
    except UnderResolvedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION
    except HorizonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOLUTION
    except (ParseError, StrichartzError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
