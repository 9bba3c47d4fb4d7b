"""JSON command-line front end.

Every command reads one JSON document (a file path, inline JSON, or ``-`` for
stdin) and writes one JSON document to stdout.  Exit codes: 0 success,
1 domain error (error JSON on stdout), 2 usage error or malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .extgrp import (
    ExtClassCoords,
    ext_strong,
    ext_weak,
    extension_k_invariant,
    toeplitz_class,
)
from .fgab import (
    DEFAULT_RANK_BOUND,
    DEFAULT_TORSION_BOUND,
    BoundExceeded,
    IntMatrix,
    invariant_factors,
    smith_normal_form,
)
from .kinv import KInvariant, cone_of_unit, cuntz_invariant, cuntz_krieger_invariant, standard_model
from .kkuct import dual_invariant, kk_group
from .strongdual import (
    ExtensionDatum,
    NoSolutionWithinBounds,
    matsumoto_pair,
    solve_dual_extension,
    verify_strong_duality,
)

COMMANDS = (
    "snf", "kgroups", "dual", "kk", "ext", "ext-strong", "cone",
    "extension", "check-duality", "solve-dual", "matsumoto",
)


class UsageError(Exception):
    pass


@dataclass
class JobSpec:
    command: str
    input: object
    options: dict = field(default_factory=dict)

    @property
    def bounds(self) -> tuple[int, int]:
        b = self.options.get("bounds")
        if b is None:
            return DEFAULT_TORSION_BOUND, DEFAULT_RANK_BOUND
        if isinstance(b, str):
            b = parse_bounds(b)
        return int(b[0]), int(b[1])

    def epsilon(self) -> int:
        eps = self.options.get("epsilon")
        if eps is None:
            raise UsageError(f"{self.command} needs --epsilon")
        eps = int(eps)
        if eps not in (1, -1):
            raise UsageError(f"epsilon must be +1 or -1, got {eps}")
        return eps


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------


def parse_bounds(text: str) -> tuple[int, int]:
    try:
        t, r = (int(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--iso-bounds expects <torsion>,<rank>, got {text!r}") from None
    return t, r


def read_input(arg: str):
    if arg == "-":
        text = sys.stdin.read()
    elif os.path.isfile(arg):
        with open(arg) as fh:
            text = fh.read()
    else:
        text = arg
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc}") from None


def parse_matrix(obj) -> IntMatrix:
    if isinstance(obj, dict) and "matrix" in obj:
        obj = obj["matrix"]
    return IntMatrix.from_json(obj)


def parse_algebra(obj) -> KInvariant:
    """{"cuntz": n}, {"cuntz_krieger": matrix}, or a KInvariant document."""
    if isinstance(obj, dict) and "cuntz" in obj:
        return cuntz_invariant(int(obj["cuntz"]))
    if isinstance(obj, dict) and "cuntz_krieger" in obj:
        return cuntz_krieger_invariant(IntMatrix.from_json(obj["cuntz_krieger"]))
    if isinstance(obj, dict) and "k0" in obj:
        return KInvariant.from_json(obj)
    raise UsageError("algebra input must have one of the keys cuntz, cuntz_krieger, k0")


def parse_datum(obj) -> ExtensionDatum:
    """{"base": algebra, "class": coords | {"hom", "ext"} | "toeplitz"}."""
    if not isinstance(obj, dict) or "base" not in obj:
        raise UsageError("extension datum needs a base")
    raw = obj.get("class", 0)
    if raw == "toeplitz":
        base = obj["base"]
        if isinstance(base, dict) and "cuntz" in base:
            mat = IntMatrix.from_rows([[int(base["cuntz"])]])
        elif isinstance(base, dict) and "cuntz_krieger" in base:
            mat = IntMatrix.from_json(base["cuntz_krieger"])
        else:
            raise UsageError("the toeplitz class needs a cuntz or cuntz_krieger base")
        cls = toeplitz_class(mat)
        return ExtensionDatum.from_class(cls.base, cls)
    a = parse_algebra(obj["base"])
    if raw == 0:
        raw = [0] * ext_strong(a).group.ngens
    return ExtensionDatum.from_class(a, ExtClassCoords.from_json(a, raw))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _snf(job: JobSpec):
    m = parse_matrix(job.input)
    u, d, v = smith_normal_form(m)
    return {"U": u.to_json(), "D": d.to_json(), "V": v.to_json(),
            "invariant_factors": list(invariant_factors(m))}


def _kgroups(job: JobSpec):
    x = parse_algebra(job.input)
    return {"invariant": x.to_json(), "model": standard_model(x).describe()}


def _dual(job: JobSpec):
    return dual_invariant(parse_algebra(job.input)).to_json()


def _kk(job: JobSpec):
    obj = job.input
    if not isinstance(obj, dict) or "a" not in obj or "b" not in obj:
        raise UsageError("kk input needs keys a and b")
    degree = int(job.options.get("degree", 0))
    if degree not in (0, 1):
        raise UsageError(f"degree must be 0 or 1, got {degree}")
    return kk_group(parse_algebra(obj["a"]), parse_algebra(obj["b"]), degree).to_json()


def _ext(job: JobSpec):
    return {"group": ext_weak(parse_algebra(job.input)).to_json()}


def _ext_strong(job: JobSpec):
    return ext_strong(parse_algebra(job.input)).to_json()


def _cone(job: JobSpec):
    c = cone_of_unit(parse_algebra(job.input))
    return {"k0": c.k0.to_json(), "k1": c.k1.to_json(), "unit_order": c.unit_order,
            "e_u": c.e_u.matrix.to_json()}


def _extension(job: JobSpec):
    d = parse_datum(job.input)
    return {"class": d.cls.to_json(),
            "e_inv": extension_k_invariant(d.base, d.cls).to_json()}


def _check_duality(job: JobSpec):
    obj = job.input
    if not isinstance(obj, dict) or "E" not in obj or "F" not in obj:
        raise UsageError("check-duality input needs keys E and F")
    e, f = parse_datum(obj["E"]), parse_datum(obj["F"])
    return verify_strong_duality(e, f, job.epsilon(), *job.bounds).to_json()


def _solve_dual(job: JobSpec):
    eps = job.epsilon()
    return solve_dual_extension(parse_datum(job.input), eps, *job.bounds).to_json()


def _matsumoto(job: JobSpec):
    e, f, report = matsumoto_pair(parse_matrix(job.input), *job.bounds)
    return {"E": e.to_json(), "F": f.to_json(), "report": report.to_json()}


HANDLERS = {
    "snf": _snf,
    "kgroups": _kgroups,
    "dual": _dual,
    "kk": _kk,
    "ext": _ext,
    "ext-strong": _ext_strong,
    "cone": _cone,
    "extension": _extension,
    "check-duality": _check_duality,
    "solve-dual": _solve_dual,
    "matsumoto": _matsumoto,
}


def run(job: JobSpec) -> tuple[int, dict]:
    """Dispatch one job; returns (exit code, JSON-ready document)."""
    if job.command not in HANDLERS:
        return 2, {"error": "usage", "message": f"unknown command {job.command!r}"}
    try:
        return 0, HANDLERS[job.command](job)
    except UsageError as exc:
        return 2, {"error": "usage", "message": str(exc)}
    except (BoundExceeded, NoSolutionWithinBounds) as exc:
        return 1, {"error": type(exc).__name__, "message": str(exc),
                   "torsion_bound": exc.torsion_bound, "rank_bound": exc.rank_bound}
    except (KeyError, TypeError) as exc:
        return 2, {"error": "usage", "message": f"malformed input: {exc!r}"}
    except (ValueError, ArithmeticError) as exc:
        return 1, {"error": type(exc).__name__, "message": str(exc)}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def _job_from_json(obj, defaults: dict) -> JobSpec:
    if not isinstance(obj, dict) or "command" not in obj:
        return JobSpec("", None)
    opts = dict(defaults)
    opts.update(obj.get("options", {}))
    return JobSpec(obj["command"], obj.get("input"), opts)


def run_batch(jobs: list, defaults: dict, workers: int | None = None) -> tuple[int, list]:
    specs = [_job_from_json(j, defaults) for j in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(run, specs))
    code = max((c for c, _ in results), default=0)
    return code, [{"exit": c, "result": r} if c == 0 else {"exit": c, **r} for c, r in results]


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand from overwriting flags given before it
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--epsilon", choices=["+1", "-1", "1"], help="sign for duality commands")
    common.add_argument("--degree", type=int, choices=[0, 1], help="KK degree (default 0)")
    common.add_argument("--iso-bounds", metavar="T,R",
                        help=f"pointed-isomorphism bounds (default {DEFAULT_TORSION_BOUND},"
                             f"{DEFAULT_RANK_BOUND})")

    parser = argparse.ArgumentParser(prog="kdual", description=__doc__.splitlines()[0],
                                     parents=[common])
    parser.add_argument("--batch", metavar="INPUT",
                        help="JSON array of {command, input, options} jobs")
    sub = parser.add_subparsers(dest="command")
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("input", help="path, inline JSON, or - for stdin")
    return parser


def _options(ns) -> dict:
    opts = {}
    if "degree" in ns:
        opts["degree"] = ns.degree
    if "epsilon" in ns:
        opts["epsilon"] = int(ns.epsilon)
    if "iso_bounds" in ns:
        opts["bounds"] = parse_bounds(ns.iso_bounds)
    return opts


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        opts = _options(ns)
        if ns.batch is not None:
            jobs = read_input(ns.batch)
            if not isinstance(jobs, list):
                raise UsageError("--batch expects a JSON array")
            code, out = run_batch(jobs, opts)
        elif ns.command is None:
            parser.print_usage(sys.stderr)
            return 2
        else:
            code, out = run(JobSpec(ns.command, read_input(ns.input), opts))
    except UsageError as exc:
        code, out = 2, {"error": "usage", "message": str(exc)}
    print(dumps(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
