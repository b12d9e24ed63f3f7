"""Command-line driver.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 kernel error.
Errors are also reported as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import shlex
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .basis import new_basis, verify_basis_properties
from .engine import CEnumeration, Decomposition, decompose, find_uncovered_point, verify_decomposition
from .errors import KernelError, SteinhausError, UsageError
from .group import parse_interval
from .kernel import current_precision_cap, format_rational, parse_rational, precision_cap, to_decimal_string
from .product import (
    ParallelepipedSpec,
    apply_linear_map,
    decompose_box,
    grid_points,
    product_decompose,
    verify_mapped,
    verify_product,
)
from .svg import decomposition_svg, product_svg

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_KERNEL = 0, 1, 2, 3
FORMATS = ("json", "csv", "svg")


@dataclass(frozen=True)
class RunConfig:
    """Everything a ``decompose`` run depends on, in canonical form."""

    epsilon: str
    interval: str
    steps: int
    precision_cap: int
    format: str = "json"

    def __post_init__(self):
        object.__setattr__(self, "epsilon", format_rational(parse_rational(self.epsilon)))
        object.__setattr__(self, "interval", parse_interval(self.interval).to_text())
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}")
        if self.steps < 1:
            raise UsageError("steps must be at least 1")

    def to_text(self) -> str:
        return " ".join(f"{k}={shlex.quote(str(v))}" for k, v in self._items())

    def _items(self):
        return (("epsilon", self.epsilon), ("interval", self.interval), ("steps", self.steps),
                ("precision_cap", self.precision_cap), ("format", self.format))

    @classmethod
    def from_text(cls, text: str) -> RunConfig:
        fields = {}
        for tok in shlex.split(text):
            key, sep, value = tok.partition("=")
            if not sep:
                raise UsageError(f"expected key=value, got {tok!r}")
            fields[key] = value
        try:
            return cls(fields["epsilon"], fields["interval"], int(fields["steps"]),
                       int(fields.get("precision_cap", current_precision_cap())),
                       fields.get("format", "json"))
        except KeyError as e:
            raise UsageError(f"missing field {e.args[0]}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read {path}: {e}") from None


def decomposition_csv(d: Decomposition) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["translate_index", "covered_x_index", "offset_coeffs", "value_approx_50digits"])
    covered = dict(d.coverage_log)
    for j, t in enumerate(d.translates):
        coeffs = ";".join(f"{n}:{m}" for n, m in t.offset.items())
        w.writerow([j, covered.get(j, ""), coeffs, to_decimal_string(t.offset, d.basis, 50)])
    return buf.getvalue()


def cmd_basis(args) -> int:
    basis = new_basis(parse_rational(args.epsilon))
    n_max = args.basis_prefix
    basis.ensure(n_max)
    report = verify_basis_properties(basis, n_max)
    result = {"basis": basis.to_dict(),
              "report": {"passed": report.passed, "checked": report.checked,
                         "failure": report.failure, "index": report.index}}
    _emit(_dump(result), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_decompose(args) -> int:
    cfg = RunConfig(args.epsilon, args.interval, args.steps, current_precision_cap(), args.format)
    d = decompose(parse_interval(cfg.interval), parse_rational(cfg.epsilon), cfg.steps)
    if cfg.format == "json":
        text = _dump(d.to_dict())
    elif args.format == "csv":
        text = decomposition_csv(d)
    else:
        text = decomposition_svg(d, n_basis=args.basis_prefix)
    _emit(text, args.out)
    return EXIT_OK


def _report_dict(report) -> dict:
    return {"passed": report.passed, "checks": report.checks, "failure": report.failure,
            "witness": None if report.witness is None else repr(report.witness)}


def cmd_verify(args) -> int:
    d = Decomposition.from_dict(_load_json(args.file))
    report = verify_decomposition(d, args.points, args.basis_prefix)
    _emit(_dump(_report_dict(report)), args.out)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_witness(args) -> int:
    d = Decomposition.from_dict(_load_json(args.file))
    k = len(d.translates) if args.prefix is None else args.prefix
    g = find_uncovered_point(d.translates[:k], d.J, d.basis)
    result = {"prefix": k, "witness": g.to_dict(),
              "value_approx_50digits": to_decimal_string(g, d.basis, 50)}
    _emit(_dump(result), args.out)
    return EXIT_OK


def _run_product(spec: ParallelepipedSpec, n_points: int, n_basis: int):
    axes = decompose_box(spec)
    prod = product_decompose(axes)
    enums = [CEnumeration(d.J, d.basis) for d in axes]
    box = verify_product(prod.translates, enums, n_points, n_basis)
    T = spec.matrix
    mapped_t = [apply_linear_map(T, t) for t in prod.translates]
    mapped_p = [apply_linear_map(T, p) for p in grid_points(enums, n_points)]
    image = verify_mapped(mapped_t, mapped_p, n_basis)
    return prod, enums, box, image


def cmd_product(args) -> int:
    spec = ParallelepipedSpec.from_dict(_load_json(args.file), args.epsilon, args.steps)
    prod, _, box, image = _run_product(spec, args.points, args.basis_prefix)
    result = {"dimension": spec.dimension, "matrix": spec.matrix.to_json(),
              "product_translates": len(prod.translates),
              "box": _report_dict(box), "image": _report_dict(image),
              "verdicts_agree": box.passed == image.passed}
    _emit(_dump(result), args.out)
    return EXIT_OK if box.passed and image.passed else EXIT_FAIL


def cmd_plot(args) -> int:
    data = _load_json(args.file)
    if "axes" in data:
        spec = ParallelepipedSpec.from_dict(data, args.epsilon, args.steps)
        axes = decompose_box(spec)
        prod = product_decompose(axes)
        enums = [CEnumeration(d.J, d.basis) for d in axes]
        text = product_svg(prod, enums, args.points, spec.matrix)
    else:
        text = decomposition_svg(Decomposition.from_dict(data), n_basis=args.basis_prefix)
    _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steinhaus", description="Exact Steinhaus decompositions")
    parser.add_argument("--version", action="version", version=f"steinhaus {__version__}")
    parser.add_argument("--precision-cap", type=int, default=None,
                        help="bits before comparisons give up (default $STEINHAUS_PRECISION_CAP or 65536)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, epsilon=True, interval=False, steps=False, points=False, prefix=20, fmt=False):
        if epsilon:
            p.add_argument("--epsilon", default="1/20", help="rational, e.g. 1/20")
        if interval:
            p.add_argument("--interval", required=True, help='e.g. "[0,1)" or "[0,g:{0:-7}]"')
        if steps:
            p.add_argument("--steps", type=int, default=50)
        if points:
            p.add_argument("--points", type=int, default=50)
        p.add_argument("--basis-prefix", type=int, default=prefix)
        if fmt:
            p.add_argument("--format", choices=FORMATS, default="json")
        p.add_argument("--out", default=None)

    p = sub.add_parser("basis", help="build a basis and check its windows")
    common(p, prefix=100)
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("decompose", help="run the greedy construction")
    common(p, interval=True, steps=True, fmt=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="re-verify a decomposition JSON file")
    p.add_argument("file")
    common(p, epsilon=False, points=True, prefix=30)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", help="find a point of C outside a decomposition's translates")
    p.add_argument("file")
    p.add_argument("--prefix", type=int, default=None, help="use only the first N translates")
    common(p, epsilon=False)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("product", help="n-D run from a parallelepiped spec file")
    p.add_argument("file")
    common(p, steps=True, points=True, prefix=8)
    p.set_defaults(func=cmd_product, steps=25, points=10)

    p = sub.add_parser("plot", help="SVG of a decomposition file or a 2-D parallelepiped spec")
    p.add_argument("file")
    common(p, steps=True, points=True)
    p.set_defaults(func=cmd_plot, steps=25, points=10)
    return parser


def _error(kind: str, exc: Exception) -> None:
    sys.stderr.write(json.dumps({"error": kind, "type": type(exc).__name__, "message": str(exc)}) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.precision_cap is not None:
            with precision_cap(args.precision_cap):
                return args.func(args)
        return args.func(args)
    except UsageError as e:
        _error("usage", e)
        return EXIT_USAGE
    except (KernelError, SteinhausError) as e:
        _error("kernel", e)
        return EXIT_KERNEL
    except ValueError as e:
        _error("usage", e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
