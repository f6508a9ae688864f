"""Command-line front end.

    multijoints generate monkey-bar --n 3 --d 2 --field prime:101 -o grid.txt
    multijoints colour grid.txt --m 2 -o grid.col
    multijoints verify grid.txt grid.col
    multijoints oracle grid.txt
    multijoints multijoints grid.txt --count
    multijoints generic-check grid.txt

Exit codes: 0 success/valid, 1 usage or parse error, 2 non-generic
instance, 3 certificate produced, 4 verification failed.

Budgets come from the environment: MULTIJOINTS_REJECTION_BUDGET (random
generator attempts) and MULTIJOINTS_ITERATION_CAP (recolourings allowed per
insertion; default is the theoretical bound).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import formats
from .colouring import (
    Colouring,
    ColouringError,
    NonGenericError,
    colour_auto,
    colour_multijoints,
    colouring_to_density,
    max_own_colour_counts,
    saturated_line,
    trivial_extra_colour,
    verify_density,
)
from .field import FieldError, PrimeField, parse_field
from .generators import (
    DEFAULT_REJECTION_BUDGET,
    GenerationError,
    monkey_bar,
    random_generic_instance,
    tricolour_necessity,
)
from .geometry import InstanceError, format_point, genericity_violation, multijoints
from .oracle import OracleTooLarge, brute_force_min_saturation, verify_certificate
from .planar import planar_bound, two_colour_bijoints

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NON_GENERIC = 2
EXIT_CERTIFICATE = 3
EXIT_INVALID = 4

CSV_COLUMNS = ["instance", "algorithm", "status", "points", "d", "m_used", "max_own_colour", "advances", "ratio"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env_int(name: str, default: int | None) -> int | None:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _report(pairs: list[tuple[str, object]]):
    for key, value in pairs:
        print(f"{key}: {value}")


def cmd_generate(args) -> int:
    fld = parse_field(args.field)
    if args.kind == "monkey-bar":
        inst = monkey_bar(args.n, args.d, fld)
    elif args.kind == "tricolour":
        inst = tricolour_necessity(args.n, fld)
    else:
        if not isinstance(fld, PrimeField):
            raise UsageError("random instances need a prime field")
        budget = _env_int("MULTIJOINTS_REJECTION_BUDGET", DEFAULT_REJECTION_BUDGET)
        inst = random_generic_instance(args.seed, args.d, fld, args.lines_per_family, budget)
    _emit(formats.dump_instance(inst), args.out)
    return EXIT_OK


def _ratio(m: int, n: int, d: int) -> str:
    return f"{m / n ** (1.0 / d):.4f}" if n else "nan"


def cmd_colour(args) -> int:
    inst = formats.load_instance(_read(args.instance))
    points = inst.point_set()
    d = inst.dimension
    cap = _env_int("MULTIJOINTS_ITERATION_CAP", None)
    fields: dict[str, object] = {"instance": args.instance, "algorithm": args.algo, "points": len(points), "d": d}

    if args.algo == "trivial":
        assignment = trivial_extra_colour(points, d)
        _emit(formats.dump_colouring(inst.field, d, assignment, m=0, algorithm="trivial"), args.out)
        fields.update(status="baseline", m_used=0, max_own_colour=",".join("0" * d), advances=0, ratio="0.0000")
        fields["note"] = f"every point gets colour {d + 1}; not a {d}-colouring"
        return _finish_colour(args, fields, EXIT_OK)

    witness = genericity_violation(inst)
    if witness is not None:
        x, lines = witness
        print(f"non-generic instance: lines {[str(l) for l in lines]} meet at {format_point(x)}", file=sys.stderr)
        return EXIT_NON_GENERIC

    if args.algo == "planar":
        if args.m is not None:
            raise UsageError("--m does not apply to the planar algorithm")
        colouring = two_colour_bijoints(inst, points)
        m_used, advances = planar_bound(len(points)), 0
    else:
        if args.m is None:
            run = colour_auto(points, inst, cap=cap)
        else:
            run = colour_multijoints(points, inst, args.m, check_generic=False, cap=cap)
        if not run.ok:
            _emit(formats.dump_certificate(run.certificate, inst.field), args.out)
            fields.update(status="certificate", m_used=run.m, max_own_colour="", advances=run.advances, ratio="")
            fields["failed_at"] = format_point(run.failed_at)
            fields["certificate_points"] = len(run.certificate.jbar)
            fields["certificate_lines"] = len(run.certificate.lbar)
            return _finish_colour(args, fields, EXIT_CERTIFICATE)
        colouring, m_used, advances = run.colouring, run.m, run.advances

    max_own = max_own_colour_counts(inst, colouring)
    _emit(
        formats.dump_colouring(inst.field, d, colouring, m=m_used, max_own=max_own, advances=advances, algorithm=args.algo),
        args.out,
    )
    fields.update(
        status="ok",
        m_used=m_used,
        max_own_colour=",".join(map(str, max_own)),
        advances=advances,
        ratio=_ratio(m_used, len(points), d),
    )
    return _finish_colour(args, fields, EXIT_OK)


def _finish_colour(args, fields: dict, code: int) -> int:
    # with the document on stdout the report goes to stderr
    stream = sys.stderr if args.out in (None, "-") else sys.stdout
    if args.csv:
        print(",".join(str(fields.get(c, "")) for c in CSV_COLUMNS), file=stream)
    else:
        for key, value in fields.items():
            print(f"{key}: {value}", file=stream)
    return code


def _verify_colouring(inst, doc: formats.ColouringFile, m: int | None) -> int:
    if doc.field != inst.field or doc.dimension != inst.dimension:
        raise UsageError("colouring and instance disagree on field or dimension")
    points = inst.point_set()
    if set(doc.assignment) != set(points):
        raise UsageError(
            f"colouring covers {len(doc.assignment)} points, instance has {len(points)}; point sets differ"
        )
    if m is None:
        m = doc.m
    if m is None:
        raise UsageError("no m given and the colouring has no 'm' trailer")
    try:
        colouring = Colouring(doc.assignment, inst.dimension)
    except ColouringError as exc:
        _report([("valid", "no"), ("reason", exc)])
        return EXIT_INVALID
    witness = saturated_line(inst, colouring, m)
    density = verify_density(colouring_to_density(colouring), points, inst, inst.dimension * m)
    pairs = [("m", m), ("unsaturated", "yes" if witness is None else "no")]
    if witness is not None:
        j, line, count = witness
        pairs.append(("witness", f"{line} carries {count} points of colour {j}"))
    pairs.append(("density", "yes" if density.ok else "no"))
    ok = witness is None and density.ok
    pairs.append(("valid", "yes" if ok else "no"))
    _report(pairs)
    return EXIT_OK if ok else EXIT_INVALID


def _verify_certificate(inst, text: str, m: int | None) -> int:
    cert, fld = formats.load_certificate(text)
    if fld != inst.field or cert.d != inst.dimension:
        raise UsageError("certificate and instance disagree on field or dimension")
    known = {l: l.family for l in inst.lines}
    for l in cert.lbar:
        if known.get(l) != l.family:
            raise UsageError(f"certificate line {l} is not a line of that family in the instance")
    universe = set(inst.point_set())
    for x in cert.jbar:
        if x not in universe:
            raise UsageError(f"certificate point {format_point(x)} is not in the instance's point set")
    if m is not None:
        cert = type(cert)(jbar=cert.jbar, lbar=cert.lbar, m=m, d=cert.d)
    check = verify_certificate(cert)
    pairs = [("m", cert.m), ("points", len(cert.jbar)), ("lines", len(cert.lbar)), ("valid", "yes" if check else "no")]
    if not check:
        pairs += [("hypothesis", check.hypothesis), ("reason", check.detail)]
    _report(pairs)
    return EXIT_OK if check else EXIT_INVALID


def cmd_verify(args) -> int:
    inst = formats.load_instance(_read(args.instance))
    text = _read(args.document)
    kind = formats.document_kind(text)
    if kind == "colouring":
        return _verify_colouring(inst, formats.load_colouring(text), args.m)
    if kind == "certificate":
        return _verify_certificate(inst, text, args.m)
    raise UsageError(f"cannot verify a document of kind {kind!r}")


def cmd_oracle(args) -> int:
    inst = formats.load_instance(_read(args.instance))
    points = inst.point_set()
    m_star, witness = brute_force_min_saturation(points, inst)
    print(f"m_star: {m_star}")
    sys.stdout.write(formats.dump_colouring(inst.field, inst.dimension, witness, m=m_star, algorithm="oracle"))
    return EXIT_OK


def cmd_multijoints(args) -> int:
    inst = formats.load_instance(_read(args.instance))
    found = multijoints(inst)
    if args.count:
        print(len(found))
    else:
        for x in found:
            print(f"point {format_point(x)}")
    return EXIT_OK


def cmd_generic_check(args) -> int:
    inst = formats.load_instance(_read(args.instance))
    witness = genericity_violation(inst)
    if witness is None:
        print("generic: yes")
        return EXIT_OK
    x, lines = witness
    print("generic: no")
    print(f"point: {format_point(x)}")
    for l in lines:
        print(f"line: {l}")
    return EXIT_NON_GENERIC


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="multijoints", description="Colour multijoints of generic line families.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write an instance file")
    g.add_argument("kind", choices=["monkey-bar", "tricolour", "random"])
    g.add_argument("--n", type=int, default=2, help="grid size N")
    g.add_argument("--d", type=int, default=2, help="dimension (monkey-bar, random)")
    g.add_argument("--field", default="prime:101")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--lines-per-family", type=int, default=4)
    g.add_argument("-o", "--out")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("colour", help="colour the instance's point set")
    c.add_argument("instance")
    c.add_argument("--m", type=int, help="saturation parameter; omitted means search by doubling")
    c.add_argument("--algo", choices=["general", "planar", "trivial"], default="general")
    c.add_argument("-o", "--out", help="colouring or certificate file (default: stdout)")
    c.add_argument("--csv", action="store_true", help="one summary row: " + ",".join(CSV_COLUMNS))
    c.set_defaults(func=cmd_colour)

    v = sub.add_parser("verify", help="check a colouring or certificate against an instance")
    v.add_argument("instance")
    v.add_argument("document")
    v.add_argument("--m", type=int)
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="exhaustive minimum saturation (tiny instances)")
    o.add_argument("instance")
    o.set_defaults(func=cmd_oracle)

    mj = sub.add_parser("multijoints", help="list or count multijoints")
    mj.add_argument("instance")
    mj.add_argument("--count", action="store_true")
    mj.set_defaults(func=cmd_multijoints)

    gc = sub.add_parser("generic-check", help="check genericity, printing a witness on failure")
    gc.add_argument("instance")
    gc.set_defaults(func=cmd_generic_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NonGenericError as exc:
        print(exc, file=sys.stderr)
        return EXIT_NON_GENERIC
    except (
        UsageError,
        formats.FormatError,
        InstanceError,
        FieldError,
        ColouringError,
        GenerationError,
        OracleTooLarge,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
