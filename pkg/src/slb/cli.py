"""Command-line front end.

Verbs: validate, invariants, relations, normal-form, catalog, oracle.
Exit codes: 0 success, 2 input errors, 3 non-generic geometry,
4 relation violations.
"""

from __future__ import annotations

import argparse
import sys

from . import bordism, catalog, gauss_oracle, invariants, movie_core


def _read_movie(path):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise movie_core.ParseError(f"cannot read {path}: {e}")
    return movie_core.parse_movie(text)


def _print_invariants(report, as_json, out):
    if as_json:
        out.write(report.to_json() + "\n")
        return
    out.write(f"components: {report.n}\n")
    out.write("dlk (i,j -> Z2):\n")
    for (i, j), v in report.dlk:
        out.write(f"  {i},{j}: {v}\n")
    nz = [(t, v) for t, v in report.tlk if v != 0]
    out.write("tlk (nonzero, ordered triples):\n")
    if not nz:
        out.write("  (all zero)\n")
    for (i, j, k), v in nz:
        out.write(f"  {i},{j},{k}: {v:+d}\n")
    out.write(f"relations_ok: {str(report.relations_ok).lower()}\n")
    for msg in report.violations:
        out.write(f"  violated: {msg}\n")


def cmd_validate(args, out):
    movie = _read_movie(args.movie)
    report = movie_core.validate_movie(movie)
    out.write(
        f"valid movie: {report.n_stills} stills, {report.n_events} events, "
        f"max {report.max_crossings} crossings\n"
    )
    return 0


def cmd_invariants(args, out):
    movie = _read_movie(args.movie)
    movie_core.validate_movie(movie)
    report = invariants.check_relations(movie)
    _print_invariants(report, args.json, out)
    return 0


def cmd_relations(args, out):
    movie = _read_movie(args.movie)
    movie_core.validate_movie(movie)
    report = invariants.check_relations(movie)
    _print_invariants(report, args.json, out)
    return 0 if report.relations_ok else 4


def cmd_normal_form(args, out):
    if bool(args.from_movie) == bool(args.from_class):
        raise movie_core.ParseError("need exactly one of --from-movie / --from-class")
    if args.from_movie:
        movie = _read_movie(args.from_movie)
        movie_core.validate_movie(movie)
        cls = invariants.compute_H(movie)
    else:
        with open(args.from_class) as fh:
            cls = bordism.BordismClass.from_json(fh.read())
    nf = bordism.G_decompose(cls)
    if args.json:
        out.write(cls.to_json() + "\n")
    out.write(nf.pretty() + "\n")
    if args.output:
        realized = catalog.realize(nf)
        with open(args.output, "w") as fh:
            fh.write(movie_core.print_movie(realized))
        out.write(f"wrote realized movie to {args.output}\n")
    return 0


def cmd_catalog(args, out):
    if args.gen == "trivial":
        movie = catalog.trivial_link(args.n)
    elif args.gen == "S":
        movie = catalog.build_S_ij(args.n, args.i, args.j)
    elif args.gen == "Sk":
        movie = catalog.build_S_ijk(args.n, args.i, args.j, args.k, bead_sign=1)
    elif args.gen == "Sk-":
        movie = catalog.build_S_ijk(args.n, args.i, args.j, args.k, bead_sign=-1)
    else:
        raise movie_core.ParseError(f"unknown generator {args.gen}")
    text = movie_core.print_movie(movie)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def cmd_oracle(args, out):
    if args.what == "tlk":
        if len(args.meshes) != 3:
            raise movie_core.ParseError("oracle tlk needs three .mesh files")
        meshes = [gauss_oracle.read_mesh(p) for p in args.meshes]
        deg = gauss_oracle.degree_L(*meshes)
        out.write(f"degree: {deg}\n")
        return 0
    if args.what == "lk":
        import json

        with open(args.curves) as fh:
            data = json.load(fh)
        lk = gauss_oracle.gauss_linking(data["curve1"], data["curve2"])
        out.write(f"linking: {lk}\n")
        return 0
    raise movie_core.ParseError(f"unknown oracle {args.what}")


def build_parser():
    p = argparse.ArgumentParser(prog="slb", description=__doc__)
    sub = p.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("validate", help="validate a .movie file")
    sp.add_argument("movie")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("invariants", help="Dlk/Tlk tables of a movie")
    sp.add_argument("movie")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("relations", help="check the linking identities")
    sp.add_argument("movie")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_relations)

    sp = sub.add_parser("normal-form", help="normal form of a movie or class")
    sp.add_argument("--from-movie")
    sp.add_argument("--from-class")
    sp.add_argument("-o", "--output", help="write the realized movie here")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_normal_form)

    sp = sub.add_parser("catalog", help="emit a generator movie")
    sp.add_argument("--gen", required=True, choices=["trivial", "S", "Sk", "Sk-"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--i", type=int, default=1)
    sp.add_argument("--j", type=int, default=2)
    sp.add_argument("--k", type=int, default=3)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_catalog)

    sp = sub.add_parser("oracle", help="numerical cross-checks")
    sp.add_argument("what", choices=["tlk", "lk"])
    sp.add_argument("--meshes", nargs="*", default=[])
    sp.add_argument("--curves")
    sp.set_defaults(func=cmd_oracle)

    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args, out)
    except movie_core.NonGeneric as e:
        print(f"error: non-generic input: {e}", file=sys.stderr)
        return 3
    except bordism.RelationViolation as e:
        print(f"error: relation violation: {e}", file=sys.stderr)
        return 4
    except (movie_core.MovieError, gauss_oracle.OracleError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
