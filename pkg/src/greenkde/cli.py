"""Command-line interface: ``greenkde <command> ...``."""
import argparse
import json
import logging
import sys
from dataclasses import replace

import numpy as np

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_BAD_INPUT = 3
EXIT_DIMENSION = 4
EXIT_MISSING = 5

log = logging.getLogger("greenkde")


def _parse_truth(spec, dim):
    from greenkde.density import gaussian_density

    if spec is None or spec == "none":
        return None
    kind, _, arg = spec.partition(":")
    if kind != "gauss":
        raise ValueError(f"unknown truth {spec!r}; expected gauss:<sigma> or none")
    return gaussian_density(float(arg) if arg else 1.0, dim)


def _parse_center(spec, dim):
    if spec is None:
        return np.zeros(dim)
    c = np.array([float(v) for v in spec.split(",")])
    if c.shape[0] != dim:
        from greenkde.io import DimensionError

        raise DimensionError(f"center has {c.shape[0]} coordinates, model is {dim}-D")
    return c


def _fit_config(args):
    from greenkde.solver import FitConfig

    return FitConfig(
        n_large_fit=args.n_large,
        step_cap=args.step_cap,
        tolerance=args.tol,
        max_iterations=args.max_iter,
        restarts=args.restarts,
        seed=args.seed,
    )


def _write_profile(path, prof):
    from greenkde.io import write_table

    write_table(path, ["r_lo", "r_hi", "count", "mean", "spread", "truth"], prof.rows())


def cmd_gen(args):
    from greenkde.datagen import sample_gaussian, sample_twelve_plus_flat
    from greenkde.io import write_points

    if args.dist == "gauss":
        if not args.out:
            raise ValueError("gen --dist gauss needs --out")
        write_points(args.out, sample_gaussian(args.dim, args.n, args.sigma, args.seed))
    else:
        if not (args.out_signal and args.out_background):
            raise ValueError("gen --dist twelve needs --out-signal and --out-background")
        n_sig = args.n // 2
        sig, bkg = sample_twelve_plus_flat(n_sig, args.n - n_sig, args.seed)
        write_points(args.out_signal, sig)
        write_points(args.out_background, bkg)


def cmd_fit(args):
    from greenkde.density import fit_model
    from greenkde.io import read_points, save_model

    X = read_points(args.inp)
    model = fit_model(X, _fit_config(args), args.n_large_eval)
    save_model(model, args.out)
    print(json.dumps(model.report.to_dict(), indent=1))


def _load_model(args):
    from greenkde.io import load_model

    model = load_model(args.model)
    if getattr(args, "n_large_eval", None) is not None:
        model = replace(model, n_large_eval=args.n_large_eval)
    return model


def cmd_eval(args):
    from greenkde.density import estimate_batch
    from greenkde.io import read_points, write_points

    model = _load_model(args)
    Q = read_points(args.inp, dim=model.dim)
    write_points(args.out, Q, estimate_batch(model, Q), ["density"])


def cmd_profile(args):
    from greenkde.density import radial_profile

    model = _load_model(args)
    prof = radial_profile(
        model, _parse_center(args.center, model.dim), args.bins, args.rmax, _parse_truth(args.truth, model.dim)
    )
    _write_profile(args.out, prof)


def cmd_knn(args):
    from greenkde.io import read_points, write_points
    from greenkde.knn import knn_density
    from greenkde.neighbors import NeighborIndex

    index = NeighborIndex(read_points(args.inp))
    Q = read_points(args.queries, dim=index.dim)
    k = args.k if args.k is not None else index.dim * args.n_large
    write_points(args.out, Q, knn_density(index, Q, k), ["density"])


def cmd_knn_profile(args):
    from greenkde.density import profile_values
    from greenkde.io import read_points
    from greenkde.knn import knn_density
    from greenkde.neighbors import NeighborIndex

    index = NeighborIndex(read_points(args.inp))
    k = args.k if args.k is not None else index.dim * args.n_large
    center = _parse_center(args.center, index.dim)
    values = knn_density(index, index.points, k)
    radii = np.linalg.norm(index.points - center, axis=1)
    _write_profile(args.out, profile_values(values, radii, args.bins, args.rmax, _parse_truth(args.truth, index.dim)))


def cmd_classify_train(args):
    from greenkde.classifier import train
    from greenkde.io import DimensionError, read_points, save_classifier

    sig = read_points(args.signal)
    bkg = read_points(args.background)
    if sig.shape[1] != bkg.shape[1]:
        raise DimensionError(f"signal is {sig.shape[1]}-D but background is {bkg.shape[1]}-D")
    model = train(sig, bkg, _fit_config(args), args.n_large_eval, args.epsilon)
    save_classifier(model, args.out)
    print(json.dumps({"signal": model.signal.report.to_dict(), "background": model.background.report.to_dict()}, indent=1))


def cmd_classify_apply(args):
    from greenkde.classifier import response
    from greenkde.io import load_classifier, read_points, write_points

    clf = load_classifier(args.clf)
    X = read_points(args.inp, dim=clf.dim)
    write_points(args.out, X, response(clf, X), ["response"])


def cmd_classify_hist(args):
    from greenkde.classifier import response, response_histogram
    from greenkde.io import load_classifier, read_points, write_table

    clf = load_classifier(args.clf)
    X = read_points(args.inp, dim=clf.dim)
    counts, edges = response_histogram(response(clf, X), args.bins)
    write_table(
        args.out,
        ["bin_lo", "bin_hi", "count"],
        ((float(edges[i]), float(edges[i + 1]), int(c)) for i, c in enumerate(counts)),
    )


def cmd_validate(args):
    from greenkde.validation import kernel_report, shell_report

    dims = args.dim or [2, 3, 5]
    results = kernel_report(dims, args.seed) + shell_report([d for d in dims if d <= 3] or [2], args.seed)
    for r in results:
        print(r.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _add_fit_options(p):
    p.add_argument("--n-large", type=int, default=20)
    p.add_argument("--n-large-eval", type=int, default=None)
    p.add_argument("--step-cap", type=float, default=0.1)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--max-iter", type=int, default=2000)
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="greenkde", description="Green's-function dipole-kernel density estimation")
    parser.add_argument("--threads", type=int, default=None, help="worker threads (results do not depend on it)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic sample")
    p.add_argument("--dist", choices=["gauss", "twelve"], required=True)
    p.add_argument("--n", type=int, required=True, help="points (twelve: total, split evenly)")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.add_argument("--out-signal")
    p.add_argument("--out-background")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("fit", help="fit a dipole field and write a model file")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    _add_fit_options(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", help="evaluate a model at query points")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--n-large-eval", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("profile", help="radial profile of a model evaluated at its sample points")
    p.add_argument("--model", required=True)
    p.add_argument("--bins", type=int, default=40)
    p.add_argument("--rmax", type=float, default=4.0)
    p.add_argument("--truth", default="none", help="gauss:<sigma> or none")
    p.add_argument("--center", default=None, help="comma-separated coordinates, default origin")
    p.add_argument("--n-large-eval", type=int, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("knn", help="flat-kernel k-NN density at query points")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--queries", required=True)
    p.add_argument("--k", type=int, default=None, help="default n * n_large")
    p.add_argument("--n-large", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_knn)

    p = sub.add_parser("knn-profile", help="radial profile of the k-NN density at sample points")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--k", type=int, default=None, help="default n * n_large")
    p.add_argument("--n-large", type=int, default=20)
    p.add_argument("--bins", type=int, default=40)
    p.add_argument("--rmax", type=float, default=4.0)
    p.add_argument("--truth", default="none")
    p.add_argument("--center", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_knn_profile)

    p = sub.add_parser("classify", help="likelihood-ratio classifier")
    csub = p.add_subparsers(dest="action", required=True)
    q = csub.add_parser("train")
    q.add_argument("--signal", required=True)
    q.add_argument("--background", required=True)
    q.add_argument("--epsilon", type=float, default=1e-12)
    q.add_argument("--out", required=True)
    _add_fit_options(q)
    q.set_defaults(func=cmd_classify_train)
    q = csub.add_parser("apply")
    q.add_argument("--clf", required=True)
    q.add_argument("--in", dest="inp", required=True)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_classify_apply)
    q = csub.add_parser("hist")
    q.add_argument("--clf", required=True)
    q.add_argument("--in", dest="inp", required=True)
    q.add_argument("--bins", type=int, default=50)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_classify_hist)

    p = sub.add_parser("validate", help="run the numerical oracles")
    p.add_argument("--dim", type=int, action="append", help="repeatable; default 2, 3 and 5")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_validate)
    return parser


def _set_threads(n):
    import numba

    avail = numba.config.NUMBA_NUM_THREADS
    if n < 1:
        raise ValueError("--threads must be >= 1")
    if n > avail:
        log.warning("only %d threads available (NUMBA_NUM_THREADS); using %d", avail, avail)
    numba.set_num_threads(min(n, avail))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")

    from greenkde.io import DimensionError, FormatError

    try:
        if args.threads is not None:
            _set_threads(args.threads)
        status = args.func(args)
    except FileNotFoundError as e:
        print(f"greenkde: error: file not found: {e.filename or e}", file=sys.stderr)
        return EXIT_MISSING
    except DimensionError as e:
        print(f"greenkde: error: dimension mismatch: {e}", file=sys.stderr)
        return EXIT_DIMENSION
    except (FormatError, ValueError) as e:
        print(f"greenkde: error: {e}", file=sys.stderr)
        return EXIT_BAD_INPUT
    return EXIT_OK if status is None else status


if __name__ == "__main__":
    sys.exit(main())
