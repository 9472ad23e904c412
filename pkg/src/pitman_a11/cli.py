"""Command-line entry point: characters, walk samples and the experiment catalog.

Subcommands
-----------
char        CSV ``lambda_n,lambda_m,a,b,value,certified_error`` for
            lambda = n Lambda_0 + m alpha_1 / 2 at h = a alpha_1^vee + b d
            (h = rho^vee / m when --m is given).
sample      walk traces ``replica,t,coord_t,coord_x,coord_delta,xi`` or
            conditioned string samples ``replica,k,xi_k`` (--kind strings).
experiment  runs one catalog entry; exit 0 iff it passes.
list        prints the catalog, one ``name,criterion,description`` per line.

Exit codes: 0 success, 1 experiment failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import ast
import sys

from .characters import EvalPoint, weyl_kac_evaluation
from .cartan import Weight
from .statlab import CATALOG, run_experiment
from .stochastic.brownian import sample_exp_strings
from .stochastic.io import WALK_HEADER, rows_to_csv, walk_trace_rows
from .stochastic.rng import RngStream, default_seed
from .stochastic.walks import simulate_walk_pair

# long flag -> experiment parameter names it may set
_FLAG_KEYS = {
    "m": ("m",),
    "p": ("p",),
    "horizon": ("H", "T"),
    "n_replicas": ("n",),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _ints(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _value(text: str):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def _parse_pairs(items) -> dict:
    out = {}
    for it in items:
        if "=" not in it:
            raise UsageError(f"expected key=value, got {it!r}")
        k, v = it.split("=", 1)
        out[k.strip()] = _value(v.strip())
    return out


def _read_config(path: str) -> dict:
    lines = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                lines.append(line)
    return _parse_pairs(lines)


def _build_parser() -> argparse.ArgumentParser:
    seed_help = f"RNG seed (default: $PITMAN_A11_SEED or {default_seed()})"
    p = _Parser(prog="pitman-a11", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    c = sub.add_parser("char", help="evaluate Weyl-Kac characters to CSV")
    c.add_argument("--lambda-n", default="1", help="levels n, comma-separated (default 1)")
    c.add_argument("--lambda-m", default="0", help="alpha_1 labels m <= n, comma-separated (default 0)")
    c.add_argument("--m", type=float, default=None, help="evaluate at h = rho^vee / m")
    c.add_argument("--a", type=float, default=None, help="alpha_1^vee coefficient of h")
    c.add_argument("--b", type=float, default=None, help="d coefficient of h (> 0)")
    c.add_argument("--output", default=None, help="CSV path (default stdout)")

    s = sub.add_parser("sample", help="emit walk or string-coordinate samples as CSV")
    s.add_argument("--kind", choices=("walk", "strings"), default="walk")
    s.add_argument("--m", type=float, default=2.0, help="scale m of the walk (default 2)")
    s.add_argument("--horizon", type=int, default=40, help="walk horizon H (default 40)")
    s.add_argument("--p", type=int, default=8, help="number of conditioned string coordinates (default 8)")
    s.add_argument("--n-replicas", type=int, default=1, help="number of replicas (default 1)")
    s.add_argument("--seed", type=int, default=None, help=seed_help)
    s.add_argument("--output", default=None, help="CSV path (default stdout)")

    defaults = "\n".join(
        f"  {name} ({e.criterion}): " + " ".join(f"{k}={v}" for k, v in e.defaults.items())
        for name, e in CATALOG.items()
    )
    e = sub.add_parser("experiment", help="run one catalog entry",
                       epilog="catalog defaults:\n" + defaults,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    e.add_argument("name", help="catalog name (see `list`)")
    e.add_argument("params", nargs="*", help="key=value overrides")
    e.add_argument("--config", default=None, help="file of key=value lines")
    e.add_argument("--m", default=None, help="scale m (list for denominator_identity)")
    e.add_argument("--p", default=None, help="Demazure depth / string order p")
    e.add_argument("--horizon", default=None, help="horizon H or T")
    e.add_argument("--n-replicas", default=None, help="number of replicas n")
    e.add_argument("--seed", type=int, default=None, help=seed_help)
    e.add_argument("--output", default=None, help="directory for the experiment CSV")

    sub.add_parser("list", help="list the experiment catalog")
    return p


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _cmd_char(args) -> int:
    if args.m is not None:
        if args.a is not None or args.b is not None:
            raise UsageError("give either --m or --a/--b")
        if args.m <= 0:
            raise UsageError("--m must be positive")
        h = EvalPoint.rho_over(args.m)
    else:
        if args.a is None or args.b is None:
            raise UsageError("give --m or both --a and --b")
        if args.b <= 0:
            raise UsageError("--b must be positive")
        h = EvalPoint(args.a, args.b)
    rows = []
    for n in _ints(args.lambda_n):
        for mp in _ints(args.lambda_m):
            if not 0 <= mp <= n:
                continue
            ev = weyl_kac_evaluation(Weight(n, mp / 2, 0), h)
            rows.append([n, mp, float(h.a), float(h.b), float(ev.value), float(ev.error)])
    if not rows:
        raise UsageError("no dominant (n, m) pair with 0 <= m <= n")
    _emit(rows_to_csv(["lambda_n", "lambda_m", "a", "b", "value", "certified_error"], rows), args.output)
    return 0


def _cmd_sample(args) -> int:
    seed = default_seed() if args.seed is None else args.seed
    if args.n_replicas < 1:
        raise UsageError("--n-replicas must be >= 1")
    if args.kind == "walk":
        if args.m <= 0 or args.horizon < 1:
            raise UsageError("need --m > 0 and --horizon >= 1")
        rows = []
        for r in range(args.n_replicas):
            w = simulate_walk_pair(args.m, args.horizon, RngStream(seed, r))
            rows.extend(walk_trace_rows(w, r))
        _emit(rows_to_csv(WALK_HEADER, rows), args.output)
    else:
        if args.p < 0:
            raise UsageError("--p must be >= 0")
        s = sample_exp_strings(RngStream(seed, 0), K=max(args.p, 1), ps=[args.p], n=args.n_replicas)
        xi = s.xi_p[args.p]
        rows = [[r, k, float(xi[r, k])] for r in range(args.n_replicas) for k in range(args.p + 1)]
        _emit(rows_to_csv(["replica", "k", "xi_k"], rows), args.output)
    return 0


def _cmd_experiment(args) -> int:
    if args.name not in CATALOG:
        raise UsageError(f"unknown experiment {args.name!r}; run `list`")
    defaults = CATALOG[args.name].defaults
    params = _read_config(args.config) if args.config else {}
    params.update(_parse_pairs(args.params))
    for flag, keys in _FLAG_KEYS.items():
        v = getattr(args, flag)
        if v is None:
            continue
        key = next((k for k in keys if k in defaults), None)
        if key is None:
            raise UsageError(f"experiment {args.name!r} takes no --{flag.replace('_', '-')}")
        params[key] = _value(v)
    unknown = sorted(set(params) - set(defaults))
    if unknown:
        raise UsageError(f"experiment {args.name!r} has no parameter(s) {', '.join(unknown)}; "
                         f"known: {', '.join(defaults)}")
    seed = default_seed() if args.seed is None else args.seed
    rep = run_experiment(args.name, params, seed=seed, out_dir=args.output)
    sys.stdout.write("name,label,value,err,pass\n")
    sys.stdout.write("\n".join(rep.summary_lines()) + "\n")
    return 0 if rep.passed else 1


def _cmd_list(args) -> int:
    for name, e in CATALOG.items():
        sys.stdout.write(f"{name},{e.criterion},{e.description}\n")
    return 0


def run_cli(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        cmd = {"char": _cmd_char, "sample": _cmd_sample, "experiment": _cmd_experiment, "list": _cmd_list}
        return cmd[args.subcommand](args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
