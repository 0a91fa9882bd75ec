"""
Command line front end, installed as ``biased-cube``.

    biased-cube transform f.txt
    biased-cube verify-fkn --n 3 --alpha 0.25 --c0 0.01
    biased-cube verify-thm3 --n 8 --samples 1000 --seed 7 --out thm3.csv
    biased-cube example counterexample --alpha 0.25

Exit status is 0 when a campaign finds no violation, 1 when it finds one
and 2 for usage, configuration and file errors.
"""
import argparse
import sys

from .affine import ConstantPair
from .campaign import CampaignConfig, CampaignMode, Suite, run_campaign
from .fkn import counterexample
from .fourier import level_weights, rho, transform
from .funcfile import format_spectrum, format_table, read_function_file
from .status import ErrorStatus

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2

_DEFAULT_N = {"jow": 12}


def _common_arguments():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="number of coordinates")
    common.add_argument("--alpha", type=float, help="probability of the high point, in (0, 1/2]")
    common.add_argument("--q", type=float, help="hypercontractivity order in [1, 2]")
    common.add_argument("--c0", type=float, default=0.01,
                        help="constant c0 of the small-rho FKN hypothesis")
    common.add_argument("--seed", type=int, help="64-bit seed of random mode")
    common.add_argument("--samples", type=int, help="random instances; implies --mode random")
    common.add_argument("--tol", type=float, default=1e-10, help="slack of every inequality")
    common.add_argument("--base", type=float, choices=[3.0, 2.03], default=3.0,
                        help="threshold base of the bounded affine bound")
    common.add_argument("--mode", choices=[str(mode) for mode in CampaignMode],
                        help="override the inferred campaign mode")
    common.add_argument("--out", help="write the CSV report here")
    return common


def _mode(args, suite):
    if args.mode is not None:
        return CampaignMode(args.mode)
    if args.samples is not None:
        return CampaignMode.Random
    if suite in (Suite.Hk, Suite.Example):
        return CampaignMode.Example
    return CampaignMode.Exhaustive


def _config(args, suite, **extra):
    example = extra.get("example", "counterexample")
    n = args.n if args.n is not None else _DEFAULT_N.get(example if suite is Suite.Example else None, 2)
    return CampaignConfig(suite,
                          _mode(args, suite),
                          n=n,
                          alpha=args.alpha,
                          q=args.q,
                          c0=args.c0,
                          seed=args.seed,
                          samples=args.samples or 0,
                          tol=args.tol,
                          constants=ConstantPair.from_base(args.base),
                          **extra)


def _run(args, config):
    report = run_campaign(config)
    for line in report.summary_lines():
        print(line)
    if args.out:
        with open(args.out, "w", newline="") as stream:
            report.write_csv(stream)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def _cmd_transform(args):
    function_file = read_function_file(args.file)
    spectrum = transform(function_file.function)
    sys.stdout.write(format_spectrum(spectrum))
    print("rho: %.17g" % rho(spectrum))
    print("level weights: %s" % " ".join("%.17g" % w for w in level_weights(spectrum)))
    return EXIT_OK


def _cmd_suite(suite):
    def command(args):
        return _run(args, _config(args, suite))
    return command


def _cmd_scan(args):
    extra = {}
    if args.alphas:
        extra["alphas"] = args.alphas
    return _run(args, _config(args, Suite.Scan, **extra))


def _cmd_example(args):
    extra = {"example": args.name}
    if args.s:
        extra["scales"] = args.s
    config = _config(args, Suite.Example, **extra)
    if args.name == "counterexample":
        f = counterexample(config.bias)
        sys.stdout.write(format_table(f))
        sys.stdout.write(format_spectrum(transform(f)))
    return _run(args, config)


def build_parser():
    common = _common_arguments()
    parser = argparse.ArgumentParser(prog="biased-cube",
                                     description="Fourier analysis checks on the biased cube.")
    commands = parser.add_subparsers(dest="command")
    commands.required = True

    transform_parser = commands.add_parser("transform", help="print the spectrum of a function file")
    transform_parser.add_argument("file")
    transform_parser.set_defaults(func=_cmd_transform)

    for name, suite, description in (("verify-hyper", Suite.Hyper, "biased hypercontractivity"),
                                     ("verify-fkn", Suite.Fkn, "the FKN bounds d <= 8 sqrt(rho) and d <= 2 rho"),
                                     ("verify-thm3", Suite.Thm3, "distance to bounded affine functions"),
                                     ("verify-hk", Suite.Hk, "Rademacher sum inequalities")):
        suite_parser = commands.add_parser(name, parents=[common], help="check " + description)
        suite_parser.set_defaults(func=_cmd_suite(suite))

    scan_parser = commands.add_parser("scan", parents=[common],
                                      help="sweep the FKN checks over several biases")
    scan_parser.add_argument("--alphas", type=float, nargs="+", help="biases to sweep")
    scan_parser.set_defaults(func=_cmd_scan)

    example_parser = commands.add_parser("example", parents=[common], help="run a fixed example")
    example_parser.add_argument("name", choices=["counterexample", "jow"])
    example_parser.add_argument("--s", type=float, action="append",
                                help="scale of the jow example, repeatable (default 1 2 4)")
    example_parser.set_defaults(func=_cmd_example)
    return parser


def main(argv=None):
    """ Runs the command line and returns the exit status. """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    try:
        return args.func(args)
    except (ErrorStatus, OSError) as e:
        print("biased-cube: %s" % e, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
