"""Command-line driver.

Exit status: 0 success, 1 verdict false, 2 usage or input error,
3 inconclusive enclosure (straddles zero; retry with a larger J).
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys

import numpy as np

from discrete_hardy import kernels
from discrete_hardy.atoms import (
    AtomSpec,
    Diverged,
    critical_degree,
    hardy_quasinorm,
    nearest_moment_free,
    random_atom,
    validate_atom,
)
from discrete_hardy.counterexample import (
    InconclusiveEnclosure,
    certify_unbounded,
    epsilon_root,
    paper_chain_check,
    sign_scan,
    total_sum_enclosure,
)
from discrete_hardy.fastops import throughput_benchmark
from discrete_hardy.lab import (
    atom_image_sweep,
    domination_sweep,
    hilbert_inequality_check,
    hlp_inequality_check,
    involution_check,
    pointwise_domination_check,
    unbounded_examples_demo,
    weak_type_check,
)
from discrete_hardy.operators import (
    PARAM_TOL,
    OperatorParams,
    fractional_window,
    hilbert_window,
    riesz_window,
)
from discrete_hardy.report import ExperimentReport, _jsonable, rows_to_csv
from discrete_hardy.seqcore import Sequence, lp_norm, maximal_window

EXIT_OK, EXIT_VERDICT, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3
EXPONENT_TOL = 1e-9


class UsageError(ValueError):
    pass


class Outcome:
    """What a handler hands back: JSON payload, CSV rows, verdict."""

    def __init__(self, payload: dict, rows=None, verdict: bool | None = None, inconclusive: bool = False):
        self.payload = payload
        self.rows = rows if rows is not None else [payload]
        self.verdict = verdict
        self.inconclusive = inconclusive

    @classmethod
    def from_report(cls, report: ExperimentReport) -> Outcome:
        d = report.to_dict()
        rows = d["artifacts"] or [{k: d[k] for k in ("name", "samples", "worst_ratio", "verdict")}]
        return cls(d, rows, report.verdict)


# -- input helpers ----------------------------------------------------------------

def _load_sequence(args) -> Sequence:
    if args.seq is not None and args.input is not None:
        raise UsageError("give either --seq or --input, not both")
    if args.seq is not None:
        text = args.seq
    elif args.input is not None:
        try:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    else:
        raise UsageError("a sequence is required (--seq JSON or --input FILE)")
    try:
        return Sequence.from_json(text)
    except ValueError as exc:
        raise UsageError(f"malformed sequence: {exc}") from None


def _js(args) -> np.ndarray:
    if (args.j is None) == (args.window is None):
        raise UsageError("give exactly one of --j or --window LO HI")
    if args.j is not None:
        return np.array([args.j], dtype=np.int64)
    lo, hi = args.window
    if hi < lo:
        raise UsageError("--window needs LO <= HI")
    return np.arange(lo, hi + 1, dtype=np.int64)


def _target_exponent(p: float, gamma: float, q: float | None) -> float:
    """q from 1/q = 1/p - gamma, checked against an explicit --q."""
    inv = 1.0 / p - gamma
    if not inv > 0:
        raise UsageError(f"invariant 1/q = 1/p - gamma violated: 1/p - gamma = {inv} <= 0")
    implied = 1.0 / inv
    if q is not None and abs(1.0 / q - inv) > EXPONENT_TOL:
        raise UsageError(f"invariant 1/q = 1/p - gamma violated: 1/{q} != 1/{p} - {gamma}")
    return implied


def _operator_params(args) -> OperatorParams:
    if args.alpha is None and args.beta is None:
        return OperatorParams.symmetric(args.gamma)
    if args.alpha is None or args.beta is None:
        raise UsageError("--alpha and --beta go together")
    params = OperatorParams.from_exponents(args.alpha, args.beta)
    if args.gamma_flag is not None and abs(params.gamma - args.gamma_flag) > PARAM_TOL:
        raise UsageError(
            f"invariant alpha + beta = 1 - gamma violated: {args.alpha} + {args.beta} != 1 - {args.gamma_flag}"
        )
    return params


# -- handlers ---------------------------------------------------------------------

def cmd_apply(args) -> Outcome:
    b = _load_sequence(args)
    js = _js(args)
    op = args.operator
    if op == "H":
        vals = hilbert_window(b, js)
    elif op == "M":
        vals = maximal_window(b, js)
    elif op == "riesz":
        vals = riesz_window(b, args.gamma, js)
    else:
        vals = fractional_window(b, _operator_params(args), js)
    rows = [{"j": int(j), "value": float(v)} for j, v in zip(js, vals)]
    payload = {"operator": op, "sequence": b.to_dict()}
    if args.j is not None:
        payload.update(j=int(args.j), value=float(vals[0]))
    else:
        payload.update(window=list(args.window), values=[float(v) for v in vals])
    if op in ("riesz", "frac"):
        payload["gamma"] = args.gamma
    return Outcome(payload, rows)


def cmd_norm(args) -> Outcome:
    b = _load_sequence(args)
    if args.kind == "lp":
        value = lp_norm(b, args.p)
        return Outcome({"kind": "lp", "p": args.p, "value": value})
    if args.J is None:
        raise UsageError("norm hp needs --J")
    res = hardy_quasinorm(b, args.p, args.J)
    if isinstance(res, Diverged):
        return Outcome({"kind": "hp", "p": args.p, "J": args.J, **res.to_dict()})
    return Outcome({"kind": "hp", "p": args.p, "J": args.J, "diverged": False, "enclosure": res.to_json()})


def _atom_spec(args) -> AtomSpec:
    d = critical_degree(args.p) if args.d is None else args.d
    return AtomSpec(args.p, args.q, d, args.n0, args.m)


def cmd_atom(args) -> Outcome:
    if args.action == "validate":
        a = _load_sequence(args)
        spec = _atom_spec(args)
        rep = validate_atom(a, spec, args.tol)
        return Outcome({"atom_spec": _spec_dict(spec), "report": rep.to_dict(), "verdict": rep.verdict},
                       [rep.to_dict()], rep.verdict)
    if args.action == "random":
        spec = _atom_spec(args)
        a = random_atom(spec, args.seed)
        return Outcome({"atom_spec": _spec_dict(spec), "seed": args.seed, "sequence": a.to_dict()},
                       [{"i": int(i), "value": float(v)} for i, v in zip(a.indices, a.values)])
    b = _load_sequence(args)
    if args.window is None:
        raise UsageError("atom project needs --window LO HI")
    c = nearest_moment_free(b, args.L, tuple(args.window))
    return Outcome({"L": args.L, "window": list(args.window), "sequence": c.to_dict(),
                    "l2_distance": lp_norm(c - b, 2.0)},
                   [{"i": int(i), "value": float(v)} for i, v in zip(c.indices, c.values)])


def _spec_dict(spec: AtomSpec) -> dict:
    return {"p": spec.p, "q": spec.q, "d": spec.d, "n0": spec.n0, "m": spec.m}


def cmd_counterexample(args) -> Outcome:
    action = args.action
    if action == "sum":
        enc = total_sum_enclosure(args.gamma, args.J)
        sign = "negative" if enc.hi < 0 else "positive" if enc.lo > 0 else "inconclusive"
        payload = {"gamma": args.gamma, "J": args.J, "enclosure": enc.to_json(), "sign": sign}
        return Outcome(payload, [{"gamma": args.gamma, "J": args.J, "lo": enc.to_json()["lo"],
                                  "hi": enc.to_json()["hi"], "sign": sign}],
                       verdict=sign == "negative", inconclusive=sign == "inconclusive")
    if action == "chain":
        return Outcome.from_report(paper_chain_check(args.gamma, args.J))
    if action == "epsilon":
        enc = epsilon_root(args.tol)
        inside = 0.0 < enc.lo and enc.hi < 1.0 / 3.0
        return Outcome({"tolerance": args.tol, "enclosure": enc.to_json(), "inside_open_unit_third": inside},
                       verdict=inside)
    if action == "certify":
        q = _target_exponent(args.p, args.gamma, args.q)
        try:
            cert = certify_unbounded(args.gamma, args.p, args.J)
        except InconclusiveEnclosure as exc:
            payload = exc.certificate.to_dict() if exc.certificate is not None else {}
            payload["message"] = str(exc)
            return Outcome(payload, verdict=False, inconclusive=True)
        payload = cert.to_dict()
        payload["q_implied"] = q
        return Outcome(payload, [{k: v for k, v in payload.items() if k != "witness"}], cert.conclusion)
    out = Outcome.from_report(sign_scan(args.grid, args.J))
    out.inconclusive = any(r["sign"] == "inconclusive" for r in out.payload["artifacts"])
    return out


def cmd_lab(args) -> Outcome:
    exp = args.experiment
    if exp == "hilbert-ineq":
        return Outcome.from_report(hilbert_inequality_check(args.trials, args.max_support, args.seed))
    if exp == "hlp":
        return Outcome.from_report(hlp_inequality_check(args.p, args.q, args.trials, args.seed))
    if exp == "involution":
        return Outcome.from_report(involution_check(_load_sequence(args), args.J))
    if exp == "weak-type":
        window = tuple(args.window) if args.window is not None else None
        return Outcome.from_report(weak_type_check(_load_sequence(args), args.alphas, window))
    if exp == "domination":
        params = OperatorParams.from_exponents(args.alpha, args.beta)
        if args.seq is None and args.input is None:
            return Outcome.from_report(domination_sweep(args.trials, args.seed, params, args.p, args.j0_max))
        if args.j0 is None:
            raise UsageError("lab domination with a sequence needs --j0")
        return Outcome.from_report(pointwise_domination_check(_load_sequence(args), args.j0, params, args.p))
    if exp == "atom-sweep":
        _target_exponent(args.p, args.gamma, args.q)
        return Outcome.from_report(atom_image_sweep(args.p, args.gamma, args.m_values, args.trials_per_m, args.seed))
    return Outcome.from_report(unbounded_examples_demo(args.gamma, args.J_list))


def cmd_bench(args) -> Outcome:
    return Outcome.from_report(throughput_benchmark(args.sizes, args.repeats, args.seed))


# -- parser -------------------------------------------------------------------------

def _float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if math.isnan(x):
        raise argparse.ArgumentTypeError("nan is not allowed")
    return x


def _positive_int(text: str) -> int:
    try:
        n = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--threads", type=_positive_int,
                        help="cap worker threads (default: DISCRETE_HARDY_THREADS)")
    common.add_argument("--no-timestamp", action="store_true", help="omit the timestamp field")

    seq = argparse.ArgumentParser(add_help=False)
    seq.add_argument("--seq", help='inline sequence, e.g. \'{"offset": -1, "values": [1, -2, 1]}\'')
    seq.add_argument("--input", "-i", help="file holding a sequence literal")

    parser = argparse.ArgumentParser(prog="discrete-hardy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", parents=[common, seq], help="apply H, M, I_gamma or T_{alpha,beta}")
    p.add_argument("operator", choices=("H", "M", "riesz", "frac"))
    p.add_argument("--j", type=int)
    p.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--gamma", dest="gamma_flag", type=_float)
    p.add_argument("--alpha", type=_float)
    p.add_argument("--beta", type=_float)
    p.set_defaults(handler=cmd_apply)

    p = sub.add_parser("norm", parents=[common, seq], help="l^p norm or H^p quasi-norm enclosure")
    p.add_argument("kind", choices=("lp", "hp"))
    p.add_argument("--p", type=_float, required=True)
    p.add_argument("--J", type=_positive_int)
    p.set_defaults(handler=cmd_norm)

    p = sub.add_parser("atom", parents=[common, seq], help="validate, draw or project atoms")
    p.add_argument("action", choices=("validate", "random", "project"))
    p.add_argument("--p", type=_float, default=1.0)
    p.add_argument("--q", type=_float, default=math.inf)
    p.add_argument("--d", type=int, help="moment degree (default: floor(1/p - 1))")
    p.add_argument("--n0", type=int, default=0)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--tol", type=_float, default=1e-10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--L", type=int, default=0)
    p.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
    p.set_defaults(handler=cmd_atom)

    p = sub.add_parser("counterexample", parents=[common], help="certified sign and epsilon computations")
    p.add_argument("action", choices=("sum", "chain", "epsilon", "certify", "scan"))
    p.add_argument("--gamma", type=_float, default=0.0)
    p.add_argument("--J", type=_positive_int, default=10**6)
    p.add_argument("--tol", type=_float, default=1e-10)
    p.add_argument("--p", type=_float, default=1.0)
    p.add_argument("--q", type=_float)
    p.add_argument("--grid", type=_float, nargs="+", default=[0.0, 0.05, 0.1, 0.15])
    p.set_defaults(handler=cmd_counterexample)

    p = sub.add_parser("lab", parents=[common, seq], help="empirical checks")
    p.add_argument("experiment", choices=("hilbert-ineq", "hlp", "involution", "weak-type",
                                          "domination", "atom-sweep", "unbounded-demo"))
    p.add_argument("--trials", type=_positive_int, default=1000)
    p.add_argument("--max-support", type=_positive_int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--p", type=_float, default=None)
    p.add_argument("--q", type=_float, default=None)
    p.add_argument("--gamma", type=_float, default=0.0)
    p.add_argument("--alpha", type=_float, default=0.5)
    p.add_argument("--beta", type=_float, default=0.5)
    p.add_argument("--J", type=_positive_int, default=10**4)
    p.add_argument("--alphas", type=_float, nargs="+", default=[0.5, 0.1, 0.01])
    p.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--j0", type=int)
    p.add_argument("--j0-max", type=_positive_int, default=64)
    p.add_argument("--m-values", type=_positive_int, nargs="+", default=[1, 4, 16, 64, 256])
    p.add_argument("--trials-per-m", type=_positive_int, default=50)
    p.add_argument("--J-list", type=_positive_int, nargs="+", default=[10, 100, 10**4, 10**6])
    p.set_defaults(handler=cmd_lab)

    p = sub.add_parser("bench", parents=[common], help="direct vs FFT throughput of H")
    p.add_argument("--sizes", type=_positive_int, nargs="+", default=[2**k for k in range(10, 17)])
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_bench)
    return parser


_LAB_P_DEFAULTS = {"hlp": 1.5, "domination": 2.0, "atom-sweep": 1.0}


def _finalize_args(args):
    if args.command == "apply":
        args.gamma = 0.0 if args.gamma_flag is None else args.gamma_flag
        if args.operator == "riesz" and args.gamma_flag is None:
            raise UsageError("apply riesz needs --gamma in (0, 1)")
    if args.command == "lab":
        if args.p is None:
            args.p = _LAB_P_DEFAULTS.get(args.experiment)
        if args.experiment == "hlp" and args.q is None:
            args.q = args.p
    return args


def render(outcome: Outcome, fmt: str, timestamp: bool) -> str:
    if fmt == "csv":
        return rows_to_csv(outcome.rows)
    payload = dict(_jsonable(outcome.payload))
    if timestamp:
        payload["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return json.dumps(payload, indent=2) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        threads = args.threads if args.threads is not None else kernels.threads_from_env()
        kernels.set_threads(threads)
        outcome = args.handler(_finalize_args(args))
    except (UsageError, ValueError) as exc:
        print(f"discrete-hardy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(outcome, args.format, not args.no_timestamp)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if outcome.inconclusive:
        return EXIT_INCONCLUSIVE
    if outcome.verdict is False:
        return EXIT_VERDICT
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
