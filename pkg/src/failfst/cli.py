"""Command-line front end: ``failfst <command> [flags]``.

Exit status is 0 on success, 1 on a domain error (its name is printed on
stderr) or a failed check, and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence

from . import textformat
from .algebra import PAIR, SemiringTag
from .compose import compose
from .errors import FstError, UndefinedPath
from .failure import FailureTransducer, as_failure, check_monotonic, enumerate_failure, expand, output_of_failure
from .push import dump_graph, push, sum_graph
from .specialized import compose_specialized
from .star import normalize_for_star, star
from .symbols import encode
from .transducer import (
    Transducer,
    check_canonical,
    check_conditional_probabilistic,
    check_probabilistic,
    check_stochastic,
)

PROPERTIES = ("stochastic", "probabilistic", "conditional-probabilistic", "canonical", "monotonic")


def _bool(text: str) -> bool:
    t = text.lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def _read(path: str) -> Transducer:
    if path == "-":
        return textformat.loads(sys.stdin.read())
    return textformat.load(path)


def _write(m: Transducer, path: Optional[str]) -> None:
    text = textformat.dumps(m)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _show_word(labels: Sequence[str], word) -> str:
    if not word:
        return "-"
    sep = "" if all(len(lab) == 1 for lab in labels) else " "
    return sep.join(labels[i] for i in word)


def _show_value(m: Transducer, v) -> str:
    if m.kind == PAIR.kind:
        return f"{_show_word(m.output_labels, v.word)} {v.weight!r}"
    return repr(v)


# ----------------------------------------------------------------- commands


def cmd_compose(args) -> int:
    _write(compose(_read(args.inp), as_failure(_read(args.right)), args.accessible_only), args.out)
    return 0


def cmd_normalize(args) -> int:
    _write(normalize_for_star(_read(args.inp)).base, args.out)
    return 0


def cmd_star(args) -> int:
    _write(star(normalize_for_star(_read(args.inp))), args.out)
    return 0


def cmd_compose_special(args) -> int:
    v = normalize_for_star(_read(args.inp))
    _write(compose_specialized(v, as_failure(_read(args.right))), args.out)
    return 0


def cmd_push(args) -> int:
    _write(push(as_failure(_read(args.inp)), SemiringTag.parse(args.semiring)), args.out)
    return 0


def cmd_expand(args) -> int:
    _write(expand(_read(args.inp)), args.out)
    return 0


def cmd_eval(args) -> int:
    m = as_failure(_read(args.inp))
    try:
        alpha = encode(m.input_labels, args.input)
    except KeyError as e:
        raise UndefinedPath(f"symbol {e.args[0]!r} is not in the input alphabet") from None
    v = output_of_failure(m, alpha)
    if v is None:
        raise UndefinedPath(f"no accepting path for {args.input!r}")
    print(_show_value(m, v))
    return 0


def cmd_enumerate(args) -> int:
    m = as_failure(_read(args.inp))
    for entry in enumerate_failure(m, args.max_len):
        print(f"{_show_word(m.input_labels, entry.input)}\t{_show_value(m, entry.value)}")
    return 0


def cmd_check(args) -> int:
    m = _read(args.inp)
    prop = args.property
    if prop == "monotonic":
        report = check_monotonic(as_failure(m))
    else:
        t = expand(m)
        if prop == "stochastic":
            report = check_stochastic(t, args.tol)
        elif prop == "probabilistic":
            report = check_probabilistic(t, args.max_len, args.tol)
        elif prop == "conditional-probabilistic":
            report = check_conditional_probabilistic(t, args.max_len, args.tol)
        else:
            report = check_canonical(t, SemiringTag.parse(args.semiring), args.max_len, args.tol)
    print(report.summary())
    if not report.passed:
        print(f"check-failed: {prop}", file=sys.stderr)
        return 1
    return 0


def cmd_graph_dump(args) -> int:
    m = as_failure(_read(args.inp))
    ag = sum_graph(m, SemiringTag.parse(args.semiring))
    lines = "\n".join(dump_graph(ag, m.input_labels))
    if args.out is None or args.out == "-":
        print(lines)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(lines + "\n")
    return 0


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="failfst", description="Failure-transducer algebra tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help, right=False, out=True):
        p = sub.add_parser(name, help=help)
        p.add_argument("--in", dest="inp", default="-", metavar="FILE", help="input machine ('-' for stdin)")
        if right:
            p.add_argument("--right", required=True, metavar="FILE", help="right operand")
        if out:
            p.add_argument("--out", metavar="FILE", help="output file (default stdout)")
        p.set_defaults(func=func)
        return p

    p = command("compose", cmd_compose, "compose a pair transducer with a failure transducer", right=True)
    p.add_argument("--accessible-only", type=_bool, default=True, metavar="BOOL")
    command("normalize", cmd_normalize, "rewrite a pair transducer for iteration")
    command("star", cmd_star, "Kleene star of a (normalized) pair transducer")
    command("compose-special", cmd_compose_special, "specialized composition of star(V) with F", right=True)
    for name, func, help in (("push", cmd_push, "push weights towards canonical form"),
                             ("graph-dump", cmd_graph_dump, "print the augmented sum graph")):
        p = command(name, func, help)
        p.add_argument("--semiring", choices=("plus", "max"), default="plus")
    command("expand", cmd_expand, "materialize completed transitions")
    p = command("eval", cmd_eval, "evaluate the machine on one input", out=False)
    p.add_argument("--input", required=True, help="input word (characters, or labels separated by spaces)")
    p = command("enumerate", cmd_enumerate, "list the domain up to a length", out=False)
    p.add_argument("--max-len", type=int, default=6, metavar="N")
    p = command("check", cmd_check, "check a property", out=False)
    p.add_argument("--property", required=True, choices=PROPERTIES)
    p.add_argument("--semiring", choices=("plus", "max"), default="plus")
    p.add_argument("--max-len", type=int, default=8, metavar="N")
    p.add_argument("--tol", type=float, default=1e-9, metavar="X")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FstError as e:
        print(str(e), file=sys.stderr)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
