"""Command-line interface: gen, run, check and oracle."""

import argparse
import os
import shutil
import subprocess
import sys

from .errors import EvalError, SejcError, TargetError
from .frontend import load_workspace, translate_body
from .fuzz import guard_ok, results_equal
from .interpreter import eval_call, eval_term
from .java.printer import print_unit
from .pipeline import compile_world
from .reader import read_sexprs
from .sampling import make_rng, random_value
from .target import Runtime, call_with_values
from .values import ACL2, print_value

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 4
CHECK_STEPS = 20_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _parser():
    p = _Parser(prog="sejc", description="Compile sejc workspaces to Java.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(q):
        q.add_argument("workspace")
        g = q.add_mutually_exclusive_group()
        g.add_argument("--guards", dest="guards", action="store_true", default=True,
                       help="assume guards hold (default)")
        g.add_argument("--no-guards", dest="guards", action="store_false")
        q.add_argument("--main-class", default="Main")
        q.add_argument("--no-post", dest="post", action="store_false",
                       help="skip the post-translation passes")

    gen = sub.add_parser("gen", help="write the generated Java files")
    common(gen)
    gen.add_argument("--out", default=".")
    gen.add_argument("--tests", action="store_true", help="also generate the test class")
    gen.add_argument("--deep", action="store_true", help=argparse.SUPPRESS)
    gen.add_argument("--javac", action="store_true",
                     help="compile the output with an external javac when one is installed")
    gen.add_argument("--classpath", default=None, help="classpath for --javac")

    for name in ("run", "oracle"):
        q = sub.add_parser(name, help=("evaluate the generated code" if name == "run"
                                       else "evaluate with the source interpreter"))
        common(q)
        q.add_argument("-f", "--function", required=True, help="function, as pkg::name or name")
        q.add_argument("-a", "--args", default="", help="argument expressions")

    chk = sub.add_parser("check", help="differential test of the workspace's functions")
    common(chk)
    chk.add_argument("--fuzz", type=int, default=100, help="calls per function")
    chk.add_argument("--seed", type=int, default=0)
    return p


def format_result(v):
    if isinstance(v, tuple):
        return "(mv " + " ".join(print_value(x) for x in v) + ")"
    return print_value(v)


def _function(world, text):
    if "::" in text:
        pkg, name = text.split("::", 1)
    else:
        pkg, name = ACL2, text
    sym = world.intern(name.upper(), pkg.upper())
    if sym not in world.functions:
        raise UsageError(f"unknown function {text}")
    return sym


def _arguments(world, fn, text):
    exprs = read_sexprs(text) if text.strip() else []
    args = [eval_term(translate_body(x, fn.package, world), {}, world) for x in exprs]
    if len(args) != len(world.functions[fn].params):
        raise UsageError(f"{print_value(fn).lower()} takes "
                         f"{len(world.functions[fn].params)} arguments, got {len(args)}")
    return args


def cmd_gen(ns, out, err):
    if ns.deep:
        raise UsageError("deep embedding output is not supported")
    world = load_workspace(ns.workspace)
    unit = compile_world(world, ns.guards, ns.main_class, ns.tests, ns.post)
    os.makedirs(ns.out, exist_ok=True)
    paths = []
    for name, text in print_unit(unit).items():
        path = os.path.join(ns.out, name)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        paths.append(path)
        print(path, file=out)
    if ns.javac:
        return _javac(paths, ns.classpath, err)
    return EXIT_OK


def _javac(paths, classpath, err):
    javac = shutil.which("javac")
    if javac is None:
        print("sejc: javac not found; skipping compilation", file=err)
        return EXIT_OK
    cmd = [javac] + (["-cp", classpath] if classpath else []) + paths
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        print(proc.stderr, file=err, end="")
        print("sejc: javac rejected the generated code", file=err)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_run(ns, out, err):
    world = load_workspace(ns.workspace)
    fn = _function(world, ns.function)
    args = _arguments(world, fn, ns.args)
    unit = compile_world(world, ns.guards, ns.main_class, False, ns.post)
    print(format_result(call_with_values(unit, fn, args)), file=out)
    return EXIT_OK


def cmd_oracle(ns, out, err):
    world = load_workspace(ns.workspace)
    fn = _function(world, ns.function)
    args = _arguments(world, fn, ns.args)
    print(format_result(eval_call(world, fn, args)), file=out)
    return EXIT_OK


def cmd_check(ns, out, err):
    world = load_workspace(ns.workspace)
    rt = Runtime(compile_world(world, ns.guards, ns.main_class, False, ns.post))
    rng = make_rng(ns.seed)
    agree = total = skipped = 0
    for fn, rec in world.functions.items():
        for _ in range(ns.fuzz):
            args = [random_value(t, rng) for t in rec.main_type.inputs]
            if not guard_ok(world, fn, args):
                skipped += 1
                continue
            try:
                expected = eval_call(world, fn, args, CHECK_STEPS)
            except EvalError:
                skipped += 1
                continue
            total += 1
            try:
                got = call_with_values(rt, fn, args)
            except TargetError as exc:
                got = exc
            if results_equal(expected, got):
                agree += 1
            else:
                shown = " ".join(print_value(a) for a in args)
                print(f"mismatch: ({print_value(fn).lower()} {shown}) oracle "
                      f"{format_result(expected)} target {got}", file=err)
    print(f"calls: {total}  agree: {agree}  disagree: {total - agree}  "
          f"skipped: {skipped}", file=out)
    return EXIT_OK if agree == total else EXIT_MISMATCH


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "oracle": cmd_oracle, "check": cmd_check}


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        ns = _parser().parse_args(argv)
        return COMMANDS[ns.command](ns, out, err)
    except UsageError as exc:
        print(f"sejc: usage error: {exc}", file=err)
        return EXIT_USAGE
    except SejcError as exc:
        print(f"sejc: {exc.phase} error: {exc}", file=err)
        return exc.exit_code
    except OSError as exc:
        print(f"sejc: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

