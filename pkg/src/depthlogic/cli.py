"""Command-line front end.

Exit status: 0 when the query holds (true, SAT, clean sweep), 1 when it
does not (false, UNSAT, countermodel), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import TextIO

from . import axiom_lab, muddy
from .formula import Formula, FormulaSyntaxError, Logic, FragmentError, modal_depth, parse, render
from .model import KripkeModel, ModelFormatError, export, export_dot, load_file, size_norm
from .satisfiability import Sat, satisfiable
from .semantics import Semantics, SemanticsError, designated, truth_set, update

WORLD_CAP = 10_000
SEMS = {s.value: s for s in Semantics}


class UsageError(Exception):
    pass


def _formula(text: str) -> Formula:
    try:
        return parse(text)
    except FormulaSyntaxError as e:
        raise UsageError(f"formula {e}") from None


def _model(path: str) -> KripkeModel:
    try:
        return load_file(path)
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror or e}") from None
    except ModelFormatError as e:
        raise UsageError(f"{path}: {e}") from None


def _sem(name: str) -> Semantics:
    try:
        return SEMS[name.lower()]
    except KeyError:
        raise UsageError(f"unknown semantics {name!r} (choose from {', '.join(SEMS)})") from None


# -- session -------------------------------------------------------------------


@dataclass
class Session:
    model: KripkeModel
    sem: Semantics = Semantics.DPAL
    world: str | None = None  # designated world, followed through updates
    world_cap: int = WORLD_CAP
    history: list[tuple[Formula, KripkeModel, str | None]] = field(default_factory=list)

    def announce(self, f: Formula) -> tuple[int, int, bool]:
        """Apply ``f``; returns (size before, size after, whether f was false at the designated world)."""
        ann = truth_set(self.model, f, self.sem)
        false_here = (self.world not in ann) if self.world is not None else not ann
        new = update(self.model, f, self.sem)
        if len(new.worlds) > self.world_cap:
            raise UsageError(f"update would grow the model to {len(new.worlds)} worlds (cap {self.world_cap})")
        before = size_norm(self.model)
        self.history.append((f, self.model, self.world))
        self.model = new
        if self.world is not None:
            self.world = designated(self.sem, self.world) if self.world in ann else None
        return before, size_norm(new), false_here

    def undo(self) -> Formula:
        if not self.history:
            raise UsageError("nothing to undo")
        f, self.model, self.world = self.history.pop()
        return f

    def resolve(self, world: str) -> str:
        """A world name of the current model; names from before the announcements are followed forward."""
        if world in self.model.world_set:
            return world
        name = world
        for f, prior, _ in self.history:
            if name not in prior.world_set:
                break
            name = designated(self.sem, name)
        if name in self.model.world_set:
            return name
        raise UsageError(f"unknown world {world!r}")


REPL_HELP = """commands:
  announce <formula>    update the model
  ask <world> <formula> evaluate at a world
  depths                show the depth table
  sem <dpal|edpal|adpal>
  undo
  export dot <path>
  quit"""


def _depth_table(m: KripkeModel) -> str:
    width = max(len(w) for w in m.worlds)
    lines = [" " * width + "  " + " ".join(m.agents)]
    for w in m.worlds:
        lines.append(w.ljust(width) + "  " + " ".join(str(m.depth[(a, w)]).rjust(len(a)) for a in m.agents))
    return "\n".join(lines)


def repl(session: Session, stdin: TextIO, out: TextIO, err: TextIO) -> int:
    interactive = stdin.isatty()
    while True:
        if interactive:
            out.write("> ")
            out.flush()
        line = stdin.readline()
        if not line:
            return 0
        try:
            parts = line.strip().split(None, 1)
            if not parts or parts[0].startswith("#"):
                continue
            cmd, rest = parts[0], parts[1] if len(parts) > 1 else ""
            if cmd in ("quit", "exit"):
                return 0
            if cmd == "help":
                print(REPL_HELP, file=out)
            elif cmd == "announce":
                f = _formula(rest)
                before, after, false_here = session.announce(f)
                if false_here:
                    where = "the designated world" if session.history[-1][2] else "every world"
                    print(f"warning: {render(f)} is false at {where}", file=err)
                print(f"size {before} -> {after} ({after - before:+d}), {len(session.model.worlds)} worlds", file=out)
            elif cmd == "ask":
                world, _, text = rest.partition(" ")
                if not text:
                    raise UsageError("usage: ask <world> <formula>")
                w = session.resolve(world)
                print("true" if w in truth_set(session.model, _formula(text), session.sem) else "false", file=out)
            elif cmd == "depths":
                print(_depth_table(session.model), file=out)
            elif cmd == "sem":
                if rest:
                    session.sem = _sem(rest.strip())
                print(session.sem.value, file=out)
            elif cmd == "undo":
                print(f"undid {render(session.undo())}", file=out)
            elif cmd == "export":
                fmt, _, path = rest.partition(" ")
                if fmt != "dot" or not path:
                    raise UsageError("usage: export dot <path>")
                with open(path.strip(), "w") as fh:
                    fh.write(export_dot(session.model))
                print(f"wrote {path.strip()}", file=out)
            else:
                raise UsageError(f"unknown command {cmd!r} (try help)")
        except (UsageError, SemanticsError, OSError) as e:
            print(f"error: {e}", file=err)


# -- subcommands ---------------------------------------------------------------


def _cmd_check(args, out, err) -> int:
    m = _model(args.model)
    f = _formula(args.formula)
    sem = _sem(args.sem)
    holds = truth_set(m, f, sem)
    if args.world is not None:
        if args.world not in m.world_set:
            raise UsageError(f"unknown world {args.world!r}")
        ok = args.world in holds
        print("true" if ok else "false", file=out)
        return 0 if ok else 1
    for w in m.worlds:
        print(f"{w}\t{'true' if w in holds else 'false'}", file=out)
    return 0 if len(holds) == len(m.worlds) else 1


def _cmd_update(args, out, err) -> int:
    m = _model(args.model)
    new = update(m, _formula(args.formula), _sem(args.sem))
    print(export(new, "dot" if args.out == "dot" else "native"), file=out, end="")
    return 0


def _cmd_sat(args, out, err) -> int:
    f = _formula(args.formula)
    logic = Logic.EDPAL if args.logic == "edpal" else Logic.DBEL
    try:
        res = satisfiable(f, logic)
    except FragmentError as e:
        raise UsageError(str(e)) from None
    print(str(res), file=out)
    if isinstance(res, Sat):
        if args.out != "text":
            print(export(res.witness, args.out), file=out, end="")
        else:
            print(f"witness world {res.world} of {len(res.witness.worlds)}", file=out)
        return 0
    return 1


def _spec(args, n) -> muddy.DepthSpec:
    if args.depths is None:
        return muddy.Constant(tuple(max(0, args.k - 1 - i) for i in range(n)))
    try:
        return muddy.parse_depths(args.depths, n)
    except ValueError as e:
        raise UsageError(f"--depths: {e}") from None


def _cmd_muddy(args, out, err) -> int:
    n, k = args.n, args.k
    if not 1 <= k <= n <= muddy.MAX_CHILDREN:
        raise UsageError(f"need 1 <= k <= n <= {muddy.MAX_CHILDREN}")
    sems = [_sem(args.sem)] if args.sem else list(Semantics)
    if args.theorem == "upper":
        if n != k:
            raise UsageError("the upper-bound check uses n = k")
        spec = _spec(args, n)
        print(export(muddy.muddy_model(n, k, spec).model, "native"), file=out)
        rows = muddy.upper_bound(k, [spec], sems)
        print("semantics  ladder  chain  pass", file=out)
        ok = True
        for _, sem, ladder, implied in rows:
            print(f"{sem.value:<9}  {str(ladder).lower():<6}  {str(implied).lower():<5}  "
                  f"{'ok' if implied else 'FAIL'}", file=out)
            ok &= implied
        return 0 if ok else 1
    if args.theorem == "lower":
        rep = muddy.lower_bound(n, k, at=args.at, unambiguous_only=args.unambiguous)
        print(f"n={n} k={k} at={args.at} depth functions={rep.depth_functions} "
              f"classes checked={rep.classes_checked} failures={rep.failures}", file=out)
        if rep.counterexample is not None:
            print(f"first failure at world {rep.world}:", file=out)
            print(export(rep.counterexample, "native"), file=out, end="")
        return 0 if rep.ok else 1
    inst = muddy.muddy_model(n, k, _spec(args, n))
    print(export(inst.model, "native"), file=out)
    checks = []
    for text in ([muddy.AMNESIA] if args.theorem == "amnesia" else [muddy.LEAKAGE]):
        f = parse(text)
        truthy = Semantics.EDPAL if args.theorem == "amnesia" else Semantics.ADPAL
        for sem in sems:
            checks.append(muddy.Check(f"{text} [{sem.value}]", sem is truthy, muddy.holds(inst, f, sem)))
    for c in checks:
        print(f"{'ok  ' if c.ok else 'FAIL'}  {c.name}: expected {str(c.expected).lower()}, "
              f"got {str(c.got).lower()}", file=out)
    return 0 if all(c.ok for c in checks) else 1


def _cmd_axioms(args, out, err) -> int:
    bounds = axiom_lab.ModelBounds(args.max_worlds, tuple(args.agents), tuple(args.atoms), args.max_depth)
    sems = [_sem(args.sem)] if args.sem else None
    result = axiom_lab.run_suite(args.table, bounds, sems)
    for rep in result.reports:
        expected_bad = rep.schema.name in result.suite.expect_invalid
        status = "countermodel" if not rep.clean else "clean"
        flag = "ok" if rep.clean != expected_bad else "UNEXPECTED"
        print(f"{rep.schema.name:<28} {rep.sem.value:<6} {len(rep.results):>4} instances "
              f"{rep.checked:>9} models  {status:<12} {flag}", file=out)
        if args.verbose:
            for r in rep.failures[:1]:
                print(f"  {render(r.formula)} fails at {r.countermodel.world} of:", file=out)
                print("  " + export(r.countermodel.model, "native").replace("\n", "\n  ").rstrip(), file=out)
    return 0 if result.ok else 1


def _cmd_repl(args, out, err, stdin) -> int:
    if args.model:
        m = _model(args.model)
        world = args.world
    else:
        n, k = args.muddy
        inst = muddy.muddy_model(n, k, _spec(argparse.Namespace(depths=args.depths, k=k), n))
        m, world = inst.model, args.world or inst.true_world
    if world is not None and world not in m.world_set:
        raise UsageError(f"unknown world {world!r}")
    session = Session(m, _sem(args.sem), world, args.world_cap)
    return repl(session, stdin, out, err)


def _cmd_fmt(args, out, err) -> int:
    print(render(_formula(args.formula)), file=out)
    return 0


def _cmd_depth(args, out, err) -> int:
    print(modal_depth(_formula(args.formula)), file=out)
    return 0


def _pair(text: str) -> tuple[int, int]:
    try:
        n, k = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected N,K") from None
    return n, k


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="depthlogic", description="Depth-bounded epistemic logic toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def model_args(sp, world=True):
        sp.add_argument("--model", required=True, help="model file, or builtin:<name>")
        if world:
            sp.add_argument("--world")
        sp.add_argument("--sem", default="dpal", choices=list(SEMS))

    sp = sub.add_parser("check", help="evaluate a formula on a model")
    model_args(sp)
    sp.add_argument("formula")

    sp = sub.add_parser("update", help="print the model after an announcement")
    model_args(sp, world=False)
    sp.add_argument("--out", default="native", choices=["text", "native", "dot"])
    sp.add_argument("formula")

    sp = sub.add_parser("sat", help="decide satisfiability")
    sp.add_argument("--logic", default="dbel", choices=["dbel", "edpal"])
    sp.add_argument("--out", default="text", choices=["text", "native", "dot"])
    sp.add_argument("formula")

    sp = sub.add_parser("muddy", help="muddy children experiments")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--depths", help='constant depths, e.g. "0=2,1=1,2=0"')
    sp.add_argument("--theorem", required=True, choices=["upper", "lower", "amnesia", "leakage"])
    sp.add_argument("--sem", choices=list(SEMS))
    sp.add_argument("--at", default="every", choices=["every", "true"], help="worlds checked by the lower bound")
    sp.add_argument("--unambiguous", action="store_true", help="lower bound over unambiguous depths only")

    sp = sub.add_parser("axioms", help="sweep an axiom table or property suite")
    sp.add_argument("--table", required=True, choices=list(axiom_lab.SUITES))
    sp.add_argument("--max-worlds", type=int, default=3)
    sp.add_argument("--max-depth", type=int, default=3)
    sp.add_argument("--agents", nargs="+", default=["a", "b"])
    sp.add_argument("--atoms", nargs="+", default=["p", "q"])
    sp.add_argument("--sem", choices=list(SEMS))
    sp.add_argument("-v", "--verbose", action="store_true")

    sp = sub.add_parser("repl", help="interactive announcements")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--model")
    src.add_argument("--muddy", type=_pair, metavar="N,K")
    sp.add_argument("--depths")
    sp.add_argument("--world")
    sp.add_argument("--sem", default="dpal", choices=list(SEMS))
    sp.add_argument("--world-cap", type=int, default=WORLD_CAP)

    sp = sub.add_parser("fmt", help="pretty-print a formula")
    sp.add_argument("formula")
    sp = sub.add_parser("depth", help="print the modal depth of a formula")
    sp.add_argument("formula")
    return p


def run(argv: list[str] | None = None, stdin: TextIO | None = None, stdout: TextIO | None = None,
        stderr: TextIO | None = None) -> int:
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    old = sys.stdout, sys.stderr
    sys.stdout, sys.stderr = out, err  # argparse writes usage and help to the process streams
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    finally:
        sys.stdout, sys.stderr = old
    handlers = {
        "check": _cmd_check, "update": _cmd_update, "sat": _cmd_sat, "muddy": _cmd_muddy,
        "axioms": _cmd_axioms, "fmt": _cmd_fmt, "depth": _cmd_depth,
    }
    try:
        if args.command == "repl":
            return _cmd_repl(args, out, err, stdin)
        return handlers[args.command](args, out, err)
    except (UsageError, SemanticsError, ValueError) as e:
        print(f"error: {e}", file=err)
        return 2


def main() -> None:
    sys.exit(run())


__all__ = ["Session", "WORLD_CAP", "build_parser", "main", "repl", "run"]
