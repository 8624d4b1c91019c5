"""Command-line front end.  Every subcommand is a thin wrapper over library calls."""

import argparse
import json
import os
import sys

import numpy as np

from . import automorphisms as au
from . import ia_kernel, qreduce, stabilizer, symplectic, words
from .errors import InputError, RaagError
from .graph import parse_graph


def _read(arg):
    """Inline payload, ``@path``, ``-`` for stdin, or an existing file path."""
    if arg == "-":
        return sys.stdin.read()
    if arg.startswith("@"):
        path = arg[1:]
    elif os.path.isfile(arg):
        path = arg
    else:
        return arg
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _json(arg, what):
    text = _read(arg)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"malformed {what} JSON at line {e.lineno} column {e.colno} "
                         f"(char {e.pos}): {e.msg}") from None


def _graph(args):
    return parse_graph(_read(args.graph))


def _structure(args, g):
    return symplectic.structure_from_json(g, _json(args.structure, "structure"))


def _auto(args, g):
    return au.automorphism_from_json(g, _json(args.auto, "automorphism"))


def _caps(args):
    return {"cap_vertices": args.cap_vertices, "cap_states": args.cap_states}


# -- subcommands ----------------------------------------------------------------

def cmd_dominance(args):
    g = _graph(args)
    strict = [[g.names[x], g.names[y]] for x in range(g.n) for y in range(g.n)
              if x != y and g.dominates(x, y) and not g.dominates(y, x)]
    classes = []
    for members, adj in g.domination_classes():
        kind = "singleton" if adj is None else ("adjacent" if adj else "non-adjacent")
        classes.append({"members": [g.names[v] for v in members], "kind": kind})
    report = {"strict": strict, "classes": classes,
              "table": {g.names[x]: [g.names[y] for y in range(g.n) if x != y and g.dominates(x, y)]
                        for x in range(g.n)}}
    lines = ["strict dominations:"] + [f"  {x} >= {y}" for x, y in strict]
    lines += ["classes:"] + [f"  {{{', '.join(c['members'])}}} {c['kind']}" for c in classes]
    return report, lines


def cmd_normalize(args):
    g = _graph(args)
    w = words.normalize(g, g.parse_word(args.word))
    return {"normal": g.word_str(w), "length": len(w),
            "support": sorted(g.names[v] for v in words.support(g, w))}, [g.word_str(w) or "1"]


def cmd_conj_length(args):
    g = _graph(args)
    c = words.cyclic_canonical(g, g.parse_word(args.word), cap=args.cap_states)
    return {"cyclic": g.word_str(c), "length": len(c)}, [f"{len(c)}  [{g.word_str(c)}]"]


def cmd_omega(args):
    g = _graph(args)
    omega, long_, short = au.enumerate_omega(g, cap_vertices=args.cap_vertices,
                                             cap_omega=args.cap_omega)
    report = {"omega": len(omega), "long_range": len(long_), "short_range": len(short),
              "type1": sum(1 for t in omega if isinstance(t, au.Type1))}
    lines = [f"omega {len(omega)}  long-range {len(long_)}  short-range {len(short)}"]
    if args.list:
        report["elements"] = [t.label(g) for t in omega]
        lines += [t.label(g) for t in omega]
    return report, lines


def cmd_apply(args):
    g = _graph(args)
    alpha = _auto(args, g)
    w = g.parse_word(args.word)
    img = alpha.apply_cyclic(w) if args.cyclic else alpha(w)
    return {"image": g.word_str(img), "length": len(img)}, [g.word_str(img) or "1"]


def _genset_report(gs):
    return gs.to_json(), [f"{gs.name}: {len(gs)} elements {gs.counts()}"] + \
        [f"  [{a.tag}] {a.label()}" for a in gs]


def cmd_ia_gens(args):
    g = _graph(args)
    if args.Z is not None:
        Z = [g._vid(z) for z in args.Z.split(",") if z]
        autos = ia_kernel.kz_generators(g, Z)
        name = "K_Z"
    else:
        autos = ia_kernel.iaut_generators(g, cap=args.cap_vertices)
        name = "IAut"
    eye = np.eye(g.n, dtype=np.int64)
    ok = all(np.array_equal(au.homology_matrix(a), eye) for a in autos)
    gs = stabilizer.GeneratorSet(name, autos, notes={"identity_homology": ok})
    return _genset_report(gs)


def cmd_verify_identities(args):
    g = _graph(args)
    rep = ia_kernel.verify_rewriting_identities(g)
    d = rep.to_json()
    return d, [f"passed {d['passed']}  failed {d['failed']}  skipped {d['skipped']}"]


def cmd_relations(args):
    g = _graph(args)
    Z = None if args.Z is None else [g._vid(z) for z in args.Z.split(",") if z]
    d = ia_kernel.check_presentation_relations(g, Z)
    return d, [f"passed {d['passed']}  failed {d['failed']}  skipped {d['skipped']}"]


def cmd_qreduce(args):
    g = _graph(args)
    s = _structure(args, g)
    M = _json(args.matrix, "matrix")
    try:
        M = np.array(M, dtype=np.int64)
    except (TypeError, ValueError, OverflowError):
        raise InputError("matrix must be a list of integer rows") from None
    if M.ndim != 2:
        raise InputError("matrix must be a list of integer rows")
    f = qreduce.q_reduce(M, s)
    d = f.to_json()
    lines = [f"{len(f.factors)} factors, verified {d['verified']}"]
    lines += [f"  {q.label()}^{p}" for q, p in f.factors]
    return d, lines


def cmd_delta(args):
    g = _graph(args)
    s = _structure(args, g)
    d = stabilizer.build_delta(s, **_caps(args))
    if args.dot:
        return None, [d.to_dot().rstrip("\n")]
    rep = d.to_json()
    return rep, [f"{rep['vertex_count']} vertices, {rep['edge_count']} edges "
                 f"({rep['loop_count']} loops)"] + ["  " + v for v in rep["vertices"]]


def cmd_stab_gens(args):
    g = _graph(args)
    s = _structure(args, g)
    res = stabilizer.stabilizer_generators(s, **_caps(args))
    gs = res.generators
    d = gs.to_json()
    d["independent"] = res.independent.to_json()
    d["tree"] = {k: v for k, v in res.tree.to_json().items() if k != "tree_edges"}
    return d, _genset_report(gs)[1]


def cmd_mod_gens(args):
    g = _graph(args)
    s = _structure(args, g)
    gs = stabilizer.mod_generators(s, **_caps(args))
    return _genset_report(gs)


def cmd_check_structure(args):
    g = _graph(args)
    s = _structure(args, g)
    d = s.describe()
    d["f_w"] = symplectic.f_of_surface_relator(g, s.w).to_json(g)
    return d, [f"valid: k={s.k}  w = {g.word_str(s.w) or '1'}  Q = {s.Q.to_json(g)}"]


def cmd_preserves(args):
    g = _graph(args)
    s = _structure(args, g)
    alpha = _auto(args, g)
    fixes_w = alpha(s.w) == s.w
    fixes_q = symplectic.fixes_q(au.homology_matrix(alpha), s)
    d = {"preserves": fixes_w and fixes_q, "fixes_w": fixes_w, "fixes_Q": fixes_q,
         "image_w": g.word_str(alpha(s.w))}
    return d, [f"preserves {d['preserves']} (w: {fixes_w}, Q: {fixes_q})"]


COMMANDS = {
    "dominance": (cmd_dominance, ["graph"], "domination table and classes"),
    "normalize": (cmd_normalize, ["graph", "word"], "canonical normal form of a word"),
    "conj-length": (cmd_conj_length, ["graph", "word"], "cyclic canonical form and length"),
    "omega": (cmd_omega, ["graph"], "count (and list) Whitehead automorphisms"),
    "apply": (cmd_apply, ["graph", "auto", "word"], "apply an automorphism to a word"),
    "ia-gens": (cmd_ia_gens, ["graph"], "generators of IAut, or of K_Z with --Z"),
    "verify-identities": (cmd_verify_identities, ["graph"], "check conjugation identities"),
    "relations": (cmd_relations, ["graph"], "check presentation relations"),
    "qreduce": (cmd_qreduce, ["graph", "structure", "matrix"], "factor a Q-preserving matrix"),
    "delta": (cmd_delta, ["graph", "structure"], "Whitehead graph of [w]"),
    "stab-gens": (cmd_stab_gens, ["graph", "structure"], "stabilizer generators"),
    "mod-gens": (cmd_mod_gens, ["graph", "structure"], "generators of Mod(graph, w, Q)"),
    "check-structure": (cmd_check_structure, ["graph", "structure"], "validate a structure"),
    "preserves": (cmd_preserves, ["graph", "structure", "auto"], "does an automorphism fix (w, Q)"),
}

_HELP = {"graph": "graph text/JSON, inline or a file path",
         "word": "word such as 'a b^-1 [c,d]'",
         "auto": "automorphism JSON token or list of tokens",
         "structure": 'structure JSON such as {"pairs": [["a","b"]]}',
         "matrix": "integer matrix as a JSON list of rows"}


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("caps must be positive")
    return v


def _common(suppress):
    """Global flags.  Subcommand copies default to SUPPRESS so that a flag
    given before the subcommand name is not overwritten."""
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--cap-vertices", type=_positive, default=d(8))
    p.add_argument("--cap-omega", type=_positive, default=d(au.DEFAULT_OMEGA_CAP))
    p.add_argument("--cap-states", type=_positive, default=d(stabilizer.DEFAULT_DELTA_STATES))
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
    return p


def build_parser():
    parser = argparse.ArgumentParser(prog="raagmod", parents=[_common(False)],
                                     description="Computations in right-angled Artin groups.")
    common = _common(True)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, pos, help_) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_)
        for arg in pos:
            p.add_argument(arg, help=_HELP[arg])
        if name == "omega":
            p.add_argument("--list", action="store_true")
        if name == "delta":
            p.add_argument("--dot", action="store_true")
        if name == "apply":
            p.add_argument("--cyclic", action="store_true")
        if name in ("ia-gens", "relations"):
            p.add_argument("--Z", default=None, help="comma-separated vertex subset")
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code else 0
    func = COMMANDS[args.command][0]
    try:
        report, lines = func(args)
    except RaagError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except RecursionError:
        print("error: ResourceError: recursion limit", file=sys.stderr)
        return 4
    if args.json and report is not None:
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return 0


def main_exit():
    sys.exit(main())
