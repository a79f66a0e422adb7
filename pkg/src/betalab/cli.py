"""Command-line interface: ``betalab <subcommand> ...``.

Output is JSON on stdout unless ``--text`` is given.  Every run also writes a
manifest (command, inputs, seed, version, timing, output digest) to stderr or
to the file named by ``--manifest``.

Exit codes: 0 success, 1 usage or input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from importlib import metadata

from . import algebraic, beta_core, ca_engine, conjugacy, factorization, sft_tools
from .algebraic import AlgebraicReal, ApproximateReal
from .errors import ApproximateModeInconclusive, BetalabError, VerificationFailed
from .shifts import BetaShift, FullShift, ProductShift

try:
    VERSION = metadata.version("artifact")
except metadata.PackageNotFoundError:  # running from a source tree
    VERSION = "0.1.0"


NOT_SOFIC_NOTE = (
    "no cycle found within the horizon; if d(beta) is not eventually periodic then S_beta is "
    "not sofic and is topologically direct prime (a cited result, conditional on non-soficity)"
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for failed verification here
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


@dataclass
class RunManifest:
    command: str
    inputs: dict
    seed: int | None
    version: str
    wall_clock_seconds: float
    output_sha256: str

    def to_json(self):
        return asdict(self)


@dataclass
class Outcome:
    payload: dict
    text: str
    exit_code: int = 0


# ---------------------------------------------------------------------------
# input parsing
# ---------------------------------------------------------------------------

def _word(text: str) -> tuple:
    try:
        return beta_core.parse_word(text)
    except ValueError as exc:
        raise UsageError(f"digit words are comma separated integers, got {text!r}") from exc


def _base(args):
    if getattr(args, "approx", None):
        return ApproximateReal(args.approx, args.precision)
    if getattr(args, "digits_of_beta", None):
        return sft_tools.beta_from_digits(_word(args.digits_of_beta))
    beta = getattr(args, "beta", None)
    if beta is None:
        raise UsageError("give the base with --beta, --digits-of-beta or --approx")
    if re.fullmatch(r"\s*\d+\s*", beta):
        return AlgebraicReal.rational(int(beta))
    if re.fullmatch(r"\s*\d+/\d+\s*", beta):
        return AlgebraicReal.rational(Fraction(beta))
    return algebraic.as_exact_base(beta)


def _descriptor(args):
    return beta_core.classify(_base(args), args.horizon)


def _load_json_or_file(text: str):
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    return text


def _matrix(text: str) -> sft_tools.EdgeSFT:
    raw = _load_json_or_file(text).strip()
    try:
        rows = json.loads(raw)
    except json.JSONDecodeError:
        rows = [[int(v) for v in line.replace(",", " ").split()] for line in raw.splitlines() if line.strip()]
    try:
        return sft_tools.EdgeSFT(rows)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad matrix: {exc}") from exc


def _edge_sft(args) -> sft_tools.EdgeSFT:
    if getattr(args, "matrix", None):
        return _matrix(args.matrix)
    if getattr(args, "digits", None):
        return sft_tools.companion_edge_sft(_word(args.digits))
    raise UsageError("give --matrix or --digits")


def _tuplify(v):
    if isinstance(v, list):
        return tuple(_tuplify(x) for x in v)
    return v


def _ambient(spec: dict):
    kind = spec.get("kind")
    if kind == "full":
        return FullShift(int(spec["n"]))
    if kind == "beta":
        if "digits" in spec:
            base = sft_tools.beta_from_digits(spec["digits"])
        else:
            base = algebraic.as_exact_base(spec["beta"])
        return BetaShift(beta_core.classify(base, int(spec.get("horizon", beta_core.DEFAULT_HORIZON))))
    if kind == "product":
        return ProductShift(_ambient(spec["left"]), _ambient(spec["right"]))
    raise UsageError(f"unknown ambient kind {kind!r}")


def _rule_from_spec(spec: dict, ambient=None) -> ca_engine.CellularAutomaton:
    builtin = spec.get("builtin")
    if builtin == "product":
        return ca_engine.product_ca(_rule_from_spec(spec["left"]), _rule_from_spec(spec["right"]))
    if ambient is None:
        if "ambient" not in spec:
            raise UsageError("rule needs an 'ambient'")
        ambient = _ambient(spec["ambient"])
    if builtin == "identity":
        return ca_engine.identity(ambient)
    if builtin == "shift":
        return ca_engine.shift_map(ambient, int(spec.get("k", 1)))
    if builtin is not None:
        raise UsageError(f"unknown builtin rule {builtin!r}")
    table = {_tuplify(block): _tuplify(img) for block, img in spec["table"]}
    return ca_engine.CellularAutomaton.from_rule(
        ambient, int(spec["memory"]), int(spec["anticipation"]), table, name=spec.get("name")
    )


def load_rule(text: str) -> ca_engine.CellularAutomaton:
    """A rule file: JSON with an ambient and a block table, or a builtin."""
    try:
        spec = json.loads(_load_json_or_file(text))
    except json.JSONDecodeError as exc:
        raise UsageError(f"rule is not valid JSON: {exc}") from exc
    return _rule_from_spec(spec)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_expand(args) -> Outcome:
    base = _base(args)
    try:
        exp = beta_core.expand_one(base, args.horizon)
    except ApproximateModeInconclusive as exc:
        exp = beta_core.BetaExpansion(exc.digits, beta_core.Unknown(len(exc.digits)), exact=False)
    payload = exp.to_json()
    payload["beta"] = beta_core._beta_json(base)
    return Outcome(payload, f"d(beta) = {exp}")


def cmd_classify(args) -> Outcome:
    desc = _descriptor(args)
    payload = desc.to_json()
    text = [f"class: {desc.shift_class.value}", f"d(beta) = {desc.expansion}", f"d*(beta) = {desc.dstar}"]
    if desc.shift_class is beta_core.ShiftClass.NOT_SOFIC_UP_TO:
        payload["note"] = NOT_SOFIC_NOTE
        text.append(NOT_SOFIC_NOTE)
    if not desc.conclusive:
        text.append("inconclusive")
    return Outcome(payload, "\n".join(text))


def cmd_code_words(args) -> Outcome:
    desc = _descriptor(args)
    words = beta_core.code_words(desc, args.max_len)
    return Outcome({"code_words": [list(w) for w in words]},
                   "\n".join(beta_core.format_word(w) for w in words))


def cmd_admissible(args) -> Outcome:
    desc = _descriptor(args)
    w = _word(args.word)
    ok = beta_core.is_admissible(desc, w)
    return Outcome({"word": list(w), "admissible": ok, "exact": desc.conclusive}, str(ok).lower())


def cmd_parse(args) -> Outcome:
    desc = _descriptor(args)
    res = beta_core.parse_code(desc, _word(args.word))
    text = " | ".join(beta_core.format_word(w) for w in res.words)
    if res.remainder:
        text += f" (remainder {beta_core.format_word(res.remainder)})"
    return Outcome(res.to_json(), text)


def cmd_zeta(args) -> Outcome:
    X = _edge_sft(args)
    z = sft_tools.zeta_denominator(X)
    payload = z.to_json()
    payload["matrix"] = [list(r) for r in X.adjacency]
    return Outcome(payload, str(z))


def cmd_periodic_counts(args) -> Outcome:
    X = _edge_sft(args)
    counts = [sft_tools.periodic_count(X, p) for p in range(1, args.max_p + 1)]
    return Outcome({"counts": counts}, "\n".join(f"p={p}: {c}" for p, c in enumerate(counts, 1)))


def cmd_product(args) -> Outcome:
    X, Y = _matrix(args.left), _matrix(args.right)
    P = sft_tools.product_sft(X, Y)
    z = sft_tools.zeta_denominator(P)
    payload = {"matrix": [list(r) for r in P.adjacency], "zeta_denominator": z.to_json()}
    text = "\n".join(" ".join(str(v) for v in row) for row in P.adjacency) + f"\nzeta denominator: {z}"
    return Outcome(payload, text)


def cmd_scale_test(args) -> Outcome:
    v = factorization.integer_split_test(args.n, _word(args.digits), args.horizon)
    lines = [f"verdict: {v.kind.value}", f"scaled word: {beta_core.format_word(v.scaled_word)}", v.details]
    if v.zeta_left is not None:
        lines += [f"zeta of S_(n beta): {v.zeta_left}", f"zeta of S_n x S_beta: {v.zeta_right}"]
    return Outcome(v.to_json(), "\n".join(lines))


def cmd_prime_check(args) -> Outcome:
    X = _edge_sft(args)
    rep = factorization.primeness_obstruction(X, args.max_period)
    payload = rep.to_json()
    lines = [f"periodic counts: {rep.periodic_counts}", f"verdict: {rep.verdict.value}"]
    for a in rep.attempted_splits:
        if a.obstruction:
            lines.append(f"  refuted: {a.obstruction['text']}")
        else:
            lines.append(f"  candidate: f = {list(a.f)}, g = {list(a.g)}")
    lines.append(rep.details)
    return Outcome(payload, "\n".join(lines))


def cmd_conjugacy(args) -> Outcome:
    w = _word(args.digits)
    rep = conjugacy.verify_conjugacy(args.n, w, args.max_period)
    payload = rep.to_json()
    if args.emit_rule_table:
        payload["phi"] = conjugacy.build_phi(args.n, w).to_json()
        payload["psi"] = conjugacy.build_phi_inverse(args.n, w).to_json()
    lines = [f"conjugacy verified for periods <= {args.max_period}"]
    lines += [f"p={c.p}: {c.product_points} = {c.b_points}" for c in rep.census]
    return Outcome(payload, "\n".join(lines))


def _window(text: str) -> tuple:
    m = re.fullmatch(r"\s*(-?\d+)\s*:\s*(-?\d+)\s*", text)
    if not m:
        raise UsageError("window must look like L:R")
    return int(m[1]), int(m[2])


def cmd_ca_run(args) -> Outcome:
    F = load_rule(args.rule)
    x = ca_engine.parse_configuration(args.config)
    st = ca_engine.space_time(F, x, args.steps, _window(args.window))
    if args.pgm:
        with open(args.pgm, "wb") as fh:
            fh.write(st.pgm())
    final = ca_engine.iterate(F, x, args.steps - 1)
    payload = st.to_json()
    payload["final"] = final.to_json()
    return Outcome(payload, st.ascii())


def cmd_ca_blocking(args) -> Outcome:
    F = load_rule(args.rule)
    cert = ca_engine.verify_blocking(F, _tuplify_word(args.word), args.e, args.p, args.n)
    text = f"{cert.status} {cert.verified_up_to}"
    if cert.witness is not None:
        w = cert.witness
        text = (f"Refuted at step {w.step}: extensions {ca_engine._fmt(w.x)} and {ca_engine._fmt(w.y)} "
                f"(starting at {w.start}) give windows {ca_engine._fmt(w.window_x)} and {ca_engine._fmt(w.window_y)}")
    return Outcome(cert.to_json(), text, 0 if cert.verified else 2)


def _tuplify_word(text: str) -> tuple:
    return ca_engine._parse_symbols(text)


def cmd_ca_probe(args) -> Outcome:
    F = load_rule(args.rule)
    m = re.fullmatch(r"\s*(-?\d+)\s*/\s*(\d+)\s*", args.dir)
    if not m:
        raise UsageError("direction must look like P/Q")
    res = ca_engine.sensitivity_probe(F, (int(m[1]), int(m[2])), args.trials, args.steps, args.seed)
    text = (f"direction {m[1]}/{m[2]}: radius min {res.min} median {res.median} max {res.max} "
            f"(median at half time {res.median_half}) -> {res.flag} [heuristic]")
    return Outcome(res.to_json(), text)


def cmd_ca_candidate(args) -> Outcome:
    desc = _descriptor(args)
    c = ca_engine.blocking_candidate_from_expansion(desc, args.r)
    return Outcome(c.to_json(), f"p = {beta_core.format_word(c.word)}, e = {c.e}, offset = {c.offset}")


def reproduce_gamma_cubed() -> dict:
    gamma = algebraic.unique_positive_root(algebraic.parse_polynomial("x^3-x^2-x-1"))
    d_gamma = beta_core.expand_one(gamma)
    g2 = (gamma.element() ** 2)
    beta = g2.to_algebraic_real()
    d_beta = beta_core.expand_one(beta)
    A = sft_tools.companion_edge_sft(d_beta.head)
    rep = factorization.primeness_obstruction(A, 2)
    return {
        "d_gamma": list(d_gamma.head),
        "d_gamma_tail": d_gamma.tail.kind,
        "beta_minimal_polynomial": g2.minimal_polynomial().format(),
        "d_beta": list(d_beta.head),
        "d_beta_tail": d_beta.tail.kind,
        "A": [list(r) for r in A.adjacency],
        "trace_A": A.trace_power(1),
        "trace_A2": A.trace_power(2),
        "verdict": rep.verdict.value,
        "refutations": [a.obstruction["text"] for a in rep.refutations],
        "report": rep.to_json(),
    }


def reproduce_integer_nm() -> dict:
    v = factorization.integer_split_test(2, (3,))
    rep = conjugacy.verify_conjugacy(2, (3,), 5)
    S6 = sft_tools.full_shift(6)
    return {
        "scale_test": v.to_json(),
        "conjugacy": rep.to_json(),
        "census_S6": [sft_tools.periodic_count(S6, p) for p in range(1, 6)],
    }


def cmd_reproduce(args) -> Outcome:
    if args.name == "gamma-cubed":
        r = reproduce_gamma_cubed()
        ok = r["d_gamma"] == [1, 1, 1] and r["d_beta"] == [3, 1, 1] and r["trace_A2"] == 11 \
            and r["verdict"] == "NoSplitFound"
        lines = [
            f"d(gamma) = {beta_core.format_word(r['d_gamma'])}",
            f"beta = gamma^2, minimal polynomial {r['beta_minimal_polynomial']}",
            f"d(beta) = {beta_core.format_word(r['d_beta'])}, so S_beta is an SFT",
            f"A = {r['A']}",
            f"tr(A) = {r['trace_A']}, tr(A^2) = {r['trace_A2']}",
            *[f"refuted: {t}" for t in r["refutations"]],
            f"verdict: {r['verdict']}",
        ]
    else:
        r = reproduce_integer_nm()
        ok = r["scale_test"]["kind"] == "Conjugate" and r["census_S6"] == [6**p for p in range(1, 6)]
        lines = [
            f"scale test n=2, digits 3: {r['scale_test']['kind']}",
            "conjugacy S_2 x S_3 -> S_6 verified on periodic points up to period 5",
            f"census: {r['census_S6']}",
        ]
    r["ok"] = ok
    return Outcome(r, "\n".join(lines), 0 if ok else 2)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_base(p, horizon=True):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--beta", help="integer, 'x^2-x-1' or '1,-1,-1' (highest degree first)")
    g.add_argument("--digits-of-beta", help="the finite expansion a_(d-1),...,a_0 of beta")
    g.add_argument("--approx", help="decimal value, approximate mode")
    p.add_argument("--precision", type=int, default=256, help="bits for --approx")
    if horizon:
        p.add_argument("--horizon", type=int, default=beta_core.DEFAULT_HORIZON)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="betalab", description="beta-shifts, SFTs and cellular automata")
    parser.add_argument("--text", action="store_true", help="human readable output instead of JSON")
    parser.add_argument("--manifest", help="write the run manifest to this file instead of stderr")
    parser.add_argument("--seed", type=int, default=None, help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("expand", help="expansion of one in base beta")
    _add_base(p)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("classify", help="SFT, sofic or undecided")
    _add_base(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("code-words", help="words of the prefix code Y_beta")
    _add_base(p)
    p.add_argument("--max-len", type=int, required=True)
    p.set_defaults(func=cmd_code_words)

    p = sub.add_parser("admissible", help="membership in the language of S_beta")
    _add_base(p)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("parse", help="factor a word into code words")
    _add_base(p)
    p.add_argument("--word", required=True)
    p.set_defaults(func=cmd_parse)

    for name, func in [("zeta", cmd_zeta), ("periodic-counts", cmd_periodic_counts)]:
        p = sub.add_parser(name)
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--digits", help="SFT expansion word; uses its companion matrix")
        g.add_argument("--matrix", help="JSON array of arrays, text grid, or a file holding either")
        if name == "periodic-counts":
            p.add_argument("--max-p", type=int, required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("product", help="product edge shift")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("scale-test", help="is S_(n beta) conjugate to S_n x S_beta")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--digits", required=True)
    p.add_argument("--horizon", type=int, default=beta_core.DEFAULT_HORIZON)
    p.set_defaults(func=cmd_scale_test)

    p = sub.add_parser("prime-check", help="obstructions to a direct factorization")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--matrix")
    g.add_argument("--digits")
    p.add_argument("--max-period", type=int, default=4)
    p.set_defaults(func=cmd_prime_check)

    p = sub.add_parser("conjugacy", help="build and verify phi : S_n x X_C -> X_B")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--digits", required=True)
    p.add_argument("--max-period", type=int, default=6)
    p.add_argument("--emit-rule-table", action="store_true")
    p.set_defaults(func=cmd_conjugacy)

    ca = sub.add_parser("ca", help="cellular automata")
    casub = ca.add_subparsers(dest="ca_command", parser_class=_Parser)
    casub.required = True

    p = casub.add_parser("run", help="space-time diagram")
    p.add_argument("--rule", required=True, help="rule file or inline JSON")
    p.add_argument("--config", required=True, help="'u^inf w . w v^inf'")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--window", required=True, help="L:R")
    p.add_argument("--pgm", help="also write a binary PGM image")
    p.set_defaults(func=cmd_ca_run)

    p = casub.add_parser("blocking", help="bounded exact check of a blocking word")
    p.add_argument("--rule", required=True)
    p.add_argument("--word", required=True)
    p.add_argument("--e", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_ca_blocking)

    p = casub.add_parser("probe", help="heuristic directional sensitivity probe")
    p.add_argument("--rule", required=True)
    p.add_argument("--dir", required=True, help="P/Q")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--steps", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_ca_probe)

    p = casub.add_parser("candidate", help="blocking word candidate from d(beta)")
    _add_base(p)
    p.add_argument("--r", type=int, required=True)
    p.set_defaults(func=cmd_ca_candidate)

    p = sub.add_parser("reproduce", help="rerun a worked example")
    p.add_argument("name", choices=["integer-nm", "gamma-cubed"])
    p.set_defaults(func=cmd_reproduce)
    return parser


def _inputs(args) -> dict:
    skip = {"func", "text", "manifest"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        outcome = args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"betalab: error: {exc}\n")
        return 1
    except VerificationFailed as exc:
        payload = {"error": "verification failed", "message": str(exc), "witness": repr(exc.witness)}
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
        return 2
    except (BetalabError, ValueError) as exc:
        sys.stderr.write(f"betalab: error: {exc}\n")
        return 1
    out = outcome.text if args.text else json.dumps(outcome.payload, indent=2, default=_default)
    out += "\n"
    sys.stdout.write(out)
    manifest = RunManifest(
        command=args.command + (f" {args.ca_command}" if getattr(args, "ca_command", None) else ""),
        inputs=_inputs(args),
        seed=getattr(args, "seed", None),
        version=VERSION,
        wall_clock_seconds=round(time.perf_counter() - started, 6),
        output_sha256=hashlib.sha256(out.encode()).hexdigest(),
    )
    text = json.dumps(manifest.to_json(), default=_default)
    if args.manifest:
        with open(args.manifest, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stderr.write(text + "\n")
    return outcome.exit_code


def _default(o):
    if isinstance(o, (tuple, set)):
        return list(o)
    if isinstance(o, Fraction):
        return str(o)
    return str(o)


if __name__ == "__main__":
    raise SystemExit(main())
