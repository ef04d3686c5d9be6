"""Command-line entry point.

Every subcommand reads its inputs from flags (or a JSON config file given
with ``--config``) and writes a line-oriented report::

    # resistkit-report v1
    command: cert-search
    config: {...}
    result: found
    ...

Exit codes: 0 definitive positive, 1 definitive negative, 2 bounded search
inconclusive, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import binomial, certificates, freiheitssatz, magnus, sentences
from .algebra import enumerate_units, parse_algebra
from .errors import BadParameters, ResistKitError
from .groups import (
    Affine,
    FiniteCyclic,
    FreeGroup,
    FreeProductFreeAbelian,
    WreathZZ,
    parse_group,
    power_substitution_N,
    split_top_level,
    wreath_generators,
)
from .scalars import NumberField, PrimeField, parse_field
from .words import Alphabet, identifiers_in, parse_word

REPORT_HEADER = "# resistkit-report v1"

EXIT_POSITIVE = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_ERROR = 3


@dataclass
class RunConfig:
    field: str = "Q"
    group: str | None = None
    radius: int = 1
    pair_cap: int = 1_000_000
    degree: int = magnus.DEFAULT_DEGREE
    max_cells: int = sentences.DEFAULT_MAX_CELLS
    out: str | None = None
    format: str = "native"
    threads: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("radius", "pair_cap", "degree", "max_cells", "threads"):
            if getattr(self, name) < 1:
                raise BadParameters(f"{name} must be positive")

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise BadParameters(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


CONFIG_KEYS = [f.name for f in dataclasses.fields(RunConfig)]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


# ---------------------------------------------------------------------------
# helpers


class Report:
    def __init__(self, command: str, config: RunConfig):
        self.lines = [REPORT_HEADER, f"command: {command}", f"config: {config.to_json()}"]

    def add(self, key: str, value) -> None:
        self.lines.append(f"{key}: {value}")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def _group_for(cfg: RunConfig, *texts: str, field_spec=None):
    if cfg.group:
        return parse_group(cfg.group)
    names = set()
    for t in texts:
        if t:
            names.update(identifiers_in(t))
    if isinstance(field_spec, NumberField):
        names.discard("t")
    if not names:
        raise BadParameters("cannot infer a group; pass --group")
    return FreeGroup(Alphabet(tuple(sorted(names))))


def _element(cfg: RunConfig, text: str | None):
    if not text:
        raise BadParameters("--r is required")
    spec = parse_field(cfg.field)
    ctx = _group_for(cfg, text, field_spec=spec)
    return parse_algebra(text, ctx, spec)


def _need(value, flag: str):
    if value is None:
        raise BadParameters(f"{flag} is required")
    return value


def _write_cert(cert, path: str | None, report: Report) -> None:
    text = certificates.format_certificate(cert)
    if path:
        Path(path).write_text(text)
        report.add("certificate_file", path)
    else:
        for line in text.splitlines():
            report.add("certificate", line)


def _sandwich_text(ctx, sandwiches) -> str:
    return "; ".join(f"{c} | {ctx.format_elem(u)} | {ctx.format_elem(v)}" for c, u, v in sandwiches)


# ---------------------------------------------------------------------------
# subcommands; each returns an exit code and fills the report


def cmd_parse(cfg, args, rep):
    r = _element(cfg, args.r)
    rep.add("group", r.ctx.text())
    rep.add("field", r.spec.text())
    rep.add("element", r)
    rep.add("support_size", len(r))
    rep.add("result", "parsed")
    return EXIT_POSITIVE


def cmd_check_strong(cfg, args, rep):
    r = _element(cfg, args.r)
    check = freiheitssatz.strongly_reduced_check(r)
    rep.add("result", "pass" if check else "fail")
    if not check:
        rep.add("condition", check.condition)
        rep.add("symbol", check.symbol)
    return EXIT_POSITIVE if check else EXIT_NEGATIVE


def cmd_reduce_c(cfg, args, rep):
    r = _element(cfg, args.r)
    red = freiheitssatz.c_reduction(r)
    rep.add("u", red.u)
    rep.add("reduced", red.r)
    for k, v in red.checks.items():
        rep.add(f"check_{k}", v)
    rep.add("same_involvement", red.same_involvement)
    ok = all(red.checks[k] for k in ("a", "b", "c")) and red.same_involvement
    rep.add("result", "strongly_reduced" if ok else "not_strongly_reduced")
    return EXIT_POSITIVE if ok else EXIT_NEGATIVE


def cmd_find_ab(cfg, args, rep):
    r = _element(cfg, args.r)
    res = freiheitssatz.find_ab_form(r, cfg.radius, cap=cfg.pair_cap)
    rep.add("radius", res.radius)
    rep.add("count", len(res.successes))
    for u, v in res.successes:
        rep.add("pair", f"{u} | {v}")
    rep.add("result", "found" if res.found else f"NotFound({cfg.radius})")
    return EXIT_POSITIVE if res.found else EXIT_INCONCLUSIVE


def cmd_scan_freiheit(cfg, args, rep):
    r = _element(cfg, args.r)
    res = freiheitssatz.freiheit_scan(r, _need(args.kill, "--kill"), cfg.radius, cap=cfg.pair_cap, threads=cfg.threads)
    if isinstance(res, freiheitssatz.NoViolation):
        rep.add("rows", res.rows)
        rep.add("cols", res.cols)
        rep.add("kernel_dim", res.kernel_dim)
        rep.add("result", str(res))
        return EXIT_INCONCLUSIVE
    rep.add("element", res.element)
    rep.add("sandwiches", _sandwich_text(r.ctx, res.sandwiches))
    rep.add("verified", res.verified)
    if not res.verified:
        rep.add("result", "candidate_failed_reverification")
        return EXIT_ERROR
    rep.add("result", "candidate")
    return EXIT_POSITIVE


def cmd_small_support(cfg, args, rep):
    r = _element(cfg, args.r)
    found = freiheitssatz.small_support_find(
        r, cfg.radius, args.size, window=args.window, cap=cfg.pair_cap, threads=cfg.threads
    )
    rep.add("count", len(found))
    for s in found:
        rep.add("element", s.element)
    rep.add("result", "found" if found else f"NotFound({cfg.radius})")
    return EXIT_POSITIVE if found else EXIT_INCONCLUSIVE


def _ctx_and_g(cfg, args):
    spec = parse_field(cfg.field)
    ctx = _group_for(cfg, _need(args.g, "--g"), field_spec=spec)
    return ctx, ctx.parse_elem(args.g)


def cmd_analyze_binomial(cfg, args, rep):
    ctx, g = _ctx_and_g(cfg, args)
    verdict = binomial.relation_search(ctx, g, cfg.radius, args.max_terms, cap=cfg.pair_cap)
    rep.add("g", ctx.format_elem(g))
    rep.add("conjugates", verdict.conjugates)
    for rel in verdict.relations:
        rep.add("relation", rel.describe())
    if verdict.divisor_found is None:
        rep.add("result", "None")
        return EXIT_INCONCLUSIVE
    rep.add("divisor", verdict.divisor_found)
    rep.add("result", "found")
    return EXIT_POSITIVE


def cmd_cert_binomial(cfg, args, rep):
    if args.case:
        params = {}
        if args.n is not None:
            params["n"] = args.n
        if args.alpha is not None:
            params["alpha"] = Fraction(args.alpha)
        wit = binomial.cor23_witness(args.case, **params)
        if not wit.verified:
            rep.add("claim", wit.relation.argument)
            rep.add("result", "unverified_claim")
            return EXIT_INCONCLUSIVE
        rel = wit.relation
    else:
        ctx, g = _ctx_and_g(cfg, args)
        verdict = binomial.relation_search(ctx, g, cfg.radius, args.max_terms, cap=cfg.pair_cap)
        if not verdict.relations:
            rep.add("result", "None")
            return EXIT_INCONCLUSIVE
        rel = next((x for x in verdict.relations if x.exponent_sum == verdict.divisor_found), verdict.relations[0])
    ctx = rel.ctx
    spec = ctx.field if isinstance(ctx, Affine) else parse_field(cfg.field)
    c = spec.parse(_need(args.c, "--c"))
    rep.add("relation", rel.describe())
    rep.add("exponent_sum", rel.exponent_sum)
    cert = certificates.binomial_certificate(rel, c)
    rep.add("sandwiches", len(cert))
    _write_cert(cert, args.cert_out, rep)
    rep.add("result", "verified")
    return EXIT_POSITIVE


def cmd_cert_trinomial(cfg, args, rep):
    spec = parse_field(cfg.field)
    if cfg.group:
        ctx = parse_group(cfg.group)
        g = ctx.parse_elem(_need(args.g, "--g"))
        h = ctx.parse_elem(_need(args.h, "--h"))
    else:
        ctx = WreathZZ()
        g, h = wreath_generators()
        if args.g:
            g = ctx.parse_elem(args.g)
        if args.h:
            h = ctx.parse_elem(args.h)
    witness = None
    if args.witness:
        witness = []
        for item in split_top_level(args.witness, ";"):
            elem, _, sign = item.rpartition(",")
            witness.append((ctx.parse_elem(elem.strip()), int(sign)))
    cert = certificates.trinomial_certificate(ctx, g, h, witness, spec=spec)
    rep.add("r", cert.r)
    rep.add("sandwiches", len(cert))
    _write_cert(cert, args.cert_out, rep)
    rep.add("result", "verified")
    return EXIT_POSITIVE


def cmd_cert_search(cfg, args, rep):
    r = _element(cfg, args.r)
    res = certificates.search_certificate(r, radius=cfg.radius, pair_cap=cfg.pair_cap, threads=cfg.threads)
    if isinstance(res, certificates.NotFound):
        rep.add("pairs", res.pairs)
        rep.add("columns", res.columns)
        rep.add("rank", res.rank)
        rep.add("result", str(res))
        return EXIT_INCONCLUSIVE
    rep.add("sandwiches", len(res))
    _write_cert(res, args.cert_out, rep)
    rep.add("result", "found")
    return EXIT_POSITIVE


def cmd_verify(cfg, args, rep):
    cert = certificates.parse_certificate(Path(_need(args.cert, "--cert")).read_text())
    check = certificates.verify_certificate(cert)
    rep.add("residual", check.residual)
    rep.add("result", "verified" if check else "invalid")
    return EXIT_POSITIVE if check else EXIT_NEGATIVE


def cmd_magnus_weight(cfg, args, rep):
    w = parse_word(_need(args.w, "--w"))
    wt = magnus.weight(w, cfg.degree)
    if wt is None:
        rep.add("result", f"above_cap({cfg.degree})")
        return EXIT_INCONCLUSIVE
    rep.add("weight", wt)
    rep.add("lcs_image", magnus.format_terms(magnus.lcs_image(w, cfg.degree)))
    rep.add("result", "found")
    return EXIT_POSITIVE


def cmd_refute_trinomial(cfg, args, rep):
    texts = [_need(args.f, "--f"), _need(args.g, "--g"), _need(args.h, "--h")]
    names = sorted({n for t in texts for n in identifiers_in(t)})
    A = Alphabet(tuple(names))
    f, g, h = (parse_word(t, A) for t in texts)
    res = magnus.refute_trinomial_config(f, g, h, cfg.degree)
    if isinstance(res, magnus.Inconclusive):
        rep.add("reason", res.reason)
        rep.add("result", "Inconclusive")
        return EXIT_INCONCLUSIVE
    rep.add("root", res.g0)
    rep.add("exponents", f"{res.a} {res.b}")
    rep.add("weight_root", res.i)
    rep.add("weight_commutator", res.weight_commutator if res.weight_commutator is not None else f"> {cfg.degree}")
    rep.add("result", "refuted")
    return EXIT_NEGATIVE


def cmd_units(cfg, args, rep):
    spec = parse_field(cfg.field)
    ctx = parse_group(_need(cfg.group, "--group"))
    if not isinstance(spec, PrimeField) or not isinstance(ctx, FiniteCyclic):
        raise BadParameters("units needs --field GF(p) and --group Z/n")
    res = enumerate_units(spec, ctx)
    rep.add("checked", res.checked)
    rep.add("units", len(res.units))
    for u, v in res.non_monomial:
        rep.add("non_monomial", f"{u} | {v}")
    rep.add("result", "non_monomial_unit" if res.has_non_monomial else "monomial_only")
    return EXIT_POSITIVE if res.has_non_monomial else EXIT_NEGATIVE


def cmd_gen_sentences(cfg, args, rep):
    pairs = sentences.compile_sentences(args.m, args.m2, cfg.max_cells)
    rep.add("pairs", len(pairs))
    if args.prune:
        pairs = sentences.prune(pairs)
        rep.add("pruned", len(pairs))
    out = pairs
    if args.fields:
        fields = [parse_field(t) for t in args.fields.split(";")]
        out = sentences.field_filter(pairs, fields)
        rep.add("after_field_filter", len(out))
    text = sentences.emit(out, cfg.format)
    if cfg.out:
        Path(cfg.out).write_text(text)
        rep.add("output_file", cfg.out)
    else:
        for line in text.splitlines():
            rep.add("sentence", line)
    rep.add("result", "emitted")
    return EXIT_POSITIVE


def cmd_power_subst(cfg, args, rep):
    ctx = parse_group(cfg.group) if cfg.group else FreeProductFreeAbelian((1, 2))
    elems = [ctx.parse_elem(t.strip()) for t in split_top_level(_need(args.elems, "--elems"), ";")]
    N = power_substitution_N(elems, ctx)
    rep.add("N", N)
    rep.add("result", "found")
    return EXIT_POSITIVE


COMMANDS = {
    "parse": (cmd_parse, "parse an algebra element and print its normal form"),
    "check-strong": (cmd_check_strong, "test conditions (a), (b), (c)"),
    "reduce-c": (cmd_reduce_c, "divide by a shortest support element"),
    "find-ab": (cmd_find_ab, "find u, v with u r v satisfying (a), (b)"),
    "scan-freiheit": (cmd_scan_freiheit, "bounded search for span elements avoiding a generator"),
    "small-support": (cmd_small_support, "span elements with small support"),
    "analyze-binomial": (cmd_analyze_binomial, "search for conjugate relations of g"),
    "cert-binomial": (cmd_cert_binomial, "certificate for g - c"),
    "cert-trinomial": (cmd_cert_trinomial, "certificate for 1 + h - f"),
    "cert-search": (cmd_cert_search, "bounded certificate search"),
    "verify": (cmd_verify, "check a certificate file"),
    "magnus-weight": (cmd_magnus_weight, "lower-central weight of a word"),
    "refute-trinomial": (cmd_refute_trinomial, "rule out f in ncl([g,h])"),
    "units": (cmd_units, "enumerate units of GF(p)[Z/n]"),
    "gen-sentences": (cmd_gen_sentences, "emit universal sentences"),
    "power-subst": (cmd_power_subst, "smallest injective power substitution"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON RunConfig; explicit flags override it")
    common.add_argument("--field")
    common.add_argument("--group")
    common.add_argument("--radius", type=int)
    common.add_argument("--pair-cap", type=int)
    common.add_argument("--degree", type=int)
    common.add_argument("--max-cells", type=int)
    common.add_argument("--out")
    common.add_argument("--format", choices=["native", "prover"])
    common.add_argument("--threads", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--r", help="algebra element")
    common.add_argument("--cert-out", help="write the certificate here")

    parser = _Parser(prog="resistkit", description="Ideal certificates and scans in group algebras.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "scan-freiheit":
            p.add_argument("--kill", help="generator that must not occur")
        elif name == "small-support":
            p.add_argument("--size", type=int, default=2)
            p.add_argument("--window", type=int, default=64)
        elif name in ("analyze-binomial", "cert-binomial"):
            p.add_argument("--g")
            p.add_argument("--max-terms", type=int, default=4)
            if name == "cert-binomial":
                p.add_argument("--case", choices=["a", "b", "golden"])
                p.add_argument("--n", type=int)
                p.add_argument("--alpha")
                p.add_argument("--c")
        elif name == "cert-trinomial":
            p.add_argument("--g")
            p.add_argument("--h")
            p.add_argument("--witness", help="'elem,sign;elem,sign' conjugates of [g,h]^sign")
        elif name == "verify":
            p.add_argument("--cert")
        elif name == "magnus-weight":
            p.add_argument("--w")
        elif name == "refute-trinomial":
            p.add_argument("--f")
            p.add_argument("--g")
            p.add_argument("--h")
        elif name == "gen-sentences":
            p.add_argument("--m", type=int, default=2)
            p.add_argument("--m2", type=int, default=2)
            p.add_argument("--fields", help="';'-separated prime fields for the field filter")
            p.add_argument("--prune", action="store_true")
        elif name == "power-subst":
            p.add_argument("--elems", help="';'-separated elements of fp(Z^1,Z^2)")
    return parser


def _config(args) -> RunConfig:
    base = {}
    if args.config:
        base = json.loads(RunConfig.from_json(Path(args.config).read_text()).to_json())
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            base[key] = value
    return RunConfig(**base)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config(args)
        rep = Report(args.command, cfg)
        code = COMMANDS[args.command][0](cfg, args, rep)
    except (ResistKitError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = rep.text()
    if cfg.out and args.command != "gen-sentences":
        Path(cfg.out).write_text(text)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
