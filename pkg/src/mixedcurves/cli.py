"""Command-line front end.

    mixedcurves construct  --family twisted --q 1 --r 2 --j 0
    mixedcurves invariants --family join --q 2 --r 2 --j 1 --format markdown
    mixedcurves plan       --genus 5 --degree 1
    mixedcurves verify     --suite link --q 2 --r 3 --j 1 --seed 42
    mixedcurves table      --family twisted --qmax 3 --rmax 3
    mixedcurves zeta       --chi 5 --q 1

Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import families, invariants, verify
from .families import FamilyKind, FamilyParams, GenericityError
from .invariants import DivisibilityViolation, NegativeGenus, ParameterError
from .weights import WeightError, infer_weights, is_1_convenient

SUITES = ("homogeneity", "wirtinger", "zeros", "link", "monodromy", "smoothness")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _complex_pair(text: str) -> complex:
    parts = text.split(",")
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected re,im but got {text!r}")
    return complex(float(parts[0]), float(parts[1]))


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "markdown"), default="json")

    fam = _Parser(add_help=False)
    fam.add_argument("--family", choices=[k.value for k in FamilyKind], default=None)
    fam.add_argument("--family-json", default=None, help="family as a JSON object or a path to one")
    fam.add_argument("--q", type=int, default=None)
    fam.add_argument("--r", type=int, default=None)
    fam.add_argument("--j", type=int, default=None)
    fam.add_argument("--alpha", type=_complex_pair, default=families.DEFAULT_ALPHA, help="re,im (default 2,0)")
    fam.add_argument("--beta", type=_complex_pair, default=families.DEFAULT_BETA, help="re,im (default 3,0)")

    cfg = _Parser(add_help=False)
    cfg.add_argument("--seed", type=int, default=0)
    cfg.add_argument("--config", default=None, help="JSON file with VerifyConfig overrides")
    cfg.add_argument("--trials", type=int, default=None)
    cfg.add_argument("--tol", type=float, default=None)
    cfg.add_argument("--grid", type=int, default=None)
    cfg.add_argument("--search-radius", type=float, default=None)
    cfg.add_argument("--cluster-eps", type=float, default=None)

    p = _Parser(prog="mixedcurves", description="Mixed polar homogeneous curve families and their invariants.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    sub.add_parser("construct", parents=[common, fam], help="expand a family member")
    sub.add_parser("invariants", parents=[common, fam], help="invariant report for a family member")
    pl = sub.add_parser("plan", parents=[common], help="family realizing genus g in degree q")
    pl.add_argument("--genus", type=int, required=True)
    pl.add_argument("--degree", type=int, required=True)
    v = sub.add_parser("verify", parents=[common, fam, cfg], help="run one numeric verification suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    t = sub.add_parser("table", parents=[common], help="invariant reports over a parameter grid")
    t.add_argument("--family", choices=[k.value for k in FamilyKind], required=True)
    t.add_argument("--qmax", type=int, default=3)
    t.add_argument("--rmax", type=int, default=3)
    z = sub.add_parser("zeta", parents=[common, fam], help="monodromy zeta function")
    z.add_argument("--chi", type=int, default=None, help="Euler characteristic of the Milnor fiber")
    return p


def _family(args, default_kind: str = "base") -> tuple[FamilyKind, FamilyParams]:
    if args.family_json:
        src = Path(args.family_json)
        data = json.loads(src.read_text() if src.exists() else args.family_json)
        return families.params_from_dict(data)
    kind = FamilyKind(args.family or default_kind)
    q = 1 if args.q is None else args.q
    if kind is FamilyKind.DEGREE_ONE_F:
        q = 1
    r = 1 if args.r is None else args.r
    j = 0 if args.j is None else args.j
    try:
        p = FamilyParams(q, r, j, args.alpha, args.beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return kind, families.normalize_params(kind, p)


def _config(args) -> verify.VerifyConfig:
    overrides = {}
    if args.config:
        overrides.update(json.loads(Path(args.config).read_text()))
    overrides["seed"] = args.seed
    for key in ("trials", "tol", "grid", "search_radius", "cluster_eps"):
        val = getattr(args, key)
        if val is not None:
            overrides[key] = val
    try:
        return verify.VerifyConfig().with_overrides(overrides)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad config: {exc}") from exc


def _md_table(rows: list[dict]) -> str:
    keys = list(rows[0])
    out = ["| " + " | ".join(keys) + " |", "|" + "|".join("---" for _ in keys) + "|"]
    for row in rows:
        out.append("| " + " | ".join(_md_cell(row[k]) for k in keys) + " |")
    return "\n".join(out)


def _md_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


def _emit(payload: dict, args, markdown: str | None = None) -> None:
    if args.format == "json":
        print(json.dumps(payload))
    else:
        print(markdown if markdown is not None else _md_table([payload]))


def cmd_construct(args) -> int:
    kind, p = _family(args)
    f = families.build(kind, p)
    cls = infer_weights(f)
    payload = {
        "family": p.to_dict(kind),
        "n_vars": f.n_vars,
        "n_terms": len(f),
        "text": str(f),
        "homogeneity": cls.tag.value,
        "weights": cls.ws.to_dict() if cls.ws else None,
        "one_convenient": is_1_convenient(f),
        "terms": f.to_dict()["terms"],
    }
    md = _md_table([{k: payload[k] for k in ("n_vars", "n_terms", "homogeneity", "one_convenient", "text")}])
    _emit(payload, args, md)
    return 0


def cmd_invariants(args) -> int:
    kind, p = _family(args)
    rep = invariants.invariant_report(kind, p)
    _emit(rep.to_dict(), args, invariants.markdown_table([rep]))
    return 0


def cmd_plan(args) -> int:
    plan = invariants.plan_embedding(args.genus, args.degree)
    _emit(plan.to_dict(), args)
    return 0


def cmd_table(args) -> int:
    reports = invariants.report_grid(FamilyKind(args.family), args.qmax, args.rmax)
    if args.format == "json":
        print(json.dumps([r.to_dict() for r in reports]))
    else:
        print(invariants.markdown_table(reports))
    return 0


def cmd_zeta(args) -> int:
    if args.chi is not None:
        if args.q is None:
            raise UsageError("--chi needs --q")
        chi, q = args.chi, args.q
    else:
        kind, p = _family(args)
        rep = invariants.invariant_report(kind, p)
        chi, q = rep.chi_F, rep.embedding_degree
    z = invariants.zeta_function(chi, q)
    _emit({"chi_F": chi, "q": q, "factors": z.to_list(), "zeta": str(z)}, args)
    return 0


def cmd_verify(args) -> int:
    cfg = _config(args)
    kind, p = _family(args)
    suite = args.suite
    if suite == "link":
        if kind is not FamilyKind.BASE_H:
            raise UsageError("the link suite runs on the base family h_{q,r,j}")
        try:
            out = verify.verify_link_count(p, cfg)
        except (verify.SearchExhausted, verify.DegenerateRoot) as exc:
            # no usable count: report the whole expected count as the miss
            expected = invariants.link_count(p.q, p.r, p.j)
            out = verify.VerifyOutcome(False, float(expected), str(exc), cfg.grid ** 2)
    else:
        f = families.build(kind, p)
        if suite == "zeros":
            if f.n_vars != 2:
                raise UsageError("the zeros suite needs a 2-variable family (base or remark11)")
            zs = verify.find_p1_zeros(f, cfg, oracle_roots=families.chart_roots(kind, p))
            _emit(zs.to_dict(), args)
            return 0
        if suite == "wirtinger":
            out = verify.verify_wirtinger(f, cfg)
        elif suite == "smoothness":
            if f.n_vars != 3:
                raise UsageError("the smoothness suite needs a 3-variable family")
            try:
                out = verify.sample_smoothness(f, cfg)
            except verify.NoPointsFound as exc:
                payload = verify.VerifyOutcome(False, 0.0, f"inconclusive: {exc}", cfg.trials).to_dict()
                payload["inconclusive"] = True
                _emit(payload, args)
                return 1
        else:
            cls = infer_weights(f)
            if cls.ws is None:
                raise UsageError(f"family is {cls.tag.value}; no weights to verify against")
            fn = verify.verify_homogeneity if suite == "homogeneity" else verify.verify_monodromy_flow
            out = fn(f, cls.ws, cfg)
    _emit(out.to_dict(), args)
    return 0 if out.passed else 1


COMMANDS = {
    "construct": cmd_construct,
    "invariants": cmd_invariants,
    "plan": cmd_plan,
    "verify": cmd_verify,
    "table": cmd_table,
    "zeta": cmd_zeta,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.verb](args)
    except (UsageError, GenericityError, ParameterError, DivisibilityViolation, NegativeGenus,
            WeightError, verify.SearchExhausted, verify.DegenerateRoot, ValueError) as exc:
        # SearchExhausted/DegenerateRoot only reach here from the zeros suite
        print(f"mixedcurves: error: {exc}".splitlines()[0], file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
