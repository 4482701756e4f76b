"""Command-line entry point.

    berezin-kit verify --algebra schrodinger -m 3/2 -c 5/7 --suite all --format json

Exit status is 0 when every emitted report passes, 1 when some report fails
and 2 on a configuration error (reported as a JSON object under ``--format json``).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .algebra import (
    BUILTIN_NAMES,
    DEFAULT_GRID,
    AlgebraError,
    EnvElement,
    LieAlgebraSpec,
    Params,
    builtin,
    is_builtin,
    parse_rational,
    pbw_normalize,
    verify_jacobi,
)
from .berezin import (
    berezin_from_fock,
    check_berezin_table,
    check_defining_pdes,
    check_leibniz_formula,
    check_leibniz_routes,
    check_log_derivatives,
    compare,
    observable,
    transform_names,
)
from .fock import check_matrix_homomorphism, moments
from .reports import Check, Report
from .series import closed_form_berezin, closed_form_leibniz
from .theorems import (
    GAUSSIAN_OBSERVABLES,
    check_decoupling,
    check_gram_positivity,
    check_self_adjointness,
    gaussian_check,
    hankel_positivity,
)
from .weyl import check_homomorphism, decoupled_generators, hat_rep

VERSION = "berezin-kit/1"
SUITES = ("jacobi", "homomorphism", "leibniz", "pdes", "berezin", "decoupling", "selfadjoint", "gaussian", "hankel")
HANKEL_OBSERVABLES = {"hw": ("X1",), "sl2": ("X2",), "schrodinger": ("X2", "X1")}
HANKEL_ORDER = 3
GRAM_DEGREE = 4


class ConfigError(ValueError):
    """Invalid command-line configuration; ``kind`` is the machine-readable tag."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


@dataclass
class RunConfig:
    command: str = "verify"
    algebra: str = "schrodinger"
    algebra_file: str | None = None
    m: Fraction = Fraction(1)
    c: Fraction = Fraction(1)
    cap: int = 8
    suites: list[str] = field(default_factory=lambda: list(SUITES))
    format: str = "text"
    seed: int = 0
    params_grid: bool = False
    order: int = 10
    op: str | None = None
    observable: str | None = None

    @property
    def points(self) -> list[Params]:
        if self.params_grid:
            return list(DEFAULT_GRID)
        return [Params(self.m, self.c)]

    def to_json(self) -> dict:
        out = asdict(self)
        out["m"], out["c"] = str(self.m), str(self.c)
        out["points"] = [p.to_json() for p in self.points]
        return out


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def _random_word(rng: random.Random, alg: LieAlgebraSpec, max_len: int) -> EnvElement:
    names = [rng.choice(alg.basis) for _ in range(rng.randint(1, max_len))]
    return EnvElement.word(*names, coeff=rng.randint(-3, 3) or 1)


def pbw_hat_consistency(alg: LieAlgebraSpec, params: Params, seed: int, samples: int = 12, max_len: int = 4) -> Report:
    """h(word) == h(normal_form(word)) on seeded random enveloping-algebra words."""
    rng = random.Random(seed)
    h = hat_rep(alg, params)
    checks = []
    for _ in range(samples):
        w = _random_word(rng, alg, max_len)
        residual = h(w) - h(pbw_normalize(w, alg))
        checks.append(Check(f"hat({w}) = hat(PBW({w}))", residual.is_zero(), None if residual.is_zero() else str(residual)))
    return Report(f"pbw-hat-consistency:{alg.name}{params}:seed={seed}", checks)


def _suite_homomorphism(alg: LieAlgebraSpec, cfg: RunConfig) -> list:
    out = []
    for p in cfg.points:
        out.append(check_homomorphism(hat_rep(alg, p)))
        out.append(check_matrix_homomorphism(alg, p))
        out.append(pbw_hat_consistency(alg, p, cfg.seed))
    return out


def _suite_leibniz(alg: LieAlgebraSpec, cfg: RunConfig) -> list:
    out = []
    for p in cfg.points:
        out.append(check_leibniz_routes(alg, p, cfg.cap))
        out.extend(check_leibniz_formula(alg, min(cfg.cap, 6), p))
    return out


def _suite_pdes(alg: LieAlgebraSpec, cfg: RunConfig) -> list:
    return [r for p in cfg.points for r in check_defining_pdes(alg, p, cfg.cap)]


def _suite_berezin(alg: LieAlgebraSpec, cfg: RunConfig) -> list:
    out = []
    for p in cfg.points:
        out.extend(check_berezin_table(alg, p, cfg.cap))
        out.extend(check_log_derivatives(alg, p, cfg.cap))
    return out


def _suite_decoupling(alg: LieAlgebraSpec, cfg: RunConfig) -> list:
    return [check_decoupling(cfg.points, min(cfg.cap, 6))]


def _suite_selfadjoint(alg: LieAlgebraSpec, cfg: RunConfig) -> list:
    return [check_self_adjointness(cfg.cap, cfg.points, algebras=(alg.name,))]


def _suite_gaussian(alg: LieAlgebraSpec, cfg: RunConfig) -> list:
    order = cfg.order + cfg.order % 2
    return [gaussian_check(order, p.m, alg.name, p.c) for p in cfg.points]


def _suite_hankel(alg: LieAlgebraSpec, cfg: RunConfig) -> list:
    out = []
    for p in cfg.points:
        out.extend(hankel_positivity(x, HANKEL_ORDER, alg, p) for x in HANKEL_OBSERVABLES[alg.name])
        out.append(check_gram_positivity(alg, p, GRAM_DEGREE))
    return out


RUNNERS: dict[str, Callable[[LieAlgebraSpec, RunConfig], list]] = {
    "homomorphism": _suite_homomorphism,
    "leibniz": _suite_leibniz,
    "pdes": _suite_pdes,
    "berezin": _suite_berezin,
    "decoupling": _suite_decoupling,
    "selfadjoint": _suite_selfadjoint,
    "gaussian": _suite_gaussian,
    "hankel": _suite_hankel,
}


def applicable_suites(alg: LieAlgebraSpec) -> list[str]:
    if not is_builtin(alg):
        return ["jacobi"]
    skip = set()
    if alg.name != "schrodinger":
        skip.add("decoupling")
    if alg.name not in GAUSSIAN_OBSERVABLES:
        skip.add("gaussian")
    return [s for s in SUITES if s not in skip]


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


def load_algebra(cfg: RunConfig) -> LieAlgebraSpec:
    if cfg.algebra_file:
        try:
            data = json.loads(Path(cfg.algebra_file).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("algebra-file", f"cannot read algebra file {cfg.algebra_file}: {exc}") from exc
        try:
            return LieAlgebraSpec.from_json(data)
        except (AlgebraError, KeyError, TypeError) as exc:
            raise ConfigError("algebra-file", f"invalid algebra file: {exc}") from exc
    if cfg.algebra not in BUILTIN_NAMES:
        raise ConfigError("unknown-algebra", f"unknown algebra {cfg.algebra!r}; known: {', '.join(BUILTIN_NAMES)}")
    return builtin(cfg.algebra)


def resolve_suites(requested: Sequence[str], alg: LieAlgebraSpec) -> list[str]:
    available = applicable_suites(alg)
    if "all" in requested:
        return available
    for s in requested:
        if s not in SUITES:
            raise ConfigError("unknown-suite", f"unknown suite {s!r}; known: {', '.join(SUITES + ('all',))}")
        if s not in available:
            raise ConfigError("inapplicable-suite", f"suite {s!r} does not apply to algebra {alg.name!r}")
    return [s for s in SUITES if s in requested]


def validate(cfg: RunConfig, alg: LieAlgebraSpec) -> None:
    series_based = {"leibniz", "pdes", "berezin", "decoupling", "selfadjoint"}
    if cfg.cap < 2 and (cfg.command != "verify" or series_based & set(cfg.suites)):
        raise ConfigError("cap-too-small", f"cap must be at least 2, got {cfg.cap}")
    needs_m = cfg.command == "decouple" or "decoupling" in cfg.suites
    if needs_m and any(p.m == 0 for p in cfg.points):
        raise ConfigError("m-zero", "m must be nonzero for decoupling (the subtractions divide by 2m)")
    if cfg.order < 1:
        raise ConfigError("order-too-small", f"order must be positive, got {cfg.order}")


def _rational(text: str, flag: str) -> Fraction:
    try:
        return parse_rational(text)
    except (AlgebraError, ValueError) as exc:
        raise ConfigError("invalid-rational", f"{flag}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", default="schrodinger", help=f"built-in algebra ({', '.join(BUILTIN_NAMES)})")
    common.add_argument("--algebra-file", help="JSON algebra description (only the jacobi suite applies)")
    common.add_argument("-m", default="1", help='rational "p/q"; use -m=-1/2 for negatives')
    common.add_argument("-c", default="1", help='rational "p/q"')
    common.add_argument("--cap", type=int, default=8, help="total-degree truncation of series")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--params-grid", action="store_true", help="run at (1,1), (3/2,5/7), (2,1/2)")
    common.add_argument("--order", type=int, default=10, help="moment order")

    parser = argparse.ArgumentParser(prog="berezin-kit", description="Exact checks of Berezin quantization identities.")
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", parents=[common], help="run verification suites")
    verify.add_argument("--suite", action="append", help="suite name or 'all' (repeatable, comma-separated)")
    sub.add_parser("leibniz", parents=[common], help="Leibniz function and its route comparison")
    berezin = sub.add_parser("berezin", parents=[common], help="Berezin transforms")
    berezin.add_argument("--op", help="operator name (default: every tabulated transform)")
    mom = sub.add_parser("moments", parents=[common], help="vacuum moments and their Hankel minors")
    mom.add_argument("--observable", help="observable name (default: X1 for hw, X2 otherwise)")
    sub.add_parser("decouple", parents=[common], help="decoupled sl(2) generators and their theorems")
    sub.add_parser("report-schema", help="print the JSON schema of the output document")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    suites = ["all"]
    if getattr(ns, "suite", None):
        suites = [s.strip() for chunk in ns.suite for s in chunk.split(",") if s.strip()]
    return RunConfig(
        command=ns.command,
        algebra=ns.algebra,
        algebra_file=ns.algebra_file,
        m=_rational(ns.m, "-m"),
        c=_rational(ns.c, "-c"),
        cap=ns.cap,
        suites=suites,
        format=ns.format,
        seed=ns.seed,
        params_grid=ns.params_grid,
        order=ns.order,
        op=getattr(ns, "op", None),
        observable=getattr(ns, "observable", None),
    )


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def run_verify(cfg: RunConfig, alg: LieAlgebraSpec) -> tuple[list, dict]:
    reports = []
    for suite in cfg.suites:
        reports.extend([verify_jacobi(alg)] if suite == "jacobi" else RUNNERS[suite](alg, cfg))
    return reports, {}


def run_leibniz(cfg: RunConfig, alg: LieAlgebraSpec) -> tuple[list, dict]:
    reports, series = [], {}
    for p in cfg.points:
        reports.append(check_leibniz_routes(alg, p, cfg.cap))
        series[f"Upsilon {p}"] = closed_form_leibniz(alg, p, cfg.cap)
    return reports, series


def run_berezin(cfg: RunConfig, alg: LieAlgebraSpec) -> tuple[list, dict]:
    names = [cfg.op] if cfg.op else transform_names(alg)
    available = transform_names(alg)
    if cfg.op and cfg.op not in available:
        raise ConfigError("unknown-operator", f"no tabulated transform {cfg.op!r} for {alg.name}; have {', '.join(available)}")
    reports, series = [], {}
    for p in cfg.points:
        for name in names:
            fock_side = berezin_from_fock(name, alg, p, cfg.cap)
            closed = closed_form_berezin(name, alg, p, cfg.cap)
            reports.append(compare(f"berezin:{alg.name}:{name}", fock_side, closed, "fock route", "closed form", p))
            series[f"{name} {p}"] = closed
    return reports, series


def run_moments(cfg: RunConfig, alg: LieAlgebraSpec) -> tuple[list, dict]:
    name = cfg.observable or ("X1" if alg.name == "hw" else "X2")
    reports, tables = [], {}
    for p in cfg.points:
        try:
            elem = observable(name, alg, p)
        except AlgebraError as exc:
            raise ConfigError("unknown-observable", str(exc)) from exc
        tables[f"{name} {p}"] = [str(x) for x in moments(elem, cfg.order, alg, p)]
        reports.append(hankel_positivity(name, max(1, cfg.order // 2), alg, p))
    return reports, tables


def run_decouple(cfg: RunConfig, alg: LieAlgebraSpec) -> tuple[list, dict]:
    gens = {}
    for p in cfg.points:
        l0, r0, rho0 = decoupled_generators(hat_rep(alg, p), check=False)
        gens[str(p)] = {"L0": l0, "R0": r0, "rho0": rho0}
    return [check_decoupling(cfg.points, min(cfg.cap, 6))], gens


COMMANDS = {
    "verify": run_verify,
    "leibniz": run_leibniz,
    "berezin": run_berezin,
    "moments": run_moments,
    "decouple": run_decouple,
}


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------


def report_schema() -> dict:
    check = {
        "type": "object",
        "required": ["description", "pass", "residual"],
        "properties": {"description": {"type": "string"}, "pass": {"type": "boolean"}, "residual": {"type": ["string", "null"]}},
    }
    mismatch = {"type": "object", "required": ["at", "lhs", "rhs"]}
    report = {
        "type": "object",
        "required": ["kind", "pass"],
        "properties": {
            "kind": {"enum": ["report", "comparison", "known-discrepancy", "theorem"]},
            "pass": {"type": "boolean"},
            "subject": {"type": "string"},
            "theorem": {"type": "string"},
            "checks": {"type": "array", "items": check},
            "mismatches": {"type": "array", "items": mismatch},
            "first_mismatch": {"type": ["object", "null"]},
            "mismatch_count": {"type": "integer"},
            "params": {"type": ["object", "array"]},
            "cap": {"type": "integer"},
        },
    }
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": VERSION,
        "oneOf": [
            {
                "type": "object",
                "required": ["version", "config", "reports", "pass"],
                "properties": {
                    "version": {"const": VERSION},
                    "config": {"type": "object"},
                    "pass": {"type": "boolean"},
                    "reports": {"type": "array", "items": report},
                    "results": {"type": "object"},
                },
            },
            {
                "type": "object",
                "required": ["version", "error"],
                "properties": {
                    "version": {"const": VERSION},
                    "error": {
                        "type": "object",
                        "required": ["kind", "message"],
                        "properties": {"kind": {"type": "string"}, "message": {"type": "string"}},
                    },
                },
            },
        ],
    }


def _to_json(obj):
    return obj.to_json() if hasattr(obj, "to_json") else obj


def _label(report) -> str:
    return getattr(report, "subject", None) or getattr(report, "theorem", "?")


def render_text(reports: list, results: dict) -> str:
    lines = []
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        flag = " [known-discrepancy]" if getattr(r, "predicted_mismatch", None) is not None else ""
        lines.append(f"{status}  {_label(r)}{flag}")
        if hasattr(r, "checks"):
            shown = r.checks if r.__class__.__name__ == "TheoremReport" and r.theorem.startswith(("gaussian", "hankel")) else r.failures
            for c in shown:
                mark = "ok " if c.passed else "BAD"
                lines.append(f"      {mark} {c.description}" + (f"  (residual {c.residual})" if c.residual else ""))
        elif flag:
            first = r.first_mismatch
            if first:
                lines.append(f"      first mismatch at {first[0]}: printed {first[1]}, consistent {first[2]} ({len(r.mismatches)} total)")
        elif r.mismatches:
            for at, a, b in r.mismatches[:5]:
                lines.append(f"      at {at}: {a} vs {b}")
    for key, value in results.items():
        if isinstance(value, dict):
            for name, item in value.items():
                lines.append(f"{key} {name} = {item}")
        else:
            lines.append(f"{key} = {', '.join(value) if isinstance(value, list) else value}")
    passed = sum(r.passed for r in reports)
    lines.append(f"{passed}/{len(reports)} reports pass")
    return "\n".join(lines)


def render_json(cfg: RunConfig, reports: list, results: dict) -> str:
    doc = {
        "version": VERSION,
        "config": cfg.to_json(),
        "pass": all(r.passed for r in reports),
        "reports": [r.to_json() for r in reports],
    }
    if results:
        doc["results"] = {
            k: ({n: _to_json(v) for n, v in val.items()} if isinstance(val, dict) else _to_json(val)) for k, val in results.items()
        }
    return json.dumps(doc, indent=2)


def _emit_error(fmt: str, kind: str, message: str) -> int:
    if fmt == "json":
        print(json.dumps({"version": VERSION, "error": {"kind": kind, "message": message}}, indent=2))
    else:
        print(f"berezin-kit: error [{kind}]: {message}", file=sys.stderr)
    return 2


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    if ns.command == "report-schema":
        print(json.dumps(report_schema(), indent=2))
        return 0
    try:
        cfg = config_from_args(ns)
        alg = load_algebra(cfg)
        if cfg.command == "verify":
            cfg.suites = resolve_suites(cfg.suites, alg)
        elif not is_builtin(alg):
            raise ConfigError("inapplicable-command", f"{cfg.command} needs a built-in algebra")
        elif cfg.command == "decouple" and alg.name != "schrodinger":
            raise ConfigError("inapplicable-command", "decouple needs the schrodinger algebra")
        validate(cfg, alg)
        reports, results = COMMANDS[cfg.command](cfg, alg)
    except ConfigError as exc:
        return _emit_error(ns.format, exc.kind, str(exc))
    if cfg.format == "json":
        print(render_json(cfg, reports, results))
    else:
        print(render_text(reports, results))
    return 0 if all(r.passed for r in reports) else 1
