"""Command-line front end: build, check, report and clean-cache."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import cache
from .checks import CHECKS, SPECTRAL_LIMIT, applicable_checks, Check, Subject, cross_check, run_checks, srg_targets
from .coherent import CoherentConfiguration, restrict_fibre
from .cyclotomic import build_cyclotomic
from .fusion import (
    check_srg,
    srg_matches,
    five_class_fusion,
    frobenius_fusion,
    srg_fusion,
    srg_graph,
    srg_parameters,
    three_class_fusion,
)
from .gf import FieldCtx, field_ctx, prime_power, tower_extend
from .group_action import GROUP_BOUND, build_cc_formula
from .report import build_report, edgelist, matrix_csv, tables_csv, to_json, write_outputs
from .spectral import SpectralError, spectral

__all__ = ["RunConfig", "ConfigError", "Built", "build", "main", "parse_args"]

VARIANTS = ("full", "hyperbolic", "elliptic", "cyclotomic")
FUSIONS = ("none", "frobenius", "five", "three", "srg")
TOWER_FUSIONS = ("five", "three", "srg")
U64 = 2**64

EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CACHE = 3


class ConfigError(ValueError):
    """Unsupported or malformed run configuration."""


@dataclass
class RunConfig:
    q: int
    poly: int | None = None
    variant: str = "full"
    e: int | None = None
    fusion: str = "none"
    k: int = 1
    checks: list[str] = field(default_factory=lambda: ["axioms"])
    mode: str = "auto"
    seed: int = 0
    out: Path | None = None
    fmt: str = "json"
    cross_check: bool = False
    cache_dir: Path | None = None
    use_cache: bool = True

    def validate(self) -> tuple[int, int]:
        try:
            p, n = prime_power(self.q)
        except ValueError:
            raise ConfigError(f"{self.q} is not a prime power") from None
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        if self.fusion not in FUSIONS:
            raise ConfigError(f"unknown fusion {self.fusion!r}")
        if self.variant == "cyclotomic":
            if self.e is None:
                raise ConfigError("the cyclotomic variant needs --e")
            if self.fusion != "none":
                raise ConfigError("fusions apply to the line configuration, not the cyclotomic scheme")
        if self.fusion != "none" and p != 2:
            raise ConfigError(f"fusion {self.fusion!r} needs even q")
        if self.poly is not None and p != 2:
            raise ConfigError("--poly is only supported for binary fields")
        if not 0 <= self.seed < U64:
            raise ConfigError("--seed must fit in an unsigned 64-bit integer")
        bad = [c for c in self.checks if c not in CHECKS and c != "all"]
        if bad:
            raise ConfigError(f"unknown check(s) {', '.join(bad)}; choose from {', '.join(CHECKS)}")
        return p, n


@dataclass
class Built:
    cfg: RunConfig
    subject: Subject
    base_ctx: FieldCtx
    cache_path: str | None = None
    cross: Check | None = None


def _poly_key(ctx: FieldCtx) -> int:
    """The defining polynomial as an integer with base-p digits."""
    if ctx.poly is None:
        return 0
    return sum(int(c) * ctx.p**i for i, c in enumerate(ctx.poly))


def _formula_cc(cfg: RunConfig, base: FieldCtx, ctx: FieldCtx) -> tuple[CoherentConfiguration, str | None]:
    variant = "tower" if ctx is not base else "lines"
    key = _poly_key(base)
    if not cfg.use_cache:
        return build_cc_formula(ctx), None
    cc = cache.load(base.order, key, variant, cfg.cache_dir, ctx=ctx)
    if cc is None:
        cc = build_cc_formula(ctx)
        path = cache.save(cc, base.order, key, variant, cfg.cache_dir)
    else:
        path = cache.cache_dir(cfg.cache_dir) / (cache.cache_key(base.order, key, variant) + ".bin")
    return cc, str(path)


def _fuse(cfg: RunConfig, cc: CoherentConfiguration) -> CoherentConfiguration:
    if cfg.fusion == "frobenius":
        return frobenius_fusion(cc, cfg.k)
    if cfg.fusion in TOWER_FUSIONS:
        fused = five_class_fusion(cc)
        if cfg.fusion in ("three", "srg"):
            fused = three_class_fusion(fused)
        if cfg.fusion == "srg":
            fused = srg_fusion(fused)
        return fused
    return cc


def build(cfg: RunConfig) -> Built:
    p, n = cfg.validate()
    try:
        base = field_ctx(p, n, cfg.poly)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.variant == "cyclotomic":
        try:
            scheme = build_cyclotomic(base, cfg.e)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return Built(cfg, Subject(scheme, cfg.q, cfg.variant, cfg.fusion), base)

    ctx = tower_extend(base) if cfg.fusion in TOWER_FUSIONS else base
    cc, path = _formula_cc(cfg, base, ctx)
    try:
        fused = _fuse(cfg, cc)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if cfg.variant == "full":
        scheme = fused
    else:
        scheme = restrict_fibre(fused, 1 if cfg.variant == "hyperbolic" else -1)
    built = Built(cfg, Subject(scheme, cfg.q, cfg.variant, cfg.fusion, base=cc, fused=fused), base, path)
    if cfg.cross_check:
        if ctx.order > GROUP_BOUND:
            raise ConfigError(f"--cross-check needs a field of order <= {GROUP_BOUND}, got {ctx.order}")
        built.cross = cross_check(cc)
    return built


def descriptor(b: Built) -> dict:
    s = b.subject.scheme
    d = {
        "q": b.cfg.q,
        "field_order": s.ctx.order if s.ctx is not None else b.cfg.q,
        "variant": b.cfg.variant,
        "fusion": b.cfg.fusion,
        "name": s.name,
        "n": s.n,
        "rank": s.rank,
        "fibres": {f"{eps:+d}": size for eps, size in sorted(s.fibre_sizes.items(), reverse=True)},
        "classes": (s.rank - 1 if len(s.fibre_sizes) == 1 else
                    {"hyperbolic": s.class_count(1), "elliptic": s.class_count(-1)}),
        "relations": [{"id": r.id, "label": r.label if isinstance(r.label, str) else int(r.label),
                       "eps": r.eps, "phi": r.phi, "valency": s.valency(r.id)} for r in s.relations],
        "fingerprint": s.fingerprint(),
    }
    if b.cross is not None:
        d["cross_check"] = b.cross.as_dict()
    return d


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def _spectral_for(b: Built):
    s = b.subject
    if len(s.scheme.fibre_sizes) != 1 or s.scheme.n > SPECTRAL_LIMIT:
        return None
    if s.spectral is None:
        try:
            s.spectral = spectral(s.scheme, seed=b.cfg.seed)
        except (SpectralError, ValueError):
            return None
    return s.spectral


def cmd_build(cfg: RunConfig) -> int:
    b = build(cfg)
    text = _dump(descriptor(b))
    if cfg.out is not None:
        for path in write_outputs(cfg.out, {"descriptor.json": text}):
            print(path)
    else:
        sys.stdout.write(text)
    return 0 if b.cross is None or b.cross.passed else EXIT_FAIL


def _checked_report(cfg: RunConfig):
    b = build(cfg)
    names = applicable_checks(b.subject) if "all" in cfg.checks else cfg.checks
    checks = run_checks(b.subject, names, mode=cfg.mode, seed=cfg.seed)
    if b.cross is not None:
        checks.append(b.cross)
    rep = build_report(b.subject.scheme, cfg.q, cfg.variant, cfg.fusion, cfg.mode, cfg.seed,
                       checks, _spectral_for(b))
    return b, rep


def cmd_check(cfg: RunConfig) -> int:
    _, rep = _checked_report(cfg)
    text = to_json(rep)
    if cfg.out is not None:
        for path in write_outputs(cfg.out, {"report.json": text}):
            print(path)
    else:
        sys.stdout.write(text)
    for c in rep.checks:
        print(f"{c['name']}: {'pass' if c['pass'] else 'FAIL'} ({c['detail']})", file=sys.stderr)
    return 0 if rep.passed else EXIT_FAIL


def _edgelist_files(b: Built) -> dict[str, str]:
    if b.cfg.fusion != "srg":
        raise ConfigError("--format edgelist needs --fusion srg")
    files = {}
    for eps, label in srg_targets(b.cfg.variant):
        adj, _ = srg_graph(b.subject.fused, eps, label)
        ok, params, detail = check_srg(adj)
        tag = "hyperbolic" if eps == 1 else "elliptic"
        files[f"srg-{tag}.edgelist"] = edgelist(adj)
        want = srg_parameters(b.cfg.q, eps)
        files[f"srg-{tag}.json"] = _dump({
            "q": b.cfg.q, "eps": eps, "relation": label, "vertices": int(adj.shape[0]),
            "edges": int(adj.sum() // 2), "strongly_regular": ok, "detail": detail,
            "parameters": list(params) if params else None, "expected": list(want),
            "passed": ok and srg_matches(params, want),
        })
    return files


def cmd_report(cfg: RunConfig) -> int:
    b, rep = _checked_report(cfg)
    out = cfg.out or Path(".")
    files = {"report.json": to_json(rep)}
    if cfg.fmt == "csv":
        sd = b.subject.spectral
        if sd is not None:
            files["P.csv"] = matrix_csv(sd.P)
            files["Q.csv"] = matrix_csv(sd.Q)
        if cfg.fusion in TOWER_FUSIONS:
            files["tables.csv"] = tables_csv(b.subject.fused, cfg.fusion, cfg.q)
    elif cfg.fmt == "edgelist":
        files.update(_edgelist_files(b))
    for path in write_outputs(out, files):
        print(path)
    return 0 if rep.passed else EXIT_FAIL


def cmd_clean(cfg_dir: Path | None) -> int:
    print(f"removed {cache.clean(cfg_dir)} file(s) from {cache.cache_dir(cfg_dir)}")
    return 0


def _hex(text: str) -> int:
    try:
        return int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a hexadecimal polynomial mask") from None


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < U64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conic-schemes",
        description="Coherent configurations on the non-tangent lines of a conic in PG(2, q).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, required=True, help="field order (prime power)")
    common.add_argument("--poly", type=_hex, default=None, help="field polynomial as hex mask, e.g. 0x13")
    common.add_argument("--variant", choices=VARIANTS, default="full")
    common.add_argument("--e", type=int, default=None, help="number of classes for --variant cyclotomic")
    common.add_argument("--fusion", choices=FUSIONS, default="none")
    common.add_argument("--k", type=int, default=1, help="Frobenius power x -> x^(2^k)")
    common.add_argument("--checks", default="axioms",
                        help=f"comma-separated subset of {','.join(CHECKS)}, or 'all' for every applicable check")
    common.add_argument("--mode", choices=("auto", "full", "sampled"), default="auto")
    common.add_argument("--seed", type=_u64, default=0)
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "edgelist"), default="json")
    common.add_argument("--cross-check", action="store_true",
                        help="also build the configuration from group orbits and compare")
    common.add_argument("--cache-dir", type=Path, default=None)
    common.add_argument("--no-cache", action="store_true")

    sub.add_parser("build", parents=[common], help="build (or load) a configuration")
    sub.add_parser("check", parents=[common], help="run named checks; nonzero exit on failure")
    sub.add_parser("report", parents=[common], help="write JSON, CSV or edge-list artifacts")
    clean = sub.add_parser("clean-cache", help="delete cached configurations")
    clean.add_argument("--cache-dir", type=Path, default=None)
    return parser


def parse_args(argv=None) -> tuple[str, RunConfig | Path | None]:
    args = make_parser().parse_args(argv)
    if args.command == "clean-cache":
        return args.command, args.cache_dir
    checks = [c.strip() for c in args.checks.split(",") if c.strip()]
    cfg = RunConfig(q=args.q, poly=args.poly, variant=args.variant, e=args.e, fusion=args.fusion, k=args.k,
                    checks=checks, mode=args.mode, seed=args.seed, out=args.out, fmt=args.fmt,
                    cross_check=args.cross_check, cache_dir=args.cache_dir, use_cache=not args.no_cache)
    return args.command, cfg


def main(argv=None) -> int:
    command, cfg = parse_args(argv)
    try:
        if command == "clean-cache":
            return cmd_clean(cfg)
        return {"build": cmd_build, "check": cmd_check, "report": cmd_report}[command](cfg)
    except ConfigError as exc:
        print(f"conic-schemes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except cache.CacheError as exc:
        print(f"conic-schemes: cache error: {exc}", file=sys.stderr)
        return EXIT_CACHE


if __name__ == "__main__":
    sys.exit(main())
