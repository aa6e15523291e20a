"""Named verification runs used by the command line and the report."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .closed_forms import closed_form_p, closed_form_valency, counted_p
from .coherent import CoherentConfiguration, intersection_tensor, verify_axioms
from .fusion import check_srg, compare_tables, srg_graph, srg_matches
from .group_action import build_cc_orbit, same_partition
from .spectral import SpectralData, SpectralError, pseudocyclic_check, spectral
from .tables import elliptic_fusion_eigenmatrices, srg_parameters

__all__ = ["CHECKS", "Check", "Subject", "run_checks", "applicable_checks", "cross_check", "SPECTRAL_LIMIT", "DESIGN_LIMIT"]

CHECKS = ("axioms", "closed-forms", "pseudocyclic", "tables", "srg", "eigen")
SPECTRAL_LIMIT = 2500
DESIGN_LIMIT = 300
RESIDUAL_TOL = 1e-6


@dataclass
class Check:
    name: str
    passed: bool
    detail: str

    def as_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


@dataclass
class Subject:
    """What the checks look at.

    ``scheme`` is the requested configuration (possibly fused and restricted);
    ``base`` is the unfused configuration over the same field and ``fused``
    the fused one before restriction.
    """

    scheme: CoherentConfiguration
    q: int
    variant: str
    fusion: str
    base: CoherentConfiguration | None = None
    fused: CoherentConfiguration | None = None
    spectral: SpectralData | None = field(default=None, repr=False)


def _fibres(variant: str) -> list[int]:
    return {"full": [1, -1], "hyperbolic": [1], "elliptic": [-1]}.get(variant, [])


def check_axioms(sub: Subject, mode: str, seed: int) -> Check:
    rep = verify_axioms(sub.scheme, mode=mode, seed=seed)
    detail = f"mode={rep.mode} seed={rep.seed} " + " ".join(f"{k}={'ok' if v else 'FAIL'}"
                                                           for k, v in rep.checks.items())
    if rep.counterexample:
        detail += f"; {rep.counterexample}"
    return Check("axioms", rep.passed, detail)


def check_closed_forms(sub: Subject) -> Check:
    cc = sub.base
    if cc is None or sub.fusion != "none" or sub.variant == "cyclotomic":
        return Check("closed-forms", False, "needs the unfused line configuration")
    ctx = cc.ctx
    bad = []
    for rel in cc.non_diagonal():
        want = closed_form_valency(rel.label, rel.eps, ctx, rel.phi)
        got = cc.valency(rel.id)
        if got != want:
            bad.append(f"v({rel.label},{rel.eps:+d},{rel.phi:+d})={got}!={want}")
    n_val = len(cc.non_diagonal())
    if ctx.p != 2:
        ok = not bad
        return Check("closed-forms", ok, f"{n_val} valencies, {len(bad)} mismatches" +
                     (f"; {bad[0]}" if bad else "") + "; intersection numbers tabulated for even q only")
    tensor = intersection_tensor(cc)
    q = ctx.order
    checked = 0
    for eps, a, b, c in itertools.product((1, -1), range(q), range(q), range(q)):
        got = counted_p(cc, tensor, a, b, c, eps)
        if got is None:
            continue
        checked += 1
        want = closed_form_p(a, b, c, eps, ctx)
        if got != want:
            bad.append(f"p^{c}_{{{a},{b}}}({eps:+d})={got}!={want}")
    return Check("closed-forms", not bad,
                 f"{n_val} valencies and {checked} intersection numbers, {len(bad)} mismatches"
                 + (f"; {bad[0]}" if bad else ""))


def _one_fibre(sub: Subject) -> bool:
    return len(sub.scheme.fibre_sizes) == 1


def _spectral(sub: Subject, seed: int) -> SpectralData:
    if sub.spectral is None:
        if sub.scheme.n > SPECTRAL_LIMIT:
            raise SpectralError(f"n = {sub.scheme.n} exceeds the spectral limit {SPECTRAL_LIMIT}")
        sub.spectral = spectral(sub.scheme, seed=seed)
    return sub.spectral


def check_pseudocyclic(sub: Subject, seed: int) -> Check:
    if not _one_fibre(sub):
        return Check("pseudocyclic", False, "needs a one-fibre scheme (elliptic, hyperbolic or cyclotomic)")
    try:
        sd = _spectral(sub, seed)
    except (SpectralError, ValueError) as exc:
        sd = None
        note = f"; spectral skipped: {exc}"
    else:
        note = ""
    verdict = pseudocyclic_check(sub.scheme, sd, design=sub.scheme.n <= DESIGN_LIMIT)
    if not verdict.pseudocyclic:
        return Check("pseudocyclic", False,
                     f"valencies {sorted(set(verdict.valencies))}, sums {sorted(set(verdict.sums))}{note}")
    parts = [f"t={verdict.t}"]
    ok = True
    if verdict.spectral_agrees is not None:
        parts.append(f"multiplicities {'agree' if verdict.spectral_agrees else 'DISAGREE'}")
        ok &= verdict.spectral_agrees
    if verdict.design is not None:
        n = sub.scheme.n
        parts.append(f"2-({n},{verdict.t},{verdict.t - 1}) design {'holds' if verdict.design else 'FAILS'}")
        ok &= verdict.design
    return Check("pseudocyclic", bool(ok), ", ".join(parts) + note)


def check_tables(sub: Subject) -> Check:
    if sub.fusion not in ("five", "three", "srg") or sub.fused is None:
        return Check("tables", False, "needs --fusion five, three or srg")
    rows = compare_tables(sub.fused, sub.fusion, sub.q)
    live = [r for r in rows if r["counted"] is not None]
    bad = [r for r in live if not r["match"]]
    detail = f"{len(live)} entries compared, {len(bad)} mismatches"
    if len(live) < len(rows):
        detail += f", {len(rows) - len(live)} entries with an empty class k not applicable"
    if bad:
        r = bad[0]
        detail += f"; p^{r['k']}_{{{r['i']},{r['j']}}}({r['eps']:+d}) counted {r['counted']} expected {r['expected']}"
    return Check("tables", not bad and bool(live), detail)


_SRG_LABEL = {-1: "12", 1: "124"}


def srg_targets(variant: str) -> list[tuple[int, str]]:
    return [(eps, _SRG_LABEL[eps]) for eps in _fibres(variant)]


def check_srg_graphs(sub: Subject) -> Check:
    if sub.fusion != "srg" or sub.fused is None:
        return Check("srg", False, "needs --fusion srg")
    ok, parts = True, []
    for eps, label in srg_targets(sub.variant):
        adj, _ = srg_graph(sub.fused, eps, label)
        good, params, detail = check_srg(adj)
        want = srg_parameters(sub.q, eps)
        good = good and srg_matches(params, want)
        ok &= good
        parts.append(f"eps={eps:+d}: {params if params else detail} expected {want}")
    return Check("srg", bool(ok) and bool(parts), "; ".join(parts) or "no fibre selected")


def _rows_match(P: np.ndarray, ref: np.ndarray) -> bool:
    return sorted(map(tuple, P.tolist())) == sorted(map(tuple, ref.tolist()))


def check_eigen(sub: Subject, seed: int) -> Check:
    if not _one_fibre(sub):
        return Check("eigen", False, "needs a one-fibre scheme (elliptic, hyperbolic or cyclotomic)")
    try:
        sd = _spectral(sub, seed)
    except (SpectralError, ValueError) as exc:
        return Check("eigen", False, str(exc))
    n = sub.scheme.n
    ok = (sd.max_residual < RESIDUAL_TOL and sd.pq_error < RESIDUAL_TOL * n
          and sd.multiplicity_error < RESIDUAL_TOL and sum(sd.multiplicities) == n)
    detail = (f"multiplicities {sd.multiplicities}, residual {sd.max_residual:.1e}, "
              f"PQ error {sd.pq_error:.1e}")
    if sub.fusion == "five" and sub.variant == "elliptic":
        ref, _ = elliptic_fusion_eigenmatrices(sub.q)
        match = (float(np.abs(sd.P - sd.rounded_P()).max()) < RESIDUAL_TOL
                 and _rows_match(sd.rounded_P(), ref))
        ok &= match
        detail += f", closed-form P {'matches' if match else 'DIFFERS'}"
    return Check("eigen", bool(ok), detail)


def applicable_checks(sub: Subject) -> list[str]:
    """The checks that make sense for this subject, in canonical order.

    Pseudocyclicity is a property, not an axiom, so it is included only
    where it is expected to hold.
    """
    names = ["axioms"]
    if sub.base is not None and sub.fusion == "none" and sub.variant != "cyclotomic":
        names.append("closed-forms")
    expected_pseudocyclic = sub.variant == "cyclotomic" or (
        sub.variant == "elliptic" and sub.fusion == "none" and sub.q % 2 == 0)
    if expected_pseudocyclic:
        names.append("pseudocyclic")
    if _one_fibre(sub):
        if sub.scheme.n <= SPECTRAL_LIMIT:
            names.append("eigen")
    if sub.fusion in ("five", "three", "srg") and sub.fused is not None:
        names.append("tables")
    if sub.fusion == "srg" and sub.fused is not None:
        names.append("srg")
    return [c for c in CHECKS if c in names]


def run_checks(sub: Subject, names, mode: str = "auto", seed: int = 0) -> list[Check]:
    out = []
    for name in names:
        if name == "axioms":
            out.append(check_axioms(sub, mode, seed))
        elif name == "closed-forms":
            out.append(check_closed_forms(sub))
        elif name == "pseudocyclic":
            out.append(check_pseudocyclic(sub, seed))
        elif name == "tables":
            out.append(check_tables(sub))
        elif name == "srg":
            out.append(check_srg_graphs(sub))
        elif name == "eigen":
            out.append(check_eigen(sub, seed))
        else:
            raise ValueError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
    return out


def cross_check(cc: CoherentConfiguration) -> Check:
    """Orbit construction against the rho-hat construction on the same lines."""
    orbit = build_cc_orbit(cc.ctx)
    same = same_partition(orbit.ids, cc.ids)
    return Check("cross-check", same, f"orbit partition rank {orbit.rank}, formula rank {cc.rank}, "
                 f"{'identical' if same else 'DIFFERENT'}")
