"""Deterministic verification suite over a fixed function catalog.

Sections, in emission order:

  lemma   identity residuals L1/L2 on seeded intervals
  bound   all ten deviation rules at baseline class parameters
  means   mean chain, Lp monotonicity, P1-P4 sweeps (with the alternate
          constant readings as separate P2-alt/P4-alt records)
  quad    P5 (statement and proofline) and P6 certified quadrature grids,
          including the degenerate alpha=0 rows

Every random draw comes from one seeded generator, so a (seed, version)
pair fixes the full report byte for byte. Verdicts: "holds", "flagged"
(inequality failed with its hypothesis intact), "hypothesis-unverified"
(membership precondition failed or a counterexample was found, so the rule's
assumption is not established; the numbers are still reported).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ._version import __version__
from .bounds import (
    BoundInstance, FIRST_DERIVATIVE_RULES, HOLDER_RULES, RULE_IDS,
    hypothesis_domain, hypothesis_function, lemma1_residual, lemma2_residual,
    verify as verify_bound,
)
from .convexity import ConvexityClass, check_membership
from .errors import PreconditionError
from .expr import Node, parse
from .kernels import HolderPair
from .means import MeanKind, PropositionInstance, mean, proposition_check
from .quadrature import certified_integrate

__all__ = ["CATALOG", "QUAD_FUNCTIONS", "CaseRecord", "SuiteReport", "build_suite"]

CATALOG = (
    ("x^2", parse("x^2")),
    ("x^3", parse("x^3")),
    ("exp(x)", parse("exp(x)")),
    ("-ln(x)", parse("-ln(x)")),
    ("1/x", parse("1/x")),
)

# quadrature grid functions live on [0,1], so the log/reciprocal entries
# are replaced by a quartic
QUAD_FUNCTIONS = (
    ("x^2", parse("x^2")),
    ("exp(x)", parse("exp(x)")),
    ("x^4", parse("x^4")),
)

_P_GRID = (1.5, 2.0, 4.0)
_PROP_P_GRID = (1.1, 1.5, 2.0, 4.0, 10.0)
_MEMBERSHIP_SAMPLES = 500


@dataclass(frozen=True)
class CaseRecord:
    case_id: str
    rule: str
    params: str
    lhs: float
    rhs: float
    margin: float
    verdict: str

    def as_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "rule": self.rule,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class SuiteReport:
    version: str
    seed: int
    cases: tuple
    summary: dict

    def as_dict(self) -> dict:
        return {
            "version": self.version,
            "seed": self.seed,
            "cases": [c.as_dict() for c in self.cases],
            "summary": dict(self.summary),
        }


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _params(**kv) -> str:
    return ";".join(f"{k}={_fmt(v)}" for k, v in kv.items() if v is not None)


class _Emitter:
    def __init__(self):
        self.cases = []
        self._counts = {}

    def add(self, section: str, rule: str, params: str, lhs: float, rhs: float, verdict: str):
        idx = self._counts.get(section, 0) + 1
        self._counts[section] = idx
        self.cases.append(
            CaseRecord(f"{section}-{idx:03d}", rule, params, lhs, rhs, rhs - lhs, verdict)
        )


def _verdict_from_margin(margin: float, tol: float) -> str:
    return "holds" if margin >= -tol else "flagged"


def _lemma_section(em: _Emitter, rng: random.Random, tol: float):
    for name, f in CATALOG:
        for _ in range(3):
            a = rng.uniform(0.1, 1.5)
            b = a + rng.uniform(0.4, 1.5)
            ps = _params(f=name, a=a, b=b)
            r1 = lemma1_residual(f, a, b)
            em.add("lemma", "L1", ps, r1, tol, "holds" if r1 <= tol else "flagged")
            r2 = lemma2_residual(f, a, b)
            em.add("lemma", "L2", ps, r2, tol, "holds" if r2 <= tol else "flagged")


def _bound_verdict(report) -> str:
    if not report.hypothesis_verified:
        return "hypothesis-unverified"
    return "holds" if report.holds else "flagged"


def _bound_section(em: _Emitter, rng: random.Random, seed: int, tol: float):
    cls = ConvexityClass("h_alpha_m")  # baseline: h=t, alpha=1, m=1
    for name, f in CATALOG:
        a = rng.uniform(0.1, 1.5)
        b = a + rng.uniform(0.4, 1.5)
        memberships = {}

        def hoisted(inst):
            q = inst.hp.q if inst.hp is not None else None
            order = 1 if inst.rule_id in FIRST_DERIVATIVE_RULES else 2
            key = (order, q)
            if key not in memberships:
                try:
                    memberships[key] = check_membership(
                        hypothesis_function(inst), inst.cls, hypothesis_domain(inst),
                        samples=_MEMBERSHIP_SAMPLES, seed=seed, tol=tol,
                    )
                except PreconditionError:
                    memberships[key] = None
            return memberships[key]

        for rule in RULE_IDS:
            if rule in HOLDER_RULES:
                for p in _P_GRID:
                    hp = HolderPair.from_p(p)
                    inst = BoundInstance(rule, f, a, b, cls, hp)
                    rep = verify_bound(inst, tol=tol, seed=seed,
                                       samples=_MEMBERSHIP_SAMPLES,
                                       membership=hoisted(inst))
                    ps = _params(f=name, a=a, b=b, h="t", alpha=1, m=1, p=p, q=hp.q)
                    em.add("bound", rule, ps, rep.lhs, rep.rhs, _bound_verdict(rep))
            else:
                inst = BoundInstance(rule, f, a, b, cls)
                rep = verify_bound(inst, tol=tol, seed=seed,
                                   samples=_MEMBERSHIP_SAMPLES,
                                   membership=hoisted(inst))
                ps = _params(f=name, a=a, b=b, h="t", alpha=1, m=1)
                em.add("bound", rule, ps, rep.lhs, rep.rhs, _bound_verdict(rep))


_CHAIN_ORDER = ("H", "G", "L", "I", "A")


def _means_section(em: _Emitter, rng: random.Random, tol: float):
    for _ in range(5):
        a = rng.uniform(0.1, 50.0)
        b = a + rng.uniform(0.1, 50.0)
        vals = {t: mean(MeanKind(t), a, b) for t in _CHAIN_ORDER}
        eps = 1e-12 * max(1.0, vals["A"])
        for left, right in zip(_CHAIN_ORDER, _CHAIN_ORDER[1:]):
            ps = _params(a=a, b=b, left=left, right=right)
            verdict = "holds" if vals[left] <= vals[right] + eps else "flagged"
            em.add("means", "chain", ps, vals[left], vals[right], verdict)

    grid = (-1.0, 0.0, 0.5, 1.0, 2.0, 5.0)
    for _ in range(3):
        a = rng.uniform(0.1, 50.0)
        b = a + rng.uniform(0.1, 50.0)
        vals = []
        for p in grid:
            if p == -1.0:
                vals.append(mean(MeanKind("L"), a, b))
            elif p == 0.0:
                vals.append(mean(MeanKind("I"), a, b))
            else:
                vals.append(mean(MeanKind("Lp", p), a, b))
        eps = 1e-12 * max(1.0, *vals)
        worst = max(u - v for u, v in zip(vals, vals[1:]))
        ps = _params(a=a, b=b, grid="|".join(_fmt(p) for p in grid))
        em.add("means", "Lp-monotone", ps, worst, 0.0,
               "holds" if worst <= eps else "flagged")

    pairs = []
    for _ in range(3):
        a = rng.uniform(0.1, 5.0)
        b = a + rng.uniform(0.2, 5.0)
        pairs.append((a, b))
    for a, b in pairs:
        for p in _PROP_P_GRID:
            for pid in ("P1", "P2", "P3", "P4"):
                inst = PropositionInstance(pid, a, b, p, n=2 if pid == "P4" else None)
                out = proposition_check(inst, tol=tol)
                ps = _params(a=a, b=b, p=p, n=inst.n)
                em.add("means", pid, ps, out.lhs, out.rhs,
                       _verdict_from_margin(out.rhs - out.lhs, tol))
                if "alt_rhs" in out.extras:
                    alt = out.extras["alt_rhs"]
                    em.add("means", f"{pid}-alt", ps, out.lhs, alt,
                           _verdict_from_margin(alt - out.lhs, tol))


def _quad_verdict(report) -> str:
    if report.hypothesis_verified is False:
        return "hypothesis-unverified"
    return "holds" if report.holds else "flagged"


def _quad_section(em: _Emitter, seed: int, tol: float):
    ns = (1, 4, 16)
    for name, f in QUAD_FUNCTIONS:
        mem = None
        for variant in ("statement", "proofline"):
            for n in ns:
                rep = certified_integrate(
                    f, 0.0, 1.0, n=n, rule="midpoint", p=2.0, variant=variant,
                    tol=tol, seed=seed, samples=_MEMBERSHIP_SAMPLES, membership=mem,
                )
                mem = rep.membership or mem
                ps = _params(f=name, a=0.0, b=1.0, n=n, p=2.0, variant=variant)
                em.add("quad", rep.bound_source, ps, rep.true_error,
                       rep.apriori_bound, _quad_verdict(rep))
    for name, f in QUAD_FUNCTIONS:
        for alpha in (0.0, 0.5, 1.0):
            mem = None
            for n in ns:
                rep = certified_integrate(
                    f, 0.0, 1.0, n=n, rule="trapezoid", p=2.0, alpha=alpha, m=1.0,
                    tol=tol, seed=seed, samples=_MEMBERSHIP_SAMPLES, membership=mem,
                )
                mem = rep.membership or mem
                ps = _params(f=name, a=0.0, b=1.0, n=n, p=2.0, alpha=alpha, m=1.0)
                em.add("quad", "P6", ps, rep.true_error,
                       rep.apriori_bound, _quad_verdict(rep))


def build_suite(seed: int = 42, tol: float = 1e-9) -> SuiteReport:
    """Run every section and tally the verdicts."""
    rng = random.Random(seed)
    em = _Emitter()
    _lemma_section(em, rng, tol)
    _bound_section(em, rng, seed, tol)
    _means_section(em, rng, tol)
    _quad_section(em, seed, tol)
    summary = {"holds": 0, "flagged": 0, "hypothesis_unverified": 0, "total": 0}
    for c in em.cases:
        summary["total"] += 1
        summary[c.verdict.replace("-", "_")] += 1
    return SuiteReport(__version__, seed, tuple(em.cases), summary)
