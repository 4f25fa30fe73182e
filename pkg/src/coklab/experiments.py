"""Seeded Monte-Carlo experiments with theory comparison.

Each trial draws from its own RNG substream (stream = trial index), so
tallies are independent of execution order and worker count: running with
one process or many yields identical results.  Trials are dispatched in
fixed-size batches to a process pool when workers > 1.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing import Pool
from typing import Optional

from . import limits
from .groups import (FiniteAbelianGroup, count_surjections_from_cokernel,
                     is_squarefree, parse_group, sylow)
from .intmat import Cokernel, rank_mod_p
from .randsrc import Rng
from .sampling import (EntryDistribution, distribution_from_json,
                       distribution_to_json, laplacian, sample_digraph,
                       sample_matrix, total_sandpile)

__all__ = [
    "ExperimentSpec",
    "ExperimentResult",
    "TargetReport",
    "BadArgument",
    "run",
    "classify_cokernel",
    "wilson_interval",
    "moment_estimate",
    "corank_mod_p_estimate",
    "odlyzko_sanity",
    "compare_to_theory",
    "result_to_json",
    "result_to_csv",
    "CSV_HEADER",
]

BATCH_SIZE = 256

KINDS = ("cokernel-dist", "surjectivity", "cyclic", "squarefree-det",
         "sylow-dist", "moment", "corank-mod-p", "sandpile",
         "sandpile-cyclic", "odlyzko-sanity")

_MATRIX_KINDS = ("cokernel-dist", "surjectivity", "cyclic", "squarefree-det",
                 "sylow-dist", "moment", "corank-mod-p", "odlyzko-sanity")
_DIGRAPH_KINDS = ("sandpile", "sandpile-cyclic")

DEFAULT_TOLERANCE = {
    "cokernel-dist": 0.02,
    "surjectivity": 0.02,
    "cyclic": 0.03,
    "squarefree-det": 0.03,
    "sylow-dist": 0.02,
    "moment": 0.02,
    "corank-mod-p": 0.015,
    "sandpile": 0.03,
    "sandpile-cyclic": 0.03,
    "odlyzko-sanity": 0.0,
}


class BadArgument(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    trials: int
    seed: int
    n: int
    u: int = 0
    distribution: Optional[EntryDistribution] = None
    q: Optional[Fraction] = None
    target_groups: tuple[FiniteAbelianGroup, ...] = ()
    prime: Optional[int] = None
    sylow_primes: tuple[int, ...] = ()
    k0: Optional[int] = None
    tolerance: Optional[float] = None
    z: float = 1.96

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadArgument(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise BadArgument("trials must be >= 1")
        if self.n < 1:
            raise BadArgument("n must be >= 1")
        if self.u < 0:
            raise BadArgument("u must be >= 0")
        if self.kind in _MATRIX_KINDS and self.distribution is None:
            raise BadArgument(f"{self.kind} needs an entry distribution")
        if self.kind in _DIGRAPH_KINDS and self.q is None:
            raise BadArgument(f"{self.kind} needs an edge probability q")
        if self.kind in ("cokernel-dist", "sylow-dist", "sandpile", "moment") \
                and not self.target_groups:
            raise BadArgument(f"{self.kind} needs target groups")
        if self.kind == "sylow-dist" and not self.sylow_primes:
            raise BadArgument("sylow-dist needs a prime set")
        if self.kind in ("corank-mod-p", "odlyzko-sanity") and self.prime is None:
            raise BadArgument(f"{self.kind} needs a prime")
        if self.tolerance is None:
            object.__setattr__(self, "tolerance", DEFAULT_TOLERANCE[self.kind])

    def to_json(self) -> dict:
        out = {"kind": self.kind, "trials": self.trials, "seed": self.seed,
               "n": self.n, "u": self.u, "tolerance": self.tolerance, "z": self.z}
        if self.distribution is not None:
            obj = distribution_to_json(self.distribution)
            if self.distribution.name:
                obj["name"] = self.distribution.name
            out["distribution"] = obj
        if self.q is not None:
            out["q"] = str(self.q)
        targets: dict = {}
        if self.target_groups:
            targets["groups"] = [str(g) for g in self.target_groups]
        if self.prime is not None:
            targets["prime"] = self.prime
        if self.sylow_primes:
            targets["sylow_primes"] = list(self.sylow_primes)
        if self.k0 is not None:
            targets["k0"] = self.k0
        if targets:
            out["targets"] = targets
        return out

    @classmethod
    def from_json(cls, obj) -> "ExperimentSpec":
        if isinstance(obj, str):
            obj = json.loads(obj)
        targets = obj.get("targets", {})
        dist = None
        if "distribution" in obj:
            dobj = dict(obj["distribution"])
            name = dobj.pop("name", "")
            dist = distribution_from_json(dobj)
            if name and not dist.name:
                dist = EntryDistribution(dist.support, dist.probabilities, name=name)
        return cls(
            kind=obj["kind"],
            trials=int(obj["trials"]),
            seed=int(obj["seed"]),
            n=int(obj["n"]),
            u=int(obj.get("u", 0)),
            distribution=dist,
            q=Fraction(obj["q"]) if "q" in obj else None,
            target_groups=tuple(parse_group(s) for s in targets.get("groups", [])),
            prime=targets.get("prime"),
            sylow_primes=tuple(targets.get("sylow_primes", [])),
            k0=targets.get("k0"),
            tolerance=obj.get("tolerance"),
            z=float(obj.get("z", 1.96)),
        )


@dataclass(frozen=True)
class TargetReport:
    target: str
    count: int
    trials: int
    estimate: float
    lo: float
    hi: float
    theory: Optional[float]
    theory_err: Optional[float]
    z: Optional[float]
    status: str  # PASS or FLAG


@dataclass(frozen=True)
class ExperimentResult:
    spec: ExperimentSpec
    counts: dict
    reports: tuple[TargetReport, ...]
    wall_time: float = 0.0

    @property
    def flagged(self) -> bool:
        return any(r.status == "FLAG" for r in self.reports)


# ---------------------------------------------------------------------------
# classification


def classify_cokernel(c: Cokernel, targets) -> str:
    """Label a cokernel against canonical targets: a match, infinite, or other."""
    if c.free_rank > 0:
        return "infinite"
    for g in targets:
        if c.torsion == g:
            return str(g)
    return "other"


def _is_cyclic_cokernel(c: Cokernel) -> bool:
    # Z counts as cyclic; Z + Z/2 and Z^2 do not
    return c.free_rank + len(c.torsion.invariant_factors) <= 1


def _is_squarefree_cyclic(c: Cokernel) -> bool:
    return (c.free_rank == 0
            and len(c.torsion.invariant_factors) <= 1
            and is_squarefree(c.torsion.order))


# ---------------------------------------------------------------------------
# per-trial tallies


def _tally_trials(spec: ExperimentSpec, start: int, stop: int) -> dict:
    """Exact integer tallies for trials [start, stop); merge-order independent."""
    counts: dict[str, int] = {}

    def bump(key, by=1):
        counts[key] = counts.get(key, 0) + by

    base = Rng(spec.seed)
    kind = spec.kind
    for t in range(start, stop):
        rng = base.substream(t)
        if kind in _DIGRAPH_KINDS:
            g = sample_digraph(spec.n, spec.q, rng)
            c = total_sandpile(laplacian(g.adjacency_matrix()))
            if kind == "sandpile":
                bump(classify_cokernel(c, spec.target_groups))
            else:
                bump("cyclic" if _is_cyclic_cokernel(c) else "other")
            continue
        if kind == "odlyzko-sanity":
            # membership of an entry vector in {first coordinate == 0 mod p}
            m = sample_matrix(spec.n, 1, spec.distribution, rng)
            bump("member" if m[0, 0] % spec.prime == 0 else "other")
            continue
        if kind == "corank-mod-p":
            m = sample_matrix(spec.n, spec.n + spec.u, spec.distribution, rng)
            bump(f"corank={spec.n - rank_mod_p(m, spec.prime)}")
            continue
        m = sample_matrix(spec.n, spec.n + spec.u, spec.distribution, rng)
        from .intmat import cokernel
        c = cokernel(m)
        if kind == "surjectivity":
            bump("surjective" if c.free_rank == 0 and c.torsion.order == 1 else "other")
        elif kind == "cokernel-dist":
            bump(classify_cokernel(c, spec.target_groups))
        elif kind == "cyclic":
            bump("cyclic" if _is_cyclic_cokernel(c) else "other")
        elif kind == "squarefree-det":
            bump("squarefree" if _is_squarefree_cyclic(c) else "other")
        elif kind == "sylow-dist":
            if c.free_rank > 0:
                bump("infinite")
            else:
                part = sylow(c.torsion, spec.sylow_primes)
                bump(classify_cokernel(Cokernel(0, part), spec.target_groups))
        elif kind == "moment":
            for g in spec.target_groups:
                s = count_surjections_from_cokernel(c.free_rank, c.torsion, g)
                bump(f"sum:{g}", s)
                bump(f"sumsq:{g}", s * s)
            bump("trials")
        else:  # pragma: no cover
            raise BadArgument(f"unhandled kind {kind}")
    return counts


def _worker(args) -> dict:
    spec_json, start, stop = args
    return _tally_trials(ExperimentSpec.from_json(spec_json), start, stop)


# ---------------------------------------------------------------------------
# statistics


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise BadArgument("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise BadArgument("successes must lie in [0, trials]")
    phat = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _zscore(est: float, theory: float, trials: int) -> float:
    var = max(theory * (1 - theory), est * (1 - est))
    se = math.sqrt(max(var, 1e-12) / trials)
    return (est - theory) / se


def _proportion_report(label: str, count: int, spec: ExperimentSpec,
                       theory: Optional[limits.TolerancedReal]) -> TargetReport:
    est = count / spec.trials
    lo, hi = wilson_interval(count, spec.trials, spec.z)
    if theory is None:
        return TargetReport(label, count, spec.trials, est, lo, hi,
                            None, None, None, "PASS")
    tv = theory.value
    z = _zscore(est, tv, spec.trials)
    ok = (lo - spec.tolerance) <= tv <= (hi + spec.tolerance)
    return TargetReport(label, count, spec.trials, est, lo, hi,
                        tv, theory.abs_error_bound, z, "PASS" if ok else "FLAG")


# ---------------------------------------------------------------------------
# theory lookup and report assembly


def _build_reports(spec: ExperimentSpec, counts: dict) -> tuple[TargetReport, ...]:
    kind = spec.kind
    reports: list[TargetReport] = []
    if kind == "surjectivity":
        reports.append(_proportion_report(
            "surjective", counts.get("surjective", 0), spec,
            limits.zeta_tail_product(spec.u)))
    elif kind == "cokernel-dist":
        for g in spec.target_groups:
            reports.append(_proportion_report(
                str(g), counts.get(str(g), 0), spec,
                limits.cohen_lenstra_prob(g, spec.u)))
    elif kind == "cyclic":
        reports.append(_proportion_report(
            "cyclic", counts.get("cyclic", 0), spec, limits.cyclic_prob(spec.u)))
    elif kind == "squarefree-det":
        reports.append(_proportion_report(
            "squarefree", counts.get("squarefree", 0), spec,
            limits.squarefree_det_prob(spec.u)))
    elif kind == "sylow-dist":
        for g in spec.target_groups:
            reports.append(_proportion_report(
                str(g), counts.get(str(g), 0), spec,
                limits.sylow_restricted_prob(g, spec.u, spec.sylow_primes)))
    elif kind == "moment":
        for g in spec.target_groups:
            s = counts.get(f"sum:{g}", 0)
            s2 = counts.get(f"sumsq:{g}", 0)
            t = spec.trials
            est = s / t
            var = max(s2 / t - est * est, 0.0)
            half = spec.z * math.sqrt(var / t)
            theory = float(g.order) ** (-spec.u)
            se = math.sqrt(max(var, 1e-12) / t)
            zsc = (est - theory) / se
            ok = (est - half - spec.tolerance) <= theory <= (est + half + spec.tolerance)
            reports.append(TargetReport(str(g), s, t, est, est - half, est + half,
                                        theory, 0.0, zsc, "PASS" if ok else "FLAG"))
    elif kind == "corank-mod-p":
        coranks = sorted(int(k.split("=")[1]) for k in counts if k.startswith("corank="))
        for k in coranks:
            theory = None
            if k == 0:
                theory = limits.TolerancedReal(
                    limits.uniform_fullrank_prob(spec.n, spec.u, spec.prime), 1e-12)
            reports.append(_proportion_report(
                f"corank={k}", counts.get(f"corank={k}", 0), spec, theory))
    elif kind == "sandpile":
        for g in spec.target_groups:
            reports.append(_proportion_report(
                str(g), counts.get(str(g), 0), spec, limits.sandpile_prob(g)))
    elif kind == "sandpile-cyclic":
        reports.append(_proportion_report(
            "cyclic", counts.get("cyclic", 0), spec, limits.sandpile_cyclic_prob()))
    elif kind == "odlyzko-sanity":
        count = counts.get("member", 0)
        est = count / spec.trials
        lo, hi = wilson_interval(count, spec.trials, spec.z)
        alpha = spec.distribution.balance
        bound = 1.0 - alpha
        sigma = math.sqrt(max(est * (1 - est), 1e-12) / spec.trials)
        ok = est <= bound + 4 * sigma + 1e-12
        zsc = (est - bound) / sigma
        reports.append(TargetReport("member", count, spec.trials, est, lo, hi,
                                    bound, 0.0, zsc, "PASS" if ok else "FLAG"))
    return tuple(reports)


def run(spec: ExperimentSpec, workers: int = 1) -> ExperimentResult:
    """Execute every trial of the spec and compare tallies to theory."""
    t0 = time.perf_counter()
    if workers <= 1:
        counts = _tally_trials(spec, 0, spec.trials)
    else:
        spec_json = json.dumps(spec.to_json())
        batches = [(spec_json, lo, min(lo + BATCH_SIZE, spec.trials))
                   for lo in range(0, spec.trials, BATCH_SIZE)]
        counts = {}
        with Pool(processes=workers) as pool:
            for part in pool.imap_unordered(_worker, batches):
                for k, v in part.items():
                    counts[k] = counts.get(k, 0) + v
    if spec.kind not in ("moment",):
        total = sum(counts.values())
        if total != spec.trials:
            raise AssertionError("tally conservation violated")
    reports = _build_reports(spec, counts)
    return ExperimentResult(spec=spec, counts=dict(sorted(counts.items())),
                            reports=reports, wall_time=time.perf_counter() - t0)


def moment_estimate(spec: ExperimentSpec, g: FiniteAbelianGroup,
                    workers: int = 1) -> float:
    """Mean surjection count onto g over the spec's trials."""
    mspec = ExperimentSpec(kind="moment", trials=spec.trials, seed=spec.seed,
                           n=spec.n, u=spec.u, distribution=spec.distribution,
                           target_groups=(g,), tolerance=spec.tolerance, z=spec.z)
    res = run(mspec, workers=workers)
    return res.reports[0].estimate


def corank_mod_p_estimate(spec: ExperimentSpec, p: int,
                          workers: int = 1) -> dict[int, float]:
    """Empirical distribution of n - rank_mod_p over the spec's trials."""
    cspec = ExperimentSpec(kind="corank-mod-p", trials=spec.trials,
                           seed=spec.seed, n=spec.n, u=spec.u,
                           distribution=spec.distribution, prime=p,
                           tolerance=spec.tolerance, z=spec.z)
    res = run(cspec, workers=workers)
    return {int(k.split("=")[1]): v / spec.trials
            for k, v in res.counts.items() if k.startswith("corank=")}


def odlyzko_sanity(spec: ExperimentSpec, workers: int = 1) -> TargetReport:
    """Membership-frequency report for the fixed codimension-1 subspace."""
    if spec.kind != "odlyzko-sanity":
        raise BadArgument("spec.kind must be odlyzko-sanity")
    return run(spec, workers=workers).reports[0]


def compare_to_theory(result: ExperimentResult) -> tuple[TargetReport, ...]:
    """Per-target theory comparison (already attached to the result)."""
    return result.reports


# ---------------------------------------------------------------------------
# serialization

CSV_HEADER = "kind,n,u,target,count,trials,estimate,lo,hi,theory,theory_err,z"


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{x:.10g}"


def result_to_csv(result: ExperimentResult) -> str:
    """Deterministic CSV, one row per target; no timestamps inside rows."""
    lines = [CSV_HEADER]
    s = result.spec
    for r in result.reports:
        lines.append(",".join([
            s.kind, str(s.n), str(s.u), r.target.replace(",", ";"),
            str(r.count), str(r.trials), _fmt(r.estimate), _fmt(r.lo), _fmt(r.hi),
            _fmt(r.theory), _fmt(r.theory_err), _fmt(r.z),
        ]))
    return "\n".join(lines) + "\n"


def result_to_json(result: ExperimentResult) -> dict:
    return {
        "spec": result.spec.to_json(),
        "counts": result.counts,
        "reports": [{
            "target": r.target, "count": r.count, "trials": r.trials,
            "estimate": r.estimate, "lo": r.lo, "hi": r.hi,
            "theory": r.theory, "theory_err": r.theory_err, "z": r.z,
            "status": r.status,
        } for r in result.reports],
        "wall_time": result.wall_time,
    }
