"""Seeded randomized search for pairs ``f != g`` sharing many constants.

Every trial draws from its own generator seeded by ``(seed, index)``, so a
trial can be replayed alone and the report does not depend on scheduling.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .nevanlinna import smt_constants_check
from .pl import VerdictKind
from .poly import Polynomial, interpolate, poly_gcd, rational_roots, resultant, squarefree_part
from .rational import RationalFunction, target_str
from .smt import theorem1_check
from .uniqueness import Decision, shares, uniqueness_decide
from .valued import INF

BASE_CONSTANTS = (0, 1, -1, 2, -2, Fraction(1, 2), 3)
PLANTS = ("identical", "shared-radical")


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 1
    trials: int = 1000
    max_degree: int = 3
    primes: tuple = (2, 3)
    coeff_bound: int = 3
    plants: tuple = ()
    verify_every: int = 1

    def __post_init__(self):
        if self.trials < 0 or self.max_degree < 1 or self.coeff_bound < 1 or self.verify_every < 1:
            raise ValueError("trials >= 0 and max_degree, coeff_bound, verify_every >= 1 required")
        if not self.primes:
            raise ValueError("at least one prime is required")
        for plant in self.plants:
            if plant not in PLANTS:
                raise ValueError(f"unknown plant {plant!r}; choose from {', '.join(PLANTS)}")


@dataclass
class SearchReport:
    config: SearchConfig
    records: list = field(default_factory=list)

    @property
    def summary(self) -> dict:
        counts = Counter()
        identical = contradictions = violations = 0
        near = []
        for rec in self.records:
            if rec["identical"]:
                identical += 1
                continue
            counts[rec["share_count"]] += 1
            contradictions += rec["contradiction"]
            violations += rec["verifier_violation"]
            if rec["share_count"] == 4:
                near.append(rec["trial"])
        return {
            "trials": len(self.records),
            "identical": identical,
            "by_share_count": {str(k): counts[k] for k in sorted(counts)},
            "five_or_more": sum(v for k, v in counts.items() if k >= 5),
            "near_misses": near,
            "contradictions": contradictions,
            "verifier_violations": violations,
        }


def _random_poly(rng: random.Random, deg: int, bound: int) -> Polynomial:
    coeffs = [rng.randint(-bound, bound) for _ in range(deg)]
    lead = 0
    while lead == 0:
        lead = rng.randint(-bound, bound)
    return Polynomial(coeffs + [lead])


def random_rational(rng: random.Random, max_degree: int, bound: int) -> RationalFunction:
    """A nonconstant reduced rational function with degree at most ``max_degree``."""
    while True:
        num = _random_poly(rng, rng.randint(1, max_degree), bound)
        if rng.random() < 0.5:
            den = Polynomial.constant(1)
        else:
            den = _random_poly(rng, rng.randint(1, max_degree), bound)
        f = RationalFunction(num, den)
        if not f.is_constant():
            return f


def _moebius_partner(rng, f):
    c = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]))
    choice = rng.randrange(4)
    if choice == 0:
        return -f, "neg"
    if choice == 1:
        return f.inverse(), "inv"
    if choice == 2:
        return c - f, "shift"
    return c / f, "scale-inv"


def _compose_partner(rng, f):
    z = RationalFunction.z()
    c = Fraction(rng.choice([-2, -1, 1, 2]))
    inner = rng.choice([-z, c - z, 1 / z, c / z])
    return f.compose(inner)


def _radical_pair(rng, max_degree, bound):
    A = _random_poly(rng, 1, bound).monic()
    B = _random_poly(rng, 1, bound).monic()
    i, j, k, l = (rng.randint(1, max(1, max_degree - 1)) for _ in range(4))
    f = RationalFunction(A ** i * B ** j)
    g = RationalFunction(A ** k * B ** l * Fraction(rng.choice([-2, -1, 2, 3])))
    return f, g


def draw_pair(rng: random.Random, cfg: SearchConfig):
    u = rng.random()
    f = random_rational(rng, cfg.max_degree, cfg.coeff_bound)
    if u < 0.5:
        return f, random_rational(rng, cfg.max_degree, cfg.coeff_bound), "random"
    if u < 0.75:
        g, tag = _moebius_partner(rng, f)
        return f, g, f"moebius-{tag}"
    if u < 0.9:
        return f, _compose_partner(rng, f), "compose"
    f, g = _radical_pair(rng, cfg.max_degree, cfg.coeff_bound)
    return f, g, "radical"


def _value_at_inf(f: RationalFunction):
    if f.num.degree > f.den.degree:
        return INF
    if f.num.degree < f.den.degree:
        return Fraction(0)
    return f.num.lc / f.den.lc


def common_point_values(f: RationalFunction, g: RationalFunction) -> list[Fraction]:
    """Rational values ``f(z0)`` over all finite ``z0`` with ``f(z0) = g(z0)``.

    They are the rational roots in ``w`` of ``Res_z(D, num f - w den f)``, where
    ``D`` is the squarefree part of ``num(f - g)`` with the poles of ``f`` removed.
    The resultant has degree ``<= deg D`` in ``w`` and is interpolated.
    """
    diff = f - g
    if diff.is_zero() or diff.num.degree <= 0:
        return []
    D = squarefree_part(diff.num)
    D = D.exact_div(poly_gcd(D, f.den))
    if D.degree <= 0:
        return []
    # sample only where num f - w den f keeps its generic degree
    e = max(f.num.degree, f.den.degree)
    samples, w = [], 0
    while len(samples) <= D.degree:
        P = f.num - f.den * w
        if P.degree == e:
            samples.append((w, resultant(D, P)))
        w += 1
    R = interpolate(samples)
    return rational_roots(R) if not R.is_zero() else []


def candidate_targets(f: RationalFunction, g: RationalFunction) -> list:
    """``INF``, the values at infinity, the values at common points and a base pool.

    Every constant shared by ``f != g`` is among these: it is attained at a
    common point, or it has no finite preimage and is a value at infinity.
    """
    out: list = [INF]
    seen = set()

    def add(c):
        if c is INF or c in seen:
            return
        seen.add(c)
        out.append(c)

    for u in (f, g):
        add(_value_at_inf(u))
    for c in common_point_values(f, g):
        add(c)
    for c in BASE_CONSTANTS:
        add(Fraction(c))
    return [INF if c is INF else RationalFunction.constant(c) for c in out]


def _shared(f, g, targets) -> list:
    out = []
    for a in targets:
        if a is not INF and (f == a or g == a):
            continue
        if shares(f, g, a):
            out.append(a)
    return out


def _verify(f, p, pool) -> tuple[str, str, bool]:
    """Run the constant-target SMT and Theorem 1 checks; report any violation."""
    family = pool[:5]
    smt = smt_constants_check(f, family, p)
    th1 = theorem1_check(f, family, p)
    bad = smt.verdict.kind is VerdictKind.VIOLATED or th1.verdict.kind is VerdictKind.VIOLATED
    return smt.verdict.kind.value, th1.verdict.kind.value, bad


def run_trial(f, g, kind: str, label, p: int, verify: bool = True) -> dict:
    identical = f == g
    rec = {"trial": label, "prime": p, "kind": kind, "f": str(f), "g": str(g),
           "identical": identical, "shared": [], "share_count": 0, "decision": None,
           "smt": None, "theorem1": None, "contradiction": False, "verifier_violation": False}
    if identical:
        rec["decision"] = Decision.IDENTICAL.value
        return rec
    targets = candidate_targets(f, g)
    shared = _shared(f, g, targets)
    rec["shared"] = [target_str(a) for a in shared]
    rec["share_count"] = len(shared)
    if len(shared) >= 5:
        verdict = uniqueness_decide(f, g, shared[:5])
        rec["decision"] = verdict.decision.value
        rec["contradiction"] = verdict.decision is Decision.PAPER_CONTRADICTION
    if not verify:
        return rec
    pool = [a for a in targets if a is INF or a != f]
    rec["smt"], rec["theorem1"], rec["verifier_violation"] = _verify(f, p, pool)
    return rec


def planted_pairs(plants: Sequence[str]) -> Iterator[tuple]:
    z = RationalFunction.z()
    for name in plants:
        if name == "identical":
            f = z ** 2 - 3 * z + 1
            yield f, f * 1, name
        elif name == "shared-radical":
            yield z ** 2 * (z - 1), z * (z - 1) ** 2, name


def iter_search(cfg: SearchConfig) -> Iterator[dict]:
    for i, (f, g, kind) in enumerate(planted_pairs(cfg.plants)):
        yield run_trial(f, g, f"plant-{kind}", f"plant-{i}", cfg.primes[0])
    for i in range(cfg.trials):
        rng = random.Random(f"{cfg.seed}:{i}")
        f, g, kind = draw_pair(rng, cfg)
        yield run_trial(f, g, kind, i, cfg.primes[i % len(cfg.primes)], verify=i % cfg.verify_every == 0)


def counterexample_search(cfg: SearchConfig) -> SearchReport:
    report = SearchReport(cfg)
    report.records.extend(iter_search(cfg))
    return report
