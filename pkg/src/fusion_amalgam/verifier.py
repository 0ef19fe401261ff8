"""Checks of the structural claims about X = A *_C B.

Finite-group statements are checked exhaustively (mode EXACT); statements
quantified over all of X are checked on seeded random reduced words (mode
SAMPLED).  Each trial draws its randomness from ``(seed, claim, trial)`` so a
report is a pure function of its inputs.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .amalgam import INFINITE, AmalgamContext, AmalgamWord, amalgam_abelianization
from .core import bracket_check, closure, normalizer
from .core.local import LocalElement

EXACT = "EXACT"
SAMPLED = "SAMPLED"

DEFAULT_SAMPLES = 10_000
DEFAULT_MAX_LETTERS = 6
DEFAULT_SEED = 42
MAX_COUNTEREXAMPLES = 20


@dataclass
class VerificationReport:
    claim: str
    mode: str
    trials: int
    seed: int | None
    params: dict
    fail: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    duration_ms: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.fail

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "mode": self.mode,
            "verdict": self.verdict,
            "trials": self.trials,
            "fail": self.fail,
            "seed": self.seed,
            "params": self.params,
            "details": self.details,
            "duration_ms": round(self.duration_ms, 3),
        }


class _Run:
    """Collects trials and counterexamples for one report."""

    def __init__(self, ctx: AmalgamContext, claim: str, mode: str, seed: int | None):
        self.ctx = ctx
        self.report = VerificationReport(claim, mode, 0, seed, {"p": ctx.params.p, "q": ctx.params.q})
        self._start = time.perf_counter()
        self._dropped = 0

    def rng(self, trial: int) -> random.Random:
        return random.Random(f"{self.report.seed}:{self.report.claim}:{trial}")

    def record(self, ok: bool, counterexample: Callable[[], dict]) -> None:
        self.report.trials += 1
        if not ok:
            if len(self.report.fail) < MAX_COUNTEREXAMPLES:
                self.report.fail.append(counterexample())
            else:
                self._dropped += 1

    def finish(self) -> VerificationReport:
        if self._dropped:
            self.report.details["unlisted_counterexamples"] = self._dropped
        self.report.duration_ms = (time.perf_counter() - self._start) * 1000
        return self.report


def _elem(g: LocalElement) -> dict:
    return {"x": list(g.h.x), "c": g.h.c, "s": g.s}


def _word(ctx: AmalgamContext, w: AmalgamWord) -> dict:
    d = ctx.word_to_json(w)
    d.pop("fingerprint")
    return d


def _sample_x(ctx: AmalgamContext, rng: random.Random, max_letters: int, min_letters: int = 1) -> AmalgamWord:
    return ctx.random_word(rng.randint(min_letters, max_letters), rng)


def _c_generators(ctx: AmalgamContext) -> list[AmalgamWord]:
    p, q = ctx.params.p, ctx.params.q
    return [ctx.from_c((i, j)) for i in range(1, p) for j in range(1, q)]


def _nontrivial_factor_words(ctx: AmalgamContext, side: str) -> Iterable[AmalgamWord]:
    """Every element of the factor outside C, as a one-letter word."""
    p, q = ctx.params.p, ctx.params.q
    for idx in range(1, ctx.transversal_size(side)):
        for i in range(p):
            for j in range(q):
                yield ctx.multiply(ctx.from_c((i, j)), ctx.embed(ctx.reps[side][idx], side))


def _check_args(samples: int, max_letters: int) -> None:
    if samples < 0:
        raise ValueError("samples must be nonnegative")
    if max_letters < 1:
        raise ValueError("max_letters must be at least 1")


def verify_self_normalizing_C(ctx, samples=DEFAULT_SAMPLES, max_letters=DEFAULT_MAX_LETTERS, seed=DEFAULT_SEED):
    """No element outside C conjugates a generator of C back into C."""
    _check_args(samples, max_letters)
    run = _Run(ctx, "self-normalizing", SAMPLED, seed)
    gens = _c_generators(ctx)
    exact = {}
    for side in "AB":
        f = ctx.factors[side]
        c_elems = ctx.carter[side].elements
        norm = normalizer(f, c_elems, f.element_list)
        exact[f"N_{side}(C)"] = {"order": len(norm), "domain": f.order}
        run.record(norm == c_elems, lambda side=side: {"side": side, "normalizer_order": len(norm)})

    def check(x: AmalgamWord) -> None:
        xinv = ctx.inverse(x)
        for d in gens:
            y = ctx.multiply(xinv, ctx.multiply(d, x))
            run.record(not ctx.in_c(y), lambda d=d: {"x": _word(ctx, x), "d": list(d.c)})

    one_letter = 0
    for side in "AB":
        for x in _nontrivial_factor_words(ctx, side):
            check(x)
            one_letter += 1
    exact["one_letter_domain"] = one_letter
    for t in range(samples):
        check(_sample_x(ctx, run.rng(t), max_letters))
    run.report.details.update(exact=exact, samples=samples, max_letters=max_letters, generators_of_C=len(gens))
    return run.finish()


def _prime_elements(ctx: AmalgamContext, side: str) -> list[AmalgamWord]:
    f = ctx.factors[side]
    prime = ctx.params.q if side == "A" else ctx.params.p
    return [ctx.embed(g, side) for g in f.element_list if f.element_order(g) % prime == 0]


def verify_prime_intersection(ctx, side="A", samples=DEFAULT_SAMPLES, max_letters=DEFAULT_MAX_LETTERS, seed=DEFAULT_SEED):
    """For x outside the factor, no element of order divisible by q (side A) or p (side B)
    is conjugated by x back into the factor.

    Since any fusion of Q by some x outside A would put an order-q element in
    A cap A^(x^-1), a pass also says the fusion on Q is controlled by A.
    """
    _check_args(samples, max_letters)
    if side not in ("A", "B"):
        raise ValueError("side must be 'A' or 'B'")
    run = _Run(ctx, f"intersection-{side}", SAMPLED, seed)
    targets = _prime_elements(ctx, side)
    other = "B" if side == "A" else "A"

    mul, in_factor = ctx.multiply, ctx.in_factor

    def check(x: AmalgamWord) -> None:
        xinv = ctx.inverse(x)
        for a in targets:
            if in_factor(mul(xinv, mul(a, x)), side):
                run.record(False, lambda a=a: {"a": _word(ctx, a), "x": _word(ctx, x)})
            else:
                run.report.trials += 1

    one_letter = 0
    for x in _nontrivial_factor_words(ctx, other):
        check(x)
        one_letter += 1
    skipped = 0
    for t in range(samples):
        x = _sample_x(ctx, run.rng(t), max_letters)
        if ctx.in_factor(x, side):
            skipped += 1
            continue
        check(x)
    run.report.details.update(
        side=side,
        targets=len(targets),
        one_letter_domain=one_letter,
        samples=samples,
        skipped_in_factor=skipped,
        max_letters=max_letters,
        fusion_controlled=run.report.passed,
    )
    return run.finish()


def verify_isolated(ctx, samples=DEFAULT_SAMPLES, max_letters=DEFAULT_MAX_LETTERS, seed=DEFAULT_SEED):
    """Each z in Z(Q)^# and w in Z(P)^# commutes with none of its other conjugates."""
    _check_args(samples, max_letters)
    run = _Run(ctx, "isolated", SAMPLED, seed)
    p, q = ctx.params.p, ctx.params.q
    # Z(Q) = <z> is the j-coordinate of C, Z(P) = <w> the i-coordinate.
    centrals = [ctx.from_c((0, j)) for j in range(1, q)] + [ctx.from_c((i, 0)) for i in range(1, p)]
    moved = 0

    def check(x: AmalgamWord) -> None:
        nonlocal moved
        xinv = ctx.inverse(x)
        for z in centrals:
            z2 = ctx.multiply(xinv, ctx.multiply(z, x))
            if z2 != z:
                moved += 1
            run.record(z2 == z or not ctx.commute(z, z2), lambda z=z: {"z": list(z.c), "x": _word(ctx, x)})

    one_letter = 0
    for side in "AB":
        for x in _nontrivial_factor_words(ctx, side):
            check(x)
            one_letter += 1
    for t in range(samples):
        check(_sample_x(ctx, run.rng(t), max_letters))
    run.report.details.update(one_letter_domain=one_letter, samples=samples, max_letters=max_letters, conjugates_moved=moved)
    return run.finish()


def verify_torsion_classification(ctx, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED, max_letters=DEFAULT_MAX_LETTERS, max_power=20):
    """(a) conjugates of factor elements keep their order; (b) cyclically
    reduced words of length >= 2 have powers whose length grows linearly."""
    _check_args(samples, max_letters)
    run = _Run(ctx, "torsion", SAMPLED, seed)
    lists = {s: ctx.factors[s].element_list for s in "AB"}
    for t in range(samples):
        rng = run.rng(t)
        side = rng.choice("AB")
        f = ctx.factors[side]
        a = rng.choice(lists[side])
        x = ctx.random_word(rng.randint(0, max_letters), rng)
        order = ctx.element_order(ctx.conjugate(ctx.embed(a, side), x))
        expected = f.element_order(a)
        run.record(order == expected, lambda: {"part": "a", "a": _elem(a), "side": side, "x": _word(ctx, x), "order": str(order)})

        half = rng.randint(1, max(1, max_letters // 2))
        w = ctx.random_word(2 * half, rng)
        core, _ = ctx.cyclic_reduce(w)
        ok = core == w and ctx.element_order(w) is INFINITE
        acc = ctx.identity
        for k in range(1, max_power + 1):
            acc = ctx.multiply(acc, w)
            if len(acc) != k * len(w):
                ok = False
                break
        run.record(ok, lambda: {"part": "b", "w": _word(ctx, w)})
    run.report.details.update(samples=samples, max_letters=max_letters, max_power=max_power)
    return run.finish()


def _side_budget(count: int, cost: int, budget: int) -> bool:
    return count * cost <= budget


def _generation_side(ctx: AmalgamContext, run: _Run, side: str, budget: int, rng: random.Random) -> dict:
    """For every non-central v in the extraspecial part of ``side``:
    v^-1 v^z is non-central, and <v^-1 v^z, z> contains the extraspecial part,
    where z is the acting generator (the image of the other side's centre)."""
    f = ctx.factors[side]
    t = f.acting_generator
    normal = f.normal_subgroup_elements()
    normal_set = frozenset(normal)
    noncentral = [v for v in normal if any(v.h.x)]
    exhaustive = _side_budget(len(noncentral), f.order, budget)
    if not exhaustive:
        noncentral = rng.sample(noncentral, max(1, budget // f.order))
    for v in noncentral:
        x = f.mul(f.inv(v), f.conjugate(v, t))
        ok = f.in_normal_subgroup(x) and any(x.h.x)
        if ok:
            ok = normal_set <= closure(f, [x, t])
        run.record(ok, lambda v=v: {"side": side, "v": _elem(v)})
    return {"checked": len(noncentral), "exhaustive": exhaustive, "target_order": len(normal)}


def verify_generation(ctx, budget: int = 2_000_000, pair_samples: int = 1000, seed=DEFAULT_SEED):
    """Finite ingredients of X = <uv, C> and X = <u, v, zw>.

    Checks (i)-(ii) on side B and (iii) on side A via ``_generation_side``;
    (iv) u v has infinite order; (vi) (uv)^-1 (uv)^z = v^-1 v^z in X; and (v)
    z w has order pq, so it generates C.
    """
    run = _Run(ctx, "generation", EXACT, seed)
    rng = random.Random(f"{seed}:generation")
    details = {"interpretation": "P <= <v^-1 v^z, z> computed in B (z is not in P)"}
    details["B"] = _generation_side(ctx, run, "B", budget, rng)
    details["A"] = _generation_side(ctx, run, "A", budget, rng)

    fa, fb = ctx.factors["A"], ctx.factors["B"]
    us = [u for u in fa.normal_subgroup_elements() if any(u.h.x)]
    vs = [v for v in fb.normal_subgroup_elements() if any(v.h.x)]
    exhaustive = len(us) * len(vs) <= pair_samples
    pairs = [(u, v) for u in us for v in vs] if exhaustive else [(rng.choice(us), rng.choice(vs)) for _ in range(pair_samples)]
    z = ctx.from_c((0, 1))
    for u, v in pairs:
        uv = ctx.multiply(ctx.embed(u, "A"), ctx.embed(v, "B"))
        run.record(ctx.element_order(uv) is INFINITE, lambda u=u, v=v: {"part": "iv", "u": _elem(u), "v": _elem(v)})
        lhs = ctx.multiply(ctx.inverse(uv), ctx.conjugate(uv, z))
        tau = ctx.c_to_side((0, 1), "B")
        rhs = ctx.embed(fb.mul(fb.inv(v), fb.conjugate(v, tau)), "B")
        run.record(lhs == rhs, lambda u=u, v=v: {"part": "vi", "u": _elem(u), "v": _elem(v)})
    zw = ctx.multiply(ctx.from_c((0, 1)), ctx.from_c((1, 0)))
    run.record(ctx.element_order(zw) == ctx.params.orderC, lambda: {"part": "v", "zw": _word(ctx, zw)})
    details["pairs"] = {"checked": len(pairs), "exhaustive": exhaustive}
    run.report.mode = EXACT if all(details[s]["exhaustive"] for s in "AB") and exhaustive else SAMPLED
    run.report.details.update(details)
    return run.finish()


def verify_generation_conjugate(ctx, samples_b: int = 100, seed=DEFAULT_SEED):
    """For sampled b in B: z^b has order q, and <z^b, v> contains P for a sampled non-central v in P.

    Also checks z^b w has order pq in X.
    """
    run = _Run(ctx, "generation-conjugate", SAMPLED, seed)
    fb = ctx.factors["B"]
    tau = fb.acting_generator
    normal = frozenset(fb.normal_subgroup_elements())
    noncentral = sorted(v for v in normal if any(v.h.x))
    elements = fb.element_list
    w = ctx.from_c((1, 0))
    in_c = 0
    for t in range(samples_b):
        rng = run.rng(t)
        b = rng.choice(elements)
        v = rng.choice(noncentral)
        zb = fb.conjugate(tau, b)
        in_c += fb.in_carter(b)
        ok = fb.element_order(zb) == ctx.params.q
        ok = ok and normal <= closure(fb, [zb, v])
        zbw = ctx.multiply(ctx.embed(zb, "B"), w)
        ok = ok and ctx.element_order(zbw) == ctx.params.orderC
        run.record(ok, lambda b=b, v=v: {"b": _elem(b), "v": _elem(v)})
    run.report.details.update(samples_b=samples_b, b_in_C=in_c)
    return run.finish()


def _is_small_power_relation(ctx: AmalgamContext, y: AmalgamWord, w: AmalgamWord, bound: int) -> bool:
    ypow = {0: ctx.identity}
    for a in range(1, bound + 1):
        ypow[a] = ctx.multiply(ypow[a - 1], y)
    wpow = ctx.identity
    targets = {v: a for a, v in ypow.items() if a}
    inv_targets = {ctx.inverse(v): a for a, v in ypow.items() if a}
    for _ in range(bound):
        wpow = ctx.multiply(wpow, w)
        if wpow in targets or wpow in inv_targets:
            return True
    return False


def probe_centralizer(ctx, w: AmalgamWord | None = None, samples: int = 1000, seed=DEFAULT_SEED, max_letters: int = 4, power_bound: int = 10):
    """Probe C_X(w) for w of cyclically reduced length >= 2.

    Powers of w must commute with w; sampled words commuting with w must be
    commensurable with it (y^a = w^(+-b) for small a, b); sampled conjugates
    x w x^-1 other than w itself must not commute with w.
    """
    run = _Run(ctx, "centralizer-probe", SAMPLED, seed)
    if w is None:
        w = ctx.random_word(2 * max(1, max_letters // 2), random.Random(f"{seed}:centralizer-w"))
    core, _ = ctx.cyclic_reduce(w)
    if len(core) < 2:
        raise ValueError("probe needs a word of cyclically reduced length >= 2")
    for k in range(-power_bound, power_bound + 1):
        wk = ctx.power(w, k)
        run.record(ctx.commute(w, wk), lambda k=k: {"part": "power", "k": k})
    commuting = noncommuting = conj_commuting = 0
    for t in range(samples):
        rng = run.rng(t)
        y = ctx.random_word(rng.randint(0, max_letters), rng)
        if ctx.commute(y, w):
            commuting += 1
            ok = y == ctx.identity or _is_small_power_relation(ctx, y, w, power_bound)
            run.record(ok, lambda y=y: {"part": "sample", "y": _word(ctx, y)})
        else:
            noncommuting += 1
            run.record(True, dict)
        x = ctx.random_word(rng.randint(1, max_letters), rng)
        wx = ctx.multiply(ctx.multiply(x, w), ctx.inverse(x))
        if wx != w and ctx.commute(wx, w):
            conj_commuting += 1
            run.record(False, lambda x=x: {"part": "conjugate", "x": _word(ctx, x)})
        else:
            run.record(True, dict)
    run.report.details.update(
        w=_word(ctx, w), samples=samples, commuting=commuting, noncommuting=noncommuting,
        commuting_conjugates=conj_commuting, note="probe only; not a proof",
    )
    return run.finish()


def verify_perfectness(ctx, amalgamate: bool = True):
    """X = [X, X]; with amalgamate=False this is the free-product control and must FAIL."""
    run = _Run(ctx, "perfect" if amalgamate else "perfect-control", EXACT, None)
    inv = amalgam_abelianization(ctx, amalgamate)
    run.record(not inv, lambda: {"abelianization": inv})
    run.report.details["abelianization"] = inv
    return run.finish()


def verify_brackets(ctx):
    """[Q, sigma] = Q in A and [P, tau] = P in B, exhaustively."""
    run = _Run(ctx, "brackets", EXACT, None)
    run.report.trials = 0
    for side in "AB":
        rep = bracket_check(ctx.factors[side])
        run.record(rep.full, lambda rep=rep: {"side": rep.side, "missing": _elem(rep.missing)})
        run.report.details[side] = {"closure_order": rep.closure_order, "target_order": rep.target_order}
    return run.finish()


CLAIMS = (
    "self-normalizing",
    "brackets",
    "intersection",
    "isolated",
    "torsion",
    "generation",
    "generation-conjugate",
    "perfect",
    "centralizer-probe",
)


def run_claim(ctx, claim: str, samples=DEFAULT_SAMPLES, max_letters=DEFAULT_MAX_LETTERS, seed=DEFAULT_SEED) -> list[VerificationReport]:
    if claim == "self-normalizing":
        return [verify_self_normalizing_C(ctx, samples, max_letters, seed)]
    if claim == "brackets":
        return [verify_brackets(ctx)]
    if claim == "intersection":
        return [verify_prime_intersection(ctx, s, samples, max_letters, seed) for s in "AB"]
    if claim == "isolated":
        return [verify_isolated(ctx, samples, max_letters, seed)]
    if claim == "torsion":
        return [verify_torsion_classification(ctx, samples, seed, max_letters)]
    if claim == "generation":
        return [verify_generation(ctx, seed=seed)]
    if claim == "generation-conjugate":
        return [verify_generation_conjugate(ctx, seed=seed)]
    if claim == "perfect":
        return [verify_perfectness(ctx), verify_perfectness(ctx, amalgamate=False)]
    if claim == "centralizer-probe":
        return [probe_centralizer(ctx, samples=min(samples, 1000), seed=seed, max_letters=min(max_letters, 4))]
    if claim == "all":
        out = []
        for name in CLAIMS:
            out += run_claim(ctx, name, samples, max_letters, seed)
        return out
    raise ValueError(f"unknown claim {claim!r}")


def suite_passed(reports: list[VerificationReport]) -> bool:
    """Controls (claims ending in -control) must fail; everything else must pass."""
    return all(r.passed != r.claim.endswith("-control") for r in reports)
