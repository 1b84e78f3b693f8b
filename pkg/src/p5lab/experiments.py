"""Corpus runners: per-instance records, verification suites and exponent summaries.

The exhaustive suites walk the labelled P5-free corpus one isomorphism class
at a time: every quantity checked here is invariant under relabelling, so
each class is computed once on its least-code member and counted with its
orbit size.  A seeded sample of labelled members is also recomputed directly
so that the shortcut itself stays tested.
"""

from __future__ import annotations

import itertools
import math
import time
from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction

import numpy as np

from . import __version__
from .bitset import as_fraction, fraction_str, members
from .decomposition import (
    DEFAULT_D,
    certificate_to_json,
    induction_step_inequality,
    phi,
    phi_lower_bound_check,
    trichotomy_search,
    validate_certificate,
)
from .errors import CapabilityError, InvariantViolation
from .generators import (
    graph_from_code,
    orbits,
    p5_free_codes,
    random_p5_free,
    stream,
    triangle_free_complement,
)
from .graph import Graph, blow_up, complement, is_connected, to_graph6
from .invariants import (
    HALL_RATIO_CAP,
    alpha,
    chi,
    chi_star,
    dual_weights,
    empirical_exponent,
    hall_ratio,
    omega,
    psi,
)
from .structure import (
    Attachment,
    comb,
    cutset_attachment_split,
    find_induced_p5,
    minimal_cutset_mask,
    validate_comb,
)
from .subsets import subset_table


@dataclass(frozen=True)
class Caps:
    hall: int = HALL_RATIO_CAP
    pair: int = 20
    blockade: int = 14
    corpus: int = 7

    HARD = {"hall": 24, "pair": 24, "blockade": 20, "corpus": 7}

    @classmethod
    def parse(cls, text: str | None) -> Caps:
        """Parse ``"hall=16,pair=20"`` style overrides; unknown keys are errors."""
        values = {}
        for item in (text or "").split(","):
            item = item.strip()
            if not item:
                continue
            key, _, val = item.partition("=")
            key = key.strip()
            if key not in cls.HARD:
                raise ValueError(f"unknown cap {key!r}")
            values[key] = int(val)
        caps = cls(**values)
        for key, hard in cls.HARD.items():
            if getattr(caps, key) > hard:
                raise CapabilityError(f"{key} cap", hard, getattr(caps, key))
        return caps

    def to_json(self) -> dict:
        return {"hall": self.hall, "pair": self.pair, "blockade": self.blockade, "corpus": self.corpus}


def run_header(command: str, seed: int | None, caps: Caps, started: float, suite: str | None = None) -> dict:
    return {"tool": "p5lab", "version": __version__, "command": command, "suite": suite, "seed": seed,
            "caps": caps.to_json(), "wall_time": round(time.time() - started, 3)}


# -- per-instance records -----------------------------------------------------

def _d_hat_json(d: Decimal | None):
    return None if d is None else float(d)


def instance_record(g: Graph, ident: int, caps: Caps = Caps()) -> dict:
    """Exact invariants of one graph; the chain inequality is asserted."""
    a, w, c = alpha(g), omega(g), chi(g)
    cs = chi_star(g).value
    rec = {"id": ident, "graph6": to_graph6(g), "n": g.n, "alpha": a, "omega": w, "chi": c,
           "chi_star": fraction_str(cs), "hall_ratio": None}
    rho = None
    if g.n <= caps.hall:
        rho = hall_ratio(g, cap=caps.hall).value
        rec["hall_ratio"] = fraction_str(rho)
    else:
        rec["hall_ratio_reason"] = f"n={g.n} exceeds hall cap {caps.hall}"
    rec["d_hat"] = _d_hat_json(empirical_exponent(g).d_hat)
    rec["certificates"] = []
    rec["verdicts"] = []
    chain = [w, rho, cs, c] if rho is not None else [w, cs, c]
    if any(x > y for x, y in zip(chain, chain[1:])):
        raise InvariantViolation(f"chain inequality fails on {to_graph6(g)}: {chain}")
    return rec


CSV_COLUMNS = ("id", "graph6", "n", "alpha", "omega", "chi", "chi_star", "hall_ratio", "d_hat")


def parallel_map(fn: Callable, items: list, jobs: int = 1) -> list:
    """Order-preserving map; a process pool when ``jobs > 1``."""
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


# -- suites ------------------------------------------------------------------

@dataclass
class SuiteResult:
    suite: str
    instances: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, g: Graph | None, detail: str) -> None:
        self.failures.append({"graph6": to_graph6(g) if g is not None else None, "detail": detail})

    def to_json(self) -> dict:
        return {"suite": self.suite, "pass": self.passed, "instances": self.instances,
                "failures": self.failures[:50], "failure_count": len(self.failures),
                "details": _jsonable(self.details)}


def _jsonable(x):
    if isinstance(x, Fraction):
        return fraction_str(x)
    if isinstance(x, Decimal):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def corpus_classes(n_max: int, connected_only: bool = False) -> Iterable[tuple[Graph, int]]:
    """(representative, labelled count) for every isomorphism class with n <= n_max."""
    for n in range(n_max + 1):
        for code, size in orbits(n, p5_free_codes(n)):
            g = graph_from_code(n, code)
            if connected_only and not (n and is_connected(g)):
                continue
            yield g, size


def labelled_sample(n_max: int, count: int, seed: int, n_min: int = 0) -> list[Graph]:
    """Seeded sample of labelled corpus members, spread over n_min..n_max."""
    gen = stream(seed, 17)
    out = []
    sizes = list(range(n_min, n_max + 1))
    for i in range(count):
        n = sizes[i % len(sizes)]
        codes = p5_free_codes(n)
        out.append(graph_from_code(n, int(codes[int(gen.integers(0, len(codes)))])))
    return out


def chain_check(g: Graph) -> str | None:
    w, c = omega(g), chi(g)
    rho = hall_ratio(g).value
    cs = chi_star(g).value
    if not (w <= rho <= cs <= c):
        return f"omega={w} rho={rho} chi*={cs} chi={c}"
    if psi(g) > rho:
        return f"psi={psi(g)} exceeds rho={rho}"
    if alpha(g) != omega(complement(g)):
        return "alpha differs from omega of the complement"
    return None


def suite_chain(n_max: int = 7, random: int = 0, seed: int = 0, sample: int = 200) -> SuiteResult:
    res = SuiteResult("chain")
    classes = 0
    for g, size in corpus_classes(n_max):
        classes += 1
        res.instances += size
        bad = chain_check(g)
        if bad:
            res.fail(g, bad)
    extra = labelled_sample(n_max, sample, seed) + (random_p5_free(random, 10, seed) if random else [])
    # extra graphs are reported in details; instances counts the labelled corpus only
    for g in extra:
        bad = chain_check(g)
        if bad:
            res.fail(g, bad)
    res.details = {"classes": classes, "labelled_sample": sample, "random": random, "extra_checked": len(extra)}
    return res


def blowup_check(g: Graph) -> str | None:
    if g.n == 0:
        return None
    w = dual_weights(g)
    cs = chi_star(g).value
    if w.value != cs:
        return f"dual value {w.value} differs from primal {cs}"
    total = sum(w.f)
    fs = sum(w.f[v] for v in w.s_star)
    if total != cs * fs:
        return "s_star is not tight"
    j = blow_up(g, w.f)
    if psi(j) != cs:
        return f"psi(blow-up)={psi(j)} but chi*={cs}"
    if find_induced_p5(j) is not None:
        return "blow-up contains an induced P5"
    return None


def suite_blowup_equiv(n_max: int = 6, random: int = 200, seed: int = 1, exhaustive_labelled: bool = False,
                       random_n_max: int = 10) -> SuiteResult:
    """psi of the dual-weight blow-up equals chi*, and the blow-up stays P5-free.

    With ``exhaustive_labelled`` every labelled corpus graph is solved
    directly instead of once per isomorphism class.
    """
    res = SuiteResult("blowup-equiv")
    if exhaustive_labelled:
        for n in range(n_max + 1):
            for code in p5_free_codes(n).tolist():
                g = graph_from_code(n, code)
                res.instances += 1
                bad = blowup_check(g)
                if bad:
                    res.fail(g, bad)
    else:
        for g, size in corpus_classes(n_max):
            res.instances += size
            bad = blowup_check(g)
            if bad:
                res.fail(g, bad)
    for g in random_p5_free(random, random_n_max, seed):
        res.instances += 1
        bad = blowup_check(g)
        if bad:
            res.fail(g, bad)
    res.details = {"n_max": n_max, "random": random, "labelled": exhaustive_labelled}
    return res


def trichotomy_check(g: Graph, eps, d) -> tuple[str | None, str | None]:
    r = trichotomy_search(g, eps, d)
    if r.certificate is None:
        return "no certificate of any shape", None
    verdict = validate_certificate(g, r.certificate, r.rho_g, d)
    if not verdict.passed:
        return "; ".join(c.inequality for c in verdict.failures()), r.certificate.kind
    return None, r.certificate.kind


def suite_trichotomy(n_max: int = 7, eps="1/2", d=DEFAULT_D, sample: int = 100, seed: int = 0) -> SuiteResult:
    eps, d = as_fraction(eps), as_fraction(d)
    res = SuiteResult("trichotomy")
    kinds: dict[str, int] = {}
    for g, size in corpus_classes(n_max, connected_only=True):
        if g.n < 2 or omega(g) < 2:
            continue
        res.instances += size
        bad, kind = trichotomy_check(g, eps, d)
        kinds[kind or "failure"] = kinds.get(kind or "failure", 0) + size
        if bad:
            res.fail(g, bad)
    for g in labelled_sample(n_max, sample, seed, n_min=2):
        if not is_connected(g) or omega(g) < 2:
            continue
        res.instances += 1
        bad, kind = trichotomy_check(g, eps, d)
        kinds[kind or "failure"] = kinds.get(kind or "failure", 0) + 1
        if bad:
            res.fail(g, bad)
    res.details = {"eps": eps, "d": d, "certificate_kinds": kinds}
    return res


def random_comb_instance(seed: int, index: int):
    """A random input satisfying the comb preconditions, with delta and gamma."""
    gen = stream(seed, index)
    ka = int(gen.integers(1, 7))
    kb = int(gen.integers(1, 16))
    n = ka + kb
    anchors = list(range(ka))
    b = list(range(ka, n))
    dens = float(gen.choice([0.15, 0.3, 0.5]))
    edges = set()
    for v in b:
        edges.add((int(gen.integers(0, ka)), v))
    for u in anchors:
        for v in b:
            if gen.random() < dens:
                edges.add((u, v))
    for u, v in itertools.combinations(range(n), 2):
        if (u < ka) == (v < ka) and gen.random() < 0.3:
            edges.add((u, v))
    g = Graph.from_edges(n, edges)
    deg = max((g.adj[u] >> ka).bit_count() for u in anchors)
    delta = Fraction(deg) + Fraction(int(gen.integers(0, 3)), 2)
    threshold = Fraction(kb * kb, 400) / delta  # gamma where |B|^2 = 400 gamma delta
    gamma = threshold * Fraction(int(gen.integers(1, 33)), 8)
    if gen.random() < 0.3:
        gamma = Fraction(int(gen.integers(1, 9)), int(gen.integers(1, 9)))
    return g, anchors, b, delta, gamma


def suite_comb(count: int = 500, seed: int = 0) -> SuiteResult:
    res = SuiteResult("comb")
    small = teeth = 0
    for i in range(count):
        g, anchors, b, delta, gamma = random_comb_instance(seed, i)
        res.instances += 1
        try:
            out = comb(g, anchors, b, delta, gamma)
        except InvariantViolation as exc:
            res.fail(g, f"instance {i}: {exc}")
            continue
        if out.small:
            small += 1
            if not len(b) ** 2 < 400 * gamma * delta:
                res.fail(g, f"instance {i}: SmallB although |B|^2 >= 400 gamma delta")
        else:
            teeth += 1
            problems = validate_comb(g, out, gamma)
            if problems:
                res.fail(g, f"instance {i}: " + "; ".join(problems))
    res.details = {"small": small, "teeth": teeth}
    return res


def suite_phi(limit: int = 8) -> SuiteResult:
    res = SuiteResult("phi")
    for r in range(limit + 1):
        for s in range(r, limit + 1):
            res.instances += 1
            if not phi_lower_bound_check(r, s):
                res.fail(None, f"lower bound fails at ({r},{s})")
            for t in range(s, limit + 1):
                if phi(r, s) * phi(s, t) != phi(r, t):
                    res.fail(None, f"multiplicativity fails at ({r},{s},{t})")
    return res


def induction_grid(points: int = 1000) -> list[Fraction]:
    """Evenly spaced rationals i / (4 * points) for i = 1..points, ending at 1/4."""
    return [Fraction(i, 4 * points) for i in range(1, points + 1)]


def suite_induction_step(points: int = 1000) -> SuiteResult:
    res = SuiteResult("induction-step")
    for y in induction_grid(points):
        res.instances += 1
        if not induction_step_inequality(y):
            res.fail(None, f"1 - 3y < (1 - y)^9 at y = {y}")
    return res


def cutset_check(g: Graph) -> tuple[int, str | None]:
    """Every connected anticomplete pair: minimal cutset and attachment split."""
    t = subset_table(g)
    conn = np.flatnonzero(t.connected)
    calls = 0
    for a in conn.tolist():
        rest = g.full_mask & ~(a | int(t.nbr[a]))
        if not rest:
            continue
        for b in conn[(conn & ~rest) == 0].tolist():
            s = minimal_cutset_mask(g, a, b)
            calls += 1
            split = cutset_attachment_split(g, members(s), members(a), members(b), assume_p5_free=False)
            bad = [v for v, att in split.items() if att.kind is Attachment.MIXED_ON_BOTH]
            if bad:
                return calls, f"vertex {bad[0]} mixed on both sides for A={sorted(members(a))}, B={sorted(members(b))}"
    return calls, None


def suite_cutset(n_max: int = 7) -> SuiteResult:
    res = SuiteResult("cutset")
    calls = 0
    for g, size in corpus_classes(n_max, connected_only=True):
        res.instances += size
        c, bad = cutset_check(g)
        calls += c
        if bad:
            res.fail(g, bad)
    res.details = {"cutset_calls": calls}
    return res


SUITES = {
    "chain": suite_chain,
    "trichotomy": suite_trichotomy,
    "comb": suite_comb,
    "blowup-equiv": suite_blowup_equiv,
    "phi": suite_phi,
    "induction-step": suite_induction_step,
    "cutset": suite_cutset,
}


# -- exponent estimation -----------------------------------------------------

@dataclass
class ExponentSummary:
    max_d_hat: Decimal | None
    argmax: dict | None
    histogram: dict
    nontrivial: int
    skipped: list
    all_within_two: bool

    def to_json(self) -> dict:
        return {"max_d_hat": None if self.max_d_hat is None else float(self.max_d_hat),
                "argmax": self.argmax, "histogram": self.histogram, "nontrivial": self.nontrivial,
                "skipped": self.skipped, "all_within_two": self.all_within_two,
                "note": None if self.nontrivial else "no nontrivial instances"}


def estimate_exponent(graphs: Iterable[tuple[int, Graph]], bin_width: Decimal = Decimal("0.1")) -> ExponentSummary:
    """Largest empirical exponent over (id, graph) pairs; non-P5-free inputs are skipped.

    ``all_within_two`` is decided exactly as ``n <= alpha * omega**2``.
    """
    best: Decimal | None = None
    arg = None
    hist: dict[str, int] = {}
    count = 0
    skipped = []
    within = True
    for ident, g in graphs:
        if find_induced_p5(g) is not None:
            skipped.append({"id": ident, "reason": "contains an induced P5"})
            continue
        est = empirical_exponent(g)
        if est.d_hat is None:
            continue
        count += 1
        within &= g.n <= est.alpha * est.omega ** 2
        lo = (est.d_hat // bin_width) * bin_width
        key = f"[{lo:.1f},{lo + bin_width:.1f})"
        hist[key] = hist.get(key, 0) + 1
        if best is None or est.d_hat > best:
            best = est.d_hat
            arg = {"id": ident, "graph6": to_graph6(g), "n": est.n, "alpha": est.alpha, "omega": est.omega}
    return ExponentSummary(best, arg, dict(sorted(hist.items())), count, skipped, within)


def corpus_exponent(n_max: int = 7) -> ExponentSummary:
    """Exponent summary over every class of the exhaustive corpus."""
    items = ((i, g) for i, (g, _) in enumerate(corpus_classes(n_max)))
    return estimate_exponent(items)


def tightness_family(count: int = 20, seed: int = 0, n_min: int = 12, n_max: int = 16) -> list[Graph]:
    sizes = list(range(n_min, n_max + 1))
    return [triangle_free_complement(sizes[i % len(sizes)], seed, i) for i in range(count)]


__all__ = [
    "CSV_COLUMNS", "Caps", "ExponentSummary", "SUITES", "SuiteResult", "chain_check",
    "blowup_check", "corpus_classes", "corpus_exponent", "cutset_check", "estimate_exponent",
    "induction_grid", "instance_record", "labelled_sample", "parallel_map", "random_comb_instance",
    "run_header", "suite_blowup_equiv", "suite_chain", "suite_comb", "suite_cutset",
    "suite_induction_step", "suite_phi", "suite_trichotomy", "tightness_family", "trichotomy_check",
]
