"""The low-space randomized solver.

One repetition samples three mixers, splits the remaining items into eight
parts, draws a prime ``p`` and residue ``r``, builds the eight candidate
families, then for every residue ``s`` modulo a second prime ``q`` extracts a
left and a right family and asks WOV for a compatible pair.  Every pair WOV
returns is turned back into an index set and re-verified, so the solver never
reports a false positive.

Solution sizes whose mixer fraction is zero are handled by an exact
size-restricted Schroeppel-Shamir run.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .core import SolutionCertificate, SubsetSumInstance, verify_certificate
from .mixer import MixerTriple, sample_mixers
from .numtheory import random_prime
from .params import (
    PartitionPlan,
    beta_schedule,
    lambda_exponent,
    largest_remainder,
    parameter_point,
    partition_plan,
)
from .streams import Counters, faster_shamir, schroeppel_shamir, shamir_for_rings
from .wov import Entry, WeightedSetFamily, solve_wov

log = logging.getLogger(__name__)

FOUND = "yes"
EXHAUSTED = "exhausted"


class _Skip:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "SKIP"

    def __bool__(self) -> bool:
        return False


SKIP = _Skip()


@dataclass
class Config:
    alpha_sweep: Sequence[int] | None = None  # solution sizes to try; None = all 0..n
    max_reps: int = 4
    poly_factor: int | None = None  # None = n**2
    q_poly: float = 1.0
    slack_window: int = 1
    dual: bool = True
    family_cap: int = 1 << 16
    seed: int = 0
    schedule: Callable[[float], float] = field(default=beta_schedule, repr=False)

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("schedule")
        if d["alpha_sweep"] is not None:
            d["alpha_sweep"] = list(d["alpha_sweep"])
        return d


def repetition_budget(n: int, lambda_: float, config: Config | None = None) -> tuple[int, bool]:
    """``ceil(2^(lambda n)) * poly_factor`` capped at ``max_reps``; second value flags the cap."""
    config = config or Config()
    poly = n * n if config.poly_factor is None else config.poly_factor
    want = math.ceil(2 ** (lambda_ * n) - 1e-12) * max(1, poly)
    if config.max_reps is not None and want > config.max_reps:
        return config.max_reps, True
    return want, False


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


def _subsets(inst: SubsetSumInstance, idx: Sequence[int], sizes: range | None = None):
    """``(mask, weight)`` arrays over subsets of ``idx``; optionally only the given sizes."""
    idx = list(idx)
    sums = kernels.subset_sums(kernels.as_int_array([inst.items[i] for i in idx]))
    masks = np.arange(len(sums), dtype=np.int64)
    if sizes is not None:
        pc = kernels.popcounts(len(idx))
        keep = (pc >= sizes.start) & (pc < sizes.stop)
        masks, sums = masks[keep], sums[keep]
    return masks, sums


def _items(mask: int, idx: Sequence[int]) -> tuple[int, ...]:
    return tuple(idx[b] for b in range(len(idx)) if mask >> b & 1)


def build_representatives(inst: SubsetSumInstance, m_side: Sequence[int]) -> WeightedSetFamily:
    """One subset of ``m_side`` per distinct subset weight (first in mask order)."""
    masks, sums = _subsets(inst, m_side)
    _, first = np.unique(sums, return_index=True)
    fam = WeightedSetFamily(0)
    for k in sorted(first):
        fam.add(0, int(sums[k]), _items(int(masks[k]), list(m_side)))
    return fam


@dataclass
class Layout:
    """Concrete item indices of the eleven parts."""

    m_left: tuple[int, ...]
    middle: tuple[int, ...]
    m_right: tuple[int, ...]
    L: tuple[tuple[int, ...], ...]
    R: tuple[tuple[int, ...], ...]


@dataclass
class QFamilies:
    q1: WeightedSetFamily
    q2: WeightedSetFamily
    q3: WeightedSetFamily
    q4: WeightedSetFamily
    q1p: WeightedSetFamily
    q2p: WeightedSetFamily
    q3p: WeightedSetFamily
    q4p: WeightedSetFamily

    @property
    def left(self) -> list[WeightedSetFamily]:
        return [self.q1, self.q2, self.q3, self.q4]

    @property
    def right(self) -> list[WeightedSetFamily]:
        return [self.q1p, self.q2p, self.q3p, self.q4p]

    @property
    def q_max(self) -> int:
        return max(len(f) for f in self.left + self.right)

    @property
    def total_entries(self) -> int:
        return sum(len(f) for f in self.left + self.right)


def layer_targets(layout: Layout, gamma: float) -> tuple[list[int], list[int]]:
    """Integer ``gamma * |part|`` for the eight outer parts, rounded jointly."""
    sizes = [len(p) for p in layout.L + layout.R]
    total = round(gamma * sum(sizes))
    out = largest_remainder([gamma * s for s in sizes], total) if sum(sizes) else [0] * 8
    return out[:4], out[4:]


def _window(center: int, w: int, top: int) -> range:
    return range(max(0, center - w), min(top, center + w) + 1)


def build_q_families(inst: SubsetSumInstance, layout: Layout, gamma: float, j1: int,
                     reps_L: WeightedSetFamily, reps_R: WeightedSetFamily,
                     slack_window: int = 0, family_cap: int | None = None) -> QFamilies:
    """The eight candidate families.

    Outer layers keep subsets of size ``gamma*|part|`` (+/- ``slack_window``).
    The fourth left family uses exactly ``j1`` items of the middle mixer; the
    fourth right family uses ``|M|//2 - j1`` (+/- window).  Masks record the
    middle-mixer part only.
    """
    d = len(layout.middle)
    gl, gr = layer_targets(layout, gamma)
    for g, part in zip(gl + gr, layout.L + layout.R):
        if g > len(part):
            raise ValueError(f"layer size {g} exceeds part size {len(part)}")
    if not 0 <= j1 <= d:
        raise ValueError("middle layer outside the mixer")
    half = d // 2
    right_mid = _window(half - j1, slack_window, d)
    if not len(right_mid):
        raise ValueError("infeasible right middle layer")

    def outer(part, g):
        return _subsets(inst, part, _window(g, slack_window, len(part)))

    def plain(part, g):
        fam = WeightedSetFamily(d)
        masks, sums = outer(part, g)
        for m, s in zip(masks.tolist(), sums.tolist()):
            fam.add(0, int(s), _items(m, part))
        return fam

    def with_reps(reps, part, g):
        fam = WeightedSetFamily(d)
        masks, sums = outer(part, g)
        if family_cap is not None and len(reps) * len(masks) > family_cap:
            raise MemoryError("family over cap")
        for rep in reps:
            for m, s in zip(masks.tolist(), sums.tolist()):
                fam.add(0, rep.weight + int(s), rep.payload + _items(m, part))
        return fam

    mid_sets = {}

    def with_middle(part, g, layer: range):
        fam = WeightedSetFamily(d)
        masks, sums = outer(part, g)
        key = (layer.start, layer.stop)
        if key not in mid_sets:
            mid_sets[key] = _subsets(inst, layout.middle, layer)
        mm, ms = mid_sets[key]
        if family_cap is not None and len(mm) * len(masks) > family_cap:
            raise MemoryError("family over cap")
        for m, s in zip(masks.tolist(), sums.tolist()):
            base = _items(m, part)
            for mmask, msum in zip(mm.tolist(), ms.tolist()):
                fam.add(mmask, int(s) + int(msum), base + _items(mmask, layout.middle))
        return fam

    L, R = layout.L, layout.R
    fams = QFamilies(
        with_reps(reps_L, L[0], gl[0]), plain(L[1], gl[1]), plain(L[2], gl[2]),
        with_middle(L[3], gl[3], range(j1, j1 + 1)),
        with_reps(reps_R, R[0], gr[0]), plain(R[1], gr[1]), plain(R[2], gr[2]),
        with_middle(R[3], gr[3], right_mid),
    )
    if family_cap is not None and fams.q_max > family_cap:
        raise MemoryError("family over cap")
    return fams


# ---------------------------------------------------------------------------
# side families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SideFamilyBudget:
    p: int
    q: int
    r: int
    s: int
    ell: float

    def __post_init__(self):
        if self.ell < 0:
            raise ValueError("ell must be >= 0")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError("p and q must be coprime")


def side_budget(q_max: int, p: int, q: int, r: int, s: int, d: int, j1: int) -> SideFamilyBudget:
    """``ell = |Q_max|^4/(pq) + C(|M|, max(j1, |M|/2 - j1))``."""
    layer = max(j1, d // 2 - j1)
    return SideFamilyBudget(p, q, r, s, q_max ** 4 / (p * q) + math.comb(d, min(max(layer, 0), d)))


def build_side_family(qf: Sequence[WeightedSetFamily], budget: SideFamilyBudget,
                      universe: int, counters: Counters | None = None):
    """Candidate ``(weight, middle-mask)`` entries for one side, or ``SKIP``.

    At most ``2*ell + 1`` residue-matching tuples are listed.  If that is all
    of them, every distinct (weight, mask) is kept.  Otherwise the strict
    majority weight is taken and the exact-weight dedup search runs on it; no
    majority means this residue is skipped.  Each entry carries one witness
    tuple as its payload.
    """
    counters = counters if counters is not None else Counters()
    weights = [[e.weight for e in f] for f in qf]
    cap = 2 * math.ceil(budget.ell) + 1
    tuples = shamir_for_rings(weights, budget.r, budget.p, budget.s, budget.q, m=cap, counters=counters)
    counters.bump("ring_tuples", len(tuples))
    fam = WeightedSetFamily(universe)
    totals = [sum(w[i] for w, i in zip(weights, tup)) for tup in tuples]
    if __debug__:
        for tot in totals:
            assert (tot - budget.r) % budget.p == 0 and (tot - budget.s) % budget.q == 0
    if len(tuples) < cap:
        seen = set()
        for tup, tot in zip(tuples, totals):
            key = (tot, qf[3].entries[tup[3]].mask)
            if key not in seen:
                seen.add(key)
                fam.add(key[1], tot, tup)
        return fam
    tally: dict[int, int] = {}
    for tot in totals:
        tally[tot] = tally.get(tot, 0) + 1
    a, hits = max(tally.items(), key=lambda kv: kv[1])
    if 2 * hits <= len(tuples):
        counters.bump("skips")
        return SKIP
    counters.bump("majority_path")
    payloads = [e.mask for e in qf[3].entries]
    for _, mask, tup in faster_shamir(weights, a, payloads, counters=counters, witnesses=True):
        fam.add(mask, a, tup)
    return fam


# ---------------------------------------------------------------------------
# solver
# ---------------------------------------------------------------------------


@dataclass
class LowspaceReport:
    status: str
    certificate: SolutionCertificate | None
    counters: dict
    config: dict
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        return {
            "answer": self.status,
            "certificate": None if self.certificate is None else list(self.certificate.indices),
            "counters": self.counters,
            "config": self.config,
            "wall_time": self.wall_time,
        }


def exact_size_schroeppel_shamir(inst: SubsetSumInstance, k: int,
                                 counters: Counters | None = None) -> SolutionCertificate | None:
    """Schroeppel-Shamir restricted to solutions of exactly ``k`` items."""
    scale = inst.n + 1
    lifted = SubsetSumInstance([w * scale + 1 for w in inst.items], inst.target * scale + k)
    return schroeppel_shamir(lifted, counters)


def size_order(n: int, sweep: Sequence[int] | None) -> list[int]:
    sizes = sorted(set(range(n + 1) if sweep is None else (int(k) for k in sweep)))
    if any(k < 0 or k > n for k in sizes):
        raise ValueError("solution sizes must lie in [0, n]")
    return sorted(sizes, key=lambda k: (abs(2 * k - n), k))


class _Run:
    def __init__(self, inst: SubsetSumInstance, config: Config):
        self.inst = inst
        self.cfg = config
        self.rng = np.random.default_rng(config.seed)
        self.c = Counters()
        self.live = 0
        self.scale = 0  # largest |Q_max| + ell + 2^|M| seen

    def note_live(self, entries: int) -> None:
        self.live = max(self.live, entries)

    def layout(self, triple: MixerTriple, plan: PartitionPlan) -> Layout:
        used = triple.used()
        rest = [i for i in range(self.inst.n) if i not in used]
        rest = [rest[i] for i in self.rng.permutation(len(rest))]
        parts, pos = [], 0
        for size in plan.L_parts + plan.R_parts:
            parts.append(tuple(sorted(rest[pos:pos + size])))
            pos += size
        return Layout(triple.left.indices, triple.middle.indices, triple.right.indices,
                      tuple(parts[:4]), tuple(parts[4:]))

    def draw_q(self, Q: int, p: int) -> int:
        for _ in range(64):
            q = random_prime(max(Q // 2, 2), self.rng).p
            if q != p:
                return q
        return random_prime(max(Q, 3 * p), self.rng).p

    def attempt(self, inst: SubsetSumInstance, k: int) -> SolutionCertificate | None:
        """One repetition for solution size ``k`` on ``inst``."""
        n = inst.n
        alpha = k / n
        beta = self.cfg.schedule(alpha)
        triple = sample_mixers(inst, beta, self.rng)
        d = len(triple.middle.indices)
        self.note_live(2 ** d + inst.n)
        reps_L = build_representatives(inst, triple.left.indices)
        reps_R = build_representatives(inst, triple.right.indices)
        lam = lambda_exponent(alpha, beta)
        outer = n - 3 * d
        gamma = min(1.0, max(0.0, (k - 1.5 * d) / outer)) if outer else 0.0
        for j1 in range(d // 2 + 1):
            self.c.bump("mu_layers")
            point = parameter_point(alpha, beta, mu=j1 / d, eps=triple.eps,
                                    eps_L=triple.left.epsilon, eps_R=triple.right.epsilon)
            try:
                plan = partition_plan(n, point)
            except ValueError as exc:
                log.debug("partition rejected: %s", exc)
                continue
            if plan.clamped:
                self.c.bump("clamped_plans")
            layout = self.layout(triple, plan)
            e = max(1, math.floor((1 - triple.eps) * d / 2 + 1e-12))
            p = random_prime(1 << (e - 1), self.rng).p
            r = int(self.rng.integers(p))
            try:
                qf = build_q_families(inst, layout, gamma, j1, reps_L, reps_R,
                                      self.cfg.slack_window, self.cfg.family_cap)
            except (ValueError, MemoryError) as exc:
                self.c.bump("family_rejects")
                log.debug("families rejected: %s", exc)
                continue
            qmax = qf.q_max
            self.c.bump("families_built")
            Q = max(2, math.floor(2 ** (n / 2) / (2 ** (lam * n) * qmax ** 2) * self.cfg.q_poly))
            q = self.draw_q(Q, p)
            for s in range(q):
                self.c.bump("s_iterations")
                lb = side_budget(qmax, p, q, r, s, d, j1)
                rb = side_budget(qmax, p, q, (inst.target - r) % p, (inst.target - s) % q, d, j1)
                self.scale = max(self.scale, qmax + math.ceil(max(lb.ell, rb.ell)) + 2 ** d)
                before = self.c.peak_entries
                left = build_side_family(qf.left, lb, d, self.c)
                if left is SKIP:
                    continue
                right = build_side_family(qf.right, rb, d, self.c)
                if right is SKIP:
                    continue
                self.note_live(qf.total_entries + len(left) + len(right) + max(before, self.c.peak_entries))
                self.c.bump("wov_calls")
                hit = solve_wov(left, right, inst.target, self.c.extra)
                if hit is None:
                    continue
                cert = self.assemble(inst, qf, hit)
                if cert is not None:
                    return cert
        return None

    def assemble(self, inst, qf: QFamilies, hit: tuple[Entry, Entry]) -> SolutionCertificate | None:
        chosen: list[int] = []
        for fams, entry in zip((qf.left, qf.right), hit):
            for fam, i in zip(fams, entry.payload):
                chosen += fam.entries[i].payload
        cert = SolutionCertificate(chosen)
        if len(set(chosen)) != len(chosen) or not verify_certificate(inst, cert):
            self.c.bump("rejected_candidates")
            return None
        return cert


def solve_lowspace(inst: SubsetSumInstance, config: Config | None = None,
                   report: bool = False):
    """Randomized low-space search; ``None`` means the budget ran out.

    With ``report=True`` returns a :class:`LowspaceReport` instead.
    """
    config = config or Config()
    start = time.perf_counter()
    run = _Run(inst, config)
    c = run.c
    cert = None
    variants = [(inst, False)]
    if config.dual:
        variants.append((inst.complement(), True))
    n = inst.n
    for k in size_order(n, config.alpha_sweep):
        if cert is not None:
            break
        alpha = k / n if n else 0.0
        beta = config.schedule(alpha) if n else 0.0
        if math.floor(beta * n + 1e-12) == 0:
            c.bump("exact_size_runs")
            cert = exact_size_schroeppel_shamir(inst, k, c)
            continue
        reps, capped = repetition_budget(n, lambda_exponent(alpha, beta), config)
        c.extra["reps_capped"] = c.extra.get("reps_capped", False) or capped
        for rep in range(reps):
            c.bump("reps")
            for variant, flipped in variants:
                kk = n - k if flipped else k
                found = run.attempt(variant, kk)
                if found is not None:
                    cert = SolutionCertificate(set(range(n)) - set(found.indices)) if flipped else found
                    c.extra["found_in_pass"] = "complement" if flipped else "direct"
                    break
            if cert is not None:
                break
    if cert is not None and not verify_certificate(inst, cert):
        raise AssertionError("solver produced an unverified certificate")
    counters = c.to_dict()
    counters["peak_live_entries"] = max(run.live, c.peak_entries)
    counters["space_scale"] = run.scale
    status = FOUND if cert is not None else EXHAUSTED
    if not report:
        return cert
    return LowspaceReport(status, cert, counters, config.echo(), time.perf_counter() - start)
