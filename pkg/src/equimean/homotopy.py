"""Dyadic-refinement contractions with certified error bounds, and their
symmetrization into group homotopies.

Given a binary map p with contractivity constant lambda and a basepoint,
the builder defines a path from every point x to the basepoint on the
dyadic time grid: time 0 maps to x, time 1 to the basepoint, and each
odd grid point is p applied to its two neighbours one level up. Two
bounds are certified numerically:

* adjacent grid points at level n stay within lambda^n * d(x, basepoint);
* any two grid times s, t stay within C |s - t|^alpha, with
  C = 2 d(x, basepoint) / (1 - lambda) and alpha = -ln(lambda)/ln(2),

so evaluation at arbitrary real times snaps to the coarsest dyadic grid
whose Holder bound meets the requested error budget and returns that
bound alongside the point.

Symmetrization turns a plain homotopy into an equivariant one by
aggregating the conjugated translates g^{-1) Phi(g x, t) with an
anonymous equivariant mean of arity |G|; with boundary data built from a
retraction onto a fixed-point set, the same formula deforms the whole
space onto that set while keeping it pointwise still.
"""

from __future__ import annotations

import math
import warnings
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Optional

from .dyadics import Dyadic, nearest_dyadic
from .errors import CapacityError, HypothesisError, PrecisionError
from .groups import GroupAction, Subgroup, full_subgroup, is_fixed_by
from .means import QuasiMeanMap, check_anonymity, check_equivariance, sample_tuples
from .rng import as_rng
from .spaces import MetricSpace, Point, as_point, is_convex

MAX_DYADIC_DEPTH = 40
LEVEL_SWEEP_CAP = 20
RATIO_SLACK = 1e-9


class ContractionBuilder:
    """Memoized dyadic path construction for one binary map and basepoint."""

    def __init__(self, space: MetricSpace, p: QuasiMeanMap, lam: float, theta,
                 use_memo: bool = True, memo_limit: int = 2 ** 20,
                 validate: bool = True, seed: int = 5):
        if p.arity != 2:
            raise ValueError(
                "the dyadic builder needs a binary map; collapse higher arities first"
            )
        if not 0.0 < lam < 1.0:
            raise ValueError(f"lambda must lie in (0, 1), got {lam}")
        theta = as_point(theta)
        space.require_member(theta)
        self.space = space
        self.p = p
        self.lam = lam
        self.theta = theta
        self.alpha = -math.log(lam) / math.log(2.0)
        self.use_memo = use_memo
        self.memo_limit = memo_limit
        self._memo: "OrderedDict[Point, dict]" = OrderedDict()
        self._entries = 0
        if validate:
            self._warn_if_ratio_exceeds(seed)

    def _warn_if_ratio_exceeds(self, seed: int, samples: int = 16) -> None:
        rng = as_rng(seed)
        worst = 0.0
        for _ in range(samples):
            x, y = self.space.sample(rng, 2)
            gap = self.space.d(x, y)
            if gap <= 0.0:
                continue
            out = self.p.eval([x, y])
            worst = max(worst, max(self.space.d(x, out), self.space.d(y, out)) / gap)
        if worst > self.lam + RATIO_SLACK:
            warnings.warn(
                f"sampled contractivity ratio {worst:.6g} exceeds the declared "
                f"lambda {self.lam:.6g}; certified bounds may be invalid",
                stacklevel=3,
            )

    def holder_constant(self, x) -> float:
        """C = 2 d(x, basepoint) / (1 - lambda)."""
        return 2.0 * self.space.d(as_point(x), self.theta) / (1.0 - self.lam)

    def _table_for(self, x: Point) -> dict:
        if not self.use_memo:
            return {}
        table = self._memo.get(x)
        if table is None:
            table = {}
            self._memo[x] = table
        else:
            self._memo.move_to_end(x)
        return table

    def _evict(self) -> None:
        while self._entries > self.memo_limit and len(self._memo) > 1:
            _, dropped = self._memo.popitem(last=False)
            self._entries -= len(dropped)

    def at_dyadic(self, x, d: Dyadic) -> Point:
        """Path value at an exact dyadic time; time 0 is x, time 1 the
        basepoint, odd grid points aggregate their two coarser neighbours."""
        if d.n > MAX_DYADIC_DEPTH:
            raise CapacityError(f"dyadic level {d.n} exceeds the cap {MAX_DYADIC_DEPTH}")
        x = as_point(x)
        table = self._table_for(x)
        before = len(table)
        value = self._eval(x, table, d.j, d.n)
        if self.use_memo:
            self._entries += len(table) - before
            self._evict()
        return value

    def _eval(self, x: Point, table: dict, j: int, n: int) -> Point:
        key = (j, n)
        cached = table.get(key)
        if cached is not None:
            return cached
        if n == 0:
            value = x if j == 0 else self.theta
        else:
            left = Dyadic(j - 1, n)
            right = Dyadic(j + 1, n)
            value = self.p.eval([
                self._eval(x, table, left.j, left.n),
                self._eval(x, table, right.j, right.n),
            ])
        table[key] = value
        return value

    def level_for(self, x, eps: float) -> int:
        """Minimal grid level whose Holder bound meets eps for this x."""
        if eps <= 0.0:
            raise ValueError("eps must be positive")
        C = self.holder_constant(x)
        if C <= eps:
            return 0
        level = math.ceil(math.log(C / eps) / (self.alpha * math.log(2.0)))
        if level > MAX_DYADIC_DEPTH:
            achievable = C * 2.0 ** (-MAX_DYADIC_DEPTH * self.alpha)
            raise PrecisionError(
                f"error budget {eps:.3g} needs level {level} > {MAX_DYADIC_DEPTH}; "
                f"best achievable is {achievable:.3g}",
                achievable,
            )
        return max(level, 0)

    def at_time(self, x, t: float, eps: float) -> tuple[Point, float]:
        """Path value at a real time within a certified error.

        Snaps t to the nearest dyadic r on the minimal grid whose bound
        meets eps and returns (value at r, C |t - r|^alpha <= eps).
        """
        x = as_point(x)
        C = self.holder_constant(x)
        if C == 0.0:
            return self.theta, 0.0
        level = self.level_for(x, eps)
        r = nearest_dyadic(t, level)
        err = C * abs(t - r.value) ** self.alpha
        return self.at_dyadic(x, r), err


@dataclass
class LevelBoundReport:
    """Worst adjacent-step distance at each grid level against
    lambda^n * d(x, basepoint)."""

    max_ratio: float
    worst_level: int
    worst_index: int
    pairs_checked: int
    lam: float
    base_distance: float
    slack: float = RATIO_SLACK

    @property
    def passed(self) -> bool:
        return self.max_ratio <= 1.0 + self.slack

    def to_json(self) -> dict:
        return {
            "max_ratio": self.max_ratio,
            "worst_level": self.worst_level,
            "worst_index": self.worst_index,
            "pairs_checked": self.pairs_checked,
            "lambda": self.lam,
            "base_distance": self.base_distance,
            "passed": self.passed,
        }


def verify_claim1(builder: ContractionBuilder, x, depth: int) -> LevelBoundReport:
    """Sweep all adjacent dyadic pairs at levels 0..depth and compare each
    step against the per-level geometric bound."""
    if depth > LEVEL_SWEEP_CAP:
        raise CapacityError(f"level sweep capped at {LEVEL_SWEEP_CAP}, got {depth}")
    x = as_point(x)
    dx = builder.space.d(x, builder.theta)
    worst, wl, wi, checked = 0.0, -1, -1, 0
    for n in range(depth + 1):
        bound = (builder.lam ** n) * dx
        for j in range(1 << n):
            a = builder.at_dyadic(x, Dyadic(j, n))
            b = builder.at_dyadic(x, Dyadic(j + 1, n))
            step = builder.space.d(a, b)
            checked += 1
            ratio = step / bound if bound > 0.0 else (0.0 if step == 0.0 else math.inf)
            if ratio > worst:
                worst, wl, wi = ratio, n, j
    return LevelBoundReport(worst, wl, wi, checked, builder.lam, dx)


@dataclass
class HolderReport:
    """Worst pairwise ratio against C |s - t|^alpha over sampled dyadic
    time pairs."""

    max_ratio: float
    worst_pair: Optional[tuple]
    pairs_checked: int
    constant: float
    exponent: float
    violations: int = 0
    slack: float = RATIO_SLACK

    @property
    def passed(self) -> bool:
        return self.max_ratio <= 1.0 + self.slack

    def to_json(self) -> dict:
        return {
            "max_ratio": self.max_ratio,
            "worst_pair": None if self.worst_pair is None else [str(d) for d in self.worst_pair],
            "pairs_checked": self.pairs_checked,
            "constant": self.constant,
            "exponent": self.exponent,
            "violations": self.violations,
            "passed": self.passed,
        }


def random_dyadic(rng, depth: int) -> Dyadic:
    level = rng.randrange(depth + 1)
    return Dyadic(rng.randrange((1 << level) + 1), level)


def verify_holder(builder: ContractionBuilder, x, pairs: int, depth: int,
                  seed_or_rng=17) -> HolderReport:
    """Sample dyadic time pairs at level <= depth and compare the path
    displacement against the Holder bound."""
    rng = as_rng(seed_or_rng)
    x = as_point(x)
    C = builder.holder_constant(x)
    worst, wpair, checked, violations = 0.0, None, 0, 0
    for _ in range(pairs):
        s = random_dyadic(rng, depth)
        t = random_dyadic(rng, depth)
        dist = builder.space.d(builder.at_dyadic(x, s), builder.at_dyadic(x, t))
        if s == t:
            ratio = 0.0 if dist == 0.0 else math.inf
        else:
            bound = C * abs(s.value - t.value) ** builder.alpha
            ratio = dist / bound if bound > 0.0 else (0.0 if dist == 0.0 else math.inf)
        checked += 1
        if ratio > 1.0 + RATIO_SLACK:
            violations += 1
        if ratio > worst:
            worst, wpair = ratio, (s, t)
    return HolderReport(worst, wpair, checked, C, builder.alpha, violations)


# ---------------------------------------------------------------------------
# group homotopies


@dataclass
class GHomotopy:
    """A time-indexed family of maps commuting with a group action."""

    action: GroupAction
    evaluate: Callable  # (Point, t) -> Point
    label: str
    base: Optional[Callable] = None  # the plain homotopy that was symmetrized
    report: dict = field(default_factory=dict)

    def __call__(self, x, t: float) -> Point:
        return self.evaluate(as_point(x), t)


def _check_mean_laws(p: QuasiMeanMap, action: GroupAction, tol: float,
                     subgroup: Optional[Subgroup], seed, samples: int) -> None:
    rng = as_rng(seed)
    tuples = sample_tuples(p.space, p.arity, rng, samples)
    anon = check_anonymity(p, tuples, tol, rng)
    if not anon.passed:
        raise HypothesisError(
            f"anonymity defect {anon.max_violation:.3g} exceeds tol {tol:.3g} "
            f"at witness {anon.witness}"
        )
    equi = check_equivariance(p, action, tuples, tol, subgroup=subgroup)
    if not equi.passed:
        raise HypothesisError(
            f"equivariance defect {equi.max_violation:.3g} exceeds tol {tol:.3g} "
            f"at witness {equi.witness}"
        )


def _symmetrized(base: Callable, action: GroupAction, p: Optional[QuasiMeanMap],
                 elements: tuple) -> Callable:
    if len(elements) == 1:
        # one conjugated translate: aggregation degenerates to the base map
        return lambda x, t: base(x, t)
    inv = action.group.inv

    def evaluate(x: Point, t: float) -> Point:
        return p.eval([action.act(inv(g), base(action.act(g, x), t)) for g in elements])

    return evaluate


def symmetrize(base: Callable, action: GroupAction, p: Optional[QuasiMeanMap],
               tol: float = 1e-9, trust_laws: bool = False, seed: int = 23,
               samples: int = 32) -> GHomotopy:
    """Aggregate the conjugated translates of a homotopy into an
    equivariant one.

    The mean must be anonymous and equivariant with arity |G| (checked on
    samples unless trusted). For the trivial group the aggregation is the
    base homotopy itself and ``p`` may be None. Endpoint behaviour
    transfers: an identity time-0 slice stays the identity, and a
    constant time-1 slice becomes a constant at a G-fixed point.
    """
    G = action.group
    if G.order == 1:
        p = None
    else:
        if p is None:
            raise ValueError("a mean of arity |G| is required for a nontrivial group")
        if p.arity != G.order:
            raise ValueError(f"mean arity {p.arity} != group order {G.order}")
        if not trust_laws:
            _check_mean_laws(p, action, tol, None, seed, samples)
    elements = tuple(G.elements())
    evaluate = _symmetrized(base, action, p, elements)
    report = _endpoint_report(base, evaluate, action, tol, seed)
    return GHomotopy(action, evaluate, "symmetrized", base=base, report=report)


def _endpoint_report(base: Callable, evaluate: Callable, action: GroupAction,
                     tol: float, seed, samples: int = 16) -> dict:
    rng = as_rng(seed)
    sp = action.space
    pts = sp.sample(rng, samples)
    base0 = max(sp.d(base(x, 0.0), x) for x in pts)
    report: dict = {"base_identity_defect_t0": base0}
    if base0 <= tol:
        defect = max(sp.d(evaluate(x, 0.0), x) for x in pts)
        report["identity_defect_t0"] = defect
        if defect > tol:
            raise HypothesisError(
                f"time-0 slice stopped being the identity (defect {defect:.3g})"
            )
    ends = [base(x, 1.0) for x in pts]
    base_const = max(sp.d(e, ends[0]) for e in ends)
    report["base_constancy_defect_t1"] = base_const
    if base_const <= tol:
        outs = [evaluate(x, 1.0) for x in pts]
        defect = max(sp.d(o, outs[0]) for o in outs)
        report["constancy_defect_t1"] = defect
        if defect > tol:
            raise HypothesisError(
                f"time-1 slice stopped being constant (defect {defect:.3g})"
            )
        fixed_defect = max(
            sp.d(action.act(g, outs[0]), outs[0]) for g in action.group.elements()
        )
        report["t1_value_fixed_defect"] = fixed_defect
    gdef = 0.0
    for x in pts:
        t = rng.random()
        g = rng.randrange(action.group.order)
        gdef = max(gdef, sp.d(evaluate(action.act(g, x), t), action.act(g, evaluate(x, t))))
    report["equivariance_defect"] = gdef
    # the aggregation chain can amplify the mean's own law defects a little
    if gdef > 10.0 * tol:
        raise HypothesisError(
            f"symmetrized homotopy equivariance defect {gdef:.3g} exceeds 10*tol"
        )
    return report


def equivariant_contraction(builder: ContractionBuilder, action: GroupAction,
                            tol: float = 1e-9, eps: float = 1e-9,
                            depth: int = 10, samples: int = 64,
                            seed: int = 29, trust_laws: bool = False) -> GHomotopy:
    """The dyadic construction itself commutes with the action when the
    basepoint is a fixed point and the binary map is equivariant; this is
    verified on sampled (element, point, dyadic time) triples."""
    G = action.group
    if not is_fixed_by(action, full_subgroup(G), builder.theta, tol):
        raise HypothesisError(
            f"basepoint {builder.theta} is not fixed by the group at tol {tol:.3g}"
        )
    if not trust_laws:
        rng = as_rng(seed)
        tuples = sample_tuples(builder.space, 2, rng, max(8, samples // 4))
        equi = check_equivariance(builder.p, action, tuples, tol)
        if not equi.passed:
            raise HypothesisError(
                f"binary map equivariance defect {equi.max_violation:.3g} "
                f"exceeds tol {tol:.3g}"
            )
    rng = as_rng(seed + 1)
    sp = builder.space
    worst = 0.0
    for _ in range(samples):
        x = sp.sample(rng, 1)[0]
        g = rng.randrange(G.order)
        d = random_dyadic(rng, depth)
        defect = sp.d(
            builder.at_dyadic(action.act(g, x), d),
            action.act(g, builder.at_dyadic(x, d)),
        )
        worst = max(worst, defect)
    if worst > tol:
        raise HypothesisError(
            f"dyadic construction equivariance defect {worst:.3g} exceeds tol {tol:.3g}"
        )

    def evaluate(x: Point, t: float) -> Point:
        return builder.at_time(x, t, eps)[0]

    return GHomotopy(
        action, evaluate, "equivariant_contraction",
        report={"equivariance_defect": worst, "samples": samples, "depth": depth},
    )


def straight_line_extension(space: MetricSpace, retraction: Callable) -> Callable:
    """Homotopy (1 - t) x + t r(x) on a convex space; it extends the
    boundary data (identity at 0, the retraction at 1, stationary on the
    retraction's fixed set)."""
    if not is_convex(space):
        raise ValueError(f"straight-line extension needs a convex space, not {space.kind}")

    def base(x: Point, t: float) -> Point:
        rx = retraction(x)
        return tuple((1.0 - t) * a + t * b for a, b in zip(x, rx))

    return base


def fixed_set_deformation(action: GroupAction, H: Subgroup, retraction: Callable,
                          p: Optional[QuasiMeanMap], extension: Callable,
                          tol: float = 1e-9, trust_laws: bool = False,
                          seed: int = 31, samples: int = 64,
                          time_samples: int = 9) -> GHomotopy:
    """Deform the space onto the H-fixed set through an H-equivariant
    homotopy built from a retraction and a boundary-respecting extension.

    Preconditions checked on samples: the retraction lands in the fixed
    set; the extension matches the boundary data (identity at time 0, the
    retraction at time 1, stationary on the fixed set); the mean is
    anonymous and H-equivariant with arity |H|. The result is verified to
    start at the identity, hold the fixed set still, and end inside it.
    """
    G = action.group
    sp = action.space
    if H.parent is not G:
        raise ValueError("subgroup must belong to the action's group")
    if H.order == 1:
        p = None
    else:
        if p is None:
            raise ValueError("a mean of arity |H| is required for a nontrivial subgroup")
        if p.arity != H.order:
            raise ValueError(f"mean arity {p.arity} != subgroup order {H.order}")
        if not trust_laws:
            _check_mean_laws(p, action, tol, H, seed, max(8, samples // 4))

    rng = as_rng(seed + 1)
    pts = sp.sample(rng, samples)
    times = [i / (time_samples - 1) for i in range(time_samples)] if time_samples > 1 else [0.0]

    worst_retract = 0.0
    for x in pts:
        rx = retraction(x)
        if not sp.contains(rx):
            raise HypothesisError(f"retraction output {rx} leaves the space")
        worst_retract = max(
            worst_retract, max(sp.d(action.act(h, rx), rx) for h in H.members)
        )
    if worst_retract > tol:
        raise HypothesisError(
            f"retraction image is not H-fixed (defect {worst_retract:.3g})"
        )

    worst_b0 = max(sp.d(extension(x, 0.0), x) for x in pts)
    worst_b1 = max(sp.d(extension(x, 1.0), retraction(x)) for x in pts)
    fixed_pts = [retraction(x) for x in pts]
    worst_bf = max(
        sp.d(extension(x0, t), x0) for x0 in fixed_pts for t in times
    )
    for name, defect in (("time-0 identity", worst_b0), ("time-1 retraction", worst_b1),
                         ("fixed-set stationarity", worst_bf)):
        if defect > tol:
            raise HypothesisError(
                f"extension violates the {name} boundary data (defect {defect:.3g})"
            )

    evaluate = _symmetrized(extension, action, p, H.members)

    worst_id = max(sp.d(evaluate(x, 0.0), x) for x in pts)
    worst_still = max(sp.d(evaluate(x0, t), x0) for x0 in fixed_pts for t in times)
    worst_into = 0.0
    for x in pts:
        end = evaluate(x, 1.0)
        worst_into = max(worst_into, max(sp.d(action.act(h, end), end) for h in H.members))
    report = {
        "identity_defect_t0": worst_id,
        "fixed_set_stationarity_defect": worst_still,
        "end_slice_fixed_defect": worst_into,
        "samples": samples,
    }
    for name, defect in (("time-0 identity", worst_id),
                         ("fixed-set stationarity", worst_still),
                         ("end-slice containment", worst_into)):
        if defect > tol:
            raise HypothesisError(f"deformation failed the {name} check (defect {defect:.3g})")
    return GHomotopy(action, evaluate, "fixed_set_deformation", base=extension, report=report)
