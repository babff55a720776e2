"""Quasi-mean maps on metric spaces: laws, estimation and constructions.

A quasi-mean is an n-ary map X^n -> X that returns the common value on
constant tuples (unanimity). The checkers here measure, on sampled
inputs, how far a candidate map is from unanimity, anonymity
(permutation invariance), equivariance under a group action, and strict
betweenness (output strictly closer to every argument than the tuple
diameter). ``estimate_lambda`` estimates the contractivity constant

    max_i d(x_i, p(x)) <= lambda * max_{j,k} d(x_j, x_k)

as a maximum of the observed ratio over a dense grid (binary means on an
interval) or over seeded random tuples refined by hill climbing. The
estimate is a lower bound witness, not a certified supremum; the argmax
tuple is reported so the claim can be replayed.

Built-ins are registered by name for the CLI: ``arithmetic:n``,
``geometric``, ``dictator:i``, ``constant:coords``, ``minsq``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from . import _kernels
from .errors import HypothesisError, SamplingError
from .groups import GroupAction, Subgroup, full_subgroup, is_fixed_by
from .rng import Xoshiro256StarStar, as_rng
from .spaces import Box, Interval, MetricSpace, Point, Product, as_point, is_convex

DEFAULT_TOL = 1e-9
EXCLUDED_DIAMETER = 1e-6


@dataclass
class QuasiMeanMap:
    """An n-ary map on a space, with optional fast-evaluation hooks.

    ``eval`` takes a sequence of n points and returns a point. ``batch``
    (optional) takes n equal-length numpy arrays of shape (m, dim) and
    returns an (m, dim) array. ``kernel`` (optional) names a compiled
    grid-scan formula for binary means on an interval.
    """

    arity: int
    space: MetricSpace
    eval: Callable
    label: str
    batch: Optional[Callable] = None
    kernel: Optional[tuple] = None  # (name, param)

    def __call__(self, *points) -> Point:
        pts = [as_point(p) for p in points]
        if len(pts) != self.arity:
            raise ValueError(f"{self.label} needs {self.arity} arguments, got {len(pts)}")
        return self.eval(pts)


def quasi_mean(arity: int, space: MetricSpace, func: Callable, label: str,
               batch: Optional[Callable] = None, kernel: Optional[tuple] = None,
               verify_unanimity: bool = True, seed: int = 7) -> QuasiMeanMap:
    """Wrap a point map; warns when it visibly fails unanimity on samples."""
    if arity < 2:
        raise ValueError("arity must be >= 2")
    p = QuasiMeanMap(arity, space, func, label, batch=batch, kernel=kernel)
    if verify_unanimity:
        worst = 0.0
        for x in space.sample(seed, 8):
            worst = max(worst, space.d(p.eval([x] * arity), x))
        if worst > DEFAULT_TOL:
            warnings.warn(
                f"{label}: unanimity defect {worst:.3g} on construction samples",
                stacklevel=2,
            )
    return p


# ---------------------------------------------------------------------------
# law reports


@dataclass
class LawReport:
    law: str
    samples_checked: int
    max_violation: float
    tol: float
    witness: Optional[tuple] = None
    strict: bool = False

    @property
    def passed(self) -> bool:
        if self.strict:
            return self.max_violation < self.tol
        return self.max_violation <= self.tol

    def to_json(self) -> dict:
        return {
            "law": self.law,
            "samples_checked": self.samples_checked,
            "max_violation": self.max_violation,
            "tol": self.tol,
            "passed": self.passed,
            "witness": None if self.witness is None else [list(p) for p in self.witness],
        }


def sample_tuples(space: MetricSpace, arity: int, seed_or_rng, count: int) -> list[tuple]:
    rng = as_rng(seed_or_rng)
    return [tuple(space.sample(rng, arity)) for _ in range(count)]


def check_unanimity(p: QuasiMeanMap, samples: Sequence, tol: float = DEFAULT_TOL) -> LawReport:
    """Defect of p(x, ..., x) = x over sample points."""
    worst, witness = -1.0, None
    for x in samples:
        x = as_point(x)
        v = p.space.d(p.eval([x] * p.arity), x)
        if v > worst:
            worst, witness = v, (x,)
    report = LawReport("M1", len(samples), max(worst, 0.0), tol)
    if not report.passed:
        report.witness = witness
    return report


def _permutations_to_check(n: int, rng: Xoshiro256StarStar) -> list[tuple]:
    import itertools

    if n <= 5:
        return list(itertools.permutations(range(n)))
    # transpositions generate the symmetric group; n^2 random ones per sample
    perms = []
    for _ in range(n * n):
        i = rng.randrange(n)
        j = rng.randrange(n - 1)
        if j >= i:
            j += 1
        sigma = list(range(n))
        sigma[i], sigma[j] = sigma[j], sigma[i]
        perms.append(tuple(sigma))
    return perms


def check_anonymity(p: QuasiMeanMap, tuples: Sequence[tuple], tol: float = DEFAULT_TOL,
                    seed_or_rng=11) -> LawReport:
    """Defect of permutation invariance; all n! orders for n <= 5, else
    n^2 random transpositions per sample."""
    rng = as_rng(seed_or_rng)
    worst, witness = -1.0, None
    checked = 0
    for tup in tuples:
        base = p.eval(list(tup))
        for sigma in _permutations_to_check(p.arity, rng):
            permuted = [tup[i] for i in sigma]
            v = p.space.d(p.eval(permuted), base)
            checked += 1
            if v > worst:
                worst, witness = v, tup
    report = LawReport("M2", checked, max(worst, 0.0), tol)
    if not report.passed:
        report.witness = witness
    return report


def check_equivariance(p: QuasiMeanMap, action: GroupAction, tuples: Sequence[tuple],
                       tol: float = DEFAULT_TOL, subgroup: Optional[Subgroup] = None) -> LawReport:
    """Defect of p(g x_1, ..., g x_n) = g p(x_1, ..., x_n) over samples
    and all elements of the (sub)group. A map that pushes points out of
    the space is not an action on it; that surfaces as a membership
    error here."""
    if action.space is not p.space and action.space.to_json() != p.space.to_json():
        raise ValueError("action and mean must live on the same space")
    elements = subgroup.members if subgroup is not None else tuple(action.group.elements())
    worst, witness = -1.0, None
    checked = 0
    for tup in tuples:
        base = p.eval(list(tup))
        for g in elements:
            translated = [action.act(g, x) for x in tup]
            for gx in translated:
                p.space.require_member(gx)
            v = p.space.d(p.eval(translated), action.act(g, base))
            checked += 1
            if v > worst:
                worst, witness = v, tup
    report = LawReport("equivariance", checked, max(worst, 0.0), tol)
    if not report.passed:
        report.witness = witness
    return report


def check_strict_betweenness(p: QuasiMeanMap, tuples: Sequence[tuple],
                             tol: float = 0.0) -> LawReport:
    """Checks max_i d(x_i, p(x)) < diameter on every positive-diameter
    sample; the report's violation is the worst signed margin."""
    worst, witness = -math.inf, None
    checked = 0
    for tup in tuples:
        diam = _diameter(p.space, tup)
        if diam <= 0.0:
            continue
        out = p.eval(list(tup))
        v = max(p.space.d(x, out) for x in tup) - diam
        checked += 1
        if v > worst:
            worst, witness = v, tup
    report = LawReport("strict-betweenness", checked, worst, tol, strict=True)
    if not report.passed:
        report.witness = witness
    return report


def _diameter(space: MetricSpace, pts: Sequence[Point]) -> float:
    best = 0.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            best = max(best, space.d(pts[i], pts[j]))
    return best


def contractivity_ratio(p: QuasiMeanMap, tup: Sequence[Point]) -> Optional[float]:
    """max_i d(x_i, p(x)) / diameter, or None on a degenerate tuple."""
    diam = _diameter(p.space, tup)
    if diam <= 0.0:
        return None
    out = p.eval(list(tup))
    return max(p.space.d(x, out) for x in tup) / diam


# ---------------------------------------------------------------------------
# contractivity constant estimation


@dataclass
class LambdaEstimate:
    lambda_hat: float
    argmax_tuple: tuple
    samples: int
    excluded_diagonal_radius: float
    method: str = "grid"

    def to_json(self) -> dict:
        return {
            "lambda_hat": self.lambda_hat,
            "argmax_tuple": [list(p) for p in self.argmax_tuple],
            "samples": self.samples,
            "excluded_diagonal_radius": self.excluded_diagonal_radius,
            "method": self.method,
        }

    def csv_header(self) -> list[str]:
        return ["lambda_hat", "samples", "excluded_diagonal_radius", "method", "argmax_tuple"]

    def csv_row(self) -> list[str]:
        return [
            repr(self.lambda_hat),
            str(self.samples),
            repr(self.excluded_diagonal_radius),
            self.method,
            ";".join(",".join(repr(c) for c in p) for p in self.argmax_tuple),
        ]


@dataclass
class LambdaConfig:
    grid_step: float = 1e-3
    excluded_diameter: float = EXCLUDED_DIAMETER
    restarts: int = 100
    hill_steps: int = 60
    seed: int = 1
    force_random: bool = False


def estimate_lambda(p: QuasiMeanMap, cfg: LambdaConfig = LambdaConfig()) -> LambdaEstimate:
    """Estimate the contractivity constant by ratio maximization.

    Binary means on an interval are scanned over the dense step grid
    (compiled kernel when the mean has one, vectorized batch otherwise);
    higher tuple dimensions use seeded random tuples with hill climbing.
    Tuples with diameter at or below the excluded radius are skipped.
    """
    grid_applies = (
        not cfg.force_random
        and p.arity == 2
        and isinstance(p.space, Interval)
        and p.arity * p.space.dim <= 2
    )
    if grid_applies:
        return _estimate_grid(p, cfg)
    return _estimate_random(p, cfg)


def _estimate_grid(p: QuasiMeanMap, cfg: LambdaConfig) -> LambdaEstimate:
    a, b = p.space.a, p.space.b
    if p.kernel is not None:
        name, param = p.kernel
        lam, x, y, count = _kernels.grid_scan_interval(
            name, param, a, b, cfg.grid_step, cfg.excluded_diameter
        )
        method = f"grid/{_kernels.IMPLEMENTATION}"
    elif p.batch is not None:
        lam, x, y, count = _grid_scan_batch(p, a, b, cfg.grid_step, cfg.excluded_diameter)
        method = "grid/batch"
    else:
        lam, x, y, count = _grid_scan_scalar(p, a, b, cfg.grid_step, cfg.excluded_diameter)
        method = "grid/scalar"
    if count == 0:
        raise SamplingError("every grid tuple fell inside the excluded diagonal radius")
    return LambdaEstimate(lam, ((x,), (y,)), count, cfg.excluded_diameter, method)


def _grid_scan_batch(p: QuasiMeanMap, a: float, b: float, step: float, excluded: float):
    import numpy as np

    m = int(math.floor((b - a) / step + 1e-9)) + 1
    xs = a + np.arange(m, dtype=np.float64) * step
    best, bi, bj, count = -1.0, -1, -1, 0
    rows = max(1, 4_000_000 // m)
    for lo in range(0, m, rows):
        block = xs[lo : lo + rows]
        X = np.repeat(block, m)[:, None]
        Y = np.tile(xs, len(block))[:, None]
        P = p.batch([X, Y])[:, 0]
        X, Y = X[:, 0], Y[:, 0]
        D = np.abs(X - Y)
        R = np.maximum(np.abs(X - P), np.abs(Y - P))
        live = D > excluded
        count += int(live.sum())
        ratios = np.where(live, R / np.where(live, D, 1.0), -np.inf)
        k = int(np.argmax(ratios))
        val = float(ratios[k])
        if val > best:
            best = val
            bi = lo + k // m
            bj = k % m
    return best, float(xs[bi]), float(xs[bj]), count


def _grid_scan_scalar(p: QuasiMeanMap, a: float, b: float, step: float, excluded: float):
    m = int(math.floor((b - a) / step + 1e-9)) + 1
    best, bx, by, count = -1.0, 0.0, 0.0, 0
    d = p.space.d
    for i in range(m):
        x = a + i * step
        for j in range(m):
            y = a + j * step
            gap = abs(x - y)
            if gap <= excluded:
                continue
            out = p.eval([(x,), (y,)])
            r = max(d((x,), out), d((y,), out)) / gap
            count += 1
            if r > best:
                best, bx, by = r, x, y
    return best, bx, by, count


def _random_member_tuple(p: QuasiMeanMap, rng, excluded: float) -> tuple:
    for _ in range(1000):
        tup = tuple(p.space.sample(rng, p.arity))
        if _diameter(p.space, tup) > excluded:
            return tup
    raise SamplingError("could not sample a tuple with diameter above the excluded radius")


def _perturb_tuple(space: MetricSpace, tup: tuple, rng, scale: float) -> tuple:
    moved = []
    for pt in tup:
        coords = tuple(c + rng.uniform(-scale, scale) for c in pt)
        moved.append(space.project(coords))
    return tuple(moved)


def _space_extent(space: MetricSpace) -> float:
    if isinstance(space, Interval):
        return space.b - space.a
    if isinstance(space, Box):
        return math.sqrt(sum((h - l) ** 2 for l, h in zip(space.lo, space.hi)))
    if isinstance(space, Product):
        return math.sqrt(sum(_space_extent(s) ** 2 for s in space.spaces))
    if hasattr(space, "radius"):
        return 2.0 * space.radius
    return 1.0


def _estimate_random(p: QuasiMeanMap, cfg: LambdaConfig) -> LambdaEstimate:
    rng = as_rng(cfg.seed)
    excluded = cfg.excluded_diameter
    extent = _space_extent(p.space)

    def objective(tup):
        ratio = contractivity_ratio(p, tup)
        return -math.inf if ratio is None or _diameter(p.space, tup) <= excluded else ratio

    best_val, best_tup, evals = -math.inf, None, 0
    for _ in range(max(1, cfg.restarts)):
        tup = _random_member_tuple(p, rng, excluded)
        val = objective(tup)
        evals += 1
        scale = 0.25 * extent
        for _ in range(cfg.hill_steps):
            cand = _perturb_tuple(p.space, tup, rng, scale)
            cval = objective(cand)
            evals += 1
            if cval > val:
                tup, val = cand, cval
            else:
                scale *= 0.7
        if val > best_val:
            best_val, best_tup = val, tup
    if best_tup is None or best_val == -math.inf:
        raise SamplingError("no usable tuple found during random lambda estimation")
    return LambdaEstimate(best_val, best_tup, evals, excluded, method="random+hill")


# ---------------------------------------------------------------------------
# derived constructions


def derive_divisor_mean(p: QuasiMeanMap, k: int) -> QuasiMeanMap:
    """Arity-k map q(x_1..x_k) = p(block repeated n/k times); inherits
    unanimity, and anonymity/equivariance when p has them."""
    if k < 2:
        raise ValueError("derived arity must be >= 2")
    if p.arity % k != 0:
        raise ValueError(f"{k} does not divide {p.arity}")
    reps = p.arity // k

    def func(points):
        return p.eval(list(points) * reps)

    batch = None
    if p.batch is not None:
        batch = lambda arrays: p.batch(list(arrays) * reps)
    return QuasiMeanMap(k, p.space, func, f"{p.label}/divisor:{k}", batch=batch)


def collapse_to_quasi_mean(p: QuasiMeanMap) -> QuasiMeanMap:
    """Binary map p'(x, y) = p(x, y, ..., y); keeps the contractivity
    constant and equivariance of p."""
    tail = p.arity - 1

    def func(points):
        x, y = points
        return p.eval([x] + [y] * tail)

    batch = None
    if p.batch is not None:
        batch = lambda arrays: p.batch([arrays[0]] + [arrays[1]] * tail)
    kernel = p.kernel if p.arity == 2 else None
    return QuasiMeanMap(2, p.space, func, f"{p.label}/collapsed", batch=batch, kernel=kernel)


def orbit_average_point(p: QuasiMeanMap, action: GroupAction, x, tol: float = DEFAULT_TOL,
                        subgroup: Optional[Subgroup] = None,
                        verify_laws: bool = False, seed: int = 13) -> Point:
    """Aggregate the H-orbit images p(g_1 x, ..., g_n x); for an
    anonymous equivariant p the result is H-fixed, which is verified.
    With ``verify_laws`` the anonymity and equivariance of p are also
    sample-checked up front instead of trusted."""
    H = subgroup if subgroup is not None else full_subgroup(action.group)
    if p.arity != H.order:
        raise ValueError(f"mean arity {p.arity} != subgroup order {H.order}")
    if verify_laws:
        tuples = sample_tuples(p.space, p.arity, seed, 32)
        for rep in (check_anonymity(p, tuples, tol, seed),
                    check_equivariance(p, action, tuples, tol, subgroup=H)):
            if not rep.passed:
                raise HypothesisError(
                    f"{rep.law} defect {rep.max_violation:.3g} exceeds tol {tol:.3g}"
                )
    x = as_point(x)
    x0 = p.eval([action.act(g, x) for g in H.members])
    if not is_fixed_by(action, H, x0, tol):
        worst = max(p.space.d(action.act(h, x0), x0) for h in H.members)
        raise HypothesisError(
            f"orbit average {x0} is not fixed by the subgroup (defect {worst:.3g}); "
            "the mean is not anonymous/equivariant enough at this tol"
        )
    return x0


# ---------------------------------------------------------------------------
# witness search for far-from-every-argument outputs


@dataclass
class SolomonicSearch:
    target: float
    witness: Optional[tuple]
    best_margin: float
    evaluations: int

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "found": self.found,
            "witness": None if self.witness is None else [list(p) for p in self.witness],
            "best_margin": self.best_margin,
            "evaluations": self.evaluations,
        }


def solomonic_witness_search(p: QuasiMeanMap, K: float, budget: int = 20000,
                             seed_or_rng=3) -> SolomonicSearch:
    """Search for a tuple whose aggregate lands more than K away from
    every argument (random restarts plus hill climbing on the minimum
    distance); reports the best margin when none is found."""
    if K <= 0:
        raise ValueError("K must be positive")
    rng = as_rng(seed_or_rng)
    extent = _space_extent(p.space)

    def margin(tup) -> float:
        out = p.eval(list(tup))
        return min(p.space.d(x, out) for x in tup)

    best_tup, best_val, evals = None, -math.inf, 0
    while evals < budget:
        tup = tuple(p.space.sample(rng, p.arity))
        val = margin(tup)
        evals += 1
        scale = 0.25 * extent
        while evals < budget:
            cand = _perturb_tuple(p.space, tup, rng, scale)
            cval = margin(cand)
            evals += 1
            if cval > val:
                tup, val = cand, cval
            else:
                scale *= 0.7
                if scale < 1e-12 * extent:
                    break
        if val > best_val:
            best_val, best_tup = val, tup
        if best_val > K:
            return SolomonicSearch(K, best_tup, best_val, evals)
    return SolomonicSearch(K, None, best_val, evals)


# ---------------------------------------------------------------------------
# built-in registry


def arithmetic_mean(space: MetricSpace, arity: int = 2) -> QuasiMeanMap:
    _require_convex(space, "arithmetic mean")

    def func(points):
        dim = len(points[0])
        return tuple(sum(pt[i] for pt in points) / arity for i in range(dim))

    def batch(arrays):
        total = arrays[0]
        for arr in arrays[1:]:
            total = total + arr
        return total / arity

    kernel = ("arith2", 0.0) if arity == 2 and isinstance(space, Interval) else None
    return QuasiMeanMap(arity, space, func, f"arithmetic:{arity}", batch=batch, kernel=kernel)


def geometric_mean(space: Interval) -> QuasiMeanMap:
    if not isinstance(space, Interval) or space.a <= 0:
        raise ValueError("geometric mean needs an interval with a > 0")

    def func(points):
        (x,), (y,) = points
        return (math.sqrt(x * y),)

    def batch(arrays):
        import numpy as np

        return np.sqrt(arrays[0] * arrays[1])

    return QuasiMeanMap(2, space, func, "geometric", batch=batch, kernel=("geom", 0.0))


def dictator_mean(space: MetricSpace, index: int = 0, arity: int = 2) -> QuasiMeanMap:
    if not 0 <= index < arity:
        raise ValueError("dictator index out of range")

    def func(points):
        return points[index]

    def batch(arrays):
        return arrays[index]

    kernel = None
    if arity == 2 and isinstance(space, Interval):
        kernel = ("dict0" if index == 0 else "dict1", 0.0)
    return QuasiMeanMap(arity, space, func, f"dictator:{index}", batch=batch, kernel=kernel)


def constant_mean(space: MetricSpace, point, arity: int = 2) -> QuasiMeanMap:
    pt = as_point(point)
    space.require_member(pt)

    def func(points):
        return pt

    def batch(arrays):
        import numpy as np

        return np.broadcast_to(np.asarray(pt), arrays[0].shape).copy()

    kernel = ("const", pt[0]) if arity == 2 and isinstance(space, Interval) else None
    label = "constant:" + ",".join(repr(c) for c in pt)
    return QuasiMeanMap(arity, space, func, label, batch=batch, kernel=kernel)


def min_plus_halfsquare_mean(space: Interval) -> QuasiMeanMap:
    """min{x, y} + |x - y|^2 / 2: strictly between its arguments yet not
    contractive for any constant below 1."""
    if not isinstance(space, Interval) or space.b - space.a > 2.0:
        raise ValueError("minsq mean needs an interval of length <= 2")

    def func(points):
        (x,), (y,) = points
        return (min(x, y) + (x - y) * (x - y) * 0.5,)

    def batch(arrays):
        import numpy as np

        X, Y = arrays[0], arrays[1]
        return np.minimum(X, Y) + (X - Y) * (X - Y) * 0.5

    return QuasiMeanMap(2, space, func, "minsq", batch=batch, kernel=("minsq", 0.0))


def _require_convex(space: MetricSpace, what: str) -> None:
    if not is_convex(space):
        raise ValueError(f"{what} is not closed on a {space.kind} space")


def mean_from_name(name: str, space: MetricSpace) -> QuasiMeanMap:
    """Resolve registry names: arithmetic:n, geometric, dictator:i,
    constant:c0[,c1...], minsq."""
    head, _, tail = name.partition(":")
    if head == "arithmetic":
        return arithmetic_mean(space, int(tail) if tail else 2)
    if head == "geometric":
        return geometric_mean(space)
    if head == "dictator":
        return dictator_mean(space, int(tail) if tail else 0)
    if head == "constant":
        if not tail:
            raise ValueError("constant mean needs coordinates, e.g. constant:0.5")
        return constant_mean(space, [float(v) for v in tail.split(",")])
    if head == "minsq":
        return min_plus_halfsquare_mean(space)
    raise ValueError(f"unknown mean name {name!r}")
