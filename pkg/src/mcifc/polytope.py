"""Exact rational inequality systems, Fourier-Motzkin elimination, and 2-D
rate-region geometry.

Inequality systems use exact `fractions.Fraction` arithmetic; float constants
(e.g. mutual-information values) are rationalized on a 1e-12 grid before they
enter a system, so elimination is exact relative to its inputs. Float drift
inside Fourier-Motzkin is the classic failure mode this avoids.

Frontiers are float-valued monotone polylines (r2 ascending, r1 nonincreasing)
describing downward-closed regions in the (R2, R1) plane. A vertical step is
encoded by two consecutive points sharing one r2 value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

# Grid used when converting float constants to exact rationals.
RATIONALIZE_GRAIN = 10**12

# Pairwise-combination redundancy removal is only worth its cost once an
# intermediate system grows past this many inequalities.
_PAIR_PRUNE_THRESHOLD = 48


class UnboundedRegionError(ValueError):
    """The 2-D region has a recession direction in the nonnegative quadrant."""


class FrontierError(ValueError):
    """Points violate the monotone-frontier invariants."""


def rationalize(x) -> Fraction:
    """Exact rational snapped to the 1e-12 grid (Fractions pass through)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(round(float(x) * RATIONALIZE_GRAIN), RATIONALIZE_GRAIN)


@dataclass(frozen=True)
class LinIneq:
    """Linear inequality  sum(coeff * var) <= bound  with rational entries.

    coeffs is stored name-sorted with zero entries dropped.
    """

    coeffs: tuple[tuple[str, Fraction], ...]
    bound: Fraction

    def __post_init__(self):
        items = tuple(sorted((n, Fraction(c)) for n, c in dict(self.coeffs).items() if c != 0))
        object.__setattr__(self, "coeffs", items)
        object.__setattr__(self, "bound", Fraction(self.bound))

    @classmethod
    def of(cls, coeffs: Mapping[str, object], bound) -> "LinIneq":
        return cls(tuple((n, rationalize(c)) for n, c in coeffs.items()), rationalize(bound))

    def coeff(self, name: str) -> Fraction:
        for n, c in self.coeffs:
            if n == name:
                return c
        return Fraction(0)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.coeffs)

    @property
    def support(self) -> frozenset[str]:
        return frozenset(n for n, _ in self.coeffs)

    def is_constant(self) -> bool:
        return not self.coeffs

    def is_trivially_true(self) -> bool:
        return not self.coeffs and self.bound >= 0

    def is_infeasible(self) -> bool:
        return not self.coeffs and self.bound < 0

    def scaled_key(self) -> tuple:
        """Canonical key invariant under positive scaling."""
        if not self.coeffs:
            return ("<const>",)
        lead = abs(self.coeffs[0][1])
        return tuple((n, c / lead) for n, c in self.coeffs)

    def scaled_bound(self) -> Fraction:
        lead = abs(self.coeffs[0][1]) if self.coeffs else Fraction(1)
        return self.bound / lead

    def evaluate(self, point: Mapping[str, Fraction]) -> Fraction:
        return sum((c * point[n] for n, c in self.coeffs), Fraction(0))

    def satisfied_by(self, point: Mapping[str, Fraction]) -> bool:
        return self.evaluate(point) <= self.bound

    def __str__(self):
        lhs = " + ".join(f"{c}*{n}" for n, c in self.coeffs) or "0"
        return f"{lhs} <= {self.bound}"


@dataclass(frozen=True)
class IneqSystem:
    """A conjunction of LinIneq over an ordered variable list."""

    variables: tuple[str, ...]
    inequalities: tuple[LinIneq, ...]

    def __post_init__(self):
        variables = tuple(self.variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variables in {variables}")
        known = set(variables)
        ineqs = tuple(self.inequalities)
        for iq in ineqs:
            extra = iq.support - known
            if extra:
                raise ValueError(f"inequality uses unknown variables {sorted(extra)}")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "inequalities", ineqs)

    @classmethod
    def build(cls, variables: Sequence[str], rows: Iterable[tuple[Mapping[str, object], object]]):
        return cls(tuple(variables), tuple(LinIneq.of(c, b) for c, b in rows))

    def satisfied_by(self, point: Mapping[str, Fraction]) -> bool:
        return all(iq.satisfied_by(point) for iq in self.inequalities)

    def __len__(self):
        return len(self.inequalities)


def _combine(pos: LinIneq, neg: LinIneq, var: str) -> LinIneq:
    """Nonnegative combination of a (+var) and a (-var) inequality killing var."""
    cp = pos.coeff(var)
    cn = neg.coeff(var)
    coeffs: dict[str, Fraction] = {}
    for n, c in pos.coeffs:
        if n != var:
            coeffs[n] = -cn * c
    for n, c in neg.coeffs:
        if n != var:
            coeffs[n] = coeffs.get(n, Fraction(0)) + cp * c
    bound = -cn * pos.bound + cp * neg.bound
    return LinIneq(tuple(coeffs.items()), bound)


def _dedupe(ineqs: Iterable[LinIneq]) -> list[LinIneq]:
    """Drop trivially-true rows, duplicates, and positively-proportional
    dominated rows; an infeasible constant row short-circuits the system."""
    best: dict[tuple, LinIneq] = {}
    for iq in ineqs:
        if iq.is_trivially_true():
            continue
        if iq.is_infeasible():
            return [LinIneq((), Fraction(-1))]
        key = iq.scaled_key()
        cur = best.get(key)
        if cur is None or iq.scaled_bound() < cur.scaled_bound():
            best[key] = iq
    return list(best.values())


def _solve_two_combination(target: LinIneq, b: LinIneq, c: LinIneq) -> bool:
    """True iff target = lam*b + mu*c with lam, mu >= 0 and combined bound
    <= target.bound, i.e. target is redundant given b and c."""
    names = sorted(target.support | b.support | c.support)
    tb = target.as_dict()
    bb = b.as_dict()
    cb = c.as_dict()
    # float prescreen: solve the 2x2 least-squares system and reject clear
    # mismatches before any exact arithmetic
    bf = np.array([float(bb.get(n, 0)) for n in names])
    cf = np.array([float(cb.get(n, 0)) for n in names])
    tf = np.array([float(tb.get(n, 0)) for n in names])
    gram = np.array([[bf @ bf, bf @ cf], [bf @ cf, cf @ cf]])
    rhs = np.array([bf @ tf, cf @ tf])
    det = gram[0, 0] * gram[1, 1] - gram[0, 1] ** 2
    if det > 1e-12:
        lam_f, mu_f = np.linalg.solve(gram, rhs)
        if lam_f < -1e-9 or mu_f < -1e-9:
            return False
        scale = max(1.0, np.abs(tf).max())
        if np.abs(lam_f * bf + mu_f * cf - tf).max() > 1e-7 * scale:
            return False
    rows = [(bb.get(n, Fraction(0)), cb.get(n, Fraction(0)), tb.get(n, Fraction(0))) for n in names]
    pivot = None
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            det = rows[i][0] * rows[j][1] - rows[i][1] * rows[j][0]
            if det != 0:
                pivot = (i, j, det)
                break
        if pivot:
            break
    if pivot is None:
        return False  # rank-deficient: proportional cases handled by _dedupe
    i, j, det = pivot
    lam = (rows[i][2] * rows[j][1] - rows[i][1] * rows[j][2]) / det
    mu = (rows[i][0] * rows[j][2] - rows[i][2] * rows[j][0]) / det
    if lam < 0 or mu < 0:
        return False
    for bi, ci, ti in rows:
        if lam * bi + mu * ci != ti:
            return False
    return lam * b.bound + mu * c.bound <= target.bound


def _drop_pairwise_redundant(ineqs: list[LinIneq]) -> list[LinIneq]:
    """Drop rows implied by a nonnegative combination of two other rows.

    Cheap support prefilter first; exact rational verification on survivors.
    """
    kept = list(ineqs)
    for idx in range(len(kept) - 1, -1, -1):
        target = kept[idx]
        if target.is_constant():
            continue
        others = kept[:idx] + kept[idx + 1:]
        dropped = False
        for m, b in enumerate(others):
            for c in others[m + 1:]:
                if not (target.support <= (b.support | c.support)):
                    continue
                if _solve_two_combination(target, b, c):
                    kept.pop(idx)
                    dropped = True
                    break
            if dropped:
                break
    return kept


def fme_eliminate(sys: IneqSystem, var: str) -> IneqSystem:
    """Exact projection of the feasible set onto the variables without `var`.

    Pairs every (+var) row with every (-var) row, keeps var-free rows, then
    removes duplicate / trivially-dominated rows. An empty projection is a
    valid system; infeasibility surfaces as a constant row 0 <= negative.
    """
    if var not in sys.variables:
        raise ValueError(f"variable {var!r} not in system {sys.variables}")
    pos, neg, zero = [], [], []
    for iq in sys.inequalities:
        c = iq.coeff(var)
        if c > 0:
            pos.append(iq)
        elif c < 0:
            neg.append(iq)
        else:
            zero.append(iq)
    new = list(zero)
    for p in pos:
        for n in neg:
            new.append(_combine(p, n, var))
    reduced = _dedupe(new)
    if len(reduced) > _PAIR_PRUNE_THRESHOLD:
        reduced = _drop_pairwise_redundant(reduced)
    variables = tuple(v for v in sys.variables if v != var)
    return IneqSystem(variables, tuple(reduced))


def fme_project(sys: IneqSystem, keep: Sequence[str]) -> IneqSystem:
    """Eliminate every variable outside `keep`.

    Elimination order is chosen greedily to minimize the pos*neg pairing
    count; the projection itself is order-independent. Each intermediate row
    carries the set of original rows it combines, and rows whose history
    exceeds (eliminated + 1) originals are dropped (they are always redundant,
    Imbert's acceleration criterion).
    """
    keep_set = set(keep)
    unknown = keep_set - set(sys.variables)
    if unknown:
        raise ValueError(f"unknown variables {sorted(unknown)}")
    rows: list[tuple[LinIneq, frozenset[int]]] = [
        (iq, frozenset([i])) for i, iq in enumerate(sys.inequalities)
    ]
    remaining = [v for v in sys.variables if v not in keep_set]
    eliminated = 0
    while remaining:
        def pairing_cost(v):
            p = sum(1 for iq, _ in rows if iq.coeff(v) > 0)
            n = sum(1 for iq, _ in rows if iq.coeff(v) < 0)
            return p * n - p - n
        var = min(remaining, key=pairing_cost)
        remaining.remove(var)
        eliminated += 1
        pos, neg, zero = [], [], []
        for iq, hist in rows:
            c = iq.coeff(var)
            (pos if c > 0 else neg if c < 0 else zero).append((iq, hist))
        new = list(zero)
        for p, hp in pos:
            for n, hn in neg:
                hist = hp | hn
                if len(hist) > eliminated + 1:
                    continue
                new.append((_combine(p, n, var), hist))
        best: dict[tuple, tuple[LinIneq, frozenset[int]]] = {}
        infeasible = None
        for iq, hist in new:
            if iq.is_trivially_true():
                continue
            if iq.is_infeasible():
                infeasible = (LinIneq((), Fraction(-1)), hist)
                break
            key = iq.scaled_key()
            cur = best.get(key)
            if (cur is None or iq.scaled_bound() < cur[0].scaled_bound()
                    or (iq.scaled_bound() == cur[0].scaled_bound() and len(hist) < len(cur[1]))):
                best[key] = (iq, hist)
        if infeasible is not None:
            rows = [infeasible]
            break
        rows = list(best.values())
        if len(rows) > _PAIR_PRUNE_THRESHOLD:
            pruned = _drop_pairwise_redundant([iq for iq, _ in rows])
            kept_keys = {iq.scaled_key() for iq in pruned}
            rows = [(iq, h) for iq, h in rows if iq.scaled_key() in kept_keys]
    variables = tuple(v for v in sys.variables if v in keep_set)
    return IneqSystem(variables, tuple(iq for iq, _ in rows))


# ---------------------------------------------------------------------------
# 2-D frontier geometry
# ---------------------------------------------------------------------------

_SNAP = 1e-12


@dataclass(frozen=True)
class Frontier2D:
    """Downward-closed region in the (R2, R1) plane as a monotone polyline.

    Points are (r2, r1) with r2 ascending and r1 nonincreasing; two points
    may share an r2 value to encode a vertical step. An empty tuple is the
    empty region; a nonempty frontier always starts at r2 = 0.
    """

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = [(float(x), float(y)) for x, y in self.points]
        for x, y in pts:
            if x < -1e-9 or y < -1e-9:
                raise FrontierError(f"negative coordinate in point ({x!r}, {y!r})")
        pts = [(max(x, 0.0), max(y, 0.0)) for x, y in pts]
        cleaned: list[tuple[float, float]] = []
        for x, y in pts:
            if cleaned:
                px, py = cleaned[-1]
                if x < px - _SNAP:
                    raise FrontierError("r2 values must be nondecreasing")
                x = max(x, px)
                if y > py + 1e-9:
                    raise FrontierError(
                        f"r1 must be nonincreasing (got {py!r} then {y!r})"
                    )
                y = min(y, py)
                if x == px and y == py:
                    continue
                # collapse >2 consecutive points on one vertical line
                if len(cleaned) >= 2 and cleaned[-2][0] == px == x:
                    cleaned.pop()
            cleaned.append((x, y))
        if cleaned and cleaned[0][0] > 0.0:
            cleaned.insert(0, (0.0, cleaned[0][1]))
        object.__setattr__(self, "points", tuple(cleaned))

    @property
    def is_empty(self) -> bool:
        return not self.points

    @property
    def r2_max(self) -> float:
        if self.is_empty:
            raise FrontierError("empty frontier has no r2_max")
        return self.points[-1][0]

    def value(self, q: float) -> float | None:
        """Max achievable r1 at r2 = q (upper-semicontinuous); None outside."""
        if self.is_empty:
            return None
        xs = [p[0] for p in self.points]
        if q < 0 or q > xs[-1]:
            return None
        i = int(np.searchsorted(xs, q, side="left"))
        if i < len(xs) and xs[i] == q:
            return self.points[i][1]
        if i == 0:
            return self.points[0][1]
        x0, y0 = self.points[i - 1]
        x1, y1 = self.points[i]
        t = (q - x0) / (x1 - x0)
        return y0 + t * (y1 - y0)

    def _affine_on(self, u: float, v: float) -> tuple[float, float] | None:
        """(slope, intercept) of the frontier on the open interval (u, v)."""
        if self.is_empty:
            return None
        xs = [p[0] for p in self.points]
        t = 0.5 * (u + v)
        if t < 0 or t > xs[-1]:
            return None
        i = int(np.searchsorted(xs, t, side="left"))
        if i == 0:
            return (0.0, self.points[0][1])
        x0, y0 = self.points[i - 1]
        x1, y1 = self.points[i]
        if x1 == x0:
            return None
        m = (y1 - y0) / (x1 - x0)
        return (m, y0 - m * x0)

    def breakpoints(self) -> list[float]:
        return sorted({p[0] for p in self.points})

    def to_csv_text(self) -> str:
        lines = ["R2,R1"]
        lines += [f"{x:.12g},{y:.12g}" for x, y in self.points]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv_text(cls, text: str) -> "Frontier2D":
        rows = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
        if not rows or rows[0].replace(" ", "") != "R2,R1":
            raise FrontierError("expected header 'R2,R1'")
        pts = []
        for ln in rows[1:]:
            a, b = ln.split(",")
            pts.append((float(a), float(b)))
        return cls(tuple(pts))


def _merge_breakpoints(a: Frontier2D, b: Frontier2D, upto: float) -> list[float]:
    xs = {0.0, upto}
    for f in (a, b):
        if not f.is_empty:
            xs.update(x for x in f.breakpoints() if x <= upto + _SNAP)
    # collapse clusters within the snap width (rationalization-grain noise)
    raw = sorted(xs)
    base = [raw[0]]
    for x in raw[1:]:
        if x - base[-1] > _SNAP:
            base.append(x)
    if base[-1] > upto:
        base[-1] = upto
    if base[-1] < upto:
        base.append(upto)
    # add crossings of the two piecewise-affine envelopes so min/max stay exact
    extra = []
    for u, v in zip(base, base[1:]):
        if v - u <= _SNAP:
            continue
        fa = a._affine_on(u, v)
        fb = b._affine_on(u, v)
        if fa is None or fb is None:
            continue
        (ma, ca), (mb, cb) = fa, fb
        if ma == mb:
            continue
        x = (cb - ca) / (ma - mb)
        if u + _SNAP < x < v - _SNAP:
            extra.append(x)
    return sorted(set(base) | set(extra))


def _combine_frontiers(a: Frontier2D, b: Frontier2D, take_max: bool) -> Frontier2D:
    if a.is_empty:
        return b if take_max else Frontier2D(())
    if b.is_empty:
        return a if take_max else Frontier2D(())
    upto = max(a.r2_max, b.r2_max) if take_max else min(a.r2_max, b.r2_max)
    xs = _merge_breakpoints(a, b, upto)
    op = max if take_max else min

    def at(q: float) -> float | None:
        va, vb = a.value(q), b.value(q)
        if take_max:
            vals = [v for v in (va, vb) if v is not None]
            return op(vals) if vals else None
        if va is None or vb is None:
            return None
        return op(va, vb)

    # values at breakpoints, plus right-limits where a vertical step occurs
    pts: list[tuple[float, float]] = []
    for i, q in enumerate(xs):
        v = at(q)
        if v is None:
            continue
        pts.append((q, v))
        if i + 1 < len(xs) and xs[i + 1] - q > _SNAP:
            u, w = q, xs[i + 1]
            fa = a._affine_on(u, w)
            fb = b._affine_on(u, w)
            limits = [m * q + c for f in (fa, fb) if f is not None for m, c in (f,)]
            if limits:
                if take_max:
                    right = max(limits)
                else:
                    if fa is None or fb is None:
                        continue
                    right = min(limits)
                if v - right > _SNAP:
                    pts.append((q, right))
    # drop exactly-collinear interior points to keep frontiers compact
    compact: list[tuple[float, float]] = []
    for p in pts:
        while len(compact) >= 2:
            (x0, y0), (x1, y1) = compact[-2], compact[-1]
            x2, y2 = p
            cross = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)
            span = max(abs(x2 - x0), 1.0)
            if abs(cross) <= 1e-14 * span:
                compact.pop()
            else:
                break
        compact.append(p)
    return Frontier2D(tuple(compact))


def frontier_union(a: Frontier2D, b: Frontier2D) -> Frontier2D:
    """Pointwise max of achievable r1 (union of the two regions)."""
    return _combine_frontiers(a, b, take_max=True)


def frontier_intersect(a: Frontier2D, b: Frontier2D) -> Frontier2D:
    """Pointwise min of achievable r1 (intersection of the two regions)."""
    return _combine_frontiers(a, b, take_max=False)


def frontier_contains(outer: Frontier2D, inner: Frontier2D, tol: float = 0.0) -> bool:
    """True iff every inner point is dominated by the outer region within tol."""
    if inner.is_empty:
        return True
    if outer.is_empty:
        return False
    if inner.r2_max > outer.r2_max + tol:
        return False
    upto = min(inner.r2_max, outer.r2_max)
    xs = _merge_breakpoints(outer, inner, upto)
    edge_cap = outer.value(outer.r2_max)
    for q in xs:
        vi = inner.value(q)
        if vi is None:
            continue
        vo = outer.value(q) if q <= outer.r2_max else edge_cap
        if vo is None or vi > vo + tol:
            return False
    for u, v in zip(xs, xs[1:]):
        if v - u <= _SNAP:
            continue
        fi = inner._affine_on(u, v)
        fo = outer._affine_on(u, v)
        if fi is None:
            continue
        mi, ci = fi
        if fo is None:
            # interval beyond outer's domain (possible only within tol of its
            # edge): compare against the edge value
            cap = edge_cap if edge_cap is not None else 0.0
            if mi * u + ci > cap + tol or mi * v + ci > cap + tol:
                return False
            continue
        mo, co = fo
        for q in (u, v):
            if mi * q + ci > mo * q + co + tol:
                return False
    # anything of inner beyond outer's domain must sit under the edge value
    if inner.r2_max > outer.r2_max:
        tail = inner.value(inner.r2_max)
        cap = edge_cap if edge_cap is not None else 0.0
        if tail is not None and tail > cap + tol:
            return False
    return True


def region_equal(a: Frontier2D, b: Frontier2D, tol: float = 1e-9) -> bool:
    """Mutual containment within tol (the operational region-equality test)."""
    return frontier_contains(a, b, tol) and frontier_contains(b, a, tol)


def concave_envelope(f: Frontier2D) -> Frontier2D:
    """Upper concave envelope of the frontier (time-sharing convexification)."""
    if f.is_empty or len(f.points) <= 2:
        return f
    top: dict[float, float] = {}
    for x, y in f.points:
        if x not in top or y > top[x]:
            top[x] = y
    pts = sorted(top.items())
    hull: list[tuple[float, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            cross = (x1 - x0) * (p[1] - y0) - (y1 - y0) * (p[0] - x0)
            if cross >= -1e-15:
                hull.pop()
            else:
                break
        hull.append(p)
    return Frontier2D(tuple(hull))


# ---------------------------------------------------------------------------
# Projection of a 2-variable system to its Pareto frontier
# ---------------------------------------------------------------------------


def project_to_frontier(sys: IneqSystem, r1: str, r2: str) -> Frontier2D:
    """Pareto (upper-right) frontier of a 2-variable system intersected with
    the nonnegative quadrant.

    Vertices are enumerated exactly; an unbounded region raises
    UnboundedRegionError (every rate region here is bounded by finite
    mutual-information terms). An infeasible system yields the empty frontier.
    """
    if set(sys.variables) != {r1, r2}:
        raise ValueError(
            f"system must be over exactly ({r1!r}, {r2!r}); has {sys.variables}"
        )
    # rows as (a, b, c): a*r2 + b*r1 <= c, plus the quadrant
    rows: list[tuple[Fraction, Fraction, Fraction]] = []
    for iq in sys.inequalities:
        if iq.is_infeasible():
            return Frontier2D(())
        if iq.is_trivially_true():
            continue
        rows.append((iq.coeff(r2), iq.coeff(r1), iq.bound))
    rows.append((Fraction(-1), Fraction(0), Fraction(0)))
    rows.append((Fraction(0), Fraction(-1), Fraction(0)))

    # the quadrant rows make the region pointed, so nonempty implies a vertex
    vertices: set[tuple[Fraction, Fraction]] = set()
    m = len(rows)
    for i in range(m):
        a1, b1, c1 = rows[i]
        for j in range(i + 1, m):
            a2, b2, c2 = rows[j]
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            x = (c1 * b2 - c2 * b1) / det
            y = (a1 * c2 - a2 * c1) / det
            if x < 0 or y < 0:
                continue
            if all(a * x + b * y <= c for a, b, c in rows):
                vertices.add((x, y))
    if not vertices:
        return Frontier2D(())

    # unboundedness (only meaningful for a nonempty region): a direction
    # d >= 0, d != 0 with a*d2 + b*d1 <= 0 for every row
    candidates = {(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))}
    for a, b, _ in rows:
        for d in ((-b, a), (b, -a)):
            if d != (0, 0) and d[0] >= 0 and d[1] >= 0:
                candidates.add(d)
    for d2, d1 in candidates:
        if (d2, d1) == (0, 0):
            continue
        if all(a * d2 + b * d1 <= 0 for a, b, _ in rows):
            raise UnboundedRegionError(
                f"region is unbounded along direction (r2,r1)=({d2},{d1})"
            )

    # max r1 per r2, then the upper concave chain of the polygon boundary
    by_x: dict[Fraction, Fraction] = {}
    for x, y in vertices:
        if x not in by_x or y > by_x[x]:
            by_x[x] = y
    pts = sorted((float(x), float(y)) for x, y in by_x.items())
    hull: list[tuple[float, float]] = []
    for p in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            cross = (x1 - x0) * (p[1] - y0) - (y1 - y0) * (p[0] - x0)
            if cross >= -1e-18:
                hull.pop()
            else:
                break
        hull.append(p)
    # enforce the downward-closed reading: drop any rising prefix
    while len(hull) >= 2 and hull[0][1] < hull[1][1] - 1e-15:
        hull.pop(0)
    return Frontier2D(tuple(hull))
