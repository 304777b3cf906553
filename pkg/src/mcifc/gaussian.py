"""Closed-form Gaussian rate regions for the multicast cognitive interference
channel, plus a covariance-algebra mutual-information helper that serves as
the numeric oracle for every closed form.

Channel models (all noise powers fixed to 1):

    multi-primary:    Y_j = b_j X2 + X1 + n_j,   Z = X2 + a X1 + n_z
    multi-secondary:  Y = X1 + b X2 + n,         Z_k = X2 + a_k X1 + n_k

Powers P1, P2 constrain the transmitters; eta in [0,1] splits the secondary
power between a decoded layer (eta P2) and a cooperative layer ((1-eta) P2);
rho in [-1,1] is the input correlation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .polytope import Frontier2D, frontier_intersect

# Ridge added to covariance diagonals before any determinant.
COV_RIDGE = 1e-12

# Slack for the closed-form regime inequalities (they often hold with equality).
REGIME_TOL = 1e-9

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class GaussianModelError(ValueError):
    """Invalid gains/powers, wrong regime, or a malformed partition."""


class SingularCovarianceError(ArithmeticError):
    """A conditional covariance stayed singular beyond the 1e-12 ridge."""


def half_log2(x: float) -> float:
    return 0.5 * np.log2(x)


def log2_pos(x: float) -> float:
    """log2 clamped at zero (used by converse-side expressions)."""
    return max(0.0, np.log2(x)) if x > 0 else 0.0


@dataclass(frozen=True)
class GaussianMultiPrimary:
    """Gains and powers of the one-secondary / N-primary Gaussian channel."""

    b: tuple[float, ...]
    a: float
    P1: float
    P2: float

    def __post_init__(self):
        b = tuple(float(x) for x in self.b)
        if not b:
            raise GaussianModelError("need at least one primary gain b_j")
        for p in (self.P1, self.P2):
            if not np.isfinite(p) or p < 0:
                raise GaussianModelError(f"powers must be finite and >= 0, got {p}")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "P1", float(self.P1))
        object.__setattr__(self, "P2", float(self.P2))

    @property
    def n_primary(self) -> int:
        return len(self.b)

    def single(self, j: int) -> "GaussianMultiPrimary":
        return GaussianMultiPrimary((self.b[j],), self.a, self.P1, self.P2)

    def to_json_dict(self) -> dict:
        return {"class": "multi_primary", "b": list(self.b), "a": self.a,
                "P1": self.P1, "P2": self.P2}


@dataclass(frozen=True)
class GaussianMultiSecondary:
    """Gains and powers of the one-primary / M-secondary Gaussian channel."""

    b: float
    a: tuple[float, ...]
    P1: float
    P2: float

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        if not a:
            raise GaussianModelError("need at least one secondary gain a_k")
        for p in (self.P1, self.P2):
            if not np.isfinite(p) or p < 0:
                raise GaussianModelError(f"powers must be finite and >= 0, got {p}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "P1", float(self.P1))
        object.__setattr__(self, "P2", float(self.P2))

    @property
    def n_secondary(self) -> int:
        return len(self.a)

    def to_json_dict(self) -> dict:
        return {"class": "multi_secondary", "b": self.b, "a": list(self.a),
                "P1": self.P1, "P2": self.P2}


def channel_from_json_dict(doc: dict):
    klass = doc.get("class")
    if klass == "multi_primary":
        return GaussianMultiPrimary(tuple(doc["b"]), doc["a"], doc["P1"], doc["P2"])
    if klass == "multi_secondary":
        return GaussianMultiSecondary(doc["b"], tuple(doc["a"]), doc["P1"], doc["P2"])
    raise GaussianModelError(f"unknown channel class {klass!r}")


# ---------------------------------------------------------------------------
# Covariance algebra
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CovMatrix:
    """Symmetric PSD covariance over named jointly-Gaussian variables."""

    names: tuple[str, ...]
    matrix: np.ndarray

    def __post_init__(self):
        names = tuple(self.names)
        if len(set(names)) != len(names):
            raise GaussianModelError(f"duplicate variable names {names}")
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (len(names), len(names)):
            raise GaussianModelError("matrix shape does not match names")
        if not np.allclose(m, m.T, atol=1e-9):
            raise GaussianModelError("covariance must be symmetric")
        if np.linalg.eigvalsh(0.5 * (m + m.T)).min() < -1e-9:
            raise GaussianModelError("covariance must be positive semidefinite")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "matrix", 0.5 * (m + m.T))

    def _idx(self, group: Iterable[str]) -> list[int]:
        pos = {n: i for i, n in enumerate(self.names)}
        out = []
        for n in group:
            if n not in pos:
                raise GaussianModelError(f"unknown variable {n!r}; have {self.names}")
            out.append(pos[n])
        return sorted(out)

    def _logdet(self, group: list[int]) -> float:
        if not group:
            return 0.0
        sub = self.matrix[np.ix_(group, group)] + COV_RIDGE * np.eye(len(group))
        sign, logdet = np.linalg.slogdet(sub)
        if sign <= 0:
            raise SingularCovarianceError(
                "conditional covariance singular beyond the 1e-12 ridge"
            )
        return logdet


def gaussian_mi(cov: CovMatrix, left: Iterable[str], right: Iterable[str],
                given: Iterable[str] = ()) -> float:
    """I(left; right | given) in bits via the log-det ratio
    0.5*log2( |S_LG| |S_RG| / (|S_G| |S_LRG|) )."""
    left, right, given = set(left), set(right), set(given)
    if left & right or left & given or right & given:
        raise GaussianModelError("left/right/given must be pairwise disjoint")
    lg = cov._idx(left | given)
    rg = cov._idx(right | given)
    lrg = cov._idx(left | right | given)
    g = cov._idx(given)
    nats = cov._logdet(lg) + cov._logdet(rg) - cov._logdet(g) - cov._logdet(lrg)
    bits = 0.5 * nats / np.log(2.0)
    if bits < 0.0:
        if bits < -1e-10:
            raise SingularCovarianceError(f"mutual information came out {bits:g}")
        bits = 0.0
    return bits


def full_correlation_covariance(chan: GaussianMultiPrimary, j: int, rho: float) -> CovMatrix:
    """Covariance of (X1, X2, Yj, Z) when the inputs are jointly Gaussian with
    correlation rho (the decode-everything scheme)."""
    P1, P2, a, bj = chan.P1, chan.P2, chan.a, chan.b[j]
    c12 = rho * np.sqrt(P1 * P2)
    # Y = bj X2 + X1 + n, Z = X2 + a X1 + nz
    names = ("X1", "X2", "Y", "Z")
    m = np.zeros((4, 4))
    m[0, 0] = P1
    m[1, 1] = P2
    m[0, 1] = m[1, 0] = c12
    m[0, 2] = m[2, 0] = bj * c12 + P1
    m[1, 2] = m[2, 1] = bj * P2 + c12
    m[0, 3] = m[3, 0] = c12 + a * P1
    m[1, 3] = m[3, 1] = P2 + a * c12
    m[2, 2] = bj**2 * P2 + P1 + 2 * bj * c12 + 1.0
    m[3, 3] = P2 + a**2 * P1 + 2 * a * c12 + 1.0
    m[2, 3] = m[3, 2] = bj * P2 + a * P1 + (1 + a * bj) * c12
    return CovMatrix(names, m)


def wi_input_covariance(chan: GaussianMultiPrimary, j: int, eta: float, rho: float) -> CovMatrix:
    """Covariance of (X1, Xu, Xv, Yj, Z) for the layered scheme X2 = Xu + Xv,
    Xv ~ N(0, eta P2) independent, (X1, Xu) correlated through rho."""
    P1, P2, a, bj = chan.P1, chan.P2, chan.a, chan.b[j]
    Pu = (1.0 - eta) * P2
    Pv = eta * P2
    c1u = rho * np.sqrt(P1 * Pu)
    names = ("X1", "Xu", "Xv", "Y", "Z")
    m = np.zeros((5, 5))
    m[0, 0] = P1
    m[1, 1] = Pu
    m[2, 2] = Pv
    m[0, 1] = m[1, 0] = c1u
    # Y = bj (Xu + Xv) + X1 + n
    m[0, 3] = m[3, 0] = bj * c1u + P1
    m[1, 3] = m[3, 1] = bj * Pu + c1u
    m[2, 3] = m[3, 2] = bj * Pv
    m[3, 3] = bj**2 * (Pu + Pv) + P1 + 2 * bj * c1u + 1.0
    # Z = (Xu + Xv) + a X1 + nz
    m[0, 4] = m[4, 0] = c1u + a * P1
    m[1, 4] = m[4, 1] = Pu + a * c1u
    m[2, 4] = m[4, 2] = Pv
    m[3, 4] = m[4, 3] = bj * (Pu + Pv) + a * P1 + (1 + a * bj) * c1u
    m[4, 4] = (Pu + Pv) + a**2 * P1 + 2 * a * c1u + 1.0
    return CovMatrix(names, m)


# ---------------------------------------------------------------------------
# Regime classification (exact, no sampling)
# ---------------------------------------------------------------------------


def _vsi_margin(bs: Sequence[float], a: float, P1: float, P2: float) -> float:
    """max over rho in [-1,1] of min_j of the very-strong-interference
    expression (1-a^2)P1 + (b_j^2-1)P2 + 2 rho (b_j - a) sqrt(P1 P2).

    Each expression is affine in rho, so the concave piecewise-linear min is
    maximized at rho = +-1 or at a pairwise crossing; those candidates decide
    the for-every-rho condition exactly.
    """
    root = np.sqrt(P1 * P2)
    consts = [(1 - a**2) * P1 + (bj**2 - 1) * P2 for bj in bs]
    slopes = [2 * (bj - a) * root for bj in bs]
    cands = {-1.0, 1.0}
    for (c1, s1), (c2, s2) in (
        ((consts[i], slopes[i]), (consts[j], slopes[j]))
        for i in range(len(bs)) for j in range(i + 1, len(bs))
    ):
        if s1 != s2:
            x = (c2 - c1) / (s1 - s2)
            if -1.0 < x < 1.0:
                cands.add(float(x))
    return max(min(c + s * x for c, s in zip(consts, slopes)) for x in cands)


def _validate_partition(n: int, partition) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if partition is None:
        raise GaussianModelError("mixed classification requires a partition")
    strong = tuple(int(i) for i in partition[0])
    weak = tuple(int(i) for i in partition[1])
    if sorted(strong + weak) != list(range(n)) or set(strong) & set(weak):
        raise GaussianModelError(
            f"partition {partition} must split receiver indices 0..{n - 1}"
        )
    return strong, weak


def classify_gaussian(chan, partition=None) -> str:
    """Regime of a Gaussian channel: "VSI", "WI", "mixed" or "none".

    The for-every-rho very-strong condition is decided in closed form (see
    _vsi_margin). Mixed classification is attempted only for a caller-supplied
    partition (strong_indices, weak_indices).
    """
    if isinstance(chan, GaussianMultiPrimary):
        if all(abs(bj) >= 1.0 for bj in chan.b) and \
                _vsi_margin(chan.b, chan.a, chan.P1, chan.P2) <= REGIME_TOL:
            return "VSI"
        if all(abs(bj) <= 1.0 for bj in chan.b):
            return "WI"
        if partition is not None:
            strong, weak = _validate_partition(chan.n_primary, partition)
            ok = all(abs(chan.b[j]) >= 1.0 for j in strong) and \
                all(abs(chan.b[j]) <= 1.0 for j in weak)
            if ok and strong:
                bs = [chan.b[j] for j in strong]
                ok = _vsi_margin(bs, chan.a, chan.P1, chan.P2) <= REGIME_TOL
            if ok:
                return "mixed"
        return "none"
    if isinstance(chan, GaussianMultiSecondary):
        if abs(chan.b) > 1.0:
            if all(
                _vsi_margin([chan.b], ak, chan.P1, chan.P2) <= REGIME_TOL
                for ak in chan.a
            ):
                return "VSI"
        if abs(chan.b) <= 1.0:
            return "WI"
        return "none"
    raise GaussianModelError(f"unsupported channel type {type(chan).__name__}")


# ---------------------------------------------------------------------------
# Region evaluation
# ---------------------------------------------------------------------------


def _golden_max(f, lo: float, hi: float, iters: int = 44):
    """Maximum of a concave function on [lo, hi]; also probes the endpoints,
    so monotone objectives resolve to the exact boundary value."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        if b - a < 1e-13 * max(1.0, abs(hi - lo)):
            break
    xs = [lo, hi, 0.5 * (a + b)]
    vals = [f(x) for x in xs]
    k = int(np.argmax(vals))
    return xs[k], vals[k]


def _coherent(chan: GaussianMultiPrimary) -> bool:
    signs = {np.sign(bj) for bj in chan.b if bj != 0}
    return len(signs) <= 1


def _grid(values, default_points: int) -> np.ndarray:
    if values is None:
        return np.linspace(0.0, 1.0, default_points)
    if np.isscalar(values):
        return np.linspace(0.0, 1.0, int(values))
    return np.asarray(values, dtype=float)


def _r2_samples(chan, eta_like: np.ndarray, r2_values, r2_cap: float) -> np.ndarray:
    if r2_values is not None:
        qs = np.asarray(r2_values, dtype=float)
        return np.unique(qs[(qs >= 0) & (qs <= r2_cap + 1e-12)].clip(max=r2_cap))
    qs = np.concatenate([
        np.array([half_log2(1 + e * chan.P2) for e in eta_like]),
        np.linspace(0.0, r2_cap, len(eta_like)),
    ])
    return np.unique(qs[(qs >= 0) & (qs <= r2_cap + 1e-12)].clip(max=r2_cap))


def _monotone_points(pairs) -> Frontier2D:
    pts = sorted(pairs)
    out = []
    best = np.inf
    for x, y in pts:
        y = min(y, best)
        best = y
        out.append((x, max(y, 0.0)))
    return Frontier2D(tuple(out))


def region_mp_vsi(chan: GaussianMultiPrimary, rho_grid=201, r2_values=None,
                  require_regime: bool = True) -> Frontier2D:
    """Very-strong-interference capacity region of the multi-primary channel:
    union over rho of  R2 <= 1/2 log2(1 + (1-rho^2) P2),
                       R1+R2 <= min_j 1/2 log2(1+b_j^2 P2+P1+2 b_j rho sqrt(P1 P2)).

    Evaluated per R2 sample: the admissible rho interval is closed-form and
    the concave min_j sum-rate is maximized by golden section inside it.
    """
    if require_regime and classify_gaussian(chan) != "VSI":
        raise GaussianModelError("channel is not in the very-strong regime")
    P1, P2 = chan.P1, chan.P2
    root = np.sqrt(P1 * P2)

    def sum_cap(rho: float) -> float:
        return min(
            half_log2(1 + bj**2 * P2 + P1 + 2 * bj * rho * root) for bj in chan.b
        )

    _, r2_top = _golden_max(
        lambda r: min(half_log2(1 + (1 - r * r) * P2), sum_cap(r)), -1.0, 1.0
    )
    if np.isscalar(rho_grid):
        rhos = np.linspace(-1.0, 1.0, int(rho_grid))
    else:
        rhos = np.asarray(rho_grid, dtype=float)
    etas = 1.0 - rhos**2
    qs = _r2_samples(chan, etas, r2_values, r2_top)
    pts = []
    for r2 in qs:
        lim = (4.0**r2 - 1.0) / P2 if P2 > 0 else 0.0
        rho0 = np.sqrt(max(0.0, 1.0 - lim))
        _, best = _golden_max(sum_cap, -rho0, rho0)
        pts.append((float(r2), best - r2))
    return _monotone_points(pts)


def _wi_r1(chan: GaussianMultiPrimary, subset, eta: float, rho: float) -> float:
    P1, P2 = chan.P1, chan.P2
    root = np.sqrt(max(0.0, (1.0 - eta)) * P1 * P2)
    return min(
        half_log2((1 + chan.b[j]**2 * P2 + P1 + 2 * chan.b[j] * rho * root)
                  / (1 + chan.b[j]**2 * eta * P2))
        for j in subset
    )


def region_mp_wi(chan: GaussianMultiPrimary, eta_grid=201, rho_grid=201,
                 r2_values=None, require_regime: bool = True) -> Frontier2D:
    """Weak-interference capacity region of the multi-primary channel:
    union over eta of  R2 <= 1/2 log2(1 + eta P2),
                       R1 <= max_rho min_j of the layered-scheme log ratio.

    For each R2 sample the binding power split eta0 is closed-form; a running
    maximum over the eta grid covers any non-monotone max-min behaviour under
    mixed-sign gains.
    """
    if require_regime and classify_gaussian(chan) != "WI":
        raise GaussianModelError("channel is not in the weak regime")
    P2 = chan.P2
    subset = range(chan.n_primary)

    def g(eta: float) -> float:
        return _golden_max(lambda r: _wi_r1(chan, subset, eta, r), -1.0, 1.0)[1]

    etas = _grid(eta_grid, 201)
    coherent = _coherent(chan)
    if not coherent:
        # mixed-sign gains: the max-min over rho need not decrease in eta,
        # so keep a running grid maximum as an envelope
        g_vals = np.array([g(e) for e in etas])
        suffix_max = np.maximum.accumulate(g_vals[::-1])[::-1]
    r2_top = half_log2(1 + P2)
    qs = _r2_samples(chan, etas, r2_values, r2_top)
    pts = []
    for r2 in qs:
        eta0 = min(1.0, max(0.0, (4.0**r2 - 1.0) / P2)) if P2 > 0 else 0.0
        r1 = g(eta0)
        if not coherent:
            k = int(np.searchsorted(etas, eta0))
            if k < len(etas):
                r1 = max(r1, float(suffix_max[k]))
        pts.append((float(r2), r1))
    return _monotone_points(pts)


def region_mp_mixed(chan: GaussianMultiPrimary, partition, eta_grid=201,
                    rho_grid=201, r2_values=None, require_regime: bool = True) -> Frontier2D:
    """Mixed weak/very-strong capacity region of the multi-primary channel:
    union over (eta, rho) of
        R1 <= min over weak j of the layered log ratio,
        R2 <= 1/2 log2(1 + eta P2),
        R1 + R2 <= min over strong j of 1/2 log2(1+b_j^2 P2+P1+2 b_j rho sqrt((1-eta) P1 P2)).
    """
    if require_regime and classify_gaussian(chan, partition) not in ("mixed", "WI", "VSI"):
        raise GaussianModelError("channel fails the mixed-regime conditions")
    strong, weak = _validate_partition(chan.n_primary, partition)
    P1, P2 = chan.P1, chan.P2

    def h(eta: float, r2: float) -> float:
        def obj(rho: float) -> float:
            vals = []
            if weak:
                vals.append(_wi_r1(chan, weak, eta, rho))
            if strong:
                root = np.sqrt(max(0.0, 1.0 - eta) * P1 * P2)
                vals.append(min(
                    half_log2(1 + chan.b[j]**2 * P2 + P1 + 2 * chan.b[j] * rho * root)
                    for j in strong
                ) - r2)
            return min(vals) if vals else 0.0
        return _golden_max(obj, -1.0, 1.0)[1]

    etas = _grid(eta_grid, 201)
    coherent = _coherent(chan)
    coarse = etas[:: max(1, len(etas) // 16)]
    r2_top = half_log2(1 + P2)
    qs = _r2_samples(chan, etas, r2_values, r2_top)
    pts = []
    for r2 in qs:
        eta0 = min(1.0, max(0.0, (4.0**r2 - 1.0) / P2)) if P2 > 0 else 0.0
        r1 = h(eta0, r2)
        if not coherent:
            for e in coarse:
                if e > eta0:
                    r1 = max(r1, h(float(e), r2))
        pts.append((float(r2), max(r1, 0.0)))
    return _monotone_points(pts)


def region_ms_vsi(chan: GaussianMultiSecondary, eta_grid=201, r2_values=None,
                  require_regime: bool = True) -> Frontier2D:
    """Very-strong-interference capacity region of the multi-secondary channel:
    union over eta of  R2 <= 1/2 log2(1 + eta P2),
                       R1+R2 <= 1/2 log2(1+b^2 P2+P1+2|b| sqrt((1-eta) P1 P2)).

    The sum cap decreases in eta, so each R2 sample binds at eta0 exactly.
    """
    if require_regime and classify_gaussian(chan) != "VSI":
        raise GaussianModelError("channel is not in the very-strong regime")
    P1, P2, b = chan.P1, chan.P2, chan.b

    def sum_cap(eta: float) -> float:
        return half_log2(1 + b**2 * P2 + P1
                         + 2 * abs(b) * np.sqrt(max(0.0, 1 - eta) * P1 * P2))

    _, r2_top = _golden_max(
        lambda e: min(half_log2(1 + e * P2), sum_cap(e)), 0.0, 1.0
    )
    etas = _grid(eta_grid, 201)
    qs = _r2_samples(chan, etas, r2_values, r2_top)
    pts = []
    for r2 in qs:
        eta0 = min(1.0, max(0.0, (4.0**r2 - 1.0) / P2)) if P2 > 0 else 0.0
        pts.append((float(r2), sum_cap(eta0) - r2))
    return _monotone_points(pts)


def coherent_intersection_check(
    chan: GaussianMultiPrimary,
    regime: str,
    partition=None,
    eta_grid=201,
    rho_grid=201,
    tol: float = 1e-6,
) -> dict:
    """Compare the multicast region against the intersection of the single-pair
    (Z, Y_j) regions on a shared R2 grid.

    Requires coherent gains (all b_j of one sign). Returns
    {"equal": bool, "max_gap": float} where the gap is the largest frontier
    height difference found.
    """
    signs = {np.sign(bj) for bj in chan.b if bj != 0}
    if len(signs) > 1:
        raise GaussianModelError("coherent check requires gains of one sign")

    def multicast(r2_values):
        if regime == "VSI":
            return region_mp_vsi(chan, rho_grid, r2_values=r2_values)
        if regime == "WI":
            return region_mp_wi(chan, eta_grid, rho_grid, r2_values=r2_values)
        if regime == "mixed":
            return region_mp_mixed(chan, partition, eta_grid, rho_grid,
                                   r2_values=r2_values)
        raise GaussianModelError(f"unknown regime {regime!r}")

    def pairwise(j: int, r2_values):
        # single-pair regions are evaluated by formula; only the multicast
        # channel as a whole is required to satisfy the regime conditions
        single = chan.single(j)
        if regime == "VSI":
            return region_mp_vsi(single, rho_grid, r2_values=r2_values,
                                 require_regime=False)
        if regime == "WI":
            return region_mp_wi(single, eta_grid, rho_grid, r2_values=r2_values,
                                require_regime=False)
        strong, weak = _validate_partition(chan.n_primary, partition)
        part = ((0,), ()) if j in strong else ((), (0,))
        return region_mp_mixed(single, part, eta_grid, rho_grid,
                               r2_values=r2_values, require_regime=False)

    probe = multicast(None)
    qs = np.array([p[0] for p in probe.points])
    mc = multicast(qs)
    inter = None
    for j in range(chan.n_primary):
        fr = pairwise(j, qs)
        inter = fr if inter is None else frontier_intersect(inter, fr)
    # Gap measured at the shared sample grid (where both sides are exact
    # evaluations) plus the domain ends; derived interpolation breakpoints
    # would only measure polyline density, not the regions.
    gaps = [0.0]
    test_qs = sorted(set(float(q) for q in qs) | {mc.r2_max, inter.r2_max})
    for q in test_qs:
        vm = mc.value(q)
        vi = inter.value(q)
        gaps.append(abs((vm if vm is not None else 0.0) - (vi if vi is not None else 0.0)))
    max_gap = float(max(gaps))
    return {"equal": max_gap <= tol, "max_gap": max_gap}
