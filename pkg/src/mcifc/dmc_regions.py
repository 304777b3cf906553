"""Discrete-memoryless rate regions for the multicast cognitive interference
channel: the superposition/binning inner bound, sampled interference-regime
checks, the regime-specific capacity regions, cross-verification of the inner
bound against its encoding/decoding constraint system, and the search for
channels that satisfy the very-strong conditions while violating the weak one.

Regime conditions quantify over *all* input distributions; the checkers here
falsify by Dirichlet sampling plus a coarse deterministic simplex grid. A pass
therefore means "no violation found", never a proof of membership.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .info_theory import (
    AlphabetError,
    DmcChannel,
    JointDist,
    compose_with_channel,
    mutual_information,
    sample_input_dist,
)
from .polytope import (
    Frontier2D,
    IneqSystem,
    concave_envelope,
    fme_project,
    frontier_union,
    project_to_frontier,
    region_equal,
)

AUX_NAMES = ("Q1", "Q", "U", "V")

# A sampled inequality counts as violated only beyond this slack, so channels
# that satisfy a condition with equality (margin 0) pass cleanly.
VIOLATION_TOL = 1e-9

MULTI_PRIMARY = "multi_primary"
MULTI_SECONDARY = "multi_secondary"
REGIMES = ("VSI", "VWI", "mixed")


class RegimeError(ValueError):
    """Wrong channel class, invalid partition, or failed regime precondition."""


@dataclass(frozen=True)
class AuxAssignment:
    """Joint distribution over (Q1, Q, U, V, X1, X2) feeding the inner bound.

    The Markov constraint to the channel outputs holds by construction once
    the joint is pushed through compose_with_channel.
    """

    joint: JointDist

    def __post_init__(self):
        missing = [n for n in AUX_NAMES + ("X1", "X2") if n not in self.joint.names]
        if missing:
            raise AlphabetError(f"auxiliary joint lacks axes {missing}")


@dataclass(frozen=True)
class RegimeWitness:
    """A sampled distribution falsifying one regime inequality."""

    dist: JointDist
    receiver: str
    condition: str
    margin: float

    def to_json_dict(self) -> dict:
        return {
            "dist": self.dist.to_json_dict(),
            "receiver": self.receiver,
            "condition": self.condition,
            "margin": self.margin,
        }


@dataclass(frozen=True)
class RegimeReport:
    """Outcome of a sampled regime check.

    `label` is the checked regime on a pass and "none" on a failure; a pass is
    explicitly a "no violation found" statement, not a proof.
    """

    klass: str
    regime: str
    passed: bool
    samples_checked: int
    witness: RegimeWitness | None

    def __post_init__(self):
        if self.passed == (self.witness is not None):
            raise RegimeError("witness must be present iff the check failed")

    @property
    def label(self) -> str:
        return self.regime if self.passed else "none"

    def to_json_dict(self) -> dict:
        return {
            "class": self.klass,
            "regime": self.regime,
            "label": self.label,
            "passed": self.passed,
            "samples_checked": self.samples_checked,
            "note": "pass means no violation found by sampling, not a proof",
            "witness": self.witness.to_json_dict() if self.witness else None,
        }


@dataclass(frozen=True)
class SearchConfig:
    """Budget for the union over sampled input distributions."""

    samples: int = 200
    aux_card: int | None = None
    seed: int = 0

    def to_json_dict(self) -> dict:
        return {"samples": self.samples, "aux_card": self.aux_card,
                "seed": self.seed}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "SearchConfig":
        return cls(int(doc.get("samples", 200)),
                   doc.get("aux_card"), int(doc.get("seed", 0)))


# ---------------------------------------------------------------------------
# Inner bound (11-inequality region) and its constraint-system verification
# ---------------------------------------------------------------------------


def _mi_bounds(joint: JointDist, chan: DmcChannel):
    """The eleven (coeffs, bound) rows of the inner-bound region."""
    ys = [[y] for y in chan.y_names]
    zs = [[z] for z in chan.z_names]

    def mi(l, r, g=()):
        return mutual_information(joint, l, r, g)

    def min_y(l, g=()):
        return min(mi(l, y, g) for y in ys)

    def min_z(l, g=()):
        return min(mi(l, z, g) for z in zs)

    cost_v = mi(["V"], ["X1", "U"], ["Q1", "Q"])
    cost_q = mi(["Q"], ["X1"], ["Q1"])
    rows = [
        ({"R1": 1}, min_y(["Q1", "X1", "Q", "U"])),
        ({"R2": 1}, min_z(["Q", "V"], ["Q1"]) - mi(["Q", "V"], ["X1"], ["Q1"])),
        ({"R2": 1}, min_y(["X1", "U"], ["Q1", "Q"]) + min_z(["Q", "V"], ["Q1"]) - cost_v),
        ({"R2": 1}, min_y(["X1", "Q", "U"], ["Q1"]) + min_z(["V"], ["Q1", "Q"]) - cost_v),
        ({"R2": 1}, min_y(["X1", "Q", "U"], ["Q1"]) + min_z(["Q", "V"], ["Q1"])
         - cost_v - cost_q),
        ({"R1": 1, "R2": 1}, min_y(["X1", "U"], ["Q1", "Q"]) + min_z(["Q1", "Q", "V"])
         - cost_v),
        ({"R1": 1, "R2": 1}, min_y(["Q1", "X1", "Q", "U"]) + min_z(["V"], ["Q1", "Q"])
         - cost_v),
        ({"R1": 1, "R2": 1}, min_y(["Q1", "X1", "Q", "U"]) + min_z(["Q", "V"], ["Q1"])
         - cost_v - cost_q),
        ({"R1": 1, "R2": 1}, min_y(["X1", "Q", "U"], ["Q1"]) + min_z(["Q1", "Q", "V"])
         - cost_v - cost_q),
        ({"R1": 1, "R2": 2}, min_y(["X1", "Q", "U"], ["Q1"]) + min_z(["Q1", "Q", "V"])
         + min_z(["V"], ["Q1", "Q"]) - cost_v - cost_q),
        ({"R1": 1, "R2": 2}, min_y(["Q1", "X1", "Q", "U"]) + min_z(["Q", "V"], ["Q1"])
         + min_z(["V"], ["Q1", "Q"]) - cost_v - cost_q),
    ]
    return rows


def inner_bound_system(aux: AuxAssignment, chan: DmcChannel) -> IneqSystem:
    """Inner-bound inequalities over (R1, R2) for one auxiliary assignment."""
    joint = compose_with_channel(aux.joint, chan)
    return IneqSystem.build(("R1", "R2"), _mi_bounds(joint, chan))


def inner_bound_region(aux: AuxAssignment, chan: DmcChannel) -> Frontier2D:
    """Frontier of the 11-inequality inner-bound region for one assignment."""
    return project_to_frontier(inner_bound_system(aux, chan), "R1", "R2")


#: variables eliminated when projecting the encoding/decoding system
BINNING_VARS = ("T02", "T11", "T22", "R01", "R02", "R11", "R22")


def coding_constraint_system(aux: AuxAssignment, chan: DmcChannel) -> IneqSystem:
    """Raw encoding + decoding constraint system over split and binning rates.

    Four encoding (covering) inequalities, six decoding inequalities, the
    rate-split identities R1 = R01 + R11 and R2 = R02 + R22, and
    nonnegativity of every split/binning rate. Written for one Y and one Z.
    """
    if chan.n_primary != 1 or chan.n_secondary != 1:
        raise RegimeError("constraint system is stated for exactly one Y and one Z")
    joint = compose_with_channel(aux.joint, chan)
    y = [chan.y_names[0]]
    z = [chan.z_names[0]]

    def mi(l, r, g=()):
        return mutual_information(joint, l, r, g)

    common = mi(["Q", "U"], ["X1"], ["Q1"])
    rows: list[tuple[Mapping[str, object], object]] = [
        # encoding: covering each bin must beat the correlation cost
        ({"T02": -1, "R02": 1}, -mi(["X1"], ["Q"], ["Q1"])),
        ({"T11": -1, "R11": 1}, -mi(["U"], ["X1"], ["Q1", "Q"])),
        ({"T22": -1, "R22": 1}, -mi(["V"], ["X1"], ["Q1", "Q"])),
        ({"T11": -1, "R11": 1, "T22": -1, "R22": 1},
         -(mi(["U"], ["V"], ["Q1", "Q"]) + mi(["U", "V"], ["X1"], ["Q1", "Q"]))),
        # decoding at Z: (common, bin-of-Q, bin-of-V) jointly
        ({"T22": 1}, mi(["V"], z, ["Q", "Q1"])),
        ({"T02": 1, "T22": 1}, mi(["Q", "V"], z, ["Q1"])),
        ({"R01": 1, "T02": 1, "T22": 1}, mi(["Q1", "Q", "V"], z)),
        # decoding at Y: (common, bin-of-Q, private, bin-of-U) jointly
        ({"T11": 1}, mi(["X1", "U"], y, ["Q1", "Q"]) + common),
        ({"T02": 1, "T11": 1}, mi(["X1", "Q", "U"], y, ["Q1"]) + common),
        ({"R01": 1, "T02": 1, "T11": 1}, mi(["Q1", "X1", "Q", "U"], y) + common),
        # rate splits
        ({"R1": 1, "R01": -1, "R11": -1}, 0),
        ({"R1": -1, "R01": 1, "R11": 1}, 0),
        ({"R2": 1, "R02": -1, "R22": -1}, 0),
        ({"R2": -1, "R02": 1, "R22": 1}, 0),
    ]
    rows += [({v: -1}, 0) for v in BINNING_VARS]
    return IneqSystem.build(("R1", "R2") + BINNING_VARS, rows)


def verify_fme_inner_bound(aux: AuxAssignment, chan: DmcChannel, tol: float = 1e-9) -> bool:
    """True iff exact FME of the constraint system is region-equal to the
    direct 11-inequality evaluation."""
    direct = inner_bound_region(aux, chan)
    projected = fme_project(coding_constraint_system(aux, chan), ("R1", "R2"))
    via_fme = project_to_frontier(projected, "R1", "R2")
    return region_equal(direct, via_fme, tol)


# ---------------------------------------------------------------------------
# Regime conditions (sampled falsification checks)
# ---------------------------------------------------------------------------


def _simplex_grid(cells: int, step: int = 8, cap: int = 2000):
    """Compositions of `step` into `cells` parts, as probability vectors.

    Returns an empty list when the grid would exceed `cap` points.
    """
    from math import comb

    if comb(step + cells - 1, cells - 1) > cap:
        return []
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + [remaining])
            return
        for k in range(remaining + 1):
            rec(prefix + [k], remaining - k, slots - 1)

    rec([], step, cells)
    return [np.asarray(v, dtype=float) / step for v in out]


def _partition_sets(chan: DmcChannel, klass: str, partition) -> tuple[tuple[str, ...], tuple[str, ...]]:
    names = chan.y_names if klass == MULTI_PRIMARY else chan.z_names
    if partition is None:
        raise RegimeError("mixed regime requires a (strong, weak) partition")
    strong = tuple(partition[0])
    weak = tuple(partition[1])
    if set(strong) | set(weak) != set(names) or set(strong) & set(weak):
        raise RegimeError(
            f"partition {partition} must split the receiver set {names}"
        )
    return strong, weak


def _needs_aux(regime: str) -> bool:
    return regime in ("VWI", "mixed")


def _violations(joint, chan, klass, regime, strong=(), weak=()):
    """Yield (receiver, condition, margin) for every violated inequality."""
    def mi(l, r, g=()):
        return mutual_information(joint, l, r, g)

    if klass == MULTI_PRIMARY:
        z = [chan.z_names[0]]
        ys = chan.y_names
        if regime == "VSI":
            base = mi(["X2"], z, ["X1"])
            for y in ys:
                m = base - mi(["X2"], [y], ["X1"])
                if m > VIOLATION_TOL:
                    yield (y, "strong", m)
            m = min(mi(["X1", "X2"], [y]) for y in ys) - mi(["X1", "X2"], z)
            if m > VIOLATION_TOL:
                yield (min(ys, key=lambda y: mi(["X1", "X2"], [y])), "very_strong", m)
        elif regime == "VWI":
            rhs_w = mi(["U"], z, ["X1"])
            rhs_vw = mi(["U", "X1"], z)
            for y in ys:
                m = mi(["U"], [y], ["X1"]) - rhs_w
                if m > VIOLATION_TOL:
                    yield (y, "weak", m)
                m = mi(["U", "X1"], [y]) - rhs_vw
                if m > VIOLATION_TOL:
                    yield (y, "very_weak", m)
        else:  # mixed
            for y in weak:
                m = mi(["U"], [y], ["X1"]) - mi(["U"], z, ["X1"])
                if m > VIOLATION_TOL:
                    yield (y, "mixed_weak", m)
            strong_base = mi(["X2"], z, ["X1"])
            for y in strong:
                m = strong_base - mi(["X2"], [y], ["X1"])
                if m > VIOLATION_TOL:
                    yield (y, "mixed_strong", m)
            alt1 = (min(mi(["X1", "X2"], [y]) for y in strong) - mi(["X1", "X2"], z)
                    if strong else np.inf)
            alt2 = (min(mi(["U", "X1"], [y]) for y in weak) - mi(["U", "X1"], z)
                    if weak else np.inf)
            m = min(alt1, alt2)
            if m > VIOLATION_TOL:
                yield ("*", "mixed_or", m)
    else:
        y = [chan.y_names[0]]
        zs = chan.z_names
        if regime == "VSI":
            rhs = mi(["X2"], y, ["X1"])
            lhs_sum = mi(["X1", "X2"], y)
            for zk in zs:
                m = mi(["X2"], [zk], ["X1"]) - rhs
                if m > VIOLATION_TOL:
                    yield (zk, "strong", m)
                m = lhs_sum - mi(["X1", "X2"], [zk])
                if m > VIOLATION_TOL:
                    yield (zk, "very_strong", m)
        elif regime == "VWI":
            lhs_w = mi(["U"], y, ["X1"])
            lhs_vw = mi(["U", "X1"], y)
            for zk in zs:
                m = lhs_w - mi(["U"], [zk], ["X1"])
                if m > VIOLATION_TOL:
                    yield (zk, "weak", m)
                m = lhs_vw - mi(["U", "X1"], [zk])
                if m > VIOLATION_TOL:
                    yield (zk, "very_weak", m)
        else:  # mixed
            lhs_w = mi(["U"], y, ["X1"])
            lhs_vw = mi(["U", "X1"], y)
            rhs_s = mi(["X2"], y, ["X1"])
            lhs_sum = mi(["X1", "X2"], y)
            for zk in weak:
                m = lhs_w - mi(["U"], [zk], ["X1"])
                if m > VIOLATION_TOL:
                    yield (zk, "mixed_weak", m)
                m = lhs_vw - mi(["U", "X1"], [zk])
                if m > VIOLATION_TOL:
                    yield (zk, "mixed_very_weak", m)
            for zk in strong:
                m = mi(["X2"], [zk], ["X1"]) - rhs_s
                if m > VIOLATION_TOL:
                    yield (zk, "mixed_strong", m)
                m = lhs_sum - mi(["X1", "X2"], [zk])
                if m > VIOLATION_TOL:
                    yield (zk, "mixed_very_strong", m)


def default_aux_card(chan: DmcChannel) -> int:
    """Support-lemma-style heuristic |U| = |X1||X2| + 1 (no bound is proven)."""
    return chan.x1 * chan.x2 + 1


def _check_dists(chan: DmcChannel, regime: str, aux_card: int, samples: int, seed):
    """Deterministic grid points first, then Dirichlet samples."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if _needs_aux(regime):
        axes = [("U", aux_card), ("X1", chan.x1), ("X2", chan.x2)]
    else:
        axes = [("X1", chan.x1), ("X2", chan.x2)]
    shape = tuple(k for _, k in axes)
    cells = int(np.prod(shape))
    for vec in _simplex_grid(cells):
        yield JointDist(tuple(axes), vec.reshape(shape))
    for _ in range(samples):
        yield sample_input_dist(axes, rng)


def check_regime(
    chan: DmcChannel,
    klass: str,
    regime: str,
    samples: int = 1000,
    aux_card: int | None = None,
    seed: int | np.random.Generator = 0,
    partition: Sequence[Sequence[str]] | None = None,
) -> RegimeReport:
    """Sampled falsification check of an interference-regime condition.

    Returns a passing report with the number of distributions checked, or a
    failing report carrying the first witness and its violation margin.
    """
    if klass not in (MULTI_PRIMARY, MULTI_SECONDARY):
        raise RegimeError(f"unknown class {klass!r}")
    if regime not in REGIMES:
        raise RegimeError(f"unknown regime {regime!r}")
    if klass == MULTI_PRIMARY and chan.n_secondary != 1:
        raise RegimeError("multi-primary channels have exactly one Z output")
    if klass == MULTI_SECONDARY and chan.n_primary != 1:
        raise RegimeError("multi-secondary channels have exactly one Y output")
    if samples < 1:
        raise RegimeError("samples must be >= 1")
    strong: tuple[str, ...] = ()
    weak: tuple[str, ...] = ()
    if regime == "mixed":
        strong, weak = _partition_sets(chan, klass, partition)
    if aux_card is None:
        aux_card = default_aux_card(chan)
    checked = 0
    for dist in _check_dists(chan, regime, aux_card, samples, seed):
        joint = compose_with_channel(dist, chan)
        checked += 1
        for receiver, condition, margin in _violations(
            joint, chan, klass, regime, strong, weak
        ):
            witness = RegimeWitness(dist, receiver, condition, float(margin))
            return RegimeReport(klass, regime, False, checked, witness)
    return RegimeReport(klass, regime, True, checked, None)


# ---------------------------------------------------------------------------
# Capacity regions per regime (union over sampled input distributions)
# ---------------------------------------------------------------------------


def full_decode_bounds(dist: JointDist, chan: DmcChannel) -> dict[str, float]:
    """Named bounds of the all-receivers-decode-everything evaluation of the
    inner bound (the substitution that collapses all auxiliaries onto the
    inputs), for a distribution over (X1, X2)."""
    joint = compose_with_channel(dist, chan)

    def mi(l, r, g=()):
        return mutual_information(joint, l, r, g)

    ys = chan.y_names
    z = [chan.z_names[0]]
    return {
        "r1_y": min(mi(["X1", "X2"], [y]) for y in ys),
        "r2_z": mi(["X2"], z, ["X1"]),
        "r2_y": min(mi(["X2"], [y], ["X1"]) for y in ys),
        "sum_z": mi(["X1", "X2"], z),
        "sum_y": min(mi(["X1", "X2"], [y]) for y in ys),
    }


_FULL_DECODE_COEFFS = {
    "r1_y": {"R1": 1},
    "r2_z": {"R2": 1},
    "r2_y": {"R2": 1},
    "sum_z": {"R1": 1, "R2": 1},
    "sum_y": {"R1": 1, "R2": 1},
}


def full_decode_region(
    dist: JointDist,
    chan: DmcChannel,
    include: Iterable[str] = ("r1_y", "r2_z", "r2_y", "sum_z", "sum_y"),
) -> Frontier2D:
    """Frontier of the named subset of the all-decode inequalities."""
    bounds = full_decode_bounds(dist, chan)
    rows = [(_FULL_DECODE_COEFFS[k], bounds[k]) for k in include]
    return project_to_frontier(IneqSystem.build(("R1", "R2"), rows), "R1", "R2")


def mixed_achievable_bounds(
    dist: JointDist,
    chan: DmcChannel,
    strong: Sequence[str],
    weak: Sequence[str],
) -> dict[str, float]:
    """Named bounds of the differentiated-decoding achievable set for the
    multi-primary mixed regime, before redundancy removal (the extra sum-rate
    at Z is the row the regime conditions make redundant)."""
    joint = compose_with_channel(dist, chan)

    def mi(l, r, g=()):
        return mutual_information(joint, l, r, g)

    z = [chan.z_names[0]]
    bounds = {
        "r2": mi(["X2"], z, ["X1", "U"]),
        "sum_z": mi(["X1", "X2"], z),
    }
    if weak:
        bounds["r1"] = min(mi(["U", "X1"], [y]) for y in weak)
    if strong:
        bounds["sum_y"] = min(mi(["X1", "X2"], [y]) for y in strong)
    return bounds


_MIXED_COEFFS = {
    "r1": {"R1": 1},
    "r2": {"R2": 1},
    "sum_z": {"R1": 1, "R2": 1},
    "sum_y": {"R1": 1, "R2": 1},
}


def mixed_achievable_region(
    dist: JointDist,
    chan: DmcChannel,
    strong: Sequence[str],
    weak: Sequence[str],
    include_sum_z: bool = False,
) -> Frontier2D:
    bounds = mixed_achievable_bounds(dist, chan, strong, weak)
    if not include_sum_z:
        bounds.pop("sum_z")
    rows = [(_MIXED_COEFFS[k], v) for k, v in bounds.items()]
    return project_to_frontier(IneqSystem.build(("R1", "R2"), rows), "R1", "R2")


def _single_dist_region(dist, chan, klass, regime, strong, weak) -> Frontier2D:
    joint = compose_with_channel(dist, chan)

    def mi(l, r, g=()):
        return mutual_information(joint, l, r, g)

    rows = []
    if klass == MULTI_PRIMARY:
        z = [chan.z_names[0]]
        if regime == "VSI":
            rows.append(({"R2": 1}, mi(["X2"], z, ["X1"])))
            rows.append(({"R1": 1, "R2": 1},
                         min(mi(["X1", "X2"], [y]) for y in chan.y_names)))
        elif regime == "VWI":
            rows.append(({"R1": 1}, min(mi(["X1", "U"], [y]) for y in chan.y_names)))
            rows.append(({"R2": 1}, mi(["X2"], z, ["X1", "U"])))
        else:
            if weak:
                rows.append(({"R1": 1}, min(mi(["U", "X1"], [y]) for y in weak)))
            rows.append(({"R2": 1}, mi(["X2"], z, ["X1", "U"])))
            if strong:
                rows.append(({"R1": 1, "R2": 1},
                             min(mi(["X1", "X2"], [y]) for y in strong)))
    else:
        y = [chan.y_names[0]]
        if regime == "VSI":
            rows.append(({"R2": 1}, min(mi(["X2"], [z], ["X1"]) for z in chan.z_names)))
            rows.append(({"R1": 1, "R2": 1}, mi(["X1", "X2"], y)))
        elif regime == "VWI":
            rows.append(({"R1": 1}, mi(["U", "X1"], y)))
            rows.append(({"R2": 1},
                         min(mi(["X2"], [z], ["X1", "U"]) for z in chan.z_names)))
        else:
            zk = strong if strong else chan.z_names
            rows.append(({"R2": 1}, min(mi(["X2"], [z], ["X1"]) for z in zk)))
            rows.append(({"R1": 1, "R2": 1}, mi(["X1", "X2"], y)))
    return project_to_frontier(IneqSystem.build(("R1", "R2"), rows), "R1", "R2")


def union_all(frontiers: Sequence[Frontier2D]) -> Frontier2D:
    """Balanced pairwise union (cheaper than a linear fold on long lists)."""
    items = [f for f in frontiers if not f.is_empty]
    if not items:
        return Frontier2D(())
    while len(items) > 1:
        items = [
            frontier_union(items[i], items[i + 1]) if i + 1 < len(items) else items[i]
            for i in range(0, len(items), 2)
        ]
    return items[0]


def dmc_capacity_region(
    chan: DmcChannel,
    klass: str,
    regime: str,
    search: SearchConfig = SearchConfig(),
    partition: Sequence[Sequence[str]] | None = None,
    report: RegimeReport | None = None,
) -> Frontier2D:
    """Capacity region of a classified channel, as the convexified union of
    the per-regime region over gridded + sampled input distributions.

    The caller must classify first: pass a passing RegimeReport, or leave
    `report` as None to run a 200-sample check here. The sample stream is
    prefix-stable in the budget, so a larger budget yields a superset.
    """
    if report is None:
        report = check_regime(
            chan, klass, regime, samples=200, aux_card=search.aux_card,
            seed=search.seed, partition=partition,
        )
    if not report.passed:
        raise RegimeError(
            f"regime check failed: {report.witness.condition} violated at "
            f"{report.witness.receiver} by {report.witness.margin:g}"
        )
    if report.klass != klass or report.regime != regime:
        raise RegimeError("report does not match the requested class/regime")
    strong: tuple[str, ...] = ()
    weak: tuple[str, ...] = ()
    if regime == "mixed":
        strong, weak = _partition_sets(chan, klass, partition)
    aux_card = search.aux_card or default_aux_card(chan)
    pieces = [
        _single_dist_region(dist, chan, klass, regime, strong, weak)
        for dist in _check_dists(chan, regime, aux_card, search.samples, search.seed)
    ]
    return concave_envelope(union_all(pieces))


# ---------------------------------------------------------------------------
# Very-strong vs very-weak counterexample search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CounterexampleWitness:
    """Channel passing the sampled very-strong check together with a joint
    distribution violating the weak-interference inequality at one receiver."""

    chan: DmcChannel
    dist: JointDist
    receiver: str
    margin: float
    vsi_samples: int
    seed_used: int

    def to_json_dict(self) -> dict:
        return {
            "chan": self.chan.to_json_dict(),
            "dist": self.dist.to_json_dict(),
            "receiver": self.receiver,
            "margin": self.margin,
            "vsi_samples": self.vsi_samples,
            "seed_used": self.seed_used,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "CounterexampleWitness":
        return cls(
            DmcChannel.from_json_dict(doc["chan"]),
            JointDist.from_json_dict(doc["dist"]),
            str(doc["receiver"]),
            float(doc["margin"]),
            int(doc["vsi_samples"]),
            int(doc["seed_used"]),
        )


@dataclass(frozen=True)
class CxSearchConfig:
    budget: int = 1000
    seed: int = 0
    y_card: int = 3
    z_card: int = 3
    x1_card: int = 2
    x2_card: int = 2
    aux_card: int = 5
    dirichlet_alpha: float = 0.4
    gate_schedule: tuple[int, ...] = (24, 96, 384)
    pd_samples: int = 400
    final_vsi_samples: int = 1500
    min_margin: float = 1e-6

    def to_json_dict(self) -> dict:
        return {
            "budget": self.budget, "seed": self.seed, "y_card": self.y_card,
            "z_card": self.z_card, "x1_card": self.x1_card,
            "x2_card": self.x2_card, "aux_card": self.aux_card,
            "dirichlet_alpha": self.dirichlet_alpha,
            "gate_schedule": list(self.gate_schedule),
            "pd_samples": self.pd_samples,
            "final_vsi_samples": self.final_vsi_samples,
            "min_margin": self.min_margin,
        }


def weak_violation_margin(chan: DmcChannel, dist: JointDist) -> tuple[str, float]:
    """Worst receiver and margin of I(U;Yj|X1) - I(U;Z|X1) for one joint."""
    joint = compose_with_channel(dist, chan)
    z = [chan.z_names[0]]
    rhs = mutual_information(joint, ["U"], z, ["X1"])
    best = ("", -np.inf)
    for y in chan.y_names:
        m = mutual_information(joint, ["U"], [y], ["X1"]) - rhs
        if m > best[1]:
            best = (y, m)
    return best


def _propose_channel(cfg: CxSearchConfig, rng, structured: bool) -> DmcChannel:
    """Draw a two-primary candidate channel.

    Unstructured proposals are plain Dirichlet transition tensors. They
    essentially never satisfy a for-all-inputs mutual-information ordering,
    so the sampler alternates with degraded-pair proposals: Y1 gets a random
    base law, Z gets a random garbling of it, and Y2 shares Z's law. Such
    channels meet both very-strong inequalities for every input distribution
    (data processing gives the conditional ordering; Y2 anchors the min),
    while Y1 generally stays strictly more informative than Z.
    """
    outs = tuple([("Y1", cfg.y_card), ("Y2", cfg.z_card) if structured else ("Y2", cfg.y_card),
                  ("Z1", cfg.z_card)])
    shape_in = (cfg.x1_card, cfg.x2_card)
    if not structured:
        out_cells = int(np.prod([k for _, k in outs]))
        probs = rng.dirichlet(
            np.full(out_cells, cfg.dirichlet_alpha), size=shape_in
        ).reshape(shape_in + tuple(k for _, k in outs))
        return DmcChannel(cfg.x1_card, cfg.x2_card, outs, probs)
    base = rng.dirichlet(np.full(cfg.y_card, cfg.dirichlet_alpha), size=shape_in)
    garble = rng.dirichlet(np.full(cfg.z_card, cfg.dirichlet_alpha), size=cfg.y_card)
    zlaw = base @ garble  # (x1, x2, z)
    probs = (
        base[:, :, :, None, None] * zlaw[:, :, None, :, None] * zlaw[:, :, None, None, :]
    )
    return DmcChannel(cfg.x1_card, cfg.x2_card, outs, probs)


def vsi_vwi_counterexample_search(cfg: CxSearchConfig = CxSearchConfig()) -> CounterexampleWitness | None:
    """Search random two-primary channels for one that passes the sampled
    very-strong check yet admits a weak-interference violation.

    Returns the first verified witness (margin above cfg.min_margin and a
    fresh full-budget very-strong pass) or None when the budget is exhausted.
    """
    for idx in range(cfg.budget):
        rng = np.random.default_rng([cfg.seed, idx])
        chan = _propose_channel(cfg, rng, structured=bool(idx % 2))
        gate_ok = True
        for gate in cfg.gate_schedule:
            rep = check_regime(chan, MULTI_PRIMARY, "VSI", samples=gate, seed=rng)
            if not rep.passed:
                gate_ok = False
                break
        if not gate_ok:
            continue
        found = None
        for _ in range(cfg.pd_samples):
            dist = sample_input_dist(
                [("U", cfg.aux_card), ("X1", cfg.x1_card), ("X2", cfg.x2_card)], rng
            )
            receiver, margin = weak_violation_margin(chan, dist)
            if margin > cfg.min_margin:
                found = (dist, receiver, margin)
                break
        if found is None:
            continue
        final = check_regime(
            chan, MULTI_PRIMARY, "VSI", samples=cfg.final_vsi_samples,
            seed=np.random.default_rng([cfg.seed, idx, 1]),
        )
        if not final.passed:
            continue
        dist, receiver, margin = found
        return CounterexampleWitness(
            chan, dist, receiver, float(margin), final.samples_checked, idx
        )
    return None


def verify_counterexample(witness: CounterexampleWitness, vsi_samples: int = 1500,
                          seed: int = 0) -> bool:
    """Re-verify a stored witness: the margin must reproduce above 1e-6 and
    the channel must still pass the sampled very-strong check."""
    receiver, margin = weak_violation_margin(witness.chan, witness.dist)
    if margin < 1e-6:
        return False
    rep = check_regime(witness.chan, MULTI_PRIMARY, "VSI", samples=vsi_samples, seed=seed)
    return rep.passed
