"""Dirty-paper-coding bounds for the two-receiver Gaussian secondary multicast
in weak interference: the common-description (CD) and multiple-description
(MD) lower bounds, a per-receiver-tuned time-sharing baseline (block
expansion), the weak-interference outer bound, a brute-force grid oracle for
the CD closed form, and the bound-comparison sweep.

Power split: the secondary power P2 goes P_u = (1-eta) P2 to the layer shared
with the primary and P_v = eta P2 to the precoded layer; x in [0, P_v] is the
private-description power of the MD scheme. All rates clamp at zero: a
negative closed form means the scheme is useless at that configuration, not
an error.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .gaussian import CovMatrix, gaussian_mi, half_log2
from .polytope import Frontier2D

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0

MD_VARIANTS = ("sqrt", "linear")


class DpcConfigError(ValueError):
    """Parameter outside its domain."""


@dataclass(frozen=True)
class DpcConfig:
    """All sweep parameters of the two-receiver DPC bounds.

    md_variant selects the additive penalty term of the MD closed form:
    "sqrt" is the primary sqrt(x+1) form; "linear" evaluates the (x+1)
    alternative for sensitivity analysis. Both coincide at x = 0.
    """

    P1: float
    P2: float
    a1: float
    a2: float
    b: float
    eta: float = 0.5
    rho: float = 0.0
    x: float = 0.0
    md_variant: str = "sqrt"

    def __post_init__(self):
        for p in (self.P1, self.P2):
            if not np.isfinite(p) or p < 0:
                raise DpcConfigError(f"powers must be finite and >= 0, got {p}")
        if not 0.0 <= self.eta <= 1.0:
            raise DpcConfigError(f"eta must lie in [0,1], got {self.eta}")
        if not -1.0 <= self.rho <= 1.0:
            raise DpcConfigError(f"rho must lie in [-1,1], got {self.rho}")
        if not 0.0 <= self.x <= self.eta * self.P2 + 1e-12:
            raise DpcConfigError(
                f"x must lie in [0, eta*P2] = [0, {self.eta * self.P2}], got {self.x}"
            )
        if self.md_variant not in MD_VARIANTS:
            raise DpcConfigError(f"md_variant must be one of {MD_VARIANTS}")

    @property
    def P_u(self) -> float:
        return (1.0 - self.eta) * self.P2

    @property
    def P_v(self) -> float:
        return self.eta * self.P2

    def to_json_dict(self) -> dict:
        return {
            "P1": self.P1, "P2": self.P2, "a1": self.a1, "a2": self.a2,
            "b": self.b, "eta": self.eta, "rho": self.rho, "x": self.x,
            "md_variant": self.md_variant,
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "DpcConfig":
        return cls(
            float(doc["P1"]), float(doc["P2"]), float(doc["a1"]),
            float(doc["a2"]), float(doc["b"]),
            eta=float(doc.get("eta", 0.5)), rho=float(doc.get("rho", 0.0)),
            x=float(doc.get("x", 0.0)),
            md_variant=str(doc.get("md_variant", "sqrt")),
        )


@dataclass(frozen=True)
class DpcBoundPoint:
    """One evaluated (R1, R2) bound point."""

    r1: float
    r2: float
    kind: str  # cd | md | outer | block_expansion

    def __post_init__(self):
        if self.r1 < 0 or self.r2 < 0:
            raise DpcConfigError("bound points are nonnegative rate pairs")


def r1_weak(cfg: DpcConfig) -> float:
    """Primary rate of the layered scheme,
    1/2 log2((b^2 P2 + P1 + 2 b rho sqrt(P1 (1-eta) P2) + 1) / (b^2 eta P2 + 1)),
    clamped at zero."""
    num = cfg.b**2 * cfg.P2 + cfg.P1 \
        + 2 * cfg.b * cfg.rho * np.sqrt(cfg.P1 * cfg.P_u) + 1.0
    den = cfg.b**2 * cfg.eta * cfg.P2 + 1.0
    return max(0.0, half_log2(num / den))


def receiver_variances(cfg: DpcConfig) -> tuple[float, float]:
    """Var(Z_k) = P2 + a_k^2 P1 + 2 a_k rho sqrt(P1 P_u) + 1 for k = 1, 2."""
    c = cfg.rho * np.sqrt(cfg.P1 * cfg.P_u)
    return tuple(
        cfg.P2 + ak**2 * cfg.P1 + 2 * ak * c + 1.0 for ak in (cfg.a1, cfg.a2)
    )


def _md_penalty_arg(cfg: DpcConfig, x: float) -> float:
    """Argument of the penalty log shared by the CD (x = 0) and MD forms."""
    v1, v2 = receiver_variances(cfg)
    P_v, P_u = cfg.P_v, cfg.P_u
    sq = np.sqrt(x + 1.0)
    p_of_x = (P_v - x) / sq
    mismatch = (
        cfg.P1 * (P_v + (1.0 - cfg.rho**2) * P_u + 1.0) * (cfg.a1 - cfg.a2) ** 2
        * p_of_x / ((P_v + 1.0) * (np.sqrt(v1) + np.sqrt(v2)) ** 2)
    )
    tail = sq if cfg.md_variant == "sqrt" else x + 1.0
    return mismatch + tail


def md_dpc_rate(cfg: DpcConfig, x: float | None = None) -> float:
    """Multiple-description DPC rate at private-description power x:
    1/2 log2(P_v + 1) - 1/2 log2(penalty), clamped at zero. x defaults to
    cfg.x; x = 0 reproduces cd_dpc_rate bit for bit."""
    if x is None:
        x = cfg.x
    if not 0.0 <= x <= cfg.P_v + 1e-12:
        raise DpcConfigError(f"x must lie in [0, P_v] = [0, {cfg.P_v}], got {x}")
    return max(0.0, half_log2(cfg.P_v + 1.0) - half_log2(_md_penalty_arg(cfg, x)))


def cd_dpc_rate(cfg: DpcConfig) -> float:
    """Common-description DPC rate (the MD form at x = 0)."""
    v1, v2 = receiver_variances(cfg)
    if v1 <= 0 or v2 <= 0:
        raise DpcConfigError("receiver variances must be positive")
    return md_dpc_rate(cfg, 0.0)


def gamma_opt(cfg: DpcConfig) -> float:
    """Optimal scaling of the shared layer inside the precoding variable."""
    return cfg.P_v / (cfg.P_v + 1.0)


def alpha_opt_pair(cfg: DpcConfig) -> float:
    """Optimal common primary-interference scaling for the two receivers,
    (a2 sqrt(v1) + a1 sqrt(v2)) / (sqrt(v1)+sqrt(v2)) * P_v/(P_v+1)."""
    v1, v2 = receiver_variances(cfg)
    mix = (cfg.a2 * np.sqrt(v1) + cfg.a1 * np.sqrt(v2)) / (np.sqrt(v1) + np.sqrt(v2))
    return mix * gamma_opt(cfg)


def optimize_md_x(cfg: DpcConfig, scan_points: int = 64) -> tuple[float, float]:
    """Best private-description power: bracketing scan then golden section
    (the rate curve is monotone or unimodal in x)."""
    if cfg.P_v <= 0:
        return 0.0, md_dpc_rate(cfg, 0.0)
    xs = np.linspace(0.0, cfg.P_v, max(2, scan_points))
    vals = [md_dpc_rate(cfg, float(x)) for x in xs]
    i = int(np.argmax(vals))
    lo = xs[max(0, i - 1)]
    hi = xs[min(len(xs) - 1, i + 1)]
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = md_dpc_rate(cfg, c), md_dpc_rate(cfg, d)
    for _ in range(60):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = md_dpc_rate(cfg, c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = md_dpc_rate(cfg, d)
    cands = [(float(xs[i]), vals[i]), (0.5 * (a + b), md_dpc_rate(cfg, 0.5 * (a + b)))]
    cands.sort(key=lambda t: t[1])
    return cands[-1]


def weak_outer_bound(cfg: DpcConfig, eta_grid: int = 201) -> Frontier2D:
    """Outer bound for |b| <= 1: union over eta of
        R1 <= 1/2 log2((b^2 P2 + P1 + 2|b| sqrt((1-eta) P1 P2) + 1)/(b^2 eta P2 + 1)),
        R2 <= 1/2 log2(eta P2 + 1).
    The R1 cap decreases in eta, so each R2 sample binds at its eta0."""
    if abs(cfg.b) > 1.0:
        raise DpcConfigError("outer bound is stated for |b| <= 1")
    P1, P2, b = cfg.P1, cfg.P2, cfg.b

    def r1_cap(eta: float) -> float:
        num = b**2 * P2 + P1 + 2 * abs(b) * np.sqrt((1 - eta) * P1 * P2) + 1.0
        return half_log2(num / (b**2 * eta * P2 + 1.0))

    r2_top = half_log2(1.0 + P2)
    qs = np.unique(np.concatenate([
        np.array([half_log2(1 + e * P2) for e in np.linspace(0, 1, eta_grid)]),
        np.linspace(0.0, r2_top, eta_grid),
    ]))
    pts = []
    for r2 in qs:
        eta0 = min(1.0, max(0.0, (4.0**float(r2) - 1.0) / P2)) if P2 > 0 else 0.0
        pts.append((float(r2), max(0.0, r1_cap(eta0))))
    out = []
    best = np.inf
    for q, v in sorted(pts):
        v = min(v, best)
        best = v
        out.append((q, v))
    return Frontier2D(tuple(out))


# ---------------------------------------------------------------------------
# Brute-force oracle and block-expansion baseline
# ---------------------------------------------------------------------------


def _scheme_covariance(cfg: DpcConfig) -> dict[str, float]:
    c1u = cfg.rho * np.sqrt(cfg.P1 * cfg.P_u)
    return {"P1": cfg.P1, "Pu": cfg.P_u, "Pv": cfg.P_v, "c1u": c1u}


def precoding_covariance(cfg: DpcConfig, gamma: float, alpha: float) -> CovMatrix:
    """Covariance of (V, X1, Xu, Z1, Z2) with V = Xv + gamma Xu + alpha X1."""
    base = _scheme_covariance(cfg)
    P1, Pu, Pv, c1u = base["P1"], base["Pu"], base["Pv"], base["c1u"]
    names = ("V", "X1", "Xu", "Z1", "Z2")
    m = np.zeros((5, 5))
    var_v = Pv + gamma**2 * Pu + alpha**2 * P1 + 2 * gamma * alpha * c1u
    cov_v_x1 = gamma * c1u + alpha * P1
    cov_v_xu = gamma * Pu + alpha * c1u
    m[0, 0] = var_v
    m[1, 1] = P1
    m[2, 2] = Pu
    m[1, 2] = m[2, 1] = c1u
    m[0, 1] = m[1, 0] = cov_v_x1
    m[0, 2] = m[2, 0] = cov_v_xu
    for pos, ak in ((3, cfg.a1), (4, cfg.a2)):
        m[pos, pos] = Pv + Pu + ak**2 * P1 + 2 * ak * c1u + 1.0
        m[0, pos] = m[pos, 0] = Pv + gamma * (Pu + ak * c1u) + alpha * (c1u + ak * P1)
        m[1, pos] = m[pos, 1] = c1u + ak * P1
        m[2, pos] = m[pos, 2] = Pu + ak * c1u
    m[3, 4] = m[4, 3] = Pv + Pu + cfg.a1 * cfg.a2 * P1 + (cfg.a1 + cfg.a2) * c1u
    return CovMatrix(names, m)


@dataclass(frozen=True)
class OracleResult:
    value: float
    gamma_star: float
    alpha_star: float
    gamma_step: float
    alpha_step: float


def numeric_dpc_oracle(cfg: DpcConfig, gamma_points: int = 201,
                       alpha_points: int = 201,
                       fixed_gamma: float | None = None) -> OracleResult:
    """Grid maximization of min_k [I(V; Z_k) - I(V; Xu X1)] over the
    precoding parameters of V = Xv + gamma Xu + alpha X1.

    The grid is gamma in [0, 1] and alpha in [-A, A] with
    A = max(|a1|, |a2|, 1). Mutual informations are log-det expressions of the
    explicit five-variable covariance, evaluated in batch; three grid points
    per call are cross-checked against gaussian_mi.

    With `fixed_gamma` the maximization runs over alpha alone at that shared
    layer scaling (plus a local refinement), which is the restricted scheme
    whose value the CD closed form describes. The unrestricted default can
    exceed the closed form: jointly re-optimizing gamma accounts for the
    residual mismatched primary interference acting as extra noise.
    """
    if gamma_points < 101 or alpha_points < 101:
        raise DpcConfigError("oracle grid must have at least 101 points per axis")
    if cfg.P_v <= 0:
        return OracleResult(0.0, 0.0, 0.0, 0.0, 0.0)
    base = _scheme_covariance(cfg)
    P1, Pu, Pv, c1u = base["P1"], base["Pu"], base["Pv"], base["c1u"]
    amax = max(abs(cfg.a1), abs(cfg.a2), 1.0)
    if fixed_gamma is None:
        gammas = np.linspace(0.0, 1.0, gamma_points)
    else:
        gammas = np.array([float(fixed_gamma)])
    alphas = np.linspace(-amax, amax, alpha_points)
    G, A = np.meshgrid(gammas, alphas, indexing="ij")

    ridge = 1e-12
    var_v = Pv + G**2 * Pu + A**2 * P1 + 2 * G * A * c1u + ridge
    rate = None
    for ak in (cfg.a1, cfg.a2):
        var_z = Pv + Pu + ak**2 * P1 + 2 * ak * c1u + 1.0 + ridge
        cov_vz = Pv + G * (Pu + ak * c1u) + A * (c1u + ak * P1)
        det = np.maximum(var_v * var_z - cov_vz**2, 1e-300)
        i_vz = 0.5 * np.log2(var_v * var_z / det)
        rate = i_vz if rate is None else np.minimum(rate, i_vz)
    # conditioning on (Xu, X1) with the same diagonal ridge
    sxx = np.array([[Pu + ridge, c1u], [c1u, P1 + ridge]])
    det_s = sxx[0, 0] * sxx[1, 1] - sxx[0, 1] * sxx[1, 0]
    cov_v_xu = G * Pu + A * c1u
    cov_v_x1 = G * c1u + A * P1
    quad = (
        sxx[1, 1] * cov_v_xu**2 - 2 * sxx[0, 1] * cov_v_xu * cov_v_x1
        + sxx[0, 0] * cov_v_x1**2
    ) / det_s
    cond_var = np.maximum(var_v - quad, 1e-300)
    i_vux = 0.5 * np.log2(var_v / cond_var)
    obj = rate - i_vux
    k = np.unravel_index(int(np.argmax(obj)), obj.shape)
    value = float(obj[k])
    alpha_star = float(alphas[k[1]])
    alpha_step = float(alphas[1] - alphas[0])
    if fixed_gamma is not None:
        # refine alpha within one grid step (the alpha profile at fixed gamma
        # is a min of two smooth curves; the kink sits between grid points)
        def f(alpha: float) -> float:
            cov = precoding_covariance(cfg, float(gammas[0]), alpha)
            return min(
                gaussian_mi(cov, {"V"}, {z}) for z in ("Z1", "Z2")
            ) - gaussian_mi(cov, {"V"}, {"Xu", "X1"})
        lo = max(-amax, alpha_star - alpha_step)
        hi = min(amax, alpha_star + alpha_step)
        a, b = lo, hi
        c = b - _GOLDEN * (b - a)
        d = a + _GOLDEN * (b - a)
        fc, fd = f(c), f(d)
        for _ in range(50):
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - _GOLDEN * (b - a)
                fc = f(c)
            else:
                a, c, fc = c, d, fd
                d = a + _GOLDEN * (b - a)
                fd = f(d)
        mid = 0.5 * (a + b)
        fm = f(mid)
        if fm > value:
            value, alpha_star = fm, mid
    result = OracleResult(
        value, float(gammas[k[0]]), alpha_star,
        float(gammas[1] - gammas[0]) if len(gammas) > 1 else 0.0, alpha_step,
    )
    _spot_check_oracle(cfg, obj, gammas, alphas, (k, (0, 0), (-1, -1)))
    return result


def _spot_check_oracle(cfg, obj, gammas, alphas, idx_list):
    """Cross-check a few batched grid values against gaussian_mi."""
    for idx in idx_list:
        g, a = float(gammas[idx[0]]), float(alphas[idx[1]])
        cov = precoding_covariance(cfg, g, a)
        want = min(
            gaussian_mi(cov, {"V"}, {z}) for z in ("Z1", "Z2")
        ) - gaussian_mi(cov, {"V"}, {"Xu", "X1"})
        got = float(obj[idx])
        if abs(want - got) > 5e-7 * max(1.0, abs(want)):
            raise AssertionError(
                f"batched oracle deviates from gaussian_mi at gamma={g}, alpha={a}: "
                f"{got} vs {want}"
            )


def slot_rate(cfg: DpcConfig, gamma: float, alpha: float, receiver: int) -> float:
    """Rate I(V; Z_k) - I(V; Xu X1) for one receiver under fixed precoding,
    clamped at zero (the receiver treats the residual as noise)."""
    cov = precoding_covariance(cfg, gamma, alpha)
    z = "Z1" if receiver == 0 else "Z2"
    return max(0.0, gaussian_mi(cov, {"V"}, {z}) - gaussian_mi(cov, {"V"}, {"Xu", "X1"}))


def block_expansion_baseline(cfg: DpcConfig, t_points: int = 201) -> float:
    """Time sharing of per-receiver-tuned CD-DPC slots.

    Slot k uses gamma = P_v/(P_v+1) and alpha tuned to a_k; receiver k then
    gets the clean rate while the other receiver decodes what it can. The
    slot fraction maximizes the worse time-shared rate (both slot rates are
    affine in t, so the grid plus the exact crossing decide the max).
    """
    if cfg.P_v <= 0:
        return 0.0
    g = gamma_opt(cfg)
    r = np.zeros((2, 2))  # [receiver, slot]
    for slot, ak in ((0, cfg.a1), (1, cfg.a2)):
        alpha = ak * g
        for receiver in (0, 1):
            r[receiver, slot] = slot_rate(cfg, g, alpha, receiver)

    def worst(t: float) -> float:
        r0 = t * r[0, 0] + (1 - t) * r[0, 1]
        r1 = t * r[1, 0] + (1 - t) * r[1, 1]
        return min(r0, r1)

    ts = list(np.linspace(0.0, 1.0, t_points))
    d0 = r[0, 0] - r[0, 1]
    d1 = r[1, 0] - r[1, 1]
    if abs(d0 - d1) > 1e-15:
        t_cross = (r[1, 1] - r[0, 1]) / (d0 - d1)
        if 0.0 < t_cross < 1.0:
            ts.append(float(t_cross))
    return max(worst(float(t)) for t in ts)


# ---------------------------------------------------------------------------
# Comparison sweep
# ---------------------------------------------------------------------------

SWEEP_COLUMNS = ("eta", "R1", "R2_cd", "R2_md", "x_star", "R2_block", "R2_outer")


def comparison_sweep(
    cfg: DpcConfig,
    eta_grid=None,
    x_scan_points: int = 64,
    out_path: str | Path | None = None,
) -> list[dict]:
    """Per-eta comparison of the bounds; optionally writes a CSV plus a JSON
    sidecar with the configuration.

    Each row fixes eta, keeps cfg.rho, re-optimizes the MD power x, and
    records (R1, CD, best-x MD, block expansion, outer R2 cap). Raises if any
    row has MD below CD (that ordering is structural: x = 0 is in the scan).
    """
    if eta_grid is None:
        eta_grid = 101
    etas = np.linspace(0.0, 1.0, int(eta_grid)) if np.isscalar(eta_grid) \
        else np.asarray(eta_grid, dtype=float)
    rows = []
    for eta in etas:
        sub = replace(cfg, eta=float(eta), x=0.0)
        cd = cd_dpc_rate(sub)
        x_star, md = optimize_md_x(sub, x_scan_points)
        if md < cd - 1e-12:
            raise AssertionError(
                f"MD rate fell below CD at eta={eta}: {md} < {cd}"
            )
        rows.append({
            "eta": float(eta),
            "R1": r1_weak(sub),
            "R2_cd": cd,
            "R2_md": md,
            "x_star": float(x_star),
            "R2_block": block_expansion_baseline(sub),
            "R2_outer": half_log2(1.0 + eta * cfg.P2),
        })
    if out_path is not None:
        out_path = Path(out_path)
        lines = [",".join(SWEEP_COLUMNS)]
        for row in rows:
            lines.append(",".join(f"{row[c]:.12g}" for c in SWEEP_COLUMNS))
        out_path.write_text("\n".join(lines) + "\n")
        sidecar = out_path.with_suffix(out_path.suffix + ".json")
        sidecar.write_text(json.dumps(cfg.to_json_dict(), indent=1) + "\n")
    return rows


def sweep_bound_points(rows: list[dict]) -> list[DpcBoundPoint]:
    """Flatten sweep rows into typed bound points."""
    out = []
    for row in rows:
        for kind, col in (("cd", "R2_cd"), ("md", "R2_md"),
                          ("block_expansion", "R2_block"), ("outer", "R2_outer")):
            out.append(DpcBoundPoint(row["R1"], row[col], kind))
    return out
