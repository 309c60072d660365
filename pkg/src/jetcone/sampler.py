"""Numerical membership oracle for the geometric second-order tangent set.

For uncertified inputs the geometric set is probed by projecting the
parabolic points x0(t) = t*u + (1/2) t^2 w onto the variety along a
shrinking schedule of t values and fitting the decay of the normalized
distance d(t) = dist(x0(t), X) / t^2.  Verdicts are numerical evidence,
never certificates: they carry the fitted exponent and the full schedule.

Projection is damped Gauss-Newton on the squared residual.  The query
point itself is always one seed; four small perturbed seeds guard against
the residual's critical-locus attraction (on a fold like z^2 = c the
residual gradient vanishes in the fold coordinate at z = 0, so the
unperturbed iteration drifts along the singular locus instead of crossing
it).  Perturbations are scaled by t^2 so they never contaminate the
normalized distance.
"""

from __future__ import annotations

import enum
import math
import struct
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import PreconditionError
from .fields import Field, scalar_to_float
from .poly import Polynomial
from .system import PolySystem, Vector

_DEFAULT_T = tuple(2.0**-j for j in range(4, 21))

#: Relative size of the perturbed projection seeds, in units of t^2.
PERTURB_REL = 1e-8

_PROJECTION_SEEDS = 5


@dataclass(frozen=True)
class DecaySchedule:
    t_values: tuple[float, ...] = _DEFAULT_T
    project_tol: float = 1e-12
    decay_exponent_threshold: float = 0.5
    reject_floor: float = 1e-3

    def __post_init__(self):
        ts = tuple(float(t) for t in self.t_values)
        object.__setattr__(self, "t_values", ts)
        if len(ts) < 6:
            raise ValueError("schedule needs at least 6 t values")
        if any(t <= 0 for t in ts):
            raise ValueError("t values must be positive")
        if any(nxt >= prev for nxt, prev in zip(ts[1:], ts)):
            raise ValueError("t values must be strictly decreasing")

    def to_json(self) -> dict:
        return {
            "t_values": list(self.t_values),
            "project_tol": self.project_tol,
            "decay_exponent_threshold": self.decay_exponent_threshold,
            "reject_floor": self.reject_floor,
        }


DEFAULT_SCHEDULE = DecaySchedule()


class Verdict(str, enum.Enum):
    MEMBER = "MEMBER"
    NOT_MEMBER = "NOT_MEMBER"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class MembershipVerdict:
    verdict: Verdict
    normalized_distances: tuple[tuple[float, float], ...]
    fitted_exponent: Optional[float]
    evidence: str = "numerical"
    diagnostics: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "evidence": self.evidence,
            "normalized_distances": [[t, d] for t, d in self.normalized_distances],
            "fitted_exponent": self.fitted_exponent,
            "diagnostics": list(self.diagnostics),
        }


class _CompiledSystem:
    """Vectorized float evaluation of the generators and their gradients.

    All terms of all generators and gradient components share one exponent
    matrix, so each point costs a single power-product evaluation plus a
    small dot product per polynomial.  Complex systems are embedded into
    R^{2n} (real parts first, then imaginary parts) and each complex
    residual contributes its real and imaginary part, so the least-squares
    machinery stays real.
    """

    def __init__(self, sys: PolySystem):
        if sys.field is Field.RATIONAL:
            sys = sys.to_float()
        self.system = sys
        self.n = sys.n
        self.p = sys.p
        self.complex = sys.field.is_complex
        self.n_real = 2 * sys.n if self.complex else sys.n
        dtype = complex if self.complex else float
        polys = list(sys.generators)
        for gen in sys.generators:
            polys.extend(gen.gradient())
        rows: list[tuple[int, ...]] = []
        coeffs: list = []
        self._slices: list[tuple[int, int]] = []
        for poly in polys:
            start = len(rows)
            for exps, coeff in poly.terms.items():
                rows.append(exps)
                coeffs.append(dtype(scalar_to_float(coeff)))
            self._slices.append((start, len(rows)))
        self._exps = np.array(rows if rows else [(0,) * sys.n], dtype=np.int64)
        self._coeffs = np.array(coeffs, dtype=dtype)
        self._zero = dtype(0)

    def _poly_values(self, z: np.ndarray) -> list:
        monos = np.prod(z[None, :] ** self._exps, axis=1)
        products = monos[: len(self._coeffs)] * self._coeffs
        return [
            products[a:b].sum() if b > a else self._zero for a, b in self._slices
        ]

    def embed(self, point: Sequence) -> np.ndarray:
        values = [scalar_to_float(v) for v in point]
        if self.complex:
            zs = [complex(v) for v in values]
            return np.array([z.real for z in zs] + [z.imag for z in zs], dtype=float)
        return np.array([float(v) for v in values], dtype=float)

    def _to_point(self, x: np.ndarray) -> np.ndarray:
        if self.complex:
            return x[: self.n] + 1j * x[self.n :]
        return x

    def _assemble(self, values: list) -> tuple[np.ndarray, np.ndarray]:
        p, n = self.p, self.n
        gen_values = values[:p]
        if not self.complex:
            residual = np.array(gen_values, dtype=float)
            jacobian = np.array(values[p:], dtype=float).reshape(p, n)
            return residual, jacobian
        residual = np.empty(2 * p)
        jacobian = np.empty((2 * p, 2 * n))
        for i, value in enumerate(gen_values):
            residual[2 * i] = value.real
            residual[2 * i + 1] = value.imag
        # d(Re f)/d(Re z_j) = Re g_j, d(Re f)/d(Im z_j) = -Im g_j, etc.
        grads = np.array(values[p:], dtype=complex).reshape(p, n)
        for i in range(p):
            jacobian[2 * i, :n] = grads[i].real
            jacobian[2 * i, n:] = -grads[i].imag
            jacobian[2 * i + 1, :n] = grads[i].imag
            jacobian[2 * i + 1, n:] = grads[i].real
        return residual, jacobian

    def residual_and_jacobian(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return self._assemble(self._poly_values(self._to_point(x)))

    def residual(self, x: np.ndarray) -> np.ndarray:
        values = self._poly_values(self._to_point(x))[: self.p]
        if not self.complex:
            return np.array(values, dtype=float)
        out = np.empty(2 * self.p)
        for i, value in enumerate(values):
            out[2 * i] = value.real
            out[2 * i + 1] = value.imag
        return out

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        return self.residual_and_jacobian(x)[1]


def _gauss_newton(
    compiled: _CompiledSystem,
    x0: np.ndarray,
    tol: float,
    max_iter: int,
    target_sq: Optional[float] = None,
    raw: bool = False,
):
    """Damped minimum-norm Gauss-Newton; returns (x, converged) or, with
    ``raw``, (x, final squared residual).

    Convergence is relative: the squared residual must drop below ``tol``
    times its value at the seed (or below an explicit ``target_sq``).  An
    absolute threshold would be meaningless here, because near t -> 0 the
    generators evaluate to O(t^deg) at points that are far from the
    variety on the normalized d(t) scale.
    """
    x = x0.copy()
    r = compiled.residual(x)
    best_sq = float(np.dot(r, r))
    if target_sq is None:
        target_sq = tol * best_sq
    lam = 1e-12
    for _ in range(max_iter):
        if best_sq == 0.0:
            break
        jac = compiled.jacobian(x)
        jtj = jac.T @ jac
        g = jac.T @ r
        diag_max = float(np.max(np.diag(jtj))) if jtj.size else 0.0
        if diag_max == 0.0:
            break
        accepted = stalled = False
        for _attempt in range(25):
            try:
                step = np.linalg.solve(jtj + lam * diag_max * np.eye(len(x)), -g)
            except np.linalg.LinAlgError:
                lam = max(lam * 16.0, 1e-12)
                continue
            x_new = x + step
            r_new = compiled.residual(x_new)
            sq_new = float(np.dot(r_new, r_new))
            if sq_new < best_sq:
                rel_drop = (best_sq - sq_new) / best_sq
                x, r, best_sq = x_new, r_new, sq_new
                lam = max(lam / 8.0, 1e-12)
                accepted = True
                stalled = rel_drop < 1e-12
                break
            lam = max(lam * 16.0, 1e-12)
        if not accepted or stalled:
            break
    if raw:
        return x, best_sq
    return x, best_sq <= target_sq


def _polish_nearest(
    compiled: _CompiledSystem,
    x0: np.ndarray,
    x: np.ndarray,
    target_sq: float,
    max_outer: int = 25,
):
    """Slide a point of the variety tangentially toward x0.

    Sequential projection for the nearest-point problem: each step solves
    min ||x + d - x0|| subject to J d = -r, then re-lands on the variety
    with a few Gauss-Newton steps.  Steps are only accepted when the
    landing stays below the convergence target and strictly decreases the
    distance, so the unpolished point is always a safe fallback.  At the
    true nearest point the tangential pull vanishes and the loop exits.
    """
    dist = float(np.linalg.norm(x - x0))
    for _ in range(max_outer):
        r = compiled.residual(x)
        jac = compiled.jacobian(x)
        jjt = jac @ jac.T
        diag_max = float(np.max(np.diag(jjt))) if jjt.size else 0.0
        if diag_max == 0.0:
            break
        v = x0 - x
        try:
            mult = np.linalg.solve(
                jjt + 1e-12 * diag_max * np.eye(jjt.shape[0]), jac @ v + r
            )
        except np.linalg.LinAlgError:
            break
        delta = v - jac.T @ mult
        if float(np.linalg.norm(delta)) <= 4e-16 * (1.0 + float(np.linalg.norm(x))):
            break
        alpha = 1.0
        improved = False
        for _backtrack in range(8):
            x_try, sq_try = _gauss_newton(compiled, x + alpha * delta, 0.0, 12, raw=True)
            dist_try = float(np.linalg.norm(x_try - x0))
            if sq_try <= target_sq and dist_try < dist * (1.0 - 1e-12):
                x, dist = x_try, dist_try
                improved = True
                break
            alpha *= 0.25
        if not improved:
            break
    return x


def project_to_variety(
    sys: PolySystem,
    x0: Sequence,
    *,
    tol: float = DEFAULT_SCHEDULE.project_tol,
    max_iter: int = 100,
    perturb_scale: Optional[float] = None,
    rng: Optional[np.random.Generator] = None,
    compiled: Optional[_CompiledSystem] = None,
):
    """Nearest point on the variety found from x0, and a convergence flag.

    Damped Gauss-Newton runs from x0 and from four perturbed seeds whose
    scales ladder up from ``perturb_scale`` to a fraction of ||x0||, so at
    least one seed sits above any residual fold the query point may be
    pinned under.  Among converged runs the point closest to x0 wins and
    is then slid tangentially toward x0.  Convergence means the squared
    residual fell below ``tol`` relative to its seed value within
    ``max_iter`` iterations; non-convergence is data, not an error.  Every
    returned converged point lies on the variety, so its distance can only
    overestimate the true one.
    """
    comp = compiled or _CompiledSystem(sys)
    x0r = comp.embed(x0)
    if rng is None:
        rng = np.random.default_rng(0)
    anorm = float(np.linalg.norm(x0r))
    if perturb_scale is None:
        perturb_scale = 1e-8 * (1.0 + anorm)
    init_sq = float(np.dot(comp.residual(x0r), comp.residual(x0r)))
    if init_sq == 0.0:
        result = x0r
        return (result[: comp.n] + 1j * result[comp.n :], True) if comp.complex else (result, True)
    target_sq = tol * init_sq
    scales = (
        perturb_scale,
        100.0 * perturb_scale,
        1e-4 * (anorm + perturb_scale),
        1e-2 * (anorm + perturb_scale),
    )
    seeds = [x0r]
    for scale in scales:
        seeds.append(x0r + scale * rng.standard_normal(comp.n_real))
    best_x = None
    best_dist = math.inf
    fallback = None
    for seed in seeds:
        x, ok = _gauss_newton(comp, seed, tol, max_iter, target_sq=target_sq)
        if ok:
            dist = float(np.linalg.norm(x - x0r))
            if dist < best_dist:
                best_x, best_dist = x, dist
        elif fallback is None:
            fallback = x
    if best_x is None:
        return (fallback if fallback is not None else x0r), False
    best_x = _polish_nearest(comp, x0r, best_x, target_sq)
    if comp.complex:
        return best_x[: comp.n] + 1j * best_x[comp.n :], True
    return best_x, True


def _t_rng(seed: int, t: float) -> np.random.Generator:
    # stable per-(seed, t) stream so schedule refinement does not reshuffle
    # the perturbations of shared t values
    t_bits = int.from_bytes(struct.pack(">d", t), "big")
    return np.random.default_rng([seed & 0xFFFFFFFF, t_bits & 0xFFFFFFFF, t_bits >> 32])


def t2_membership(
    sys: PolySystem,
    u: Vector,
    w: Vector,
    schedule: DecaySchedule = DEFAULT_SCHEDULE,
    *,
    seed: int = 0,
) -> MembershipVerdict:
    """Estimate whether w belongs to the geometric second-order tangent set
    along u by tracking d(t) = dist(t*u + t^2 w / 2, X) / t^2."""
    if all(abs(complex(scalar_to_float(x))) == 0.0 for x in u):
        raise PreconditionError("direction must be nonzero")
    comp = _CompiledSystem(sys)
    uf = comp.embed(u)
    wf = comp.embed(w)
    diagnostics: list[str] = []
    points: list[tuple[float, float]] = []
    converged_flags: list[bool] = []
    for t in schedule.t_values:
        x0 = t * uf + 0.5 * t * t * wf
        if comp.complex:
            x0_point = x0[: comp.n] + 1j * x0[comp.n :]
        else:
            x0_point = x0
        projected, ok = project_to_variety(
            sys,
            x0_point,
            tol=schedule.project_tol,
            perturb_scale=PERTURB_REL * t * t * (1.0 + float(np.linalg.norm(x0))),
            rng=_t_rng(seed, t),
            compiled=comp,
        )
        converged_flags.append(ok)
        if not ok:
            diagnostics.append(f"projection did not converge at t={t:.3e}")
            continue
        proj_r = comp.embed(projected)
        d = float(np.linalg.norm(proj_r - x0)) / (t * t)
        points.append((t, d))
    if len(points) < 6:
        return MembershipVerdict(
            verdict=Verdict.INCONCLUSIVE,
            normalized_distances=tuple(points),
            fitted_exponent=None,
            diagnostics=tuple(diagnostics + ["fewer than 6 converged projections"]),
        )
    exponent = _fit_exponent(points)
    verdict = _decide(points, exponent, all(converged_flags), schedule, diagnostics)
    return MembershipVerdict(
        verdict=verdict,
        normalized_distances=tuple(points),
        fitted_exponent=exponent,
        diagnostics=tuple(diagnostics),
    )


def _fit_exponent(points: Sequence[tuple[float, float]]) -> float:
    nonzero = [(t, d) for t, d in points if d > 1e-200]
    if len(nonzero) < 2:
        # every projection landed on the variety exactly: treat the decay
        # as instantaneous
        return math.inf
    logs_t = np.log([t for t, _ in nonzero])
    logs_d = np.log([d for _, d in nonzero])
    slope = np.polyfit(logs_t, logs_d, 1)[0]
    return float(slope)


def _decide(
    points: Sequence[tuple[float, float]],
    exponent: float,
    all_converged: bool,
    schedule: DecaySchedule,
    diagnostics: list[str],
) -> Verdict:
    final_d = points[-1][1]
    member_cap = 10.0 * math.sqrt(schedule.project_tol)
    if (
        all_converged
        and exponent >= schedule.decay_exponent_threshold
        and final_d < member_cap
    ):
        return Verdict.MEMBER
    tail = points[-(max(len(points) // 3, 1)) :]
    if all(d >= schedule.reject_floor for _, d in tail):
        return Verdict.NOT_MEMBER
    diagnostics.append(
        f"no decision: exponent={exponent:.3g}, final d={final_d:.3e}"
    )
    return Verdict.INCONCLUSIVE


@dataclass(frozen=True)
class SweepResult:
    entries: tuple[tuple[Vector, MembershipVerdict], ...]
    sign_constraints: tuple[str, ...]

    def to_json(self) -> dict:
        from .fields import vector_to_json

        return {
            "table": [
                {"w": vector_to_json(w), **verdict.to_json()}
                for w, verdict in self.entries
            ],
            "sign_constraints": list(self.sign_constraints),
        }


def t2_case_sweep(
    sys: PolySystem,
    u: Vector,
    w_grid: Sequence[Vector],
    schedule: DecaySchedule = DEFAULT_SCHEDULE,
    *,
    seed: int = 0,
) -> SweepResult:
    """Batch membership over a grid of w, plus a sign-constraint summary
    describing how the MEMBER region sits against coordinate signs."""
    entries = tuple(
        (tuple(w), t2_membership(sys, u, w, schedule, seed=seed)) for w in w_grid
    )
    return SweepResult(entries=entries, sign_constraints=_sign_summary(sys.n, entries))


def _sign_summary(
    n: int, entries: Sequence[tuple[Vector, MembershipVerdict]]
) -> tuple[str, ...]:
    members = [w for w, v in entries if v.verdict is Verdict.MEMBER]
    rejected = [w for w, v in entries if v.verdict is Verdict.NOT_MEMBER]
    if not members:
        return ("no members found",) if rejected else ()
    constraints = []
    for i in range(n):
        vals_m = [float(np.real(complex(scalar_to_float(w[i])))) for w in members]
        vals_r = [float(np.real(complex(scalar_to_float(w[i])))) for w in rejected]
        if all(v == 0 for v in vals_m) and any(v != 0 for v in vals_r):
            constraints.append(f"w{i + 1} = 0")
        elif all(v >= 0 for v in vals_m) and any(v < 0 for v in vals_r):
            constraints.append(f"w{i + 1} >= 0")
        elif all(v <= 0 for v in vals_m) and any(v > 0 for v in vals_r):
            constraints.append(f"w{i + 1} <= 0")
    return tuple(constraints)
