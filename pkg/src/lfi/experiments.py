"""Experiment kinds driven by JSON configs.

Each kind returns an ``ExperimentResult``: CSV rows (one per sweep point),
a JSON-ready summary and a list of named assertions.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Mapping

import numpy as np

from . import exact
from .hilbert import embed_step
from .kernels import (
    extract_propagator_window,
    free_kernel_continuum,
    free_kernel_lattice_matrix,
    free_propagator_direct,
    free_window_average,
    mehler_kernel,
    window_average,
)
from .lattice import Grid
from .operators import (
    EvolutionFactor,
    apply_kinetic,
    dense_matrix,
    gk_conjugation_error,
    lifted_trotter,
    trotter_power,
)
from .pathspace import (
    BasicOpenSet,
    PathSpace,
    classical_action,
    covers_fiber,
    discrete_action,
    exact_mu_sum,
    sample_path,
    operator_side,
    path_space_estimate,
)
from .pathsum import bruteforce_path_integral, transfer_matrix, transfer_matrix_path_integral
from .potentials import HarmonicPotential, Potential, free
from .schedule import Quadrature, ScheduleConfig, consequence_bound, public_report, tau_delta
from .units import DeltaSchedule, LatticeSequence, UnitSystem

CSV_COLUMNS = ["k", "s", "p", "N", "value_re", "value_im", "reference_re", "reference_im",
               "abs_err", "rel_err", "wall_time_ms", "label"]


class ConfigError(ValueError):
    pass


@dataclass
class Assertion:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "detail": self.detail}


@dataclass
class ExperimentResult:
    kind: str
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    assertions: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def row(self, *, k=None, s=None, p=None, n=None, value=None, reference=None, label="",
            wall_ms=None):
        v = None if value is None else complex(value)
        r = None if reference is None else complex(reference)
        abs_err = None if v is None or r is None else abs(v - r)
        rel_err = None if abs_err is None or r == 0 else abs_err / abs(r)
        self.rows.append({
            "k": k, "s": s, "p": p, "N": n,
            "value_re": None if v is None else v.real, "value_im": None if v is None else v.imag,
            "reference_re": None if r is None else r.real, "reference_im": None if r is None else r.imag,
            "abs_err": abs_err, "rel_err": rel_err, "wall_time_ms": wall_ms, "label": label,
        })

    def check(self, name: str, passed: bool, detail: str = ""):
        self.assertions.append(Assertion(name, bool(passed), detail))


@dataclass
class RunContext:
    units: UnitSystem
    potential: Potential
    params: dict
    mode: str = "float"
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    k_max: int | None = None
    delta: DeltaSchedule | None = None
    lattices: Any = None

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))

    def p(self, name: str, default=None):
        return self.params.get(name, default)


def _timer():
    t0 = time.perf_counter()
    return lambda: (time.perf_counter() - t0) * 1e3


def _fr(v) -> Fraction:
    return Fraction(str(v))


def _potentials(ctx: RunContext) -> list[tuple[str, Potential]]:
    """The configured potential, or free plus harmonic when ``both_potentials``."""
    if ctx.p("both_potentials", False):
        return [("free", free()), ("harmonic", HarmonicPotential(omega_t=_fr(ctx.p("omega_t", "1/2")),
                                                                  units=ctx.units))]
    return [("free" if ctx.potential.is_free else ctx.potential.name, ctx.potential)]


# ---------------------------------------------------------------------------


def kinetic_calibration(ctx: RunContext) -> ExperimentResult:
    res = ExperimentResult("lemma1_calibration")
    tol = ctx.tol("kinetic_abs", 1e-9)
    for sq in ctx.p("sqrt_ns", [6, 12, 60]):
        clock = _timer()
        g = Grid(int(sq))
        u_mat = dense_matrix(EvolutionFactor("kinetic", g, ctx.units))
        closed = free_kernel_lattice_matrix(g, ctx.units)
        err = float(np.abs(u_mat - closed).max())
        del u_mat, closed
        res.row(n=g.n, value=err, reference=0.0, label="max_entry_error", wall_ms=clock())
        res.check(f"float_N{g.n}", err < tol, f"max |U - closed form| = {err:.3e}")
        if ctx.mode == "exact":
            clock = _timer()
            spiked_bad, value_bad = kinetic_exact_residuals(g.sqrt_n)
            res.row(n=g.n, value=spiked_bad + value_bad, reference=0, label="exact_nonzero_residuals",
                    wall_ms=clock())
            res.check(f"exact_N{g.n}", spiked_bad == 0 and value_bad == 0,
                      f"{spiked_bad} spiked and {value_bad} non-spiked entries with nonzero residual")
    return res


def kinetic_exact_residuals(sqrt_n: int, chunk: int = 256) -> tuple[int, int]:
    """Exact check of the kinetic matrix against the closed form in Z[zeta_4N].

    The matrix is circulant, so entry d (index difference) suffices:
    ``N * entry = sum_m zeta_4N^(4(m d - m**2))`` must equal
    ``sqrt(N) (1 - i) zeta_4N^(d**2)`` for even d and vanish for odd d.
    """
    n = sqrt_n**2
    m_mod = 4 * n
    m = np.arange(n, dtype=np.int64)
    spiked_bad = value_bad = 0
    for d0 in range(0, n, chunk):
        ds = np.arange(d0, min(n, d0 + chunk), dtype=np.int64)
        e = 4 * (np.outer(ds, m) - m[None, :] ** 2)
        rows = np.repeat(np.arange(len(ds)), n)
        counts = exact.bin_phases(e, m_mod, rows=rows, n_rows=len(ds))
        even = ds % 2 == 0
        dw = np.where(ds < n // 2, ds, ds - n)
        ref = np.zeros_like(counts)
        idx = np.arange(len(ds))
        # 1 - i = zeta^0 + zeta^(3N)
        ref[idx, (dw * dw) % m_mod] += sqrt_n
        ref[idx, (dw * dw + 3 * n) % m_mod] += sqrt_n
        ref[~even] = 0
        diff = counts - ref
        zero = exact.antipodal_certificate(diff)
        zero[~zero] = exact.is_zero(diff[~zero], m_mod)
        spiked_bad += int((~zero & ~even).sum())
        value_bad += int((~zero & even).sum())
    return spiked_bad, value_bad


def spiking_scan(ctx: RunContext) -> ExperimentResult:
    res = ExperimentResult("spiking_scan")
    tol = ctx.tol("spiking_abs", 1e-10)
    for sq in ctx.p("sqrt_ns", [6, 12]):
        g = Grid(int(sq))
        for frac in ctx.p("fracs", ["1", "2", "1/2"]):
            frac = _fr(frac)
            col = np.zeros(g.n, dtype=np.complex128)
            col[0] = 1
            entries = apply_kinetic(col, frac, g, ctx.units)
            d = frac * 2
            if d.denominator != 1:
                res.check(f"N{g.n}_frac{frac}", True, "tau h/m not an integer; no spiking rule")
                continue
            diffs = g.wrapped()
            mask = diffs % d.numerator == 0
            kstar = free_kernel_continuum(0.0, diffs / g.sqrt_n, ctx.units, float(frac) * ctx.units.t)
            closed = np.where(mask, g.n**-0.5 * d.numerator * kstar, 0)
            err = float(np.abs(entries - closed).max())
            res.row(s=str(frac), n=g.n, value=float(mask.mean()), reference=1.0 / d.numerator,
                    label="nonzero_fraction")
            if g.sqrt_n % d.numerator:
                # outside the closed form's hypothesis; reported, not asserted
                res.row(s=str(frac), n=g.n, value=err, reference=0.0, label="deviation_divisor_not_dividing_sqrtN")
                continue
            res.check(f"N{g.n}_frac{frac}", err < tol, f"max deviation {err:.3e}")
    return res


def path_sum_equivalence(ctx: RunContext) -> ExperimentResult:
    res = ExperimentResult("lemma3_equivalence")
    sq, dk = int(ctx.p("sqrt_n_k", 6)), int(ctx.p("delta_k", 1))
    g = Grid.refined(sq, dk)
    n_pairs = int(ctx.p("pairs", 20))
    tol = ctx.tol("path_sum_rel", 1e-8)
    rng = ctx.rng()
    modes = ["float", "exact"] if ctx.mode == "exact" else ["float"]
    tm_full = {}
    for name, f_v in _potentials(ctx):
        tm_full[name] = transfer_matrix(g, f_v, ctx.units) if g.n <= 4096 else None
        floor = ctx.tol("path_sum_min_abs", 1e-6)
        done = 0
        worst = {m: 0.0 for m in modes}
        tries = 0
        while done < n_pairs:
            tries += 1
            if tries > 100 * n_pairs:
                raise RuntimeError("could not draw enough endpoint pairs with a nonvanishing element")
            j0 = int(rng.integers(-g.n // 2, g.n // 2))
            j1 = int(rng.integers(-g.n // 2, g.n // 2 // 2)) * 2 + (j0 % 2)
            if not -g.n // 2 <= j1 < g.n // 2:
                continue
            x0, x1 = j0 * g.spacing, j1 * g.spacing
            ref = transfer_matrix_path_integral(x0, x1, g, f_v, ctx.units)
            if abs(ref) < floor:
                continue
            for mode in modes:
                clock = _timer()
                val = bruteforce_path_integral(x0, x1, g, f_v, ctx.units, mode=mode)
                res.row(k=1, s=dk, n=g.n, value=val, reference=ref, label=f"{name}:{mode}:{x0}->{x1}",
                        wall_ms=clock())
                worst[mode] = max(worst[mode], abs(val - ref) / abs(ref))
            done += 1
        for mode in modes:
            res.check(f"{name}_{mode}", worst[mode] < tol, f"max relative error {worst[mode]:.3e}")
    return res


def parity_vanishing(ctx: RunContext) -> ExperimentResult:
    res = ExperimentResult("lemma4_parity")
    g = Grid.refined(int(ctx.p("sqrt_n_k", 6)), int(ctx.p("delta_k", 1)))
    tol = ctx.tol("parity_abs", 1e-10)
    w = g.wrapped()
    cross = (w[:, None] - w[None, :]) % 2 == 1
    for name, f_v in _potentials(ctx):
        mat = transfer_matrix(g, f_v, ctx.units)
        worst = float(np.abs(mat[cross]).max())
        res.row(s=g.delta, n=g.n, value=worst, reference=0.0, label=f"{name}:max_cross_parity")
        res.check(f"{name}", worst < tol, f"max cross-parity modulus {worst:.3e}")
    return res


def gk_conjugation(ctx: RunContext) -> ExperimentResult:
    res = ExperimentResult("gk_conjugation")
    sq, dk = int(ctx.p("sqrt_n_k", 6)), int(ctx.p("delta_k", 1))
    tol = ctx.tol("gk_abs", 1e-9)
    for name, f_v in _potentials(ctx):
        for n in ctx.p("splits", [1, 2, 4]):
            out = gk_conjugation_error(sq, dk, int(n), f_v, ctx.units)
            res.row(s=dk, p=int(n), n=sq * sq, value=out["max_entry_error"], reference=0.0,
                    label=f"{name}:t/{n}")
            res.check(f"{name}_n{n}", out["max_entry_error"] < tol,
                      f"max entry error {out['max_entry_error']:.3e}, range leakage {out['range_leakage']:.3e}")
    return res


def free_propagator_exactness(ctx: RunContext) -> ExperimentResult:
    res = ExperimentResult("eq7_free_propagator")
    tol = ctx.tol("free_abs", 1e-9)
    pairs = ctx.p("pairs", [["0", "0"], ["0", "1"], ["1/3", "-1"], ["-2/3", "1"], ["1", "-1"]])
    for y0, y1 in pairs:
        y0, y1 = _fr(y0), _fr(y1)
        ref = free_kernel_continuum(float(y0), float(y1), ctx.units)
        vals = []
        for sq in ctx.p("sqrt_ns", [6, 12, 60]):
            g = Grid(int(sq))
            kv = free_propagator_direct(y0, y1, g, ctx.units)
            vals.append(kv.value)
            res.row(n=g.n, value=kv.value, reference=ref, label=f"{y0}->{y1}" + (":spiked" if kv.spiked_zero else ""))
            res.check(f"{y0}->{y1}_N{g.n}", not kv.spiked_zero and abs(kv.value - ref) < tol,
                      f"|value - K*| = {abs(kv.value - ref):.3e}")
        spread = max(abs(a - vals[0]) for a in vals)
        res.check(f"{y0}->{y1}_N_independent", spread < tol, f"spread across N {spread:.3e}")
    return res


def _window_evolution(f_v: Potential, g: Grid, s: int, u: UnitSystem, route: str) -> Callable:
    if f_v.is_free:
        return lambda a: apply_kinetic(a, 1, g, u)
    if route == "lifted":
        return lambda a: lifted_trotter(a, s, f_v, g.sqrt_n, u)
    if route != "direct":
        raise ConfigError(f"unknown route {route!r}")
    return lambda a: trotter_power(a, 4**s, s, f_v, g, u)


def _continuum_reference(f_v: Potential, u: UnitSystem) -> Callable:
    if f_v.is_free:
        return lambda x0, x1: free_kernel_continuum(x0, x1, u)
    if isinstance(f_v, HarmonicPotential):
        w = f_v.omega(u)
        return lambda x0, x1: mehler_kernel(x0, x1, w, u)
    raise ConfigError("window sweeps need a free or harmonic potential")


def window_sweep(ctx: RunContext) -> ExperimentResult:
    """Window extraction swept over k (inner), s, then p (outer).

    The sweep points are the values at the last k for each (p, s).
    """
    res = ExperimentResult("eq6_window_sweep")
    y0, y1 = _fr(ctx.p("y0", "0")), _fr(ctx.p("y1", "0"))
    f_v = ctx.potential
    kernel = _continuum_reference(f_v, ctx.units)
    ref = complex(kernel(float(y0), float(y1)))
    route = ctx.p("route", "direct")
    sqrt_ns = [int(v) for v in ctx.p("sqrt_ns", [60, 300, 900])]
    ss = [int(v) for v in ctx.p("s_values", [1])]
    points = []
    for p in [int(v) for v in ctx.p("ps", [2, 4, 8])]:
        win = (free_window_average(y0, y1, p, ctx.units) if f_v.is_free
               else window_average(kernel, y0, y1, p))
        for s in ss:
            last = None
            for k, sq in enumerate(sqrt_ns, start=1):
                clock = _timer()
                g = Grid(sq)
                val = extract_propagator_window(y0, y1, p, _window_evolution(f_v, g, s, ctx.units, route), g)
                res.row(k=k, s=s, p=p, n=g.n, value=val, reference=ref, label="kernel", wall_ms=clock())
                last = val
            points.append({"p": p, "s": s, "value": last, "rel_err": abs(last - ref) / abs(ref),
                           "window_average_rel_err": abs(last - win) / abs(win)})
            res.row(k=len(sqrt_ns), s=s, p=p, n=sqrt_ns[-1] ** 2, value=last, reference=win,
                    label="window_average")
    errs = [pt["rel_err"] for pt in points]
    tail = errs[-3:]
    res.summary["sweep_points"] = [{"p": pt["p"], "s": pt["s"], "rel_err": pt["rel_err"],
                                    "window_average_rel_err": pt["window_average_rel_err"]}
                                   for pt in points]
    final_tol = ctx.tol("final_rel", 0.02)
    res.check("final_rel_err", errs[-1] < final_tol, f"final relative error {errs[-1]:.4%}")
    res.check("monotone_tail", len(tail) >= 2 and all(b < a for a, b in zip(tail, tail[1:])),
              "errors over the last sweep points: " + ", ".join(f"{e:.4%}" for e in tail))
    return res


_PATHS = {
    "linear": (lambda u, t: u / t, lambda u, t: 1 / t),
    "quadratic": (lambda u, t: 0.3 + 0.5 * u - 0.2 * u * u, lambda u, t: 0.5 - 0.4 * u),
    "cubic": (lambda u, t: u**3 / 3 - 0.1 * u, lambda u, t: u * u - 0.1),
    "sine": (lambda u, t: math.sin(u), lambda u, t: math.cos(u)),
    "cosine": (lambda u, t: 0.5 * math.cos(2 * u), lambda u, t: -math.sin(2 * u)),
}


def action_convergence(ctx: RunContext) -> ExperimentResult:
    res = ExperimentResult("remark4_action")
    k_max = int(ctx.p("k_max", 4))
    lattices = LatticeSequence.nk_sequence(k_max)
    ss = [int(v) for v in ctx.p("s_values", [1, 2, 3, 4, 5])]
    tol = ctx.tol("action_rel", 1e-2)
    t = ctx.units.t
    summary = {}
    for name in ctx.p("paths", list(_PATHS)):
        f0, df0 = _PATHS[name]
        f = lambda u, f0=f0: f0(u, t)  # noqa: E731
        df = lambda u, df0=df0: df0(u, t)  # noqa: E731
        cl, cl_err = classical_action(f, ctx.potential, ctx.units, df)
        per_s = []
        for s in ss:
            space = PathSpace(lattices, DeltaSchedule.constant(s, k_max), ctx.units)
            act = discrete_action(sample_path(f, space), ctx.potential, ctx.units)
            for k in act.levels:
                res.row(k=k, s=s, n=lattices.n(k), value=act[k].real, reference=cl, label=name)
            per_s.append(abs(act[act.levels[-1]].real - cl) / abs(cl))
        summary[name] = {"classical_action": cl, "quadrature_error": cl_err, "rel_err_by_s": per_s}
        res.check(f"{name}_decreasing", all(b <= a for a, b in zip(per_s, per_s[1:])),
                  "relative errors over s: " + ", ".join(f"{e:.2e}" for e in per_s))
        res.check(f"{name}_final", per_s[-1] < tol, f"final relative error {per_s[-1]:.2e}")
    res.summary["paths"] = summary
    return res


def measure_properties(ctx: RunContext) -> ExperimentResult:
    res = ExperimentResult("remark5_measure")
    sqrt_ns = [int(v) for v in ctx.p("sqrt_ns", [6, 12])]
    s = int(ctx.p("delta", 1))
    lattices = LatticeSequence(tuple(sqrt_ns), name="surrogate")
    space = PathSpace(lattices, DeltaSchedule.constant(s, lattices.k_max), ctx.units)
    rng = ctx.rng()
    lv = space.level(1)
    n_cells = int(ctx.p("cells", 6))
    tele_ok = ineq_ok = eq_ok = True
    for c in range(n_cells):
        x = tuple(int(rng.integers(lv.axis(j).lo, lv.axis(j).hi)) for j in range(lv.n_star + 1))
        if c == 0:  # an edge cell, where the fibers absorb the overhang of the finer grid
            x = (lv.end_axis.lo,) + x[1:-1] + (lv.end_axis.hi - 1,)
        cell = BasicOpenSet(1, x)
        kids = list(space.cells_at(cell, 2))
        for r in space.levels:
            ok = exact_mu_sum(space, kids, r) == space.mu_star(cell, r)
            tele_ok &= ok
        full = exact_mu_sum(space, kids, 1)
        point = space.point_measure(1)
        eq = full == point and covers_fiber(space, kids, x, 1)
        eq_ok &= eq
        # a proper subfamily: strictly smaller and not covering
        m = int(rng.integers(1, len(kids)))
        pick = rng.choice(len(kids), size=m, replace=False)
        sub = [kids[i] for i in sorted(pick)]
        part = exact_mu_sum(space, sub, 1)
        ineq = part < point and not covers_fiber(space, sub, x, 1)
        ineq_ok &= ineq
        res.row(k=1, s=s, n=lv.n, value=float(part / point), reference=1.0, label=f"subfamily_{m}_of_{len(kids)}")
        res.row(k=1, s=s, n=lv.n, value=float(full / point), reference=1.0, label="full_fiber")
    res.check("telescoping_exact", tele_ok, "sum of children's mu* equals the parent's for every level")
    res.check("fiber_equality", eq_ok, "covering families attain mu_r({x}) exactly")
    res.check("subfamily_inequality", ineq_ok, "proper subfamilies fall strictly below mu_r({x})")
    return res


def path_space_sweep(ctx: RunContext) -> ExperimentResult:
    """Path-space estimator against the operator side, level by level.

    The asserted identity uses the configured route (default ``direct``, the
    Trotter product on H_k). The lifted route, evolved on the refined space
    between G_k images, is reported alongside without an assertion.
    """
    res = ExperimentResult("theorem1_sweep")
    lattices = ctx.lattices
    space = PathSpace(lattices, ctx.delta, ctx.units)
    y0, y1 = _fr(ctx.p("y0", "0")), _fr(ctx.p("y1", "0"))
    tol = ctx.tol("identity_abs", 1e-8)
    path_cap = int(ctx.p("path_side_cap", 4096))
    route = ctx.p("route", "direct")
    if route not in ("direct", "lifted"):
        raise ConfigError(f"unknown route {route!r}")
    kernel = _continuum_reference(ctx.potential, ctx.units)
    cont = complex(kernel(float(y0), float(y1)))
    records = []
    lifted_dev = 0.0
    for r in [int(v) for v in ctx.p("rs", [2])]:
        recs = path_space_estimate(space, y0, y1, r, ctx.potential,
                                   path_side=lambda lv: lv.n_d // 2 <= path_cap, route=route)
        for rec in recs:
            lv = space.level(rec.k)
            if rec.estimate is not None:
                res.row(k=rec.k, s=lv.delta, p=r, n=lv.n, value=rec.estimate, reference=rec.operator_side,
                        label=f"identity:{route}")
                err = abs(rec.estimate - rec.operator_side)
                res.check(f"identity_k{rec.k}_r{r}", err < tol * max(1.0, abs(rec.operator_side)),
                          f"|estimate - operator side ({route})| = {err:.3e}")
                if route != "lifted":
                    other, _ = operator_side(y0, y1, r, lv, ctx.potential, ctx.units, "lifted")
                    res.row(k=rec.k, s=lv.delta, p=r, n=lv.n, value=rec.estimate, reference=other,
                            label="identity:lifted")
                    lifted_dev = max(lifted_dev, abs(rec.estimate - other))
            res.row(k=rec.k, s=lv.delta, p=r, n=lv.n,
                    value=rec.estimate if rec.estimate is not None else rec.operator_side,
                    reference=cont, label="continuum")
            records.append(rec.to_json())
    res.summary["records"] = records
    if route != "lifted":
        res.summary["lifted_identity_max_deviation"] = lifted_dev
    return res


def tau_delta_trace(ctx: RunContext) -> ExperimentResult:
    res = ExperimentResult("tau_delta_trace")
    q = ctx.p("quadrature", {})
    cfg = ScheduleConfig(ctx.units, ctx.potential, [int(v) for v in ctx.p("sqrt_ns", [6, 12, 24])],
                         Quadrature(float(q.get("radius", 300.0)), float(q.get("step", 2e-3))))
    reports = []
    taus = []
    for k in [int(v) for v in ctx.p("levels", [1, 2, 3])]:
        out = tau_delta(k, cfg)
        tau, dk, rep = out
        taus.append(tau)
        cb = consequence_bound(0, 0, k, out)
        reports.append({**public_report(rep), "consequence_00": cb})
        res.row(k=k, s=dk, p=tau, n=cfg.sqrt_n(k) ** 2, value=cb["deviation"], reference=0.0, label="tau_delta")
        res.check(f"k{k}_witness_range", tau <= dk <= k, f"tau={tau}, delta={dk}")
        res.check(f"k{k}_consequence", cb["holds"], f"deviation {cb['deviation']:.3e} vs 2/tau {cb['bound']:.3f}")
    res.summary["reports"] = reports
    res.summary["tau_non_decreasing"] = all(b >= a for a, b in zip(taus, taus[1:]))
    return res


EXPERIMENTS: dict[str, Callable[[RunContext], ExperimentResult]] = {
    "lemma1_calibration": kinetic_calibration,
    "spiking_scan": spiking_scan,
    "lemma3_equivalence": path_sum_equivalence,
    "lemma4_parity": parity_vanishing,
    "gk_conjugation": gk_conjugation,
    "eq7_free_propagator": free_propagator_exactness,
    "eq6_window_sweep": window_sweep,
    "remark4_action": action_convergence,
    "remark5_measure": measure_properties,
    "theorem1_sweep": path_space_sweep,
    "tau_delta_trace": tau_delta_trace,
}

PARAMS: dict[str, set] = {
    "lemma1_calibration": {"sqrt_ns"},
    "spiking_scan": {"sqrt_ns", "fracs"},
    "lemma3_equivalence": {"sqrt_n_k", "delta_k", "pairs", "both_potentials", "omega_t"},
    "lemma4_parity": {"sqrt_n_k", "delta_k", "both_potentials", "omega_t"},
    "gk_conjugation": {"sqrt_n_k", "delta_k", "splits", "both_potentials", "omega_t"},
    "eq7_free_propagator": {"sqrt_ns", "pairs"},
    "eq6_window_sweep": {"y0", "y1", "ps", "s_values", "sqrt_ns", "route"},
    "remark4_action": {"k_max", "s_values", "paths"},
    "remark5_measure": {"sqrt_ns", "delta", "cells"},
    "theorem1_sweep": {"y0", "y1", "rs", "path_side_cap", "route"},
    "tau_delta_trace": {"sqrt_ns", "levels", "quadrature"},
}


def list_experiments() -> list[str]:
    return list(EXPERIMENTS)
