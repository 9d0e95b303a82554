"""Acceptance criteria 1-9, each at its stated tolerance.

Every test prints one ``PASS``/``FAIL`` line; the lines are also gathered into an
"acceptance criteria" section at the end of the pytest run.
Relative errors are ``max|a - b| / max(1, max|b|)``.
"""

import math

import numpy as np
import pytest

from jacobiflow import double_tangent as dt
from jacobiflow import spray_flow as sf
from jacobiflow import verify as vf
from jacobiflow.cli import run
from jacobiflow.tangent import primal_array
from jacobiflow.zoo import default_zoo, euclidean, half_plane, sphere, torsion_demo

STRUCTURAL_PROBES = 10_000


def verdict(log, number, title, checks):
    """``checks``: (label, observed, bound, "max" | "min" | "band").  Logs and asserts."""
    parts, ok = [], True
    for label, observed, bound, kind in checks:
        if kind == "max":
            good, rel = observed <= bound, f"<= {bound:.0e}"
        elif kind == "min":
            good, rel = observed >= bound, f">= {bound:g}"
        else:
            lo, hi = bound
            good, rel = lo <= observed <= hi, f"in [{lo:g}, {hi:g}]"
        good = bool(good and np.isfinite(observed))
        ok &= good
        parts.append(f"{label}={observed:.3e} {rel}{'' if good else ' (!)'}")
    line = f"{'PASS' if ok else 'FAIL'} [{number}] {title}: " + "; ".join(parts)
    print(line)
    log.append(line)
    assert ok, line


@pytest.fixture(scope="module")
def zoo():
    return default_zoo()


def spread(total, models):
    return -(-total // len(models))


def structural(check, name, models, probes):
    return name, check(vf.check_rng(1, name), probes, models).value, 1e-12, "max"


def test_criterion_1_structural(zoo, acceptance_log):
    first = zoo[1:2]
    per_model = spread(STRUCTURAL_PROBES, zoo)
    checks = [
        structural(vf.check_flip_involution, "flip^2", first, STRUCTURAL_PROBES),
        structural(vf.check_projection_exchange, "proj_exchange", first, STRUCTURAL_PROBES),
        structural(vf.check_flip_exchanges_additions, "flip_additions", first, STRUCTURAL_PROBES),
        structural(vf.check_K_vl, "K.vl", zoo, per_model),
        structural(vf.check_C_projections, "(Tp,pi).C", zoo, per_model),
        structural(vf.check_K_C_zero, "K.C", zoo, per_model),
        structural(vf.check_K_S_zero, "K.S", zoo, per_model),
        structural(vf.check_vlK_TKvl, "vl.K-TK.vl", zoo, per_model),
    ]
    verdict(acceptance_log, 1, f"structural identities, {STRUCTURAL_PROBES} probes each", checks)


def test_criterion_2_bracket(zoo, acceptance_log):
    w = vf.check_bracket_via_flip(vf.check_rng(2, "bracket"), 100, zoo)
    verdict(acceptance_log, 2, "bracket via flip vs AD, 100 pairs per model", [("rel", w.value, 1e-12, "max")])


def test_criterion_3_curvature(acceptance_log):
    models = [sphere(1.0), half_plane(), torsion_demo(0.5)]
    w = vf.check_curvature_two_routes(vf.check_rng(3, "curvature"), 50, models)
    verdict(acceptance_log, 3, "curvature commutator vs operator route, 50 probes per model",
            [("rel", w.value, 1e-9, "max")])


def test_criterion_4_torsion(zoo, acceptance_log):
    routes = vf.check_torsion_two_routes(vf.check_rng(4, "torsion"), 100, zoo)
    lc = vf.check_levi_civita_torsion_free(vf.check_rng(4, "lc"), 100, zoo + [sphere(2.0, dim=3), half_plane(3)])
    verdict(acceptance_log, 4, "torsion", [("routes", routes.value, 1e-12, "max"), ("levi_civita", lc.value, 1e-12, "max")])


def test_criterion_5_spray_axioms(zoo, acceptance_log):
    quad = vf.check_spray_quadratic(vf.check_rng(5, "quadratic"), 1000, zoo)
    rng = vf.check_rng(5, "geo")
    homog, flow = 0.0, 0.0
    for model in zoo:
        for _ in range(2):
            X = dt.TangentVector(model.sample(rng), 0.5 * rng.standard_normal(model.dim))
            t, s = 2.0, 0.5
            homog = max(homog, np.max(np.abs(
                sf.geo(model, dt.TangentVector(X.base, t * X.vec), s, 1e-3) - sf.geo(model, X, t * s, 1e-3))))
            mid = sf.geo_velocity(model, X, 0.3, 1e-3)
            flow = max(flow, np.max(np.abs(sf.geo(model, mid, 0.4, 1e-3) - sf.geo(model, X, 0.7, 1e-3))))
    verdict(acceptance_log, 5, "spray axioms", [
        ("quadratic", quad.value, 1e-12, "max"),
        ("homogeneity", homog, 1e-7, "max"),
        ("flow_property", flow, 1e-7, "max"),
    ])


HEADLINE_CASES = {
    "sphere": (lambda: sphere(1.0), [0.2, -0.1], [0.4, 0.3], [0.3, -0.2], [0.1, 0.5]),
    "half_plane": (half_plane, [0.1, 1.0], [0.6, -0.3], [0.2, 0.1], [-0.3, 0.4]),
    "torsion_demo": (lambda: torsion_demo(0.5), [0.2, -0.1], [0.7, 0.4], [0.3, 0.1], [-0.2, 0.5]),
}


@pytest.mark.parametrize("case", list(HEADLINE_CASES))
def test_criterion_6_jacobi_flow(case, acceptance_log):
    make, x0, v0, J0, nJ0 = HEADLINE_CASES[case]
    model, t_max, h = make(), 2.0, 1e-3
    X = dt.TangentVector(x0, v0)
    Y0 = sf.jacobi_state_from_covariant(model, X, J0, nJ0)
    flow = sf.integrate_jacobi_flow(model, Y0, t_max, h)
    J = flow.block(2)
    var = sf.variation_oracle(model, lambda s: dt.TangentVector(Y0.x + s * Y0.J, Y0.xi + s * Y0.Jdot), t_max, h, 1e-4)
    cl = sf.classical_jacobi_oracle(model, X, J0, nJ0, t_max, h)
    nabla = sf.covariant_velocity(model, flow)
    residual = max(
        float(np.max(np.abs(primal_array(sf.jacobi_residual(model, dt.TTVector.from_array(s))))))
        for s in flow.states
    )
    verdict(acceptance_log, 6, f"Jacobi flow vs oracles on {model.name}, t in [0, 2]", [
        ("variation", float(np.max(np.abs(J - var.states))), 1e-5, "max"),
        ("classical", float(np.max(np.abs(J - cl.block(2)))), 1e-6, "max"),
        ("nablaJ_vs_P", float(np.max(np.abs(nabla - cl.block(3)))), 1e-6, "max"),
        ("residual", residual, 1e-12, "max"),
    ])


def normal_field_error(model, x0, v0, t_max, closed_form):
    Y0 = sf.jacobi_state_from_covariant(model, dt.TangentVector(x0, v0), [0.0, 0.0], [0.0, 1.0])
    flow = sf.integrate_jacobi_flow(model, Y0, t_max, 1e-3)
    norms = np.array([model.norm(s[:2], s[4:6]) for s in flow.states])
    return float(np.max(np.abs(norms - closed_form(flow.times))))


def test_criterion_7_closed_forms(acceptance_log):
    # unit-speed starts where the metric is the identity, unit normal nabla J(0)
    sph = normal_field_error(sphere(1.0), [-1.0, 0.0], [1.0, 0.0], math.pi, np.sin)
    hyp = normal_field_error(half_plane(), [0.0, 1.0], [1.0, 0.0], 2.0, np.sinh)
    flat = euclidean(2)
    J0, nJ0 = np.array([0.5, -1.0]), np.array([0.25, 2.0])
    Y0 = sf.jacobi_state_from_covariant(flat, dt.TangentVector([0.0, 0.0], [1.0, 0.3]), J0, nJ0)
    flow = sf.integrate_jacobi_flow(flat, Y0, 2.0, 1e-3)
    flat_err = float(np.max(np.abs(flow.block(2) - (J0 + np.outer(flow.times, nJ0)))))
    verdict(acceptance_log, 7, "closed-form Jacobi fields", [
        ("sphere_sin", sph, 1e-6, "max"),
        ("half_plane_sinh", hyp, 1e-5, "max"),
        ("flat", flat_err, 1e-12, "max"),
    ])


def test_criterion_8_convergence(acceptance_log):
    errs = vf.half_plane_semicircle_errors([0.05, 0.025, 0.0125, 0.00625])
    rk4 = min(a / b for a, b in zip(errs, errs[1:]))

    model = sphere(1.0)
    Y0 = sf.jacobi_state_from_covariant(model, dt.TangentVector([0.2, -0.1], [0.4, 0.3]), [0.3, -0.2], [0.1, 0.5])
    J = sf.integrate_jacobi_flow(model, Y0, 1.0, 1e-3).block(2)
    family = lambda s: dt.TangentVector(Y0.x + s * Y0.J, Y0.xi + s * Y0.Jdot)
    mism = [float(np.max(np.abs(sf.variation_oracle(model, family, 1.0, 1e-3, e).states - J)))
            for e in (8e-3, 4e-3, 2e-3, 1e-3)]
    assert min(mism) > 1e-9  # still above the roundoff floor
    ratios = [a / b for a, b in zip(mism, mism[1:])]
    verdict(acceptance_log, 8, "convergence", [
        ("rk4_min_ratio", rk4, 14.0, "min"),
        ("s_eps_ratio_min", min(ratios), (3.8, 4.2), "band"),
        ("s_eps_ratio_max", max(ratios), (3.8, 4.2), "band"),
    ])


def test_criterion_9_determinism(tmp_path, capsys, acceptance_log):
    reports = []
    for _ in range(2):
        code = run(["verify", "--suite", "all", "--seed", "42"])
        reports.append(capsys.readouterr().out)
    csvs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        run(["jacobi", "--model", "sphere", "--x0", "0.2,-0.1", "--v0", "0.4,0.3", "--J0", "0.3,-0.2",
             "--nablaJ0", "0.1,0.5", "--t-max", "0.5", "--h", "0.001", "--out", str(out)])
        csvs.append(out.read_bytes())
    capsys.readouterr()
    verdict(acceptance_log, 9, "determinism", [
        ("verify_exit", float(code), 0.0, "max"),
        ("report_diff", float(reports[0] != reports[1]), 0.0, "max"),
        ("csv_diff", float(csvs[0] != csvs[1]), 0.0, "max"),
    ])


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
