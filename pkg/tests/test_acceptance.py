"""Acceptance criteria 1 to 9, each at its stated tolerance."""

import math
import os
import subprocess
import sys
import time


from critline import dirichlet as dch
from critline import epstein as ep
from critline.phase import VARIANTS, critical_point_scan, phase_audit
from critline.zeros import build_zero_list
from critline.zeta import big_f, functional_equation_residual, hadamard_zeta, zeta

ZETA_HALF_5I = complex(0.70181237116568663004, 0.23103800839141992679)
ZERO_1 = 14.134725141734693790
ZERO_100 = 236.52422966581620580


def test_criterion_1_functional_equations(record):
    start = time.perf_counter()
    z = max(functional_equation_residual(complex(k / 10, t)) for k in range(1, 10) for t in range(1, 31))
    lw = 0.0
    n_chars = 0
    for q in range(1, 21):
        for chi in dch.primitive_characters(q):
            if chi.q == 1:
                continue
            n_chars += 1
            for sg in (0.2, 0.5, 0.8):
                for t in (0.0, 1.0, 5.0):
                    lw = max(lw, dch.functional_residual_L(complex(sg, t), chi))
    forms = [(1, 0, 1), (1, 1, 6)] + [(f.a, f.b, f.c) for f in ep.reduced_forms(56)]
    ew = 0.0
    for f in forms:
        q = ep.QuadraticForm(*f)
        for sg in (-0.5, 0.2, 0.5, 0.8, 1.5):
            for t in (0.5, 2.0, 10.0):
                ew = max(ew, ep.functional_residual_epstein(complex(sg, t), q))
    elapsed = time.perf_counter() - start
    ok = z < 1e-8 and lw < 1e-8 and ew < 1e-8 and elapsed < 60 and n_chars > 0
    record(1, ok, f"zeta {z:.1e}, L over {n_chars} primitive chars {lw:.1e}, Epstein over {len(forms)} forms {ew:.1e}, {elapsed:.1f} s")
    assert ok


def test_criterion_2_realness(record):
    fz = 0.0
    for k in range(0, 501):
        f = big_f(0.1 * k)
        fz = max(fz, abs(f.imag) / abs(f.value))
    fl = 0.0
    for q in range(3, 13):
        for chi in dch.primitive_characters(q):
            for k in range(0, 41):
                f = dch.f_real_chi(0.5 * k, chi)
                fl = max(fl, abs(f.imag) / abs(f.value))
    ok = fz < 1e-9 and fl < 1e-8
    record(2, ok, f"F(t) t<=50 {fz:.1e}, F(t, chi) q<=12 t<=20 {fl:.1e}")
    assert ok


def test_criterion_3_zeros_and_hadamard(record, zeros200):
    fine = build_zero_list(100, tol=1e-10, step=0.025)
    coarse = zeros200.ordinates[:100]
    drift = max(abs(a - b) for a, b in zip(coarse, fine.ordinates))
    refined = max(zeros200.tolerances[:100]) <= 1e-9
    known = abs(coarse[0] - ZERO_1) < 1e-9 and abs(coarse[99] - ZERO_100) < 1e-9
    zeros_ok = len(fine) == 100 and drift < 1e-9 and refined and known

    rel = {}
    trend_ok = True
    for label, s, ref in (("zeta(2)", 2.0, math.pi**2 / 6), ("zeta(1/2+5i)", 0.5 + 5j, ZETA_HALF_5I)):
        errs = [abs(hadamard_zeta(s, zeros200, n).value / ref - 1) for n in (25, 50, 100, 200)]
        rel[label] = errs[-1]
        trend_ok &= all(b < a for a, b in zip(errs, errs[1:]))
    had_ok = all(v < 0.01 for v in rel.values())
    ok = zeros_ok and had_ok and trend_ok
    detail = (
        f"100 zeros stable to {drift:.1e} under step halving; Hadamard n=200 relative error "
        + ", ".join(f"{k} {v:.4f}" for k, v in rel.items())
        + f" (bound 0.01); trend monotone {trend_ok}"
    )
    record(3, ok, detail)
    assert zeros_ok and trend_ok
    assert had_ok, detail


def test_criterion_4_phase_ledger(record):
    rows, summ = phase_audit()
    cells = {(r["sigma"], r["tau"]) for r in rows}
    per_cell = len(rows) == 400 * 20 * 2 and len(cells) == 400
    has_both = {r["variant"] for r in rows} == set(VARIANTS)
    has_direct = all(not math.isnan(r["direct_arg"]) for r in rows)
    t0_max = max(summ[v]["max_abs_term_t0"] for v in VARIANTS)
    zero_max = max(summ[v]["max_abs_term_at_zero"] for v in VARIANTS)
    ok = per_cell and has_both and has_direct and zero_max == 0.0 and t0_max < 1e-12
    agree = ", ".join(f"{v} matches {summ[v]['matching_rows']}/{len(rows) // 2}" for v in VARIANTS)
    record(4, ok, f"{len(rows)} rows, term(0) max {zero_max:.1e}, term(t0) max {t0_max:.1e}; reported: {agree}")
    assert ok


def test_criterion_5_gradients(record):
    reps = [critical_point_scan("D")] + [critical_point_scan("z", variant=v) for v in VARIANTS]
    worst = max(r.max_fd_rel_err for r in reps)
    ok = worst < 1e-6
    record(5, ok, f"max FD vs analytic relative gap {worst:.1e} over D and z ({', '.join(VARIANTS)})")
    assert ok


def test_criterion_6_principal_identity(record):
    worst = 0.0
    printed = 0.0
    findings = 0
    for q in range(2, 51):
        for s in (2, 3, 0.5 + 2j):
            r = dch.principal_identity_audit(s, q)
            worst = max(worst, r["residual_euler"])
            printed = max(printed, r["residual_printed"])
            findings += r["finding"]
            assert "finding" in r and not math.isnan(r["residual_printed"])
    ok = worst < 1e-9
    record(6, ok, f"Euler-form residual {worst:.1e}; bracketed form max {printed:.2f} with {findings} flagged findings")
    assert ok


def test_criterion_7_epstein_counterexample(record):
    assert ep.class_number(56) == 4
    q = ep.QuadraticForm(3, 2, 5)
    assert q in ep.reduced_forms(56)
    region = ep.RectangleRegion(0.6, 1.0, 17.5, 20.0)
    a = ep.zero_search_rectangle(q, region, 0.05)
    b = ep.zero_search_rectangle(q, region, 0.025)
    control = ep.zero_search_rectangle(ep.QuadraticForm(1, 0, 1), region, 0.05)
    resid = max(a.residuals + b.residuals, default=math.inf)
    ok = (
        region.sigma_lo >= 0.55
        and a.winding >= 1
        and a.winding == b.winding
        and len(a.zeros) == a.winding
        and resid < 1e-9
        and control.winding == 0
    )
    zs = ", ".join(f"{z.real:.6f}{z.imag:+.6f}i" for z in a.zeros)
    record(7, ok, f"form {q}: winding {a.winding} / {b.winding} at step 0.05 / 0.025, zeros {zs}, max |Z| {resid:.1e}; (1,0,1) winding {control.winding}")
    assert ok


def test_criterion_8_cross_stack(record):
    chi4 = dch.enumerate_characters(4)[1]
    q = ep.QuadraticForm(1, 0, 1)
    fac = 0.0
    for s in (2.0, 0.5 + 5j, -1.5 + 3j):
        ref = 4 * zeta(s).value * dch.l_function(s, chi4).value
        fac = max(fac, abs(ep.epstein_continued(s, q).value - ref) / abs(ref))
    hz = 0.0
    for s in (2.0, 3.0, 0.5 + 2j, 0.3 + 7j, -0.5 + 3j):
        z = zeta(s).value
        hz = max(hz, abs(dch.hurwitz_zeta(s, 1.0).value - z) / max(abs(z), 1.0))
    ok = fac < 1e-9 and hz < 1e-11
    record(8, ok, f"Z_(1,0,1) vs 4 zeta L {fac:.1e}; hurwitz(s,1) vs zeta {hz:.1e}")
    assert ok


CLI_RUNS = [
    ("eval", "zeta", "2", "0.5+14.134725i", "-3.5+2i"),
    ("eval", "L", "0.5+5i", "--chi", "5,2", "--format", "json"),
    ("eval", "epstein", "0.8+18.81i", "--form", "3,2,5"),
    ("eval", "F", "0", "10"),
    ("zeros", "20"),
    ("characters", "12"),
    ("audit", "functional-zeta"),
    ("audit", "hadamard"),
    ("audit", "phase", "--no-gradients"),
    ("audit", "dirichlet"),
    ("audit", "principal-identity"),
    ("audit", "epstein", "--format", "json"),
]


def test_criterion_9_determinism(record, tmp_path, zeros200):
    zf = tmp_path / "zeros.txt"
    zeros200.write(zf)
    env = dict(os.environ, CRITLINE_ZEROS=str(zf))
    mismatched = []
    for k, args in enumerate(CLI_RUNS):
        outs = []
        for rep in range(2):
            path = tmp_path / f"r{k}_{rep}.out"
            r = subprocess.run([sys.executable, "-m", "critline", *args, "--out", str(path)], capture_output=True, env=env)
            assert r.returncode in (0, 4), (args, r.stderr)
            outs.append(path.read_bytes())
        if outs[0] != outs[1] or not outs[0]:
            mismatched.append(" ".join(args))
    r1 = subprocess.run([sys.executable, "-m", "critline", "eval", "zeta", "2"], capture_output=True)
    r2 = subprocess.run([sys.executable, "-m", "critline", "eval", "zeta", "2"], capture_output=True)
    same_stdout = r1.stdout == r2.stdout
    ok = not mismatched and same_stdout
    record(9, ok, f"{len(CLI_RUNS)} report configurations run twice, mismatches: {mismatched or 'none'}")
    assert ok
