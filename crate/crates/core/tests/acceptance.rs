//! Acceptance run: one line per criterion, tolerances pinned below.
//!
//! Criterion 9 contains one known red (the `thm33` limit scan at its default
//! point); the run reports it as FAIL, checks that it fails in the diagnosed
//! way, and only exits nonzero on unexpected failures.

use std::process::Command;
use std::time::{Duration, Instant};

use qconfluent::classical_limit::{
    e_q_scan, gamma_q_scan, limit_scan_thm33, limit_scan_zhang, theta_ratio_limit_scan,
    LimitScanConfig,
};
use qconfluent::cli::IDENTITIES;
use qconfluent::connection::{
    c_mu, c_mu_lambda, chge_residual, connection_matrix, s_mu, verify_zhang, AnnulusSampler,
    ConnectionContext,
};
use qconfluent::qcore::{theta, QParam, SpiralSet};
use qconfluent::qseries::{u2_solution, v_power_solution, FormalSeries};
use qconfluent::report::Record;
use qconfluent::resummation::{
    borel_laplace_roundtrip_check, con2_borel_series, con2_series, f20, f21_quadrature,
    f21_residue_sum, g_closed_form, qborel_minus, residue_at_spiral_pole, residue_quadrature_check,
    shifted_poch_identity_check, ContourSpec,
};
use qconfluent::Complex;

type C = Complex<f64>;

const QS: [f64; 3] = [0.3, 0.5, 0.7];
const ALPHA: f64 = 0.3;
const BETA: f64 = 0.7;
const LAMBDA: f64 = 1.1;
const MU: f64 = 1.3;

const TOL_THETA: f64 = 1e-12;
const TOL_RESIDUAL: f64 = 1e-10;
const TOL_THM29: f64 = 1e-9;
const TOL_ZHANG: f64 = 1e-8;
const TOL_ROWS: f64 = 1e-8;
const TOL_ELLIPTIC: f64 = 1e-10;
const TOL_MU: f64 = 1e-9;
const TOL_ROUNDTRIP: f64 = 1e-10;
/// Coefficients reach `q^{-55}`, so "exact after rounding" is measured
/// relative to the coefficient.
const TOL_OPERATIONAL: f64 = 1e-14;
const TOL_RESIDUE: f64 = 1e-9;
const TOL_SHIFT: f64 = 1e-12;
const TOL_G_EQUATION: f64 = 1e-12;
const TOL_G_TAYLOR: f64 = 1e-11;
const STOKES_MIN_GAP: f64 = 1e-6;
const TOL_SCAN_TERMINAL: f64 = 0.05;

fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

fn rel(x: C, y: C) -> f64 {
    (x - y).norm() / x.norm().max(y.norm()).max(1e-300)
}

fn qp(q: f64) -> QParam<f64> {
    QParam::real(q).unwrap()
}

fn ctx(q: f64) -> ConnectionContext<f64> {
    let p = qp(q);
    ConnectionContext::new(
        p.pow(c(ALPHA, 0.0)),
        p.pow(c(BETA, 0.0)),
        c(LAMBDA, 0.0),
        c(MU, 0.0),
        p,
    )
    .unwrap()
}

fn sample(p: &QParam<f64>, excl: &SpiralSet<f64>, n: usize, shifts: usize) -> Vec<C> {
    AnnulusSampler {
        shifts,
        ..AnnulusSampler::default()
    }
    .points(p, excl, n)
}

/// `(a;q)_∞` as a plain running product.
fn naive_poch(a: C, q: f64) -> C {
    let mut acc = c(1.0, 0.0);
    let mut t = a;
    while t.norm() > 1e-18 {
        acc *= c(1.0, 0.0) - t;
        t *= q;
    }
    acc
}

struct Outcome {
    pass: bool,
    known_red: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome {
            pass,
            known_red: false,
            detail,
        }
    }
}

/// Tracks the worst value of a metric and whether any instance broke its bound.
#[derive(Default)]
struct Worst {
    max: f64,
    bad: usize,
    n: usize,
}

impl Worst {
    fn push(&mut self, v: f64, tol: f64) {
        self.n += 1;
        if !(v <= tol) {
            self.bad += 1;
        }
        if v > self.max || v.is_nan() {
            self.max = v;
        }
    }

    fn ok(&self) -> bool {
        self.bad == 0 && self.n > 0
    }

    fn show(&self, name: &str) -> String {
        format!(
            "{name} worst {:.2e} over {} ({} over tol)",
            self.max, self.n, self.bad
        )
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let t = Instant::now();
    let mut o = f();
    let dt = t.elapsed();
    o.detail = format!("{}; {:.2?} (limit {:?})", o.detail, dt, limit);
    if dt > limit {
        o.pass = false;
    }
    o
}

fn criterion_1() -> Outcome {
    let (mut tp, mut inv) = (Worst::default(), Worst::default());
    for q in QS {
        let p = qp(q);
        let excl = SpiralSet::new(p.guard()).with(c(-1.0, 0.0), "[-1;q]");
        for x in sample(&p, &excl, 100, 0) {
            let t = theta(&p, x).unwrap();
            let prod = naive_poch(c(q, 0.0), q) * naive_poch(-x, q) * naive_poch(-c(q, 0.0) / x, q);
            tp.push(rel(t, prod), TOL_THETA);
            inv.push(rel(t, x * theta(&p, x.inv()).unwrap()), TOL_THETA);
        }
    }
    Outcome::new(
        tp.ok() && inv.ok(),
        format!("{}; {}", tp.show("triple product"), inv.show("inversion")),
    )
}

fn criterion_2() -> Outcome {
    let mut w = Worst::default();
    for q in QS {
        let cx = ctx(q);
        let (a, b, p) = (cx.a(), cx.b(), *cx.qp());
        for x in sample(&p, cx.exclusions(), 50, 2) {
            let r = [
                chge_residual(|y| u2_solution(a, b, &p, y), &cx, x),
                chge_residual(|y| v_power_solution(a, b, &p, y), &cx, x),
                chge_residual(|y| v_power_solution(b, a, &p, y), &cx, x),
                chge_residual(|y| s_mu(&cx, false, y), &cx, x),
                chge_residual(|y| s_mu(&cx, true, y), &cx, x),
            ];
            for v in r {
                w.push(v.unwrap_or(f64::NAN), TOL_RESIDUAL);
            }
        }
    }
    Outcome::new(w.ok(), w.show("residual (u2, v1, v2, S_ab, S_ba)"))
}

fn criterion_3() -> Outcome {
    let (mut main, mut quad) = (Worst::default(), Worst::default());
    for q in QS {
        let cx = ctx(q);
        let (a, b, p) = (cx.a(), cx.b(), *cx.qp());
        let contour = ContourSpec::for_g(a, b, &p);
        for x in sample(&p, cx.exclusions(), 30, 0) {
            let closed = u2_solution(a, b, &p, x).unwrap();
            let residues = f21_residue_sum(a, b, &p, x).unwrap();
            let integral = f21_quadrature(a, b, &p, &contour, x).unwrap();
            main.push(rel(closed, residues), TOL_THM29);
            quad.push(
                rel(integral, closed).max(rel(integral, residues)),
                TOL_THM29,
            );
        }
    }
    Outcome::new(
        main.ok() && quad.ok(),
        format!(
            "{}; {}",
            main.show("closed vs residues"),
            quad.show("quadrature vs both")
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut w = Worst::default();
    for q in QS {
        let cx = ctx(q);
        for x in sample(cx.qp(), cx.exclusions(), 20, 0) {
            w.push(verify_zhang(&cx, x).unwrap().rel_diff, TOL_ZHANG);
        }
    }
    Outcome::new(w.ok(), w.show("f20 vs theta-weighted sum"))
}

fn criterion_5() -> Outcome {
    let (mut rows, mut ell, mut mu) = (Worst::default(), Worst::default(), Worst::default());
    for q in QS {
        let cx = ctx(q);
        let scaled = cx.with_mu(cx.mu() * 0.9).unwrap();
        let mut excl = cx.exclusions().clone();
        for s in scaled.exclusions().spirals() {
            excl.push(s.anchor, s.label.clone());
        }
        let p = *cx.qp();
        for x in sample(&p, &excl, 30, 1) {
            let m = connection_matrix(&cx, x).unwrap();
            rows.push(m.row1.rel_diff.max(m.row2.rel_diff), TOL_ROWS);
            let qx = p.q() * x;
            for swap in [false, true] {
                ell.push(
                    rel(
                        c_mu_lambda(&cx, swap, qx).unwrap(),
                        c_mu_lambda(&cx, swap, x).unwrap(),
                    ),
                    TOL_ELLIPTIC,
                );
                ell.push(
                    rel(c_mu(&cx, swap, qx).unwrap(), c_mu(&cx, swap, x).unwrap()),
                    TOL_ELLIPTIC,
                );
            }
            let m2 = connection_matrix(&scaled, x).unwrap();
            for i in 0..2 {
                mu.push(rel(m2.row_value(i), m.row_value(i)), TOL_MU);
            }
        }
    }
    Outcome::new(
        rows.ok() && ell.ok() && mu.ok(),
        format!(
            "{}; {}; {}",
            rows.show("rows"),
            ell.show("q-ellipticity"),
            mu.show("mu-invariance")
        ),
    )
}

fn halton(mut i: u64, base: u64) -> f64 {
    let (mut f, mut r) = (1.0, 0.0);
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

fn criterion_6() -> Outcome {
    let mut trip = Worst::default();
    let mut ops = Worst::default();
    let (mut res, mut shift) = (Worst::default(), Worst::default());
    for q in QS {
        let p = qp(q);
        let (a, b) = (p.pow(c(ALPHA, 0.0)), p.pow(c(BETA, 0.0)));
        // Borel/Laplace round trip: polynomial, q-geometric with closed-form image, con2.
        let plain = ContourSpec::new(0.1, 64).unwrap();
        let poly = FormalSeries::from_real(&[1.0, 2.0, -1.0, 0.5]);
        let k: f64 = 0.8;
        let geo = FormalSeries::new(
            (0..60)
                .map(|n: i64| p.powi(n * (n - 1) / 2) * k.powi(n as i32))
                .collect(),
        );
        let geo_img = qborel_minus(&geo, &p)
            .with_closed_form(move |xi| Ok(c(1.0, 0.0) / (c(1.0, 0.0) - xi * k)));
        let con2 = con2_series(a, b, &p, 60);
        let pc = p;
        let con2_img =
            qborel_minus(&con2, &p).with_closed_form(move |xi| g_closed_form(a, b, &pc, xi));
        for x in [c(0.3, 0.0), c(0.4, 0.2), c(-0.6, 0.0)] {
            for r in [
                borel_laplace_roundtrip_check(&poly, None, &plain, &p, x),
                borel_laplace_roundtrip_check(&geo, Some(&geo_img), &plain, &p, x),
                borel_laplace_roundtrip_check(
                    &con2,
                    Some(&con2_img),
                    &ContourSpec::for_g(a, b, &p),
                    &p,
                    x,
                ),
            ] {
                trip.push(r.unwrap().rel_diff, TOL_ROUNDTRIP);
            }
        }
        // Operational relation against the coefficient formula written out here.
        let tri = |n: i64| p.powi(n).powf(-((n - 1) as f64) / 2.0);
        for m in 0..=4usize {
            for l in 0..=4i64 {
                let seed = (5 * m as u64 + l as u64) * 8;
                let f: Vec<C> = (0..8)
                    .map(|n| {
                        c(
                            2.0 * halton(seed + n + 1, 5) - 1.0,
                            2.0 * halton(seed + n + 1, 7) - 1.0,
                        )
                    })
                    .collect();
                let shifted: Vec<C> = (0..m)
                    .map(|_| c(0.0, 0.0))
                    .chain(f.iter().enumerate().map(|(n, &v)| v * p.powi(l * n as i64)))
                    .collect();
                let lhs = qborel_minus(&FormalSeries::new(shifted), &p);
                let mi = m as i64;
                for (n, &v) in f.iter().enumerate() {
                    let n = n as i64;
                    let want = p.powi(-(mi * (mi - 1) / 2)) * p.powi((l - mi) * n) * v * tri(n);
                    let got = lhs.series().coeff((n + mi) as usize);
                    ops.push(rel(got, want), TOL_OPERATIONAL);
                }
            }
        }
        // Spiral residues: closed form against an independent product, then quadrature.
        let lambda = c(LAMBDA, 0.0);
        let qq = naive_poch(c(q, 0.0), q);
        for k in 0..=5usize {
            let mut qk = c(1.0, 0.0);
            for j in 1..=k {
                qk *= 1.0 - q.powi(j as i32);
            }
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            let oracle = c(sign * q.powf((k * (k + 1)) as f64 / 2.0), 0.0) / (qk * qq);
            let closed = residue_at_spiral_pole(lambda, k, &p).unwrap();
            res.push(rel(closed, oracle), TOL_RESIDUE);
            res.push(
                residue_quadrature_check(lambda, k, &p).unwrap().rel_diff,
                TOL_RESIDUE,
            );
            shift.push(
                shifted_poch_identity_check(lambda, k, &p).unwrap().rel_diff,
                TOL_SHIFT,
            );
        }
    }
    Outcome::new(
        trip.ok() && ops.ok() && res.ok() && shift.ok(),
        format!(
            "{}; {}; {}; {}",
            trip.show("round trip"),
            ops.show("operational relation"),
            res.show("spiral residues"),
            shift.show("shifted Pochhammer")
        ),
    )
}

/// Taylor coefficients of `g` by Cauchy products of Euler's expansions.
fn g_taylor_oracle(a: C, b: C, q: f64, n_max: usize) -> Vec<C> {
    let euler = |z: C, inverse: bool| -> Vec<C> {
        let mut out = Vec::new();
        let mut poch = 1.0;
        for n in 0..=n_max {
            if n > 0 {
                poch *= 1.0 - q.powi(n as i32);
            }
            let v = z.powi(n as i32) / poch;
            out.push(if inverse {
                v
            } else {
                v * q.powf((n * n.saturating_sub(1)) as f64 / 2.0)
                    * if n % 2 == 1 { -1.0 } else { 1.0 }
            });
        }
        out
    };
    let mul = |u: &[C], v: &[C]| -> Vec<C> {
        (0..=n_max)
            .map(|n| (0..=n).map(|k| u[k] * v[n - k]).sum())
            .collect()
    };
    let qc = c(q, 0.0);
    let num = euler(-qc * qc, false);
    mul(&mul(&num, &euler(-qc * a, true)), &euler(-qc * b, true))
}

fn criterion_7() -> Outcome {
    let (mut eq, mut taylor) = (Worst::default(), Worst::default());
    for q in QS {
        let p = qp(q);
        let (a, b) = (p.pow(c(ALPHA, 0.0)), p.pow(c(BETA, 0.0)));
        let qc = p.q();
        let excl = SpiralSet::new(p.guard())
            .with(-c(1.0, 0.0) / (qc * a), "[-1/(qa);q]")
            .with(-c(1.0, 0.0) / (qc * b), "[-1/(qb);q]");
        let one = c(1.0, 0.0);
        for xi in sample(&p, &excl, 100, 1) {
            let lhs = g_closed_form(a, b, &p, qc * xi).unwrap() * (one + qc * qc * xi);
            let rhs =
                (one + a * qc * xi) * (one + b * qc * xi) * g_closed_form(a, b, &p, xi).unwrap();
            eq.push(rel(lhs, rhs), TOL_G_EQUATION);
        }
        let oracle = g_taylor_oracle(a, b, q, 40);
        let borel = con2_borel_series(a, b, &p, 40);
        for (n, &o) in oracle.iter().enumerate() {
            taylor.push(rel(borel.coeff(n), o), TOL_G_TAYLOR);
        }
    }
    Outcome::new(
        eq.ok() && taylor.ok(),
        format!(
            "{}; {}",
            eq.show("functional equation"),
            taylor.show("Taylor vs B^- con2")
        ),
    )
}

fn criterion_8() -> Outcome {
    let q = 0.5;
    let p = qp(q);
    let (a, b) = (p.pow(c(ALPHA, 0.0)), p.pow(c(BETA, 0.0)));
    let x = c(3.0, 1.0);
    let (l1, l2) = (c(LAMBDA, 0.0), c(-LAMBDA, 0.0));
    let f1 = f20(a, b, l1, &p, x).unwrap();
    let f2 = f20(a, b, l2, &p, x).unwrap();
    let gap = rel(f1, f2);
    let res = |l: C| {
        let cx = ConnectionContext::new(a, b, l, c(MU, 0.0), p).unwrap();
        chge_residual(|y| f20(a, b, l, &p, y), &cx, x).unwrap()
    };
    let (r1, r2) = (res(l1), res(l2));
    Outcome::new(
        gap > STOKES_MIN_GAP && r1 <= TOL_RESIDUAL && r2 <= TOL_RESIDUAL,
        format!(
            "f20 gap between lambda = +-1.1 at x = 3+i: {gap:.3e}; residuals {r1:.1e}, {r2:.1e}"
        ),
    )
}

fn criterion_9() -> Outcome {
    let cfg = LimitScanConfig::<f64>::default().with_tolerance(TOL_SCAN_TERMINAL);
    let tables = [
        gamma_q_scan(c(0.5, 0.0), &cfg).unwrap(),
        e_q_scan(c(1.0, 0.0), &cfg).unwrap(),
        theta_ratio_limit_scan(c(0.3, 0.0), c(2.0, 0.0), &cfg).unwrap(),
        limit_scan_zhang(&cfg).unwrap(),
    ];
    let mut parts: Vec<String> = tables
        .iter()
        .map(|t| {
            format!(
                "{} {:.2e} {}",
                t.id,
                t.terminal_rel_diff,
                if t.pass { "ok" } else { "RED" }
            )
        })
        .collect();
    let others = tables.iter().all(|t| t.pass);
    let s = limit_scan_thm33(&cfg.clone().with_z(c(-0.04, 0.0))).unwrap();
    parts.push(format!(
        "thm33 terminal {:.3} / {:.3} (decreasing: {}/{}), consistency {:.1e}",
        s.connection.terminal_rel_diff,
        s.asymptotic.terminal_rel_diff,
        s.connection.strictly_decreasing,
        s.asymptotic.strictly_decreasing,
        s.consistency.rel_diff
    ));
    // Diagnosed red: monotone approach, both classical sides consistent,
    // but the q-side still a factor of a few away at q = 0.99.
    let diagnosed = s.connection.strictly_decreasing
        && s.asymptotic.strictly_decreasing
        && s.consistency.pass
        && !s.connection.pass;
    let pass = others && s.pass();
    Outcome {
        pass,
        known_red: others && !pass && diagnosed,
        detail: parts.join("; "),
    }
}

fn cli(args: &[&str]) -> (Vec<u8>, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_qconfluent"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.stdout, out.status.code().unwrap_or(-1))
}

fn criterion_10() -> Outcome {
    let mut problems = Vec::new();
    let mut runs = 0;
    let mut check = |args: &[&str], want: i32, problems: &mut Vec<String>| -> Vec<u8> {
        let (a, code) = cli(args);
        let (b, _) = cli(args);
        runs += 2;
        if a != b {
            problems.push(format!("{args:?}: output differs between runs"));
        }
        if code != want {
            problems.push(format!("{args:?}: exit {code}, expected {want}"));
        }
        a
    };
    for id in IDENTITIES {
        let out = check(&["--command", "verify", "--identity", id], 0, &mut problems);
        for line in String::from_utf8_lossy(&out).lines() {
            match serde_json::from_str::<Record>(line) {
                Ok(rec) => {
                    if serde_json::to_string(&rec).unwrap() != line {
                        problems.push(format!("{id}: JSON does not round-trip"));
                        break;
                    }
                }
                Err(e) => {
                    problems.push(format!("{id}: unparsable record: {e}"));
                    break;
                }
            }
        }
    }
    for id in ["gamma_q", "e_q", "theta_ratio", "zhang"] {
        check(&["--command", "scan", "--identity", id], 0, &mut problems);
        check(
            &["--command", "scan", "--identity", id, "--format", "csv"],
            0,
            &mut problems,
        );
    }
    check(
        &["--command", "scan", "--identity", "thm33"],
        1,
        &mut problems,
    );
    for bad in [
        &[
            "--command",
            "eval",
            "--identity",
            "u2",
            "--param",
            "q=0.5",
            "--param",
            "a=0.8",
            "--param",
            "b=0.6",
            "--param",
            "x=0.25",
        ][..],
        &[
            "--command",
            "eval",
            "--identity",
            "f20",
            "--param",
            "q=0.5",
            "--param",
            "a=0.8",
            "--param",
            "b=0.6",
            "--param",
            "x=2",
        ],
        &[
            "--command",
            "scan",
            "--identity",
            "gamma_q",
            "--q-seq",
            "0.9,0.5,0.95",
        ],
        &["--command", "verify", "--identity", "no_such_identity"],
        &[
            "--command",
            "eval",
            "--identity",
            "theta",
            "--param",
            "q=1.5",
            "--param",
            "x=1",
        ],
    ] {
        check(bad, 2, &mut problems);
    }
    let out = check(
        &[
            "--command",
            "eval",
            "--identity",
            "theta",
            "--param",
            "q=0.5",
            "--param",
            "x=1",
        ],
        0,
        &mut problems,
    );
    match serde_json::from_slice::<Record>(&out) {
        Ok(Record::Value { value, .. })
            if value.to_complex() == theta(&qp(0.5), c(1.0, 0.0)).unwrap() => {}
        other => problems.push(format!("eval theta: unexpected {other:?}")),
    }
    let detail = if problems.is_empty() {
        format!(
            "{runs} runs: byte-identical reruns, exit codes 0/1/2 as contracted, JSON round-trips"
        )
    } else {
        problems.join("; ")
    };
    Outcome::new(problems.is_empty(), detail)
}

fn main() {
    let secs = Duration::from_secs;
    let criteria: [(&str, Duration, fn() -> Outcome); 10] = [
        ("triple product & inversion", secs(5), criterion_1),
        ("local solution residuals", secs(30), criterion_2),
        ("u2 = residue sum = contour integral", secs(120), criterion_3),
        ("Zhang connection formula", secs(120), criterion_4),
        ("connection matrix", secs(120), criterion_5),
        ("Borel/Laplace round trip, operational relation, residues", secs(30), criterion_6),
        ("g functional equation & Taylor", secs(30), criterion_7),
        ("q-Stokes witness", secs(30), criterion_8),
        ("q -> 1 limit scans", secs(180), criterion_9),
        ("CLI determinism, exits, JSON", secs(300), criterion_10),
    ];
    let mut unexpected = 0;
    let mut known = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let o = timed(limit, run);
        let verdict = if o.pass {
            "PASS"
        } else if o.known_red {
            known += 1;
            "FAIL (known, diagnosed)"
        } else {
            unexpected += 1;
            "FAIL"
        };
        println!("criterion {:>2} {verdict}: {name} -- {}", i + 1, o.detail);
    }
    println!(
        "acceptance: {} pass, {known} known red, {unexpected} unexpected failures",
        10 - known - unexpected
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
