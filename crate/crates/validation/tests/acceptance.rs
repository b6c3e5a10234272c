//! Acceptance checks, one line per criterion. Pass criterion numbers as
//! arguments to run a subset, e.g.
//! `cargo test -p ncmusic-validation --test acceptance -- 1 3`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::Instant;

use ncmusic_bench::config::SweepConfig;
use ncmusic_bench::flops::{flop_model, FlopAlgorithm, GridPoints};
use ncmusic_bench::metrics::wrap_angle;
use ncmusic_bench::sweep::{run_sweep, write_report, SUMMARY_FILE, TRIALS_FILE};
use ncmusic_core::crb::{crb_nc, steering_derivatives, CrbInputs};
use ncmusic_core::linalg::{conj_transpose, eigh, CMatrix};
use ncmusic_core::music::*;
use ncmusic_core::qmatrix::qevd_self_conjugated;
use ncmusic_core::signal::*;
use ncmusic_core::{Algorithm, QMatrix, Quaternion};
use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn deg(x: f64) -> f64 {
    x.to_degrees()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn workers() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn random_complex(rows: usize, cols: usize, g: &mut impl Rng) -> CMatrix {
    Array2::from_shape_fn((rows, cols), |_| Complex64::new(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)))
}

fn random_qmatrix(rows: usize, cols: usize, g: &mut impl Rng) -> QMatrix {
    QMatrix {
        p1: random_complex(rows, cols, g),
        p2: random_complex(rows, cols, g),
    }
}

fn random_quaternion(g: &mut impl Rng) -> Quaternion {
    Quaternion::from_cartesian(std::array::from_fn(|_| g.gen_range(-2.0..2.0)))
}

fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn noise_free_scene(mx: usize) -> (ArrayConfig, Vec<SourceParams>, Covariances) {
    let cfg = ArrayConfig::half_wavelength(mx, mx).unwrap();
    let src = scenario_one();
    let cov = Covariances::analytic(&cfg, &src, 0.0, SignalKind::NonCircularBpsk).unwrap();
    (cfg, src, cov)
}

fn criterion_1() -> Outcome {
    let (cfg, src, cov) = noise_free_scene(8);
    let grid = GridSpec::default();
    let step = deg(grid.final_step);
    let mut worst_doa = 0.0f64;
    let mut worst_pol = [0.0f64; 3];
    for (ai, alg) in Algorithm::ALL.into_iter().enumerate() {
        let r = estimate_from_covariances(alg, &cov, &cfg, src.len(), &grid).map_err(|e| format!("{alg}: {e}"))?;
        let mut est = r.estimates.clone();
        est.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        for (e, s) in est.iter().zip(&src) {
            worst_doa = worst_doa.max(deg((e.theta - s.theta).abs())).max(deg((e.phi - s.phi).abs()));
            let pol = deg((e.gamma - s.gamma).abs()).max(deg(wrap_angle(e.eta - s.eta).abs()));
            worst_pol[ai] = worst_pol[ai].max(pol);
        }
    }
    let pol_step = deg(grid.pol_final_step);
    check(
        worst_doa <= step && worst_pol[0] <= pol_step && worst_pol[1] <= 1e-4 && worst_pol[2] <= 1e-4,
        format!(
            "max DOA error {worst_doa:.2e} deg (limit {step}); polarization QDR {:.2e} (limit {pol_step}), DR {:.2e}, QNC {:.2e} (limit 1e-4)",
            worst_pol[0], worst_pol[1], worst_pol[2]
        ),
    )
}

/// Long-vector spectrum for the test vector `[a; c·a]`, `c = ξ2/ξ1`.
fn normalized_lv(cfg: &ArrayConfig, noise: &CMatrix, theta: f64, phi: f64, gamma: f64, eta: f64) -> f64 {
    let xi = polarization_response(theta, phi, gamma, eta);
    spectrum_lv(cfg, theta, phi, gamma, eta, noise) / xi.xi1.norm_sqr()
}

/// Minimum over an 11×11 lattice on `[g0, g0+gs·10] × [e0, e0+es·10]`, with
/// the largest rise to a lattice neighbour of the minimizer.
fn lattice_min(f: &dyn Fn(f64, f64) -> f64, g0: f64, gs: f64, e0: f64, es: f64) -> (f64, f64, f64, f64) {
    let vals: Vec<Vec<f64>> =
        (0..11).map(|i| (0..11).map(|k| f((g0 + gs * i as f64).clamp(0.0, FRAC_PI_2), e0 + es * k as f64)).collect()).collect();
    let (mut bi, mut bk) = (0, 0);
    for i in 0..11 {
        for k in 0..11 {
            if vals[i][k] < vals[bi][bk] {
                (bi, bk) = (i, k);
            }
        }
    }
    let mut rise = 0.0f64;
    for di in -1i32..=1 {
        for dk in -1i32..=1 {
            let (i, k) = (bi as i32 + di, bk as i32 + dk);
            if (0..11).contains(&i) && (0..11).contains(&k) {
                rise = rise.max(vals[i as usize][k as usize] - vals[bi][bk]);
            }
        }
    }
    (vals[bi][bk], g0 + gs * bi as f64, e0 + es * bk as f64, rise)
}

/// `(γ, η)` of the polarization `U·[sin a·e^{ib}; cos a]` with `U` a fixed
/// rotation, so that the chart pole at `a = 90°` maps to `γ = 45°`.
fn rotated_chart(a: f64, b: f64) -> (f64, f64) {
    let p = [Complex64::from_polar(a.sin(), b), Complex64::new(a.cos(), 0.0)];
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let q = [(p[0] + p[1]) * r, (p[1] - p[0]) * r];
    (q[0].norm().atan2(q[1].norm()), (q[0].arg() - q[1].arg()).rem_euclid(TAU))
}

/// Nested 11×11 lattices around the running minimizer, each spanning two
/// steps of the previous one on either side.
fn zoom(f: &dyn Fn(f64, f64) -> f64, rotated: bool) -> f64 {
    let g = |a: f64, b: f64| {
        if rotated {
            let (gm, et) = rotated_chart(a, b);
            f(gm, et)
        } else {
            f(a, b)
        }
    };
    let (mut gs, mut es) = (FRAC_PI_2 / 10.0, TAU / 11.0);
    let (mut best, mut gb, mut eb, _) = lattice_min(&g, 0.0, gs, 0.0, es);
    for _ in 0..32 {
        gs *= 0.4;
        es *= 0.4;
        let r = lattice_min(&g, gb - 5.0 * gs, gs, eb - 5.0 * es, es);
        (best, gb, eb) = (r.0, r.1.clamp(0.0, FRAC_PI_2), r.2);
    }
    best
}

fn criterion_2() -> Outcome {
    let cfg = ArrayConfig::half_wavelength(5, 5).unwrap();
    let src = scenario_one();
    let data = synthesize_snapshots(&cfg, &src, 200, 5.0, 77, SignalKind::NonCircularBpsk).unwrap();
    let cov = Covariances::from_snapshots(&data).unwrap();
    let lv = noise_subspace_lv(&cov.lv, src.len(), &cfg).unwrap();
    let noise = lv.noise();
    let mut g = rng(2);
    let (mut below, mut within, mut zoomed, mut skipped) = (0, 0, 0, 0);
    let mut worst_zoom = 0.0f64;
    let points = 200;
    for _ in 0..points {
        let theta = (g.gen_range(0..1800) as f64 * 0.1).to_radians();
        let phi = (0.5 + g.gen_range(0..895) as f64 * 0.1).to_radians();
        let Some(dr) = spectrum_dr_doa(theta, phi, &lv) else {
            skipped += 1;
            continue;
        };
        let f = |gm: f64, et: f64| normalized_lv(&cfg, &noise, theta, phi, gm, et);
        let (gs, es) = (FRAC_PI_2 / 10.0, TAU / 11.0);
        let (lat, _, _, rise) = lattice_min(&f, 0.0, gs, 0.0, es);
        if dr <= lat + 1e-9 {
            below += 1;
        }
        if lat - dr <= rise {
            within += 1;
        }
        let best = zoom(&f, false).min(zoom(&f, true));
        let gap = (best - dr).abs() / (1.0 + dr);
        worst_zoom = worst_zoom.max(gap);
        if gap <= 1e-6 {
            zoomed += 1;
        }
    }
    let evaluated = points - skipped;
    check(
        below == evaluated && within == evaluated && zoomed == evaluated && evaluated > 0,
        format!(
            "{evaluated} points ({skipped} degenerate): {below} below every lattice value, {within} within lattice discretization, {zoomed} agree after zooming (worst {worst_zoom:.1e})"
        ),
    )
}

fn criterion_3() -> Outcome {
    let (cfg, src, cov) = noise_free_scene(8);
    let nc = noise_subspace_nc(&cov.nc, src.len(), &cfg).unwrap();
    let at_truth = src.iter().map(|s| spectrum_qnc_doa(s.theta, s.phi, &nc)).fold(0.0f64, f64::max);
    let mut g = rng(3);
    let mut off_min = f64::INFINITY;
    let mut count = 0;
    while count < 200 {
        let theta = g.gen_range(0.0..PI);
        let phi = g.gen_range(0.5f64.to_radians()..FRAC_PI_2);
        if src.iter().any(|s| deg(theta - s.theta).hypot(deg(phi - s.phi)) < 2.0) {
            continue;
        }
        off_min = off_min.min(spectrum_qnc_doa(theta, phi, &nc));
        count += 1;
    }
    check(
        at_truth <= 1e-8 && off_min >= 1e-3,
        format!("max at true DOAs {at_truth:.2e} (limit 1e-8); min over 200 off-source points {off_min:.3e} (limit 1e-3)"),
    )
}

fn doa_sweep(seed: u64, algorithms: Vec<Algorithm>, arrays: Vec<ArrayConfig>, snr: f64, trials: usize, final_step: f64, crb: bool) -> SweepConfig {
    SweepConfig {
        seed,
        trials,
        workers: workers(),
        algorithms,
        arrays,
        snr_db: vec![snr],
        snapshots: vec![200],
        signal: SignalKind::NonCircularBpsk,
        crb,
        output_dir: None,
        grid: GridSpec::default().with_final_step_deg(final_step),
        sources: scenario_one(),
    }
}

fn criterion_4() -> Outcome {
    let arrays = vec![ArrayConfig::half_wavelength(5, 5).unwrap(), ArrayConfig::half_wavelength(8, 8).unwrap()];
    let algs = Algorithm::ALL.to_vec();
    // mean[array][alg][θ|φ]
    let mut mean = [[[0.0f64; 2]; 3]; 2];
    let seeds = [1u64 << 20, 2 << 20, 3 << 20];
    for &seed in &seeds {
        let cfg = doa_sweep(seed, algs.clone(), arrays.clone(), 0.0, 50, 0.01, false);
        let report = run_sweep(&cfg, cfg.workers).map_err(|e| e.to_string())?;
        for r in &report.records {
            let a = usize::from(r.mx == 8);
            let k = algs.iter().position(|x| x.name() == r.algorithm).unwrap();
            mean[a][k][0] += r.rmse_theta / seeds.len() as f64;
            mean[a][k][1] += r.rmse_phi / seeds.len() as f64;
        }
    }
    let (qdr, dr, qnc) = (0, 1, 2);
    let mut ok = true;
    let mut detail = String::new();
    for (p, name) in ["theta", "phi"].iter().enumerate() {
        for k in 0..3 {
            ok &= mean[1][k][p] < mean[0][k][p];
        }
        ok &= mean[1][qnc][p] <= mean[1][dr][p] && mean[1][dr][p] <= mean[1][qdr][p];
        detail += &format!(
            "{name} M=25 QDR {:.4} DR {:.4} QNC {:.4}, M=64 QDR {:.4} DR {:.4} QNC {:.4}; ",
            mean[0][qdr][p], mean[0][dr][p], mean[0][qnc][p], mean[1][qdr][p], mean[1][dr][p], mean[1][qnc][p]
        );
    }
    check(ok, format!("mean RMSE (deg) over 3 sweeps: {}", detail.trim_end_matches("; ")))
}

fn random_source(g: &mut impl Rng) -> SourceParams {
    SourceParams::from_degrees(g.gen_range(5.0..175.0), g.gen_range(5.0..85.0), g.gen_range(5.0..85.0), g.gen_range(5.0..355.0))
}

fn derivative_check(g: &mut impl Rng) -> f64 {
    let cfg = ArrayConfig::half_wavelength(g.gen_range(2..7), g.gen_range(2..7)).unwrap();
    let l = g.gen_range(1..4);
    let src: Vec<_> = (0..l).map(|_| random_source(g)).collect();
    let d = steering_derivatives(&cfg, &src);
    let h = 1e-6;
    let mut err = 0.0f64;
    let mut norm = 0.0f64;
    for p in 0..4 {
        for k in 0..l {
            let shifted = |delta: f64| {
                let mut s = src.clone();
                let field = match p {
                    0 => &mut s[k].theta,
                    1 => &mut s[k].phi,
                    2 => &mut s[k].gamma,
                    _ => &mut s[k].eta,
                };
                *field += delta;
                manifold_lv(&cfg, &s)
            };
            let (plus, minus) = (shifted(h), shifted(-h));
            for i in 0..d.nrows() {
                let fd = (plus[[i, k]] - minus[[i, k]]) / (2.0 * h);
                err += (d[[i, p * l + k]] - fd).norm_sqr();
                norm += d[[i, p * l + k]].norm_sqr();
            }
        }
    }
    (err / norm).sqrt()
}

fn criterion_5() -> Outcome {
    let array = ArrayConfig::half_wavelength(8, 8).unwrap();
    let cfg = doa_sweep(5 << 20, vec![Algorithm::Qnc], vec![array], 20.0, 100, 0.001, false);
    let report = run_sweep(&cfg, cfg.workers).map_err(|e| e.to_string())?;
    let src = &cfg.sources;
    let nv = noise_variance(src, 20.0).unwrap();
    let bound = crb_nc(&CrbInputs::from_scene(&array, src, cfg.signal, nv, 200)).map_err(|e| e.to_string())?;

    let mut sum = vec![[0.0f64; 4]; src.len()];
    let mut used = vec![0usize; src.len()];
    for row in report.trials.iter().filter(|r| r.matched) {
        let k = row.source_idx;
        let errs = [
            row.theta_est.unwrap() - row.theta_true,
            row.phi_est.unwrap() - row.phi_true,
            row.gamma_est.unwrap() - row.gamma_true,
            deg(wrap_angle((row.eta_est.unwrap() - row.eta_true).to_radians())),
        ];
        for p in 0..4 {
            sum[k][p] += errs[p] * errs[p];
        }
        used[k] += 1;
    }
    let names = ["theta", "phi", "gamma", "eta"];
    let mut rmse_ok = true;
    let mut detail = String::new();
    for p in 0..4 {
        let sd = bound.std_devs(p);
        for k in 0..src.len() {
            let rmse = (sum[k][p] / used[k] as f64).sqrt();
            let crb = deg(sd[k]);
            let pass = rmse >= 0.95 * crb;
            rmse_ok &= pass;
            detail += &format!("{}[{k}] {:.4}/{:.4}{} ", names[p], rmse, crb, if pass { "" } else { "!" });
        }
    }

    let mut g = rng(5);
    let mut psd_ok = true;
    for _ in 0..20 {
        let cfg = ArrayConfig::half_wavelength(g.gen_range(3..7), g.gen_range(3..7)).unwrap();
        let src: Vec<_> = (0..g.gen_range(1..4)).map(|_| random_source(&mut g)).collect();
        let Ok(b) = crb_nc(&CrbInputs::from_scene(&cfg, &src, SignalKind::NonCircularBpsk, g.gen_range(0.05..1.0), 100)) else {
            continue;
        };
        let c = &b.covariance;
        let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let asym = (c - &c.t()).iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let min_eig = *eigh(&c.mapv(|x| Complex64::new(x, 0.0))).unwrap().values.last().unwrap();
        psd_ok &= asym <= 1e-12 * scale && min_eig >= -1e-12 * scale;
    }
    let worst_fd = (0..20).map(|_| derivative_check(&mut g)).fold(0.0f64, f64::max);
    let fd_ok = worst_fd <= 1e-6;
    check(
        rmse_ok && psd_ok && fd_ok,
        format!(
            "RMSE/sqrt(CRB) deg ('!' below 95%): {}; bound symmetric PSD on 20 scenarios: {}; steering derivatives vs finite differences worst {worst_fd:.1e} (limit 1e-6)",
            detail.trim_end(),
            if psd_ok { "yes" } else { "no" }
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut g = rng(6);
    let mut failures = Vec::new();
    let mut checks = 0usize;
    for _ in 0..3000 {
        let (a, b) = (random_quaternion(&mut g), random_quaternion(&mut g));
        let ab = a * b;
        if (ab.modulus() - a.modulus() * b.modulus()).abs() > 1e-12 * (1.0 + ab.modulus()) {
            failures.push("modulus");
        }
        if ab.conj().abs_diff(b.conj() * a.conj()) > 1e-12 * (1.0 + ab.modulus()) {
            failures.push("conjugate");
        }
        checks += 2;
    }
    for _ in 0..2000 {
        let (r, k, c) = (g.gen_range(1..5), g.gen_range(1..5), g.gen_range(1..5));
        let (a, b) = (random_qmatrix(r, k, &mut g), random_qmatrix(k, c, &mut g));
        if max_diff(&a.mul(&b).unwrap().to_adjoint(), &a.to_adjoint().dot(&b.to_adjoint())) > 1e-12 {
            failures.push("adjoint");
        }
        checks += 1;
    }
    for _ in 0..2000 {
        let n = g.gen_range(1..7);
        let h = random_qmatrix(n, n, &mut g);
        let b = h.mul(&h.conj_transpose()).unwrap();
        let e = qevd_self_conjugated(&b).unwrap();
        let mut lam = QMatrix::zeros(n, n);
        for (i, &v) in e.values.iter().enumerate() {
            lam.set(i, i, Quaternion::from_complex(Complex64::new(v, 0.0)));
        }
        let rec = e.vectors.mul(&lam).unwrap().mul(&e.vectors.conj_transpose()).unwrap();
        if rec.sub(&b).frobenius() > 1e-10 * b.frobenius() {
            failures.push("reconstruction");
        }
        // Real spectrum: the adjoint is Hermitian and its eigenvalues pair up
        // onto the quaternion eigenvalues.
        let chi = b.to_adjoint();
        let hv = eigh(&chi).unwrap().values;
        let scale = b.frobenius();
        let paired = (0..n).all(|i| (hv[2 * i] - e.values[i]).abs() <= 1e-9 * scale && (hv[2 * i + 1] - e.values[i]).abs() <= 1e-9 * scale);
        if max_diff(&chi, &conj_transpose(&chi)) > 1e-12 * scale || !paired {
            failures.push("real eigenvalues");
        }
        checks += 2;
    }
    failures.dedup();
    check(failures.is_empty(), format!("{checks} randomized checks, failing kinds: {failures:?}"))
}

/// Hand-expanded monomial forms of the four operation counts.
fn expanded(alg: FlopAlgorithm, m: i128, l: i128, n: i128, j: [i128; 4]) -> i128 {
    let jj = j[0] * j[1];
    let kk = j[2] * j[3];
    let m2 = m * m;
    match alg {
        FlopAlgorithm::Lv => {
            4 * jj * kk * m2 - 2 * jj * kk * m * l + 2 * jj * kk * m - jj * kk * l + 4 * m2 * n + 4 * m2 * l + 8 * m2
        }
        FlopAlgorithm::Qdr => {
            2 * jj * m2 - 2 * jj * m * l + 2 * jj * m - 2 * jj * l + 4 * kk * l * m2 - 2 * kk * m * l * l + 2 * kk * l * m
                - kk * l * l
                + 8 * m2 * n
                + 8 * m2 * l
                + 16 * m2
        }
        FlopAlgorithm::Qnc => {
            8 * jj * m2 - 4 * jj * m * l + 12 * jj * m - 6 * jj * l + 20 * m2 * l + 40 * m2 + 8 * m2 * n
        }
        FlopAlgorithm::Dr => 8 * jj * m2 - 4 * jj * m * l + 6 * jj * m - 3 * jj * l + 4 * m2 * n + 4 * m2 * l + 8 * m2,
    }
}

fn criterion_7() -> Outcome {
    let mut g = rng(7);
    let mut mismatches = 0;
    for _ in 0..50 {
        let m = g.gen_range(2..2000u64);
        let l = g.gen_range(1..m);
        let n = g.gen_range(1..5000u64);
        let j = GridPoints {
            j1: g.gen_range(1..4000),
            j2: g.gen_range(1..4000),
            j3: g.gen_range(1..4000),
            j4: g.gen_range(1..15000),
        };
        for alg in FlopAlgorithm::ALL {
            let ours = flop_model(alg, m, l, n, j).unwrap() as i128;
            let want = expanded(alg, m as i128, l as i128, n as i128, [j.j1, j.j2, j.j3, j.j4].map(i128::from));
            if ours != want {
                mismatches += 1;
            }
        }
    }
    let j = GridPoints::default();
    let lead = 8.0 * 1e8 * (j.j1 * j.j2) as f64;
    let ratio = |alg| flop_model(alg, 10_000, 3, 200, j).unwrap() as f64 / lead;
    let (rq, rd) = (ratio(FlopAlgorithm::Qnc), ratio(FlopAlgorithm::Dr));
    let wide = GridPoints { j3: 3000, j4: 3000, ..j };
    let lv_dr = flop_model(FlopAlgorithm::Lv, 64, 3, 200, wide).unwrap() as f64 / flop_model(FlopAlgorithm::Dr, 64, 3, 200, wide).unwrap() as f64;
    check(
        mismatches == 0 && (rq - 1.0).abs() <= 0.02 && (rd - 1.0).abs() <= 0.02 && lv_dr > 1e3,
        format!("{mismatches} mismatches over 200 evaluations; QNC/8M²J1J2 {rq:.5}, DR/8M²J1J2 {rd:.5} at M=10^4; LV/DR {lv_dr:.2e}"),
    )
}

fn criterion_8() -> Outcome {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../bench/fixtures/sweep_small.toml");
    let cfg = SweepConfig::load(&path).map_err(|e| e.to_string())?;
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for (dir, w) in dirs.iter().zip([1, 8]) {
        let report = run_sweep(&cfg, w).map_err(|e| e.to_string())?;
        write_report(&report, dir.path()).map_err(|e| e.to_string())?;
    }
    let mut same = true;
    let mut sizes = Vec::new();
    for name in [TRIALS_FILE, SUMMARY_FILE] {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(name)).unwrap();
        same &= a == b;
        sizes.push(format!("{name} {} bytes", a.len()));
    }
    check(same, format!("1 vs 8 workers byte-identical: {same} ({})", sizes.join(", ")))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("noise-free exact recovery", criterion_1),
        ("dimension-reduction equivalence", criterion_2),
        ("extended-model null", criterion_3),
        ("RMSE ordering and decrease with M", criterion_4),
        ("CRB validity", criterion_5),
        ("quaternion algebra", criterion_6),
        ("operation-count model", criterion_7),
        ("sweep determinism", criterion_8),
    ];
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let number = i + 1;
        if !wanted.is_empty() && !wanted.contains(&number) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".to_owned()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {number} ({name}): PASS [{secs:.1} s] {d}"),
            Err(d) => {
                println!("criterion {number} ({name}): FAIL [{secs:.1} s] {d}");
                failed.push(number);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
