use std::fs;

use qorbit_core::degen::{classify_su21, gram_scan, lattice_scan, LatticeChar};
use qorbit_core::funcx::{
    check_module_law_fx1, check_star_fx1, check_zeta_relations, phi_defect, xcd_algebra, XcdKind,
};
use qorbit_core::heis::{check_confluence, check_i0_invariance, check_pbw, check_relations, CheckReport};
use qorbit_core::moment::{
    casimir_image, casimir_on_pi, check_intertwining_pi, check_intertwining_w, verify_moment_relations, MomentReport,
    MomentTarget,
};
use qorbit_core::qfun::{
    expansion_check, kernel_gram, measure_check, strange_expansion_check, strange_measure_check, ExpansionReport,
    Kernel, MeasureReport, QSeriesContext,
};
use qorbit_core::series::{classify, gram_diagonal, integral_invariance, theorem_unitarizable};
use qorbit_core::{Complex64, FxLattice, MomentVariant, QorbitError, RepParams, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::output::{complex, real, Report, Status};
use crate::{
    Command, Cplx, DegenArgs, FuncxArgs, FuncxCheck, HeisArgs, HeisCheck, IntegralArgs, KernelArgs, KernelCheck,
    MomentArgs, MomentCheck, ParamArgs, SweepArgs, Target, Variant,
};

pub fn dispatch(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Heis(a) => heis(a),
        Command::Funcx(a) => funcx(a),
        Command::Moment(a) => moment(a),
        Command::Classify(a) => classify_cmd(a),
        Command::Sweep(a) => sweep(a),
        Command::Degen(a) => degen(a),
        Command::Kernel(a) => kernel(a),
        Command::Integral(a) => integral(a),
    }
}

fn params_of<T: Serialize>(args: &T) -> Map<String, Value> {
    match serde_json::to_value(args) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    }
}

fn rep_params(q: f64, c0: Cplx, d0: Option<Cplx>, nu0: f64) -> Result<RepParams> {
    if c0.0.norm() == 0.0 {
        return Err(QorbitError::Parameter("c0 must be nonzero".into()));
    }
    let d0 = d0.map_or(c0.0.inv(), |d| d.0);
    RepParams::new(q, c0.0, d0, nu0)
}

fn variant(v: Variant) -> MomentVariant {
    match v {
        Variant::Calibrated => MomentVariant::Calibrated,
        Variant::Literal => MomentVariant::Literal,
    }
}

fn heis(a: &HeisArgs) -> Result<Report> {
    let r: CheckReport = match a.check {
        HeisCheck::Relations => check_relations(a.n, a.degree)?,
        HeisCheck::Confluence => check_confluence(a.n, a.degree),
        HeisCheck::Pbw => check_pbw(a.n, a.degree)?,
        HeisCheck::I0 => check_i0_invariance(a.n),
    };
    let mut rep = Report::new("heis", params_of(a));
    rep.detail("check", r.check.clone()).detail("n", r.n).detail("degree", r.degree);
    rep.check(r.counterexample);
    Ok(rep)
}

fn funcx(a: &FuncxArgs) -> Result<Report> {
    let mut rep = Report::new("funcx", params_of(a));
    rep.detail("n", a.n);
    if let (Some(c0), Some(d0)) = (a.c0, a.d0) {
        let kind = match xcd_algebra(c0.0, d0.0)? {
            XcdKind::Real => "real",
            XcdKind::Complex => "complex",
        };
        rep.detail("xcd", kind);
    }
    let bad = match a.check {
        FuncxCheck::Phi => {
            let d = phi_defect()?;
            rep.detail("defect", d.to_string());
            (!d.is_zero()).then(|| format!("Phi defect {d}"))
        }
        FuncxCheck::Relations => {
            rep.detail("word_length", a.degree);
            let bad = check_zeta_relations(a.n, a.degree)?;
            match (bad, a.n) {
                (Some(b), _) => Some(b),
                (None, 1) => check_module_law_fx1()?,
                (None, _) => None,
            }
        }
        FuncxCheck::Star => {
            if a.n != 1 {
                return Err(QorbitError::UnsupportedRank { rank: a.n, what: "involution check".into() });
            }
            check_star_fx1()?
        }
    };
    rep.check(bad);
    Ok(rep)
}

fn moment_report(rep: &mut Report, r: &MomentReport) {
    rep.detail("tolerance", real(r.tolerance)).detail("max_residual", real(r.max_residual()));
    let table: Vec<Value> =
        r.residuals.iter().map(|(name, v)| json!({"relation": name, "residual": real(*v)})).collect();
    rep.detail("table", table);
    if !r.pass() {
        let (name, v) = r.worst().cloned().unwrap_or_default();
        rep.fail(format!("{name}: residual {v:e}"));
    }
}

fn moment(a: &MomentArgs) -> Result<Report> {
    let mut rep = Report::new("moment", params_of(a));
    let v = variant(a.variant);
    match (a.check, a.target) {
        (MomentCheck::Relations, Target::W) => {
            let r = verify_moment_relations(&MomentTarget::W { n: a.n, degree: a.degree, q0: a.q }, v, &[])?;
            moment_report(&mut rep, &r);
        }
        (MomentCheck::Relations, Target::Pi) => {
            let params = rep_params(a.q, a.c0, a.d0, a.nu0)?;
            let r = verify_moment_relations(&MomentTarget::Pi { params, truncation: a.degree }, v, &[])?;
            moment_report(&mut rep, &r);
        }
        (MomentCheck::Intertwining, Target::W) => {
            let r = check_intertwining_w(a.n, a.degree, a.q, v)?;
            moment_report(&mut rep, &r);
        }
        (MomentCheck::Intertwining, Target::Pi) => {
            let r = check_intertwining_pi(rep_params(a.q, a.c0, a.d0, a.nu0)?, a.degree, v)?;
            moment_report(&mut rep, &r);
        }
        (MomentCheck::Casimir, _) => {
            let params = rep_params(a.q, a.c0, a.d0, a.nu0)?;
            let r = casimir_on_pi(params, a.degree, v)?;
            let displayed = casimir_image(params.q, params.c0, params.d0)?;
            let gap = (r.value - displayed).norm() / displayed.norm().max(1.0);
            rep.detail("operator_value", complex(r.value))
                .detail("displayed_value", complex(displayed))
                .detail("scalar_residual", real(r.scalar_residual))
                .detail("formula_residual", real(gap));
            if r.scalar_residual > a.tol {
                rep.fail(format!("J(C_q) is not scalar: spread {:e}", r.scalar_residual));
            } else if gap > a.tol {
                rep.fail(format!("operator value {} differs from displayed formula {}", r.value, displayed));
            }
        }
    }
    Ok(rep)
}

fn label_json(p: &RepParams) -> Map<String, Value> {
    let lab = classify(p);
    let mut m = Map::new();
    m.insert("series".into(), lab.series.as_str().into());
    m.insert("l".into(), complex(lab.l));
    m.insert("epsilon".into(), real(lab.epsilon));
    m.insert("casimir".into(), complex(lab.casimir));
    m.insert("spectrum_kind".into(), lab.spectrum.as_str().into());
    m
}

fn classify_cmd(a: &ParamArgs) -> Result<Report> {
    let p = rep_params(a.q, a.c0, a.d0, a.nu0)?;
    let mut rep = Report::new("classify", params_of(a));
    rep.details = label_json(&p);
    let gram = gram_diagonal(&p, a.truncation);
    rep.detail("theorem_unitarizable", theorem_unitarizable(&p)).detail("gram_positive", gram.positive);
    Ok(rep)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Axis {
    List(Vec<f64>),
    Range { start: f64, end: f64, count: usize },
}

impl Axis {
    fn values(&self) -> Vec<f64> {
        match self {
            Axis::List(v) => v.clone(),
            Axis::Range { start, end, count } => crate::Range { start: *start, end: *end, count: *count }.values(),
        }
    }
}

#[derive(Deserialize)]
struct Grid {
    q: f64,
    c0: Axis,
    nu0: Axis,
    truncation: Option<usize>,
}

fn sweep(a: &SweepArgs) -> Result<Report> {
    let (q, c0s, nu0s, trunc) = match &a.grid {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| QorbitError::Parameter(format!("{}: {e}", path.display())))?;
            let g: Grid = serde_json::from_str(&text).map_err(|e| QorbitError::Parameter(format!("grid: {e}")))?;
            (g.q, g.c0.values(), g.nu0.values(), g.truncation.unwrap_or(a.truncation))
        }
        None => (a.q, a.c0_range.values(), a.nu0_range.values(), a.truncation),
    };
    let points: Vec<(f64, f64)> = c0s.iter().flat_map(|&c| nu0s.iter().map(move |&n| (c, n))).collect();
    let rows: Vec<(Value, bool)> = points
        .par_iter()
        .map(|&(c0, nu0)| {
            let p = RepParams::real(q, c0, nu0)?;
            let th = theorem_unitarizable(&p);
            let gram = gram_diagonal(&p, trunc).positive;
            let lab = classify(&p);
            let row = json!({
                "c0": real(c0),
                "nu0": real(nu0),
                "series": lab.series.as_str(),
                "spectrum_kind": lab.spectrum.as_str(),
                "theorem_unitarizable": th,
                "gram_positive": gram,
                "agree": th == gram,
            });
            Ok((row, th == gram))
        })
        .collect::<Result<_>>()?;
    let mut rep = Report::new("sweep", params_of(a));
    let disagreements = rows.iter().filter(|r| !r.1).count();
    rep.detail("q", real(q)).detail("points", rows.len()).detail("disagreements", disagreements);
    if let Some((row, _)) = rows.iter().find(|r| !r.1) {
        rep.fail(format!(
            "Gram positivity and the spectral theorem disagree at c0 = {}, nu0 = {}",
            row["c0"], row["nu0"]
        ));
    }
    rep.detail("table", rows.into_iter().map(|r| r.0).collect::<Vec<_>>());
    Ok(rep)
}

fn degen(a: &DegenArgs) -> Result<Report> {
    let ch = LatticeChar::su21(a.q, a.c0, a.d0, a.lambda1, a.lambda2)?;
    let case = classify_su21(a.q, a.c0, a.d0, [a.lambda1, a.lambda2]);
    let scan = lattice_scan(&ch, a.bound);
    let gram = gram_scan(&ch, a.bound, a.max_points)?;
    let mut rep = Report::new("degen", params_of(a));
    let walls: Vec<Value> =
        scan.walls.iter().map(|w| json!({"point": w.point, "index": w.index, "annihilator": w.annihilator})).collect();
    rep.detail("case", case.as_str())
        .detail("region_counts", serde_json::to_value(&scan.region_counts).unwrap_or(Value::Null))
        .detail("truncation_walls", walls)
        .detail("points", scan.points.len())
        .detail("violations", scan.violations.len())
        .detail("hit_bound", scan.hit_bound)
        .detail("gram_min_eigenvalue", real(gram.min_eigenvalue))
        .detail("gram_positive", gram.positive)
        .detail("conditions_hold", gram.conditions_hold)
        .detail("disagreements", gram.disagreements);
    if !gram.agrees() {
        rep.fail(format!(
            "Gram positivity {} but positivity conditions {} ({} pointwise disagreements)",
            gram.positive, gram.conditions_hold, gram.disagreements
        ));
    } else if scan.walls.iter().any(|w| w.point.iter().all(|&k| k == 0)) {
        rep.status = Status::Boundary;
    }
    Ok(rep)
}

fn kernel_of(a: &KernelArgs) -> Result<Kernel> {
    match (a.l, a.alpha) {
        (Some(l), None) => Ok(Kernel::Plus { l }),
        (None, Some(alpha)) => Ok(Kernel::Strange { alpha, eps: a.eps }),
        _ => Err(QorbitError::Parameter("give exactly one of --l or --alpha".into())),
    }
}

fn expansion_rows(r: &ExpansionReport, first: i64) -> Vec<Value> {
    r.numeric
        .iter()
        .zip(&r.closed)
        .enumerate()
        .map(|(i, (n, c))| {
            json!({"k": first + i as i64, "numeric": real(*n), "closed": real(*c), "residual": real((n - c).abs() / c.abs().max(1.0))})
        })
        .collect()
}

fn measure_rows(r: &MeasureReport) -> Vec<Value> {
    r.degrees
        .iter()
        .zip(&r.moments)
        .zip(&r.coefficients)
        .zip(&r.normalized)
        .map(|(((k, m), c), v)| json!({"k": k, "moment": real(*m), "coefficient": real(*c), "normalized": real(*v)}))
        .collect()
}

fn random_points(kernel: Kernel, q: f64, count: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let (lo, hi) = match kernel {
        Kernel::Plus { .. } => (0.0, 0.95),
        Kernel::Strange { alpha, .. } => {
            let inner = q.powf(2.0 * alpha + 1.0);
            (inner + 0.05 * (1.0 - inner), 0.95)
        }
    };
    (0..count)
        .map(|_| Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect()
}

fn kernel(a: &KernelArgs) -> Result<Report> {
    let ctx = QSeriesContext::new(a.q)?;
    let k = kernel_of(a)?;
    let mut rep = Report::new("kernel", params_of(a));
    match a.check {
        KernelCheck::Expand => {
            let kmax = a.kmax.unwrap_or(20);
            let tol = a.tol.unwrap_or(1e-12);
            let (r, first) = match k {
                Kernel::Plus { l } => (expansion_check(&ctx, l, kmax)?, 0),
                Kernel::Strange { alpha, eps } => (strange_expansion_check(&ctx, alpha, eps, kmax)?, -(kmax as i64)),
            };
            rep.detail("max_residual", real(r.max_residual)).detail("table", expansion_rows(&r, first));
            if !(r.max_residual <= tol) {
                rep.fail(format!("Taylor coefficient residual {:e} exceeds {tol:e}", r.max_residual));
            }
        }
        KernelCheck::Psd => {
            let tol = a.tol.unwrap_or(1e-10);
            let sets: Vec<(usize, f64, f64)> = (0..a.sets)
                .into_par_iter()
                .map(|s| {
                    let mut rng = ChaCha8Rng::seed_from_u64(a.seed.wrapping_add(s as u64));
                    let pts = random_points(k, a.q, a.points, &mut rng);
                    kernel_gram(&ctx, k, &pts).map(|g| (s, g.min_eigenvalue, g.max_eigenvalue))
                })
                .collect::<Result<_>>()?;
            let worst = sets.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
            rep.detail("min_eigenvalue", real(worst)).detail(
                "table",
                sets.iter()
                    .map(|(s, lo, hi)| json!({"set": s, "min_eigenvalue": real(*lo), "max_eigenvalue": real(*hi)}))
                    .collect::<Vec<_>>(),
            );
            if let Some((s, lo, _)) = sets.iter().find(|s| s.1 < -tol) {
                rep.fail(format!("point set {s} has Gram eigenvalue {lo:e}"));
            }
        }
        KernelCheck::Reproduce => {
            let kmax = a.kmax.unwrap_or(10);
            let tol = a.tol.unwrap_or(1e-6);
            let r = match k {
                Kernel::Plus { l } => measure_check(&ctx, l, a.eps, kmax)?,
                Kernel::Strange { alpha, eps } => strange_measure_check(&ctx, alpha, eps, kmax)?,
            };
            rep.detail("atoms", r.atoms)
                .detail("converged", r.converged)
                .detail("orthogonality", real(r.orthogonality))
                .detail("reproducing", real(r.reproducing))
                .detail("max_residual", real(r.max_residual()))
                .detail("table", measure_rows(&r));
            if !r.pass(tol) {
                rep.fail(if r.converged {
                    format!("reproducing residual {:e} exceeds {tol:e}", r.max_residual())
                } else {
                    format!("radial sum did not converge; partial sums {:?}", r.partial_sums.last())
                });
            }
        }
    }
    Ok(rep)
}

pub fn random_lattice(p: &RepParams, support: i64, rng: &mut ChaCha8Rng) -> FxLattice {
    let mut f = FxLattice::new(p.q, p.c0, p.d0, p.nu0);
    for k in -2..=2 {
        for j in -support..=support {
            f.set(k, j, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        }
    }
    f
}

fn integral(a: &IntegralArgs) -> Result<Report> {
    let p = rep_params(a.q, a.c0, a.d0, a.nu0)?;
    let rows: Vec<(Complex64, [f64; 3])> = (0..a.samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed.wrapping_add(s as u64));
            let f = random_lattice(&p, a.support, &mut rng);
            let r = integral_invariance(&p, &f)?;
            Ok((r.integral, [r.residuals[0].1, r.residuals[1].1, r.residuals[2].1]))
        })
        .collect::<Result<_>>()?;
    let worst = rows.iter().flat_map(|r| r.1).fold(0.0, f64::max);
    let mut rep = Report::new("integral", params_of(a));
    rep.detail("series", classify(&p).series.as_str()).detail("max_residual", real(worst)).detail(
        "table",
        rows.iter()
            .enumerate()
            .map(|(s, (i, r))| {
                json!({"sample": s, "integral": complex(*i), "residual_E": real(r[0]), "residual_F": real(r[1]), "residual_K": real(r[2])})
            })
            .collect::<Vec<_>>(),
    );
    if let Some((s, _)) = rows.iter().enumerate().find(|(_, r)| r.1.iter().any(|v| !(*v <= a.tol))) {
        rep.fail(format!("sample {s} breaks invariance: residuals {:?}", rows[s].1));
    }
    Ok(rep)
}
