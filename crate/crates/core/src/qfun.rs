//! q-Pochhammer symbols, Ramanujan's 1ψ1 and the reproducing kernels and
//! radial measures of the holomorphic realizations.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QorbitError, Result};

const INT_TOL: f64 = 1e-12;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn near_integer(x: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() <= INT_TOL).then_some(r as i64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QSeriesContext {
    pub q0: f64,
    pub tolerance: f64,
    pub max_terms: usize,
}

impl QSeriesContext {
    pub fn new(q0: f64) -> Result<Self> {
        Self::with_tolerance(q0, 1e-15, 20_000)
    }

    pub fn with_tolerance(q0: f64, tolerance: f64, max_terms: usize) -> Result<Self> {
        if !(q0 > 0.0 && q0 < 1.0) {
            return Err(QorbitError::Parameter(format!("q = {q0} must lie in (0, 1)")));
        }
        if !(tolerance > 0.0 && tolerance.is_finite()) {
            return Err(QorbitError::Parameter(format!("tolerance {tolerance} must be positive")));
        }
        if max_terms == 0 {
            return Err(QorbitError::Parameter("max_terms must be positive".into()));
        }
        Ok(QSeriesContext { q0, tolerance, max_terms })
    }

    /// The base q² used by every kernel.
    pub fn t(&self) -> f64 {
        self.q0 * self.q0
    }
}

/// Length of a q-Pochhammer symbol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PochOrder {
    Finite(i64),
    Infinite,
    /// (a;t)_α = (a;t)_∞ / (a t^α;t)_∞
    Shifted(Complex64),
}

/// A value together with a bound on its absolute error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Certified {
    pub value: Complex64,
    pub bound: f64,
    pub terms: usize,
}

fn check_base(t: Complex64) -> Result<()> {
    if !(t.norm() < 1.0) {
        return Err(QorbitError::Domain(format!("|t| = {} must be < 1", t.norm())));
    }
    Ok(())
}

fn finite_product(a: Complex64, t: Complex64, n: u64) -> Complex64 {
    let mut p = c(1.0);
    let mut tk = c(1.0);
    for _ in 0..n {
        p *= c(1.0) - a * tk;
        tk *= t;
    }
    p
}

/// (a;t)_∞ with relative error at most exp(|a||t|^K/(1−|t|)) − 1 after K factors.
fn infinite_product(ctx: &QSeriesContext, a: Complex64, t: Complex64) -> Result<(Complex64, f64, usize)> {
    let (an, tn) = (a.norm(), t.norm());
    let mut p = c(1.0);
    let mut tk = c(1.0);
    let mut tkn = 1.0;
    for k in 0..ctx.max_terms {
        let rel = (an * tkn / (1.0 - tn)).exp_m1();
        if rel <= ctx.tolerance || p == c(0.0) {
            return Ok((p, if p == c(0.0) { 0.0 } else { rel }, k));
        }
        p *= c(1.0) - a * tk;
        tk *= t;
        tkn *= tn;
    }
    Err(QorbitError::Convergence { side: "infinite product".into(), terms: ctx.max_terms })
}

pub fn qpochhammer_certified(ctx: &QSeriesContext, a: Complex64, t: Complex64, order: PochOrder) -> Result<Certified> {
    check_base(t)?;
    match order {
        PochOrder::Finite(n) if n >= 0 => {
            Ok(Certified { value: finite_product(a, t, n as u64), bound: 0.0, terms: n as usize })
        }
        PochOrder::Finite(n) => {
            let m = n.unsigned_abs();
            let den = finite_product(a * t.powi(n as i32), t, m);
            if den == c(0.0) {
                return Err(QorbitError::Pole { factor: format!("(a t^{n}; t)_{m}") });
            }
            Ok(Certified { value: den.inv(), bound: 0.0, terms: m as usize })
        }
        PochOrder::Infinite => {
            let (p, rel, k) = infinite_product(ctx, a, t)?;
            Ok(Certified { value: p, bound: rel * p.norm(), terms: k })
        }
        PochOrder::Shifted(alpha) => {
            if let Some(n) = (alpha.im.abs() <= INT_TOL).then(|| near_integer(alpha.re)).flatten() {
                return qpochhammer_certified(ctx, a, t, PochOrder::Finite(n));
            }
            let (num, e1, k1) = infinite_product(ctx, a, t)?;
            let (den, e2, k2) = infinite_product(ctx, a * t.powc(alpha), t)?;
            if den == c(0.0) || e2 >= 1.0 {
                return Err(QorbitError::Pole { factor: "(a t^alpha; t)_inf".into() });
            }
            let value = num / den;
            let rel = (1.0 + e1) / (1.0 - e2) - 1.0;
            Ok(Certified { value, bound: rel * value.norm(), terms: k1 + k2 })
        }
    }
}

pub fn qpochhammer(ctx: &QSeriesContext, a: Complex64, t: Complex64, order: PochOrder) -> Result<Complex64> {
    qpochhammer_certified(ctx, a, t, order).map(|r| r.value)
}

/// Bilateral sum split by side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiSum {
    pub value: Complex64,
    pub positive_terms: usize,
    pub negative_terms: usize,
    pub tail_bound: f64,
}

enum SideEnd {
    Exact,
    Bound(f64),
}

/// Σ_{k≥1} of a one-sided recurrence term_{k} = term_{k-1}·factor(k), with
/// `rho(k)` a certified bound on every later ratio once it drops below one.
fn one_side(
    ctx: &QSeriesContext,
    side: &str,
    mut factor: impl FnMut(usize) -> Result<Option<Complex64>>,
    mut rho: impl FnMut(usize) -> Option<f64>,
    scale: f64,
) -> Result<(Complex64, usize, SideEnd)> {
    let mut sum = c(0.0);
    let mut term = c(1.0);
    for k in 1..=ctx.max_terms {
        match factor(k)? {
            None => return Ok((sum, k - 1, SideEnd::Exact)),
            Some(f) => term *= f,
        }
        if !term.is_finite() {
            return Err(QorbitError::Convergence { side: side.into(), terms: k });
        }
        sum += term;
        if let Some(r) = rho(k).filter(|r| *r < 1.0) {
            let tail = term.norm() * r / (1.0 - r);
            if tail <= ctx.tolerance * (scale + sum.norm()) {
                return Ok((sum, k, SideEnd::Bound(tail)));
            }
        }
    }
    Err(QorbitError::Convergence { side: side.into(), terms: ctx.max_terms })
}

/// 1ψ1(a; b; t, x) = Σ_{k∈Z} (a;t)_k/(b;t)_k x^k.
pub fn ramanujan_psi_sum(
    ctx: &QSeriesContext,
    a: Complex64,
    b: Complex64,
    t: Complex64,
    x: Complex64,
) -> Result<PsiSum> {
    check_base(t)?;
    if x == c(0.0) {
        return Err(QorbitError::Domain("1psi1 needs x != 0".into()));
    }
    let (an, bn, tn, xn) = (a.norm(), b.norm(), t.norm(), x.norm());

    // term_k / term_{k-1} = x (1 − a t^{k−1}) / (1 − b t^{k−1})
    let mut tp = c(1.0);
    let pos_factor = |_k: usize| -> Result<Option<Complex64>> {
        let num = c(1.0) - a * tp;
        let den = c(1.0) - b * tp;
        tp *= t;
        if num == c(0.0) {
            return Ok(None);
        }
        if den == c(0.0) {
            return Err(QorbitError::Pole { factor: "(b; t)_k".into() });
        }
        Ok(Some(x * num / den))
    };
    let pos_rho = |k: usize| {
        let tk = tn.powi(k as i32);
        (bn * tk < 1.0).then(|| xn * (1.0 + an * tk) / (1.0 - bn * tk))
    };
    let (pos, np, pend) = one_side(ctx, "positive", pos_factor, pos_rho, 1.0)?;

    // term_{−j} / term_{−j+1} = (t^j − b) / ((t^j − a) x)
    let mut tj = c(1.0);
    let neg_factor = |_j: usize| -> Result<Option<Complex64>> {
        tj *= t;
        let num = tj - b;
        let den = (tj - a) * x;
        if num == c(0.0) {
            return Ok(None);
        }
        if den == c(0.0) {
            return Err(QorbitError::Pole { factor: "(a; t)_{-k}".into() });
        }
        Ok(Some(num / den))
    };
    let neg_rho = |j: usize| {
        let w = tn.powi(j as i32 + 1);
        (w < an).then(|| (bn + w) / ((an - w) * xn))
    };
    let scale = 1.0 + pos.norm();
    let (neg, nn, nend) = one_side(ctx, "negative", neg_factor, neg_rho, scale)?;

    let tail = [pend, nend]
        .iter()
        .map(|e| match e {
            SideEnd::Exact => 0.0,
            SideEnd::Bound(b) => *b,
        })
        .sum();
    Ok(PsiSum { value: c(1.0) + pos + neg, positive_terms: np, negative_terms: nn, tail_bound: tail })
}

pub fn ramanujan_psi(
    ctx: &QSeriesContext,
    a: Complex64,
    b: Complex64,
    t: Complex64,
    x: Complex64,
) -> Result<Complex64> {
    ramanujan_psi_sum(ctx, a, b, t, x).map(|s| s.value)
}

/// Ramanujan's product formula for 1ψ1, valid for |b/a| < |x| < 1.
pub fn ramanujan_psi_closed(
    ctx: &QSeriesContext,
    a: Complex64,
    b: Complex64,
    t: Complex64,
    x: Complex64,
) -> Result<Complex64> {
    let inf = |z: Complex64| qpochhammer(ctx, z, t, PochOrder::Infinite);
    let num = inf(t)? * inf(b / a)? * inf(a * x)? * inf(t / (a * x))?;
    let den = inf(b)? * inf(t / a)? * inf(x)? * inf(b / (a * x))?;
    if den == c(0.0) {
        return Err(QorbitError::Pole { factor: "1psi1 product denominator".into() });
    }
    Ok(num / den)
}

fn check_disc(z: Complex64, name: &str) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(QorbitError::Domain(format!("|{name}| = {} must be < 1", z.norm())));
    }
    Ok(())
}

fn check_spin(l: f64) -> Result<()> {
    if !(l <= -0.5 + INT_TOL) {
        return Err(QorbitError::Domain(format!("l = {l} must satisfy l <= -1/2")));
    }
    Ok(())
}

fn plus_at(ctx: &QSeriesContext, z: Complex64, l: f64) -> Result<Complex64> {
    let p = qpochhammer(ctx, z, c(ctx.t()), PochOrder::Shifted(c(-2.0 * l)))?;
    if p == c(0.0) {
        return Err(QorbitError::Pole { factor: "(z; q^2)_{-2l}".into() });
    }
    Ok(p.inv())
}

/// (Θ₊(λ), Θ₊(μ)) = 1/(λμ̄; q²)_{−2l}.
pub fn kernel_plus(ctx: &QSeriesContext, lambda: Complex64, mu: Complex64, l: f64) -> Result<Complex64> {
    check_spin(l)?;
    check_disc(lambda, "lambda")?;
    check_disc(mu, "mu")?;
    plus_at(ctx, lambda * mu.conj(), l)
}

/// (q^{−4l}; q²)_k / (q²; q²)_k
pub fn kernel_plus_coefficient(ctx: &QSeriesContext, l: f64, k: usize) -> Result<f64> {
    let t = c(ctx.t());
    let num = qpochhammer(ctx, c(ctx.q0.powf(-4.0 * l)), t, PochOrder::Finite(k as i64))?;
    let den = qpochhammer(ctx, t, t, PochOrder::Finite(k as i64))?;
    Ok((num / den).re)
}

/// Partial Taylor sum of 1/(z; q²)_{−2l}.
pub fn kernel_plus_series(ctx: &QSeriesContext, z: Complex64, l: f64, terms: usize) -> Result<Complex64> {
    let mut sum = c(0.0);
    let mut zk = c(1.0);
    for k in 0..terms {
        sum += zk * kernel_plus_coefficient(ctx, l, k)?;
        zk *= z;
    }
    Ok(sum)
}

/// Upper and lower parameters of the 1ψ1 in the strange kernel.
fn strange_ab(q: f64, alpha: f64, eps: f64) -> (Complex64, Complex64) {
    (c(q.powf(-2.0 * (alpha + eps))), c(q.powf(2.0 * (alpha + 1.0 - eps))))
}

fn check_strange(alpha: f64, eps: f64) -> Result<usize> {
    let n = near_integer(2.0 * alpha + 1.0).filter(|n| *n >= 1);
    let Some(n) = n else {
        return Err(QorbitError::Domain(format!("2 alpha + 1 = {} must be a positive integer", 2.0 * alpha + 1.0)));
    };
    if !(eps.abs() <= 0.5 + INT_TOL) {
        return Err(QorbitError::Domain(format!("|eps| = {} must be <= 1/2", eps.abs())));
    }
    Ok(n as usize)
}

/// (q^{2(α+1−ε)}; q²)_∞ / (q^{−2(α+ε)}; q²)_∞
pub fn strange_prefactor(ctx: &QSeriesContext, alpha: f64, eps: f64) -> Result<Complex64> {
    check_strange(alpha, eps)?;
    let (a, b) = strange_ab(ctx.q0, alpha, eps);
    let t = c(ctx.t());
    let den = qpochhammer(ctx, a, t, PochOrder::Infinite)?;
    if den.norm() <= 1e-300 || near_integer(alpha + eps).is_some() {
        return Err(QorbitError::Pole { factor: "(q^{-2(alpha+eps)}; q^2)_inf".into() });
    }
    Ok(qpochhammer(ctx, b, t, PochOrder::Infinite)? / den)
}

/// Laurent coefficient of λμ̄^k in the strange kernel, (b t^k; t)_∞ / (a t^k; t)_∞.
pub fn strange_coefficient(ctx: &QSeriesContext, alpha: f64, eps: f64, k: i64) -> Result<f64> {
    check_strange(alpha, eps)?;
    let (a, b) = strange_ab(ctx.q0, alpha, eps);
    let t = ctx.t();
    let tk = c(t.powi(k as i32));
    let den = qpochhammer(ctx, a * tk, c(t), PochOrder::Infinite)?;
    if near_integer(alpha + eps).is_some() {
        return Err(QorbitError::Pole { factor: "(q^{-2(alpha+eps)}; q^2)_inf".into() });
    }
    Ok((qpochhammer(ctx, b * tk, c(t), PochOrder::Infinite)? / den).re)
}

fn strange_at(ctx: &QSeriesContext, x: Complex64, alpha: f64, eps: f64, pre: Complex64) -> Result<Complex64> {
    let (a, b) = strange_ab(ctx.q0, alpha, eps);
    Ok(pre * ramanujan_psi(ctx, a, b, c(ctx.t()), x)?)
}

/// Kernel of the strange series realization on the annulus q^{2α+1} < |λ| < 1.
pub fn kernel_strange(
    ctx: &QSeriesContext,
    lambda: Complex64,
    mu: Complex64,
    alpha: f64,
    eps: f64,
) -> Result<Complex64> {
    let n = check_strange(alpha, eps)?;
    let inner = ctx.q0.powi(n as i32);
    for (z, name) in [(lambda, "lambda"), (mu, "mu")] {
        if !(z.norm() > inner && z.norm() < 1.0) {
            return Err(QorbitError::Domain(format!("|{name}| = {} outside the annulus ({inner}, 1)", z.norm())));
        }
    }
    let pre = strange_prefactor(ctx, alpha, eps)?;
    strange_at(ctx, lambda * mu.conj(), alpha, eps, pre)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Kernel {
    Plus { l: f64 },
    Strange { alpha: f64, eps: f64 },
}

impl Kernel {
    pub fn eval(&self, ctx: &QSeriesContext, lambda: Complex64, mu: Complex64) -> Result<Complex64> {
        match *self {
            Kernel::Plus { l } => kernel_plus(ctx, lambda, mu, l),
            Kernel::Strange { alpha, eps } => kernel_strange(ctx, lambda, mu, alpha, eps),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelGram {
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub hermitian_defect: f64,
}

/// Spectrum of the Gram matrix K(λ_i, λ_j).
pub fn kernel_gram(ctx: &QSeriesContext, kernel: Kernel, points: &[Complex64]) -> Result<KernelGram> {
    let n = points.len();
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for (i, &li) in points.iter().enumerate() {
        for (j, &lj) in points.iter().enumerate() {
            m[(i, j)] = kernel.eval(ctx, li, lj)?;
        }
    }
    let defect = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let h = (&m + m.adjoint()).map(|z| z * 0.5);
    let eig = h.symmetric_eigenvalues();
    Ok(KernelGram {
        min_eigenvalue: eig.iter().cloned().fold(f64::INFINITY, f64::min),
        max_eigenvalue: eig.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        hermitian_defect: defect,
    })
}

/// Taylor coefficients of 1/(z;q²)_{−2l} recovered by a discrete Cauchy
/// integral on |z| = radius, against the closed form.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionReport {
    pub numeric: Vec<f64>,
    pub closed: Vec<f64>,
    pub max_residual: f64,
}

pub fn expansion_check(ctx: &QSeriesContext, l: f64, kmax: usize) -> Result<ExpansionReport> {
    check_spin(l)?;
    let radius = 0.9;
    let m = 2048usize;
    let samples: Vec<(Complex64, Complex64)> = (0..m)
        .map(|s| {
            let w = Complex64::from_polar(1.0, 2.0 * PI * s as f64 / m as f64);
            plus_at(ctx, w * radius, l).map(|f| (w, f))
        })
        .collect::<Result<_>>()?;
    let mut numeric = Vec::with_capacity(kmax + 1);
    let mut closed = Vec::with_capacity(kmax + 1);
    let mut worst = 0.0f64;
    for k in 0..=kmax {
        let acc: Complex64 = samples.iter().map(|(w, f)| f * w.powi(-(k as i32))).sum();
        let a = (acc / m as f64).re / radius.powi(k as i32);
        let e = kernel_plus_coefficient(ctx, l, k)?;
        worst = worst.max((a - e).abs() / e.abs().max(1.0));
        numeric.push(a);
        closed.push(e);
    }
    Ok(ExpansionReport { numeric, closed, max_residual: worst })
}

/// Laurent coefficients k ∈ [−kmax, kmax] of the strange kernel in x = λμ̄,
/// read off on the circle |x| = q^{2α+1}, against (b t^k; t)_∞/(a t^k; t)_∞.
pub fn strange_expansion_check(ctx: &QSeriesContext, alpha: f64, eps: f64, kmax: usize) -> Result<ExpansionReport> {
    let n = check_strange(alpha, eps)?;
    let pre = strange_prefactor(ctx, alpha, eps)?;
    let m = 2048usize;
    let circle = |radius: f64| -> Result<Vec<(Complex64, Complex64)>> {
        (0..m)
            .map(|s| {
                let w = Complex64::from_polar(1.0, 2.0 * PI * s as f64 / m as f64);
                strange_at(ctx, w * radius, alpha, eps, pre).map(|f| (w, f))
            })
            .collect()
    };
    // k >= 0 from the outer circle, k < 0 from the inner one.
    let (r_out, r_in) = (ctx.q0.powf(n as f64 / 4.0), ctx.q0.powf(7.0 * n as f64 / 4.0));
    let (outer, inner) = (circle(r_out)?, circle(r_in)?);
    let mut numeric = Vec::with_capacity(2 * kmax + 1);
    let mut closed = Vec::with_capacity(2 * kmax + 1);
    let mut worst = 0.0f64;
    for k in -(kmax as i64)..=kmax as i64 {
        let (samples, radius) = if k >= 0 { (&outer, r_out) } else { (&inner, r_in) };
        let acc: Complex64 = samples.iter().map(|(w, f)| f * w.powi(-(k as i32))).sum();
        let a = (acc / m as f64).re / radius.powi(k as i32);
        let e = strange_coefficient(ctx, alpha, eps, k)?;
        worst = worst.max((a - e).abs() / e.abs().max(1.0));
        numeric.push(a);
        closed.push(e);
    }
    Ok(ExpansionReport { numeric, closed, max_residual: worst })
}

/// A circle |λ| = radius carrying total mass `weight`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub radius: f64,
    pub weight: f64,
}

/// Rotation invariant measures, with dλdλ̄ = 2r dr dθ.
#[derive(Clone, Debug, PartialEq)]
pub enum RadialMeasure {
    Atomic { atoms: Vec<Atom>, converged: bool },
    Flat,
}

impl RadialMeasure {
    /// ∫ |λ|^{2k} dν, k ∈ Z.
    pub fn moment(&self, k: i64) -> f64 {
        match self {
            RadialMeasure::Atomic { atoms, .. } => atoms.iter().map(|a| a.weight * a.radius.powi(2 * k as i32)).sum(),
            RadialMeasure::Flat => PI / (k as f64 + 1.0),
        }
    }

    pub fn atoms(&self) -> Option<&[Atom]> {
        match self {
            RadialMeasure::Atomic { atoms, .. } => Some(atoms),
            RadialMeasure::Flat => None,
        }
    }

    /// ∫ λ^j λ̄^k dν with the angle integrated by an `angular`-point rule.
    pub fn monomial(&self, j: i64, k: i64, angular: usize) -> f64 {
        let d = j - k;
        let ang: Complex64 = (0..angular)
            .map(|s| Complex64::from_polar(1.0, 2.0 * PI * (d * s as i64) as f64 / angular as f64))
            .sum::<Complex64>()
            / angular as f64;
        match self {
            RadialMeasure::Atomic { atoms, .. } => {
                atoms.iter().map(|a| a.weight * a.radius.powi((j + k) as i32)).sum::<f64>() * ang.re
            }
            RadialMeasure::Flat => 2.0 * PI / ((j + k) as f64 + 2.0) * ang.re,
        }
    }

    /// ∫ f dν for an atomic measure, angle by an `angular`-point rule.
    pub fn integrate(&self, angular: usize, mut f: impl FnMut(Complex64) -> Result<Complex64>) -> Result<Complex64> {
        let RadialMeasure::Atomic { atoms, .. } = self else {
            return Err(QorbitError::Unsupported("quadrature of the flat disc measure".into()));
        };
        let mut total = c(0.0);
        for a in atoms {
            let mut s = c(0.0);
            for m in 0..angular {
                s += f(Complex64::from_polar(a.radius, 2.0 * PI * m as f64 / angular as f64))?;
            }
            total += s * (a.weight / angular as f64);
        }
        Ok(total)
    }
}

/// The disc measure for T⁺_{l,ε}: atoms on |λ| = q^k for l < −1/2, flat for l = −1/2.
pub fn disc_measure(ctx: &QSeriesContext, l: f64) -> Result<RadialMeasure> {
    check_spin(l)?;
    if (l + 0.5).abs() <= INT_TOL {
        return Ok(RadialMeasure::Flat);
    }
    let q = ctx.q0;
    let t = c(ctx.t());
    let lead = 1.0 - q.powf(-2.0 * (2.0 * l - 1.0));
    let mut atoms = Vec::new();
    let mut total = 0.0;
    for k in 0..ctx.max_terms {
        let kf = k as f64;
        let num = qpochhammer(ctx, c(q.powf(2.0 * (kf + 1.0))), t, PochOrder::Infinite)?;
        let den = qpochhammer(ctx, c(q.powf(2.0 * (kf - 2.0 * l - 1.0))), t, PochOrder::Infinite)?;
        let w = lead * q.powf(2.0 * kf) * (num / den).re;
        atoms.push(Atom { radius: q.powi(k as i32), weight: w });
        total += w;
        if w.abs() <= ctx.tolerance * total.abs() {
            return Ok(RadialMeasure::Atomic { atoms, converged: true });
        }
    }
    Ok(RadialMeasure::Atomic { atoms, converged: false })
}

/// The annulus measure for the strange series: 2α+2 circles |λ| = q^k.
pub fn strange_measure(ctx: &QSeriesContext, alpha: f64, eps: f64) -> Result<RadialMeasure> {
    let n = check_strange(alpha, eps)?;
    let q = ctx.q0;
    let t = c(ctx.t());
    let top = c(q.powi(-2 * n as i32));
    let atoms = (0..=n)
        .map(|k| {
            let num = qpochhammer(ctx, top, t, PochOrder::Finite(k as i64))?;
            let den = qpochhammer(ctx, t, t, PochOrder::Finite(k as i64))?;
            let w = q.powf(2.0 * k as f64 * (alpha + 1.0 - eps)) * (num / den).re;
            Ok(Atom { radius: q.powi(k as i32), weight: w })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RadialMeasure::Atomic { atoms, converged: true })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureReport {
    pub atoms: Option<usize>,
    pub converged: bool,
    /// running sums of the atom weights
    pub partial_sums: Vec<f64>,
    /// monomial degrees checked
    pub degrees: Vec<i64>,
    pub moments: Vec<f64>,
    pub coefficients: Vec<f64>,
    /// c_k m_k / (c_0 m_0), identically 1 for a reproducing pair
    pub normalized: Vec<f64>,
    pub orthogonality: f64,
    /// max |∫ λ^k K(μ, λ) dν / ∫ K(μ, λ) dν − μ^k| over sample points μ
    pub reproducing: f64,
}

impl MeasureReport {
    pub fn max_residual(&self) -> f64 {
        let norm = self.normalized.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        norm.max(self.reproducing).max(self.orthogonality)
    }

    pub fn pass(&self, tol: f64) -> bool {
        self.converged && self.max_residual() <= tol
    }
}

const ANGULAR: usize = 512;

/// Largest off-diagonal ∫ λ^j λ̄^k dν relative to ∫ |λ|^{j+k} d|ν|.
fn orthogonality(measure: &RadialMeasure, degrees: &[i64]) -> f64 {
    let mut worst = 0.0f64;
    for &j in degrees {
        for &k in degrees {
            if j == k {
                continue;
            }
            let scale = match measure {
                RadialMeasure::Atomic { atoms, .. } => {
                    atoms.iter().map(|a| a.weight.abs() * a.radius.powi((j + k) as i32)).sum()
                }
                RadialMeasure::Flat => 2.0 * PI / ((j + k) as f64 + 2.0),
            };
            worst = worst.max(measure.monomial(j, k, ANGULAR).abs() / scale);
        }
    }
    worst
}

fn partial_sums(measure: &RadialMeasure) -> Vec<f64> {
    measure
        .atoms()
        .map(|a| {
            a.iter()
                .scan(0.0, |s, x| {
                    *s += x.weight;
                    Some(*s)
                })
                .collect()
        })
        .unwrap_or_default()
}

/// Integrates λ^k K(μ, λ) against the measure for every k at once.
fn reproduce(
    measure: &RadialMeasure,
    degrees: &[i64],
    mus: &[Complex64],
    mut kernel: impl FnMut(Complex64) -> Result<Complex64>,
) -> Result<f64> {
    let atoms =
        measure.atoms().ok_or_else(|| QorbitError::Unsupported("quadrature of the flat disc measure".into()))?;
    let mut worst = 0.0f64;
    for &mu in mus {
        let mut acc = vec![c(0.0); degrees.len()];
        let mut base = c(0.0);
        for atom in atoms {
            let w = atom.weight / ANGULAR as f64;
            for m in 0..ANGULAR {
                let lam = Complex64::from_polar(atom.radius, 2.0 * PI * m as f64 / ANGULAR as f64);
                let kv = kernel(mu * lam.conj())? * w;
                base += kv;
                for (slot, &k) in acc.iter_mut().zip(degrees) {
                    *slot += lam.powi(k as i32) * kv;
                }
            }
        }
        for (slot, &k) in acc.iter().zip(degrees) {
            let target = mu.powi(k as i32);
            worst = worst.max((slot / base - target).norm() / target.norm().max(1.0));
        }
    }
    Ok(worst)
}

/// Reproducing-property check of the disc measure against 1/(λμ̄; q²)_{−2l}
/// for monomials of degree 0..=n. `eps` only labels the representation.
pub fn measure_check(ctx: &QSeriesContext, l: f64, eps: f64, n: usize) -> Result<MeasureReport> {
    if !(eps.abs() <= 0.5 + INT_TOL) {
        return Err(QorbitError::Domain(format!("|eps| = {} must be <= 1/2", eps.abs())));
    }
    let measure = disc_measure(ctx, l)?;
    let degrees: Vec<i64> = (0..=n as i64).collect();
    let moments: Vec<f64> = degrees.iter().map(|&k| measure.moment(k)).collect();
    let coefficients =
        degrees.iter().map(|&k| kernel_plus_coefficient(ctx, l, k as usize)).collect::<Result<Vec<_>>>()?;
    let base = coefficients[0] * moments[0];
    let normalized: Vec<f64> = coefficients.iter().zip(&moments).map(|(c, m)| c * m / base).collect();
    let reproducing = match measure {
        RadialMeasure::Flat => {
            let mu = 0.6f64;
            normalized.iter().zip(&degrees).map(|(v, &k)| ((v - 1.0) * mu.powi(k as i32)).abs()).fold(0.0, f64::max)
        }
        RadialMeasure::Atomic { .. } => {
            let mus = [Complex64::new(0.3, 0.1), Complex64::from_polar(0.6, 2.0), Complex64::new(-0.05, -0.7)];
            reproduce(&measure, &degrees, &mus, |x| plus_at(ctx, x, l))?
        }
    };
    let (atoms, converged) = match &measure {
        RadialMeasure::Atomic { atoms, converged } => (Some(atoms.len()), *converged),
        RadialMeasure::Flat => (None, true),
    };
    Ok(MeasureReport {
        atoms,
        converged,
        partial_sums: partial_sums(&measure),
        orthogonality: orthogonality(&measure, &degrees),
        degrees,
        moments,
        coefficients,
        normalized,
        reproducing,
    })
}

/// Strange-series analogue for Laurent monomials of degree −n..=n.
pub fn strange_measure_check(ctx: &QSeriesContext, alpha: f64, eps: f64, n: usize) -> Result<MeasureReport> {
    let big_n = check_strange(alpha, eps)?;
    let measure = strange_measure(ctx, alpha, eps)?;
    let degrees: Vec<i64> = (-(n as i64)..=n as i64).collect();
    let moments: Vec<f64> = degrees.iter().map(|&k| measure.moment(k)).collect();
    let coefficients = degrees.iter().map(|&k| strange_coefficient(ctx, alpha, eps, k)).collect::<Result<Vec<_>>>()?;
    let zero = n;
    let base = coefficients[zero] * moments[zero];
    let normalized: Vec<f64> = coefficients.iter().zip(&moments).map(|(c, m)| c * m / base).collect();
    let pre = strange_prefactor(ctx, alpha, eps)?;
    let mid = ctx.q0.powf(big_n as f64 / 2.0);
    let mus = [
        Complex64::from_polar(mid, 0.4),
        Complex64::from_polar(mid * ctx.q0.powf(big_n as f64 / 5.0), -2.2),
        Complex64::from_polar(mid / ctx.q0.powf(big_n as f64 / 5.0), 3.0),
    ];
    let reproducing = reproduce(&measure, &degrees, &mus, |x| strange_at(ctx, x, alpha, eps, pre))?;
    Ok(MeasureReport {
        atoms: measure.atoms().map(|a| a.len()),
        converged: true,
        partial_sums: partial_sums(&measure),
        orthogonality: orthogonality(&measure, &degrees),
        degrees,
        moments,
        coefficients,
        normalized,
        reproducing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> QSeriesContext {
        QSeriesContext::new(0.5).unwrap()
    }

    #[test]
    fn pochhammer_examples() {
        let ctx = ctx();
        let t = c(0.25);
        assert_eq!(qpochhammer(&ctx, c(0.3), t, PochOrder::Finite(0)).unwrap(), c(1.0));
        assert_eq!(qpochhammer(&ctx, c(0.0), t, PochOrder::Infinite).unwrap(), c(1.0));
        let v = qpochhammer(&ctx, t, t, PochOrder::Finite(2)).unwrap();
        assert!((v.re - 0.703125).abs() < 1e-15);
        assert!(matches!(qpochhammer(&ctx, c(0.3), c(1.0), PochOrder::Infinite), Err(QorbitError::Domain(_))));
    }

    #[test]
    fn negative_order_inverts() {
        let ctx = ctx();
        let (a, t) = (Complex64::new(0.3, 0.2), c(0.25));
        let neg = qpochhammer(&ctx, a, t, PochOrder::Finite(-3)).unwrap();
        let pos = qpochhammer(&ctx, a * t.powi(-3), t, PochOrder::Finite(3)).unwrap();
        assert!((neg * pos - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn shifted_matches_finite_at_integers() {
        let ctx = ctx();
        let (a, t) = (c(0.7), c(0.25));
        let f = qpochhammer(&ctx, a, t, PochOrder::Finite(4)).unwrap();
        let inf = qpochhammer(&ctx, a, t, PochOrder::Infinite).unwrap();
        let tail = qpochhammer(&ctx, a * t.powi(4), t, PochOrder::Infinite).unwrap();
        assert!((f - inf / tail).norm() < 1e-14);
        let s = qpochhammer_certified(&ctx, a, t, PochOrder::Shifted(c(2.5))).unwrap();
        assert!(s.bound <= 1e-14);
    }

    #[test]
    fn psi_matches_product_formula() {
        let ctx = ctx();
        let t = c(0.25);
        let (a, b) = (Complex64::new(2.0, 0.3), c(0.1));
        let x = Complex64::from_polar(0.5, 0.7);
        let s = ramanujan_psi(&ctx, a, b, t, x).unwrap();
        let p = ramanujan_psi_closed(&ctx, a, b, t, x).unwrap();
        assert!((s - p).norm() < 1e-12 * p.norm());
    }

    #[test]
    fn psi_equal_parameters_rejected() {
        let ctx = ctx();
        let t = c(0.25);
        let a = c(0.4);
        assert!(matches!(ramanujan_psi(&ctx, a, a, t, c(1.5)), Err(QorbitError::Convergence { .. })));
        assert!(matches!(ramanujan_psi(&ctx, a, a, t, c(0.5)), Err(QorbitError::Convergence { .. })));
    }

    #[test]
    fn psi_divergence_names_side() {
        let ctx = ctx();
        let err = ramanujan_psi(&ctx, c(2.0), c(0.1), c(0.25), c(0.01)).unwrap_err();
        assert!(matches!(err, QorbitError::Convergence { ref side, .. } if side == "negative"), "{err:?}");
    }

    #[test]
    fn plus_kernel_basics() {
        let ctx = ctx();
        let mu = Complex64::new(0.2, -0.5);
        assert!((kernel_plus(&ctx, c(0.0), mu, -1.5).unwrap() - c(1.0)).norm() < 1e-15);
        assert!((kernel_plus_coefficient(&ctx, -0.5, 1).unwrap() - 1.0).abs() < 1e-15);
        let lam = Complex64::new(-0.4, 0.3);
        let k1 = kernel_plus(&ctx, lam, mu, -1.25).unwrap();
        let k2 = kernel_plus(&ctx, mu, lam, -1.25).unwrap();
        assert!((k1.conj() - k2).norm() < 1e-14);
        assert!(kernel_plus(&ctx, c(1.0), mu, -1.0).is_err());
        assert!(kernel_plus(&ctx, lam, mu, -0.25).is_err());
    }

    #[test]
    fn expansion_matches_coefficients() {
        let ctx = ctx();
        for l in [-0.5, -0.75, -1.0, -2.5] {
            let r = expansion_check(&ctx, l, 20).unwrap();
            assert!(r.max_residual < 1e-12, "l = {l}: {}", r.max_residual);
        }
    }

    #[test]
    fn strange_kernel_by_two_paths() {
        let ctx = ctx();
        let (alpha, eps) = (1.0, 0.2);
        let lam = Complex64::from_polar(0.7, 0.3);
        let mu = Complex64::from_polar(0.72, -1.1);
        let k = kernel_strange(&ctx, lam, mu, alpha, eps).unwrap();
        let x = lam * mu.conj();
        let direct: Complex64 =
            (-20..=60i64).map(|j| strange_coefficient(&ctx, alpha, eps, j).unwrap() * x.powi(j as i32)).sum();
        assert!((k - direct).norm() < 1e-10 * k.norm().max(1.0));
        let k2 = kernel_strange(&ctx, mu, lam, alpha, eps).unwrap();
        assert!((k.conj() - k2).norm() < 1e-12 * k.norm().max(1.0));
        assert!(kernel_strange(&ctx, c(0.1), mu, alpha, eps).is_err());
        assert!(kernel_strange(&ctx, lam, mu, 0.7, eps).is_err());
    }

    #[test]
    fn strange_expansion_matches_coefficients() {
        let ctx = QSeriesContext::new(0.6).unwrap();
        let r = strange_expansion_check(&ctx, 1.0, 0.2, 10).unwrap();
        assert_eq!(r.closed.len(), 21);
        assert!(r.max_residual < 1e-10, "{}", r.max_residual);
    }

    #[test]
    fn flat_moments() {
        let ctx = ctx();
        let m = disc_measure(&ctx, -0.5).unwrap();
        for k in 0..6 {
            assert!((m.moment(k) - PI / (k as f64 + 1.0)).abs() < 1e-15);
        }
        assert!(m.monomial(2, 3, 64).abs() < 1e-15);
    }

    #[test]
    fn disc_measure_reproduces() {
        let ctx = QSeriesContext::new(0.6).unwrap();
        for l in [-0.75, -1.0, -1.5] {
            let r = measure_check(&ctx, l, 0.0, 10).unwrap();
            assert!(r.converged);
            assert!(r.pass(1e-6), "l = {l}: {:?}", r.max_residual());
        }
    }

    #[test]
    fn strange_measure_reproduces() {
        let ctx = QSeriesContext::new(0.6).unwrap();
        for (alpha, eps) in [(0.5, 0.1), (1.0, -0.2), (1.5, 0.3)] {
            let r = strange_measure_check(&ctx, alpha, eps, 10).unwrap();
            assert_eq!(r.atoms, Some((2.0 * alpha + 2.0) as usize));
            assert!(r.pass(1e-6), "alpha = {alpha}: {}", r.max_residual());
        }
    }

    #[test]
    fn plus_gram_is_psd() {
        let ctx = ctx();
        let pts: Vec<Complex64> = (0..8).map(|i| Complex64::from_polar(0.1 + 0.1 * i as f64, 0.9 * i as f64)).collect();
        let g = kernel_gram(&ctx, Kernel::Plus { l: -1.5 }, &pts).unwrap();
        assert!(g.min_eigenvalue >= -1e-10);
        assert!(g.hermitian_defect < 1e-12);
    }
}
