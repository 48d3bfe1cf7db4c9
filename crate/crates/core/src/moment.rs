//! The quantum moment map J: U_q(sl(n+1)) → Func(X)_q and its checks.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::coeffs::{EvalPoint, QCoeff};
use crate::error::{QorbitError, Result};
use crate::funcx::Fx1;
use crate::heis::{HeisElement, Letter, WModule};
use crate::series::{PiModule, RepParams};
use crate::sparse::SparseOp;
use crate::uq::{casimir_sl2, defining_relations, AlgebraElement, Gen, UqModule};

/// Which normalization of J.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MomentVariant {
    /// Prefactors (q⁻¹−q)^{1/2} as displayed.
    Literal,
    /// Prefactors fitted so that π(J(g)) is the module action of g on W.
    Calibrated,
}

/// (Π_v x_v)^{half/2}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Radical {
    pub vars: Vec<usize>,
    pub half: i32,
}

impl Radical {
    fn new(vars: &[usize], half: i32) -> Self {
        Radical { vars: vars.to_vec(), half }
    }
}

/// scalar·(q⁻¹−q)^{qq_half/2}·left·word·right, x_0 = q⁻¹d and x_{n+1} = qc.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentImage {
    pub n: usize,
    pub gen: Gen,
    pub variant: MomentVariant,
    pub scalar: QCoeff,
    pub qq_half: i32,
    pub left: Vec<Radical>,
    pub word: Vec<Letter>,
    pub right: Vec<Radical>,
}

fn kappa() -> QCoeff {
    QCoeff::q_pow(2).div(&(&QCoeff::one() - &QCoeff::q_pow(2))).expect("q² ≠ 1")
}

pub fn moment_map(g: Gen, n: usize, variant: MomentVariant) -> Result<MomentImage> {
    let i = g.index();
    if n == 0 || i == 0 || i > n {
        return Err(QorbitError::Parameter(format!("generator index {i} outside 1..={n}")));
    }
    let nb = [i - 1, i + 1];
    let mut img = MomentImage {
        n,
        gen: g,
        variant,
        scalar: QCoeff::one(),
        qq_half: 0,
        left: Vec::new(),
        word: Vec::new(),
        right: Vec::new(),
    };
    match (variant, g) {
        (_, Gen::K(_)) => {
            img.left = vec![Radical::new(&[i], 2), Radical::new(&nb, -1)];
        }
        (_, Gen::Kinv(_)) => {
            img.left = vec![Radical::new(&[i], -2), Radical::new(&nb, 1)];
        }
        (MomentVariant::Literal, Gen::E(_)) => {
            img.qq_half = 1;
            img.left = vec![Radical::new(&nb, -1)];
            img.word = vec![Letter::Z(i - 1), Letter::H(i)];
        }
        (MomentVariant::Literal, Gen::F(_)) => {
            img.qq_half = 1;
            img.left = vec![Radical::new(&[i], -2)];
            img.word = vec![Letter::Z(i), Letter::H(i - 1)];
        }
        (MomentVariant::Calibrated, Gen::E(_)) => {
            img.scalar = -&kappa();
            img.word = vec![Letter::Z(i - 1), Letter::H(i)];
            img.right = vec![Radical::new(&[i], -2)];
        }
        (MomentVariant::Calibrated, Gen::F(_)) => {
            img.scalar = -&(&QCoeff::q_pow(-1) * &kappa());
            img.word = vec![Letter::Z(i), Letter::H(i - 1)];
            img.right = vec![Radical::new(&nb, -1)];
        }
    }
    Ok(img)
}

/// I_i: E_i ↦ −E_i, K_i^{±1} ↦ −K_i^{±1}, everything else fixed.
pub fn automorphism_i(i: usize, a: &AlgebraElement) -> AlgebraElement {
    a.automorphism_i(i)
}

/// Images of J∘I_i for the generators in `twist`.
pub fn twisted_moment_map(g: Gen, n: usize, variant: MomentVariant, twist: &[usize]) -> Result<MomentImage> {
    let mut img = moment_map(g, n, variant)?;
    let flips = twist.iter().filter(|&&i| i == g.index() && !matches!(g, Gen::F(_))).count();
    if flips % 2 == 1 {
        img.scalar = -&img.scalar;
    }
    Ok(img)
}

/// Exponent of q in x_j = κ q^{−2p_j} on z^m·1_χ, p_j = Σ_{k<j} m_k.
fn w_x_qexp(m: &[u32], j: usize) -> i32 {
    -2 * m.iter().take(j).sum::<u32>() as i32
}

fn eval_q(c: &QCoeff, q0: f64) -> Result<Complex64> {
    c.eval(&EvalPoint::new(q0, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)))
}

fn radical_value(vals: &dyn Fn(usize) -> Complex64, r: &Radical) -> Result<Complex64> {
    let prod: Complex64 = r.vars.iter().map(|&v| vals(v)).product();
    if prod.norm() == 0.0 {
        return Err(QorbitError::Pole { factor: format!("x{:?}", r.vars) });
    }
    let base = if r.half % 2 == 0 {
        prod.powi(r.half / 2)
    } else if prod.im == 0.0 && prod.re > 0.0 {
        Complex64::new(prod.re.sqrt().powi(r.half), 0.0)
    } else {
        prod.sqrt().powi(r.half)
    };
    Ok(base)
}

impl MomentImage {
    fn scalar_value(&self, q0: f64) -> Result<Complex64> {
        let s = eval_q(&self.scalar, q0)?;
        Ok(s * (1.0 / q0 - q0).powf(self.qq_half as f64 / 2.0))
    }

    fn heis_word(&self) -> HeisElement {
        if self.word.is_empty() {
            HeisElement::one(self.n)
        } else {
            HeisElement::word(self.n, &self.word)
        }
    }

    /// Numeric matrix on W at q = q0.
    pub fn w_operator(&self, w: &WModule, q0: f64) -> Result<SparseOp<Complex64>> {
        let word = w.heis_op(&self.heis_word()).try_map(&|c: &QCoeff| eval_q(c, q0))?;
        let s = self.scalar_value(q0)?;
        let kap = eval_q(&kappa(), q0)?;
        let diag = |rads: &[Radical]| -> Result<SparseOp<Complex64>> {
            let mut d = Vec::with_capacity(w.basis().len());
            for m in w.basis() {
                let vals = |j: usize| kap * q0.powi(w_x_qexp(m, j));
                let mut v = Complex64::new(1.0, 0.0);
                for r in rads {
                    v *= radical_value(&vals, r)?;
                }
                d.push(v);
            }
            Ok(SparseOp::diagonal(d))
        };
        Ok(diag(&self.left)?.compose(&word).compose(&diag(&self.right)?).scale(&s))
    }

    /// Exact matrix on W; fails when a square root does not resolve in Q(q).
    pub fn w_operator_exact(&self, w: &WModule) -> Result<SparseOp<QCoeff>> {
        if self.qq_half % 2 != 0 {
            return Err(QorbitError::Unsupported("(q⁻¹−q)^{1/2} is not in Q(q)".into()));
        }
        for r in self.left.iter().chain(&self.right) {
            if (r.vars.len() as i32 * r.half) % 2 != 0 {
                return Err(QorbitError::Unsupported("κ^{1/2} is not in Q(q)".into()));
            }
        }
        let word = w.heis_op(&self.heis_word());
        let diag = |rads: &[Radical]| -> Result<SparseOp<QCoeff>> {
            let mut d = Vec::with_capacity(w.basis().len());
            for m in w.basis() {
                let mut kpow = 0;
                let mut qpow = 0;
                for r in rads {
                    for &v in &r.vars {
                        qpow += w_x_qexp(m, v) * r.half;
                    }
                    kpow += r.vars.len() as i32 * r.half;
                }
                d.push(&kappa().pow(kpow / 2)? * &QCoeff::q_pow(qpow / 2));
            }
            Ok(SparseOp::diagonal(d))
        };
        let qq = (&QCoeff::q_pow(-1) - &QCoeff::q()).pow(self.qq_half / 2)?;
        let s = &self.scalar * &qq;
        Ok(diag(&self.left)?.compose(&word).compose(&diag(&self.right)?).scale(&s))
    }

    /// Numeric matrix on Π_ν (n = 1), with y = z_0ẑ_1, ŷ = z_1ẑ_0, x = x_1.
    pub fn pi_operator(&self, pi: &PiModule) -> Result<SparseOp<Complex64>> {
        if self.n != 1 {
            return Err(QorbitError::UnsupportedRank { rank: self.n, what: "Π_ν is built for n = 1".into() });
        }
        let p = pi.params();
        let word = match self.word.as_slice() {
            [] => SparseOp::identity(pi.dim()),
            [Letter::Z(0), Letter::H(1)] => pi.y().clone(),
            [Letter::Z(1), Letter::H(0)] => pi.yhat().clone(),
            _ => return Err(QorbitError::Unsupported("word has no Π_ν image".into())),
        };
        let diag = |rads: &[Radical]| -> Result<SparseOp<Complex64>> {
            let mut d = Vec::with_capacity(pi.dim());
            for j in 0..pi.dim() {
                let lam = p.lambda(pi.power(j));
                let vals = |v: usize| match v {
                    0 => p.d0 / p.q,
                    1 => Complex64::new(lam, 0.0),
                    _ => p.c0 * p.q,
                };
                let mut v = Complex64::new(1.0, 0.0);
                for r in rads {
                    v *= radical_value(&vals, r)?;
                }
                d.push(v);
            }
            Ok(SparseOp::diagonal(d))
        };
        let s = self.scalar_value(p.q)?;
        Ok(diag(&self.left)?.compose(&word).compose(&diag(&self.right)?).scale(&s))
    }

    /// For n = 1: (f, h) with J(g) = f·(cd)^{h/2}·(q⁻¹−q)^{qq_half/2}.
    pub fn to_fx1(&self) -> Result<(Fx1, i32)> {
        if self.n != 1 {
            return Err(QorbitError::UnsupportedRank { rank: self.n, what: "Fx1 is the n = 1 algebra".into() });
        }
        let mut cd_half = 0;
        let factor = |rads: &[Radical], cd_half: &mut i32| -> Result<Fx1> {
            let mut f = QCoeff::one();
            for r in rads {
                match r.vars.as_slice() {
                    [1] if r.half % 2 == 0 => f = &f * &QCoeff::x(1).pow(r.half / 2)?,
                    [0, 2] => *cd_half += r.half,
                    _ => return Err(QorbitError::Unsupported("radical has no Fx1 image".into())),
                }
            }
            Ok(Fx1::function(f))
        };
        let l = factor(&self.left, &mut cd_half)?;
        let r = factor(&self.right, &mut cd_half)?;
        let w = match self.word.as_slice() {
            [] => Fx1::one(),
            [Letter::Z(0), Letter::H(1)] => Fx1::y(),
            [Letter::Z(1), Letter::H(0)] => Fx1::yhat(),
            _ => return Err(QorbitError::Unsupported("word has no Fx1 image".into())),
        };
        Ok((l.mul(&w).mul(&r).scale(&self.scalar), cd_half))
    }
}

impl fmt::Display for MomentImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J({}) = ({})", self.gen, self.scalar)?;
        if self.qq_half != 0 {
            write!(f, "·(q^-1-q)^({}/2)", self.qq_half)?;
        }
        let rad = |f: &mut fmt::Formatter<'_>, r: &Radical| {
            let vs: Vec<String> = r.vars.iter().map(|v| format!("x{v}")).collect();
            write!(f, "·({})^({}/2)", vs.join("·"), r.half)
        };
        for r in &self.left {
            rad(f, r)?;
        }
        for l in &self.word {
            write!(f, "·{l}")?;
        }
        for r in &self.right {
            rad(f, r)?;
        }
        Ok(())
    }
}

/// Where J is represented.
#[derive(Clone, Debug)]
pub enum MomentTarget {
    Pi { params: RepParams, truncation: usize },
    W { n: usize, degree: usize, q0: f64 },
}

/// Numeric generator matrices of J (or J∘I) on a target.
pub struct MomentOperators {
    pub n: usize,
    pub q0: f64,
    pub ops: BTreeMap<Gen, SparseOp<Complex64>>,
    /// Columns away from truncation effects.
    pub interior: Vec<usize>,
    w: Option<WModule>,
    pi: Option<PiModule>,
}

impl MomentOperators {
    pub fn build(target: &MomentTarget, variant: MomentVariant, twist: &[usize]) -> Result<Self> {
        match target {
            MomentTarget::Pi { params, truncation } => {
                let pi = crate::series::build_pi(*params, *truncation);
                let mut ops = BTreeMap::new();
                for g in [Gen::E(1), Gen::F(1), Gen::K(1), Gen::Kinv(1)] {
                    ops.insert(g, twisted_moment_map(g, 1, variant, twist)?.pi_operator(&pi)?);
                }
                Ok(MomentOperators { n: 1, q0: params.q, ops, interior: pi.interior(4), w: None, pi: Some(pi) })
            }
            MomentTarget::W { n, degree, q0 } => {
                let w = WModule::build(*n, *degree)?;
                let mut ops = BTreeMap::new();
                for i in 1..=*n {
                    for g in [Gen::E(i), Gen::F(i), Gen::K(i), Gen::Kinv(i)] {
                        ops.insert(g, twisted_moment_map(g, *n, variant, twist)?.w_operator(&w, *q0)?);
                    }
                }
                let interior = (0..w.basis().len()).collect();
                Ok(MomentOperators { n: *n, q0: *q0, ops, interior, w: Some(w), pi: None })
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.ops.values().next().map_or(0, |o| o.ncols())
    }

    pub fn w_module(&self) -> Option<&WModule> {
        self.w.as_ref()
    }

    pub fn pi_module(&self) -> Option<&PiModule> {
        self.pi.as_ref()
    }

    /// π(J(a)) together with the largest term magnitude, for relative residuals.
    pub fn image(&self, a: &AlgebraElement) -> Result<(SparseOp<Complex64>, f64)> {
        let d = self.dim();
        let mut out = SparseOp::zeros(d, d);
        let mut scale: f64 = 0.0;
        for (w, c) in a.terms() {
            let cv = eval_q(c, self.q0)?;
            let mut op = SparseOp::identity(d);
            for g in w {
                op = op.compose(&self.ops[g]);
            }
            let op = op.scale(&cv);
            scale = scale.max(self.restricted_max(&op));
            out = out.add(&op);
        }
        Ok((out, scale))
    }

    fn restricted_max(&self, op: &SparseOp<Complex64>) -> f64 {
        self.interior.iter().flat_map(|&j| op.column(j).values()).map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// max |entry| over interior columns divided by max(1, largest term).
    pub fn relative_residual(&self, a: &AlgebraElement) -> Result<f64> {
        let (op, scale) = self.image(a)?;
        Ok(self.restricted_max(&op) / scale.max(1.0))
    }
}

/// One line per relation.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub check: String,
    pub residuals: Vec<(String, f64)>,
    pub tolerance: f64,
}

impl MomentReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }

    pub fn pass(&self) -> bool {
        self.residuals.iter().all(|r| r.1 < self.tolerance)
    }

    pub fn worst(&self) -> Option<&(String, f64)> {
        self.residuals.iter().max_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Every defining relation of U_q(sl(n+1)) on the J-images.
pub fn verify_moment_relations(target: &MomentTarget, variant: MomentVariant, twist: &[usize]) -> Result<MomentReport> {
    let ops = MomentOperators::build(target, variant, twist)?;
    let mut residuals = Vec::new();
    for (name, rel) in defining_relations(ops.n) {
        residuals.push((name, ops.relative_residual(&rel)?));
    }
    Ok(MomentReport { check: "relations".into(), residuals, tolerance: 1e-10 })
}

/// π(J(ad_q(a)b)) against Σ π_W(a₁)π(J(b))π_W(S(a₂)) for generator pairs, on W.
pub fn check_intertwining_w(n: usize, degree: usize, q0: f64, variant: MomentVariant) -> Result<MomentReport> {
    let ops = MomentOperators::build(&MomentTarget::W { n, degree, q0 }, variant, &[])?;
    let w = ops.w_module().expect("W target");
    let rho = |g: Gen| -> Result<SparseOp<Complex64>> { w.gen_op(g).try_map(&|c: &QCoeff| eval_q(c, q0)) };
    let mut gens = Vec::new();
    for i in 1..=n {
        gens.extend([Gen::E(i), Gen::F(i), Gen::K(i)]);
    }
    let mut residuals = Vec::new();
    for &a in &gens {
        for &b in &gens {
            let ae = AlgebraElement::gen(n, a);
            let be = AlgebraElement::gen(n, b);
            let (lhs, s1) = ops.image(&AlgebraElement::adjoint_action(&ae, &be))?;
            let jb = &ops.ops[&b];
            let d = ops.dim();
            let mut rhs = SparseOp::zeros(d, d);
            for ((w1, w2), c) in ae.coproduct().terms() {
                let mut left = SparseOp::identity(d);
                for g in w1 {
                    left = left.compose(&rho(*g)?);
                }
                let s = AlgebraElement::from_word(n, w2.clone(), QCoeff::one()).antipode();
                let mut right = SparseOp::zeros(d, d);
                for (sw, sc) in s.terms() {
                    let mut t = SparseOp::identity(d);
                    for g in sw {
                        t = t.compose(&rho(*g)?);
                    }
                    right = right.add(&t.scale(&eval_q(sc, q0)?));
                }
                rhs = rhs.add(&left.compose(jb).compose(&right).scale(&eval_q(c, q0)?));
            }
            let r = lhs.sub(&rhs).max_abs() / s1.max(rhs.max_abs()).max(1.0);
            residuals.push((format!("ad({a}) {b}"), r));
        }
    }
    Ok(MomentReport { check: "intertwining".into(), residuals, tolerance: 1e-10 })
}

/// π(J(ad_q(a)b)) against (a ▷ J(b)) on Π_ν, with ▷ the n = 1 module action.
pub fn check_intertwining_pi(params: RepParams, truncation: usize, variant: MomentVariant) -> Result<MomentReport> {
    let target = MomentTarget::Pi { params, truncation };
    let ops = MomentOperators::build(&target, variant, &[])?;
    let pi = ops.pi_module().expect("Π target");
    let cd = params.c0 * params.d0;
    let gens = [Gen::E(1), Gen::F(1), Gen::K(1)];
    let mut residuals = Vec::new();
    for &a in &gens {
        for &b in &gens {
            let ae = AlgebraElement::gen(1, a);
            let be = AlgebraElement::gen(1, b);
            let (lhs, s1) = ops.image(&AlgebraElement::adjoint_action(&ae, &be))?;
            let img = moment_map(b, 1, variant)?;
            let (f, cd_half) = img.to_fx1()?;
            let acted = crate::funcx::uq_act_fx(a, &f)?;
            let k = cd.sqrt().powi(cd_half) * (1.0 / params.q - params.q).powf(img.qq_half as f64 / 2.0);
            let rhs = pi.fx_operator(&acted)?.scale(&k);
            let diff = lhs.sub(&rhs);
            let r = ops.restricted_max(&diff) / s1.max(ops.restricted_max(&rhs)).max(1.0);
            residuals.push((format!("ad({a}) {b}"), r));
        }
    }
    Ok(MomentReport { check: "intertwining".into(), residuals, tolerance: 1e-10 })
}

/// The displayed image of C_q: (c0/d0 + d0/c0 − q⁻¹ − q)/(q⁻¹ − q)².
pub fn casimir_image(q: f64, c0: Complex64, d0: Complex64) -> Result<Complex64> {
    if c0.norm() == 0.0 || d0.norm() == 0.0 {
        return Err(QorbitError::Parameter("c0, d0 must be nonzero".into()));
    }
    Ok((c0 / d0 + d0 / c0 - 1.0 / q - q) / (1.0 / q - q).powi(2))
}

/// The scalar by which π(J(C_q)) acts on Π_ν: ((c0/d0)^{1/2} + (d0/c0)^{1/2} − q⁻¹ − q)/(q⁻¹ − q)².
pub fn casimir_operator_value(q: f64, c0: Complex64, d0: Complex64) -> Result<Complex64> {
    if c0.norm() == 0.0 || d0.norm() == 0.0 {
        return Err(QorbitError::Parameter("c0, d0 must be nonzero".into()));
    }
    let r = (c0 / d0).sqrt();
    Ok((r + 1.0 / r - 1.0 / q - q) / (1.0 / q - q).powi(2))
}

/// Diagonal spread of π(J(C_q)) on interior columns.
#[derive(Clone, Debug, PartialEq)]
pub struct CasimirReport {
    pub value: Complex64,
    /// Largest off-diagonal or diagonal deviation, relative.
    pub scalar_residual: f64,
}

pub fn casimir_on_pi(params: RepParams, truncation: usize, variant: MomentVariant) -> Result<CasimirReport> {
    let ops = MomentOperators::build(&MomentTarget::Pi { params, truncation }, variant, &[])?;
    let (op, scale) = ops.image(&casimir_sl2(1)?)?;
    let mid = ops.dim() / 2;
    let value = op.get(mid, mid);
    let ident = SparseOp::identity(ops.dim()).scale(&value);
    let dev = ops.restricted_max(&op.sub(&ident));
    Ok(CasimirReport { value, scalar_residual: dev / scale.max(1.0) })
}

/// c0/d0 + d0/c0 − q − q⁻¹ = (q^l − q^{−l})(q^{l+1} − q^{−l−1}) with c0 = q^{l+1/2}, d0 = q^{−l−1/2},
/// as an identity of Laurent polynomials in t = q^l.
pub fn casimir_identity_symbolic() -> bool {
    let t = QCoeff::x(0);
    let ti = t.inv().expect("t ≠ 0");
    let q = QCoeff::q();
    let qi = QCoeff::q_pow(-1);
    let t2 = &t * &t;
    let lhs = &(&(&(&t2 * &q) + &(&ti * &ti).div(&q).expect("q ≠ 0")) - &q) - &qi;
    let rhs = &(&t - &ti) * &(&(&t * &q) - &(&ti * &qi));
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heis::WModule;

    #[test]
    fn sl2_images_match_displayed_forms() {
        let (k, h) = moment_map(Gen::K(1), 1, MomentVariant::Literal).unwrap().to_fx1().unwrap();
        assert_eq!(k, Fx1::x());
        assert_eq!(h, -1);
        let img = moment_map(Gen::F(1), 1, MomentVariant::Literal).unwrap();
        let (f, h) = img.to_fx1().unwrap();
        assert_eq!(h, 0);
        assert_eq!(img.qq_half, 1);
        assert_eq!(f, Fx1::function(QCoeff::x(1).inv().unwrap()).mul(&Fx1::yhat()));
        let (e, h) = moment_map(Gen::E(1), 1, MomentVariant::Literal).unwrap().to_fx1().unwrap();
        assert_eq!((e, h), (Fx1::y(), -1));
    }

    #[test]
    fn calibrated_sl2_images() {
        let k = kappa();
        let (e, _) = moment_map(Gen::E(1), 1, MomentVariant::Calibrated).unwrap().to_fx1().unwrap();
        let expect = Fx1::function(QCoeff::x(1).inv().unwrap()).mul(&Fx1::y()).scale(&(-&(&k * &QCoeff::q_pow(-2))));
        assert_eq!(e, expect);
        let (f, h) = moment_map(Gen::F(1), 1, MomentVariant::Calibrated).unwrap().to_fx1().unwrap();
        assert_eq!(h, -1);
        assert_eq!(f, Fx1::yhat().scale(&(-&(&QCoeff::q_pow(-1) * &k))));
    }

    #[test]
    fn k_times_kinv_is_identity() {
        let p = RepParams::real(0.5, 0.8, 0.3).unwrap();
        let ops =
            MomentOperators::build(&MomentTarget::Pi { params: p, truncation: 6 }, MomentVariant::Calibrated, &[])
                .unwrap();
        let prod = ops.ops[&Gen::K(1)].compose(&ops.ops[&Gen::Kinv(1)]);
        let id = SparseOp::identity(ops.dim());
        assert!(prod.sub(&id).max_abs() < 1e-12);
    }

    #[test]
    fn calibrated_image_is_module_action_on_w() {
        for n in 1..=2 {
            let w = WModule::build(n, 4).unwrap();
            for i in 1..=n {
                for g in [Gen::E(i), Gen::F(i), Gen::K(i), Gen::Kinv(i)] {
                    let j = moment_map(g, n, MomentVariant::Calibrated).unwrap().w_operator_exact(&w).unwrap();
                    assert_eq!(&j, w.gen_op(g), "n={n} {g}");
                }
            }
        }
    }

    #[test]
    fn literal_has_no_exact_w_form() {
        let w = WModule::build(1, 2).unwrap();
        assert!(moment_map(Gen::E(1), 1, MomentVariant::Literal).unwrap().w_operator_exact(&w).is_err());
    }

    #[test]
    fn calibrated_relations_on_pi() {
        for p in [
            RepParams::real(0.5, 0.8, 0.3).unwrap(),
            RepParams::real(0.7, 1.0, -1.3).unwrap(),
            RepParams::unit_circle(0.6, 0.9, 2.0).unwrap(),
        ] {
            let r = verify_moment_relations(
                &MomentTarget::Pi { params: p, truncation: 12 },
                MomentVariant::Calibrated,
                &[],
            )
            .unwrap();
            assert!(r.pass(), "{p}: {:?}", r.worst());
        }
    }

    #[test]
    fn calibrated_relations_on_w() {
        for n in 1..=2 {
            let r =
                verify_moment_relations(&MomentTarget::W { n, degree: 5, q0: 0.55 }, MomentVariant::Calibrated, &[])
                    .unwrap();
            assert!(r.pass(), "n={n}: {:?}", r.worst());
        }
    }

    #[test]
    fn literal_fails_commutator_relation() {
        let p = RepParams::real(0.5, 0.8, 0.3).unwrap();
        let r = verify_moment_relations(&MomentTarget::Pi { params: p, truncation: 8 }, MomentVariant::Literal, &[])
            .unwrap();
        assert!(!r.pass());
        let worst = r.worst().unwrap();
        assert!(worst.0.contains('E') || worst.0.contains('['), "{worst:?}");
    }

    #[test]
    fn twisted_map_satisfies_relations() {
        let r = verify_moment_relations(&MomentTarget::W { n: 2, degree: 4, q0: 0.4 }, MomentVariant::Calibrated, &[1])
            .unwrap();
        assert!(r.pass(), "{:?}", r.worst());
        let p = RepParams::real(0.6, 0.9, 0.7).unwrap();
        let r =
            verify_moment_relations(&MomentTarget::Pi { params: p, truncation: 10 }, MomentVariant::Calibrated, &[1])
                .unwrap();
        assert!(r.pass(), "{:?}", r.worst());
    }

    #[test]
    fn automorphism_examples() {
        let e = AlgebraElement::e(1, 1);
        assert_eq!(automorphism_i(1, &e), e.scale(&QCoeff::from_i64(-1)));
        let f = AlgebraElement::f(1, 1);
        assert_eq!(automorphism_i(1, &f), f);
        let k = AlgebraElement::k(1, 1);
        assert_eq!(automorphism_i(1, &automorphism_i(1, &k)), k);
    }

    #[test]
    fn intertwining_on_w() {
        for n in 1..=2 {
            let r = check_intertwining_w(n, 4, 0.45, MomentVariant::Calibrated).unwrap();
            assert!(r.pass(), "n={n}: {:?}", r.worst());
        }
    }

    #[test]
    fn intertwining_on_pi() {
        let p = RepParams::real(0.5, 0.8, 0.3).unwrap();
        let r = check_intertwining_pi(p, 10, MomentVariant::Calibrated).unwrap();
        assert!(r.pass(), "{:?}", r.residuals);
    }

    #[test]
    fn casimir_examples() {
        let q = 0.5;
        let one = Complex64::new(1.0, 0.0);
        let v = casimir_image(q, one, one).unwrap();
        assert!((v.re - (2.0 - q - 1.0 / q) / (1.0 / q - q).powi(2)).abs() < 1e-15);
        let l: f64 = -0.25;
        let c0 = Complex64::new(q.powf(l + 0.5), 0.0);
        let d0 = Complex64::new(q.powf(-l - 0.5), 0.0);
        let v = casimir_image(q, c0, d0).unwrap();
        let oracle = (0.5f64.sqrt() + 2f64.sqrt() - 2.5) / 2.25;
        assert!((v.re - oracle).abs() < 1e-14, "{v}");
        assert!(casimir_identity_symbolic());
    }

    #[test]
    fn casimir_operator_is_scalar() {
        for p in [RepParams::real(0.5, 0.8, 0.3).unwrap(), RepParams::unit_circle(0.6, 0.9, 2.0).unwrap()] {
            let r = casimir_on_pi(p, 12, MomentVariant::Calibrated).unwrap();
            assert!(r.scalar_residual < 1e-10, "{r:?}");
            let v = casimir_operator_value(p.q, p.c0, p.d0).unwrap();
            assert!((r.value - v).norm() < 1e-10 * (1.0 + v.norm()), "{} vs {v}", r.value);
        }
    }

    #[test]
    fn casimir_formula_agrees_only_when_c0_equals_d0() {
        let p = RepParams::real(0.5, 1.0, 0.3).unwrap();
        let r = casimir_on_pi(p, 10, MomentVariant::Calibrated).unwrap();
        assert!((r.value - casimir_image(p.q, p.c0, p.d0).unwrap()).norm() < 1e-10);
        let p = RepParams::real(0.5, 0.8, 0.3).unwrap();
        let r = casimir_on_pi(p, 10, MomentVariant::Calibrated).unwrap();
        assert!((r.value - casimir_image(p.q, p.c0, p.d0).unwrap()).norm() > 1e-3);
    }
}
