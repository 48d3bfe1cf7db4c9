//! Func(X)_q in the ζ / x presentation.
//!
//! Monomials keep the ζ-letters on the left and the function of x on the right.
//! x_0 = q⁻¹d and x_{n+1} = qc are central.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::coeffs::{var_x, QCoeff, VAR_C, VAR_D};
use crate::error::{QorbitError, Result};
use crate::uq::Gen;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ZLetter {
    Zeta(usize),
    Zhat(usize),
}

impl fmt::Display for ZLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZLetter::Zeta(i) => write!(f, "zeta{}", i),
            ZLetter::Zhat(i) => write!(f, "zetah{}", i),
        }
    }
}

/// x_i as a coefficient, with the central boundary values at i = 0 and n+1.
pub fn x_var(n: usize, i: usize) -> QCoeff {
    if i == 0 {
        &QCoeff::q_pow(-1) * &QCoeff::d()
    } else if i == n + 1 {
        &QCoeff::q() * &QCoeff::c()
    } else {
        QCoeff::x(i)
    }
}

/// f ↦ f(x_1, .., q^s x_i, .., x_n).
fn shift(f: &QCoeff, i: usize, s: i32) -> QCoeff {
    f.scale_var_by_q(var_x(i), s)
}

/// Moves f(x) to the right of a letter: f·l = l·f'.
fn pass_letter(f: &QCoeff, l: ZLetter) -> QCoeff {
    match l {
        ZLetter::Zeta(i) => shift(f, i, -2),
        ZLetter::Zhat(i) => shift(f, i, 2),
    }
}

fn contraction(n: usize, a: ZLetter, b: ZLetter) -> Result<QCoeff> {
    let x = |i| x_var(n, i);
    let q2inv = QCoeff::q_pow(-2);
    match (a, b) {
        (ZLetter::Zeta(i), ZLetter::Zhat(_)) => (&x(i - 1) - &x(i)).div(&(&x(i) - &(&q2inv * &x(i + 1)))),
        (ZLetter::Zhat(i), ZLetter::Zeta(_)) => (&(&QCoeff::q_pow(2) * &x(i - 1)) - &x(i)).div(&(&x(i) - &x(i + 1))),
        _ => unreachable!(),
    }
}

/// Scalar s with a·b = s·b·a for distinct letters, when the presentation fixes it.
fn swap_factor(a: ZLetter, b: ZLetter) -> Result<QCoeff> {
    use ZLetter::*;
    let f = match (a, b) {
        (Zeta(i), Zeta(j)) | (Zhat(j), Zhat(i)) => {
            if j == i + 1 {
                QCoeff::q()
            } else if i == j + 1 {
                QCoeff::q_pow(-1)
            } else {
                QCoeff::one()
            }
        }
        (Zeta(i), Zhat(j)) | (Zhat(j), Zeta(i)) => {
            if i.abs_diff(j) > 1 {
                QCoeff::one()
            } else {
                return Err(QorbitError::Unsupported(format!("no relation between {a} and {b}")));
            }
        }
    };
    Ok(f)
}

fn reduce_word(n: usize, word: Vec<ZLetter>, f: QCoeff, out: &mut BTreeMap<Vec<ZLetter>, QCoeff>) -> Result<()> {
    if f.is_zero() {
        return Ok(());
    }
    let contract_at = |w: &[ZLetter], p: usize| -> Result<(Vec<ZLetter>, QCoeff)> {
        let g = contraction(n, w[p], w[p + 1])?;
        let mut g = g;
        for l in &w[p + 2..] {
            g = pass_letter(&g, *l);
        }
        let mut nw = w[..p].to_vec();
        nw.extend_from_slice(&w[p + 2..]);
        Ok((nw, g))
    };
    for p in 0..word.len().saturating_sub(1) {
        let (a, b) = (word[p], word[p + 1]);
        let same =
            matches!((a, b), (ZLetter::Zeta(i), ZLetter::Zhat(j)) | (ZLetter::Zhat(i), ZLetter::Zeta(j)) if i == j);
        if same {
            let (nw, g) = contract_at(&word, p)?;
            return reduce_word(n, nw, &g * &f, out);
        }
    }
    for p in 0..word.len().saturating_sub(1) {
        if word[p] > word[p + 1] {
            let s = swap_factor(word[p], word[p + 1])?;
            let mut nw = word.clone();
            nw.swap(p, p + 1);
            return reduce_word(n, nw, &s * &f, out);
        }
    }
    // Sorted; bring a ζ_i next to a ζ̂_i when both occur.
    for i in 1..=n {
        let last = word.iter().rposition(|l| *l == ZLetter::Zeta(i));
        let first = word.iter().position(|l| *l == ZLetter::Zhat(i));
        if let (Some(p), Some(r)) = (last, first) {
            let mut s = QCoeff::one();
            let mut nw = word.clone();
            for k in p..r - 1 {
                s = &s * &swap_factor(nw[k], nw[k + 1])?;
                nw.swap(k, k + 1);
            }
            let (cw, g) = contract_at(&nw, r - 1)?;
            return reduce_word(n, cw, &(&g * &s) * &f, out);
        }
    }
    let nv = match out.get(&word) {
        Some(old) => old + &f,
        None => f,
    };
    if nv.is_zero() {
        out.remove(&word);
    } else {
        out.insert(word, nv);
    }
    Ok(())
}

/// Element of Func(X)_q for general n.
#[derive(Clone, PartialEq, Eq)]
pub struct FuncXElement {
    n: usize,
    terms: BTreeMap<Vec<ZLetter>, QCoeff>,
}

impl FuncXElement {
    pub fn zero(n: usize) -> Self {
        FuncXElement { n, terms: BTreeMap::new() }
    }

    pub fn function(n: usize, f: QCoeff) -> Self {
        let mut out = Self::zero(n);
        if !f.is_zero() {
            out.terms.insert(Vec::new(), f);
        }
        out
    }

    pub fn one(n: usize) -> Self {
        Self::function(n, QCoeff::one())
    }

    pub fn letter(n: usize, l: ZLetter) -> Self {
        let mut out = Self::zero(n);
        out.terms.insert(vec![l], QCoeff::one());
        out
    }

    /// Normal form of `word · f(x)`.
    pub fn word(n: usize, word: &[ZLetter], f: QCoeff) -> Result<Self> {
        for l in word {
            let (ZLetter::Zeta(i) | ZLetter::Zhat(i)) = l;
            if *i == 0 || *i > n {
                return Err(QorbitError::Parameter(format!("letter {l} outside 1..={n}")));
            }
        }
        let mut out = Self::zero(n);
        reduce_word(n, word.to_vec(), f, &mut out.terms)?;
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<ZLetter>, &QCoeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            let nv = match out.terms.get(w) {
                Some(old) => old + c,
                None => c.clone(),
            };
            if nv.is_zero() {
                out.terms.remove(w);
            } else {
                out.terms.insert(w.clone(), nv);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&QCoeff::from_i64(-1)))
    }

    pub fn scale(&self, s: &QCoeff) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            let v = c * s;
            if !v.is_zero() {
                out.terms.insert(w.clone(), v);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.n);
        for (w1, f1) in &self.terms {
            for (w2, f2) in &other.terms {
                let mut f = f1.clone();
                for l in w2 {
                    f = pass_letter(&f, *l);
                }
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                reduce_word(self.n, w, &f * f2, &mut out.terms)?;
            }
        }
        Ok(out)
    }

    /// ζ_i* = σ_i ζ̂_i, x_i* = x_i, antilinear anti-automorphism.
    pub fn star(&self, sigma: &[i8]) -> Result<Self> {
        if sigma.len() != self.n {
            return Err(QorbitError::Parameter(format!("need {} signs", self.n)));
        }
        let mut out = Self::zero(self.n);
        for (w, f) in &self.terms {
            let mut acc = Self::function(self.n, f.conj());
            for l in w.iter().rev() {
                let (img, i) = match l {
                    ZLetter::Zeta(i) => (ZLetter::Zhat(*i), *i),
                    ZLetter::Zhat(i) => (ZLetter::Zeta(*i), *i),
                };
                let s = QCoeff::from_i64(sigma[i - 1] as i64);
                acc = acc.mul(&Self::letter(self.n, img).scale(&s))?;
            }
            out = out.add(&acc);
        }
        Ok(out)
    }
}

impl fmt::Display for FuncXElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let m: Vec<String> = w.iter().map(|l| l.to_string()).collect();
                format!("{}({})", if m.is_empty() { String::new() } else { m.join("*") + "*" }, c)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for FuncXElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// The ζ-relations reproduce themselves after normal-form reduction, all words of length ≤ `len`.
pub fn check_zeta_relations(n: usize, len: usize) -> Result<Option<String>> {
    let letters: Vec<ZLetter> = (1..=n).flat_map(|i| [ZLetter::Zeta(i), ZLetter::Zhat(i)]).collect();
    let mut words: Vec<Vec<ZLetter>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &words {
            for l in &letters {
                let mut nw = w.clone();
                nw.push(*l);
                next.push(nw);
            }
        }
        for w in &next {
            // product of single letters equals the reduced word
            let direct = match FuncXElement::word(n, w, QCoeff::one()) {
                Ok(v) => v,
                Err(QorbitError::Unsupported(_)) => continue,
                Err(e) => return Err(e),
            };
            let mut prod = FuncXElement::one(n);
            let mut ok = true;
            for l in w {
                match prod.mul(&FuncXElement::letter(n, *l)) {
                    Ok(p) => prod = p,
                    Err(QorbitError::Unsupported(_)) => {
                        ok = false;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if ok && prod != direct {
                return Ok(Some(format!("{:?}: {} vs {}", w, prod, direct)));
            }
        }
        words = next;
    }
    Ok(None)
}

/// The n = 1 algebra with ζ invertible: Σ_k ζ^k g_k(x).
#[derive(Clone, PartialEq, Eq)]
pub struct Fx1 {
    terms: BTreeMap<i64, QCoeff>,
}

fn x1() -> QCoeff {
    QCoeff::x(1)
}

fn shift1(f: &QCoeff, s: i32) -> QCoeff {
    f.scale_var_by_q(var_x(1), s)
}

impl Fx1 {
    pub fn zero() -> Self {
        Fx1 { terms: BTreeMap::new() }
    }

    pub fn monomial(k: i64, g: QCoeff) -> Self {
        let mut out = Self::zero();
        if !g.is_zero() {
            out.terms.insert(k, g);
        }
        out
    }

    pub fn function(g: QCoeff) -> Self {
        Self::monomial(0, g)
    }

    pub fn one() -> Self {
        Self::function(QCoeff::one())
    }

    pub fn zeta(k: i64) -> Self {
        Self::monomial(k, QCoeff::one())
    }

    pub fn x() -> Self {
        Self::function(x1())
    }

    pub fn c() -> Self {
        Self::function(QCoeff::c())
    }

    pub fn d() -> Self {
        Self::function(QCoeff::d())
    }

    /// y = ζ(q⁻¹x − c).
    pub fn y() -> Self {
        Self::monomial(1, &(&QCoeff::q_pow(-1) * &x1()) - &QCoeff::c())
    }

    /// ŷ = −ζ⁻¹(qx − d).
    pub fn yhat() -> Self {
        Self::monomial(-1, &QCoeff::d() - &(&QCoeff::q() * &x1()))
    }

    /// ζ̂ = ζ⁻¹(d − qx)/(qx − c).
    pub fn zeta_hat() -> Self {
        let qx = &QCoeff::q() * &x1();
        Self::monomial(-1, (&QCoeff::d() - &qx).div(&(&qx - &QCoeff::c())).expect("nonzero"))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &QCoeff)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, k: i64) -> QCoeff {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert_add(&mut self, k: i64, g: QCoeff) {
        let nv = match self.terms.get(&k) {
            Some(old) => old + &g,
            None => g,
        };
        if nv.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, nv);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, g) in &other.terms {
            out.insert_add(*k, g.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&QCoeff::from_i64(-1)))
    }

    pub fn scale(&self, s: &QCoeff) -> Self {
        let mut out = Self::zero();
        for (k, g) in &self.terms {
            out.insert_add(*k, g * s);
        }
        out
    }

    /// ζ^a g · ζ^b h = ζ^{a+b} g(q^{−2b}x) h.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, g) in &self.terms {
            for (b, h) in &other.terms {
                out.insert_add(a + b, &shift1(g, -2 * (*b as i32)) * h);
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// Inverse of a single monomial ζ^k g.
    pub fn inverse(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(QorbitError::Unsupported("only monomials are inverted".into()));
        }
        let (k, g) = self.terms.iter().next().unwrap();
        Ok(Self::monomial(-k, shift1(&g.inv()?, 2 * (*k as i32))))
    }

    /// Substitute c and d by values; with `d = None` uses d = 1/c.
    pub fn map_coeffs(&self, f: &dyn Fn(&QCoeff) -> Result<QCoeff>) -> Result<Self> {
        let mut out = Self::zero();
        for (k, g) in &self.terms {
            out.insert_add(*k, f(g)?);
        }
        Ok(out)
    }

    fn anti(&self, zeta_img: &Fx1, fmap: &dyn Fn(&QCoeff) -> QCoeff) -> Result<Self> {
        let zeta_inv_img = zeta_img.inverse()?;
        let mut out = Self::zero();
        for (k, g) in &self.terms {
            let base = if *k >= 0 { zeta_img } else { &zeta_inv_img };
            let mut acc = Self::function(fmap(g));
            for _ in 0..k.unsigned_abs() {
                acc = acc.mul(base);
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// Real case: ζ* = σζ̂, x* = x, c* = c, d* = d.
    pub fn star_real(&self, sigma: i8) -> Result<Self> {
        let img = Self::zeta_hat().scale(&QCoeff::from_i64(sigma as i64));
        self.anti(&img, &|g| g.conj())
    }

    /// Complex case: ζ⋆ = ζ⁻¹, x⋆ = x, c⋆ = d.
    pub fn star_complex(&self) -> Result<Self> {
        self.anti(&Self::zeta(-1), &|g| g.conj().swap_vars(VAR_C, VAR_D))
    }

    pub fn eval_at(&self, q0: f64, c0: Complex64, d0: Complex64, x0: Complex64) -> Result<BTreeMap<i64, Complex64>> {
        let at = crate::coeffs::EvalPoint::new(q0, c0, d0).with_x(vec![Complex64::new(0.0, 0.0), x0]);
        self.terms.iter().map(|(k, g)| Ok((*k, g.eval(&at)?))).collect()
    }
}

impl fmt::Display for Fx1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, g)| format!("zeta^{}*({})", k, g)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Fx1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// (1 − q^{2k})/(1 − q²), valid for negative k.
fn qint(k: i64) -> QCoeff {
    let q2 = QCoeff::q_pow(2);
    (&QCoeff::one() - &QCoeff::q_pow(2 * k as i32)).div(&(&QCoeff::one() - &q2)).expect("q² ≠ 1")
}

/// (g(x) − g(q^s x)) / (x − q^s x).
fn difference(g: &QCoeff, s: i32) -> QCoeff {
    let num = g - &shift1(g, s);
    let den = &x1() * &(&QCoeff::one() - &QCoeff::q_pow(s));
    num.div(&den).expect("nonzero")
}

/// Action of U_q(sl(2)) on the n = 1 algebra, from E(ζ) = −qζ², F(ζ) = 1, K(ζ) = q⁻²ζ,
/// E(x) = y, F(x) = −qŷ, K(x) = x and the module-algebra rule.
pub fn uq_act_fx(g: Gen, f: &Fx1) -> Result<Fx1> {
    if g.index() != 1 {
        return Err(QorbitError::UnsupportedRank { rank: g.index(), what: "uq_act_fx acts for n = 1 only".into() });
    }
    let mut out = Fx1::zero();
    let q = QCoeff::q();
    for (k, h) in &f.terms {
        let k = *k;
        let term = match g {
            Gen::K(_) => Fx1::monomial(k, &QCoeff::q_pow(-2 * k as i32) * h),
            Gen::Kinv(_) => Fx1::monomial(k, &QCoeff::q_pow(2 * k as i32) * h),
            Gen::E(_) => {
                let ez = Fx1::monomial(k + 1, &(-&q) * &qint(k));
                let eh = Fx1::function(difference(h, 2)).mul(&Fx1::y());
                ez.mul(&Fx1::function(h.clone())).add(&Fx1::monomial(k, QCoeff::q_pow(2 * k as i32)).mul(&eh))
            }
            Gen::F(_) => {
                let fz = Fx1::monomial(k - 1, &qint(k) * &QCoeff::q_pow(-2 * (k as i32 - 1)));
                let fh = Fx1::function(&(-&q) * &difference(h, -2)).mul(&Fx1::yhat());
                fz.mul(&Fx1::function(h.clone())).add(&Fx1::zeta(k).mul(&fh))
            }
        };
        out = out.add(&term);
    }
    Ok(out)
}

/// Function values on the lattice x = ν0 q^{−2j}, for each ζ-power.
#[derive(Clone, Debug, PartialEq)]
pub struct FxLattice {
    pub q: f64,
    pub c0: Complex64,
    pub d0: Complex64,
    pub nu0: f64,
    pub terms: BTreeMap<i64, BTreeMap<i64, Complex64>>,
}

impl FxLattice {
    pub fn new(q: f64, c0: Complex64, d0: Complex64, nu0: f64) -> Self {
        FxLattice { q, c0, d0, nu0, terms: BTreeMap::new() }
    }

    pub fn point(&self, j: i64) -> f64 {
        self.nu0 * self.q.powi(-2 * j as i32)
    }

    pub fn set(&mut self, k: i64, j: i64, v: Complex64) {
        let row = self.terms.entry(k).or_default();
        let nv = row.get(&j).copied().unwrap_or_default() + v;
        if nv == Complex64::new(0.0, 0.0) {
            row.remove(&j);
        } else {
            row.insert(j, nv);
        }
        if row.is_empty() {
            self.terms.remove(&k);
        }
    }

    fn empty_like(&self) -> Self {
        FxLattice::new(self.q, self.c0, self.d0, self.nu0)
    }

    /// The lattice form of [`uq_act_fx`].
    pub fn act(&self, g: Gen) -> Self {
        let q = self.q;
        let (c, d) = (self.c0, self.d0);
        let qint = |k: i64| (1.0 - q.powi(2 * k as i32)) / (1.0 - q * q);
        let qint_inv = |k: i64| (1.0 - q.powi(-2 * k as i32)) / (1.0 - q.powi(-2));
        let mut out = self.empty_like();
        for (&k, row) in &self.terms {
            for (&j, &h) in row {
                match g {
                    Gen::K(_) => out.set(k, j, h * q.powi(-2 * k as i32)),
                    Gen::Kinv(_) => out.set(k, j, h * q.powi(2 * k as i32)),
                    Gen::E(_) => {
                        // ζ^{k+1}[−q[k]h(x) + q^{2k}D h(q⁻²x)(q⁻¹x − c)], D h = (h(x) − h(q²x))/((1−q²)x)
                        out.set(k + 1, j, h * (-q * qint(k)));
                        let w = q.powi(2 * k as i32) / (1.0 - q * q);
                        // h(j) enters D h(q⁻²x) at x_{j−1} (as h(q⁻²x)) and at x_j (as −h(x))
                        let xm = self.point(j - 1);
                        out.set(k + 1, j - 1, h * w / self.point(j) * (xm / q - c));
                        let xj = self.point(j);
                        out.set(k + 1, j, -h * w / self.point(j + 1) * (xj / q - c));
                    }
                    Gen::F(_) => {
                        // ζ^{k−1}[[k]'h(x) − q D' h(q²x)(d − qx)], D' h = (h(x) − h(q⁻²x))/((1−q⁻²)x)
                        out.set(k - 1, j, h * qint_inv(k));
                        let w = -q / (1.0 - q.powi(-2));
                        // h(j) enters D' h(q²x) at x_{j+1} (as h(x)) and at x_j (as −h(q⁻²x))
                        let xp = self.point(j + 1);
                        out.set(k - 1, j + 1, h * w / self.point(j) * (d - q * xp));
                        let xj = self.point(j);
                        out.set(k - 1, j, -h * w / self.point(j - 1) * (d - q * xj));
                    }
                }
            }
        }
        out
    }

    /// (q⁻¹ − q) Σ_x x f_0(x).
    pub fn integral(&self) -> Complex64 {
        let q = self.q;
        let mut s = Complex64::new(0.0, 0.0);
        if let Some(row) = self.terms.get(&0) {
            for (&j, &v) in row {
                s += v * self.point(j);
            }
        }
        s * (1.0 / q - q)
    }
}

/// Symbolic or lattice-supported coefficient function.
#[derive(Clone, Debug, PartialEq)]
pub enum XFunction {
    Rational(QCoeff),
    Lattice(BTreeMap<i64, Complex64>),
}

/// Φ(t) = (1 − γt)/(1 − t).
pub fn phi(t: &QCoeff, gamma: &QCoeff) -> Result<QCoeff> {
    (&QCoeff::one() - &(gamma * t)).div(&(&QCoeff::one() - t))
}

/// Φ(ζζ*) − q²Φ(ζ*ζ) as a rational function of x, c, d with d = 1/c.
pub fn phi_defect() -> Result<QCoeff> {
    let x = x1();
    let (q, c, d) = (QCoeff::q(), QCoeff::c(), QCoeff::d());
    let qi = QCoeff::q_pow(-1);
    let t1 = (&x - &(&qi * &d)).div(&(&x - &(&qi * &c)))?;
    let t2 = (&x - &(&q * &d)).div(&(&x - &(&q * &c)))?;
    let gamma = c.div(&d)?;
    let defect = &phi(&t1, &gamma)? - &(&QCoeff::q_pow(2) * &phi(&t2, &gamma)?);
    defect.compose(VAR_D, &c.inv()?)
}

/// Kind of the specialised n = 1 algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XcdKind {
    Real,
    Complex,
}

/// Validates (c0, d0) and reports which relation set applies.
pub fn xcd_algebra(c0: Complex64, d0: Complex64) -> Result<XcdKind> {
    let prod = c0 * d0;
    if (prod - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(QorbitError::Parameter(format!("c0·d0 = {prod}, expected 1")));
    }
    if c0.im.abs() <= 1e-15 && d0.im.abs() <= 1e-15 {
        Ok(XcdKind::Real)
    } else if (c0 - d0.conj()).norm() <= 1e-12 {
        Ok(XcdKind::Complex)
    } else {
        Err(QorbitError::Parameter("c0 and d0 must be real or complex conjugate".into()))
    }
}

/// A fixed spread of n = 1 elements used by the structural checks.
pub fn fx1_samples() -> Vec<Fx1> {
    let x = QCoeff::x(1);
    let qx = &QCoeff::q() * &x;
    vec![
        Fx1::zeta(1),
        Fx1::zeta(-2),
        Fx1::x(),
        Fx1::monomial(1, &x * &x),
        Fx1::monomial(-1, (&qx - &QCoeff::c()).inv().expect("qx - c is a nonzero rational function")),
        Fx1::y(),
        Fx1::yhat(),
        Fx1::zeta(2).add(&Fx1::monomial(0, &x - &QCoeff::d())),
    ]
}

/// Both n = 1 involutions are involutive and antimultiplicative on the samples.
pub fn check_star_fx1() -> Result<Option<String>> {
    type Star = fn(&Fx1) -> Result<Fx1>;
    let stars: [(&str, Star); 2] = [("real", |f| f.star_real(-1)), ("complex", |f| f.star_complex())];
    let samples = fx1_samples();
    for (name, star) in stars {
        for a in &samples {
            if &star(&star(a)?)? != a {
                return Ok(Some(format!("{name}: ** != id on {a}")));
            }
            for b in &samples {
                if star(&a.mul(b))? != star(b)?.mul(&star(a)?) {
                    return Ok(Some(format!("{name}: (ab)* != b*a* for a = {a}, b = {b}")));
                }
            }
        }
    }
    Ok(None)
}

/// U_q acts on the n = 1 algebra as a module algebra satisfying [E, F] = (K − K⁻¹)/(q⁻¹ − q).
pub fn check_module_law_fx1() -> Result<Option<String>> {
    let act = |g: Gen, f: &Fx1| uq_act_fx(g, f);
    let t = (&QCoeff::q_pow(-1) - &QCoeff::q()).inv()?;
    let samples = fx1_samples();
    for a in &samples {
        let ef = act(Gen::E(1), &act(Gen::F(1), a)?)?;
        let fe = act(Gen::F(1), &act(Gen::E(1), a)?)?;
        let kk = act(Gen::K(1), a)?.sub(&act(Gen::Kinv(1), a)?).scale(&t);
        if ef.sub(&fe) != kk {
            return Ok(Some(format!("[E, F] on {a}")));
        }
        for b in &samples {
            let ab = a.mul(b);
            if act(Gen::K(1), &ab)? != act(Gen::K(1), a)?.mul(&act(Gen::K(1), b)?) {
                return Ok(Some(format!("K on {a} * {b}")));
            }
            if act(Gen::E(1), &ab)? != act(Gen::E(1), a)?.mul(b).add(&act(Gen::Kinv(1), a)?.mul(&act(Gen::E(1), b)?)) {
                return Ok(Some(format!("E on {a} * {b}")));
            }
            if act(Gen::F(1), &ab)? != act(Gen::F(1), a)?.mul(&act(Gen::K(1), b)?).add(&a.mul(&act(Gen::F(1), b)?)) {
                return Ok(Some(format!("F on {a} * {b}")));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_passes_functions() {
        let z = FuncXElement::letter(1, ZLetter::Zeta(1));
        let q2x = FuncXElement::function(1, &QCoeff::q_pow(2) * &QCoeff::x(1));
        let lhs = q2x.mul(&z).unwrap();
        let rhs = FuncXElement::word(1, &[ZLetter::Zeta(1)], QCoeff::x(1)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn contractions() {
        let n = 1;
        let zzh = FuncXElement::word(n, &[ZLetter::Zeta(1), ZLetter::Zhat(1)], QCoeff::one()).unwrap();
        let x = |i| x_var(n, i);
        let expect = (&x(0) - &x(1)).div(&(&x(1) - &(&QCoeff::q_pow(-2) * &x(2)))).unwrap();
        assert_eq!(zzh, FuncXElement::function(n, expect));
        let zhz = FuncXElement::word(n, &[ZLetter::Zhat(1), ZLetter::Zeta(1)], QCoeff::one()).unwrap();
        let expect = (&(&QCoeff::q_pow(2) * &x(0)) - &x(1)).div(&(&x(1) - &x(2))).unwrap();
        assert_eq!(zhz, FuncXElement::function(n, expect));
    }

    #[test]
    fn zeta_relations_rank_two() {
        assert_eq!(check_zeta_relations(2, 3).unwrap(), None);
        let a = FuncXElement::word(2, &[ZLetter::Zeta(2), ZLetter::Zeta(1)], QCoeff::one()).unwrap();
        let b = FuncXElement::word(2, &[ZLetter::Zeta(1), ZLetter::Zeta(2)], QCoeff::q_pow(-1)).unwrap();
        assert_eq!(a, b);
        assert!(FuncXElement::word(2, &[ZLetter::Zhat(2), ZLetter::Zeta(1)], QCoeff::one()).is_err());
    }

    #[test]
    fn general_star_matches_fx1() {
        let n = 1;
        let z = FuncXElement::letter(n, ZLetter::Zeta(1));
        let zs = z.star(&[-1]).unwrap();
        let prod = z.mul(&zs).unwrap();
        let x = QCoeff::x(1);
        let qi = QCoeff::q_pow(-1);
        let expect = (&x - &(&qi * &QCoeff::d())).div(&(&x - &(&qi * &QCoeff::c()))).unwrap();
        assert_eq!(prod, FuncXElement::function(n, expect));
        assert_eq!(zs.star(&[-1]).unwrap(), z);
        let xf = FuncXElement::function(n, x.clone());
        assert_eq!(xf.star(&[-1]).unwrap(), xf);
    }

    #[test]
    fn fx1_relations() {
        let (x, y, yh) = (Fx1::x(), Fx1::y(), Fx1::yhat());
        let g = &QCoeff::x(1) * &QCoeff::x(1);
        let lhs = y.mul(&Fx1::function(g.clone()));
        let rhs = Fx1::function(shift1(&g, 2)).mul(&y);
        assert_eq!(lhs, rhs);
        let qx = &QCoeff::q() * &QCoeff::x(1);
        let expect = Fx1::function(-&(&(&qx - &QCoeff::c()) * &(&qx - &QCoeff::d())));
        assert_eq!(y.mul(&yh), expect);
        let qix = &QCoeff::q_pow(-1) * &QCoeff::x(1);
        let expect = Fx1::function(-&(&(&qix - &QCoeff::c()) * &(&qix - &QCoeff::d())));
        assert_eq!(yh.mul(&y), expect);
        assert!(Fx1::c().commutator(&y).is_zero());
        let _ = x;
        let zeta = Fx1::y().mul(&Fx1::function((&qx - &QCoeff::c()).inv().unwrap()).inverse().unwrap());
        let _ = zeta;
        let z = Fx1::function((&qx - &QCoeff::c()).inv().unwrap()).mul(&y);
        assert_eq!(z, Fx1::zeta(1));
    }

    #[test]
    fn star_real_and_complex() {
        let z = Fx1::zeta(1);
        let zs = z.star_real(-1).unwrap();
        let x = QCoeff::x(1);
        let qi = QCoeff::q_pow(-1);
        let q = QCoeff::q();
        let expect = (&x - &(&qi * &QCoeff::d())).div(&(&x - &(&qi * &QCoeff::c()))).unwrap();
        assert_eq!(z.mul(&zs), Fx1::function(expect));
        let expect = (&x - &(&q * &QCoeff::d())).div(&(&x - &(&q * &QCoeff::c()))).unwrap();
        assert_eq!(zs.mul(&z), Fx1::function(expect));
        assert_eq!(zs.star_real(-1).unwrap(), z);
        assert_eq!(Fx1::c().star_complex().unwrap(), Fx1::d());
        assert_eq!(z.mul(&z.star_complex().unwrap()), Fx1::one());
        assert_eq!(Fx1::y().star_complex().unwrap(), Fx1::yhat().scale(&QCoeff::from_i64(-1)));
        assert_eq!(Fx1::y().star_real(-1).unwrap(), Fx1::yhat().scale(&QCoeff::from_i64(-1)));
    }

    #[test]
    fn star_and_module_checks_pass() {
        assert_eq!(check_star_fx1().unwrap(), None);
        assert_eq!(check_module_law_fx1().unwrap(), None);
    }

    #[test]
    fn phi_identity() {
        assert!(phi_defect().unwrap().is_zero());
    }

    #[test]
    fn xcd_validation() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(xcd_algebra(one, one).unwrap(), XcdKind::Real);
        let c = Complex64::from_polar(1.0, 0.3);
        assert_eq!(xcd_algebra(c, c.conj()).unwrap(), XcdKind::Complex);
        assert!(xcd_algebra(Complex64::new(2.0, 0.0), one).is_err());
    }

    #[test]
    fn action_on_zeta() {
        let k = uq_act_fx(Gen::K(1), &Fx1::zeta(2)).unwrap();
        assert_eq!(k, Fx1::monomial(2, QCoeff::q_pow(-4)));
        let e = uq_act_fx(Gen::E(1), &Fx1::zeta(1)).unwrap();
        assert_eq!(e, Fx1::monomial(2, -&QCoeff::q()));
        let f = uq_act_fx(Gen::F(1), &Fx1::zeta(1)).unwrap();
        assert_eq!(f, Fx1::one());
        assert_eq!(uq_act_fx(Gen::K(1), &Fx1::x()).unwrap(), Fx1::x());
        assert_eq!(uq_act_fx(Gen::E(1), &Fx1::x()).unwrap(), Fx1::y());
        assert_eq!(uq_act_fx(Gen::F(1), &Fx1::x()).unwrap(), Fx1::yhat().scale(&-&QCoeff::q()));
        assert!(uq_act_fx(Gen::E(1), &Fx1::c()).unwrap().is_zero());
    }

    #[test]
    fn hol_difference_formulas() {
        // E f(ζ) = −qζ²(f(ζ) − f(q²ζ))/(ζ − q²ζ) on f = ζ³
        let e = uq_act_fx(Gen::E(1), &Fx1::zeta(3)).unwrap();
        let expect = &(-&QCoeff::q())
            * &(&QCoeff::one() - &QCoeff::q_pow(6)).div(&(&QCoeff::one() - &QCoeff::q_pow(2))).unwrap();
        assert_eq!(e, Fx1::monomial(4, expect));
        // F f(ζ) = (f(q⁻²ζ) − f(ζ))/(q⁻²ζ − ζ)
        let f = uq_act_fx(Gen::F(1), &Fx1::zeta(3)).unwrap();
        let expect = (&QCoeff::q_pow(-6) - &QCoeff::one()).div(&(&QCoeff::q_pow(-2) - &QCoeff::one())).unwrap();
        assert_eq!(f, Fx1::monomial(2, expect));
    }

    fn samples() -> Vec<Fx1> {
        fx1_samples()
    }

    #[test]
    fn module_algebra_law_fx1() {
        let one = Fx1::one();
        for a in samples() {
            for b in samples() {
                let ab = a.mul(&b);
                let k = |f: &Fx1| uq_act_fx(Gen::K(1), f).unwrap();
                let ki = |f: &Fx1| uq_act_fx(Gen::Kinv(1), f).unwrap();
                let e = |f: &Fx1| uq_act_fx(Gen::E(1), f).unwrap();
                let f_ = |f: &Fx1| uq_act_fx(Gen::F(1), f).unwrap();
                assert_eq!(k(&ab), k(&a).mul(&k(&b)));
                assert_eq!(e(&ab), e(&a).mul(&b).add(&ki(&a).mul(&e(&b))), "E on {a} * {b}");
                assert_eq!(f_(&ab), f_(&a).mul(&k(&b)).add(&a.mul(&f_(&b))), "F on {a} * {b}");
            }
        }
        assert!(uq_act_fx(Gen::E(1), &one).unwrap().is_zero());
    }

    #[test]
    fn action_respects_uq_relations() {
        // [E, F] = (K − K⁻¹)/(q⁻¹ − q) as operators on samples
        let t = (&QCoeff::q_pow(-1) - &QCoeff::q()).inv().unwrap();
        for a in samples() {
            let ef = uq_act_fx(Gen::E(1), &uq_act_fx(Gen::F(1), &a).unwrap()).unwrap();
            let fe = uq_act_fx(Gen::F(1), &uq_act_fx(Gen::E(1), &a).unwrap()).unwrap();
            let kk = uq_act_fx(Gen::K(1), &a).unwrap().sub(&uq_act_fx(Gen::Kinv(1), &a).unwrap()).scale(&t);
            assert_eq!(ef.sub(&fe), kk, "on {a}");
        }
    }

    #[test]
    fn lattice_action_matches_symbolic() {
        let (q0, nu0) = (0.6, 0.37);
        let c0 = Complex64::new(0.8, 0.0);
        let d0 = Complex64::new(1.25, 0.0);
        let x = QCoeff::x(1);
        let sym =
            Fx1::monomial(1, &x * &x).add(&Fx1::monomial(-1, &x - &QCoeff::c())).add(&Fx1::monomial(0, x.clone()));
        let mut lat = FxLattice::new(q0, c0, d0, nu0);
        let js = -3..=3;
        for (k, g) in sym.terms() {
            for j in js.clone() {
                let xv = Complex64::new(lat.point(j), 0.0);
                let v = sym.eval_at(q0, c0, d0, xv).unwrap()[k];
                let _ = g;
                lat.set(*k, j, v);
            }
        }
        for gen in [Gen::E(1), Gen::F(1), Gen::K(1)] {
            let s = uq_act_fx(gen, &sym).unwrap();
            let l = lat.act(gen);
            for j in -2..=2 {
                let xv = Complex64::new(lat.point(j), 0.0);
                let vals = s.eval_at(q0, c0, d0, xv).unwrap();
                for (k, v) in vals {
                    let got = l.terms.get(&k).and_then(|r| r.get(&j)).copied().unwrap_or_default();
                    assert!((got - v).norm() < 1e-9 * (1.0 + v.norm()), "{gen} k={k} j={j}: {got} vs {v}");
                }
            }
        }
    }
}
