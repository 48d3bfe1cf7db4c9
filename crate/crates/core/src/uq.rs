//! U_q(sl(n+1)) as linear combinations of words in E_i, F_i, K_i^{±1}.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeffs::QCoeff;
use crate::error::{QorbitError, Result};
use crate::sparse::SparseOp;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Gen {
    E(usize),
    F(usize),
    K(usize),
    Kinv(usize),
}

impl Gen {
    pub fn index(self) -> usize {
        match self {
            Gen::E(i) | Gen::F(i) | Gen::K(i) | Gen::Kinv(i) => i,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::E(i) => write!(f, "E{}", i),
            Gen::F(i) => write!(f, "F{}", i),
            Gen::K(i) => write!(f, "K{}", i),
            Gen::Kinv(i) => write!(f, "K{}^-1", i),
        }
    }
}

pub type Word = Vec<Gen>;

fn cancel_k(word: Word) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for g in word {
        match (out.last(), g) {
            (Some(Gen::K(i)), Gen::Kinv(j)) | (Some(Gen::Kinv(i)), Gen::K(j)) if *i == j => {
                out.pop();
            }
            _ => out.push(g),
        }
    }
    out
}

/// Cartan matrix entry of sl(n+1).
pub fn cartan(i: usize, j: usize) -> i32 {
    if i == j {
        2
    } else if i.abs_diff(j) == 1 {
        -1
    } else {
        0
    }
}

/// Anything U_q(sl(n+1)) acts on by sparse matrices.
pub trait UqModule {
    fn rank(&self) -> usize;
    fn dim(&self) -> usize;
    fn gen_op(&self, g: Gen) -> &SparseOp<QCoeff>;
}

#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    rank: usize,
    terms: BTreeMap<Word, QCoeff>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct TensorElement {
    rank: usize,
    terms: BTreeMap<(Word, Word), QCoeff>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StarForm {
    /// The compact form.
    Flat,
    /// The form twisted by signs (ι_0, ..., ι_n).
    Natural(Vec<i8>),
    /// Compact form compatible with the coproduct: E ↦ qK⁻¹F, F ↦ q⁻¹EK.
    Compact,
    /// `Compact` twisted by signs (ι_0, ..., ι_n).
    CompactNatural(Vec<i8>),
}

impl StarForm {
    fn sign(&self, i: usize) -> i64 {
        match self {
            StarForm::Flat | StarForm::Compact => 1,
            StarForm::Natural(iota) | StarForm::CompactNatural(iota) => (iota[i - 1] as i64) * (iota[i] as i64),
        }
    }
}

impl AlgebraElement {
    pub fn zero(rank: usize) -> Self {
        AlgebraElement { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::scalar(rank, QCoeff::one())
    }

    pub fn scalar(rank: usize, c: QCoeff) -> Self {
        Self::from_word(rank, Vec::new(), c)
    }

    pub fn gen(rank: usize, g: Gen) -> Self {
        Self::from_word(rank, vec![g], QCoeff::one())
    }

    pub fn e(rank: usize, i: usize) -> Self {
        Self::gen(rank, Gen::E(i))
    }

    pub fn f(rank: usize, i: usize) -> Self {
        Self::gen(rank, Gen::F(i))
    }

    pub fn k(rank: usize, i: usize) -> Self {
        Self::gen(rank, Gen::K(i))
    }

    pub fn kinv(rank: usize, i: usize) -> Self {
        Self::gen(rank, Gen::Kinv(i))
    }

    pub fn from_word(rank: usize, w: Word, c: QCoeff) -> Self {
        let mut a = Self::zero(rank);
        a.add_term(w, c);
        a
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &QCoeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &[Gen]) -> QCoeff {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, w: Word, c: QCoeff) {
        if c.is_zero() {
            return;
        }
        let w = cancel_k(w);
        let nv = match self.terms.get(&w) {
            Some(old) => old + &c,
            None => c,
        };
        if nv.is_zero() {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, nv);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&QCoeff::from_i64(-1)))
    }

    pub fn scale(&self, s: &QCoeff) -> Self {
        let mut out = Self::zero(self.rank);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rank);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_term(w, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.rank), |acc, _| acc.mul(self))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    fn extend_linear(&self, image: &dyn Fn(Gen) -> AlgebraElement, reverse: bool) -> Self {
        let mut out = Self::zero(self.rank);
        for (w, c) in &self.terms {
            let mut prod = Self::scalar(self.rank, c.clone());
            let letters: Box<dyn Iterator<Item = &Gen>> =
                if reverse { Box::new(w.iter().rev()) } else { Box::new(w.iter()) };
            for g in letters {
                prod = prod.mul(&image(*g));
            }
            out = out.add(&prod);
        }
        out
    }

    pub fn coproduct(&self) -> TensorElement {
        let n = self.rank;
        let one = Vec::new;
        let delta = |g: Gen| -> TensorElement {
            let mut t = TensorElement::zero(n);
            match g {
                Gen::E(i) => {
                    t.add_term(vec![Gen::E(i)], one(), QCoeff::one());
                    t.add_term(vec![Gen::Kinv(i)], vec![Gen::E(i)], QCoeff::one());
                }
                Gen::F(i) => {
                    t.add_term(vec![Gen::F(i)], vec![Gen::K(i)], QCoeff::one());
                    t.add_term(one(), vec![Gen::F(i)], QCoeff::one());
                }
                Gen::K(i) | Gen::Kinv(i) => {
                    let _ = i;
                    t.add_term(vec![g], vec![g], QCoeff::one());
                }
            }
            t
        };
        let mut out = TensorElement::zero(n);
        for (w, c) in &self.terms {
            let mut prod = TensorElement::zero(n);
            prod.add_term(Vec::new(), Vec::new(), c.clone());
            for g in w {
                prod = prod.mul(&delta(*g));
            }
            out = out.add(&prod);
        }
        out
    }

    pub fn antipode(&self) -> Self {
        let n = self.rank;
        let minus = QCoeff::from_i64(-1);
        let s = |g: Gen| match g {
            Gen::E(i) => AlgebraElement::from_word(n, vec![Gen::K(i), Gen::E(i)], minus.clone()),
            Gen::F(i) => AlgebraElement::from_word(n, vec![Gen::F(i), Gen::Kinv(i)], minus.clone()),
            Gen::K(i) => AlgebraElement::kinv(n, i),
            Gen::Kinv(i) => AlgebraElement::k(n, i),
        };
        self.extend_linear(&s, true)
    }

    pub fn counit(&self) -> QCoeff {
        let mut total = QCoeff::zero();
        for (w, c) in &self.terms {
            if w.iter().all(|g| matches!(g, Gen::K(_) | Gen::Kinv(_))) {
                total = &total + c;
            }
        }
        total
    }

    pub fn star_form(&self, form: &StarForm) -> Result<Self> {
        let n = self.rank;
        if let StarForm::Natural(iota) | StarForm::CompactNatural(iota) = form {
            if iota.len() != n + 1 || iota.iter().any(|s| *s != 1 && *s != -1) {
                return Err(QorbitError::Parameter(format!("sign vector must have {} entries of ±1", n + 1)));
            }
        }
        let compact = matches!(form, StarForm::Compact | StarForm::CompactNatural(_));
        let img = |g: Gen| {
            let s = QCoeff::from_i64(form.sign(g.index()));
            match (g, compact) {
                (Gen::E(i), false) => AlgebraElement::from_word(n, vec![Gen::Kinv(i), Gen::Kinv(i), Gen::F(i)], s),
                (Gen::F(i), false) => AlgebraElement::from_word(n, vec![Gen::E(i), Gen::K(i), Gen::K(i)], s),
                (Gen::E(i), true) => AlgebraElement::from_word(n, vec![Gen::Kinv(i), Gen::F(i)], &s * &QCoeff::q()),
                (Gen::F(i), true) => AlgebraElement::from_word(n, vec![Gen::E(i), Gen::K(i)], &s * &QCoeff::q_pow(-1)),
                _ => AlgebraElement::gen(n, g),
            }
        };
        let mut out = Self::zero(n);
        for (w, c) in &self.terms {
            let single = Self::from_word(n, w.clone(), QCoeff::one());
            out = out.add(&single.extend_linear(&img, true).scale(&c.conj()));
        }
        Ok(out)
    }

    /// ad_q(a) b = Σ a₁ b S(a₂).
    pub fn adjoint_action(a: &Self, b: &Self) -> Self {
        let mut out = Self::zero(a.rank);
        for ((w1, w2), c) in a.coproduct().terms() {
            let left = Self::from_word(a.rank, w1.clone(), c.clone());
            let right = Self::from_word(a.rank, w2.clone(), QCoeff::one()).antipode();
            out = out.add(&left.mul(b).mul(&right));
        }
        out
    }

    /// Sign automorphism E_i ↦ −E_i, K_i^{±1} ↦ −K_i^{±1}, F fixed.
    pub fn automorphism_i(&self, i: usize) -> Self {
        let n = self.rank;
        let img = |g: Gen| {
            let s = match g {
                Gen::E(j) | Gen::K(j) | Gen::Kinv(j) if j == i => -1,
                _ => 1,
            };
            AlgebraElement::from_word(n, vec![g], QCoeff::from_i64(s))
        };
        self.extend_linear(&img, false)
    }

    pub fn operator(&self, module: &dyn UqModule) -> SparseOp<QCoeff> {
        let d = module.dim();
        let mut total = SparseOp::zeros(d, d);
        for (w, c) in &self.terms {
            let mut op = SparseOp::identity(d).scale(c);
            for g in w {
                op = op.compose(module.gen_op(*g));
            }
            total = total.add(&op);
        }
        total
    }

    /// Equality of the images on a faithful module.
    pub fn eq_on(&self, other: &Self, module: &dyn UqModule) -> bool {
        self.sub(other).operator(module).is_zero()
    }
}

/// The quadratic Casimir of U_q(sl(2)).
pub fn casimir_sl2(rank: usize) -> Result<AlgebraElement> {
    if rank != 1 {
        return Err(QorbitError::UnsupportedRank { rank, what: "casimir_sl2 needs rank 1".into() });
    }
    let e = AlgebraElement::e(1, 1);
    let f = AlgebraElement::f(1, 1);
    let k = AlgebraElement::k(1, 1);
    let kinv = AlgebraElement::kinv(1, 1);
    let half = QCoeff::from_ratio(1, 2);
    let t = &QCoeff::q_pow(-1) - &QCoeff::q();
    let coef = (&(&QCoeff::q_pow(-1) + &QCoeff::q()) * &half).div(&(&t * &t)).expect("nonzero");
    let sym = e.mul(&f).add(&f.mul(&e)).scale(&half);
    let cart = k.sub(&AlgebraElement::scalar(1, QCoeff::from_i64(2))).add(&kinv).scale(&coef);
    Ok(sym.add(&cart))
}

/// Every defining relation of U_q(sl(n+1)), written as an element that must vanish.
pub fn defining_relations(n: usize) -> Vec<(String, AlgebraElement)> {
    let mut out = Vec::new();
    let t = &QCoeff::q_pow(-1) - &QCoeff::q();
    let tinv = t.inv().expect("nonzero");
    let one = AlgebraElement::one(n);
    for i in 1..=n {
        let (e, f, k, ki) =
            (AlgebraElement::e(n, i), AlgebraElement::f(n, i), AlgebraElement::k(n, i), AlgebraElement::kinv(n, i));
        out.push((format!("K{i}K{i}^-1 = 1"), k.mul(&ki).sub(&one)));
        for j in 1..=n {
            let (ej, fj, kj) = (AlgebraElement::e(n, j), AlgebraElement::f(n, j), AlgebraElement::k(n, j));
            let a = cartan(i, j);
            let rhs = if i == j { k.sub(&ki).scale(&tinv) } else { AlgebraElement::zero(n) };
            out.push((format!("[E{i},F{j}]"), e.commutator(&fj).sub(&rhs)));
            out.push((format!("K{i}E{j}"), k.mul(&ej).sub(&ej.mul(&k).scale(&QCoeff::q_pow(-a)))));
            out.push((format!("K{i}F{j}"), k.mul(&fj).sub(&fj.mul(&k).scale(&QCoeff::q_pow(a)))));
            out.push((format!("K{i}K{j}"), k.commutator(&kj)));
            if i.abs_diff(j) == 1 {
                let qq = &QCoeff::q() + &QCoeff::q_pow(-1);
                for (name, x, y) in [("E", &e, &ej), ("F", &f, &fj)] {
                    let serre = x.mul(x).mul(y).sub(&x.mul(y).mul(x).scale(&qq)).add(&y.mul(x).mul(x));
                    out.push((format!("Serre {name}{i}{name}{j}"), serre));
                }
            } else if i.abs_diff(j) > 1 {
                out.push((format!("[E{i},E{j}]"), e.commutator(&ej)));
                out.push((format!("[F{i},F{j}]"), f.commutator(&AlgebraElement::f(n, j))));
            }
        }
    }
    out
}

impl TensorElement {
    pub fn zero(rank: usize) -> Self {
        TensorElement { rank, terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Word, Word), &QCoeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, a: Word, b: Word, c: QCoeff) {
        if c.is_zero() {
            return;
        }
        let key = (cancel_k(a), cancel_k(b));
        let nv = match self.terms.get(&key) {
            Some(old) => old + &c,
            None => c,
        };
        if nv.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, nv);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rank);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                let mut a = a1.clone();
                a.extend_from_slice(a2);
                let mut b = b1.clone();
                b.extend_from_slice(b2);
                out.add_term(a, b, c1 * c2);
            }
        }
        out
    }

    /// (ε ⊗ id) applied to the tensor.
    pub fn counit_left(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.rank);
        for ((a, b), c) in &self.terms {
            let e = AlgebraElement::from_word(self.rank, a.clone(), QCoeff::one()).counit();
            out.add_term(b.clone(), c * &e);
        }
        out
    }

    /// m ∘ (S ⊗ id).
    pub fn antipode_multiply(&self) -> AlgebraElement {
        let mut out = AlgebraElement::zero(self.rank);
        for ((a, b), c) in &self.terms {
            let sa = AlgebraElement::from_word(self.rank, a.clone(), c.clone()).antipode();
            out = out.add(&sa.mul(&AlgebraElement::from_word(self.rank, b.clone(), QCoeff::one())));
        }
        out
    }
}

fn fmt_word(w: &[Gen]) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("")
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("({}){}", c, fmt_word(w))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|((a, b), c)| format!("({}){}⊗{}", c, fmt_word(a), fmt_word(b))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parse expressions like `E1 F1 - (q^2) K1^-1 + 2 E2`.
pub fn parse_element(rank: usize, s: &str) -> Result<AlgebraElement> {
    let b = s.as_bytes();
    let mut pos = 0;
    let err = |pos: usize, msg: &str| QorbitError::Parse { pos, msg: msg.to_string() };
    let skip = |pos: &mut usize| {
        while *pos < b.len() && b[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let number = |pos: &mut usize| -> Option<usize> {
        let start = *pos;
        while *pos < b.len() && b[*pos].is_ascii_digit() {
            *pos += 1;
        }
        std::str::from_utf8(&b[start..*pos]).ok()?.parse().ok()
    };
    let mut total = AlgebraElement::zero(rank);
    let mut sign = 1i64;
    let mut term = AlgebraElement::one(rank);
    let mut empty = true;
    loop {
        skip(&mut pos);
        if pos >= b.len() {
            break;
        }
        match b[pos] {
            b'+' | b'-' => {
                if !empty {
                    total = total.add(&term.scale(&QCoeff::from_i64(sign)));
                }
                sign = if b[pos] == b'-' { -1 } else { 1 };
                term = AlgebraElement::one(rank);
                empty = true;
                pos += 1;
            }
            b'(' => {
                let start = pos + 1;
                let mut depth = 1;
                pos += 1;
                while pos < b.len() && depth > 0 {
                    match b[pos] {
                        b'(' => depth += 1,
                        b')' => depth -= 1,
                        _ => {}
                    }
                    pos += 1;
                }
                if depth != 0 {
                    return Err(err(pos, "unbalanced parenthesis"));
                }
                let inner = std::str::from_utf8(&b[start..pos - 1]).unwrap();
                let c: QCoeff = inner.parse()?;
                term = term.scale(&c);
                empty = false;
            }
            c if c.is_ascii_digit() => {
                let k = number(&mut pos).ok_or_else(|| err(pos, "bad number"))?;
                term = term.scale(&QCoeff::from_i64(k as i64));
                empty = false;
            }
            c @ (b'E' | b'F' | b'K') => {
                pos += 1;
                let i = number(&mut pos).ok_or_else(|| err(pos, "expected generator index"))?;
                if i == 0 || i > rank {
                    return Err(err(pos, "generator index out of range"));
                }
                let mut g = match c {
                    b'E' => AlgebraElement::e(rank, i),
                    b'F' => AlgebraElement::f(rank, i),
                    _ => AlgebraElement::k(rank, i),
                };
                if pos < b.len() && b[pos] == b'^' {
                    pos += 1;
                    let neg = pos < b.len() && b[pos] == b'-';
                    if neg {
                        pos += 1;
                    }
                    let k = number(&mut pos).ok_or_else(|| err(pos, "expected exponent"))? as u32;
                    if neg {
                        if c != b'K' {
                            return Err(err(pos, "only K has an inverse"));
                        }
                        g = AlgebraElement::kinv(rank, i);
                    }
                    g = g.pow(k);
                }
                term = term.mul(&g);
                empty = false;
            }
            _ => return Err(err(pos, "unexpected character")),
        }
    }
    if empty {
        if total.is_zero() && sign == 1 {
            return Err(err(pos, "empty expression"));
        }
        return Err(err(pos, "dangling sign"));
    }
    Ok(total.add(&term.scale(&QCoeff::from_i64(sign))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coproduct_of_generators() {
        let k = AlgebraElement::k(1, 1).coproduct();
        assert_eq!(k.to_string(), "(1)K1⊗K1");
        let e = AlgebraElement::e(1, 1).coproduct();
        let mut expect = TensorElement::zero(1);
        expect.add_term(vec![Gen::E(1)], vec![], QCoeff::one());
        expect.add_term(vec![Gen::Kinv(1)], vec![Gen::E(1)], QCoeff::one());
        assert_eq!(e, expect);
        let one = AlgebraElement::one(1).coproduct();
        assert_eq!(one.to_string(), "(1)1⊗1");
    }

    #[test]
    fn antipode_and_counit() {
        let s = AlgebraElement::e(1, 1).antipode();
        assert_eq!(s, AlgebraElement::from_word(1, vec![Gen::K(1), Gen::E(1)], QCoeff::from_i64(-1)));
        assert_eq!(AlgebraElement::k(1, 1).antipode(), AlgebraElement::kinv(1, 1));
        assert!(AlgebraElement::f(1, 1).counit().is_zero());
    }

    #[test]
    fn star_forms() {
        let e = AlgebraElement::e(1, 1);
        let flat = e.star_form(&StarForm::Flat).unwrap();
        assert_eq!(flat, AlgebraElement::from_word(1, vec![Gen::Kinv(1), Gen::Kinv(1), Gen::F(1)], QCoeff::one()));
        let nat = e.star_form(&StarForm::Natural(vec![-1, 1])).unwrap();
        assert_eq!(nat, flat.scale(&QCoeff::from_i64(-1)));
        let f = AlgebraElement::f(1, 1);
        assert_eq!(f.star_form(&StarForm::Flat).unwrap().star_form(&StarForm::Flat).unwrap(), f);
        assert!(e.star_form(&StarForm::Natural(vec![2, 1])).is_err());
    }

    #[test]
    fn adjoint_action_examples() {
        let b = AlgebraElement::f(1, 1);
        let k = AlgebraElement::k(1, 1);
        let ad = AlgebraElement::adjoint_action(&k, &b);
        assert_eq!(ad, k.mul(&b).mul(&AlgebraElement::kinv(1, 1)));
        assert_eq!(AlgebraElement::adjoint_action(&AlgebraElement::one(1), &b), b);
        let e = AlgebraElement::e(1, 1);
        let expect = e.mul(&b).add(&AlgebraElement::kinv(1, 1).mul(&b).mul(&e.antipode()));
        assert_eq!(AlgebraElement::adjoint_action(&e, &b), expect);
    }

    #[test]
    fn casimir_coefficients() {
        let c = casimir_sl2(1).unwrap();
        let t = &QCoeff::q_pow(-1) - &QCoeff::q();
        let expect = (&QCoeff::q_pow(-1) + &QCoeff::q()).div(&(&(&t * &t) * &QCoeff::from_i64(2))).unwrap();
        assert_eq!(c.coefficient(&[Gen::K(1)]), expect);
        assert!(c.counit().is_zero());
        assert!(casimir_sl2(2).is_err());
    }

    #[test]
    fn hopf_axioms_on_generators() {
        for g in [Gen::E(1), Gen::F(1), Gen::K(1), Gen::Kinv(1), Gen::E(2), Gen::F(2)] {
            let a = AlgebraElement::gen(2, g);
            let d = a.coproduct();
            assert_eq!(d.counit_left(), a);
            let expect = AlgebraElement::scalar(2, a.counit());
            assert_eq!(d.antipode_multiply(), expect, "antipode axiom for {g}");
        }
    }

    #[test]
    fn omega_squared_on_generators() {
        let omega = |x: &AlgebraElement| x.antipode().star_form(&StarForm::Flat).unwrap();
        let (e, f, k, ki) =
            (AlgebraElement::e(1, 1), AlgebraElement::f(1, 1), AlgebraElement::k(1, 1), AlgebraElement::kinv(1, 1));
        assert_eq!(omega(&omega(&k)), k);
        assert_eq!(omega(&omega(&e)), k.mul(&e).mul(&k));
        assert_eq!(omega(&omega(&f)), ki.mul(&f).mul(&ki));
    }

    #[test]
    fn compact_form_is_hopf_star() {
        let omega = |x: &AlgebraElement| x.antipode().star_form(&StarForm::Compact).unwrap();
        for g in [Gen::E(1), Gen::F(1), Gen::K(1), Gen::E(2), Gen::F(2)] {
            let a = AlgebraElement::gen(2, g);
            assert_eq!(omega(&omega(&a)), a, "omega twice on {g}");
            let twice = a.star_form(&StarForm::Compact).unwrap().star_form(&StarForm::Compact).unwrap();
            assert_eq!(twice, a);
        }
    }

    #[test]
    fn automorphism_i_signs() {
        let e = AlgebraElement::e(1, 1);
        assert_eq!(e.automorphism_i(1), e.scale(&QCoeff::from_i64(-1)));
        assert_eq!(AlgebraElement::f(1, 1).automorphism_i(1), AlgebraElement::f(1, 1));
        let k = AlgebraElement::k(1, 1);
        assert_eq!(k.automorphism_i(1), k.scale(&QCoeff::from_i64(-1)));
        assert_eq!(k.automorphism_i(1).automorphism_i(1), k);
    }

    #[test]
    fn parser_roundtrip() {
        let a = parse_element(1, "E1F1 - (q^2) K1^-1 + 2").unwrap();
        let expect = AlgebraElement::e(1, 1)
            .mul(&AlgebraElement::f(1, 1))
            .sub(&AlgebraElement::kinv(1, 1).scale(&QCoeff::q_pow(2)))
            .add(&AlgebraElement::scalar(1, QCoeff::from_i64(2)));
        assert_eq!(a, expect);
        assert!(parse_element(1, "E3").is_err());
        assert!(parse_element(1, "E1 -").is_err());
    }
}
