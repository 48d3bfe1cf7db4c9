//! Quantum Heisenberg algebra over sl(n+1), its Fock module W and the U_q action.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num_rational::BigRational;

use crate::coeffs::{QCoeff, VAR_Q};
use crate::error::{QorbitError, Result};
use crate::sparse::SparseOp;
use crate::uq::{defining_relations, AlgebraElement, Gen, StarForm, UqModule};

/// Generators z_i, C, ẑ_i. The derived order is the normal order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    Z(usize),
    C,
    H(usize),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Z(i) => write!(f, "z{}", i),
            Letter::C => write!(f, "C"),
            Letter::H(i) => write!(f, "zh{}", i),
        }
    }
}

pub type HWord = Vec<Letter>;

/// Which redex the rewriter contracts first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

type Terms = BTreeMap<HWord, QCoeff>;

thread_local! {
    static NF_CACHE: RefCell<HashMap<(usize, Strategy, HWord), Rc<Terms>>> = RefCell::new(HashMap::new());
}

fn add_into(terms: &mut Terms, w: HWord, c: QCoeff) {
    if c.is_zero() {
        return;
    }
    let nv = match terms.get(&w) {
        Some(old) => old + &c,
        None => c,
    };
    if nv.is_zero() {
        terms.remove(&w);
    } else {
        terms.insert(w, nv);
    }
}

fn rewrite(n: usize, a: Letter, b: Letter) -> Vec<(HWord, QCoeff)> {
    use Letter::*;
    match (a, b) {
        (Z(j), Z(i)) => vec![(vec![Z(i), Z(j)], QCoeff::q_pow(-1))],
        (H(j), H(i)) => vec![(vec![H(i), H(j)], QCoeff::q())],
        (C, Z(i)) => vec![(vec![Z(i), C], QCoeff::q_pow(-2))],
        (H(i), C) => vec![(vec![C, H(i)], QCoeff::q_pow(-2))],
        (H(j), Z(i)) if i != j => vec![(vec![Z(i), H(j)], QCoeff::q_pow(-1))],
        (H(i), Z(_)) => {
            let mut out = vec![(vec![Z(i), H(i)], QCoeff::one()), (vec![C], QCoeff::from_i64(-1))];
            let s = &QCoeff::one() - &QCoeff::q_pow(-2);
            for k in i + 1..=n {
                out.push((vec![Z(k), H(k)], s.clone()));
            }
            out
        }
        _ => unreachable!("{a} {b} is already ordered"),
    }
}

fn redex(w: &[Letter], strategy: Strategy) -> Option<usize> {
    let mut it = (0..w.len().saturating_sub(1)).filter(|&p| w[p] > w[p + 1]);
    match strategy {
        Strategy::Leftmost => it.next(),
        Strategy::Rightmost => it.next_back(),
    }
}

fn normal_terms(n: usize, w: &[Letter], strategy: Strategy) -> Rc<Terms> {
    let key = (n, strategy, w.to_vec());
    if let Some(hit) = NF_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let mut out = Terms::new();
    match redex(w, strategy) {
        None => {
            out.insert(w.to_vec(), QCoeff::one());
        }
        Some(p) => {
            for (mid, c) in rewrite(n, w[p], w[p + 1]) {
                let mut nw = w[..p].to_vec();
                nw.extend(mid);
                nw.extend_from_slice(&w[p + 2..]);
                for (rw, rc) in normal_terms(n, &nw, strategy).iter() {
                    add_into(&mut out, rw.clone(), rc * &c);
                }
            }
        }
    }
    let out = Rc::new(out);
    NF_CACHE.with(|c| c.borrow_mut().insert(key, out.clone()));
    out
}

/// Linear combination of normal-ordered monomials.
#[derive(Clone, PartialEq, Eq)]
pub struct HeisElement {
    n: usize,
    terms: Terms,
}

impl HeisElement {
    pub fn zero(n: usize) -> Self {
        HeisElement { n, terms: Terms::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::word(n, &[])
    }

    pub fn scalar(n: usize, c: QCoeff) -> Self {
        Self::one(n).scale(&c)
    }

    pub fn letter(n: usize, l: Letter) -> Self {
        Self::word(n, &[l])
    }

    pub fn z(n: usize, i: usize) -> Self {
        Self::letter(n, Letter::Z(i))
    }

    pub fn zhat(n: usize, i: usize) -> Self {
        Self::letter(n, Letter::H(i))
    }

    pub fn c(n: usize) -> Self {
        Self::letter(n, Letter::C)
    }

    /// Normal form of an arbitrary word.
    pub fn word(n: usize, w: &[Letter]) -> Self {
        Self::word_with(n, w, Strategy::Leftmost)
    }

    pub fn word_with(n: usize, w: &[Letter], strategy: Strategy) -> Self {
        assert!(w.iter().all(|l| !matches!(l, Letter::Z(i) | Letter::H(i) if *i > n)), "letter index above rank");
        HeisElement { n, terms: (*normal_terms(n, w, strategy)).clone() }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HWord, &QCoeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &[Letter]) -> QCoeff {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            add_into(&mut out.terms, w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&QCoeff::from_i64(-1)))
    }

    pub fn scale(&self, s: &QCoeff) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            add_into(&mut out.terms, w.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                let cc = ca * cb;
                for (rw, rc) in normal_terms(self.n, &w, Strategy::Leftmost).iter() {
                    add_into(&mut out.terms, rw.clone(), rc * &cc);
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    fn from_raw(n: usize, raw: Vec<(HWord, QCoeff)>) -> Self {
        let mut out = Self::zero(n);
        for (w, c) in raw {
            for (rw, rc) in normal_terms(n, &w, Strategy::Leftmost).iter() {
                add_into(&mut out.terms, rw.clone(), rc * &c);
            }
        }
        out
    }
}

impl fmt::Display for HeisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let m = if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("*")
                };
                format!("({}){}", c, m)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for HeisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn k_weight(g: Gen, l: Letter) -> i32 {
    let (i, sign) = match g {
        Gen::K(i) => (i, 1),
        Gen::Kinv(i) => (i, -1),
        _ => return 0,
    };
    let e = match l {
        Letter::Z(j) if j + 1 == i => -1,
        Letter::Z(j) if j == i => 1,
        Letter::H(j) if j + 1 == i => 1,
        Letter::H(j) if j == i => -1,
        _ => 0,
    };
    sign * e
}

fn letter_image(g: Gen, l: Letter) -> Option<(Letter, QCoeff)> {
    match (g, l) {
        (Gen::E(i), Letter::Z(j)) if i == j => Some((Letter::Z(j - 1), QCoeff::one())),
        (Gen::E(i), Letter::H(j)) if j + 1 == i => Some((Letter::H(j + 1), -&QCoeff::q_pow(-1))),
        (Gen::F(i), Letter::Z(j)) if j + 1 == i => Some((Letter::Z(j + 1), QCoeff::one())),
        (Gen::F(i), Letter::H(j)) if i == j => Some((Letter::H(j - 1), -&QCoeff::q())),
        _ => None,
    }
}

/// Action of a single generator, extended by the module-algebra rule.
pub fn uq_act_heis(g: Gen, f: &HeisElement) -> HeisElement {
    let n = f.n;
    assert!(g.index() >= 1 && g.index() <= n, "generator index out of range");
    let mut raw = Vec::new();
    for (w, c) in &f.terms {
        match g {
            Gen::K(_) | Gen::Kinv(_) => {
                let e: i32 = w.iter().map(|l| k_weight(g, *l)).sum();
                raw.push((w.clone(), c * &QCoeff::q_pow(e)));
            }
            Gen::E(i) | Gen::F(i) => {
                for p in 0..w.len() {
                    let Some((img, s)) = letter_image(g, w[p]) else { continue };
                    let e: i32 = if matches!(g, Gen::E(_)) {
                        w[..p].iter().map(|l| k_weight(Gen::Kinv(i), *l)).sum()
                    } else {
                        w[p + 1..].iter().map(|l| k_weight(Gen::K(i), *l)).sum()
                    };
                    let mut nw = w.clone();
                    nw[p] = img;
                    raw.push((nw, &(c * &s) * &QCoeff::q_pow(e)));
                }
            }
        }
    }
    HeisElement::from_raw(n, raw)
}

/// Action of an arbitrary element of U_q.
pub fn uq_act(xi: &AlgebraElement, f: &HeisElement) -> HeisElement {
    let mut out = HeisElement::zero(f.n);
    for (w, c) in xi.terms() {
        let mut v = f.clone();
        for g in w.iter().rev() {
            v = uq_act_heis(*g, &v);
        }
        out = out.add(&v.scale(c));
    }
    out
}

/// x_i = Σ_{k≥i} z_k ẑ_k + q c with c = C/(q⁻¹−q).
pub fn invariants_x(i: usize, n: usize) -> Result<HeisElement> {
    if i > n + 1 {
        return Err(QorbitError::Parameter(format!("x index {i} above n+1 = {}", n + 1)));
    }
    let qc = QCoeff::q().div(&(&QCoeff::q_pow(-1) - &QCoeff::q()))?;
    let mut out = HeisElement::c(n).scale(&qc);
    for k in i..=n {
        out = out.add(&HeisElement::word(n, &[Letter::Z(k), Letter::H(k)]));
    }
    Ok(out)
}

/// Involutions of H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeisInvolution {
    /// z_i ↦ ẑ_i, C ↦ C.
    Sharp,
    /// z_i ↦ ι_i ẑ_i, C ↦ C.
    Star(Vec<i8>),
}

pub fn heis_star(f: &HeisElement, which: &HeisInvolution) -> Result<HeisElement> {
    let n = f.n;
    if let HeisInvolution::Star(iota) = which {
        if iota.len() != n + 1 || iota.iter().any(|s| *s != 1 && *s != -1) {
            return Err(QorbitError::Parameter(format!("sign vector must have {} entries of ±1", n + 1)));
        }
    }
    let img = |l: Letter| -> (Letter, QCoeff) {
        match (l, which) {
            (Letter::C, _) => (Letter::C, QCoeff::one()),
            (Letter::Z(i), HeisInvolution::Sharp) => (Letter::H(i), QCoeff::one()),
            (Letter::H(i), HeisInvolution::Sharp) => (Letter::Z(i), QCoeff::one()),
            (Letter::Z(i), HeisInvolution::Star(iota)) => (Letter::H(i), QCoeff::from_i64(iota[i] as i64)),
            (Letter::H(i), HeisInvolution::Star(iota)) => (Letter::Z(i), QCoeff::from_i64(iota[i] as i64)),
        }
    };
    let mut raw = Vec::new();
    for (w, c) in &f.terms {
        let mut coef = c.conj();
        let mut nw = Vec::with_capacity(w.len());
        for l in w.iter().rev() {
            let (nl, s) = img(*l);
            coef = &coef * &s;
            nw.push(nl);
        }
        raw.push((nw, coef));
    }
    Ok(HeisElement::from_raw(n, raw))
}

/// ω(ξ) = S(ξ)^*, the twist in the module-*-algebra law.
pub fn omega(xi: &AlgebraElement, form: &StarForm) -> Result<AlgebraElement> {
    xi.antipode().star_form(form)
}

/// Element of H ⊗ H.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeisTensor {
    n: usize,
    terms: BTreeMap<(HWord, HWord), QCoeff>,
}

impl HeisTensor {
    pub fn zero(n: usize) -> Self {
        HeisTensor { n, terms: BTreeMap::new() }
    }

    pub fn add_product(&mut self, a: &HeisElement, b: &HeisElement, c: &QCoeff) {
        for (wa, ca) in &a.terms {
            for (wb, cb) in &b.terms {
                let key = (wa.clone(), wb.clone());
                let v = &(ca * cb) * c;
                let nv = match self.terms.get(&key) {
                    Some(old) => old + &v,
                    None => v,
                };
                if nv.is_zero() {
                    self.terms.remove(&key);
                } else {
                    self.terms.insert(key, nv);
                }
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_product(&HeisElement::word(self.n, a), &HeisElement::word(self.n, b), &-c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Tensor-product action through the coproduct.
    pub fn act(&self, xi: &AlgebraElement) -> Self {
        let mut out = Self::zero(self.n);
        for ((w1, w2), c) in xi.coproduct().terms() {
            let a1 = AlgebraElement::from_word(xi.rank(), w1.clone(), QCoeff::one());
            let a2 = AlgebraElement::from_word(xi.rank(), w2.clone(), QCoeff::one());
            for ((ta, tb), tc) in &self.terms {
                let fa = uq_act(&a1, &HeisElement::word(self.n, ta));
                let fb = uq_act(&a2, &HeisElement::word(self.n, tb));
                out.add_product(&fa, &fb, &(c * tc));
            }
        }
        out
    }
}

/// Σ z_k⊗ẑ_k − Σ q^{−2k} ẑ_k⊗z_k.
pub fn i0_vector(n: usize) -> HeisTensor {
    let mut v = HeisTensor::zero(n);
    for k in 0..=n {
        v.add_product(&HeisElement::z(n, k), &HeisElement::zhat(n, k), &QCoeff::one());
        v.add_product(&HeisElement::zhat(n, k), &HeisElement::z(n, k), &-&QCoeff::q_pow(-2 * k as i32));
    }
    v
}

/// Outcome of an exact structural check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub check: String,
    pub n: usize,
    pub degree: usize,
    pub pass: bool,
    pub counterexample: Option<String>,
}

impl CheckReport {
    fn new(check: &str, n: usize, degree: usize, counterexample: Option<String>) -> Self {
        CheckReport { check: check.to_string(), n, degree, pass: counterexample.is_none(), counterexample }
    }
}

pub fn check_i0_invariance(n: usize) -> CheckReport {
    let v = i0_vector(n);
    let mut bad = None;
    'outer: for i in 1..=n {
        for g in [Gen::E(i), Gen::F(i), Gen::K(i), Gen::Kinv(i)] {
            let xi = AlgebraElement::gen(n, g);
            let expect = if matches!(g, Gen::K(_) | Gen::Kinv(_)) { v.clone() } else { HeisTensor::zero(n) };
            if !v.act(&xi).sub(&expect).is_zero() {
                bad = Some(format!("{g} does not act on the invariant tensor by its counit"));
                break 'outer;
            }
        }
    }
    CheckReport::new("i0", n, 1, bad)
}

/// A vector z^m·1_χ combination.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WVector {
    pub terms: BTreeMap<Vec<u32>, QCoeff>,
}

impl WVector {
    pub fn basis(m: Vec<u32>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(m, QCoeff::one());
        WVector { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn base_word(m: &[u32]) -> HWord {
    m.iter().enumerate().flat_map(|(k, &e)| std::iter::repeat_n(Letter::Z(k), e as usize)).collect()
}

/// χ kills ẑ and sends C to 1.
fn project_chi(terms: &Terms, n: usize) -> BTreeMap<Vec<u32>, QCoeff> {
    let mut out: BTreeMap<Vec<u32>, QCoeff> = BTreeMap::new();
    for (w, c) in terms {
        if w.iter().any(|l| matches!(l, Letter::H(_))) {
            continue;
        }
        let mut m = vec![0u32; n + 1];
        for l in w {
            if let Letter::Z(k) = l {
                m[*k] += 1;
            }
        }
        let nv = match out.get(&m) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if nv.is_zero() {
            out.remove(&m);
        } else {
            out.insert(m, nv);
        }
    }
    out
}

fn compositions(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in compositions(n - 1, d - first) {
            let mut m = vec![first];
            m.append(&mut rest);
            out.push(m);
        }
    }
    out
}

/// The Fock module truncated at total degree N.
#[derive(Clone, Debug)]
pub struct WModule {
    n: usize,
    max_degree: usize,
    basis: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    gens: BTreeMap<Gen, SparseOp<QCoeff>>,
    z: Vec<SparseOp<QCoeff>>,
    zhat: Vec<SparseOp<QCoeff>>,
    c: SparseOp<QCoeff>,
}

impl WModule {
    pub fn build(n: usize, max_degree: usize) -> Result<Self> {
        if n == 0 {
            return Err(QorbitError::Parameter("rank must be at least 1".into()));
        }
        let basis: Vec<Vec<u32>> = (0..=max_degree as u32).flat_map(|d| compositions(n, d)).collect();
        let index: HashMap<Vec<u32>, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let mut w = WModule {
            n,
            max_degree,
            basis,
            index,
            gens: BTreeMap::new(),
            z: Vec::new(),
            zhat: Vec::new(),
            c: SparseOp::zeros(0, 0),
        };
        for k in 0..=n {
            let z = w.heis_op(&HeisElement::z(n, k));
            let zh = w.heis_op(&HeisElement::zhat(n, k));
            w.z.push(z);
            w.zhat.push(zh);
        }
        w.c = w.heis_op(&HeisElement::c(n));
        for i in 1..=n {
            for g in [Gen::E(i), Gen::F(i), Gen::K(i), Gen::Kinv(i)] {
                let op = w.uq_op(g);
                w.gens.insert(g, op);
            }
        }
        Ok(w)
    }

    pub fn rank_n(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn index_of(&self, m: &[u32]) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn z_op(&self, k: usize) -> &SparseOp<QCoeff> {
        &self.z[k]
    }

    pub fn zhat_op(&self, k: usize) -> &SparseOp<QCoeff> {
        &self.zhat[k]
    }

    pub fn c_op(&self) -> &SparseOp<QCoeff> {
        &self.c
    }

    fn column_of(&self, out: BTreeMap<Vec<u32>, QCoeff>, j: usize, op: &mut SparseOp<QCoeff>) {
        for (m, c) in out {
            if let Some(i) = self.index.get(&m) {
                op.add_entry(*i, j, c);
            }
        }
    }

    /// Matrix of an element of H; components above the truncation are dropped.
    pub fn heis_op(&self, f: &HeisElement) -> SparseOp<QCoeff> {
        let d = self.basis.len();
        let mut op = SparseOp::zeros(d, d);
        for (j, m) in self.basis.iter().enumerate() {
            let base = base_word(m);
            let mut acc = Terms::new();
            for (w, c) in &f.terms {
                let mut full = w.clone();
                full.extend_from_slice(&base);
                for (rw, rc) in normal_terms(self.n, &full, Strategy::Leftmost).iter() {
                    add_into(&mut acc, rw.clone(), rc * c);
                }
            }
            self.column_of(project_chi(&acc, self.n), j, &mut op);
        }
        op
    }

    fn uq_op(&self, g: Gen) -> SparseOp<QCoeff> {
        let d = self.basis.len();
        let mut op = SparseOp::zeros(d, d);
        for (j, m) in self.basis.iter().enumerate() {
            let img = uq_act_heis(g, &HeisElement::word(self.n, &base_word(m)));
            self.column_of(project_chi(&img.terms, self.n), j, &mut op);
        }
        op
    }

    pub fn apply(&self, op: &SparseOp<QCoeff>, v: &WVector) -> WVector {
        let mut dense = vec![QCoeff::zero(); self.basis.len()];
        for (m, c) in &v.terms {
            dense[self.index[m]] = c.clone();
        }
        let out = op.apply(&dense);
        let mut terms = BTreeMap::new();
        for (i, c) in out.into_iter().enumerate() {
            if !c.is_zero() {
                terms.insert(self.basis[i].clone(), c);
            }
        }
        WVector { terms }
    }

    /// No proper coordinate subspace is invariant under all z_i, ẑ_i.
    pub fn is_simple_truncated(&self) -> bool {
        let d = self.basis.len();
        let mut adj = vec![Vec::new(); d];
        for op in self.z.iter().chain(self.zhat.iter()) {
            for (i, j, _) in op.entries() {
                adj[j].push(i);
            }
        }
        let reach = |start: usize, adj: &Vec<Vec<usize>>| {
            let mut seen = vec![false; d];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(v) = stack.pop() {
                for &u in &adj[v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        let mut rev = vec![Vec::new(); d];
        for (j, outs) in adj.iter().enumerate() {
            for &i in outs {
                rev[i].push(j);
            }
        }
        d > 0 && reach(0, &adj) && reach(0, &rev)
    }
}

impl UqModule for WModule {
    fn rank(&self) -> usize {
        self.n
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn gen_op(&self, g: Gen) -> &SparseOp<QCoeff> {
        &self.gens[&g]
    }
}

/// All defining relations of U_q vanish on W up to degree N.
pub fn check_relations(n: usize, max_degree: usize) -> Result<CheckReport> {
    let w = WModule::build(n, max_degree)?;
    let mut bad = None;
    for (name, rel) in defining_relations(n) {
        let op = rel.operator(&w);
        if let Some((i, j, v)) = op.first_nonzero() {
            bad = Some(format!("{name}: entry ({:?}, {:?}) = {}", w.basis[i], w.basis[j], v));
            break;
        }
    }
    Ok(CheckReport::new("relations", n, max_degree, bad))
}

fn alphabet(n: usize) -> Vec<Letter> {
    let mut a: Vec<Letter> = (0..=n).map(Letter::Z).collect();
    a.push(Letter::C);
    a.extend((0..=n).map(Letter::H));
    a
}

/// Leftmost and rightmost rewriting agree on every word up to the given length.
pub fn check_confluence(n: usize, max_len: usize) -> CheckReport {
    let alpha = alphabet(n);
    let mut words: Vec<HWord> = vec![Vec::new()];
    let mut bad = None;
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &words {
            for l in &alpha {
                let mut nw = w.clone();
                nw.push(*l);
                next.push(nw);
            }
        }
        for w in &next {
            let a = HeisElement::word_with(n, w, Strategy::Leftmost);
            let b = HeisElement::word_with(n, w, Strategy::Rightmost);
            if a != b && bad.is_none() {
                bad =
                    Some(format!("{}: {} vs {}", w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join("*"), a, b));
            }
        }
        words = next;
    }
    CheckReport::new("confluence", n, max_len, bad)
}

/// Normal monomials of weight d (z, ẑ weigh 1, C weighs 2).
pub fn normal_monomials(n: usize, d: usize) -> Vec<HWord> {
    let mut out = Vec::new();
    for b in 0..=d / 2 {
        let rest = d - 2 * b;
        for zdeg in 0..=rest {
            for a in compositions(n, zdeg as u32) {
                for e in compositions(n, (rest - zdeg) as u32) {
                    let mut w = base_word(&a);
                    w.extend(std::iter::repeat_n(Letter::C, b));
                    w.extend(e.iter().enumerate().flat_map(|(k, &x)| std::iter::repeat_n(Letter::H(k), x as usize)));
                    out.push(w);
                }
            }
        }
    }
    out
}

fn rank_over_q(mut rows: Vec<BTreeMap<usize, BigRational>>) -> usize {
    let mut rank = 0;
    let mut pivots: Vec<(usize, BTreeMap<usize, BigRational>)> = Vec::new();
    for row in rows.iter_mut() {
        for (p, prow) in &pivots {
            if let Some(f) = row.get(p).cloned() {
                for (k, v) in prow {
                    let nv = row.get(k).cloned().unwrap_or_else(|| BigRational::from_integer(0.into())) - &f * v;
                    if nv == BigRational::from_integer(0.into()) {
                        row.remove(k);
                    } else {
                        row.insert(*k, nv);
                    }
                }
            }
        }
        if let Some((&p, pv)) = row.iter().next() {
            let pv = pv.clone();
            let normed: BTreeMap<usize, BigRational> = row.iter().map(|(k, v)| (*k, v / &pv)).collect();
            pivots.push((p, normed));
            rank += 1;
        }
    }
    rank
}

type RatColumns = Vec<BTreeMap<usize, BigRational>>;

fn specialize(op: &SparseOp<QCoeff>, value: &BigRational) -> Result<RatColumns> {
    let mut cols = vec![BTreeMap::new(); op.ncols()];
    for (i, j, v) in op.entries() {
        let r = v.subst(VAR_Q, value)?.as_rational().ok_or(QorbitError::DivisionByZero)?;
        if r != BigRational::from_integer(0.into()) {
            cols[j].insert(i, r);
        }
    }
    Ok(cols)
}

fn apply_rat(cols: &RatColumns, v: &BTreeMap<usize, BigRational>) -> BTreeMap<usize, BigRational> {
    let mut out: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (j, x) in v {
        for (i, a) in &cols[*j] {
            let e = out.entry(*i).or_insert_with(|| BigRational::from_integer(0.into()));
            *e += a * x;
        }
    }
    out.retain(|_, v| *v != BigRational::from_integer(0.into()));
    out
}

/// The normal monomials of weight d act independently on W (q = 1/3).
///
/// Letters are applied right to left as truncated matrices. The ẑ letters act
/// first and only lower the degree, so truncation never drops an intermediate term
/// that could come back below the cut.
pub fn check_pbw(n: usize, d: usize) -> Result<CheckReport> {
    let w = WModule::build(n, 2 * d.max(1))?;
    let third = BigRational::new(1.into(), 3.into());
    let z: Vec<RatColumns> = (0..=n).map(|k| specialize(w.z_op(k), &third)).collect::<Result<_>>()?;
    let h: Vec<RatColumns> = (0..=n).map(|k| specialize(w.zhat_op(k), &third)).collect::<Result<_>>()?;
    let c = specialize(w.c_op(), &third)?;
    let monos = normal_monomials(n, d);
    let dim = w.dim();
    let mut rows = Vec::new();
    for m in &monos {
        let mut row = BTreeMap::new();
        for j in 0..dim {
            let mut v = BTreeMap::from([(j, BigRational::from_integer(1.into()))]);
            for l in m.iter().rev() {
                let op = match l {
                    Letter::Z(k) => &z[*k],
                    Letter::H(k) => &h[*k],
                    Letter::C => &c,
                };
                v = apply_rat(op, &v);
                if v.is_empty() {
                    break;
                }
            }
            for (i, r) in v {
                row.insert(j * dim + i, r);
            }
        }
        rows.push(row);
    }
    let r = rank_over_q(rows);
    let bad = (r != monos.len()).then(|| format!("rank {} < {} normal monomials", r, monos.len()));
    Ok(CheckReport::new("pbw", n, d, bad))
}
