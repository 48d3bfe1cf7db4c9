//! Degenerate series of U_q(su⟨ι⟩): positivity on the eigenvalue lattice, scans, traces.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use nalgebra::DMatrix;

use crate::coeffs::QCoeff;
use crate::error::{QorbitError, Result};
use crate::heis::{uq_act_heis, HeisElement, WModule};
use crate::moment::{twisted_moment_map, MomentVariant};
use crate::sparse::SparseOp;
use crate::uq::{AlgebraElement, Gen};

const REL_TOL: f64 = 1e-12;

fn snap(a: f64, b: f64) -> f64 {
    let d = a - b;
    if d.abs() <= REL_TOL * a.abs().max(b.abs()) {
        0.0
    } else {
        d
    }
}

/// Sign of a positivity ratio; zero numerator or denominator is a boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
    Boundary,
}

fn ratio_sign(sigma: i8, num: f64, den: f64) -> Sign {
    if num == 0.0 || den == 0.0 {
        Sign::Boundary
    } else if (sigma as f64) * num * den > 0.0 {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// Signs of ι_i(λ_{i−1}−λ_i)/(λ_i−q⁻²λ_{i+1}) and ι_i(q²λ_{i−1}−λ_i)/(λ_i−λ_{i+1}).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexPositivity {
    pub ll1: Sign,
    pub ll2: Sign,
}

impl IndexPositivity {
    pub fn holds(&self) -> bool {
        self.ll1 == Sign::Positive && self.ll2 == Sign::Positive
    }

    pub fn boundary(&self) -> bool {
        self.ll1 == Sign::Boundary || self.ll2 == Sign::Boundary
    }
}

/// λ = (λ_0, …, λ_{n+1}) with λ_0 = q⁻¹d0 and λ_{n+1} = qc0.
pub fn positivity_conditions(q: f64, iota: &[i8], lambda: &[f64]) -> Result<Vec<IndexPositivity>> {
    let n = iota.len();
    if lambda.len() != n + 2 {
        return Err(QorbitError::Parameter(format!("need {} lambda values, got {}", n + 2, lambda.len())));
    }
    if lambda.iter().any(|l| *l == 0.0 || !l.is_finite()) {
        return Err(QorbitError::Parameter("lambda values must be finite and nonzero".into()));
    }
    Ok((1..=n)
        .map(|i| {
            let (a, b, c) = (lambda[i - 1], lambda[i], lambda[i + 1]);
            IndexPositivity {
                ll1: ratio_sign(iota[i - 1], snap(a, b), snap(b, c / (q * q))),
                ll2: ratio_sign(iota[i - 1], snap(q * q * a, b), snap(b, c)),
            }
        })
        .collect())
}

/// (c0, d0, χ) together with the sign vector.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeChar {
    pub q: f64,
    pub c0: f64,
    pub d0: f64,
    pub chi: Vec<f64>,
    pub iota: Vec<i8>,
}

impl LatticeChar {
    pub fn new(q: f64, c0: f64, d0: f64, chi: Vec<f64>, iota: Vec<i8>) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(QorbitError::Parameter(format!("q = {q} must lie in (0, 1)")));
        }
        if chi.is_empty() || chi.len() != iota.len() {
            return Err(QorbitError::Parameter("chi and iota must have the same positive length".into()));
        }
        if chi.iter().any(|c| *c == 0.0 || !c.is_finite()) {
            return Err(QorbitError::Parameter("chi(x_i) must be finite and nonzero".into()));
        }
        if iota.iter().any(|s| s.abs() != 1) {
            return Err(QorbitError::Parameter("iota entries must be ±1".into()));
        }
        if !(c0 > 0.0 && d0 > 0.0 && c0.is_finite() && d0.is_finite()) {
            return Err(QorbitError::Parameter("c0, d0 must be positive reals".into()));
        }
        Ok(LatticeChar { q, c0, d0, chi, iota })
    }

    pub fn su21(q: f64, c0: f64, d0: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        Self::new(q, c0, d0, vec![lambda1, lambda2], vec![-1, 1])
    }

    pub fn rank(&self) -> usize {
        self.chi.len()
    }

    /// Flips negative χ(x_i) to positive, returning the I_i used.
    pub fn normalized(&self) -> (LatticeChar, Vec<usize>) {
        let mut out = self.clone();
        let mut twist = Vec::new();
        for (i, c) in out.chi.iter_mut().enumerate() {
            if *c < 0.0 {
                *c = -*c;
                twist.push(i + 1);
            }
        }
        (out, twist)
    }

    /// (λ_0, …, λ_{n+1}) at lattice offset k: λ_i = χ_i q^{−2k_i}.
    pub fn lambdas(&self, k: &[i64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.rank() + 2);
        out.push(self.d0 / self.q);
        for (c, &ki) in self.chi.iter().zip(k) {
            out.push(c * self.q.powf(-2.0 * ki as f64));
        }
        out.push(self.q * self.c0);
        out
    }

    /// Pole-free factor for λ_i ↦ q⁻²λ_i (ζ_i) and λ_i ↦ q²λ_i (ζ̂_i).
    fn edge_factors(&self, lam: &[f64], i: usize) -> (f64, f64) {
        let q2 = self.q * self.q;
        let s = self.iota[i - 1] as f64;
        let (a, b, c) = (lam[i - 1], lam[i], lam[i + 1]);
        let up = s * snap(q2 * a, b) * snap(b, c);
        let dn = s * snap(a, b) * snap(b, c / q2);
        (up, dn)
    }

    /// Ratio forms ζ_i*ζ_i and ζ_iζ_i* as scalars, `None` at a wall.
    fn edge_ratios(&self, lam: &[f64], i: usize) -> (Option<f64>, Option<f64>) {
        let q2 = self.q * self.q;
        let s = self.iota[i - 1] as f64;
        let (a, b, c) = (lam[i - 1], lam[i], lam[i + 1]);
        let r = |num: f64, den: f64| (num != 0.0 && den != 0.0).then(|| s * num / den);
        (r(snap(q2 * a, b), snap(b, c)), r(snap(a, b), snap(b, c / q2)))
    }
}

/// Where a lattice walk stops.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Wall {
    pub point: Vec<i64>,
    pub index: usize,
    /// "zeta_i" when ζ_i annihilates, "zetahat_i" when ζ̂_i does.
    pub annihilator: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    Upper,
    Lower,
    Both,
    Neither,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::Upper => "upper",
            Region::Lower => "lower",
            Region::Both => "both",
            Region::Neither => "neither",
        }
    }
}

fn ge(a: f64, b: f64) -> bool {
    snap(a, b) >= 0.0
}

/// λ1 ≥ q⁻¹d0, λ1 ≥ q⁻²λ2 ≥ qc0.
pub fn in_upper_region(q: f64, c0: f64, d0: f64, l1: f64, l2: f64) -> bool {
    ge(l1, d0 / q) && ge(l1, l2 / (q * q)) && ge(l2 / (q * q), q * c0)
}

/// λ1 ≤ q⁻¹d0, λ1 ≤ q⁻²λ2 ≤ qc0.
pub fn in_lower_region(q: f64, c0: f64, d0: f64, l1: f64, l2: f64) -> bool {
    ge(d0 / q, l1) && ge(l2 / (q * q), l1) && ge(q * c0, l2 / (q * q))
}

pub fn region(q: f64, c0: f64, d0: f64, l1: f64, l2: f64) -> Region {
    match (in_upper_region(q, c0, d0, l1, l2), in_lower_region(q, c0, d0, l1, l2)) {
        (true, true) => Region::Both,
        (true, false) => Region::Upper,
        (false, true) => Region::Lower,
        (false, false) => Region::Neither,
    }
}

/// Points reached from χ by the ζ_i, ζ̂_i, with walls and sign violations.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub points: Vec<Vec<i64>>,
    pub walls: Vec<Wall>,
    /// (point, index, +1 for ζ_i, −1 for ζ̂_i) with a negative factor.
    pub violations: Vec<(Vec<i64>, usize, i8)>,
    pub region_counts: BTreeMap<String, usize>,
    /// The walk reached the bound, so the lattice was not truncated inside it.
    pub hit_bound: bool,
}

impl ScanReport {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn truncated(&self) -> bool {
        !self.hit_bound
    }
}

/// Breadth-first walk with |k_i| ≤ bound; negative factors are recorded and crossed.
pub fn lattice_scan(ch: &LatticeChar, bound: i64) -> ScanReport {
    let n = ch.rank();
    let start = vec![0i64; n];
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    let mut walls = Vec::new();
    let mut violations = Vec::new();
    let mut hit_bound = false;
    while let Some(p) = queue.pop_front() {
        let lam = ch.lambdas(&p);
        for i in 1..=n {
            let (up, dn) = ch.edge_factors(&lam, i);
            for (val, step, name) in [(up, 1i64, "zeta"), (dn, -1i64, "zetahat")] {
                if val == 0.0 {
                    walls.push(Wall { point: p.clone(), index: i, annihilator: format!("{name}_{i}") });
                    continue;
                }
                if val < 0.0 {
                    violations.push((p.clone(), i, step as i8));
                }
                let mut np = p.clone();
                np[i - 1] += step;
                if np[i - 1].abs() > bound {
                    hit_bound = true;
                    continue;
                }
                if seen.insert(np.clone()) {
                    queue.push_back(np);
                }
            }
        }
    }
    let points: Vec<Vec<i64>> = seen.into_iter().collect();
    let mut region_counts = BTreeMap::new();
    if n == 2 {
        for p in &points {
            let lam = ch.lambdas(p);
            let r = region(ch.q, ch.c0, ch.d0, lam[1], lam[2]);
            *region_counts.entry(r.as_str().to_string()).or_insert(0) += 1;
        }
    }
    walls.sort();
    ScanReport { points, walls, violations, region_counts, hit_bound }
}

/// Gram form on the walked block, its spectrum, and the pointwise comparison with the positivity conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct GramScan {
    pub entries: Vec<(Vec<i64>, f64)>,
    pub min_eigenvalue: f64,
    pub positive: bool,
    /// Every positivity condition on a traversed move is positive.
    pub conditions_hold: bool,
    /// Traversed moves whose Gram sign change disagrees with the conditions.
    pub disagreements: usize,
}

impl GramScan {
    pub fn agrees(&self) -> bool {
        self.disagreements == 0 && self.positive == self.conditions_hold
    }
}

/// G at the start is 1; ζ_i v has norm ζ_i*ζ_i·G, ζ̂_i v has ζ_iζ_i*·G.
pub fn gram_scan(ch: &LatticeChar, bound: i64, max_points: usize) -> Result<GramScan> {
    let n = ch.rank();
    let start = vec![0i64; n];
    let mut gram: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
    gram.insert(start.clone(), 1.0);
    let mut queue = VecDeque::from([start]);
    let mut conditions_hold = true;
    let mut disagreements = 0;
    while let Some(p) = queue.pop_front() {
        let lam = ch.lambdas(&p);
        let pos = positivity_conditions(ch.q, &ch.iota, &lam)?;
        let g = gram[&p];
        for i in 1..=n {
            let (up, dn) = ch.edge_ratios(&lam, i);
            for (ratio, step, cond) in [(up, 1i64, pos[i - 1].ll2), (dn, -1i64, pos[i - 1].ll1)] {
                let Some(r) = ratio else { continue };
                let mut np = p.clone();
                np[i - 1] += step;
                if np[i - 1].abs() > bound {
                    continue;
                }
                if cond == Sign::Negative {
                    conditions_hold = false;
                }
                let child = g * r;
                if (child > 0.0) != (g > 0.0 && cond == Sign::Positive || g < 0.0 && cond == Sign::Negative) {
                    disagreements += 1;
                }
                if !gram.contains_key(&np) && gram.len() < max_points {
                    gram.insert(np.clone(), child);
                    queue.push_back(np);
                }
            }
        }
    }
    let entries: Vec<(Vec<i64>, f64)> = gram.into_iter().collect();
    let m = DMatrix::from_fn(entries.len(), entries.len(), |a, b| if a == b { entries[a].1 } else { 0.0 });
    let min_eigenvalue = m.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(GramScan { positive: min_eigenvalue > 0.0, min_eigenvalue, entries, conditions_hold, disagreements })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Su21Case {
    DegenerateHolomorphic,
    DegenerateAntiHolomorphic,
    DegenerateComplimentary,
    None,
}

impl Su21Case {
    pub fn as_str(&self) -> &'static str {
        match self {
            Su21Case::DegenerateHolomorphic => "DegenerateHolomorphic",
            Su21Case::DegenerateAntiHolomorphic => "DegenerateAntiHolomorphic",
            Su21Case::DegenerateComplimentary => "DegenerateComplimentary",
            Su21Case::None => "None",
        }
    }
}

impl fmt::Display for Su21Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn close(a: f64, b: f64) -> bool {
    snap(a, b) == 0.0
}

/// The three cases for su(2,1); the holomorphic case wins at d0 = q⁻²c0.
pub fn classify_su21(q: f64, c0: f64, d0: f64, lambda: [f64; 2]) -> Su21Case {
    let [l1, l2] = lambda;
    let start = close(l1, d0 / q) && close(l2, q * c0);
    if start && ge(c0 / (q * q), d0) {
        return Su21Case::DegenerateHolomorphic;
    }
    if start && ge(d0, c0 / (q * q)) {
        return Su21Case::DegenerateAntiHolomorphic;
    }
    let r = d0 / c0;
    if r > 1.0
        && r < q.powi(-4)
        && close(l2, q * c0)
        && in_upper_region(q, c0, d0, l1, l2)
        && in_lower_region(q, c0, d0, l1 * q * q, l2)
    {
        return Su21Case::DegenerateComplimentary;
    }
    Su21Case::None
}

/// q^ρ as Π K_i^{m_i} with m_i = i(n+1−i), so that q^ρ a q^{−ρ} = S²(a).
pub fn q_rho(n: usize) -> AlgebraElement {
    let mut out = AlgebraElement::one(n);
    for i in 1..=n {
        out = out.mul(&AlgebraElement::k(n, i).pow((i * (n + 1 - i)) as u32));
    }
    out
}

/// ν_W(f) = tr_W(f·(J∘I)(q^ρ)) on the Fock module truncated at degree N, exact in Q(q).
pub fn trace_integral(w: &WModule, f: &HeisElement, twist: &[usize]) -> Result<QCoeff> {
    let n = w.rank_n();
    let d = w.basis().len();
    let mut weight = SparseOp::identity(d);
    for i in 1..=n {
        let jk = twisted_moment_map(Gen::K(i), n, MomentVariant::Calibrated, twist)?.w_operator_exact(w)?;
        for _ in 0..i * (n + 1 - i) {
            weight = weight.compose(&jk);
        }
    }
    let op = w.heis_op(f).compose(&weight);
    let mut tr = QCoeff::zero();
    for j in 0..d {
        tr = &tr + &op.get(j, j);
    }
    Ok(tr)
}

/// ν_W(a·f) − ε(a)ν_W(f) for a = E_i, F_i, K_i.
pub fn trace_invariance(w: &WModule, f: &HeisElement) -> Result<Vec<(Gen, QCoeff)>> {
    let n = w.rank_n();
    let base = trace_integral(w, f, &[])?;
    let mut out = Vec::new();
    for i in 1..=n {
        for (g, eps) in [(Gen::E(i), QCoeff::zero()), (Gen::F(i), QCoeff::zero()), (Gen::K(i), QCoeff::one())] {
            let v = trace_integral(w, &uq_act_heis(g, f), &[])?;
            out.push((g, &v - &(&eps * &base)));
        }
    }
    Ok(out)
}
