//! Induced modules Π_ν for n = 1 and the *-representations they carry.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QorbitError, Result};
use crate::funcx::{Fx1, FxLattice};
use crate::sparse::SparseOp;
use crate::uq::Gen;

const MEMBER_TOL: f64 = 1e-9;

fn cplx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// q, c0, d0 with c0·d0 = 1, and ν0 ≠ 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RepParams {
    pub q: f64,
    pub c0: Complex64,
    pub d0: Complex64,
    pub nu0: f64,
}

impl RepParams {
    /// Real c0, d0 must be positive; otherwise they must be complex conjugates.
    /// The order of real c0, d0 is not forced, so c0 ↔ d0 can be swapped.
    pub fn new(q: f64, c0: Complex64, d0: Complex64, nu0: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(QorbitError::Parameter(format!("q = {q} must lie in (0, 1)")));
        }
        if !nu0.is_finite() || nu0 == 0.0 {
            return Err(QorbitError::Parameter(format!("nu0 = {nu0} must be finite and nonzero")));
        }
        if !(c0.is_finite() && d0.is_finite()) {
            return Err(QorbitError::Parameter("c0, d0 must be finite".into()));
        }
        let prod = c0 * d0;
        if (prod - cplx(1.0)).norm() > 1e-9 {
            return Err(QorbitError::Parameter(format!("c0·d0 = {prod}, expected 1")));
        }
        let real = c0.im.abs() <= 1e-14 && d0.im.abs() <= 1e-14;
        if real {
            if c0.re <= 0.0 || d0.re <= 0.0 {
                return Err(QorbitError::Parameter("real c0, d0 must be positive".into()));
            }
            return Ok(RepParams { q, c0: cplx(c0.re), d0: cplx(d0.re), nu0 });
        }
        if (c0 - d0.conj()).norm() > 1e-9 {
            return Err(QorbitError::Parameter("c0, d0 must be real or complex conjugate".into()));
        }
        Ok(RepParams { q, c0, d0, nu0 })
    }

    /// Real case with d0 = 1/c0.
    pub fn real(q: f64, c0: f64, nu0: f64) -> Result<Self> {
        if c0 <= 0.0 {
            return Err(QorbitError::Parameter(format!("c0 = {c0} must be positive")));
        }
        Self::new(q, cplx(c0), cplx(1.0 / c0), nu0)
    }

    /// c0 = e^{iθ}, d0 = e^{−iθ}.
    pub fn unit_circle(q: f64, theta: f64, nu0: f64) -> Result<Self> {
        Self::new(q, Complex64::from_polar(1.0, theta), Complex64::from_polar(1.0, -theta), nu0)
    }

    pub fn is_complex(&self) -> bool {
        self.c0.im != 0.0
    }

    /// λ_k = ν0 q^{−2k}, the x-eigenvalue of ζ^k·1_ν.
    pub fn lambda(&self, k: i64) -> f64 {
        self.nu0 * self.q.powf(-2.0 * k as f64)
    }

    /// Index k with λ_k = value, when value lies on the lattice.
    pub fn lattice_index(&self, value: f64) -> Option<i64> {
        let r = value / self.nu0;
        if !(r > 0.0) {
            return None;
        }
        let k = -r.ln() / (2.0 * self.q.ln());
        let kr = k.round();
        ((k - kr).abs() < MEMBER_TOL).then_some(kr as i64)
    }

    /// qc0 ∈ M_ν0, giving the lattice index of the y-wall.
    pub fn plus_wall(&self) -> Option<i64> {
        if self.is_complex() {
            return None;
        }
        self.lattice_index(self.q * self.c0.re)
    }

    /// q⁻¹d0 ∈ M_ν0, giving the lattice index of the ŷ-wall.
    pub fn minus_wall(&self) -> Option<i64> {
        if self.is_complex() {
            return None;
        }
        self.lattice_index(self.d0.re / self.q)
    }

    /// Coefficient of ζ^{k+1} in y·ζ^k·1_ν.
    pub fn y_factor(&self, k: i64) -> Complex64 {
        if self.plus_wall() == Some(k) {
            return cplx(0.0);
        }
        cplx(self.lambda(k) / self.q) - self.c0
    }

    /// Coefficient of ζ^{k−1} in ŷ·ζ^k·1_ν.
    pub fn yhat_factor(&self, k: i64) -> Complex64 {
        if self.minus_wall() == Some(k) {
            return cplx(0.0);
        }
        self.d0 - cplx(self.q * self.lambda(k))
    }

    /// l with c0/d0 = q^{2l+1}, principal logarithm.
    pub fn spin(&self) -> Complex64 {
        let r = (self.c0 / self.d0).ln();
        (r / self.q.ln() - 1.0) / 2.0
    }

    /// Fractional part of log_q|ν0| in (−1/2, 1/2].
    pub fn parity(&self) -> f64 {
        let t = self.nu0.abs().ln() / self.q.ln();
        let mut e = t - t.round();
        if e.abs() < 1e-12 {
            e = 0.0;
        }
        if e <= -0.5 {
            e += 1.0;
        }
        e
    }
}

impl fmt::Display for RepParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} c0={} d0={} nu0={}", self.q, self.c0, self.d0, self.nu0)
    }
}

/// Σ a_k ζ^k·1_ν.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PiVector {
    pub terms: BTreeMap<i64, Complex64>,
}

impl PiVector {
    pub fn basis(k: i64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(k, cplx(1.0));
        PiVector { terms }
    }

    pub fn coefficient(&self, k: i64) -> Complex64 {
        self.terms.get(&k).copied().unwrap_or_default()
    }
}

/// Π_ν on the window ζ^k, −N ≤ k ≤ N.
#[derive(Clone, Debug)]
pub struct PiModule {
    params: RepParams,
    n: usize,
    zeta: SparseOp<Complex64>,
    zeta_inv: SparseOp<Complex64>,
    x: SparseOp<Complex64>,
    y: SparseOp<Complex64>,
    yhat: SparseOp<Complex64>,
}

pub fn build_pi(params: RepParams, n: usize) -> PiModule {
    let dim = 2 * n + 1;
    let ni = n as i64;
    let mut zeta = SparseOp::zeros(dim, dim);
    let mut zeta_inv = SparseOp::zeros(dim, dim);
    let mut y = SparseOp::zeros(dim, dim);
    let mut yhat = SparseOp::zeros(dim, dim);
    let mut xd = Vec::with_capacity(dim);
    for k in -ni..=ni {
        let j = (k + ni) as usize;
        xd.push(cplx(params.lambda(k)));
        if k < ni {
            zeta.add_entry(j + 1, j, cplx(1.0));
            y.add_entry(j + 1, j, params.y_factor(k));
        }
        if k > -ni {
            zeta_inv.add_entry(j - 1, j, cplx(1.0));
            yhat.add_entry(j - 1, j, params.yhat_factor(k));
        }
    }
    PiModule { params, n, zeta, zeta_inv, x: SparseOp::diagonal(xd), y, yhat }
}

impl PiModule {
    pub fn params(&self) -> &RepParams {
        &self.params
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn index(&self, k: i64) -> Option<usize> {
        let ni = self.n as i64;
        (-ni..=ni).contains(&k).then(|| (k + ni) as usize)
    }

    pub fn power(&self, j: usize) -> i64 {
        j as i64 - self.n as i64
    }

    pub fn zeta(&self) -> &SparseOp<Complex64> {
        &self.zeta
    }

    pub fn zeta_inv(&self) -> &SparseOp<Complex64> {
        &self.zeta_inv
    }

    pub fn x(&self) -> &SparseOp<Complex64> {
        &self.x
    }

    pub fn y(&self) -> &SparseOp<Complex64> {
        &self.y
    }

    pub fn yhat(&self) -> &SparseOp<Complex64> {
        &self.yhat
    }

    /// Column indices at distance ≥ margin from both window edges.
    pub fn interior(&self, margin: usize) -> Vec<usize> {
        let d = self.dim();
        if 2 * margin >= d {
            return Vec::new();
        }
        (margin..d - margin).collect()
    }

    /// Matrix of Σ ζ^k g_k(x): ζ^k g(x)·ζ^j·1_ν = g(λ_j)ζ^{k+j}·1_ν.
    pub fn fx_operator(&self, f: &Fx1) -> Result<SparseOp<Complex64>> {
        let p = &self.params;
        let d = self.dim();
        let mut op = SparseOp::zeros(d, d);
        for j in 0..d {
            let kj = self.power(j);
            let vals = f.eval_at(p.q, p.c0, p.d0, cplx(p.lambda(kj)))?;
            for (k, v) in vals {
                if let Some(i) = self.index(kj + k) {
                    op.add_entry(i, j, v);
                }
            }
        }
        Ok(op)
    }

    /// Applies an operator; the flag is set when a component left the window.
    pub fn apply(&self, op: &SparseOp<Complex64>, v: &PiVector) -> (PiVector, bool) {
        let mut out = BTreeMap::new();
        let mut truncated = false;
        for (&k, &a) in &v.terms {
            let Some(j) = self.index(k) else {
                truncated = true;
                continue;
            };
            let col = op.column(j);
            if (j == 0 || j + 1 == self.dim()) && !col.is_empty() {
                truncated = true;
            }
            for (&i, &m) in col {
                *out.entry(self.power(i)).or_insert(cplx(0.0)) += m * a;
            }
        }
        out.retain(|_, c: &mut Complex64| c.norm() != 0.0);
        (PiVector { terms: out }, truncated)
    }

    /// Lattice indices reachable from ζ^0 by y and ŷ inside the window.
    pub fn reach(&self) -> (i64, i64) {
        let p = &self.params;
        let ni = self.n as i64;
        let mut hi = 0;
        while hi < ni && p.y_factor(hi).norm() != 0.0 {
            hi += 1;
        }
        let mut lo = 0;
        while lo > -ni && p.yhat_factor(lo).norm() != 0.0 {
            lo -= 1;
        }
        (lo, hi)
    }
}

/// Which part of M_ν0 the irreducible module containing 1_ν sees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpectrumKind {
    /// M_ν0 = {ν0 q^{2k}}.
    Full,
    /// M_+ = {c0 q^{2k+1}}_{k≥0}.
    Plus,
    /// M_− = {d0 q^{−2k−1}}_{k≥0}.
    Minus,
    /// Both walls on the same side; a finite piece.
    Finite,
}

impl SpectrumKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpectrumKind::Full => "M_nu0",
            SpectrumKind::Plus => "M_plus",
            SpectrumKind::Minus => "M_minus",
            SpectrumKind::Finite => "finite",
        }
    }
}

impl fmt::Display for SpectrumKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The y-wall truncates from above when it sits at or above ν0, the ŷ-wall from below.
pub fn x_spectrum(params: &RepParams) -> SpectrumKind {
    let up = params.plus_wall().filter(|&k| k >= 0);
    let down = params.minus_wall().filter(|&k| k <= 0);
    match (up, down) {
        (None, None) => SpectrumKind::Full,
        (Some(_), None) => SpectrumKind::Plus,
        (None, Some(_)) => SpectrumKind::Minus,
        (Some(_), Some(_)) => SpectrumKind::Finite,
    }
}

/// Predicted x-eigenvalues of the irreducible piece inside the window |k| ≤ N.
pub fn spectrum_points(params: &RepParams, n: usize) -> Vec<f64> {
    let ni = n as i64;
    let hi = params.plus_wall().filter(|&k| k >= 0).map_or(ni, |k| k.min(ni));
    let lo = params.minus_wall().filter(|&k| k <= 0).map_or(-ni, |k| k.max(-ni));
    (lo..=hi).map(|k| params.lambda(k)).collect()
}

/// Eigenvalues of x restricted to the reachable block, by dense diagonalization.
pub fn x_eigenvalues(pi: &PiModule) -> Vec<f64> {
    let (lo, hi) = pi.reach();
    let idx: Vec<usize> = (lo..=hi).filter_map(|k| pi.index(k)).collect();
    let m = DMatrix::from_fn(idx.len(), idx.len(), |a, b| pi.x().get(idx[a], idx[b]).re);
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Diagonal Gram entries (ζ^k·1_ν, ζ^k·1_ν) on the reachable block.
#[derive(Clone, Debug, PartialEq)]
pub struct GramReport {
    pub entries: Vec<(i64, Complex64)>,
    pub positive: bool,
    pub first_negative: Option<i64>,
}

/// G_0 = 1, G_{k+1} = G_k·conj(q⁻¹λ_k − d0)/(q⁻¹λ_k − c0).
pub fn gram_diagonal(params: &RepParams, n: usize) -> GramReport {
    let pi = build_pi(*params, n);
    let (lo, hi) = pi.reach();
    let ratio = |k: i64| {
        (cplx(params.lambda(k) / params.q) - params.d0).conj() / (cplx(params.lambda(k) / params.q) - params.c0)
    };
    let mut up = vec![(0, cplx(1.0))];
    let mut g = cplx(1.0);
    for k in 0..hi {
        g *= ratio(k);
        up.push((k + 1, g));
    }
    let mut g = cplx(1.0);
    let mut down = Vec::new();
    for k in (lo..0).rev() {
        g /= ratio(k);
        down.push((k, g));
    }
    down.reverse();
    down.extend(up);
    let bad = |v: &Complex64| !(v.re > 0.0 && v.im.abs() <= 1e-9 * v.re.abs().max(1.0) && v.re.is_finite());
    let first_negative = down.iter().find(|(_, v)| bad(v)).map(|(k, _)| *k);
    GramReport { positive: first_negative.is_none(), first_negative, entries: down }
}

/// (ζ^k·1_ν, ζ^k·1_ν) = ν((ζ^k)^* ζ^k), evaluated from the algebra involution.
pub fn gram_entry_from_star(params: &RepParams, k: i64) -> Result<Complex64> {
    let zk = Fx1::zeta(k);
    let star = if params.is_complex() { zk.star_complex()? } else { zk.star_real(-1)? };
    let prod = star.mul(&zk);
    let vals = prod.eval_at(params.q, params.c0, params.d0, cplx(params.nu0))?;
    Ok(vals.get(&0).copied().unwrap_or_default())
}

/// No point of M_ν0 in the open interval between qc0 and qd0.
pub fn gap_condition(params: &RepParams) -> bool {
    if params.is_complex() || params.nu0 < 0.0 {
        return true;
    }
    let (a, b) = (params.q * params.c0.re.min(params.d0.re), params.q * params.c0.re.max(params.d0.re));
    if b - a <= 0.0 {
        return true;
    }
    // λ_k ∈ (a, b) ⇔ k in an open real interval of width < 1 typically; check the integers near it.
    let k_of = |v: f64| -(v / params.nu0).ln() / (2.0 * params.q.ln());
    let (ka, kb) = (k_of(a), k_of(b));
    let (lo, hi) = (ka.min(kb), ka.max(kb));
    let mut k = lo.ceil() as i64;
    while (k as f64) <= hi {
        let kf = k as f64;
        if kf - lo > MEMBER_TOL && hi - kf > MEMBER_TOL {
            return false;
        }
        k += 1;
    }
    true
}

/// The unitarizability predicate of the spectral theorem.
pub fn theorem_unitarizable(params: &RepParams) -> bool {
    match x_spectrum(params) {
        SpectrumKind::Plus | SpectrumKind::Minus => true,
        SpectrumKind::Finite => false,
        SpectrumKind::Full => gap_condition(params),
    }
}

/// ∫ζ^k f(x)dμ = δ_{k,0}(q⁻¹ − q) Σ_{x ∈ spectrum} x f(x), with the spectrum of 1_ν's module.
pub fn invariant_integral(params: &RepParams, f: &FxLattice) -> Result<Complex64> {
    for row in f.terms.values() {
        for v in row.values() {
            if !v.is_finite() {
                return Err(QorbitError::Domain("non-summable lattice function".into()));
            }
        }
    }
    let hi = params.plus_wall().filter(|&k| k >= 0);
    let lo = params.minus_wall().filter(|&k| k <= 0);
    let mut s = cplx(0.0);
    if let Some(row) = f.terms.get(&0) {
        for (&j, &v) in row {
            if hi.is_some_and(|h| j > h) || lo.is_some_and(|l| j < l) {
                continue;
            }
            s += v * params.lambda(j);
        }
    }
    Ok(s * (1.0 / params.q - params.q))
}

/// |∫(a·f)dμ − ε(a)∫f dμ| for a = E, F, K.
#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub integral: Complex64,
    pub residuals: Vec<(Gen, f64)>,
}

impl InvarianceReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

pub fn integral_invariance(params: &RepParams, f: &FxLattice) -> Result<InvarianceReport> {
    let base = invariant_integral(params, f)?;
    let mut residuals = Vec::new();
    for (g, eps) in [(Gen::E(1), 0.0), (Gen::F(1), 0.0), (Gen::K(1), 1.0)] {
        let v = invariant_integral(params, &f.act(g))?;
        residuals.push((g, (v - base * eps).norm()));
    }
    Ok(InvarianceReport { integral: base, residuals })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeriesKind {
    PrincipalContinuous,
    Complimentary,
    HolomorphicDiscrete,
    AntiHolomorphicDiscrete,
    Strange,
    NonUnitarizable,
}

impl SeriesKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SeriesKind::PrincipalContinuous => "PrincipalContinuous",
            SeriesKind::Complimentary => "Complimentary",
            SeriesKind::HolomorphicDiscrete => "HolomorphicDiscrete",
            SeriesKind::AntiHolomorphicDiscrete => "AntiHolomorphicDiscrete",
            SeriesKind::Strange => "Strange",
            SeriesKind::NonUnitarizable => "NonUnitarizable",
        }
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesLabel {
    pub series: SeriesKind,
    pub l: Complex64,
    pub epsilon: f64,
    pub casimir: Complex64,
    pub spectrum: SpectrumKind,
}

/// (q^l − q^{−l})(q^{l+1} − q^{−l−1})/(q⁻¹ − q)².
pub fn casimir_from_spin(q: f64, l: Complex64) -> Complex64 {
    let lq = q.ln();
    let p = |e: Complex64| (e * lq).exp();
    let num = (p(l) - p(-l)) * (p(l + 1.0) - p(-l - 1.0));
    num / (1.0 / q - q).powi(2)
}

pub fn classify(params: &RepParams) -> SeriesLabel {
    let spectrum = x_spectrum(params);
    let mut l = params.spin();
    let series = if params.is_complex() {
        SeriesKind::PrincipalContinuous
    } else {
        match spectrum {
            SpectrumKind::Plus => SeriesKind::HolomorphicDiscrete,
            SpectrumKind::Minus => SeriesKind::AntiHolomorphicDiscrete,
            SpectrumKind::Finite => SeriesKind::NonUnitarizable,
            SpectrumKind::Full if !gap_condition(params) => SeriesKind::NonUnitarizable,
            SpectrumKind::Full if params.nu0 > 0.0 => SeriesKind::Complimentary,
            SpectrumKind::Full => SeriesKind::Strange,
        }
    };
    if series == SeriesKind::Strange {
        l += Complex64::new(0.0, std::f64::consts::PI / params.q.ln());
    }
    SeriesLabel { series, l, epsilon: params.parity(), casimir: casimir_from_spin(params.q, l), spectrum }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rp(q: f64, c0: f64, nu0: f64) -> RepParams {
        RepParams::real(q, c0, nu0).unwrap()
    }

    #[test]
    fn x_acts_diagonally() {
        let p = rp(0.5, 0.8, 0.3);
        let pi = build_pi(p, 6);
        let (v, _) = pi.apply(pi.x(), &PiVector::basis(2));
        assert!((v.coefficient(2).re - 0.3 * 0.5f64.powi(-4)).abs() < 1e-12);
        let (v, _) = pi.apply(pi.zeta(), &PiVector::basis(3));
        assert_eq!(v.coefficient(4), cplx(1.0));
    }

    #[test]
    fn yhat_on_vacuum_has_zeta_inverse_component() {
        let p = rp(0.5, 0.8, 0.3);
        let pi = build_pi(p, 4);
        let (v, t) = pi.apply(pi.yhat(), &PiVector::basis(0));
        assert!(!t);
        assert!((v.coefficient(-1) - (p.d0 - 0.5 * 0.3)).norm() < 1e-14);
    }

    #[test]
    fn pi_satisfies_cd_relations() {
        for p in [rp(0.5, 0.8, 0.3), rp(0.7, 1.0, -2.0), RepParams::unit_circle(0.6, 0.4, 1.3).unwrap()] {
            let pi = build_pi(p, 8);
            let ops = [pi.y(), pi.yhat()];
            let yy = ops[1].compose(ops[0]);
            let yy2 = ops[0].compose(ops[1]);
            for j in pi.interior(2) {
                let lam = cplx(p.lambda(pi.power(j)));
                let q = p.q;
                let a = -(lam / q - p.c0) * (lam / q - p.d0);
                let b = -(lam * q - p.c0) * (lam * q - p.d0);
                assert!((yy.get(j, j) - a).norm() < 1e-10 * (1.0 + a.norm()));
                assert!((yy2.get(j, j) - b).norm() < 1e-10 * (1.0 + b.norm()));
                // y f(x) = f(q²x) y with f = x
                let l1 = pi.y().compose(pi.x()).get(j + 1, j);
                let l2 = pi.x().compose(pi.y()).get(j + 1, j) * (q * q);
                assert!((l1 - l2).norm() < 1e-10 * (1.0 + l1.norm()));
            }
        }
    }

    #[test]
    fn fx_operator_matches_generators() {
        let p = rp(0.6, 0.7, 0.45);
        let pi = build_pi(p, 5);
        let y = pi.fx_operator(&Fx1::y()).unwrap();
        let yh = pi.fx_operator(&Fx1::yhat()).unwrap();
        for j in pi.interior(1) {
            assert!((y.get(j + 1, j) - pi.y().get(j + 1, j)).norm() < 1e-12);
            assert!((yh.get(j - 1, j) - pi.yhat().get(j - 1, j)).norm() < 1e-12);
        }
    }

    #[test]
    fn spectrum_examples() {
        let q = 0.5;
        assert_eq!(x_spectrum(&rp(q, 1.0, q)), SpectrumKind::Plus);
        assert_eq!(x_spectrum(&rp(q, 1.0, 1.0 / q)), SpectrumKind::Minus);
        for c0 in [0.3, 0.8, 1.0] {
            assert_eq!(x_spectrum(&rp(q, c0, -0.7)), SpectrumKind::Full);
        }
        let p = rp(q, 1.0, q);
        let pts = spectrum_points(&p, 5);
        assert!((pts.last().unwrap() - q).abs() < 1e-15);
        assert!((pts[0] - q.powi(11)).abs() < 1e-15);
    }

    #[test]
    fn eigenvalues_match_prediction() {
        for p in [rp(0.5, 1.0, 0.5), rp(0.5, 1.0, 2.0), rp(0.6, 0.8, 0.33), rp(0.6, 0.8, -1.0)] {
            let pi = build_pi(p, 12);
            let ev = x_eigenvalues(&pi);
            let mut pred = spectrum_points(&p, 12);
            pred.sort_by(f64::total_cmp);
            assert_eq!(ev.len(), pred.len(), "{p}");
            for (a, b) in ev.iter().zip(&pred) {
                assert!((a - b).abs() <= 1e-9 * b.abs());
            }
        }
    }

    #[test]
    fn gram_examples() {
        let p = rp(0.5, 0.8, 0.3);
        let g = gram_diagonal(&p, 3);
        let at = |k: i64| g.entries.iter().find(|e| e.0 == k).unwrap().1;
        assert_eq!(at(0), cplx(1.0));
        let expect = (0.3 - 0.5 * p.d0.re) / (0.3 - 0.5 * p.c0.re);
        assert!((at(1).re - expect).abs() < 1e-14);
    }

    #[test]
    fn gram_recursion_matches_star_oracle() {
        for p in [rp(0.5, 0.8, 0.3), rp(0.7, 0.9, -2.0), RepParams::unit_circle(0.6, 0.4, 1.3).unwrap()] {
            let g = gram_diagonal(&p, 4);
            for (k, v) in &g.entries {
                let o = gram_entry_from_star(&p, *k).unwrap();
                assert!((o - v).norm() < 1e-10 * (1.0 + v.norm()), "{p} k={k}: {o} vs {v}");
            }
        }
    }

    #[test]
    fn gap_detects_interior_point() {
        // c0 = 0.5, d0 = 2, q = 0.5: gap (0.25, 1); ν0 = 0.5 sits inside
        let p = rp(0.5, 0.5, 0.5);
        assert!(!gap_condition(&p));
        assert_eq!(classify(&p).series, SeriesKind::NonUnitarizable);
        assert!(!gram_diagonal(&p, 6).positive);
    }

    #[test]
    fn classify_examples() {
        let q = 0.5;
        let pc = classify(&RepParams::unit_circle(q, 0.7, 0.4).unwrap());
        assert_eq!(pc.series, SeriesKind::PrincipalContinuous);
        assert!((pc.l.re + 0.5).abs() < 1e-12);
        assert_eq!(classify(&rp(q, 0.9, -1.0)).series, SeriesKind::Strange);
        let hol = classify(&rp(q, 1.0, q));
        assert_eq!(hol.series, SeriesKind::HolomorphicDiscrete);
        assert_eq!(hol.spectrum, SpectrumKind::Plus);
        assert_eq!(classify(&rp(q, 1.0, 1.0 / q)).series, SeriesKind::AntiHolomorphicDiscrete);
        // q = 0.5, c0 = 0.9: gap (0.45, 0.555..); ν0 = 0.6 jumps it
        let comp = classify(&rp(q, 0.9, 0.6));
        assert_eq!(comp.series, SeriesKind::Complimentary);
        assert!(comp.l.re > -0.5 && comp.l.re < 0.0);
    }

    #[test]
    fn casimir_at_half() {
        let q: f64 = 0.5;
        let v = casimir_from_spin(q, cplx(-0.5));
        let e = -(q.sqrt() - 1.0 / q.sqrt()).powi(2) / (1.0 / q - q).powi(2);
        assert!((v.re - e).abs() < 1e-14 && v.im.abs() < 1e-14);
        let l = Complex64::new(-0.3, 0.2);
        assert!((casimir_from_spin(q, l) - casimir_from_spin(q, -l - 1.0)).norm() < 1e-12);
    }

    #[test]
    fn parity_range() {
        assert_eq!(rp(0.5, 1.0, 0.5).parity(), 0.0);
        let e = rp(0.5, 1.0, 0.5f64.powf(0.5)).parity();
        assert!((e - 0.5).abs() < 1e-12);
        let e = rp(0.5, 1.0, 0.5f64.powf(2.3)).parity();
        assert!((e - 0.3).abs() < 1e-9);
    }

    fn random_lattice(p: &RepParams, seed: u64) -> FxLattice {
        let mut f = FxLattice::new(p.q, p.c0, p.d0, p.nu0);
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        for k in -2..=2 {
            for j in -3..=3 {
                f.set(k, j, Complex64::new(next(), next()));
            }
        }
        f
    }

    #[test]
    fn integral_reads_off_delta() {
        let p = rp(0.5, 0.8, 0.3);
        let mut f = FxLattice::new(p.q, p.c0, p.d0, p.nu0);
        f.set(0, 0, cplx(1.0));
        let v = invariant_integral(&p, &f).unwrap();
        assert!((v.re - 1.5 * 0.3).abs() < 1e-15);
        let mut g = FxLattice::new(p.q, p.c0, p.d0, p.nu0);
        g.set(1, 0, cplx(1.0));
        assert_eq!(invariant_integral(&p, &g).unwrap(), cplx(0.0));
    }

    #[test]
    fn integral_is_invariant() {
        let ps = [rp(0.5, 0.9, 0.6), rp(0.7, 0.8, -1.1), RepParams::unit_circle(0.6, 0.5, 0.9).unwrap()];
        for (i, p) in ps.iter().enumerate() {
            let f = random_lattice(p, i as u64 + 1);
            let r = integral_invariance(p, &f).unwrap();
            assert!(r.max_residual() < 1e-10, "{p}: {:?}", r.residuals);
        }
    }

    #[test]
    fn integral_is_invariant_on_truncated_spectra() {
        for p in [rp(0.5, 1.0, 0.5), rp(0.5, 1.0, 2.0)] {
            let f = random_lattice(&p, 7);
            let r = integral_invariance(&p, &f).unwrap();
            assert!(r.max_residual() < 1e-10, "{p}: {:?}", r.residuals);
        }
    }
}
