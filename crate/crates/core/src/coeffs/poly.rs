//! Sparse multivariate polynomials over Q.
//!
//! Variables are addressed by index: 0 = q, 1 = c, 2 = d, 3 + i = x_i.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const VAR_Q: usize = 0;
pub const VAR_C: usize = 1;
pub const VAR_D: usize = 2;

pub fn var_x(i: usize) -> usize {
    3 + i
}

pub fn var_name(v: usize) -> String {
    match v {
        VAR_Q => "q".to_string(),
        VAR_C => "c".to_string(),
        VAR_D => "d".to_string(),
        _ => format!("x{}", v - 3),
    }
}

/// Exponent vector with trailing zeros trimmed, so equal monomials compare equal.
pub type Exp = Vec<u32>;

fn trim(mut e: Exp) -> Exp {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn exp_get(e: &Exp, v: usize) -> u32 {
    e.get(v).copied().unwrap_or(0)
}

fn exp_set(mut e: Exp, v: usize, k: u32) -> Exp {
    if e.len() <= v {
        e.resize(v + 1, 0);
    }
    e[v] = k;
    trim(e)
}

fn exp_mul(a: &Exp, b: &Exp) -> Exp {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, o) in out.iter_mut().enumerate() {
        *o = exp_get(a, i) + exp_get(b, i);
    }
    trim(out)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Exp, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    pub fn from_i64(c: i64) -> Self {
        Poly::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: usize) -> Self {
        Poly::monomial(exp_set(Vec::new(), v, 1), BigRational::one())
    }

    pub fn monomial(e: Exp, c: BigRational) -> Self {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(trim(e), c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn leading(&self) -> Option<(&Exp, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|e| e.len().checked_sub(1)).max()
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| exp_get(e, v)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| exp_get(e, v)).min().unwrap_or(0)
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.terms.keys().any(|e| exp_get(e, v) > 0)
    }

    fn add_term(&mut self, e: Exp, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(exp_mul(ea, eb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Exp) -> Poly {
        Poly { terms: self.terms.iter().map(|(e, c)| (exp_mul(e, m), c.clone())).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Coefficients with respect to `v`: entry `k` multiplies `v^k`.
    pub fn coeffs_in(&self, v: usize) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); deg + 1];
        for (e, c) in &self.terms {
            let k = exp_get(e, v) as usize;
            out[k].add_term(exp_set(e.clone(), v, 0), c.clone());
        }
        out
    }

    pub fn from_coeffs_in(v: usize, coeffs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (k, p) in coeffs.iter().enumerate() {
            let m = exp_set(Vec::new(), v, k as u32);
            for (e, c) in &p.terms {
                out.add_term(exp_mul(e, &m), c.clone());
            }
        }
        out
    }

    /// Rescale so that the leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, lc)) => {
                let inv = lc.recip();
                self.scale(&inv)
            }
        }
    }

    /// Componentwise minimum exponent over all terms.
    pub fn monomial_content(&self) -> Exp {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Vec::new();
        };
        let mut m = first.clone();
        for e in it {
            let n = m.len();
            for (i, slot) in m.iter_mut().enumerate().take(n) {
                *slot = (*slot).min(exp_get(e, i));
            }
        }
        trim(m)
    }

    pub fn div_monomial(&self, m: &Exp) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let n = e.len().max(m.len());
                    let out: Exp = (0..n).map(|i| exp_get(e, i) - exp_get(m, i)).collect();
                    (trim(out), c.clone())
                })
                .collect(),
        }
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Poly) -> Option<Poly> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = other.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        if other.len() == 1 {
            let (m, c) = other.leading().unwrap();
            let mut out = Poly::zero();
            for (e, x) in &self.terms {
                if (0..m.len()).any(|i| exp_get(e, i) < m[i]) {
                    return None;
                }
                let n = e.len();
                let q: Exp = (0..n).map(|i| exp_get(e, i) - exp_get(m, i)).collect();
                out.add_term(trim(q), x / c);
            }
            return Some(out);
        }
        let v = other.max_var().unwrap();
        let b = other.coeffs_in(v);
        let db = b.len() - 1;
        let lb = &b[db];
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        loop {
            if rem.is_zero() {
                return Some(quot);
            }
            let dr = rem.degree_in(v) as usize;
            if dr < db {
                return None;
            }
            let a = rem.coeffs_in(v);
            let t = a[dr].div_exact(lb)?;
            let shift = exp_set(Vec::new(), v, (dr - db) as u32);
            let term = t.mul_monomial(&shift);
            rem = rem.sub(&term.mul(other));
            quot = quot.add(&term);
        }
    }

    pub fn eval(&self, vals: &dyn Fn(usize) -> Complex64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= vals(v).powu(k);
                }
            }
            total += t;
        }
        total
    }

    /// Sum of absolute term magnitudes at the point; a scale for cancellation tests.
    pub fn eval_abs(&self, vals: &dyn Fn(usize) -> Complex64) -> f64 {
        let mut total = 0.0;
        for (e, c) in &self.terms {
            let mut t = c.to_f64().unwrap_or(f64::NAN).abs();
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= vals(v).norm().powi(k as i32);
                }
            }
            total += t;
        }
        total
    }

    /// Substitute `v := value` exactly.
    pub fn subst(&self, v: usize, value: &BigRational) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let k = exp_get(e, v);
            let f = num_traits::pow(value.clone(), k as usize);
            out.add_term(exp_set(e.clone(), v, 0), c * f);
        }
        out
    }

    /// Rename variables through `map`.
    pub fn map_vars(&self, map: &dyn Fn(usize) -> usize) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut ne: Exp = Vec::new();
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    let w = map(v);
                    let cur = exp_get(&ne, w);
                    ne = exp_set(ne, w, cur + k);
                }
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Replace `v` by `q^s · v`; returns `(p, shift)` with the result equal to `q^{-shift} · p`.
    pub fn scale_var_by_q(&self, v: usize, s: i32) -> (Poly, u32) {
        let mut raw: Vec<(Exp, i64, BigRational)> = Vec::new();
        let mut min_q: i64 = 0;
        for (e, c) in &self.terms {
            let k = exp_get(e, v) as i64;
            let qe = exp_get(e, VAR_Q) as i64 + (s as i64) * k;
            min_q = min_q.min(qe);
            raw.push((e.clone(), qe, c.clone()));
        }
        let shift = (-min_q) as u32;
        let mut out = Poly::zero();
        for (e, qe, c) in raw {
            out.add_term(exp_set(e, VAR_Q, (qe + shift as i64) as u32), c);
        }
        (out, shift)
    }
}

fn content_in(p: &Poly, v: usize) -> Poly {
    let mut g = Poly::zero();
    for c in p.coeffs_in(v) {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.monic() } else { gcd(&g, &c) };
        if g.is_one() {
            break;
        }
    }
    g
}

fn pseudo_rem(a: &Poly, b: &Poly, v: usize) -> Poly {
    let bc = b.coeffs_in(v);
    let db = bc.len() - 1;
    let lb = bc[db].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(v) as usize >= db {
        let dr = r.degree_in(v) as usize;
        let lr = r.coeffs_in(v)[dr].clone();
        let shift = exp_set(Vec::new(), v, (dr - db) as u32);
        r = r.mul(&lb).sub(&b.mul(&lr).mul_monomial(&shift));
    }
    r
}

fn univariate_gcd(a: &Poly, b: &Poly, v: usize) -> Poly {
    let mut x = a.coeffs_in(v);
    let mut y = b.coeffs_in(v);
    fn strip(p: &mut Vec<Poly>) {
        while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
    }
    strip(&mut x);
    strip(&mut y);
    let zero_poly = |p: &Vec<Poly>| p.iter().all(|c| c.is_zero());
    while !zero_poly(&y) {
        let dy = y.len() - 1;
        let ly = y[dy].as_constant().unwrap();
        while !zero_poly(&x) && x.len() > dy {
            let dx = x.len() - 1;
            let f = x[dx].as_constant().unwrap() / &ly;
            for i in 0..=dy {
                let t = y[i].scale(&f);
                x[dx - dy + i] = x[dx - dy + i].sub(&t);
            }
            x.pop();
            strip(&mut x);
        }
        std::mem::swap(&mut x, &mut y);
    }
    Poly::from_coeffs_in(v, &x).monic()
}

/// Monic greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.len() == 1 || b.len() == 1 {
        let (m, p) = if a.len() == 1 { (a, b) } else { (b, a) };
        let me = m.leading().unwrap().0.clone();
        let pc = p.monomial_content();
        let n = me.len().min(pc.len());
        let g: Exp = (0..n).map(|i| me[i].min(pc[i])).collect();
        return Poly::monomial(g, BigRational::one());
    }
    let va = a.max_var().unwrap();
    let vb = b.max_var().unwrap();
    let v = va.max(vb);
    let single = |p: &Poly| p.terms.keys().all(|e| e.iter().enumerate().all(|(i, &k)| k == 0 || i == v));
    if single(a) && single(b) {
        return univariate_gcd(a, b, v);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let g = gcd(&ca, &cb);
    let mut pa = a.div_exact(&ca).expect("content divides");
    let mut pb = b.div_exact(&cb).expect("content divides");
    if pa.degree_in(v) == 0 || pb.degree_in(v) == 0 {
        return g.monic();
    }
    if pa.degree_in(v) < pb.degree_in(v) {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        let r = pseudo_rem(&pa, &pb, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            return g.monic();
        }
        let cr = content_in(&r, v);
        pa = pb;
        pb = r.div_exact(&cr).expect("content divides").monic();
    }
    let cpb = content_in(&pb, v);
    let pp = pb.div_exact(&cpb).expect("content divides");
    g.mul(&pp).monic()
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mut vars: Vec<String> = Vec::new();
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => vars.push(var_name(v)),
                    _ => vars.push(format!("{}^{}", var_name(v), k)),
                }
            }
            let mono = vars.join("*");
            let neg = c.is_negative();
            let a = c.abs();
            let body = if mono.is_empty() {
                fmt_rational(&a)
            } else if a.is_one() {
                mono
            } else {
                format!("{}*{}", fmt_rational(&a), mono)
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            write!(f, "{}", body)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Poly {
        Poly::var(VAR_Q)
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        let one = Poly::one();
        let a = one.sub(&q().pow(2));
        let b = one.sub(&q());
        assert_eq!(gcd(&a, &b), q().sub(&one));
    }

    #[test]
    fn gcd_multivariate() {
        let c = Poly::var(VAR_C);
        let d = Poly::var(VAR_D);
        let f = q().mul(&c).sub(&d);
        let a = f.mul(&c.add(&Poly::one()));
        let b = f.mul(&d.sub(&q()));
        assert_eq!(gcd(&a, &b), f.monic());
    }

    #[test]
    fn exact_division_roundtrip() {
        let c = Poly::var(VAR_C);
        let a = q().add(&c).pow(3);
        let b = q().add(&c);
        assert_eq!(a.div_exact(&b).unwrap(), b.pow(2));
        assert!(a.add(&Poly::one()).div_exact(&b).is_none());
    }
}
