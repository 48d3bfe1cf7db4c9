use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

use super::poly::{gcd, var_x, Poly, VAR_C, VAR_D, VAR_Q};
use crate::error::{QorbitError, Result};

/// Reduced fraction of polynomials with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QCoeff {
    num: Poly,
    den: Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Numeric values for the symbols q, c, d, x_0, x_1, ...
#[derive(Debug, Clone)]
pub struct EvalPoint {
    pub q: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub x: Vec<Complex64>,
}

impl EvalPoint {
    pub fn new(q: f64, c: Complex64, d: Complex64) -> Self {
        EvalPoint { q: Complex64::new(q, 0.0), c, d, x: Vec::new() }
    }

    pub fn with_x(mut self, x: Vec<Complex64>) -> Self {
        self.x = x;
        self
    }

    fn value(&self, v: usize) -> Complex64 {
        match v {
            VAR_Q => self.q,
            VAR_C => self.c,
            VAR_D => self.d,
            _ => self.x.get(v - 3).copied().unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
        }
    }
}

impl QCoeff {
    pub fn zero() -> Self {
        QCoeff { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        QCoeff { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_i64(n: i64) -> Self {
        QCoeff { num: Poly::from_i64(n), den: Poly::one() }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        QCoeff::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        QCoeff { num: Poly::constant(r), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        QCoeff { num: p, den: Poly::one() }
    }

    pub fn var(v: usize) -> Self {
        QCoeff::from_poly(Poly::var(v))
    }

    pub fn q() -> Self {
        QCoeff::var(VAR_Q)
    }

    pub fn c() -> Self {
        QCoeff::var(VAR_C)
    }

    pub fn d() -> Self {
        QCoeff::var(VAR_D)
    }

    pub fn x(i: usize) -> Self {
        QCoeff::var(var_x(i))
    }

    /// `q^k` for any integer `k`.
    pub fn q_pow(k: i32) -> Self {
        let p = Poly::var(VAR_Q).pow(k.unsigned_abs());
        if k >= 0 {
            QCoeff::from_poly(p)
        } else {
            QCoeff { num: Poly::one(), den: p }
        }
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(QorbitError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return QCoeff::zero();
        }
        if let Some(c) = den.as_constant() {
            return QCoeff { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::one);
        let inv = lc.recip();
        QCoeff { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn uses_var(&self, v: usize) -> bool {
        self.num.uses_var(v) || self.den.uses_var(v)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(QorbitError::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &QCoeff) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn arith(a: &QCoeff, b: &QCoeff, op: ArithOp) -> Result<QCoeff> {
        Ok(match op {
            ArithOp::Add => a + b,
            ArithOp::Sub => a - b,
            ArithOp::Mul => a * b,
            ArithOp::Div => a.div(b)?,
        })
    }

    pub fn pow(&self, k: i32) -> Result<Self> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        Ok(QCoeff { num: base.num.pow(k.unsigned_abs()), den: base.den.pow(k.unsigned_abs()) })
    }

    pub fn eval(&self, at: &EvalPoint) -> Result<Complex64> {
        let f = |v: usize| at.value(v);
        let den = self.den.eval(&f);
        let scale = self.den.eval_abs(&f);
        if den.norm() <= 1e-14 * scale.max(f64::MIN_POSITIVE) || den.norm() == 0.0 {
            return Err(QorbitError::Pole { factor: self.den.to_string() });
        }
        Ok(self.num.eval(&f) / den)
    }

    /// Convenience evaluation at real `q0` with complex `c0`, `d0`.
    pub fn evaluate(&self, q0: f64, c0: Complex64, d0: Complex64) -> Result<Complex64> {
        if !(q0 > 0.0 && q0 < 1.0) {
            return Err(QorbitError::Domain(format!("q0 = {} outside (0, 1)", q0)));
        }
        self.eval(&EvalPoint::new(q0, c0, d0))
    }

    /// Exact substitution of a rational value for one symbol.
    pub fn subst(&self, v: usize, value: &BigRational) -> Result<Self> {
        QCoeff::new(self.num.subst(v, value), self.den.subst(v, value))
    }

    /// Substitute `v := q^s · v`.
    pub fn scale_var_by_q(&self, v: usize, s: i32) -> Self {
        if s == 0 || !self.uses_var(v) {
            return self.clone();
        }
        let (n, sn) = self.num.scale_var_by_q(v, s);
        let (d, sd) = self.den.scale_var_by_q(v, s);
        let qp = |k: u32| Poly::var(VAR_Q).pow(k);
        Self::reduce(n.mul(&qp(sd)), d.mul(&qp(sn)))
    }

    /// Substitute `v := value` where `value` is itself a coefficient.
    pub fn compose(&self, v: usize, value: &QCoeff) -> Result<Self> {
        fn sub_poly(p: &Poly, v: usize, value: &QCoeff) -> QCoeff {
            let coeffs = p.coeffs_in(v);
            let mut acc = QCoeff::zero();
            for c in coeffs.into_iter().rev() {
                acc = &(&acc * value) + &QCoeff::from_poly(c);
            }
            acc
        }
        sub_poly(&self.num, v, value).div(&sub_poly(&self.den, v, value))
    }

    pub fn map_vars(&self, map: &dyn Fn(usize) -> usize) -> Self {
        Self::reduce(self.num.map_vars(map), self.den.map_vars(map))
    }

    pub fn swap_vars(&self, a: usize, b: usize) -> Self {
        self.map_vars(&|v| {
            if v == a {
                b
            } else if v == b {
                a
            } else {
                v
            }
        })
    }

    /// Complex conjugation; every symbol is real, so this is the identity.
    pub fn conj(&self) -> Self {
        self.clone()
    }
}

impl Add for &QCoeff {
    type Output = QCoeff;
    fn add(self, other: &QCoeff) -> QCoeff {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return QCoeff::reduce(self.num.add(&other.num), self.den.clone());
        }
        QCoeff::reduce(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }
}

impl Sub for &QCoeff {
    type Output = QCoeff;
    fn sub(self, other: &QCoeff) -> QCoeff {
        self + &(-other)
    }
}

impl Mul for &QCoeff {
    type Output = QCoeff;
    fn mul(self, other: &QCoeff) -> QCoeff {
        if self.is_zero() || other.is_zero() {
            return QCoeff::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return QCoeff { num: self.num.mul(&other.num), den: Poly::one() };
        }
        QCoeff::reduce(self.num.mul(&other.num), self.den.mul(&other.den))
    }
}

impl Neg for &QCoeff {
    type Output = QCoeff;
    fn neg(self) -> QCoeff {
        QCoeff { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Add for QCoeff {
    type Output = QCoeff;
    fn add(self, other: QCoeff) -> QCoeff {
        &self + &other
    }
}

impl Sub for QCoeff {
    type Output = QCoeff;
    fn sub(self, other: QCoeff) -> QCoeff {
        &self - &other
    }
}

impl Mul for QCoeff {
    type Output = QCoeff;
    fn mul(self, other: QCoeff) -> QCoeff {
        &self * &other
    }
}

impl Neg for QCoeff {
    type Output = QCoeff;
    fn neg(self) -> QCoeff {
        -&self
    }
}

impl Default for QCoeff {
    fn default() -> Self {
        QCoeff::zero()
    }
}

impl fmt::Display for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for QCoeff {
    type Err = QorbitError;
    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_qcoeff(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QCoeff {
        QCoeff::q()
    }

    #[test]
    fn q_times_q() {
        assert_eq!(&q() * &q(), QCoeff::q_pow(2));
    }

    #[test]
    fn inverse_cancels() {
        let t = &QCoeff::q_pow(-1) - &q();
        let r = &t.inv().unwrap() * &t;
        assert!(r.is_one());
    }

    #[test]
    fn reduces_common_factor() {
        let one = QCoeff::one();
        let num = &q() - &QCoeff::q_pow(3);
        let den = &one - &QCoeff::q_pow(2);
        let a = num.div(&den).unwrap();
        assert!((&a - &q()).is_zero());
    }

    #[test]
    fn evaluate_square() {
        let v = QCoeff::q_pow(2).evaluate(0.5, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        assert!((v.re - 0.25).abs() < 1e-15 && v.im == 0.0);
    }

    #[test]
    fn evaluate_c_over_d() {
        let q0: f64 = 0.5;
        let a = QCoeff::c().div(&QCoeff::d()).unwrap();
        let v = a.evaluate(q0, Complex64::new(q0.powf(0.5), 0.0), Complex64::new(q0.powf(-0.5), 0.0)).unwrap();
        assert!((v.re - 0.5).abs() < 1e-14);
    }

    #[test]
    fn pole_is_reported() {
        let x = QCoeff::x(1);
        let a = (&x - &(&q() * &QCoeff::c())).inv().unwrap();
        let pt = EvalPoint::new(0.5, Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0))
            .with_x(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        match a.eval(&pt) {
            Err(QorbitError::Pole { factor }) => assert!(factor.contains("x1")),
            other => panic!("expected pole, got {:?}", other),
        }
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(QCoeff::arith(&q(), &QCoeff::zero(), ArithOp::Div), Err(QorbitError::DivisionByZero));
    }

    #[test]
    fn scale_var_shifts_argument() {
        let x = QCoeff::x(1);
        let f = (&x - &QCoeff::c()).inv().unwrap();
        let g = f.scale_var_by_q(super::var_x(1), 2);
        let expect = (&(&QCoeff::q_pow(2) * &x) - &QCoeff::c()).inv().unwrap();
        assert_eq!(g, expect);
        assert_eq!(g.scale_var_by_q(super::var_x(1), -2), f);
    }
}
