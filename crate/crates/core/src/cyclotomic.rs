//! Exact arithmetic in Z[w] for a primitive p-th root of unity w.
//!
//! Elements live on the basis {1, w, ..., w^{p-2}}; the relation
//! 1 + w + ... + w^{p-1} = 0 is applied eagerly, so equality, hashing and
//! ordering are plain coefficient comparisons. Coefficients are
//! arbitrary-precision: the power-sum accumulations grow past machine width
//! already at moderate q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::legendre;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CycInt {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    pub fn zero(p: u64) -> Self {
        CycInt {
            p,
            coeffs: vec![BigInt::zero(); (p - 1) as usize],
        }
    }

    pub fn from_int<T: Into<BigInt>>(p: u64, n: T) -> Self {
        let mut z = CycInt::zero(p);
        z.coeffs[0] = n.into();
        z
    }

    /// w^t with t taken mod p.
    pub fn omega_pow(p: u64, t: i64) -> Self {
        let t = t.rem_euclid(p as i64) as usize;
        let mut acc = vec![BigInt::zero(); p as usize];
        acc[t] = BigInt::one();
        Self::canonicalize(p, acc)
    }

    /// Canonical form of sum a_i w^i given a length-p coefficient vector.
    fn canonicalize(p: u64, mut acc: Vec<BigInt>) -> Self {
        debug_assert_eq!(acc.len(), p as usize);
        let top = acc.pop().unwrap();
        if !top.is_zero() {
            for c in acc.iter_mut() {
                *c -= &top;
            }
        }
        CycInt { p, coeffs: acc }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Some(n) iff the value is the rational integer n.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Bridge from trace histograms: sum over t of hist[t] * w^t.
    pub fn from_trace_histogram(p: u64, hist: &[u64]) -> Self {
        assert_eq!(hist.len(), p as usize);
        Self::canonicalize(p, hist.iter().map(|&n| BigInt::from(n)).collect())
    }

    pub fn from_trace_histogram_big(p: u64, hist: &[BigInt]) -> Self {
        assert_eq!(hist.len(), p as usize);
        Self::canonicalize(p, hist.to_vec())
    }

    /// Quadratic Gauss sum g = sum over y in GF(p)* of (y/p) w^y.
    /// Satisfies g^2 = (-1)^((p-1)/2) p.
    pub fn gauss_sum(p: u64) -> Self {
        let mut acc = vec![BigInt::zero(); p as usize];
        for y in 1..p {
            acc[y as usize] = BigInt::from(legendre(y as i64, p));
        }
        Self::canonicalize(p, acc)
    }

    pub fn scale<T: Into<BigInt>>(&self, n: T) -> Self {
        let n = n.into();
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * &n).collect(),
        }
    }

    /// Substitution w -> w^{-1}; an involution fixing rational integers.
    pub fn conj(&self) -> Self {
        let p = self.p as usize;
        let mut acc = vec![BigInt::zero(); p];
        for (i, c) in self.coeffs.iter().enumerate() {
            acc[(p - i) % p] += c;
        }
        Self::canonicalize(self.p, acc)
    }

    /// Exact division by a small integer; all coefficients must be divisible.
    pub fn div_exact(&self, d: u64) -> Result<Self> {
        let d = BigInt::from(d);
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if (c % &d).is_zero() {
                coeffs.push(c / &d);
            } else {
                return Err(Error::IdentityViolated(format!(
                    "coefficient {c} not divisible by {d} in exact division"
                )));
            }
        }
        Ok(CycInt { p: self.p, coeffs })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = CycInt::from_int(self.p, 1);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Some(c) iff the value equals c * g for the Gauss sum g of p.
    /// Uses g * conj(g) = p.
    pub fn as_gauss_multiple(&self) -> Option<BigInt> {
        let g = CycInt::gauss_sum(self.p);
        let t = self * &g.conj();
        let n = t.as_integer()?;
        let p = BigInt::from(self.p);
        if (&n % &p).is_zero() {
            let c = n / p;
            if *self == g.scale(c.clone()) {
                return Some(c);
            }
        }
        None
    }

    /// Human-readable rendering; prefers the symbolic +-p^j / +-p^j*sqrt(p*)
    /// shapes and falls back to the coefficient form.
    pub fn pretty(&self) -> String {
        self.symbolic().unwrap_or_else(|| self.coeff_string())
    }

    /// The plain coefficient rendering "a + b*w + ...".
    pub fn coeff_string(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let term = match i {
                0 => format!("{mag}"),
                1 if mag.is_one() => "w".to_string(),
                1 => format!("{mag}*w"),
                _ if mag.is_one() => format!("w^{i}"),
                _ => format!("{mag}*w^{i}"),
            };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Symbolic form when the value is an integer or a Gauss-sum multiple of
    /// +-p^j, e.g. "3^2*sqrt(-3)".
    pub fn symbolic(&self) -> Option<String> {
        if let Some(n) = self.as_integer() {
            return Some(n.to_string());
        }
        let c = self.as_gauss_multiple()?;
        let radicand: i64 = if self.p % 4 == 3 {
            -(self.p as i64)
        } else {
            self.p as i64
        };
        let sqrt = format!("sqrt({radicand})");
        let p = BigInt::from(self.p);
        let (sign, mut mag) = if c.is_negative() {
            ("-", -c.clone())
        } else {
            ("", c.clone())
        };
        let mut j = 0u32;
        while (&mag % &p).is_zero() && mag > BigInt::one() {
            mag /= &p;
            j += 1;
        }
        if mag.is_one() {
            if j == 0 {
                Some(format!("{sign}{sqrt}"))
            } else {
                Some(format!("{sign}{}^{}*{sqrt}", self.p, j))
            }
        } else {
            Some(format!("{sign}{mag}*{}^{}*{sqrt}", self.p, j))
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "pretty": self.coeff_string(),
            "symbolic": self.symbolic(),
        })
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

fn check_same_ring(a: &CycInt, b: &CycInt) {
    assert_eq!(a.p, b.p, "mixed cyclotomic rings");
}

impl Add for &CycInt {
    type Output = CycInt;
    fn add(self, rhs: &CycInt) -> CycInt {
        check_same_ring(self, rhs);
        CycInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CycInt {
    type Output = CycInt;
    fn sub(self, rhs: &CycInt) -> CycInt {
        check_same_ring(self, rhs);
        CycInt {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &CycInt {
    type Output = CycInt;
    fn mul(self, rhs: &CycInt) -> CycInt {
        check_same_ring(self, rhs);
        let p = self.p as usize;
        let mut acc = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                acc[(i + j) % p] += a * b;
            }
        }
        CycInt::canonicalize(self.p, acc)
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn omega(p: u64) -> CycInt {
        CycInt::omega_pow(p, 1)
    }

    #[test]
    fn ring_basics() {
        let w = omega(3);
        let w2 = CycInt::omega_pow(3, 2);
        // 1 + w + w^2 = 0
        assert_eq!(&w + &w2, CycInt::from_int(3, -1));
        assert_eq!(&w * &w2, CycInt::from_int(3, 1));
        assert_eq!(CycInt::from_int(3, 1).scale(5), CycInt::from_int(3, 5));
        assert_eq!(w2.coeffs(), &[BigInt::from(-1), BigInt::from(-1)]);
    }

    #[test]
    fn gauss_sum_squares() {
        // g^2 = p* = (-1)^((p-1)/2) p
        for p in [3u64, 5, 7, 11, 19] {
            let g = CycInt::gauss_sum(p);
            let sign: i64 = if p % 4 == 1 { 1 } else { -1 };
            assert_eq!(
                &g * &g,
                CycInt::from_int(p, sign * p as i64),
                "g^2 wrong at p = {p}"
            );
        }
        // symbolic expansion at p = 3: g = w - w^2 = 1 + 2w
        let g3 = CycInt::gauss_sum(3);
        assert_eq!(g3.coeffs(), &[BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn conjugation() {
        assert_eq!(CycInt::from_int(3, 5).conj(), CycInt::from_int(3, 5));
        assert_eq!(omega(3).conj(), CycInt::omega_pow(3, 2));
        // conj(g) = (-1/p) g
        let g3 = CycInt::gauss_sum(3);
        assert_eq!(g3.conj(), -&g3);
        let g5 = CycInt::gauss_sum(5);
        assert_eq!(g5.conj(), g5);
    }

    #[test]
    fn trace_histogram_bridge() {
        // all traces zero
        assert_eq!(
            CycInt::from_trace_histogram(3, &[27, 0, 0]),
            CycInt::from_int(3, 27)
        );
        // balanced histogram sums to zero
        assert!(CycInt::from_trace_histogram(3, &[9, 9, 9]).is_zero());
        // 9 + 12w + 6w^2 = 3 + 6w
        let z = CycInt::from_trace_histogram(3, &[9, 12, 6]);
        assert_eq!(z.coeffs(), &[BigInt::from(3), BigInt::from(6)]);
    }

    #[test]
    fn exact_division() {
        let g = CycInt::gauss_sum(3);
        let v = (&g + &CycInt::from_int(3, 3)).scale(3);
        let half = v.div_exact(2).unwrap();
        assert_eq!(&half + &half, v);
        assert!(CycInt::from_int(3, 3).div_exact(2).is_err());
    }

    #[test]
    fn symbolic_rendering() {
        let g = CycInt::gauss_sum(3);
        assert_eq!(g.symbolic().unwrap(), "sqrt(-3)");
        assert_eq!(g.scale(9).symbolic().unwrap(), "3^2*sqrt(-3)");
        assert_eq!((-g.scale(3)).symbolic().unwrap(), "-3^1*sqrt(-3)");
        assert_eq!(CycInt::from_int(3, -27).pretty(), "-27");
        assert_eq!(CycInt::gauss_sum(5).symbolic().unwrap(), "sqrt(5)");
        // a generic value falls back to the coefficient form
        let z = &omega(3) + &CycInt::from_int(3, 3);
        assert_eq!(z.symbolic(), None);
        assert_eq!(z.pretty(), "3 + w");
        // 3 + 6w = 3(1 + 2w) is exactly 3g and must be recognized
        let v = &omega(3).scale(6) + &CycInt::from_int(3, 3);
        assert_eq!(v.symbolic().unwrap(), "3^1*sqrt(-3)");
        assert_eq!(v.coeff_string(), "3 + 6*w");
        assert_eq!(v.to_json()["symbolic"], "3^1*sqrt(-3)");
        assert_eq!(z.to_json()["symbolic"], serde_json::Value::Null);
    }

    fn arb_cycint(p: u64) -> impl Strategy<Value = CycInt> {
        prop::collection::vec(-20i64..20, (p - 1) as usize).prop_map(move |v| CycInt {
            p,
            coeffs: v.into_iter().map(BigInt::from).collect(),
        })
    }

    proptest! {
        #[test]
        fn conj_involution_and_multiplicativity(z in arb_cycint(7), w in arb_cycint(7)) {
            prop_assert_eq!(z.conj().conj(), z.clone());
            prop_assert_eq!((&z * &w).conj(), &z.conj() * &w.conj());
        }

        #[test]
        fn histogram_additivity(a in prop::collection::vec(0u64..50, 5),
                                b in prop::collection::vec(0u64..50, 5)) {
            let sum: Vec<u64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let za = CycInt::from_trace_histogram(5, &a);
            let zb = CycInt::from_trace_histogram(5, &b);
            prop_assert_eq!(CycInt::from_trace_histogram(5, &sum), &za + &zb);
        }

        #[test]
        fn ring_axioms(a in arb_cycint(5), b in arb_cycint(5), c in arb_cycint(5)) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }
    }

    #[test]
    fn gauss_multiple_norms_are_integers() {
        // z * conj(z) is a rational integer for Gauss-sum multiples
        for p in [3u64, 7] {
            let g = CycInt::gauss_sum(p);
            for j in 0..3u32 {
                let z = g.scale(BigInt::from(p).pow(j));
                assert!((&z * &z.conj()).as_integer().is_some());
            }
        }
    }
}
