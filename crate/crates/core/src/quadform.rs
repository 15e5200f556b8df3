//! Q_{a,b}(x) = Tr(a x^{p^k+1} + b x^2) viewed as a quadratic form in m
//! variables over GF(p): Gram matrix, rank, and the full exponential sum
//! evaluated through the Gram matrix (an independent route from the
//! field-arithmetic evaluation in `expsums`).

use num_integer::gcd;

use crate::arith::powmod;
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

#[derive(Clone, Debug)]
pub struct QuadForm {
    p: u64,
    m: u32,
    pub a: FieldElem,
    pub b: FieldElem,
    pub k: u64,
    /// m x m symmetric Gram matrix over GF(p), row-major.
    gram: Vec<u64>,
}

/// Builds the Gram matrix of Q_{a,b} on the polynomial basis {1, x, ..., x^{m-1}}.
pub fn build_form(ctx: &FieldCtx, a: FieldElem, b: FieldElem, k: u64) -> Result<QuadForm> {
    if gcd(ctx.m() as u64, k) != 1 {
        return Err(Error::BadK { k, m: ctx.m() });
    }
    let p = ctx.p();
    let m = ctx.m() as usize;
    let n = ctx.n();
    let s1 = (powmod(p, k, n) + 1) % n;

    let q_of = |packed: u64| -> u64 {
        let x = ctx.elem(packed);
        let t1 = ctx.mul(a, ctx.pow(x, s1));
        let t2 = ctx.mul(b, ctx.pow(x, 2));
        ctx.trace(ctx.add(t1, t2))
    };

    // basis element x^i is the packed value p^i
    let basis: Vec<u64> = (0..m).map(|i| p.pow(i as u32)).collect();
    let q_basis: Vec<u64> = basis.iter().map(|&v| q_of(v)).collect();
    let inv2 = (p + 1) / 2;

    let mut gram = vec![0u64; m * m];
    for i in 0..m {
        gram[i * m + i] = q_basis[i];
        for j in i + 1..m {
            let qij = q_of(basis[i] + basis[j]);
            let bij = inv2 * ((qij + 2 * p - q_basis[i] - q_basis[j]) % p) % p;
            gram[i * m + j] = bij;
            gram[j * m + i] = bij;
        }
    }
    Ok(QuadForm {
        p,
        m: ctx.m(),
        a,
        b,
        k,
        gram,
    })
}

impl QuadForm {
    pub fn gram(&self) -> &[u64] {
        &self.gram
    }

    /// Q(sum c_i x^i) = c^T G c mod p for a digit vector c.
    pub fn evaluate(&self, digits: &[u64]) -> u64 {
        let m = self.m as usize;
        let mut acc = 0u64;
        for i in 0..m {
            if digits[i] == 0 {
                continue;
            }
            let mut row = 0u64;
            for j in 0..m {
                row += self.gram[i * m + j] * digits[j] % self.p;
            }
            acc = (acc + digits[i] * (row % self.p)) % self.p;
        }
        acc
    }

    /// Rank of the Gram matrix by Gaussian elimination over GF(p).
    pub fn rank(&self) -> u32 {
        let p = self.p;
        let m = self.m as usize;
        let mut mat = self.gram.clone();
        let mut rank = 0usize;
        for col in 0..m {
            let pivot = (rank..m).find(|&r| mat[r * m + col] != 0);
            let Some(pr) = pivot else { continue };
            for j in 0..m {
                mat.swap(rank * m + j, pr * m + j);
            }
            let inv = powmod(mat[rank * m + col], p - 2, p);
            for j in 0..m {
                mat[rank * m + j] = mat[rank * m + j] * inv % p;
            }
            for r in 0..m {
                if r != rank && mat[r * m + col] != 0 {
                    let f = mat[r * m + col];
                    for j in 0..m {
                        mat[r * m + j] = (mat[r * m + j] + (p - f) * mat[rank * m + j]) % p;
                    }
                }
            }
            rank += 1;
        }
        rank as u32
    }

    /// Sum over x in GF(q) of w^{Q(x)}, evaluated through the Gram matrix.
    pub fn sum(&self) -> CycInt {
        let p = self.p;
        let q = p.pow(self.m);
        let mut hist = vec![0u64; p as usize];
        let mut digits = vec![0u64; self.m as usize];
        for _ in 0..q {
            hist[self.evaluate(&digits) as usize] += 1;
            // odometer over GF(p)^m
            for d in digits.iter_mut() {
                *d += 1;
                if *d < p {
                    break;
                }
                *d = 0;
            }
        }
        CycInt::from_trace_histogram(p, &hist)
    }
}

/// Convenience: rank of Q_{a,b} without keeping the form around.
pub fn rank(ctx: &FieldCtx, a: FieldElem, b: FieldElem, k: u64) -> Result<u32> {
    Ok(build_form(ctx, a, b, k)?.rank())
}
