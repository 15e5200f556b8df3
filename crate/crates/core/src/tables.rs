//! Exponent classification (congruence-condition certificates), APN exponent
//! families for p = 3, and exact generation of every closed-form value and
//! weight distribution as data, ready for bit-exact comparison against
//! enumeration.

use num_bigint::BigInt;
use num_integer::{gcd, Integer};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{mulmod, phi, powmod};
use crate::codes::WeightDist;
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::expsums::{PairDist, ValueDist};

/// Identifiers of the closed-form distribution tables.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum TableId {
    WdI,
    WdII,
    WdIII,
    T0Dist,
    Pair,
    TOdd,
    TEven,
    SOdd,
    SEven,
    Thm5Odd,
    Thm5Even,
    Cor2,
}

impl TableId {
    pub const ALL: [TableId; 12] = [
        TableId::WdI,
        TableId::WdII,
        TableId::WdIII,
        TableId::T0Dist,
        TableId::Pair,
        TableId::TOdd,
        TableId::TEven,
        TableId::SOdd,
        TableId::SEven,
        TableId::Thm5Odd,
        TableId::Thm5Even,
        TableId::Cor2,
    ];

    pub fn code(self) -> &'static str {
        match self {
            TableId::WdI => "WD-I",
            TableId::WdII => "WD-II",
            TableId::WdIII => "WD-III",
            TableId::T0Dist => "T0-DIST",
            TableId::Pair => "PAIR-DIST",
            TableId::TOdd => "T-ODD",
            TableId::TEven => "T-EVEN",
            TableId::SOdd => "S-ODD",
            TableId::SEven => "S-EVEN",
            TableId::Thm5Odd => "THM5-ODD",
            TableId::Thm5Even => "THM5-EVEN",
            TableId::Cor2 => "COR2",
        }
    }

    pub fn caption(self) -> &'static str {
        match self {
            TableId::WdI => "weight distribution I of C(1,e), dimension 2m",
            TableId::WdII => "weight distribution II of C(1,e), dimension 2m",
            TableId::WdIII => "weight distribution III of C(1,e), dimension 2m",
            TableId::T0Dist => "value distribution of T0(a,b) over GF(q)^2",
            TableId::Pair => "joint value distribution of (T0(a,b), T0(-a,b))",
            TableId::TOdd => "value distribution of T(a,b), odd e",
            TableId::TEven => "value distribution of T(a,b), even e",
            TableId::SOdd => "value distribution of S(a,b,c), odd e",
            TableId::SEven => "value distribution of S(a,b,c), even e",
            TableId::Thm5Odd => "weight distribution of C(1,e,s), odd e",
            TableId::Thm5Even => "weight distribution of C(1,e,s), even e",
            TableId::Cor2 => "weight distribution of C(1,e,s), three APN exponents",
        }
    }

    pub fn from_code(s: &str) -> Option<TableId> {
        TableId::ALL.into_iter().find(|t| t.code() == s)
    }
}

/// e mod (p-1), classified the way the certificate needs it.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ResidueClass {
    One,
    OnePlusHalf,
    Other,
}

/// Witness data for an exponent: the congruence-condition witness
/// (p^k+1) e = 2 p^tau with gcd(m,k) = 1, the weaker even-e witness
/// 2 (p^k+1) e = 2 p^tau (any k), and the table ids they certify.
#[derive(Clone, Debug)]
pub struct ExponentCertificate {
    pub p: u64,
    pub m: u32,
    pub e: u64,
    pub coset_rep: u64,
    pub cc_witness: Option<(u64, u32)>,
    pub thm1i_witness: Option<(u64, u32)>,
    pub parity_even: bool,
    pub residue_class: ResidueClass,
    pub table_ids: Vec<TableId>,
}

impl ExponentCertificate {
    pub fn is_empty(&self) -> bool {
        self.cc_witness.is_none() && self.thm1i_witness.is_none()
    }

    /// Preferred weight table: the congruence-condition one when present.
    pub fn weight_table(&self) -> Option<TableId> {
        self.table_ids
            .iter()
            .copied()
            .find(|t| matches!(t, TableId::WdII | TableId::WdIII))
            .or_else(|| self.table_ids.first().copied())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "m": self.m,
            "e": self.e,
            "coset_rep": self.coset_rep,
            "cc_witness": self.cc_witness.map(|(k, tau)| json!({"k": k, "tau": tau})),
            "thm1i_witness": self.thm1i_witness.map(|(k, tau)| json!({"k": k, "tau": tau})),
            "parity": if self.parity_even { "even" } else { "odd" },
            "residue_class": format!("{:?}", self.residue_class),
            "tables": self.table_ids.iter().map(|t| t.code()).collect::<Vec<_>>(),
        })
    }
}

/// Scans tau in [0, m) then k in [1, m] for both witness kinds; period-m
/// reduction makes this exhaustive over all positive k.
pub fn classify_exponent(p: u64, m: u32, e: u64) -> ExponentCertificate {
    let n = p.checked_pow(m).expect("q = p^m overflows u64") - 1;
    let e = e % n;
    let mut cc = None;
    let mut thm1i = None;
    for tau in 0..m {
        let target = mulmod(2, powmod(p, tau as u64, n), n);
        for k in 1..=m as u64 {
            let lhs = mulmod((powmod(p, k, n) + 1) % n, e, n);
            if cc.is_none() && gcd(m as u64, k) == 1 && lhs == target {
                cc = Some((k, tau));
            }
            if thm1i.is_none() && e % 2 == 0 && mulmod(2, lhs, n) == target {
                thm1i = Some((k, tau));
            }
        }
    }
    let residue_class = {
        let r = e % (p - 1);
        if r == 1 % (p - 1) {
            ResidueClass::One
        } else if r == (1 + (p - 1) / 2) % (p - 1) {
            ResidueClass::OnePlusHalf
        } else {
            ResidueClass::Other
        }
    };
    let mut table_ids = Vec::new();
    if m >= 3 && m % 2 == 1 {
        if p % 4 == 3 && e % 2 == 0 && thm1i.is_some() {
            table_ids.push(TableId::WdI);
        }
        if cc.is_some() {
            match residue_class {
                ResidueClass::OnePlusHalf => table_ids.push(TableId::WdII),
                ResidueClass::One => table_ids.push(TableId::WdIII),
                ResidueClass::Other => {}
            }
        }
    }
    ExponentCertificate {
        p,
        m,
        e,
        coset_rep: crate::field::cyclotomic_coset(p, n, e).representative,
        cc_witness: cc,
        thm1i_witness: thm1i,
        parity_even: e % 2 == 0,
        residue_class,
        table_ids,
    }
}

/// Counts reported alongside the enumeration, for comparison with the
/// phi-based census (2 phi(m) classes for p = 1 mod 4, m + 2 phi(m) for
/// p = 3 mod 4). The reconciliation convention is left to the reader.
#[derive(Clone, Debug, Serialize)]
pub struct CcCensus {
    pub coset_classes: u64,
    pub expected_classes: u64,
}

/// All coset representatives whose exponents satisfy the congruence
/// condition, with their certificates.
pub fn enumerate_cc_exponents(p: u64, m: u32) -> (Vec<ExponentCertificate>, CcCensus) {
    let n = p.pow(m) - 1;
    let mut reps = Vec::new();
    let mut seen = vec![false; n as usize];
    for e in 1..n {
        if seen[e as usize] {
            continue;
        }
        let coset = crate::field::cyclotomic_coset(p, n, e);
        for &t in &coset.members {
            seen[t as usize] = true;
        }
        let cert = classify_exponent(p, m, coset.representative);
        if cert.cc_witness.is_some() {
            reps.push(cert);
        }
    }
    let expected = if p % 4 == 3 {
        m as u64 + 2 * phi(m as u64)
    } else {
        2 * phi(m as u64)
    };
    let census = CcCensus {
        coset_classes: reps.len() as u64,
        expected_classes: expected,
    };
    (reps, census)
}

/// One entry of the p = 3 APN exponent list: the exponent, its family index
/// (1..=5) and the companion exponent d it is paired with.
#[derive(Clone, Debug, Serialize)]
pub struct ApnExponent {
    pub e: u64,
    pub family: u8,
    pub companion_d: u64,
}

/// The five APN exponent families over GF(3^m), m odd >= 3; families not
/// applicable to this m are omitted. Every returned e carries a nonempty
/// certificate (checked by tests).
pub fn apn_exponent_families(m: u32) -> Vec<ApnExponent> {
    assert!(m >= 3 && m % 2 == 1, "m must be odd and at least 3");
    let pw3 = |e: u32| 3u64.pow(e);
    let n = pw3(m) - 1;
    let half = n / 2;
    let mut out = Vec::new();
    // family 1: e = (3^((m+1)/2) - 1)/2, shifted by half when m = 1 mod 4
    {
        let base = (pw3((m + 1) / 2) - 1) / 2;
        let e = if m % 4 == 3 { base } else { base + half };
        out.push(ApnExponent {
            e: e % n,
            family: 1,
            companion_d: (pw3((m + 1) / 2) + 1) % n,
        });
    }
    // family 2: e = (3^(m+1) - 1)/8, same shift rule
    {
        let base = ((pw3(m + 1) - 1) / 8) % n;
        let e = if m % 4 == 3 { base } else { (base + half) % n };
        out.push(ApnExponent {
            e,
            family: 2,
            companion_d: 4 % n,
        });
    }
    // family 3: e = (3^m + 1)/4 + (3^m - 1)/2
    out.push(ApnExponent {
        e: ((pw3(m) + 1) / 4 + half) % n,
        family: 3,
        companion_d: 2,
    });
    // family 4: e = 3^((m+1)/2) - 1
    {
        let k = if m % 4 == 1 { (m + 1) / 2 } else { (m - 1) / 2 };
        out.push(ApnExponent {
            e: (pw3((m + 1) / 2) - 1) % n,
            family: 4,
            companion_d: ((pw3(k) + 1) / 2) % n,
        });
    }
    // family 5: only for m = 3 mod 4
    if m % 4 == 3 {
        let k = if m % 8 == 3 {
            (m + 1) / 4
        } else {
            (3 * m - 1) / 4
        };
        out.push(ApnExponent {
            e: ((pw3((m + 1) / 4) - 1) * (pw3((m + 1) / 2) + 1)) % n,
            family: 5,
            companion_d: ((pw3(k) + 1) / 2) % n,
        });
    }
    out
}

/// A generated closed-form table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableData {
    Weights(WeightDist),
    Values(ValueDist),
    Pairs(PairDist),
}

impl TableData {
    pub fn to_json(&self) -> Value {
        match self {
            TableData::Weights(w) => w.to_json(),
            TableData::Values(v) => v.to_json(),
            TableData::Pairs(pr) => pr.to_json(),
        }
    }
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn pw(p: u64, e: u32) -> BigInt {
    big(p).pow(e)
}

fn div_exact(n: BigInt, d: BigInt) -> BigInt {
    let (q, r) = n.div_rem(&d);
    assert!(r.is_zero(), "table multiplicity must divide exactly");
    q
}

/// nu_i: p^((m+i)/2) for odd i, g * p^((m+i-1)/2) for even i (odd m).
fn nu(p: u64, m: u32, i: u32) -> CycInt {
    if i % 2 == 1 {
        CycInt::from_int(p, 1).scale(pw(p, (m + i) / 2))
    } else {
        CycInt::gauss_sum(p).scale(pw(p, (m + i - 1) / 2))
    }
}

fn weight_u64(w: BigInt) -> u64 {
    assert!(!w.is_negative(), "weight must be non-negative");
    w.to_u64().expect("weight fits in u64")
}

fn require(cond: bool, table: TableId, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(table.code().into(), msg.into()))
    }
}

/// Evaluates every row of the requested table at (p, m): values in Z[w],
/// multiplicities as exact integers, equal rows merged, zero rows dropped,
/// and the population identity enforced.
pub fn generate_table(id: TableId, p: u64, m: u32) -> Result<TableData> {
    require(p % 2 == 1 && p >= 3, id, "p must be an odd prime")?;
    require(m >= 3 && m % 2 == 1, id, "m must be odd and at least 3")?;
    match id {
        TableId::Pair
        | TableId::TOdd
        | TableId::TEven
        | TableId::SOdd
        | TableId::SEven
        | TableId::Thm5Odd
        | TableId::Thm5Even => {
            require(p % 4 == 3, id, "requires p = 3 mod 4")?;
        }
        TableId::Cor2 => require(p == 3, id, "defined for p = 3 only")?,
        _ => {}
    }

    let q = pw(p, m);
    let qm1: BigInt = &q - 1;
    let ph = (m - 1) / 2; // (m-1)/2 as a power index
    let sqm1 = pw(p, ph); // p^((m-1)/2)
    let pm1 = pw(p, m - 1); // p^(m-1)

    let data = match id {
        TableId::WdI | TableId::WdII | TableId::WdIII => {
            let mut dist = WeightDist::new(2 * m, p.pow(m) - 1);
            let center = big(p - 1) * &pm1;
            dist.add(0, 1);
            let (dlt, mult_minus, mult_plus, mult_center) = match id {
                TableId::WdI => (
                    sqm1.clone(),
                    div_exact(big(p - 1) * &qm1 * (&pm1 + &sqm1), big(2)),
                    div_exact(big(p - 1) * &qm1 * (&pm1 - &sqm1), big(2)),
                    &qm1 * (&pm1 + 1),
                ),
                TableId::WdII => (
                    div_exact(big(p - 1) * &sqm1, big(2)),
                    &qm1 * (&pm1 + &sqm1),
                    &qm1 * (&pm1 - &sqm1),
                    &qm1 * (&q - 2 * &pm1 + 1),
                ),
                TableId::WdIII => (
                    big(p - 1) * &sqm1,
                    div_exact(&qm1 * (&pm1 + &sqm1), big(2)),
                    div_exact(&qm1 * (&pm1 - &sqm1), big(2)),
                    &qm1 * (&q - &pm1 + 1),
                ),
                _ => unreachable!(),
            };
            dist.add(weight_u64(&center - &dlt), mult_minus);
            dist.add(weight_u64(&center + &dlt), mult_plus);
            dist.add(weight_u64(center), mult_center);
            expect_population(&dist.population(), &pw(p, 2 * m), id)?;
            TableData::Weights(dist)
        }
        TableId::T0Dist => {
            let mut dist = ValueDist::default();
            let m0 = div_exact(
                big(p * p) * &qm1 * (&q - &pm1 - pw(p, m - 2) + 1),
                big(2 * (p * p - 1)),
            );
            let e2 = div_exact(&qm1 * (&pm1 - 1), big(2 * (p * p - 1)));
            dist.add(nu(p, m, 0), m0.clone());
            dist.add(-&nu(p, m, 0), m0);
            dist.add(nu(p, m, 1), div_exact(&qm1 * (&pm1 + &sqm1), big(2)));
            dist.add(-&nu(p, m, 1), div_exact(&qm1 * (&pm1 - &sqm1), big(2)));
            dist.add(nu(p, m, 2), e2.clone());
            dist.add(-&nu(p, m, 2), e2);
            dist.add(CycInt::from_int(p, 1).scale(q.clone()), 1);
            expect_population(&dist.population, &(&q * &q), id)?;
            TableData::Values(dist.normalized())
        }
        TableId::Pair => {
            let v0 = nu(p, m, 0);
            let v1 = nu(p, m, 1);
            let v2 = nu(p, m, 2);
            let a = div_exact(&qm1 * (pw(p, m + 1) - 3 * &q + p + 1), big(4 * (p - 1)));
            let b = div_exact(big(p - 1) * (&q * &q - 1), big(4 * (p + 1)));
            let c = div_exact(&qm1 * (&pm1 + &sqm1), big(4));
            let d = div_exact(&qm1 * (&pm1 - &sqm1), big(4));
            let e = div_exact(&qm1 * (&pm1 - 1), big(2 * (p * p - 1)));
            let mut dist = PairDist::default();
            for (x, y, mult) in [
                (v0.clone(), v0.clone(), a.clone()),
                (-&v0, -&v0, a),
                (v0.clone(), -&v0, b.clone()),
                (-&v0, v0.clone(), b),
                (v0.clone(), v1.clone(), c.clone()),
                (v1.clone(), v0.clone(), c.clone()),
                (-&v0, v1.clone(), c.clone()),
                (v1.clone(), -&v0, c),
                (v0.clone(), -&v1, d.clone()),
                (-&v1, v0.clone(), d.clone()),
                (-&v0, -&v1, d.clone()),
                (-&v1, -&v0, d),
                (v0.clone(), v2.clone(), e.clone()),
                (v2.clone(), v0.clone(), e.clone()),
                (-&v0, -&v2, e.clone()),
                (-&v2, -&v0, e),
                (v0.clone(), -&v2, BigInt::zero()),
                (-&v2, v0.clone(), BigInt::zero()),
                (-&v0, v2.clone(), BigInt::zero()),
                (v2.clone(), -&v0, BigInt::zero()),
            ] {
                dist.add((x, y), mult);
            }
            let qq = CycInt::from_int(p, 1).scale(q.clone());
            dist.add((qq.clone(), qq), 1);
            expect_population(&dist.population, &(&q * &q), id)?;
            TableData::Pairs(dist.normalized())
        }
        TableId::TOdd => {
            let mut dist = ValueDist::default();
            dist.add(CycInt::zero(p), &qm1 * (&q - &pm1 + 1));
            dist.add(nu(p, m, 1), div_exact(&qm1 * (&pm1 + &sqm1), big(2)));
            dist.add(-&nu(p, m, 1), div_exact(&qm1 * (&pm1 - &sqm1), big(2)));
            dist.add(CycInt::from_int(p, 1).scale(q.clone()), 1);
            expect_population(&dist.population, &(&q * &q), id)?;
            TableData::Values(dist.normalized())
        }
        TableId::TEven => {
            let g = CycInt::gauss_sum(p);
            let half_pow = CycInt::from_int(p, 1).scale(sqm1.clone());
            let gp = &g * &half_pow; // g p^((m-1)/2) = nu_0
            let pp = half_pow.scale(big(p)); // p^((m+1)/2)
            let mut dist = ValueDist::default();
            dist.add(
                CycInt::zero(p),
                div_exact(big(p - 1) * (&q * &q - 1), big(2 * (p + 1))),
            );
            let a = div_exact(&qm1 * (pw(p, m + 1) - 3 * &q + p + 1), big(4 * (p - 1)));
            dist.add(gp.clone(), a.clone());
            dist.add(-&gp, a);
            let plus = div_exact(&qm1 * (&pm1 + &sqm1), big(2));
            let minus = div_exact(&qm1 * (&pm1 - &sqm1), big(2));
            dist.add((&gp + &pp).div_exact(2)?, plus.clone());
            dist.add((&(-&gp) + &pp).div_exact(2)?, plus);
            dist.add((&gp - &pp).div_exact(2)?, minus.clone());
            dist.add((&(-&gp) - &pp).div_exact(2)?, minus);
            let e2 = div_exact(&qm1 * (&pm1 - 1), big(p * p - 1));
            let big_g = gp.scale(big(1 + p)).div_exact(2)?;
            dist.add(big_g.clone(), e2.clone());
            dist.add(-&big_g, e2);
            dist.add(CycInt::from_int(p, 1).scale(q.clone()), 1);
            expect_population(&dist.population, &(&q * &q), id)?;
            TableData::Values(dist.normalized())
        }
        TableId::SOdd | TableId::SEven => {
            let g = CycInt::gauss_sum(p);
            let m0 = div_exact(
                big(p * p) * &qm1 * (&q - &pm1 - pw(p, m - 2) + 1),
                big(2 * (p * p - 1)),
            );
            let a = div_exact(&qm1 * (pw(p, m + 1) - 3 * &q + p + 1), big(4 * (p - 1)));
            let b = div_exact(big(p - 1) * (&q * &q - 1), big(4 * (p + 1)));
            let plus = div_exact(&qm1 * (&pm1 + &sqm1), big(2));
            let minus = div_exact(&qm1 * (&pm1 - &sqm1), big(2));
            let e2 = div_exact(&qm1 * (&pm1 - 1), big(2 * (p * p - 1)));
            let e2x = div_exact(&qm1 * (&pm1 - 1), big(p * p - 1));
            let two = CycInt::from_int(p, 2);
            let mut dist = ValueDist::default();
            for t in 0..p as i64 {
                let wt = CycInt::omega_pow(p, t);
                let wnt = CycInt::omega_pow(p, -t);
                let u = &wt + &wnt;
                let v = &wt - &wnt;
                let base = &two - &u; // 2 - w^t - w^-t
                let mut row = |num: CycInt, mult: BigInt| -> Result<()> {
                    dist.add((&base + &num).div_exact(2)?, mult);
                    Ok(())
                };
                if id == TableId::SOdd {
                    let vg = (&v * &g).scale(sqm1.clone()); // v g p^((m-1)/2)
                    row(vg.clone(), m0.clone())?;
                    row(-&vg, m0.clone())?;
                    let up = u.scale(&sqm1 * p); // u p^((m+1)/2)
                    row(up.clone(), plus.clone())?;
                    row(-&up, minus.clone())?;
                    let vg2 = (&v * &g).scale(&sqm1 * p); // v g p^((m+1)/2)
                    row(vg2.clone(), e2.clone())?;
                    row(-&vg2, e2.clone())?;
                } else {
                    let ug = (&u * &g).scale(sqm1.clone());
                    row(ug.clone(), a.clone())?;
                    row(-&ug, a.clone())?;
                    let vg = (&v * &g).scale(sqm1.clone());
                    row(vg.clone(), b.clone())?;
                    row(-&vg, b.clone())?;
                    // (+- w^t g + w^-t p) p^((m-1)/2) and (+- w^t g - w^-t p) ...
                    let tg = (&wt * &g).scale(sqm1.clone());
                    let tp = wnt.scale(&sqm1 * p);
                    row(&tg + &tp, plus.clone())?;
                    row(&(-&tg) + &tp, plus.clone())?;
                    row(&tg - &tp, minus.clone())?;
                    row(&(-&tg) - &tp, minus.clone())?;
                    // +- (w^t + w^-t p) g p^((m-1)/2)
                    let mixed = (&(&wt + &wnt.scale(big(p))) * &g).scale(sqm1.clone());
                    row(mixed.clone(), e2x.clone())?;
                    row(-&mixed, e2x.clone())?;
                }
                // 1 + (q-1)/2 (w^t + w^-t)
                let last = &two + &u.scale(qm1.clone());
                dist.add(last.div_exact(2)?, 1);
            }
            expect_population(&dist.population, &(&q * &q * p), id)?;
            TableData::Values(dist.normalized())
        }
        TableId::Thm5Odd => {
            let mut dist = WeightDist::new(2 * m + 1, p.pow(m) - 1);
            let center = big(p - 1) * &pm1;
            let sq_hi = &sqm1 * p; // p^((m+1)/2)
            dist.add(0, 1);
            dist.add(weight_u64(&q - 1), p - 1);
            dist.add(
                weight_u64(&center - &sqm1 - 1),
                div_exact(
                    &qm1 * (pw(p, m + 2) - &q - &pm1 - &sq_hi * p + &sqm1 + p * p),
                    big(2 * (p + 1)),
                ),
            );
            dist.add(
                weight_u64(&center + &sqm1 - 1),
                div_exact(
                    &qm1 * (pw(p, m + 2) - &q - &pm1 + &sq_hi * p - &sqm1 + p * p),
                    big(2 * (p + 1)),
                ),
            );
            let e2 = div_exact(&qm1 * (&pm1 - 1), big(2 * (p + 1)));
            dist.add(weight_u64(&center - &sq_hi - 1), e2.clone());
            dist.add(weight_u64(&center + &sq_hi - 1), e2);
            dist.add(
                weight_u64(&center - big(p - 1) * &sqm1),
                div_exact(&qm1 * (&pm1 + &sqm1), big(2)),
            );
            dist.add(
                weight_u64(&center + big(p - 1) * &sqm1),
                div_exact(&qm1 * (&pm1 - &sqm1), big(2)),
            );
            dist.add(weight_u64(center), &qm1 * (&q - &pm1 + 1));
            expect_population(&dist.population(), &pw(p, 2 * m + 1), id)?;
            TableData::Weights(dist)
        }
        TableId::Thm5Even => {
            let mut dist = WeightDist::new(2 * m + 1, p.pow(m) - 1);
            let center = big(p - 1) * &pm1;
            let sq_hi = &sqm1 * p;
            let half_step = div_exact(big(p - 1) * &sqm1, big(2));
            dist.add(0, 1);
            dist.add(weight_u64(&q - 1), p - 1);
            dist.add(
                weight_u64(&center - &sqm1 - 1),
                div_exact(
                    &qm1 * (pw(p, m + 1) + &q + 2 * &pm1 - 2 * &sq_hi - 2 * &sqm1 + p - 1)
                        * (p - 1),
                    big(4 * (p + 1)),
                ),
            );
            dist.add(
                weight_u64(&center + &sqm1 - 1),
                div_exact(
                    &qm1 * (pw(p, m + 1) + &q + 2 * &pm1 + 2 * &sq_hi + 2 * &sqm1 + p - 1)
                        * (p - 1),
                    big(4 * (p + 1)),
                ),
            );
            let e2 = div_exact(&qm1 * (&pm1 - 1), big(p + 1));
            dist.add(weight_u64(&center - &half_step - 1), e2.clone());
            dist.add(weight_u64(&center + &half_step - 1), e2);
            dist.add(weight_u64(&center - &half_step), &qm1 * (&pm1 + &sqm1));
            dist.add(weight_u64(&center + &half_step), &qm1 * (&pm1 - &sqm1));
            dist.add(
                weight_u64(&center - 1),
                div_exact(&qm1 * (pw(p, m + 1) - &q - 2 * &pm1 + p + 1), big(2)),
            );
            dist.add(weight_u64(center), &qm1 * (&q + 1 - 2 * &pm1));
            expect_population(&dist.population(), &pw(p, 2 * m + 1), id)?;
            TableData::Weights(dist)
        }
        TableId::Cor2 => {
            let mut dist = WeightDist::new(2 * m + 1, 3u64.pow(m) - 1);
            let two_pm1 = 2 * &pm1; // 2 * 3^(m-1)
            dist.add(0, 1);
            dist.add(weight_u64(&q - 1), 2u64);
            dist.add(weight_u64(&two_pm1 - &sqm1 - 1), &qm1 * (&two_pm1 - &sqm1));
            dist.add(weight_u64(&two_pm1 + &sqm1 - 1), &qm1 * (&two_pm1 + &sqm1));
            dist.add(weight_u64(&two_pm1 - &sqm1), &qm1 * (&pm1 + &sqm1));
            dist.add(weight_u64(&two_pm1 + &sqm1), &qm1 * (&pm1 - &sqm1));
            dist.add(weight_u64(&two_pm1 - 1), 2 * &qm1 * (&pm1 + 1));
            dist.add(weight_u64(two_pm1), &qm1 * (&pm1 + 1));
            expect_population(&dist.population(), &pw(p, 2 * m + 1), id)?;
            TableData::Weights(dist)
        }
    };
    Ok(data)
}

fn expect_population(got: &BigInt, want: &BigInt, id: TableId) -> Result<()> {
    if got == want {
        Ok(())
    } else {
        Err(Error::IdentityViolated(format!(
            "table {} population {got}, expected {want}",
            id.code()
        )))
    }
}
