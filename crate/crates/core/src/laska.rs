//! Minimal-discriminant Weierstrass equations over the integers by Laska's
//! descent: enumerate the scalings u with u^4 | c4 and u^6 | c6, take the
//! largest that admits an integral coordinate change, and normalize the
//! surviving coefficients into fixed residue classes.
//!
//! The coordinate change is x = u^2 x' + r, y = u^3 y' + s u^2 x' + t, under
//! which c4 = u^4 c4', c6 = u^6 c6' and disc = u^12 disc'. The residue
//! classes a1', a3' in {0,1} and a2' in {-1,0,1} make the output unique; an
//! already-reduced equation is a literal fixed point.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::arith::{factorize, valuation};
use crate::{Error, Result};

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` with integer a_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassEquation {
    a1: BigInt,
    a2: BigInt,
    a3: BigInt,
    a4: BigInt,
    a6: BigInt,
}

impl WeierstrassEquation {
    pub fn new(
        a1: impl Into<BigInt>,
        a2: impl Into<BigInt>,
        a3: impl Into<BigInt>,
        a4: impl Into<BigInt>,
        a6: impl Into<BigInt>,
    ) -> Self {
        WeierstrassEquation {
            a1: a1.into(),
            a2: a2.into(),
            a3: a3.into(),
            a4: a4.into(),
            a6: a6.into(),
        }
    }

    pub fn from_integers(a: [i64; 5]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub fn coefficients(&self) -> [&BigInt; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    fn b2(&self) -> BigInt {
        &self.a1 * &self.a1 + 4 * &self.a2
    }

    fn b4(&self) -> BigInt {
        2 * &self.a4 + &self.a1 * &self.a3
    }

    fn b6(&self) -> BigInt {
        &self.a3 * &self.a3 + 4 * &self.a6
    }

    fn b8(&self) -> BigInt {
        &self.a1 * &self.a1 * &self.a6 + 4 * &self.a2 * &self.a6
            - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4
    }

    pub fn c_invariants(&self) -> (BigInt, BigInt) {
        let b2 = self.b2();
        let b4 = self.b4();
        let b6 = self.b6();
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6 = -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * &b6;
        (c4, c6)
    }

    pub fn discriminant(&self) -> BigInt {
        let b2 = self.b2();
        let b4 = self.b4();
        let b6 = self.b6();
        let b8 = self.b8();
        // 4 b8 = b2 b6 - b4^2 pins the b-invariants against each other.
        debug_assert_eq!(4 * &b8, &b2 * &b6 - &b4 * &b4);
        let disc = -(&b2 * &b2 * &b8) - 8 * (&b4 * &b4 * &b4) - 27 * (&b6 * &b6)
            + 9 * &b2 * &b4 * &b6;
        #[cfg(debug_assertions)]
        {
            let (c4, c6) = self.c_invariants();
            debug_assert_eq!(&c4 * &c4 * &c4 - &c6 * &c6, 1728 * &disc);
        }
        disc
    }
}

impl fmt::Display for WeierstrassEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2")?;
        if !self.a1.is_zero() {
            write!(f, " + {}*x*y", self.a1)?;
        }
        if !self.a3.is_zero() {
            write!(f, " + {}*y", self.a3)?;
        }
        write!(f, " = x^3")?;
        if !self.a2.is_zero() {
            write!(f, " + {}*x^2", self.a2)?;
        }
        if !self.a4.is_zero() {
            write!(f, " + {}*x", self.a4)?;
        }
        if !self.a6.is_zero() {
            write!(f, " + {}", self.a6)?;
        }
        Ok(())
    }
}

/// One admissible scaling: u with the exact cofactors c4 = u^4 x, c6 = u^6 y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UCandidate {
    pub u: BigUint,
    pub x: BigInt,
    pub y: BigInt,
}

/// All u > 0 with u^4 | c4 and u^6 | c6, descending, so the first element
/// is the Laska choice. A zero invariant only constrains through the other.
pub fn u_candidates(c4: &BigInt, c6: &BigInt) -> Result<Vec<UCandidate>> {
    if c4.is_zero() && c6.is_zero() {
        return Err(Error::NoScalingCandidates);
    }
    // Per-prime exponent caps from whichever invariants are nonzero.
    let mut caps: Vec<(BigUint, u64)> = Vec::new();
    let constraining = if c4.is_zero() { c6 } else { c4 };
    for (p, _) in factorize(constraining)?.factors {
        let mut cap = u64::MAX;
        if !c4.is_zero() {
            let v = valuation(c4, &p)?.finite().expect("nonzero");
            cap = cap.min(v / 4);
        }
        if !c6.is_zero() {
            let v = valuation(c6, &p)?.finite().expect("nonzero");
            cap = cap.min(v / 6);
        }
        if cap > 0 {
            caps.push((p, cap));
        }
    }
    let mut us = vec![BigUint::one()];
    for (p, cap) in &caps {
        let mut next = Vec::new();
        for u in &us {
            let mut pe = BigUint::one();
            for _ in 0..=*cap {
                next.push(u * &pe);
                pe *= p;
            }
        }
        us = next;
    }
    us.sort();
    us.dedup();
    us.reverse();
    Ok(us
        .into_iter()
        .map(|u| {
            let ub = BigInt::from(u.clone());
            UCandidate {
                x: c4 / ub.pow(4),
                y: c6 / ub.pow(6),
                u,
            }
        })
        .collect())
}

/// A completed reduction: the minimal equation together with the coordinate
/// change (u, r, s, t) that produced it from the input.
#[derive(Debug, Clone)]
pub struct LaskaReduction {
    minimal: WeierstrassEquation,
    u: BigUint,
    r: BigInt,
    s: BigInt,
    t: BigInt,
}

impl LaskaReduction {
    pub fn minimal(&self) -> &WeierstrassEquation {
        &self.minimal
    }

    pub fn u(&self) -> &BigUint {
        &self.u
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn s(&self) -> &BigInt {
        &self.s
    }

    pub fn t(&self) -> &BigInt {
        &self.t
    }
}

/// Reduce to a minimal integral model: largest admissible u, then the unique
/// residue-class representative with a1, a3 in {0,1} and a2 in {-1,0,1}.
pub fn laska_reduce(e: &WeierstrassEquation) -> Result<LaskaReduction> {
    if e.discriminant().is_zero() {
        return Err(Error::SingularWeierstrass);
    }
    let (c4, c6) = e.c_invariants();
    for cand in u_candidates(&c4, &c6)? {
        for a1p in 0i64..=1 {
            for a2p in -1i64..=1 {
                for a3p in 0i64..=1 {
                    if let Some(done) = descend(e, &cand, a1p, a2p, a3p) {
                        return Ok(done);
                    }
                }
            }
        }
    }
    // u = 1 always admits the residue classes of the input itself.
    Err(Error::NoScalingCandidates)
}

/// Try one (u, a1', a2', a3') cell: reconstruct a4', a6' from the scaled
/// c-invariants, then solve s, r, t successively; every division is an
/// admissibility test. Returns the finished reduction on success.
fn descend(
    e: &WeierstrassEquation,
    cand: &UCandidate,
    a1p: i64,
    a2p: i64,
    a3p: i64,
) -> Option<LaskaReduction> {
    let exact = |n: &BigInt, d: i64| -> Option<BigInt> {
        let d = BigInt::from(d);
        if (n % &d).is_zero() {
            Some(n / d)
        } else {
            None
        }
    };
    let b2p = BigInt::from(a1p * a1p + 4 * a2p);
    // c4' = b2'^2 - 24 b4'  =>  24 b4' = b2'^2 - x_u.
    let b4p = exact(&(&b2p * &b2p - &cand.x), 24)?;
    // c6' = -b2'^3 + 36 b2' b4' - 216 b6'.
    let b6p = exact(&(-(&b2p * &b2p * &b2p) + 36 * &b2p * &b4p - &cand.y), 216)?;
    let a4p = exact(&(&b4p - BigInt::from(a1p * a3p)), 2)?;
    let a6p = exact(&(&b6p - BigInt::from(a3p * a3p)), 4)?;

    let u = BigInt::from(cand.u.clone());
    // u a1' = a1 + 2s, u^2 a2' = a2 - s a1 + 3r - s^2,
    // u^3 a3' = a3 + r a1 + 2t.
    let s = exact(&(&u * a1p - &e.a1), 2)?;
    let r = exact(&(&u * &u * a2p - &e.a2 + &s * &e.a1 + &s * &s), 3)?;
    let t = exact(&(&u * &u * &u * a3p - &e.a3 - &r * &e.a1), 2)?;

    // The remaining transformation equations must hold exactly.
    let lhs4 = u.pow(4) * &a4p;
    let rhs4 = &e.a4 - &s * &e.a3 + 2 * &r * &e.a2 - (&t + &r * &s) * &e.a1 + 3 * &r * &r
        - 2 * &s * &t;
    if lhs4 != rhs4 {
        return None;
    }
    let lhs6 = u.pow(6) * &a6p;
    let rhs6 = &e.a6 + &r * &e.a4 + &r * &r * &e.a2 + &r * &r * &r
        - &t * &e.a3
        - &t * &t
        - &r * &t * &e.a1;
    if lhs6 != rhs6 {
        return None;
    }

    Some(LaskaReduction {
        minimal: WeierstrassEquation::new(a1p, a2p, a3p, a4p, a6p),
        u: cand.u.clone(),
        r,
        s,
        t,
    })
}
