//! Exact integer arithmetic: factorization, deterministic primality and
//! p-adic valuations.
//!
//! Factorization is trial division by primes below 10^4 followed by Brent's
//! cycle variant of Pollard rho with deterministically chosen parameters, so
//! repeated runs always produce the same factor splits. Primality is a
//! strong-pseudoprime (Miller-Rabin) test over a fixed base set, which is
//! deterministic for every input below 3.3 * 10^24 and in practice far
//! beyond the magnitudes this crate touches.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// p-adic valuation. `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// The finite value, or `None` for the valuation of zero.
    pub fn finite(&self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp_val(other))
    }
}

impl Valuation {
    fn cmp_val(&self, other: &Self) -> std::cmp::Ordering {
        use Valuation::*;
        match (self, other) {
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// A signed integer split into a unit and prime powers: n = unit * prod p^e.
/// The map is ordered by prime, exponents are strictly positive; |n| = 1
/// gives an empty map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    pub unit: i8,
    pub factors: BTreeMap<BigUint, u32>,
}

impl PrimeFactorization {
    pub fn reconstruct(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        let acc = BigInt::from(acc);
        if self.unit < 0 {
            -acc
        } else {
            acc
        }
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors.get(p).copied().unwrap_or(0)
    }
}

impl fmt::Display for PrimeFactorization {
    /// Renders like `-2^12 * 3^9 * 101 * 233`; units alone render as `1`/`-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.unit < 0 {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, e) in &self.factors {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factor a nonzero integer into unit and prime powers.
pub fn factorize(n: &BigInt) -> Result<PrimeFactorization> {
    if n.is_zero() {
        return Err(Error::ZeroFactorization);
    }
    let unit = if n.is_negative() { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut factors = BTreeMap::new();

    for p in small_primes() {
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0u32;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            factors.insert(pb, e);
        }
    }

    let mut pending = vec![m];
    while let Some(c) = pending.pop() {
        if c.is_one() {
            continue;
        }
        if is_prime(&c) {
            *factors.entry(c).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(&c);
        pending.push(&c / &d);
        pending.push(d);
    }

    Ok(PrimeFactorization { unit, factors })
}

/// Deterministic strong-pseudoprime test (Miller-Rabin over fixed bases).
pub fn is_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u8) {
        return false;
    }
    let small: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in small {
        let pb = BigUint::from(p);
        if *n == pb {
            return true;
        }
        if (n % pb).is_zero() {
            return false;
        }
    }
    // n - 1 = 2^s * d with d odd
    let one = BigUint::one();
    let n1 = n - &one;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    // The 12 bases above certify every n < 3.3 * 10^24; the extra bases
    // extend the strong-pseudoprime guarantee well past the magnitudes of
    // any invariant this crate produces.
    let bases: [u32; 20] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ];
    'witness: for a in bases {
        let a = BigUint::from(a) % n;
        if a.is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent-cycle Pollard rho. `n` must be odd, composite and free of factors
/// below 10^4, which the call site guarantees; parameters are swept
/// deterministically so the split never depends on external randomness.
fn pollard_rho(n: &BigUint) -> BigUint {
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u8);
        let mut y = x.clone();
        let mut d = BigUint::one();
        let mut count = 0u32;
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break; // cycle collapsed, retry with the next c
            }
            d = diff.gcd(n);
            count += 1;
            if count > 50_000_000 {
                break;
            }
        }
        if !d.is_one() && &d != n {
            return d;
        }
    }
    unreachable!("pollard rho parameter sweep is unbounded")
}

fn small_primes() -> impl Iterator<Item = u32> {
    // 2, 3, then the 6k +- 1 wheel up to 10^4; composites in the wheel are
    // harmless (their prime parts were already divided out).
    std::iter::once(2)
        .chain(std::iter::once(3))
        .chain((1..=1666u32).flat_map(|k| [6 * k - 1, 6 * k + 1]))
}

/// p-adic valuation of an integer. `valuation(0, p)` is `Infinite`.
pub fn valuation(n: &BigInt, p: &BigUint) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    if n.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let mut m = n.magnitude().clone();
    let mut v = 0u64;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    Ok(Valuation::Finite(v))
}

/// p-adic valuation of a rational: v(num) - v(den). May be negative.
pub fn rational_valuation(r: &BigRational, p: &BigUint) -> Result<Option<i64>> {
    if r.is_zero() {
        return Ok(None);
    }
    let vn = match valuation(r.numer(), p)? {
        Valuation::Finite(v) => v as i64,
        Valuation::Infinite => unreachable!("nonzero numerator"),
    };
    let vd = match valuation(r.denom(), p)? {
        Valuation::Finite(v) => v as i64,
        Valuation::Infinite => unreachable!("nonzero denominator"),
    };
    Ok(Some(vn - vd))
}

/// Greatest common divisor of the absolute values of a nonempty list,
/// ignoring zeros; returns zero only if every entry is zero.
pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(items: I) -> BigUint {
    let mut g = BigUint::zero();
    for it in items {
        g = g.gcd(it.magnitude());
        if g.is_one() {
            break;
        }
    }
    g
}

/// Floor of a rational as a BigInt (exact, works for negatives).
pub fn rational_floor(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// Floor of a rational as i64; valuation-scale quantities always fit.
pub fn rational_floor_i64(r: &BigRational) -> i64 {
    rational_floor(r)
        .to_i64()
        .expect("valuation-scale quantity exceeded i64")
}
