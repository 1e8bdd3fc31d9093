//! Weighted projective points over Q with exact weighted gcds, canonical
//! normalization and weighted heights.
//!
//! A weight system q = (q_0, ..., q_n) acts on tuples by
//! `lambda * (x_0, ..., x_n) = (lambda^{q_0} x_0, ..., lambda^{q_n} x_n)`
//! (written `star` here). For an integral tuple the weighted gcd is the
//! largest integer lambda such that dividing by `lambda star` keeps every
//! coordinate integral; per prime its exponent is `min_i floor(v_p(x_i)/q_i)`.
//! The absolutely-minimal variant allows exponents in (1/g) Z with
//! g = gcd(q), the finest grid on which a scalar can still act rationally
//! coordinate-wise after clearing the weight denominators.
//!
//! Heights follow the normalized representative: after dividing out the
//! weighted gcd (and fixing signs when some weight is odd), the weighted
//! height is `max_i |x_i|^{1/q_i}`. The argmax is decided exactly by
//! comparing `|x_i|^{L/q_i}` as integers with L = lcm(q); decimal digits
//! only appear when rendering.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factorize, gcd_all, rational_floor_i64, rational_valuation};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    weights: Vec<u32>,
    label: String,
}

impl WeightSystem {
    pub fn new(weights: Vec<u32>, label: impl Into<String>) -> Result<Self> {
        if weights.is_empty() || weights.iter().any(|&w| w == 0) {
            return Err(Error::BadWeights);
        }
        Ok(WeightSystem {
            weights,
            label: label.into(),
        })
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn gcd(&self) -> u32 {
        self.weights.iter().fold(0u32, |g, &w| g.gcd(&w))
    }

    pub fn lcm(&self) -> u64 {
        self.weights.iter().fold(1u64, |l, &w| l.lcm(&(w as u64)))
    }

    pub fn has_odd_weight(&self) -> bool {
        self.weights.iter().any(|w| w % 2 == 1)
    }
}

/// A tuple in weighted projective space; at least one coordinate nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedPoint {
    coords: Vec<BigRational>,
    weights: WeightSystem,
}

impl WeightedPoint {
    pub fn new(coords: Vec<BigRational>, weights: WeightSystem) -> Result<Self> {
        if coords.len() != weights.len() {
            return Err(Error::WeightMismatch {
                coords: coords.len(),
                weights: weights.len(),
            });
        }
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroPoint);
        }
        Ok(WeightedPoint { coords, weights })
    }

    pub fn from_integers(coords: &[i64], weights: WeightSystem) -> Result<Self> {
        Self::new(
            coords
                .iter()
                .map(|&c| BigRational::from(BigInt::from(c)))
                .collect(),
            weights,
        )
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.denom().is_one())
    }

    pub fn integer_coords(&self) -> Result<Vec<BigInt>> {
        if !self.is_integral() {
            return Err(Error::NonIntegralPoint);
        }
        Ok(self.coords.iter().map(|c| c.numer().clone()).collect())
    }

    /// `lambda star p`: multiply coordinate i by lambda^{q_i}.
    pub fn star(&self, lambda: &BigRational) -> Result<WeightedPoint> {
        if lambda.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let coords = self
            .coords
            .iter()
            .zip(self.weights.weights())
            .map(|(c, &q)| c * lambda.pow(q as i32))
            .collect();
        Ok(WeightedPoint {
            coords,
            weights: self.weights.clone(),
        })
    }

    /// Star action by a prime-power scalar with (possibly fractional)
    /// exponents: coordinate i is multiplied (or divided, with `invert`) by
    /// `prod_p p^{e_p q_i}`. Every `e_p q_i` must land in Z; the offending
    /// prime and coordinate index are reported otherwise.
    pub fn star_exponents(
        &self,
        scalar: &PrimeExponentMap,
        invert: bool,
    ) -> Result<WeightedPoint> {
        let mut coords = self.coords.clone();
        for (p, e) in scalar.factors() {
            for (i, q) in self.weights.weights().iter().enumerate() {
                let t = e * BigRational::from(BigInt::from(*q));
                if !t.denom().is_one() {
                    return Err(Error::FractionalStarExponent {
                        prime: p.clone(),
                        exponent: t.to_string(),
                        index: i,
                    });
                }
                let k = t
                    .numer()
                    .to_u32()
                    .expect("star exponent exceeds u32 range");
                let factor = BigInt::from(p.pow(k));
                if invert {
                    coords[i] /= BigRational::from(factor);
                } else {
                    coords[i] *= BigRational::from(factor);
                }
            }
        }
        Ok(WeightedPoint {
            coords,
            weights: self.weights.clone(),
        })
    }

    /// Primes that can possibly carry a nonzero normalization exponent:
    /// divisors of the gcd of the numerators, plus every denominator prime.
    pub(crate) fn support_primes(&self) -> Result<Vec<BigUint>> {
        let nums: Vec<BigInt> = self
            .coords
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| c.numer().clone())
            .collect();
        let g = gcd_all(nums.iter());
        let mut lcm_den = BigUint::one();
        for c in &self.coords {
            lcm_den = lcm_den.lcm(c.denom().magnitude());
        }
        let mut primes: Vec<BigUint> = Vec::new();
        if !g.is_one() && !g.is_zero() {
            primes.extend(factorize(&BigInt::from(g))?.factors.into_keys());
        }
        if !lcm_den.is_one() {
            for p in factorize(&BigInt::from(lcm_den))?.factors.into_keys() {
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
        primes.sort();
        Ok(primes)
    }

    /// Largest integer lambda with `(1/lambda) star p` still integral:
    /// `prod_p p^{min_i floor(v_p(x_i)/q_i)}`. Integral coordinates required.
    pub fn wgcd(&self) -> Result<BigUint> {
        if !self.is_integral() {
            return Err(Error::NonIntegralPoint);
        }
        let mut out = BigUint::one();
        for p in self.support_primes()? {
            let e = self.min_floor_exponent(&p, 1)?;
            if e > 0 {
                out *= p.pow(e as u32);
            }
        }
        Ok(out)
    }

    /// Weighted gcd on the finest grid (1/g) Z with g = gcd(weights):
    /// per prime, the exponent is `floor(g * min_i v_p(x_i)/q_i) / g`.
    pub fn abs_wgcd(&self) -> Result<PrimeExponentMap> {
        if !self.is_integral() {
            return Err(Error::NonIntegralPoint);
        }
        let g = self.weights.gcd();
        let mut factors = BTreeMap::new();
        for p in self.support_primes()? {
            let e = self.min_floor_exponent(&p, g)?;
            if e > 0 {
                factors.insert(
                    p,
                    BigRational::new(BigInt::from(e), BigInt::from(g)),
                );
            }
        }
        PrimeExponentMap::new(factors, g)
    }

    /// `floor(grid * min_i v_p(x_i)/q_i)` over nonzero coordinates.
    fn min_floor_exponent(&self, p: &BigUint, grid: u32) -> Result<i64> {
        let mut best: Option<BigRational> = None;
        for (c, &q) in self.coords.iter().zip(self.weights.weights()) {
            let Some(v) = rational_valuation(c, p)? else {
                continue; // zero coordinate: divisible by everything
            };
            let ratio = BigRational::new(BigInt::from(v), BigInt::from(q));
            best = Some(match best {
                None => ratio,
                Some(b) if ratio < b => ratio,
                Some(b) => b,
            });
        }
        let best = best.expect("point has a nonzero coordinate");
        Ok(rational_floor_i64(
            &(best * BigRational::from(BigInt::from(grid))),
        ))
    }

    /// Canonical representative: divide out the weighted gcd (clearing
    /// denominators first if the point is rational), then fix the sign of
    /// the first nonzero odd-weight coordinate. Idempotent, and constant on
    /// star orbits with integral image.
    pub fn normalize(&self) -> Result<WeightedPoint> {
        let mut coords = self.coords.clone();
        for p in self.support_primes()? {
            let e = self.min_floor_exponent(&p, 1)?;
            if e == 0 {
                continue;
            }
            let pb = BigInt::from(p.clone());
            for (c, &q) in coords.iter_mut().zip(self.weights.weights()) {
                let shift = BigRational::from(pb.clone()).pow((e * q as i64) as i32);
                *c /= shift;
            }
        }
        let mut out = WeightedPoint {
            coords,
            weights: self.weights.clone(),
        };
        if self.weights.has_odd_weight() {
            let flip = out
                .coords
                .iter()
                .zip(self.weights.weights())
                .find(|(c, &q)| q % 2 == 1 && !c.is_zero())
                .map(|(c, _)| c.is_negative())
                .unwrap_or(false);
            if flip {
                out = out.star(&BigRational::from(BigInt::from(-1)))?;
            }
        }
        Ok(out)
    }

    /// Weighted height of the normalized representative, as an exactly
    /// comparable real `base^(1/root)`.
    pub fn weighted_height(&self) -> Result<WeightedHeight> {
        let norm = self.normalize()?;
        let ints = norm.integer_coords()?;
        let big_l = norm.weights.lcm();
        let mut arg = 0usize;
        let mut best_key = BigUint::zero();
        for (i, (c, &q)) in ints.iter().zip(norm.weights.weights()).enumerate() {
            let e = (big_l / q as u64) as u32;
            let key = c.magnitude().pow(e);
            if key > best_key {
                best_key = key;
                arg = i;
            }
        }
        Ok(WeightedHeight {
            base: ints[arg].magnitude().clone(),
            root: norm.weights.weights()[arg],
            argmax: arg,
        })
    }
}

impl fmt::Display for WeightedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// A positive scalar written as a product of prime powers with exact
/// rational exponents, all strictly positive multiples of
/// 1/denominator_bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeExponentMap {
    factors: BTreeMap<BigUint, BigRational>,
    denominator_bound: u32,
}

impl PrimeExponentMap {
    pub fn new(factors: BTreeMap<BigUint, BigRational>, denominator_bound: u32) -> Result<Self> {
        if denominator_bound == 0 {
            return Err(Error::BadWeights);
        }
        let bound = BigRational::from(BigInt::from(denominator_bound));
        for e in factors.values() {
            if !e.is_positive() || !(e * &bound).denom().is_one() {
                return Err(Error::BadWeights);
            }
        }
        Ok(PrimeExponentMap {
            factors,
            denominator_bound,
        })
    }

    pub fn empty(denominator_bound: u32) -> Self {
        PrimeExponentMap {
            factors: BTreeMap::new(),
            denominator_bound: denominator_bound.max(1),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &BTreeMap<BigUint, BigRational> {
        &self.factors
    }

    pub fn denominator_bound(&self) -> u32 {
        self.denominator_bound
    }

    pub fn exponent_of(&self, p: &BigUint) -> BigRational {
        self.factors.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The scalar as an integer when every exponent is integral.
    pub fn as_integer(&self) -> Option<BigUint> {
        let mut out = BigUint::one();
        for (p, e) in &self.factors {
            if !e.denom().is_one() {
                return None;
            }
            out *= p.pow(e.numer().to_u32()?);
        }
        Some(out)
    }

    /// Map exponents through `f` (used for mode conversions like e -> 2e/d);
    /// drops entries that land at zero or below.
    pub fn map_exponents<F: Fn(&BigRational) -> BigRational>(
        &self,
        f: F,
        denominator_bound: u32,
    ) -> Result<Self> {
        let mut factors = BTreeMap::new();
        for (p, e) in &self.factors {
            let v = f(e);
            if v.is_positive() {
                factors.insert(p.clone(), v);
            }
        }
        Self::new(factors, denominator_bound)
    }
}

impl fmt::Display for PrimeExponentMap {
    /// Renders like `2^(5/2) * 3^2`; the empty product renders as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, e) in &self.factors {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            if e.is_one() {
                write!(f, "{p}")?;
            } else if e.denom().is_one() {
                write!(f, "{p}^{}", e.numer())?;
            } else {
                write!(f, "{p}^({e})")?;
            }
        }
        Ok(())
    }
}

/// `base^(1/root)` with the index of the coordinate realizing the max.
/// Comparisons are exact (integer cross powers); decimals are rendering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedHeight {
    base: BigUint,
    root: u32,
    argmax: usize,
}

impl WeightedHeight {
    pub fn base(&self) -> &BigUint {
        &self.base
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn argmax(&self) -> usize {
        self.argmax
    }

    pub fn cmp_exact(&self, other: &WeightedHeight) -> std::cmp::Ordering {
        let l = (self.root as u64).lcm(&(other.root as u64));
        let a = self.base.pow((l / self.root as u64) as u32);
        let b = other.base.pow((l / other.root as u64) as u32);
        a.cmp(&b)
    }

    /// Decimal rendering of `base^(1/root)` with `sig` significant digits,
    /// computed from integer root extraction (round half up).
    pub fn decimal(&self, sig: usize) -> String {
        assert!(sig > 0);
        let guard = sig + 4;
        let scaled = &self.base * BigUint::from(10u8).pow((self.root * guard as u32) as u32);
        let t = scaled.nth_root(self.root);
        let digits = t.to_string();
        let int_len = digits.len() - guard; // base >= 1 so this is >= 1
        round_digits(&digits, int_len, sig)
    }

    /// Natural log of the height, rendered with `sig` significant digits.
    pub fn log_decimal(&self, sig: usize) -> String {
        let v = big_ln(&self.base) / self.root as f64;
        format_sig(v, sig)
    }
}

impl fmt::Display for WeightedHeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.root == 1 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "{}^(1/{})", self.base, self.root)
        }
    }
}

/// Round a digit string (decimal point after `int_len` digits) to `sig`
/// significant digits, half up, and render without exponent notation.
fn round_digits(digits: &str, int_len: usize, sig: usize) -> String {
    let ds: Vec<u8> = digits.bytes().map(|b| b - b'0').collect();
    let mut kept: Vec<u8> = ds.iter().take(sig).copied().collect();
    let mut int_len = int_len;
    while kept.len() < sig {
        kept.push(0); // short integer: pad (only possible when sig > len)
    }
    if ds.len() > sig && ds[sig] >= 5 {
        let mut i = sig;
        loop {
            if i == 0 {
                kept.insert(0, 1);
                int_len += 1;
                kept.pop();
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    let strd: String = kept.iter().map(|d| (d + b'0') as char).collect();
    if int_len >= sig {
        let mut s = strd;
        s.push_str(&"0".repeat(int_len - sig));
        s
    } else {
        format!("{}.{}", &strd[..int_len], &strd[int_len..])
    }
}

/// ln of a BigUint via the top 53 bits plus an exact power-of-two shift.
fn big_ln(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 53 {
        return n.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 53;
    let top = (n >> shift).to_f64().expect("53-bit mantissa fits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `sig` significant digits of an f64, plain decimal notation.
fn format_sig(v: f64, sig: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let exp = v.abs().log10().floor() as i64;
    let decimals = (sig as i64 - 1 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}
