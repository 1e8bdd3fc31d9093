//! Reduction of superelliptic curves: minimality tests, minimal models,
//! minimal twists, and discriminant minimization.
//!
//! A curve `c z^m y^{d-m} = f(x, y)` carries the weighted moduli point
//! `(1/c) star I(f)` under the invariant system attached to deg f. All three
//! reductions are one engine: per prime p, find the largest exponent e_p on
//! a fixed step grid with `e_p q_i <= v_p(x_i)` for every coordinate, then
//! divide the point by `star prod p^{e_p}`. The grid is what distinguishes
//! the modes:
//!
//!   step d/2            -> minimal model (x -> x/lambda keeps the equation
//!                          over the base field, up to an m-th root of
//!                          lambda^d on z),
//!   step 1              -> integral minimal twist (the normalized point),
//!   step 1/gcd(weights) -> absolute minimal twist (scalar may be a radical).
//!
//! Equation realization is best effort for the twist modes: the candidate is
//! the primitive part of `lambda^d f(x/lambda, y)` and it is kept only when
//! its recomputed moduli point hits the reduced point exactly; otherwise the
//! report is point-only and says so.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{is_prime, rational_floor_i64, rational_valuation};
use crate::forms::{BinaryForm, Gl2Transform};
use crate::invariants::{system_for, InvariantSystem};
use crate::weighted::{PrimeExponentMap, WeightedPoint};
use crate::{Error, Result};

/// `c z^m y^{d-m} = f(x, y)` with integral separable f and nonzero c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperellipticCurve {
    m: u32,
    form: BinaryForm,
    twist_scalar: BigInt,
    low_degree: bool,
}

impl SuperellipticCurve {
    pub fn new(m: u32, form: BinaryForm, twist_scalar: BigInt) -> Result<Self> {
        if m < 2 {
            return Err(Error::ExponentTooSmall(m));
        }
        let d = form.degree();
        if d < 3 {
            return Err(Error::DegreeTooSmall { min: 3, got: d });
        }
        if !form.is_integral() {
            return Err(Error::NonIntegralForm);
        }
        if twist_scalar.is_zero() {
            return Err(Error::ZeroScalar);
        }
        if form.discriminant()?.is_zero() {
            return Err(Error::InseparableForm);
        }
        Ok(SuperellipticCurve {
            m,
            form,
            twist_scalar,
            // Degrees 3 and 4 sit below the genus-2 use case; they are
            // accepted so the discriminant path can be compared against
            // the Weierstrass reduction, and flagged as such.
            low_degree: d < 5,
        })
    }

    pub fn exponent(&self) -> u32 {
        self.m
    }

    pub fn form(&self) -> &BinaryForm {
        &self.form
    }

    pub fn degree(&self) -> usize {
        self.form.degree()
    }

    pub fn twist_scalar(&self) -> &BigInt {
        &self.twist_scalar
    }

    pub fn is_low_degree(&self) -> bool {
        self.low_degree
    }

    pub fn invariant_system(&self) -> Result<InvariantSystem> {
        system_for(self.form.degree())
    }

    /// Invariants of the bare form, as a weighted point.
    pub fn form_point(&self) -> Result<WeightedPoint> {
        self.invariant_system()?.point(&self.form)
    }

    /// The curve's moduli point `(1/c) star I(f)`; rational when the twist
    /// scalar does not divide the invariants.
    pub fn moduli_point(&self) -> Result<WeightedPoint> {
        let inv_c = BigRational::new(BigInt::one(), self.twist_scalar.clone());
        self.form_point()?.star(&inv_c)
    }

    /// The normalized moduli point: the unique wgcd-1 representative of the
    /// star orbit. Twist-scalar independent, hence a database key for the
    /// curve up to scalar twists and x-rescalings.
    pub fn canonical_point(&self) -> Result<WeightedPoint> {
        self.moduli_point()?.normalize()
    }

    /// Multiply the twist scalar: `c z^m y^{d-m} = f` becomes
    /// `(c t) z^m y^{d-m} = f`, and the moduli point picks up `star (1/t)`.
    pub fn scalar_twist(&self, t: &BigInt) -> Result<SuperellipticCurve> {
        if t.is_zero() {
            return Err(Error::ZeroScalar);
        }
        SuperellipticCurve::new(self.m, self.form.clone(), &self.twist_scalar * t)
    }
}

impl fmt::Display for SuperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.form.degree() as u32;
        if !self.twist_scalar.is_one() {
            write!(f, "{} * ", self.twist_scalar)?;
        }
        write!(f, "z^{}", self.m)?;
        if d > self.m {
            write!(f, " * y^{}", d - self.m)?;
        }
        write!(f, " = {}", self.form)
    }
}

/// `max { j : p^j | x_i^{q_i} for all i } = min_i q_i v_p(x_i)`.
pub fn weighted_tuple_valuation(point: &WeightedPoint, p: &BigUint) -> Result<u64> {
    if !point.is_integral() {
        return Err(Error::NonIntegralPoint);
    }
    let mut best: Option<u64> = None;
    for (c, &q) in point.coords().iter().zip(point.weights().weights()) {
        let Some(v) = rational_valuation(c, p)? else {
            continue; // zero coordinate divides everything
        };
        let t = q as u64 * v as u64;
        best = Some(best.map_or(t, |b| b.min(t)));
    }
    Ok(best.expect("point has a nonzero coordinate"))
}

/// The reduction engine: per prime, the largest multiple e_p of `step` with
/// `e_p q_i <= v_p(x_i)` for all i. Empty map means the point is already
/// minimal on that grid.
pub fn reduction_exponents(
    point: &WeightedPoint,
    step: &BigRational,
) -> Result<PrimeExponentMap> {
    if !point.is_integral() {
        return Err(Error::NonIntegralPoint);
    }
    for &q in point.weights().weights() {
        let sq = step * BigRational::from(BigInt::from(q));
        if !step.is_positive() || !sq.denom().is_one() {
            return Err(Error::IncompatibleStep {
                step: step.to_string(),
                weight: q,
            });
        }
    }
    let bound = step
        .denom()
        .to_u32()
        .ok_or_else(|| Error::IncompatibleStep {
            step: step.to_string(),
            weight: 0,
        })?;
    let mut factors = std::collections::BTreeMap::new();
    for p in point.support_primes()? {
        let mut ratio_min: Option<BigRational> = None;
        for (c, &q) in point.coords().iter().zip(point.weights().weights()) {
            let Some(v) = rational_valuation(c, &p)? else {
                continue;
            };
            let r = BigRational::new(BigInt::from(v), BigInt::from(q));
            ratio_min = Some(match ratio_min {
                None => r,
                Some(b) if r < b => r,
                Some(b) => b,
            });
        }
        let r = ratio_min.expect("nonzero coordinate exists");
        let k = rational_floor_i64(&(&r / step));
        if k >= 1 {
            factors.insert(p, BigRational::from(BigInt::from(k)) * step);
        }
    }
    PrimeExponentMap::new(factors, bound)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionMode {
    /// Step d/2: x-rescaling that keeps the equation over the base ring.
    Model,
    /// Step 1: integral scalar twists (normalized point).
    Normalize,
    /// Step 1/gcd(weights): twists by radicals of integers.
    Twist,
}

impl fmt::Display for ReductionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionMode::Model => "model",
            ReductionMode::Normalize => "normalize",
            ReductionMode::Twist => "twist",
        })
    }
}

/// Outcome of one reduction. `lambda` holds the star-scalar exponents, so
/// `output_point = star(1/prod p^{e_p}) input_point` exactly.
#[derive(Debug, Clone)]
pub struct ReductionReport {
    input_point: WeightedPoint,
    output_point: WeightedPoint,
    lambda: PrimeExponentMap,
    mode: ReductionMode,
    realized_equation: Option<SuperellipticCurve>,
    defined_over_base: bool,
    extension_note: Option<String>,
    realization_mismatch: bool,
}

impl ReductionReport {
    pub fn input_point(&self) -> &WeightedPoint {
        &self.input_point
    }

    pub fn output_point(&self) -> &WeightedPoint {
        &self.output_point
    }

    pub fn lambda(&self) -> &PrimeExponentMap {
        &self.lambda
    }

    pub fn mode(&self) -> ReductionMode {
        self.mode
    }

    pub fn realized_equation(&self) -> Option<&SuperellipticCurve> {
        self.realized_equation.as_ref()
    }

    pub fn defined_over_base(&self) -> bool {
        self.defined_over_base
    }

    pub fn extension_note(&self) -> Option<&str> {
        self.extension_note.as_deref()
    }

    pub fn realization_mismatch(&self) -> bool {
        self.realization_mismatch
    }

    pub fn is_trivial(&self) -> bool {
        self.lambda.is_empty()
    }
}

/// True when the moduli point admits no step-d/2 reduction: at every prime
/// some coordinate has `v_p(x_i) < (d/2) q_i`.
pub fn is_minimal(curve: &SuperellipticCurve) -> Result<bool> {
    let point = integral_moduli(curve)?;
    let step = half_degree(curve);
    Ok(reduction_exponents(&point, &step)?.is_empty())
}

/// Minimal model: substitute x -> x/lambda with the largest integer lambda
/// whose d/2 power divides the point weightedly. The realized equation is
/// `(c lambda^d) z^m y^{d-m} = lambda^d f(x/lambda, y)`; it is the same
/// curve via z -> lambda^{d/m} z, which lives over the base field exactly
/// when m | d (or lambda = 1).
pub fn minimal_model(curve: &SuperellipticCurve) -> Result<ReductionReport> {
    let input = integral_moduli(curve)?;
    let step = half_degree(curve);
    let exps = reduction_exponents(&input, &step)?;
    let output = input.star_exponents(&exps, true)?;
    let d = curve.degree() as u32;
    let m = curve.exponent();

    // e_p is a multiple of d/2, so 2 e_p / d is a nonnegative integer.
    let lambda_form = exps
        .map_exponents(|e| e * BigRational::new(BigInt::from(2), BigInt::from(d)), 1)?
        .as_integer()
        .expect("model-mode exponents are integral");

    let realized = if lambda_form.is_one() {
        curve.clone()
    } else {
        let lam = BigRational::from(BigInt::from(lambda_form.clone()));
        let sub = Gl2Transform::x_scaling(&lam.recip()).with_scalar(lam.pow(d as i32))?;
        let new_form = curve.form().transform(&sub);
        let new_twist =
            curve.twist_scalar() * BigInt::from(lambda_form.clone()).pow(d);
        SuperellipticCurve::new(m, new_form, new_twist)?
    };
    debug_assert_eq!(realized.moduli_point()?, output);

    let trivial = lambda_form.is_one();
    let defined_over_base = trivial || d % m == 0;
    let extension_note = if defined_over_base {
        None
    } else {
        let g = (d as u64).gcd(&(m as u64));
        Some(format!("k({}^({}/{}))", lambda_form, d as u64 / g, m as u64 / g))
    };

    Ok(ReductionReport {
        input_point: input,
        output_point: output,
        lambda: exps,
        mode: ReductionMode::Model,
        realized_equation: Some(realized),
        defined_over_base,
        extension_note,
        realization_mismatch: false,
    })
}

/// Minimal twist. `integral_only` restricts the twisting scalar to integers
/// (step 1: the normalized point); otherwise the step drops to
/// 1/gcd(weights) and the scalar may be a radical, in which case the result
/// is point-only and the extension field is named.
pub fn minimal_twist(
    curve: &SuperellipticCurve,
    integral_only: bool,
) -> Result<ReductionReport> {
    let input = integral_moduli(curve)?;
    let system = curve.invariant_system()?;
    let g = system.weights().gcd();
    let (step, mode) = if integral_only {
        (BigRational::one(), ReductionMode::Normalize)
    } else {
        (
            BigRational::new(BigInt::one(), BigInt::from(g)),
            ReductionMode::Twist,
        )
    };
    let exps = reduction_exponents(&input, &step)?;
    let output = input.star_exponents(&exps, true)?;
    let d = curve.degree() as u32;

    if exps.is_empty() {
        return Ok(ReductionReport {
            input_point: input,
            output_point: output,
            lambda: exps,
            mode,
            realized_equation: Some(curve.clone()),
            defined_over_base: true,
            extension_note: None,
            realization_mismatch: false,
        });
    }

    // Form-level scalar: integral mode rounds 2 e_p / d up to the next
    // integer; absolute mode takes it verbatim and may leave Q.
    let two_over_d = BigRational::new(BigInt::from(2), BigInt::from(d));
    let lambda_form: Option<BigUint> = if integral_only {
        let mut out = BigUint::one();
        for (p, e) in exps.factors() {
            let t = e * &two_over_d;
            let k = t.ceil().to_integer().to_u32().expect("small exponent");
            out *= p.pow(k);
        }
        Some(out)
    } else {
        exps.map_exponents(|e| e * &two_over_d, g * d)?.as_integer()
    };

    match lambda_form {
        Some(lambda) => {
            let (realized, defined_over_base, extension_note, mismatch) =
                realize_twist(curve, &lambda, &output)?;
            Ok(ReductionReport {
                input_point: input,
                output_point: output,
                lambda: exps,
                mode,
                realized_equation: realized,
                defined_over_base,
                extension_note,
                realization_mismatch: mismatch,
            })
        }
        None => {
            // Radical scalar: report the field the twist lives over.
            let radical = exps.map_exponents(|e| e * &two_over_d, g * d)?;
            Ok(ReductionReport {
                input_point: input,
                output_point: output,
                lambda: exps,
                mode,
                realized_equation: None,
                defined_over_base: false,
                extension_note: Some(format!("k({radical})")),
                realization_mismatch: false,
            })
        }
    }
}

/// Candidate equation for a twist reduction: the primitive part of
/// `lambda^d f(x/lambda, y)`, kept only when its point lands exactly on the
/// target. The output curve relates to the input by the scalar twist
/// `tau = lambda^d / (unit * content)`, which is a base-field isomorphism
/// precisely when tau is an m-th power in Q.
fn realize_twist(
    curve: &SuperellipticCurve,
    lambda: &BigUint,
    target: &WeightedPoint,
) -> Result<(Option<SuperellipticCurve>, bool, Option<String>, bool)> {
    let d = curve.degree() as u32;
    let lam = BigRational::from(BigInt::from(lambda.clone()));
    let sub = Gl2Transform::x_scaling(&lam.recip()).with_scalar(lam.pow(d as i32))?;
    let split = curve.form().transform(&sub).content_and_primitive()?;
    let candidate =
        SuperellipticCurve::new(curve.exponent(), split.primitive, curve.twist_scalar().clone())?;
    if &candidate.moduli_point()? != target {
        return Ok((None, false, None, true));
    }
    let tau = BigRational::new(
        BigInt::from(split.unit) * BigInt::from(lambda.clone()).pow(d),
        BigInt::from(split.content),
    );
    let defined = is_mth_power(&tau, curve.exponent());
    let note = if defined {
        None
    } else {
        Some(format!("k(({tau})^(1/{}))", curve.exponent()))
    };
    Ok((Some(candidate), defined, note, false))
}

/// Is the rational an m-th power in Q?
fn is_mth_power(r: &BigRational, m: u32) -> bool {
    if r.is_zero() {
        return false;
    }
    if r.is_negative() && m % 2 == 0 {
        return false;
    }
    let check = |n: &BigInt| -> bool {
        let mag = n.magnitude();
        let root = mag.nth_root(m);
        root.pow(m) == *mag
    };
    check(r.numer()) && check(r.denom())
}

/// Discriminant minimization: substitute x -> x/u^m with
/// `u = prod p^{min(floor(v_p(disc) / (m d (d-1))), cap_p)}`, where cap_p
/// keeps the rescaled coefficients a_j / u^{m j} integral. The new
/// discriminant is exactly `disc / u^{m d (d-1)}`.
pub fn minimize_discriminant(
    curve: &SuperellipticCurve,
) -> Result<(SuperellipticCurve, BigUint)> {
    let disc = curve.form().discriminant()?;
    debug_assert!(disc.denom().is_one());
    let disc = disc.to_integer();
    let d = curve.degree() as u64;
    let m = curve.exponent() as u64;
    let bound_exp = (m * d * (d - 1)) as u32;

    let mag = disc.magnitude().clone();
    let prime_bound = mag.nth_root(bound_exp);
    let mut u = BigUint::one();
    let mut p = BigUint::from(2u8);
    while p <= prime_bound {
        if is_prime(&p) {
            let alpha = crate::arith::valuation(&disc, &p)?
                .finite()
                .expect("nonzero discriminant");
            let mut e = alpha / bound_exp as u64;
            if e > 0 {
                // Integrality cap: x -> x/u^m divides a_j by u^{m j}.
                for (j, a) in curve.form().coeffs().iter().enumerate().skip(1) {
                    if a.is_zero() {
                        continue;
                    }
                    let va = rational_valuation(a, &p)?.expect("nonzero") as u64;
                    e = e.min(va / (m * j as u64));
                    if e == 0 {
                        break;
                    }
                }
            }
            if e > 0 {
                u *= p.pow(e as u32);
            }
        }
        p += 1u32;
    }

    if u.is_one() {
        return Ok((curve.clone(), u));
    }
    let um = BigRational::from(BigInt::from(u.clone())).pow(m as i32);
    let sub = Gl2Transform::x_scaling(&um.recip());
    let new_form = curve.form().transform(&sub);
    let reduced = SuperellipticCurve::new(
        curve.exponent(),
        new_form,
        curve.twist_scalar().clone(),
    )?;
    Ok((reduced, u))
}

fn half_degree(curve: &SuperellipticCurve) -> BigRational {
    BigRational::new(BigInt::from(curve.degree()), BigInt::from(2))
}

fn integral_moduli(curve: &SuperellipticCurve) -> Result<WeightedPoint> {
    let point = curve.moduli_point()?;
    if !point.is_integral() {
        return Err(Error::NonIntegralModuliPoint);
    }
    Ok(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Pow;
    use rand::{Rng, SeedableRng};

    fn form(coeffs: &[i64]) -> BinaryForm {
        BinaryForm::from_integers(&coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
            .unwrap()
    }

    fn running_form() -> BinaryForm {
        form(&[107, 1470, 8382, 25056, 40176, 31104, 7776])
    }

    fn reduced_form() -> BinaryForm {
        form(&[642, 1470, 1397, 696, 186, 24, 1])
    }

    fn running_curve() -> SuperellipticCurve {
        SuperellipticCurve::new(2, running_form(), BigInt::one()).unwrap()
    }

    fn reduced_curve() -> SuperellipticCurve {
        SuperellipticCurve::new(2, reduced_form(), BigInt::one()).unwrap()
    }

    /// f(lambda x, y): inflates the invariants by lambda^{3q} for sextics.
    fn inflate(f: &BinaryForm, lambda: i64) -> BinaryForm {
        let sub = Gl2Transform::from_integers([lambda, 0, 0, 1], 1).unwrap();
        f.transform(&sub)
    }

    fn two() -> BigUint {
        BigUint::from(2u8)
    }

    fn three() -> BigUint {
        BigUint::from(3u8)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn tuple_valuation_closed_form() {
        let p = running_curve().moduli_point().unwrap();
        // min(2*15, 4*12, 6*16, 10*26) and min(2*5, 4*9, 6*13, 10*21).
        assert_eq!(weighted_tuple_valuation(&p, &two()).unwrap(), 30);
        assert_eq!(weighted_tuple_valuation(&p, &three()).unwrap(), 10);
        assert_eq!(weighted_tuple_valuation(&p, &BigUint::from(7u8)).unwrap(), 0);
        // Direct divisibility search cross-check for p = 2.
        let ints = p.integer_coords().unwrap();
        let mut j = 0u64;
        'outer: loop {
            let next = j + 1;
            for (x, &q) in ints.iter().zip(p.weights().weights()) {
                let xq = BigInt::from(x.magnitude().pow(q));
                if !(xq % BigInt::from(two().pow((next.min(400)) as u32))).is_zero() {
                    break 'outer;
                }
            }
            j = next;
        }
        assert_eq!(j, 30);
    }

    #[test]
    fn tuple_valuation_lower_bound_at_wgcd_primes() {
        // Every prime dividing the weighted gcd obeys
        // weighted_tuple_valuation >= (min_i q_i)^2.
        let p = running_curve().moduli_point().unwrap();
        let min_q = *p.weights().weights().iter().min().unwrap() as u64;
        for prime in [two(), three()] {
            assert!(weighted_tuple_valuation(&p, &prime).unwrap() >= min_q * min_q);
        }
    }

    #[test]
    fn exponent_maps_at_the_three_steps() {
        let p = running_curve().moduli_point().unwrap();

        let e3 = reduction_exponents(&p, &rat(3, 1)).unwrap();
        assert!(e3.is_empty());

        let e1 = reduction_exponents(&p, &rat(1, 1)).unwrap();
        assert_eq!(e1.exponent_of(&two()), rat(2, 1));
        assert_eq!(e1.exponent_of(&three()), rat(2, 1));
        assert_eq!(e1.factors().len(), 2);

        let eh = reduction_exponents(&p, &rat(1, 2)).unwrap();
        assert_eq!(eh.exponent_of(&two()), rat(5, 2));
        assert_eq!(eh.exponent_of(&three()), rat(2, 1));
        assert_eq!(eh.denominator_bound(), 2);
    }

    #[test]
    fn incompatible_step_is_rejected() {
        let p = running_curve().moduli_point().unwrap();
        // step 1/3 against weight 2: 2/3 is not an integer.
        let err = reduction_exponents(&p, &rat(1, 3)).unwrap_err();
        assert!(matches!(err, Error::IncompatibleStep { .. }));
        let err = reduction_exponents(&p, &rat(-1, 1)).unwrap_err();
        assert!(matches!(err, Error::IncompatibleStep { .. }));
    }

    #[test]
    fn minimality_of_the_running_example() {
        assert!(is_minimal(&running_curve()).unwrap());
        let inflated =
            SuperellipticCurve::new(2, inflate(&reduced_form(), 2), BigInt::one()).unwrap();
        assert!(!is_minimal(&inflated).unwrap());
    }

    #[test]
    fn wgcd_one_implies_minimal() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 60 {
            let coeffs: [i64; 7] = std::array::from_fn(|_| rng.gen_range(-9i64..=9));
            let Ok(f) = BinaryForm::from_integers(&coeffs.map(BigInt::from)) else {
                continue;
            };
            if f.degree() != 6 {
                continue;
            }
            let Ok(curve) = SuperellipticCurve::new(2, f, BigInt::one()) else {
                continue;
            };
            let point = curve.moduli_point().unwrap();
            if point.wgcd().unwrap().is_one() {
                assert!(is_minimal(&curve).unwrap());
                checked += 1;
            }
        }
    }

    #[test]
    fn minimal_model_fixes_a_minimal_curve() {
        let report = minimal_model(&running_curve()).unwrap();
        assert!(report.is_trivial());
        assert_eq!(report.output_point(), report.input_point());
        assert_eq!(report.realized_equation().unwrap(), &running_curve());
        assert!(report.defined_over_base());
        assert!(report.extension_note().is_none());
    }

    #[test]
    fn minimal_model_deflates_an_inflated_curve() {
        let inflated =
            SuperellipticCurve::new(2, inflate(&reduced_form(), 2), BigInt::one()).unwrap();
        let report = minimal_model(&inflated).unwrap();
        assert_eq!(report.lambda().exponent_of(&two()), rat(3, 1));
        assert_eq!(
            report.output_point(),
            &reduced_curve().moduli_point().unwrap()
        );
        assert!(report.defined_over_base()); // m = 2 divides d = 6
        let realized = report.realized_equation().unwrap();
        assert_eq!(realized.moduli_point().unwrap(), *report.output_point());
        // Reducing the output is a fixed point.
        let again = minimal_model(realized).unwrap();
        assert!(again.is_trivial());
        assert_eq!(again.output_point(), report.output_point());
    }

    #[test]
    fn minimal_model_flags_the_extension_when_m_does_not_divide_d() {
        let inflated =
            SuperellipticCurve::new(4, inflate(&reduced_form(), 2), BigInt::one()).unwrap();
        let report = minimal_model(&inflated).unwrap();
        assert!(!report.is_trivial());
        assert!(!report.defined_over_base());
        assert_eq!(report.extension_note(), Some("k(2^(3/2))"));
    }

    #[test]
    fn model_mode_matches_the_substitution_law() {
        // output = star((det M)^{d/2}) input with M = diag(1/lambda, 1).
        let inflated =
            SuperellipticCurve::new(2, inflate(&reduced_form(), 6), BigInt::one()).unwrap();
        let report = minimal_model(&inflated).unwrap();
        let lambda = report
            .lambda()
            .map_exponents(|e| e * rat(1, 3), 1)
            .unwrap()
            .as_integer()
            .unwrap();
        assert_eq!(lambda, BigUint::from(6u8));
        let det_pow = rat(1, 6).pow(3);
        assert_eq!(
            report.input_point().star(&det_pow).unwrap(),
            *report.output_point()
        );
    }

    #[test]
    fn integral_twist_reaches_the_reduced_equation() {
        let report = minimal_twist(&running_curve(), true).unwrap();
        assert_eq!(report.mode(), ReductionMode::Normalize);
        assert_eq!(report.lambda().exponent_of(&two()), rat(2, 1));
        assert_eq!(report.lambda().exponent_of(&three()), rat(2, 1));
        assert_eq!(
            report.output_point(),
            &reduced_curve().moduli_point().unwrap()
        );
        let realized = report.realized_equation().unwrap();
        assert_eq!(realized, &reduced_curve());
        assert!(!report.realization_mismatch());
        // The two equations differ by the scalar twist 6, not a square.
        assert!(!report.defined_over_base());
        assert_eq!(report.extension_note(), Some("k((6)^(1/2))"));
    }

    #[test]
    fn absolute_twist_of_the_running_example() {
        let report = minimal_twist(&running_curve(), false).unwrap();
        assert_eq!(report.mode(), ReductionMode::Twist);
        assert_eq!(report.lambda().exponent_of(&two()), rat(5, 2));
        assert_eq!(report.lambda().exponent_of(&three()), rat(2, 1));
        assert!(report.realized_equation().is_none());
        assert!(!report.realization_mismatch());
        assert!(!report.defined_over_base());
        assert_eq!(report.extension_note(), Some("k(2^(5/6) * 3^(2/3))"));

        let want = WeightedPoint::new(
            vec![
                BigRational::from(BigInt::from(2).pow(10u32) * BigInt::from(3)),
                BigRational::from(
                    -(BigInt::from(2).pow(2u32) * BigInt::from(3) * BigInt::from(101 * 233)),
                ),
                BigRational::from(BigInt::from(2) * BigInt::from(3) * BigInt::from(29 * 37 * 8837)),
                BigRational::from(
                    BigInt::from(2)
                        * BigInt::from(3)
                        * BigInt::from(11 * 23 * 547)
                        * BigInt::from(1_445_831),
                ),
            ],
            report.output_point().weights().clone(),
        )
        .unwrap();
        assert_eq!(report.output_point(), &want);
    }

    #[test]
    fn absolute_twist_agrees_from_both_starting_points() {
        let from_running = minimal_twist(&running_curve(), false).unwrap();
        let from_reduced = minimal_twist(&reduced_curve(), false).unwrap();
        assert_eq!(from_running.output_point(), from_reduced.output_point());
        // The reduced curve still moves: 2 carries exponent 1/2.
        assert_eq!(from_reduced.lambda().exponent_of(&two()), rat(1, 2));
    }

    #[test]
    fn twist_modes_fix_fully_reduced_points() {
        // A form whose point has tiny valuations everywhere stays put in
        // both twist modes, with the input equation echoed back.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        let mut found = false;
        while !found {
            let coeffs: [i64; 7] = std::array::from_fn(|_| rng.gen_range(-9i64..=9));
            let Ok(f) = BinaryForm::from_integers(&coeffs.map(BigInt::from)) else {
                continue;
            };
            if f.degree() != 6 {
                continue;
            }
            let Ok(curve) = SuperellipticCurve::new(2, f, BigInt::one()) else {
                continue;
            };
            let point = curve.moduli_point().unwrap();
            let fine = point
                .support_primes()
                .unwrap()
                .iter()
                .all(|p| weighted_tuple_valuation(&point, p).unwrap() < 2);
            if !fine {
                continue;
            }
            found = true;
            for integral in [true, false] {
                let report = minimal_twist(&curve, integral).unwrap();
                assert!(report.is_trivial());
                assert_eq!(report.realized_equation().unwrap(), &curve);
                assert!(report.defined_over_base());
            }
        }
    }

    #[test]
    fn scalar_twist_moves_the_point_by_star() {
        let curve = running_curve();
        let twisted = curve.scalar_twist(&BigInt::from(6)).unwrap();
        assert_eq!(
            twisted.moduli_point().unwrap(),
            curve
                .moduli_point()
                .unwrap()
                .star(&rat(1, 6))
                .unwrap()
        );
        // Composition: twist by 2 then 3 equals twist by 6.
        let composed = curve
            .scalar_twist(&BigInt::from(2))
            .unwrap()
            .scalar_twist(&BigInt::from(3))
            .unwrap();
        assert_eq!(composed, twisted);
        // Identity twist.
        assert_eq!(curve.scalar_twist(&BigInt::one()).unwrap(), curve);
        // The canonical point ignores twists entirely.
        assert_eq!(
            twisted.canonical_point().unwrap(),
            curve.canonical_point().unwrap()
        );
        assert!(curve.scalar_twist(&BigInt::zero()).is_err());
    }

    #[test]
    fn twisted_curves_can_have_rational_moduli() {
        let twisted = reduced_curve().scalar_twist(&BigInt::from(5)).unwrap();
        assert!(!twisted.moduli_point().unwrap().is_integral());
        assert!(matches!(
            minimal_model(&twisted),
            Err(Error::NonIntegralModuliPoint)
        ));
        assert!(matches!(
            minimal_twist(&twisted, true),
            Err(Error::NonIntegralModuliPoint)
        ));
        // The canonical point is still available and twist-independent.
        assert_eq!(
            twisted.canonical_point().unwrap(),
            reduced_curve().canonical_point().unwrap()
        );
    }

    #[test]
    fn discriminant_minimization_round_trip() {
        let curve = running_curve();
        let (same, u) = minimize_discriminant(&curve).unwrap();
        assert!(u.is_one());
        assert_eq!(same, curve);

        // Substitute x -> u^m x to inflate the discriminant by u^{m d (d-1)}.
        let inflated_form = inflate(&running_form(), 4); // u^m = 2^2
        let inflated = SuperellipticCurve::new(2, inflated_form, BigInt::one()).unwrap();
        let (reduced, u) = minimize_discriminant(&inflated).unwrap();
        assert_eq!(u, BigUint::from(2u8));
        assert_eq!(reduced.form(), &running_form());
        let before = inflated.form().discriminant().unwrap();
        let after = reduced.form().discriminant().unwrap();
        let ratio = before / after;
        assert_eq!(
            ratio,
            BigRational::from(BigInt::from(2).pow(60u32)) // u^{m d (d-1)}
        );
    }

    #[test]
    fn valuation_ordering_across_the_three_reductions() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let mut done = 0;
        while done < 25 {
            let coeffs: [i64; 7] = std::array::from_fn(|_| rng.gen_range(-9i64..=9));
            let Ok(f) = BinaryForm::from_integers(&coeffs.map(BigInt::from)) else {
                continue;
            };
            if f.degree() != 6 {
                continue;
            }
            let lambda = [2i64, 3, 6][rng.gen_range(0..3)];
            let Ok(curve) = SuperellipticCurve::new(2, inflate(&f, lambda), BigInt::one())
            else {
                continue;
            };
            done += 1;
            let input = curve.moduli_point().unwrap();
            let model = minimal_model(&curve).unwrap();
            let integral = minimal_twist(&curve, true).unwrap();
            let absolute = minimal_twist(&curve, false).unwrap();
            for p in input.support_primes().unwrap() {
                let vals = |pt: &WeightedPoint| -> Vec<i64> {
                    pt.coords()
                        .iter()
                        .map(|c| rational_valuation(c, &p).unwrap().unwrap_or(i64::MAX))
                        .collect()
                };
                let vi = vals(&input);
                let vm = vals(model.output_point());
                let vt = vals(integral.output_point());
                let va = vals(absolute.output_point());
                for i in 0..4 {
                    assert!(va[i] <= vt[i]);
                    assert!(vt[i] <= vm[i]);
                    assert!(vm[i] <= vi[i]);
                }
            }
        }
    }

    #[test]
    fn hyperelliptic_models_stay_over_the_base_field() {
        // m = 2 divides every even degree, so model reduction never needs
        // an extension.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        let mut done = 0;
        while done < 20 {
            let deg = [6usize, 8][rng.gen_range(0..2)];
            let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9i64..=9)).collect();
            let Ok(f) = BinaryForm::from_integers(
                &coeffs.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>(),
            ) else {
                continue;
            };
            if f.degree() != deg {
                continue;
            }
            let lambda = [1i64, 2, 3][rng.gen_range(0..3)];
            let Ok(curve) = SuperellipticCurve::new(2, inflate(&f, lambda), BigInt::one())
            else {
                continue;
            };
            done += 1;
            let report = minimal_model(&curve).unwrap();
            assert!(report.defined_over_base());
        }
    }

    #[test]
    fn realization_soundness_on_random_curves() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        let mut done = 0;
        while done < 30 {
            let coeffs: [i64; 7] = std::array::from_fn(|_| rng.gen_range(-6i64..=6));
            let Ok(f) = BinaryForm::from_integers(&coeffs.map(BigInt::from)) else {
                continue;
            };
            if f.degree() != 6 {
                continue;
            }
            let lambda = [1i64, 2, 5, 6][rng.gen_range(0..4)];
            let m = [2u32, 3][rng.gen_range(0..2)];
            let Ok(curve) = SuperellipticCurve::new(m, inflate(&f, lambda), BigInt::one())
            else {
                continue;
            };
            done += 1;
            for report in [
                minimal_model(&curve).unwrap(),
                minimal_twist(&curve, true).unwrap(),
                minimal_twist(&curve, false).unwrap(),
            ] {
                if let Some(eq) = report.realized_equation() {
                    assert_eq!(eq.moduli_point().unwrap(), *report.output_point());
                }
                // Reducing any output point again is a no-op.
                let step = match report.mode() {
                    ReductionMode::Model => rat(3, 1),
                    ReductionMode::Normalize => rat(1, 1),
                    ReductionMode::Twist => rat(1, 2),
                };
                assert!(reduction_exponents(report.output_point(), &step)
                    .unwrap()
                    .is_empty());
            }
        }
    }

    #[test]
    fn curve_constructor_guards() {
        assert!(matches!(
            SuperellipticCurve::new(1, reduced_form(), BigInt::one()),
            Err(Error::ExponentTooSmall(1))
        ));
        assert!(matches!(
            SuperellipticCurve::new(2, form(&[1, 2, 1]), BigInt::one()),
            Err(Error::DegreeTooSmall { min: 3, got: 2 })
        ));
        assert!(matches!(
            SuperellipticCurve::new(2, reduced_form(), BigInt::zero()),
            Err(Error::ZeroScalar)
        ));
        // x^6 has a repeated root at y = 0.
        assert!(matches!(
            SuperellipticCurve::new(2, form(&[0, 0, 0, 0, 0, 0, 1]), BigInt::one()),
            Err(Error::InseparableForm)
        ));
        // Non-integral coefficients are rejected.
        let half = BinaryForm::new(vec![
            BigRational::new(BigInt::one(), BigInt::from(2)),
            BigRational::one(),
            BigRational::one(),
            BigRational::one(),
        ])
        .unwrap();
        assert!(matches!(
            SuperellipticCurve::new(2, half, BigInt::one()),
            Err(Error::NonIntegralForm)
        ));
        // Degree 3 and 4 are accepted, flagged.
        let cubic = SuperellipticCurve::new(2, form(&[1, 0, 0, 1]), BigInt::one()).unwrap();
        assert!(cubic.is_low_degree());
        let sextic = running_curve();
        assert!(!sextic.is_low_degree());
    }

    #[test]
    fn low_degree_curves_reduce_with_the_discriminant_system() {
        // z^2 = x^3 + 16 inflated by x -> 4x: disc weight is 4, step 3/2.
        let f = form(&[16, 0, 0, 1]);
        let inflated = inflate(&f, 4);
        let curve = SuperellipticCurve::new(2, inflated, BigInt::one()).unwrap();
        let report = minimal_model(&curve).unwrap();
        // disc scales by det^{d(d-1)} = 4^6; v_2 gained 12, step grid is
        // 3/2 with weight 4: e = 3 allowed iff 2^{12} extra... verify by
        // recomputation instead of hand numbers:
        let realized = report.realized_equation().unwrap();
        assert_eq!(
            realized.moduli_point().unwrap(),
            *report.output_point()
        );
        let again = minimal_model(realized).unwrap();
        assert!(again.is_trivial());
    }

    #[test]
    fn mth_power_predicate() {
        assert!(is_mth_power(&rat(4, 9), 2));
        assert!(is_mth_power(&rat(-8, 27), 3));
        assert!(!is_mth_power(&rat(-4, 9), 2));
        assert!(!is_mth_power(&rat(6, 1), 2));
        assert!(is_mth_power(&rat(1, 64), 6));
        assert!(!is_mth_power(&rat(0, 1), 2));
    }
}
