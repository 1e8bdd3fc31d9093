//! Invariants of binary forms under the substitution action.
//!
//! Degree 6 gets the full classical system (J2, J4, J6, J10) of Igusa and
//! Clebsch, computed by exact transvectants; every other degree >= 2 falls
//! back to the discriminant alone, which is a complete invariant system for
//! the scaling behavior we need even though it separates fewer orbits.
//!
//! Each invariant I of weight q satisfies
//! `I(f^M) = (det M)^{(deg q)/2 * ...}`: concretely, for a substitution by
//! M with unit scalar, `I(f^M) = (det M)^{3q} ... ` specialized per system;
//! the uniform statement used throughout is
//! `I_q(f^M) = ((det M)^{d/2})^q I_q(f)` for degree-d forms (q the weight),
//! so the tuple of invariants moves by `star` with scalar (det M)^{d/2}.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::forms::BinaryForm;
use crate::weighted::{WeightSystem, WeightedPoint};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    /// Binary sextics: (J2, J4, J6, J10), weights (2, 4, 6, 10).
    IgusaClebsch,
    /// Any degree d >= 2: the discriminant, weight 2d - 2.
    DiscriminantOnly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSystem {
    kind: SystemKind,
    degree: usize,
    weights: WeightSystem,
}

/// The invariant system attached to forms of the given degree.
pub fn system_for(degree: usize) -> Result<InvariantSystem> {
    if degree == 6 {
        return Ok(InvariantSystem {
            kind: SystemKind::IgusaClebsch,
            degree,
            weights: WeightSystem::new(vec![2, 4, 6, 10], "igusa")?,
        });
    }
    if degree >= 2 {
        return Ok(InvariantSystem {
            kind: SystemKind::DiscriminantOnly,
            degree,
            weights: WeightSystem::new(vec![2 * degree as u32 - 2], "discriminant")?,
        });
    }
    Err(Error::UnsupportedDegree(degree))
}

impl InvariantSystem {
    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn evaluate(&self, f: &BinaryForm) -> Result<Vec<BigRational>> {
        if f.degree() != self.degree {
            return Err(Error::UnsupportedDegree(f.degree()));
        }
        match self.kind {
            SystemKind::IgusaClebsch => Ok(igusa_point(f)?.to_vec()),
            SystemKind::DiscriminantOnly => Ok(vec![f.discriminant()?]),
        }
    }

    /// The invariants as a point in the weighted projective space of the
    /// system; errors if every invariant vanishes (degenerate orbit).
    pub fn point(&self, f: &BinaryForm) -> Result<WeightedPoint> {
        WeightedPoint::new(self.evaluate(f)?, self.weights.clone())
    }
}

/// The four invariants (J2, J4, J6, J10) of a binary sextic, in the
/// classical normalization where J10 equals the discriminant. Exact over Q.
pub fn igusa_point(f: &BinaryForm) -> Result<[BigRational; 4]> {
    if f.degree() != 6 {
        return Err(Error::NotASextic(f.degree()));
    }
    let f6 = Cov {
        coeffs: f.coeffs().to_vec(),
    };

    // Transvectant tower; every intermediate is a covariant of even order.
    let a = transvectant(&f6, &f6, 6).scalar();
    let i4 = transvectant(&f6, &f6, 4); // order 4
    let b = transvectant(&i4, &i4, 4).scalar();
    let i4sq2 = transvectant(&i4, &i4, 2); // order 4
    let c = transvectant(&i4, &i4sq2, 4).scalar();
    let y1 = transvectant(&f6, &i4, 4); // order 2
    let y2 = transvectant(&i4, &y1, 2); // order 2
    let y3 = transvectant(&i4, &y2, 2); // order 2
    let d = transvectant(&y3, &y1, 2).scalar();

    let r = |n: i64| BigRational::from(BigInt::from(n));
    let j2 = r(-120) * &a;
    let j4 = r(-720) * a.pow(2) + r(6750) * &b;
    let j6 = r(8640) * a.pow(3) - r(108_000) * &a * &b + r(202_500) * &c;
    let j10 = r(-62_208) * a.pow(5)
        + r(972_000) * a.pow(3) * &b
        + r(1_620_000) * a.pow(2) * &c
        - r(3_037_500) * &a * b.pow(2)
        - r(6_075_000) * &b * &c
        - r(4_556_250) * &d;
    Ok([j2, j4, j6, j10])
}

/// A binary form of order `coeffs.len() - 1` with coefficients listed by
/// ascending power of x: `coeffs[j]` multiplies x^j y^{ord - j}.
/// Order 0 is a scalar.
#[derive(Debug, Clone)]
struct Cov {
    coeffs: Vec<BigRational>,
}

impl Cov {
    fn ord(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn scalar(&self) -> BigRational {
        debug_assert_eq!(self.ord(), 0);
        self.coeffs[0].clone()
    }

    fn dx(&self) -> Cov {
        if self.ord() == 0 {
            return Cov {
                coeffs: vec![BigRational::zero()],
            };
        }
        let coeffs = (1..self.coeffs.len())
            .map(|j| BigRational::from(BigInt::from(j)) * &self.coeffs[j])
            .collect();
        Cov { coeffs }
    }

    fn dy(&self) -> Cov {
        let n = self.ord();
        if n == 0 {
            return Cov {
                coeffs: vec![BigRational::zero()],
            };
        }
        let coeffs = (0..n)
            .map(|j| BigRational::from(BigInt::from(n - j)) * &self.coeffs[j])
            .collect();
        Cov { coeffs }
    }

    fn mul(&self, other: &Cov) -> Cov {
        let mut coeffs = vec![BigRational::zero(); self.ord() + other.ord() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Cov { coeffs }
    }

    fn scale(&self, c: &BigRational) -> Cov {
        Cov {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    fn add(&self, other: &Cov) -> Cov {
        debug_assert_eq!(self.ord(), other.ord());
        Cov {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn binomial(n: usize, k: usize) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// k-th transvectant with the factorial normalization
/// `(f, g)_k = ((m-k)! (n-k)! / (m! n!)) *
///   sum_j (-1)^j C(k, j) d^k f/dx^{k-j} dy^j * d^k g/dx^j dy^{k-j}`.
fn transvectant(f: &Cov, g: &Cov, k: usize) -> Cov {
    let m = f.ord();
    let n = g.ord();
    debug_assert!(k <= m && k <= n);
    let mut acc: Option<Cov> = None;
    for j in 0..=k {
        let mut fd = f.clone();
        for _ in 0..k - j {
            fd = fd.dx();
        }
        for _ in 0..j {
            fd = fd.dy();
        }
        let mut gd = g.clone();
        for _ in 0..j {
            gd = gd.dx();
        }
        for _ in 0..k - j {
            gd = gd.dy();
        }
        let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let term = fd
            .mul(&gd)
            .scale(&BigRational::from(sign * binomial(k, j)));
        acc = Some(match acc {
            None => term,
            Some(s) => s.add(&term),
        });
    }
    let norm = BigRational::new(
        factorial(m - k) * factorial(n - k),
        factorial(m) * factorial(n),
    );
    acc.expect("k >= 0 gives at least one term").scale(&norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::Gl2Transform;
    use num_traits::Signed;
    use rand::{Rng, SeedableRng};

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn sextic(coeffs: &[i64; 7]) -> BinaryForm {
        BinaryForm::from_integers(&coeffs.map(BigInt::from)).unwrap()
    }

    fn running_example() -> BinaryForm {
        sextic(&[107, 1470, 8382, 25056, 40176, 31104, 7776])
    }

    fn reduced_example() -> BinaryForm {
        sextic(&[642, 1470, 1397, 696, 186, 24, 1])
    }

    fn expected_point() -> [BigRational; 4] {
        [
            BigRational::from(BigInt::from(2).pow(15) * BigInt::from(3).pow(5)),
            BigRational::from(
                -(BigInt::from(2).pow(12) * BigInt::from(3).pow(9) * BigInt::from(101 * 233)),
            ),
            BigRational::from(
                BigInt::from(2).pow(16) * BigInt::from(3).pow(13) * BigInt::from(29 * 37 * 8837),
            ),
            BigRational::from(
                BigInt::from(2).pow(26)
                    * BigInt::from(3).pow(21)
                    * BigInt::from(11 * 23 * 547)
                    * BigInt::from(1_445_831),
            ),
        ]
    }

    #[test]
    fn running_example_invariants_are_pinned() {
        let j = igusa_point(&running_example()).unwrap();
        let want = expected_point();
        for (got, want) in j.iter().zip(&want) {
            assert_eq!(got, want);
        }
    }

    #[test]
    fn reduced_example_invariants_are_pinned() {
        let j = igusa_point(&reduced_example()).unwrap();
        let want = [
            BigRational::from(BigInt::from(2).pow(11) * BigInt::from(3)),
            BigRational::from(
                -(BigInt::from(2).pow(4) * BigInt::from(3) * BigInt::from(101 * 233)),
            ),
            BigRational::from(BigInt::from(2).pow(4) * BigInt::from(3) * BigInt::from(29 * 37 * 8837)),
            BigRational::from(
                BigInt::from(2).pow(6)
                    * BigInt::from(3)
                    * BigInt::from(11 * 23 * 547)
                    * BigInt::from(1_445_831),
            ),
        ];
        for (got, want) in j.iter().zip(&want) {
            assert_eq!(got, want);
        }
    }

    #[test]
    fn integral_sextics_have_integral_invariants() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..60 {
            let coeffs: [i64; 7] = std::array::from_fn(|_| rng.gen_range(-9i64..=9));
            if coeffs.iter().all(|&c| c == 0) || coeffs == [0; 7] {
                continue;
            }
            let Ok(f) = BinaryForm::from_integers(&coeffs.map(BigInt::from)) else {
                continue;
            };
            if f.degree() != 6 {
                continue;
            }
            for v in igusa_point(&f).unwrap() {
                assert!(v.denom().is_one(), "non-integral invariant on {coeffs:?}");
            }
        }
    }

    #[test]
    fn invariants_scale_by_det_to_the_weight() {
        // I_q(f^M) = ((det M)^3)^q I_q(f) for sextics.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let weights = [2u32, 4, 6, 10];
        let mut tried = 0;
        while tried < 50 {
            let coeffs: [i64; 7] = std::array::from_fn(|_| rng.gen_range(-6i64..=6));
            let Ok(f) = BinaryForm::from_integers(&coeffs.map(BigInt::from)) else {
                continue;
            };
            if f.degree() != 6 {
                continue;
            }
            let entries: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-3i64..=3));
            let Ok(m) = Gl2Transform::from_integers(entries, 1) else {
                continue;
            };
            tried += 1;
            let det = m.det();
            let lambda = det.pow(3);
            let before = igusa_point(&f).unwrap();
            let after = igusa_point(&f.transform(&m)).unwrap();
            for ((x, y), &q) in before.iter().zip(&after).zip(&weights) {
                assert_eq!(*y, lambda.pow(q as i32) * x);
            }
        }
    }

    #[test]
    fn invariants_are_homogeneous_in_the_coefficients() {
        // f -> c f multiplies I_q by c^q (substitution scalar route).
        let f = running_example();
        let c = rat(-5);
        let m = Gl2Transform::identity().with_scalar(c.clone()).unwrap();
        let before = igusa_point(&f).unwrap();
        let after = igusa_point(&f.transform(&m)).unwrap();
        for ((x, y), q) in before.iter().zip(&after).zip([2i32, 4, 6, 10]) {
            assert_eq!(*y, c.pow(q) * x);
        }
    }

    #[test]
    fn unimodular_substitutions_fix_the_invariants() {
        let f = running_example();
        for entries in [[1i64, 1, 0, 1], [0, 1, -1, 0], [1, 0, 1, 1], [2, 1, 1, 1]] {
            let m = Gl2Transform::from_integers(entries, 1).unwrap();
            if !(m.det() == rat(1) || m.det() == rat(-1)) {
                continue;
            }
            let before = igusa_point(&f).unwrap();
            let after = igusa_point(&f.transform(&m)).unwrap();
            // det = +-1 and even weights: invariants are literally equal.
            assert_eq!(before, after);
        }
    }

    #[test]
    fn top_invariant_is_the_discriminant() {
        let f = running_example();
        let j10 = igusa_point(&f).unwrap()[3].clone();
        assert_eq!(j10, f.discriminant().unwrap());

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        let mut done = 0;
        while done < 50 {
            let coeffs: [i64; 7] = std::array::from_fn(|_| rng.gen_range(-7i64..=7));
            let Ok(f) = BinaryForm::from_integers(&coeffs.map(BigInt::from)) else {
                continue;
            };
            if f.degree() != 6 {
                continue;
            }
            done += 1;
            assert_eq!(
                igusa_point(&f).unwrap()[3],
                f.discriminant().unwrap(),
                "mismatch on {coeffs:?}"
            );
        }
    }

    #[test]
    fn system_selection_by_degree() {
        let s6 = system_for(6).unwrap();
        assert_eq!(s6.kind(), SystemKind::IgusaClebsch);
        assert_eq!(s6.weights().weights(), &[2, 4, 6, 10]);

        let s5 = system_for(5).unwrap();
        assert_eq!(s5.kind(), SystemKind::DiscriminantOnly);
        assert_eq!(s5.weights().weights(), &[8]);

        let s3 = system_for(3).unwrap();
        assert_eq!(s3.weights().weights(), &[4]);

        assert!(matches!(system_for(1), Err(Error::UnsupportedDegree(1))));
        assert!(matches!(system_for(0), Err(Error::UnsupportedDegree(0))));
    }

    #[test]
    fn point_on_weighted_space_matches_raw_values() {
        let s = system_for(6).unwrap();
        let p = s.point(&running_example()).unwrap();
        assert_eq!(p.coords(), expected_point().as_slice());
        assert_eq!(p.weights().weights(), &[2, 4, 6, 10]);
    }

    #[test]
    fn non_sextic_is_rejected_by_igusa_point() {
        let quartic =
            BinaryForm::from_integers(&[1, 0, 0, 0, 1].map(BigInt::from)).unwrap();
        assert!(matches!(igusa_point(&quartic), Err(Error::NotASextic(4))));
        let s = system_for(6).unwrap();
        assert!(s.evaluate(&quartic).is_err());
    }

    #[test]
    fn discriminant_system_evaluates_low_degrees() {
        let cubic = BinaryForm::from_integers(&[2, -1, 0, 1].map(BigInt::from)).unwrap();
        let s = system_for(3).unwrap();
        let vals = s.evaluate(&cubic).unwrap();
        assert_eq!(vals.len(), 1);
        assert_eq!(vals[0], cubic.discriminant().unwrap());
        assert!(!vals[0].is_zero());
        assert!(vals[0].is_negative() || vals[0].is_positive());
    }
}
