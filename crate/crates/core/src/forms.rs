//! Binary forms of degree d with the GL2 substitution action.
//!
//! A form is stored as exact rational coefficients `a_0, ..., a_d` of
//! `f(x, y) = sum_j a_j x^j y^(d-j)`. A transformation carries a matrix
//! `[[a, b], [c, d]]` acting by substitution `f(ax + by, cx + dy)` together
//! with a nonzero scalar multiplier applied afterwards.
//!
//! The discriminant is the degree-(2d-2) invariant computed from the
//! homogeneous resultant of the two partial derivatives,
//! `Res(f_x, f_y) = (-1)^(d(d-1)/2) d^(d-2) disc(f)`, which keeps vanishing
//! leading coefficients (a root at infinity) honest and never touches
//! numeric root finding. The normalization reproduces `b^2 - 4ac` in degree
//! 2 and `-4p^3 - 27q^2` for `x^3 + p x y^2 + q y^3`, and is an integer on
//! every integer form.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::gcd_all;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    coeffs: Vec<BigRational>,
}

impl BinaryForm {
    /// Build from `a_0, ..., a_d` (coefficient of `x^j y^(d-j)` at index j).
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::FormTooShort);
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn from_integers<I: Into<BigInt> + Clone>(coeffs: &[I]) -> Result<Self> {
        Self::new(
            coeffs
                .iter()
                .map(|c| BigRational::from(c.clone().into()))
                .collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &BigRational {
        &self.coeffs[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.denom().is_one())
    }

    pub fn integer_coeffs(&self) -> Result<Vec<BigInt>> {
        if !self.is_integral() {
            return Err(Error::NonIntegralForm);
        }
        Ok(self.coeffs.iter().map(|c| c.numer().clone()).collect())
    }

    pub fn evaluate(&self, x: &BigRational, y: &BigRational) -> BigRational {
        let d = self.degree();
        let mut acc = BigRational::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc += c * x.pow(j as i32) * y.pow((d - j) as i32);
        }
        acc
    }

    /// Apply `t`: substitute, then multiply by the scalar.
    pub fn transform(&self, t: &Gl2Transform) -> BinaryForm {
        let d = self.degree();
        let top = power_table(&t.a, &t.b, d);
        let bot = power_table(&t.c, &t.d, d);
        let mut out = vec![BigRational::zero(); d + 1];
        for (j, cj) in self.coeffs.iter().enumerate() {
            if cj.is_zero() {
                continue;
            }
            let w = cj * &t.scalar;
            for (u, cu) in top[j].iter().enumerate() {
                if cu.is_zero() {
                    continue;
                }
                let wu = &w * cu;
                for (v, cv) in bot[d - j].iter().enumerate() {
                    if cv.is_zero() {
                        continue;
                    }
                    out[u + v] += &wu * cv;
                }
            }
        }
        BinaryForm { coeffs: out }
    }

    /// Split an integral form as `f = unit * content * primitive` with
    /// `content > 0` and the leading nonzero coefficient of `primitive`
    /// positive.
    pub fn content_and_primitive(&self) -> Result<ContentSplit> {
        if self.is_zero() {
            return Err(Error::ZeroForm("content"));
        }
        let ints = self.integer_coeffs()?;
        let content = gcd_all(ints.iter());
        let lead = ints
            .iter()
            .rev()
            .find(|c| !c.is_zero())
            .expect("nonzero form has a leading coefficient");
        let unit: i8 = if lead.is_negative() { -1 } else { 1 };
        let divisor = BigInt::from(content.clone()) * BigInt::from(unit);
        let prim = BinaryForm {
            coeffs: ints
                .iter()
                .map(|c| BigRational::from(c / &divisor))
                .collect(),
        };
        Ok(ContentSplit {
            content,
            unit,
            primitive: prim,
        })
    }

    /// Discriminant, normalized as described in the module docs.
    pub fn discriminant(&self) -> Result<BigRational> {
        let d = self.degree();
        if d < 2 {
            return Err(Error::DegreeTooSmall { min: 2, got: d });
        }
        // f_x has coefficients (j+1) a_{j+1}, f_y has (d-j) a_j; both are
        // forms of degree d-1.
        let fx: Vec<BigRational> = (0..d)
            .map(|j| &self.coeffs[j + 1] * BigRational::from(BigInt::from(j as u64 + 1)))
            .collect();
        let fy: Vec<BigRational> = (0..d)
            .map(|j| &self.coeffs[j] * BigRational::from(BigInt::from((d - j) as u64)))
            .collect();
        let res = sylvester_resultant(&fx, &fy);
        let sign = if (d * (d - 1) / 2) % 2 == 0 { 1 } else { -1 };
        let norm = BigRational::from(BigInt::from(sign) * BigInt::from(d).pow(d as u32 - 2));
        Ok(res / norm)
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        let mut first = true;
        for j in (0..=d).rev() {
            let c = &self.coeffs[j];
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let mut wrote_coeff = false;
            if !mag.is_one() || j == 0 && d == 0 || (j == 0 && d - j == 0) {
                write!(f, "{mag}")?;
                wrote_coeff = true;
            } else if j == 0 && d == 0 {
                write!(f, "{mag}")?;
                wrote_coeff = true;
            }
            let mut wrote_var = false;
            if j > 0 {
                if wrote_coeff {
                    write!(f, "*")?;
                }
                write!(f, "x")?;
                if j > 1 {
                    write!(f, "^{j}")?;
                }
                wrote_var = true;
            }
            if d - j > 0 {
                if wrote_coeff || wrote_var {
                    write!(f, "*")?;
                }
                write!(f, "y")?;
                if d - j > 1 {
                    write!(f, "^{}", d - j)?;
                }
                wrote_var = true;
            }
            if !wrote_coeff && !wrote_var {
                write!(f, "{mag}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentSplit {
    pub content: BigUint,
    pub unit: i8,
    pub primitive: BinaryForm,
}

/// An invertible substitution `(x, y) -> (ax + by, cx + dy)` with a nonzero
/// scalar multiplier applied after substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gl2Transform {
    a: BigRational,
    b: BigRational,
    c: BigRational,
    d: BigRational,
    scalar: BigRational,
}

impl Gl2Transform {
    pub fn new(
        a: BigRational,
        b: BigRational,
        c: BigRational,
        d: BigRational,
        scalar: BigRational,
    ) -> Result<Self> {
        let t = Gl2Transform { a, b, c, d, scalar };
        if t.det().is_zero() {
            return Err(Error::SingularTransform);
        }
        if t.scalar.is_zero() {
            return Err(Error::ZeroScalar);
        }
        Ok(t)
    }

    pub fn from_integers(m: [i64; 4], scalar: i64) -> Result<Self> {
        let r = |v: i64| BigRational::from(BigInt::from(v));
        Self::new(r(m[0]), r(m[1]), r(m[2]), r(m[3]), r(scalar))
    }

    pub fn identity() -> Self {
        Self::x_scaling(&BigRational::one())
    }

    /// `x -> lambda * x`, y fixed, no scalar.
    pub fn x_scaling(lambda: &BigRational) -> Self {
        Gl2Transform {
            a: lambda.clone(),
            b: BigRational::zero(),
            c: BigRational::zero(),
            d: BigRational::one(),
            scalar: BigRational::one(),
        }
    }

    pub fn with_scalar(mut self, scalar: BigRational) -> Result<Self> {
        if scalar.is_zero() {
            return Err(Error::ZeroScalar);
        }
        self.scalar = scalar;
        Ok(self)
    }

    pub fn det(&self) -> BigRational {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn scalar(&self) -> &BigRational {
        &self.scalar
    }

    /// Composite transformation: applying `self` and then `next` to a form
    /// equals applying `self.then(next)` once. Substitution acts
    /// contravariantly, so the composite matrix is `self * next`.
    pub fn then(&self, next: &Gl2Transform) -> Gl2Transform {
        Gl2Transform {
            a: &self.a * &next.a + &self.b * &next.c,
            b: &self.a * &next.b + &self.b * &next.d,
            c: &self.c * &next.a + &self.d * &next.c,
            d: &self.c * &next.b + &self.d * &next.d,
            scalar: &self.scalar * &next.scalar,
        }
    }
}

/// Coefficient rows of `(a x + b y)^k` for k = 0..=n, ascending in x.
fn power_table(a: &BigRational, b: &BigRational, n: usize) -> Vec<Vec<BigRational>> {
    let mut table = Vec::with_capacity(n + 1);
    table.push(vec![BigRational::one()]);
    for k in 0..n {
        let prev = &table[k];
        let mut next = vec![BigRational::zero(); k + 2];
        for (u, cu) in prev.iter().enumerate() {
            if cu.is_zero() {
                continue;
            }
            next[u + 1] += cu * a;
            next[u] += cu * b;
        }
        table.push(next);
    }
    table
}

/// Homogeneous resultant of two binary forms given by ascending coefficient
/// lists (degree = len - 1), via the Sylvester determinant. Handles
/// vanishing leading coefficients correctly by construction.
fn sylvester_resultant(a: &[BigRational], b: &[BigRational]) -> BigRational {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(size);
    let a_desc: Vec<&BigRational> = a.iter().rev().collect();
    let b_desc: Vec<&BigRational> = b.iter().rev().collect();
    for i in 0..n {
        let mut row = vec![BigRational::zero(); size];
        for (k, c) in a_desc.iter().enumerate() {
            row[i + k] = (*c).clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigRational::zero(); size];
        for (k, c) in b_desc.iter().enumerate() {
            row[i + k] = (*c).clone();
        }
        rows.push(row);
    }
    determinant(rows)
}

fn determinant(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pv;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}
