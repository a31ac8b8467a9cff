//! Dense univariate and bivariate polynomials over the complex numbers.
//!
//! `UniPoly` stores `c[k]` for `z^k`; `BiPoly` stores `c[j][k]` for
//! `z1^j z2^k`. Both trim trailing coefficients whose modulus is at most
//! [`ZERO_TRIM`] times the largest coefficient modulus, so degrees stay
//! honest after cancellations such as `p~ - z1 p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Cpx = Complex64;

/// Relative threshold below which trailing coefficients are dropped.
pub const ZERO_TRIM: f64 = 1e-13;

const C0: Cpx = Cpx::new(0.0, 0.0);

/// `e^{i alpha}`, exact at integer multiples of `pi/2`.
pub fn cis(alpha: f64) -> Cpx {
    let quarter = alpha / std::f64::consts::FRAC_PI_2;
    let r = quarter.round();
    if (quarter - r).abs() < 1e-12 {
        match (r as i64).rem_euclid(4) {
            0 => Cpx::new(1.0, 0.0),
            1 => Cpx::new(0.0, 1.0),
            2 => Cpx::new(-1.0, 0.0),
            _ => Cpx::new(0.0, -1.0),
        }
    } else {
        Cpx::from_polar(1.0, alpha)
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(t: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let x = t.rem_euclid(TAU);
    if x > PI {
        x - TAU
    } else {
        x
    }
}

fn max_modulus<'a>(it: impl IntoIterator<Item = &'a Cpx>) -> f64 {
    it.into_iter().fold(0.0, |m, c| m.max(c.norm()))
}

fn check_finite(c: &Cpx) -> Result<()> {
    if c.re.is_finite() && c.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!("non-finite coefficient {c}")))
    }
}

// ---------------------------------------------------------------------------
// UniPoly
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Default, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Cpx>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Cpx>) -> Self {
        let max = max_modulus(&coeffs);
        if max == 0.0 {
            coeffs.clear();
        } else {
            while coeffs.last().is_some_and(|c| c.norm() <= ZERO_TRIM * max) {
                coeffs.pop();
            }
        }
        UniPoly { coeffs }
    }

    pub fn try_new(coeffs: Vec<Cpx>) -> Result<Self> {
        coeffs.iter().try_for_each(check_finite)?;
        Ok(Self::new(coeffs))
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Cpx::new(x, 0.0)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Cpx) -> Self {
        Self::new(vec![c])
    }

    /// `c z^k`
    pub fn monomial(k: usize, c: Cpx) -> Self {
        let mut v = vec![C0; k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Cpx]) -> Self {
        roots.iter().fold(Self::constant(Cpx::new(1.0, 0.0)), |acc, &r| {
            acc * UniPoly::new(vec![-r, Cpx::new(1.0, 0.0)])
        })
    }

    pub fn coeffs(&self) -> &[Cpx] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Cpx {
        self.coeffs.get(k).copied().unwrap_or(C0)
    }

    /// `None` encodes the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Cpx {
        self.coeffs.last().copied().unwrap_or(C0)
    }

    pub fn max_abs(&self) -> f64 {
        max_modulus(&self.coeffs)
    }

    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn eval(&self, z: Cpx) -> Cpx {
        self.coeffs.iter().rev().fold(C0, |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Cpx) -> (Cpx, Cpx) {
        let mut v = C0;
        let mut d = C0;
        for &c in self.coeffs.iter().rev() {
            d = d * z + v;
            v = v * z + c;
        }
        (v, d)
    }

    /// `sum |c_k| |z|^k`, the natural scale for rounding error of `eval`.
    pub fn eval_abs(&self, z: Cpx) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, s: Cpx) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![C0; k];
        v.extend_from_slice(&self.coeffs);
        UniPoly { coeffs: v }
    }

    /// Reflection at declared degree `n`: `z^n conj(q(1/conj z))`.
    pub fn reflect(&self, n: usize) -> Result<Self> {
        match self.degree() {
            None => Ok(Self::zero()),
            Some(d) if d > n => Err(Error::DegreeMismatch {
                declared: (0, n),
                actual: (0, d),
            }),
            Some(_) => Ok(Self::new((0..=n).map(|k| self.coeff(n - k).conj()).collect())),
        }
    }

    /// `q(a z + b)`.
    pub fn compose_linear(&self, a: Cpx, b: Cpx) -> Self {
        let lin = UniPoly::new(vec![b, a]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, &c| acc * lin.clone() + Self::constant(c))
    }

    pub fn to_json(&self) -> UniPolyJson {
        UniPolyJson {
            degree: self.degree().unwrap_or(0),
            coeffs: if self.is_zero() {
                vec![[0.0, 0.0]]
            } else {
                self.coeffs.iter().map(|c| [c.re, c.im]).collect()
            },
        }
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![C0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        UniPoly::new(v)
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        self.clone() + rhs.clone()
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self.clone() - rhs.clone()
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        self.clone() * rhs.clone()
    }
}

// ---------------------------------------------------------------------------
// BiPoly
// ---------------------------------------------------------------------------

/// Bivariate polynomial; `rows[j]` holds the coefficients of `z1^j` as a
/// dense list in powers of `z2`, all rows padded to the same length.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BiPoly {
    rows: Vec<Vec<Cpx>>,
}

impl BiPoly {
    pub fn new(mut rows: Vec<Vec<Cpx>>) -> Self {
        let max = max_modulus(rows.iter().flatten());
        if max == 0.0 {
            return BiPoly { rows: Vec::new() };
        }
        let thr = ZERO_TRIM * max;
        let big = |c: &Cpx| c.norm() > thr;
        let m = rows
            .iter()
            .rposition(|r| r.iter().any(big))
            .expect("nonzero polynomial has a nonzero row");
        let n = rows
            .iter()
            .filter_map(|r| r.iter().rposition(big))
            .max()
            .expect("nonzero polynomial has a nonzero entry");
        rows.truncate(m + 1);
        for r in rows.iter_mut() {
            r.resize(n + 1, C0);
        }
        BiPoly { rows }
    }

    pub fn try_new(rows: Vec<Vec<Cpx>>) -> Result<Self> {
        rows.iter().flatten().try_for_each(check_finite)?;
        Ok(Self::new(rows))
    }

    /// Real coefficients given as `rows[j][k]` for `z1^j z2^k`.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Cpx::new(x, 0.0)).collect())
                .collect(),
        )
    }

    /// Builds `sum_j z1^j q_j(z2)`.
    pub fn from_z1_rows(rows: &[UniPoly]) -> Self {
        Self::new(rows.iter().map(|q| q.coeffs().to_vec()).collect())
    }

    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    pub fn constant(c: Cpx) -> Self {
        Self::new(vec![vec![c]])
    }

    /// `c z1^j z2^k`
    pub fn monomial(j: usize, k: usize, c: Cpx) -> Self {
        let mut rows = vec![vec![C0; k + 1]; j + 1];
        rows[j][k] = c;
        Self::new(rows)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// `(deg_z1, deg_z2)`; `None` for the zero polynomial.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        let m = self.rows.len().checked_sub(1)?;
        Some((m, self.rows[0].len() - 1))
    }

    pub fn coeff(&self, j: usize, k: usize) -> Cpx {
        self.rows
            .get(j)
            .and_then(|r| r.get(k))
            .copied()
            .unwrap_or(C0)
    }

    pub fn rows(&self) -> &[Vec<Cpx>] {
        &self.rows
    }

    /// Coefficient of `z1^j` as a polynomial in `z2`.
    pub fn z1_row(&self, j: usize) -> UniPoly {
        self.rows
            .get(j)
            .map(|r| UniPoly::new(r.clone()))
            .unwrap_or_default()
    }

    pub fn max_abs(&self) -> f64 {
        max_modulus(self.rows.iter().flatten())
    }

    /// Sum of coefficient moduli; bounds `|p|` on the closed bidisk.
    pub fn norm1(&self) -> f64 {
        self.rows.iter().flatten().map(|c| c.norm()).sum()
    }

    pub fn eval(&self, z1: Cpx, z2: Cpx) -> Cpx {
        self.rows.iter().rev().fold(C0, |acc, row| {
            acc * z1 + row.iter().rev().fold(C0, |a, &c| a * z2 + c)
        })
    }

    /// `(d/dz1, d/dz2)` at a point.
    pub fn gradient(&self, z1: Cpx, z2: Cpx) -> (Cpx, Cpx) {
        (
            self.derivative_z1().eval(z1, z2),
            self.derivative_z2().eval(z1, z2),
        )
    }

    pub fn derivative_z1(&self) -> Self {
        Self::new(
            self.rows
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, r)| r.iter().map(|&c| c * j as f64).collect())
                .collect(),
        )
    }

    pub fn derivative_z2(&self) -> Self {
        Self::new(
            self.rows
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .skip(1)
                        .map(|(k, &c)| c * k as f64)
                        .collect()
                })
                .collect(),
        )
    }

    /// `z2 := lambda`, leaving a polynomial in `z1`.
    pub fn restrict_fiber(&self, lambda: Cpx) -> UniPoly {
        UniPoly::new(
            self.rows
                .iter()
                .map(|r| r.iter().rev().fold(C0, |a, &c| a * lambda + c))
                .collect(),
        )
    }

    /// `z1 := mu`, leaving a polynomial in `z2`.
    pub fn restrict_z1(&self, mu: Cpx) -> UniPoly {
        let n = self.rows.first().map_or(0, Vec::len);
        UniPoly::new(
            (0..n)
                .map(|k| self.rows.iter().rev().fold(C0, |a, r| a * mu + r[k]))
                .collect(),
        )
    }

    /// `p = p1(z2) + z1 p2(z2)`.
    pub fn split_p1_p2(&self) -> Result<(UniPoly, UniPoly)> {
        match self.bidegree() {
            Some((m, _)) if m > 1 => Err(Error::Degree(format!(
                "p has degree {m} in z1; the p1/p2 split needs degree <= 1"
            ))),
            _ => Ok((self.z1_row(0), self.z1_row(1))),
        }
    }

    /// Reflection at a declared bidegree `(m, n)`:
    /// `c~[j][k] = conj(c[m-j][n-k])`.
    pub fn reflect(&self, m: usize, n: usize) -> Result<Self> {
        let Some((pm, pn)) = self.bidegree() else {
            return Ok(Self::zero());
        };
        if pm > m || pn > n {
            return Err(Error::DegreeMismatch {
                declared: (m, n),
                actual: (pm, pn),
            });
        }
        Ok(Self::new(
            (0..=m)
                .map(|j| (0..=n).map(|k| self.coeff(m - j, n - k).conj()).collect())
                .collect(),
        ))
    }

    pub fn scale(&self, s: Cpx) -> Self {
        Self::new(
            self.rows
                .iter()
                .map(|r| r.iter().map(|&c| c * s).collect())
                .collect(),
        )
    }

    /// Multiplies by `z1^a z2^b`.
    pub fn shift(&self, a: usize, b: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let n = self.rows[0].len();
        let mut rows = vec![vec![C0; n + b]; a];
        rows.extend(self.rows.iter().map(|r| {
            let mut v = vec![C0; b];
            v.extend_from_slice(r);
            v
        }));
        Self::new(rows)
    }

    /// `p(a1 z1 + b1, a2 z2 + b2)`.
    pub fn compose_linear(&self, a1: Cpx, b1: Cpx, a2: Cpx, b2: Cpx) -> Self {
        let lin1 = BiPoly::new(vec![vec![b1], vec![a1]]);
        let z2_rows: Vec<BiPoly> = self
            .rows
            .iter()
            .map(|r| {
                let q = UniPoly::new(r.clone()).compose_linear(a2, b2);
                BiPoly::new(vec![q.coeffs().to_vec()])
            })
            .collect();
        z2_rows
            .into_iter()
            .rev()
            .fold(BiPoly::zero(), |acc, row| acc * lin1.clone() + row)
    }

    /// Largest coefficient difference, for tolerance comparisons.
    pub fn max_diff(&self, other: &BiPoly) -> f64 {
        let (m1, n1) = self.bidegree().unwrap_or((0, 0));
        let (m2, n2) = other.bidegree().unwrap_or((0, 0));
        let mut d: f64 = 0.0;
        for j in 0..=m1.max(m2) {
            for k in 0..=n1.max(n2) {
                d = d.max((self.coeff(j, k) - other.coeff(j, k)).norm());
            }
        }
        d
    }

    pub fn to_json(&self) -> BiPolyJson {
        self.to_json_at(self.bidegree().unwrap_or((0, 0)))
            .expect("actual bidegree is always admissible")
    }

    /// Serializes padded to a declared bidegree.
    pub fn to_json_at(&self, (m, n): (usize, usize)) -> Result<BiPolyJson> {
        if let Some((pm, pn)) = self.bidegree() {
            if pm > m || pn > n {
                return Err(Error::DegreeMismatch {
                    declared: (m, n),
                    actual: (pm, pn),
                });
            }
        }
        Ok(BiPolyJson {
            bidegree: [m, n],
            coeffs: (0..=m)
                .map(|j| {
                    (0..=n)
                        .map(|k| {
                            let c = self.coeff(j, k);
                            [c.re, c.im]
                        })
                        .collect()
                })
                .collect(),
        })
    }
}

impl Add for BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: BiPoly) -> BiPoly {
        combine(&self, &rhs, |a, b| a + b)
    }
}

impl Sub for BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: BiPoly) -> BiPoly {
        combine(&self, &rhs, |a, b| a - b)
    }
}

impl Neg for BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(Cpx::new(-1.0, 0.0))
    }
}

impl Mul for BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: BiPoly) -> BiPoly {
        let (Some((m1, n1)), Some((m2, n2))) = (self.bidegree(), rhs.bidegree()) else {
            return BiPoly::zero();
        };
        let mut rows = vec![vec![C0; n1 + n2 + 1]; m1 + m2 + 1];
        for (j1, r1) in self.rows.iter().enumerate() {
            for (k1, &a) in r1.iter().enumerate() {
                if a == C0 {
                    continue;
                }
                for (j2, r2) in rhs.rows.iter().enumerate() {
                    for (k2, &b) in r2.iter().enumerate() {
                        rows[j1 + j2][k1 + k2] += a * b;
                    }
                }
            }
        }
        BiPoly::new(rows)
    }
}

impl<'a> Add<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        combine(self, rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        combine(self, rhs, |a, b| a - b)
    }
}

impl<'a> Mul<&'a BiPoly> for &'a BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        self.clone() * rhs.clone()
    }
}

fn combine(a: &BiPoly, b: &BiPoly, f: impl Fn(Cpx, Cpx) -> Cpx) -> BiPoly {
    let m = a.rows.len().max(b.rows.len());
    let n = a
        .rows
        .first()
        .map_or(0, Vec::len)
        .max(b.rows.first().map_or(0, Vec::len));
    BiPoly::new(
        (0..m)
            .map(|j| (0..n).map(|k| f(a.coeff(j, k), b.coeff(j, k))).collect())
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// Display
// ---------------------------------------------------------------------------

fn fmt_coeff(c: Cpx) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: Vec<(Cpx, String)>) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (i, (c, mono)) in terms.into_iter().enumerate() {
        let (sign, c) = if c.im == 0.0 && c.re < 0.0 {
            ("-", -c)
        } else {
            ("+", c)
        };
        if i == 0 {
            if sign == "-" {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        let unit = c == Cpx::new(1.0, 0.0);
        match (unit, mono.is_empty()) {
            (true, true) => write!(f, "1")?,
            (true, false) => write!(f, "{mono}")?,
            (false, true) => write!(f, "{}", fmt_coeff(c))?,
            (false, false) => write!(f, "{}{mono}", fmt_coeff(c))?,
        }
    }
    Ok(())
}

fn power(var: &str, k: usize) -> String {
    match k {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{k}"),
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != C0)
            .map(|(k, &c)| (c, power("z", k)))
            .collect();
        fmt_terms(f, terms)
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (j, r) in self.rows.iter().enumerate() {
            for (k, &c) in r.iter().enumerate() {
                if c != C0 {
                    terms.push((c, format!("{}{}", power("z1", j), power("z2", k))));
                }
            }
        }
        fmt_terms(f, terms)
    }
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

impl Serialize for UniPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// `{"bidegree":[m,n],"coeffs":[[[re,im],...],...]}` with `coeffs[j][k]`
/// the coefficient of `z1^j z2^k`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BiPolyJson {
    pub bidegree: [usize; 2],
    pub coeffs: Vec<Vec<[f64; 2]>>,
}

impl BiPolyJson {
    /// Returns the polynomial together with its declared bidegree.
    pub fn parse(&self) -> Result<(BiPoly, (usize, usize))> {
        let [m, n] = self.bidegree;
        if self.coeffs.len() > m + 1 || self.coeffs.iter().any(|r| r.len() > n + 1) {
            return Err(Error::Input(format!(
                "coefficient matrix does not fit declared bidegree ({m}, {n})"
            )));
        }
        let p = BiPoly::try_new(
            self.coeffs
                .iter()
                .map(|r| r.iter().map(|&[re, im]| Cpx::new(re, im)).collect())
                .collect(),
        )?;
        if let Some((pm, pn)) = p.bidegree() {
            if pm > m || pn > n {
                return Err(Error::DegreeMismatch {
                    declared: (m, n),
                    actual: (pm, pn),
                });
            }
        }
        Ok((p, (m, n)))
    }
}

/// `{"degree":n,"coeffs":[[re,im],...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct UniPolyJson {
    pub degree: usize,
    pub coeffs: Vec<[f64; 2]>,
}

impl UniPolyJson {
    pub fn parse(&self) -> Result<UniPoly> {
        if self.coeffs.len() > self.degree + 1 {
            return Err(Error::Input(format!(
                "{} coefficients exceed declared degree {}",
                self.coeffs.len(),
                self.degree
            )));
        }
        UniPoly::try_new(self.coeffs.iter().map(|&[re, im]| Cpx::new(re, im)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Cpx {
        Cpx::new(re, 0.0)
    }

    #[test]
    fn reflect_example_two_one() {
        // 2 - z1 - z2 at (1,1) -> 2 z1 z2 - z2 - z1
        let p = BiPoly::from_real(&[&[2.0, -1.0], &[-1.0, 0.0]]);
        let pt = p.reflect(1, 1).unwrap();
        assert_eq!(pt, BiPoly::from_real(&[&[0.0, -1.0], &[-1.0, 2.0]]));
    }

    #[test]
    fn reflect_constant_and_zero() {
        let one = BiPoly::constant(c(1.0));
        assert_eq!(one.reflect(0, 0).unwrap(), one);
        assert!(BiPoly::zero().reflect(2, 3).unwrap().is_zero());
        assert!(UniPoly::zero().reflect(4).unwrap().is_zero());
    }

    #[test]
    fn reflect_example_five_one() {
        // 4 - z1 - 3 z2 - z1 z2 + z2^2 at (1,2)
        let p = BiPoly::from_real(&[&[4.0, -3.0, 1.0], &[-1.0, -1.0, 0.0]]);
        let pt = p.reflect(1, 2).unwrap();
        // 4 z1 z2^2 - z2^2 - 3 z1 z2 - z2 + z1
        let want = BiPoly::from_real(&[&[0.0, -1.0, -1.0], &[1.0, -3.0, 4.0]]);
        assert_eq!(pt, want);
    }

    #[test]
    fn reflect_rejects_low_declared_degree() {
        let p = BiPoly::from_real(&[&[1.0, 1.0], &[1.0, 0.0]]);
        assert!(matches!(p.reflect(0, 1), Err(Error::DegreeMismatch { .. })));
        assert!(matches!(
            UniPoly::from_real(&[1.0, 2.0, 3.0]).reflect(1),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn reflect_uni_examples() {
        let q = UniPoly::from_real(&[3.0, -1.0]);
        assert_eq!(q.reflect(1).unwrap(), UniPoly::from_real(&[-1.0, 3.0]));
        let q = UniPoly::from_real(&[-1.0, -1.0]);
        assert_eq!(q.reflect(1).unwrap(), q);
        // declared degree above actual pads with leading zeros
        let q = UniPoly::from_real(&[4.0]);
        assert_eq!(q.reflect(3).unwrap(), UniPoly::monomial(3, c(4.0)));
    }

    #[test]
    fn reflection_conjugates() {
        let q = UniPoly::new(vec![Cpx::new(1.0, 2.0), Cpx::new(0.0, -3.0)]);
        let qt = q.reflect(1).unwrap();
        assert_eq!(qt.coeffs(), &[Cpx::new(0.0, 3.0), Cpx::new(1.0, -2.0)]);
    }

    #[test]
    fn binomial_square() {
        let q = UniPoly::from_real(&[-1.0, 1.0]);
        assert_eq!(&q * &q, UniPoly::from_real(&[1.0, -2.0, 1.0]));
        assert!((q * UniPoly::zero()).is_zero());
        let p = BiPoly::from_real(&[&[1.0, 2.0]]);
        assert!((p * BiPoly::zero()).is_zero());
    }

    #[test]
    fn cancellation_trims_degree() {
        let a = UniPoly::from_real(&[1.0, 2.0, 3.0]);
        let b = UniPoly::from_real(&[0.0, 0.0, 3.0]);
        assert_eq!((a - b).degree(), Some(1));
        let z = UniPoly::from_real(&[1.0, 1.0]);
        assert_eq!((z.clone() - z).degree(), None);
    }

    #[test]
    fn eval_examples() {
        let p = BiPoly::from_real(&[&[2.0, -1.0], &[-1.0, 0.0]]);
        assert_eq!(p.eval(c(1.0), c(1.0)), c(0.0));
        let p = BiPoly::from_real(&[&[5.0, 2.0], &[7.0, 1.0]]);
        assert_eq!(p.eval(c(0.0), c(0.0)), c(5.0));
        let q = UniPoly::from_real(&[16.0, -28.0, 16.0]);
        let root = Cpx::new(7.0, 15f64.sqrt()) / 8.0;
        assert!(q.eval(root).norm() < 1e-10);
    }

    #[test]
    fn restrict_fiber_examples() {
        // 2 - z1 - z2 at z2 = 1 -> 1 - z1
        let p = BiPoly::from_real(&[&[2.0, -1.0], &[-1.0, 0.0]]);
        assert_eq!(p.restrict_fiber(c(1.0)), UniPoly::from_real(&[1.0, -1.0]));
        // constant-term slice
        let p = BiPoly::from_real(&[&[5.0, 2.0], &[7.0, 1.0], &[-3.0, 4.0]]);
        assert_eq!(p.restrict_fiber(c(0.0)), UniPoly::from_real(&[5.0, 7.0, -3.0]));
        // ex23 at z2 = -1: numerator 3 z1 z2 - z1 - z2 -> -4 z1 + 1,
        // denominator 3 - z1 - z2 -> 4 - z1.
        let num = BiPoly::from_real(&[&[0.0, -1.0], &[-1.0, 3.0]]);
        let den = BiPoly::from_real(&[&[3.0, -1.0], &[-1.0, 0.0]]);
        assert_eq!(num.restrict_fiber(c(-1.0)), UniPoly::from_real(&[1.0, -4.0]));
        assert_eq!(den.restrict_fiber(c(-1.0)), UniPoly::from_real(&[4.0, -1.0]));
    }

    #[test]
    fn split_examples() {
        let p = BiPoly::from_real(&[&[4.0, -3.0, 1.0], &[-1.0, -1.0, 0.0]]);
        let (p1, p2) = p.split_p1_p2().unwrap();
        assert_eq!(p1, UniPoly::from_real(&[4.0, -3.0, 1.0]));
        assert_eq!(p2, UniPoly::from_real(&[-1.0, -1.0]));

        // 4 - z1 + z1 z2 - 3 z1 z2^2 - z1 z2^3
        let p = BiPoly::from_real(&[&[4.0, 0.0, 0.0, 0.0], &[-1.0, 1.0, -3.0, -1.0]]);
        let (p1, p2) = p.split_p1_p2().unwrap();
        assert_eq!(p1, UniPoly::from_real(&[4.0]));
        assert_eq!(p2, UniPoly::from_real(&[-1.0, 1.0, -3.0, -1.0]));

        let (p1, p2) = BiPoly::constant(c(2.5)).split_p1_p2().unwrap();
        assert_eq!(p1, UniPoly::from_real(&[2.5]));
        assert!(p2.is_zero());

        let quad = BiPoly::monomial(2, 0, c(1.0));
        assert!(matches!(quad.split_p1_p2(), Err(Error::Degree(_))));
    }

    #[test]
    fn compose_linear_matches_eval() {
        let q = UniPoly::new(vec![Cpx::new(1.0, 1.0), c(-2.0), Cpx::new(0.5, -0.3)]);
        let a = Cpx::new(0.3, 0.7);
        let b = Cpx::new(-1.0, 0.2);
        let r = q.compose_linear(a, b);
        let z = Cpx::new(0.4, -0.9);
        assert!((r.eval(z) - q.eval(a * z + b)).norm() < 1e-12);

        let p = BiPoly::from_real(&[&[1.0, 2.0, -1.0], &[0.5, 0.0, 3.0]]);
        let s = p.compose_linear(a, b, b, a);
        let (z1, z2) = (Cpx::new(0.1, 0.2), Cpx::new(-0.7, 0.4));
        assert!((s.eval(z1, z2) - p.eval(a * z1 + b, b * z2 + a)).norm() < 1e-12);
    }

    #[test]
    fn shift_and_derivatives() {
        let p = BiPoly::from_real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let s = p.shift(1, 2);
        assert_eq!(s.bidegree(), Some((2, 3)));
        assert_eq!(s.coeff(2, 3), c(4.0));
        let d1 = p.derivative_z1();
        assert_eq!(d1, BiPoly::from_real(&[&[3.0, 4.0]]));
        let d2 = p.derivative_z2();
        assert_eq!(d2, BiPoly::from_real(&[&[2.0], &[4.0]]));
        let q = UniPoly::from_real(&[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(q.nth_derivative(2), UniPoly::from_real(&[2.0, 6.0]));
    }

    #[test]
    fn json_round_trip_keeps_declared_bidegree() {
        let p = BiPoly::from_real(&[&[4.0]]);
        let js = p.to_json_at((1, 3)).unwrap();
        assert_eq!(js.bidegree, [1, 3]);
        let (q, decl) = js.parse().unwrap();
        assert_eq!(q, p);
        assert_eq!(decl, (1, 3));
        let bad = BiPolyJson {
            bidegree: [0, 0],
            coeffs: vec![vec![[1.0, 0.0], [2.0, 0.0]]],
        };
        assert!(bad.parse().is_err());
        let nan = BiPolyJson {
            bidegree: [0, 0],
            coeffs: vec![vec![[f64::NAN, 0.0]]],
        };
        assert!(nan.parse().is_err());
    }

    #[test]
    fn cis_is_exact_on_axes() {
        assert_eq!(cis(std::f64::consts::PI), c(-1.0));
        assert_eq!(cis(0.0), c(1.0));
        assert_eq!(cis(-std::f64::consts::FRAC_PI_2), Cpx::new(0.0, -1.0));
        assert!((cis(0.3) - Cpx::from_polar(1.0, 0.3)).norm() < 1e-16);
    }

    #[test]
    fn wrap_angle_range() {
        use std::f64::consts::PI;
        assert_eq!(wrap_angle(-PI), PI);
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn display_is_readable() {
        let p = BiPoly::from_real(&[&[2.0, -1.0], &[-1.0, 0.0]]);
        assert_eq!(p.to_string(), "2 - z2 - z1");
        assert_eq!(UniPoly::from_real(&[16.0, -28.0, 16.0]).to_string(), "16 - 28z + 16z^2");
    }
}
