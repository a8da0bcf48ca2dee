//! Sparse integer polynomials in `x` (arity 1) or `x, y` (arity 2).

mod parse;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::padic::binomial;

pub use parse::{parse_poly, MAX_EXPONENT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arity {
    One = 1,
    Two = 2,
}

impl Arity {
    /// Number of variables.
    pub fn vars(self) -> usize {
        self as usize
    }
}

/// Exponent pair `(e_x, e_y)`.
///
/// Ordered graded-lexicographically, largest first: higher total degree
/// sorts earlier, ties broken by the larger power of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(self) -> u32 {
        self.x + self.y
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| other.x.cmp(&self.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with non-zero `BigInt` coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
    arity: Arity,
}

/// The six coefficients of `a x^2 + b y^2 + c xy + d x + e y + g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticCoefficients {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
    pub e: BigInt,
    pub g: BigInt,
}

impl QuadraticCoefficients {
    pub fn new(a: i64, b: i64, c: i64, d: i64, e: i64, g: i64) -> Self {
        QuadraticCoefficients {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
            e: e.into(),
            g: g.into(),
        }
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::from_terms(
            Arity::Two,
            [
                (Monomial::new(2, 0), self.a.clone()),
                (Monomial::new(0, 2), self.b.clone()),
                (Monomial::new(1, 1), self.c.clone()),
                (Monomial::new(1, 0), self.d.clone()),
                (Monomial::new(0, 1), self.e.clone()),
                (Monomial::ONE, self.g.clone()),
            ],
        )
    }
}

impl Polynomial {
    pub fn zero(arity: Arity) -> Self {
        Polynomial {
            terms: BTreeMap::new(),
            arity,
        }
    }

    pub fn constant(arity: Arity, c: impl Into<BigInt>) -> Self {
        Self::from_terms(arity, [(Monomial::ONE, c.into())])
    }

    /// Builds a polynomial, summing repeated monomials and dropping zeros.
    ///
    /// Panics if a `y` exponent is given for arity 1.
    pub fn from_terms(arity: Arity, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut poly = Polynomial::zero(arity);
        for (m, c) in terms {
            assert!(arity == Arity::Two || m.y == 0, "y exponent in a univariate polynomial");
            poly.add_term(m, c);
        }
        poly
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// `x` in the given arity.
    pub fn x(arity: Arity) -> Self {
        Self::from_terms(arity, [(Monomial::new(1, 0), BigInt::one())])
    }

    /// `y` (arity 2).
    pub fn y() -> Self {
        Self::from_terms(Arity::Two, [(Monomial::new(0, 1), BigInt::one())])
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical (graded lexicographic, descending) order.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigInt)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, x: u32, y: u32) -> BigInt {
        self.terms.get(&Monomial::new(x, y)).cloned().unwrap_or_default()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Reinterprets the polynomial in another arity. Widening is always
    /// possible; narrowing requires that `y` does not occur.
    pub fn with_arity(&self, arity: Arity) -> Result<Polynomial> {
        if arity == Arity::One && self.terms.keys().any(|m| m.y > 0) {
            return Err(Error::ArityMismatch { expected: 1, found: 2 });
        }
        Ok(Polynomial {
            terms: self.terms.clone(),
            arity,
        })
    }

    fn check_point(&self, point: &[BigInt]) -> Result<()> {
        if point.len() != self.arity.vars() {
            return Err(Error::ArityMismatch {
                expected: self.arity.vars(),
                found: point.len(),
            });
        }
        Ok(())
    }

    /// Exact value at an integer point.
    pub fn eval_exact(&self, point: &[BigInt]) -> Result<BigInt> {
        self.check_point(point)?;
        if let Some(v) = self.eval_i128(point) {
            return Ok(BigInt::from(v));
        }
        let x = &point[0];
        let zero = BigInt::zero();
        let y = point.get(1).unwrap_or(&zero);
        let mut acc = BigInt::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            if m.x > 0 {
                term *= num_traits::pow(x.clone(), m.x as usize);
            }
            if m.y > 0 {
                term *= num_traits::pow(y.clone(), m.y as usize);
            }
            acc += term;
        }
        Ok(acc)
    }

    // Checked machine-word evaluation; `None` on any overflow.
    fn eval_i128(&self, point: &[BigInt]) -> Option<i128> {
        let x = point[0].to_i128()?;
        let y = match point.get(1) {
            Some(v) => v.to_i128()?,
            None => 0,
        };
        let mut acc: i128 = 0;
        for (m, c) in &self.terms {
            let mut term = c.to_i128()?;
            term = term.checked_mul(checked_ipow(x, m.x)?)?;
            term = term.checked_mul(checked_ipow(y, m.y)?)?;
            acc = acc.checked_add(term)?;
        }
        Some(acc)
    }

    /// Value at `point` reduced into `[0, modulus)`, with every intermediate
    /// reduced modulo `modulus`.
    pub fn eval_mod(&self, point: &[BigInt], modulus: &BigInt) -> Result<BigInt> {
        self.check_point(point)?;
        if *modulus < BigInt::from(2) {
            return Err(Error::ModulusTooSmall);
        }
        Ok(self.reduce_mod(modulus).eval(point))
    }

    /// Coefficients reduced modulo `modulus`, ready for repeated evaluation.
    pub fn reduce_mod(&self, modulus: &BigInt) -> ReducedPolynomial {
        ReducedPolynomial::new(self, modulus)
    }

    /// Divided (Hasse) derivative `D^(tx, ty) f = (∂x^tx ∂y^ty f) / (tx! ty!)`.
    pub fn hasse_derivative(&self, tx: u32, ty: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.arity);
        for (m, c) in &self.terms {
            if m.x < tx || m.y < ty {
                continue;
            }
            let scale = binomial(m.x as u64, tx as u64) * binomial(m.y as u64, ty as u64);
            out.add_term(Monomial::new(m.x - tx, m.y - ty), c * BigInt::from(scale));
        }
        out
    }

    pub fn partial_x(&self) -> Polynomial {
        self.hasse_derivative(1, 0)
    }

    pub fn partial_y(&self) -> Polynomial {
        self.hasse_derivative(0, 1)
    }

    /// `a x^2 + b y^2 + c xy + d x + e y + g` coefficients.
    pub fn extract_quadratic(&self) -> Result<QuadraticCoefficients> {
        if let Some(deg) = self.total_degree().filter(|&d| d > 2) {
            return Err(Error::DegreeTooHigh(deg));
        }
        Ok(QuadraticCoefficients {
            a: self.coeff(2, 0),
            b: self.coeff(0, 2),
            c: self.coeff(1, 1),
            d: self.coeff(1, 0),
            e: self.coeff(0, 1),
            g: self.coeff(0, 0),
        })
    }
}

fn checked_ipow(base: i128, exp: u32) -> Option<i128> {
    let mut acc: i128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// `∂f/∂x · ∂g/∂y − ∂f/∂y · ∂g/∂x`.
pub fn jacobian_determinant(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    for p in [f, g] {
        if p.arity != Arity::Two {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: p.arity.vars(),
            });
        }
    }
    Ok(&(&f.partial_x() * &g.partial_y()) - &(&f.partial_y() * &g.partial_x()))
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.arity.max(rhs.arity));
        for (m, c) in self.terms.iter().chain(rhs.terms.iter()) {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
            arity: self.arity,
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.arity.max(rhs.arity));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(Monomial::new(ma.x + mb.x, ma.y + mb.y), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    /// Canonical form: graded lexicographic order, `x` before `y`, `*`
    /// between factors, signs folded into the separators.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.sign() == Sign::Minus;
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str("-")?,
                (_, false) => f.write_str("+")?,
            }
            let magnitude = c.abs();
            let mut wrote = false;
            if !magnitude.is_one() || *m == Monomial::ONE {
                write!(f, "{magnitude}")?;
                wrote = true;
            }
            for (name, exp) in [('x', m.x), ('y', m.y)] {
                if exp == 0 {
                    continue;
                }
                if wrote {
                    f.write_str("*")?;
                }
                if exp == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{exp}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

/// A polynomial with coefficients reduced modulo a fixed modulus.
///
/// Moduli below 2^64 are evaluated in machine words with 128-bit products;
/// larger moduli fall back to big integers.
#[derive(Debug, Clone)]
pub struct ReducedPolynomial {
    repr: Reduced,
    arity: Arity,
}

#[derive(Debug, Clone)]
enum Reduced {
    Word {
        modulus: u64,
        terms: Vec<(Monomial, u64)>,
    },
    Big {
        modulus: BigInt,
        terms: Vec<(Monomial, BigInt)>,
    },
}

impl ReducedPolynomial {
    fn new(poly: &Polynomial, modulus: &BigInt) -> Self {
        let repr = match modulus.to_u64() {
            Some(m) => Reduced::Word {
                modulus: m,
                terms: poly
                    .terms
                    .iter()
                    .map(|(mono, c)| (*mono, c.mod_floor(modulus).to_u64().expect("reduced below u64 modulus")))
                    .filter(|(_, c)| *c != 0)
                    .collect(),
            },
            None => Reduced::Big {
                modulus: modulus.clone(),
                terms: poly
                    .terms
                    .iter()
                    .map(|(mono, c)| (*mono, c.mod_floor(modulus)))
                    .filter(|(_, c)| !c.is_zero())
                    .collect(),
            },
        };
        ReducedPolynomial {
            repr,
            arity: poly.arity,
        }
    }

    pub fn modulus(&self) -> BigInt {
        match &self.repr {
            Reduced::Word { modulus, .. } => BigInt::from(*modulus),
            Reduced::Big { modulus, .. } => modulus.clone(),
        }
    }

    /// Value modulo the modulus, in `[0, modulus)`. The point must have the
    /// polynomial's arity.
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        debug_assert_eq!(point.len(), self.arity.vars());
        match &self.repr {
            Reduced::Word { modulus, terms } => {
                let m_big = BigInt::from(*modulus);
                let reduce = |v: &BigInt| -> u64 {
                    match v.to_u64() {
                        Some(small) => small % modulus,
                        None => v.mod_floor(&m_big).to_u64().expect("reduced below u64 modulus"),
                    }
                };
                let x = reduce(&point[0]);
                let y = point.get(1).map(reduce).unwrap_or(0);
                BigInt::from(eval_word(terms, x, y, *modulus))
            }
            Reduced::Big { modulus, terms } => {
                let x = point[0].mod_floor(modulus);
                let y = point.get(1).map(|v| v.mod_floor(modulus)).unwrap_or_default();
                let mut acc = BigInt::zero();
                for (m, c) in terms {
                    let term =
                        c * x.modpow(&BigInt::from(m.x), modulus) % modulus * y.modpow(&BigInt::from(m.y), modulus);
                    acc = (acc + term) % modulus;
                }
                acc
            }
        }
    }

    /// Machine-word evaluation for residues already reduced below a `u64`
    /// modulus; `None` if the modulus does not fit a word.
    pub fn eval_word(&self, x: u64, y: u64) -> Option<u64> {
        match &self.repr {
            Reduced::Word { modulus, terms } => Some(eval_word(terms, x % modulus, y % modulus, *modulus)),
            Reduced::Big { .. } => None,
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(base: u64, mut exp: u32, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut b = base;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

fn eval_word(terms: &[(Monomial, u64)], x: u64, y: u64, modulus: u64) -> u64 {
    let mut acc: u64 = 0;
    for (mono, c) in terms {
        let mut term = *c;
        if mono.x > 0 {
            term = mul_mod(term, pow_mod(x, mono.x, modulus), modulus);
        }
        if mono.y > 0 {
            term = mul_mod(term, pow_mod(y, mono.y, modulus), modulus);
        }
        acc = ((acc as u128 + term as u128) % modulus as u128) as u64;
    }
    acc
}
