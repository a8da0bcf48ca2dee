//! Exact p-adic valuations and the classical valuation formulas for
//! factorials, central binomial coefficients and Stirling numbers of the
//! second kind.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A p-adic valuation: a non-negative exponent, or `Infinity` for zero.
///
/// `Finite(_) < Infinity` for every finite value, so `min`/`max` from `Ord`
/// behave as on the extended naturals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinity,
}

impl Valuation {
    pub const ZERO: Valuation = Valuation::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    /// Adds a finite shift; `Infinity` absorbs.
    pub fn shift(self, by: u64) -> Valuation {
        self + Valuation::Finite(by)
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

impl From<u64> for Valuation {
    fn from(v: u64) -> Self {
        Valuation::Finite(v)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("∞"),
        }
    }
}

/// A prime `2 <= p < 2^31`, checked on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u32);

impl Prime {
    pub const TWO: Prime = Prime(2);

    pub fn new(p: u64) -> Result<Prime> {
        if !(2..1 << 31).contains(&p) || !is_prime_u64(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Prime(p as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn pow(self, exp: u32) -> BigInt {
        num_traits::pow(BigInt::from(self.0), exp as usize)
    }

    /// `p^exp` when it fits in a `u64`.
    pub fn pow_u64(self, exp: u32) -> Option<u64> {
        (self.0 as u64).checked_pow(exp)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the bases 2, 3, 5, 7 are exact below
/// 3 215 031 751, which covers every modulus accepted by [`Prime::new`].
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7] {
        if n == small {
            return true;
        }
        if n.is_multiple_of(small) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `v_p(n)`; the sign of `n` is ignored and `v_p(0) = Infinity`.
pub fn vp(n: &BigInt, p: Prime) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinity;
    }
    if p.0 == 2 {
        return Valuation::Finite(n.trailing_zeros().unwrap_or(0));
    }
    if let Some(small) = n.magnitude().to_u64() {
        return vp_u64(small, p);
    }
    let divisor = BigUint::from(p.0);
    let mut m = n.magnitude().clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&divisor);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        m = q;
        v += 1;
    }
}

pub fn vp_u64(mut n: u64, p: Prime) -> Valuation {
    if n == 0 {
        return Valuation::Infinity;
    }
    let p = p.0 as u64;
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    Valuation::Finite(v)
}

/// Sum of the base-`p` digits of `n`.
pub fn digit_sum(n: &BigInt, p: Prime) -> Result<u64> {
    if n.sign() == Sign::Minus {
        return Err(Error::NegativeInput);
    }
    let base = BigUint::from(p.0);
    let mut m = n.magnitude().clone();
    let mut sum = 0u64;
    while !m.is_zero() {
        if let Some(small) = m.to_u64() {
            return Ok(sum + digit_sum_u64(small, p));
        }
        let (q, r) = m.div_rem(&base);
        sum += r.to_u64().unwrap_or(0);
        m = q;
    }
    Ok(sum)
}

pub fn digit_sum_u64(mut n: u64, p: Prime) -> u64 {
    let p = p.0 as u64;
    let mut sum = 0;
    while n > 0 {
        sum += n % p;
        n /= p;
    }
    sum
}

/// `v_p(n!)`, computed both as `Σ floor(n / p^k)` and as
/// `(n - s_p(n)) / (p - 1)`; the two must agree.
pub fn legendre_factorial_valuation(n: u64, p: Prime) -> Result<Valuation> {
    let p64 = p.0 as u128;
    let mut floor_sum: u128 = 0;
    let mut power = p64;
    while power <= n as u128 {
        floor_sum += n as u128 / power;
        power *= p64;
    }
    let digits = digit_sum_u64(n, p) as u128;
    let digit_form = (n as u128 - digits) / (p64 - 1);
    if !(n as u128 - digits).is_multiple_of(p64 - 1) || digit_form != floor_sum {
        return Err(Error::Inconsistent(format!(
            "Legendre formulas disagree for n = {n}, p = {p}: floor sum {floor_sum}, digit form {digit_form}"
        )));
    }
    Ok(Valuation::Finite(floor_sum as u64))
}

/// Default bound below which [`central_binomial_valuation`] recomputes
/// `binom(2n, n)` exactly as a cross-check.
pub const CENTRAL_BINOMIAL_CHECK_BOUND: u64 = 2000;

/// `v_2(binom(2n, n)) = s_2(n)`.
pub fn central_binomial_valuation(n: u64) -> Result<Valuation> {
    central_binomial_valuation_with_bound(n, CENTRAL_BINOMIAL_CHECK_BOUND)
}

pub fn central_binomial_valuation_with_bound(n: u64, check_bound: u64) -> Result<Valuation> {
    let value = Valuation::Finite(n.count_ones() as u64);
    if n <= check_bound {
        let exact = vp(&BigInt::from(binomial(2 * n, n)), Prime::TWO);
        if exact != value {
            return Err(Error::Inconsistent(format!(
                "v_2(C_{n}) = {exact} but s_2({n}) = {value}"
            )));
        }
    }
    Ok(value)
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Stirling number of the second kind `S(n, k)`, by the triangular
/// recurrence run down a single column of length `k + 1`.
pub fn stirling(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    if k == 0 {
        return if n == 0 { BigUint::one() } else { BigUint::zero() };
    }
    let k = k as usize;
    let mut column = vec![BigUint::zero(); k + 1];
    column[0] = BigUint::one();
    for row in 1..=n {
        let top = k.min(row as usize);
        for j in (1..=top).rev() {
            let scaled = &column[j] * j as u64;
            column[j] = &column[j - 1] + scaled;
        }
        column[0] = BigUint::zero();
    }
    column.swap_remove(k)
}

/// `S(n, k)` from the alternating sum `(1/k!) Σ (-1)^i binom(k, i) (k - i)^n`.
pub fn stirling_explicit(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut sum = BigInt::zero();
    for i in 0..=k {
        let term = BigInt::from(binomial(k, i)) * BigInt::from(num_traits::pow(BigUint::from(k - i), n as usize));
        if i % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let (q, r) = sum.div_rem(&BigInt::from(factorial(k)));
    debug_assert!(r.is_zero());
    q.to_biguint().unwrap_or_default()
}

/// Memoized rows of the Stirling triangle.
///
/// The core crate carries no global state; callers that want caching own a
/// table (and wrap it in a lock if it is shared).
#[derive(Debug, Clone)]
pub struct StirlingTable {
    rows: Vec<Vec<BigUint>>,
}

impl Default for StirlingTable {
    fn default() -> Self {
        Self::new()
    }
}

impl StirlingTable {
    pub fn new() -> Self {
        StirlingTable {
            rows: vec![vec![BigUint::one()]],
        }
    }

    pub fn get(&mut self, n: u64, k: u64) -> BigUint {
        if k > n {
            return BigUint::zero();
        }
        let n = n as usize;
        while self.rows.len() <= n {
            let prev = self.rows.last().expect("row 0 is always present");
            let m = prev.len();
            let mut next = vec![BigUint::zero(); m + 1];
            for j in 1..=m {
                let from_prev = if j < m { &prev[j] * j as u64 } else { BigUint::zero() };
                next[j] = &prev[j - 1] + from_prev;
            }
            self.rows.push(next);
        }
        self.rows[n][k as usize].clone()
    }

    pub fn rows_cached(&self) -> usize {
        self.rows.len()
    }
}

/// Closed forms of `v_2(S(n, k))` for `1 <= k <= 4`.
pub fn stirling_valuation_closed_form(n: u64, k: u64) -> Result<Valuation> {
    if !(1..=4).contains(&k) || n < k {
        return Err(Error::ClosedFormRange { n, k });
    }
    let v = match k {
        1 | 2 => 0,
        3 => u64::from(n.is_multiple_of(2)),
        _ => u64::from(n % 2 == 1),
    };
    Ok(Valuation::Finite(v))
}

/// `v_p(S(n, k))` for every `n` in `k..=n_max`, index `i` holding `n = k + i`.
///
/// The column is run modulo `p^e` in machine words; if some entry vanishes
/// modulo `p^e` (valuation at least `e`) the whole pass is repeated with a
/// larger big-integer modulus, so the result is always exact.
pub fn stirling_column_valuations(k: u64, n_max: u64, p: Prime) -> Vec<Valuation> {
    if k == 0 || n_max < k {
        return Vec::new();
    }
    let mut exponent = 0u32;
    while let Some(next) = p.pow_u64(exponent + 1) {
        if next > 1 << 62 {
            break;
        }
        exponent += 1;
    }
    let modulus = p.pow_u64(exponent).expect("fits by construction");
    if let Some(vals) = column_valuations_word(k as usize, n_max, modulus, p) {
        return vals;
    }
    let mut big_exponent = exponent * 4;
    loop {
        if let Some(vals) = column_valuations_big(k as usize, n_max, &p.pow(big_exponent).magnitude().clone(), p) {
            return vals;
        }
        big_exponent *= 2;
    }
}

fn column_valuations_word(k: usize, n_max: u64, modulus: u64, p: Prime) -> Option<Vec<Valuation>> {
    let mut column = vec![0u64; k + 1];
    column[0] = 1 % modulus;
    let mut out = Vec::with_capacity((n_max + 1 - k as u64) as usize);
    for row in 1..=n_max {
        let top = k.min(row as usize);
        for j in (1..=top).rev() {
            let scaled = mul_mod(column[j], j as u64, modulus);
            column[j] = ((column[j - 1] as u128 + scaled as u128) % modulus as u128) as u64;
        }
        column[0] = 0;
        if row >= k as u64 {
            if column[k] == 0 {
                return None;
            }
            out.push(vp_u64(column[k], p));
        }
    }
    Some(out)
}

fn column_valuations_big(k: usize, n_max: u64, modulus: &BigUint, p: Prime) -> Option<Vec<Valuation>> {
    let mut column = vec![BigUint::zero(); k + 1];
    column[0] = BigUint::one();
    let mut out = Vec::with_capacity((n_max + 1 - k as u64) as usize);
    for row in 1..=n_max {
        let top = k.min(row as usize);
        for j in (1..=top).rev() {
            let next = (&column[j - 1] + &column[j] * j as u64) % modulus;
            column[j] = next;
        }
        column[0] = BigUint::zero();
        if row >= k as u64 {
            if column[k].is_zero() {
                return None;
            }
            out.push(vp(&BigInt::from(column[k].clone()), p));
        }
    }
    Some(out)
}
