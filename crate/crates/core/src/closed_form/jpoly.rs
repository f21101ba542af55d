//! Exact skewed Bhattacharyya integrals `J_a(chi) = ∫ p^a q^{1-a}` for
//! integer `a ≥ 2`.
//!
//! For the standard pair `(0, 1)`, `(0, λ)`:
//!
//! ```text
//! J_a = (1/π) Σ_{i=0}^{a-1} binom(a-1, i) B(i + 1/2, a - i - 1/2) λ^{a-1-2i}
//! ```
//!
//! The coefficients are symmetric under `i ↔ a-1-i`, so pairing terms gives
//! `(λ^m + λ^{-m})/2 = T_m(y)` with `y = (λ + 1/λ)/2 = 1 + chi`, a Chebyshev
//! polynomial. Every coefficient is a dyadic rational, so `J_a(chi)` and the
//! power-chi divergences built from it can be evaluated *exactly* at any
//! floating-point `chi`.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest order accepted by the coefficient-list API.
pub const MAX_POLY_ORDER: u32 = 30;

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// `Γ(k + 1/2) / √π = (2k)! / (4^k k!)` as an exact rational.
fn gamma_half_over_sqrt_pi(k: usize) -> BigRational {
    let mut num = BigInt::one();
    for j in 1..=(2 * k) {
        num *= BigInt::from(j);
    }
    let mut den = BigInt::one() << (2 * k);
    for j in 1..=k {
        den *= BigInt::from(j);
    }
    BigRational::new(num, den)
}

/// `B(i + 1/2, j + 1/2) / π = Γ(i+1/2) Γ(j+1/2) / (π Γ(i+j+1))`.
fn beta_half_over_pi(i: usize, j: usize) -> BigRational {
    let mut fact = BigInt::one();
    for k in 1..=(i + j) {
        fact *= BigInt::from(k);
    }
    gamma_half_over_sqrt_pi(i) * gamma_half_over_sqrt_pi(j) / BigRational::from_integer(fact)
}

/// Coefficients `c_{a,i} = binom(a-1, i) B(i+1/2, a-i-1/2)/π`, `i = 0..a-1`.
fn pair_coefficients(a: usize) -> Vec<BigRational> {
    let row = binomial_row(a - 1);
    (0..a)
        .map(|i| BigRational::from_integer(row[i].clone()) * beta_half_over_pi(i, a - 1 - i))
        .collect()
}

/// Chebyshev polynomials `T_m(1 + t)` as integer coefficient lists in `t`.
fn chebyshev_shifted(max_m: usize) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = vec![vec![BigInt::one()], vec![BigInt::one(), BigInt::one()]];
    for m in 1..max_m {
        // T_{m+1} = 2(1 + t) T_m - T_{m-1}
        let tm = &out[m];
        let tp = &out[m - 1];
        let mut next = vec![BigInt::zero(); tm.len() + 1];
        for (k, c) in tm.iter().enumerate() {
            next[k] += c * 2;
            next[k + 1] += c * 2;
        }
        for (k, c) in tp.iter().enumerate() {
            next[k] -= c;
        }
        out.push(next);
    }
    out.truncate(max_m + 1);
    out
}

/// Exact coefficients of `J_a(t)` in ascending powers of `t = chi`.
///
/// Degree `a - 1`; `J_a(0) = 1`. Orders above [`MAX_POLY_ORDER`] are refused.
pub fn j_polynomial(a: u32) -> Result<Vec<BigRational>> {
    if a < 2 {
        return Err(Error::Domain(format!("J_a needs a >= 2, got {a}")));
    }
    if a > MAX_POLY_ORDER {
        return Err(Error::Unsupported(format!("J_a coefficient list capped at a = {MAX_POLY_ORDER}, got {a}")));
    }
    let a = a as usize;
    let coeffs = pair_coefficients(a);
    let cheb = chebyshev_shifted(a - 1);
    let mut poly = vec![BigRational::zero(); a];
    for (i, c) in coeffs.iter().enumerate() {
        let m = (a as isize - 1 - 2 * i as isize).unsigned_abs();
        for (k, t) in cheb[m].iter().enumerate() {
            poly[k] += c * BigRational::from_integer(t.clone());
        }
    }
    Ok(poly)
}

/// Exact coefficients of the power-chi divergence
/// `D_{chi,n} = Σ_i binom(n, i) (-1)^{n-i} J_i` in powers of `chi`.
pub fn chi_power_polynomial(n: u32) -> Result<Vec<BigRational>> {
    if !(2..=MAX_POLY_ORDER).contains(&n) {
        return Err(Error::Unsupported(format!("power-chi order must lie in [2, {MAX_POLY_ORDER}], got {n}")));
    }
    let n = n as usize;
    let row = binomial_row(n);
    let mut poly = vec![BigRational::zero(); n];
    for (i, b) in row.iter().enumerate() {
        let sign = if (n - i) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        let w = BigRational::from_integer(b * sign);
        if i <= 1 {
            poly[0] += w;
        } else {
            for (k, c) in j_polynomial(i as u32)?.iter().enumerate() {
                poly[k] += &w * c;
            }
        }
    }
    Ok(poly)
}

/// Evaluates an exact polynomial at `x` in floating point (Horner).
pub fn eval_f64(poly: &[BigRational], x: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
}

/// Exact binary rational `mant · 2^exp`.
#[derive(Debug, Clone)]
struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    fn from_int(v: BigInt) -> Self {
        Self { mant: v, exp: 0 }
    }

    fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            return Self::from_int(BigInt::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { Sign::Plus } else { Sign::Minus };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp_bits == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp_bits - 1075) };
        Self { mant: BigInt::from_biguint(sign, BigUint::from(m)), exp: e }
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        let (lo, hi) = if self.exp <= other.exp { (self, other) } else { (other, self) };
        let shift = (hi.exp - lo.exp) as usize;
        Dyadic { mant: &lo.mant + (&hi.mant << shift), exp: lo.exp }
    }

    fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic { mant: &self.mant * &other.mant, exp: self.exp + other.exp }
    }

    fn scale_int(&self, k: &BigInt) -> Dyadic {
        Dyadic { mant: &self.mant * k, exp: self.exp }
    }

    fn shift(&self, by: i64) -> Dyadic {
        Dyadic { mant: self.mant.clone(), exp: self.exp + by }
    }

    fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let mag = self.mant.magnitude();
        let bits = mag.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = (mag >> drop as usize).to_f64().unwrap_or(f64::NAN);
        let v = ldexp(top, self.exp + drop);
        if self.mant.is_negative() {
            -v
        } else {
            v
        }
    }
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Exact `J_a(chi)` for `a = 0..=max_order` and power-chi divergences
/// `D_{chi,n}` for `n = 0..=max_order`, rounded once to `f64`.
///
/// `J_0 = J_1 = 1`. The alternating binomial sums defining `D_{chi,n}` cancel
/// catastrophically in floating point; here they are exact.
#[derive(Debug, Clone)]
pub struct ExactChiPowers {
    chi: f64,
    j: Vec<f64>,
    d: Vec<f64>,
}

impl ExactChiPowers {
    /// Evaluates everything up to `max_order` at the given `chi ≥ 0`.
    pub fn new(chi: f64, max_order: usize) -> Result<Self> {
        if !(chi >= 0.0 && chi.is_finite()) {
            return Err(Error::Domain(format!("chi must be finite and >= 0, got {chi}")));
        }
        let nmax = max_order.max(1);
        let y = Dyadic::from_int(BigInt::one()).add(&Dyadic::from_f64(chi));
        let two_y = y.shift(1);
        // Chebyshev values T_m(y).
        let mut cheb = vec![Dyadic::from_int(BigInt::one()), y.clone()];
        for m in 1..nmax {
            let next = two_y.mul(&cheb[m]).add(&cheb[m - 1].scale_int(&-BigInt::one()));
            cheb.push(next);
        }
        // Central binomials B_k = binom(2k, k).
        let mut central = vec![BigInt::one()];
        for k in 1..nmax {
            let prev = &central[k - 1];
            central.push(prev * BigInt::from(2 * (2 * k - 1)) / BigInt::from(k));
        }
        let mut j_exact = vec![Dyadic::from_int(BigInt::one()), Dyadic::from_int(BigInt::one())];
        for a in 2..=nmax {
            // c_{a,i} = B_i B_{a-1-i} / 4^{a-1}; pair i with a-1-i.
            let mut acc = Dyadic::from_int(BigInt::zero());
            for i in 0..a {
                let jj = a - 1 - i;
                if i > jj {
                    break;
                }
                let m = jj - i;
                let mut w = &central[i] * &central[jj];
                if i != jj {
                    w *= 2;
                }
                acc = acc.add(&cheb[m].scale_int(&w));
            }
            j_exact.push(acc.shift(-2 * (a as i64 - 1)));
        }
        let mut d = Vec::with_capacity(nmax + 1);
        let mut row = vec![BigInt::one()];
        for n in 0..=nmax {
            if n > 0 {
                let mut next = vec![BigInt::one(); n + 1];
                for k in 1..n {
                    next[k] = &row[k - 1] + &row[k];
                }
                row = next;
            }
            let mut acc = Dyadic::from_int(BigInt::zero());
            for (i, b) in row.iter().enumerate() {
                let w = if (n - i) % 2 == 0 { b.clone() } else { -b.clone() };
                acc = acc.add(&j_exact[i].scale_int(&w));
            }
            d.push(acc.to_f64());
        }
        let j = j_exact.iter().map(Dyadic::to_f64).collect();
        Ok(Self { chi, j, d })
    }

    /// The `chi` the values were computed at.
    pub fn chi(&self) -> f64 {
        self.chi
    }

    /// Highest available order.
    pub fn max_order(&self) -> usize {
        self.d.len() - 1
    }

    /// `J_a(chi)`.
    pub fn j(&self, a: usize) -> f64 {
        self.j[a]
    }

    /// `D_{chi,n}(chi)`.
    pub fn chi_power(&self, n: usize) -> f64 {
        self.d[n]
    }
}
