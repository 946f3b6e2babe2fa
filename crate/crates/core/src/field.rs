//! Prime fields `F_p` and their extensions `F_{p^m}`.
//!
//! Elements are stored as integers `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` over
//! the polynomial basis `1, y, ..., y^{m-1}` of `F_p[y]/(modulus)`. The base
//! field `F_p` is the set of elements with index `< p`. Multiplication goes
//! through discrete log tables built once per tower, so towers are meant for
//! desk-scale orders (at most [`MAX_ORDER`] elements).
//!
//! The F_q-basis `alpha_1..alpha_m` used to write vectors as matrices is kept
//! separately: the arithmetic never depends on it.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// An element of a [`FieldTower`], addressed by its base-`p` digit index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar(u32);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    pub const fn from_index(index: u32) -> Self {
        Scalar(index)
    }

    pub const fn index(self) -> u32 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The pair `F_p ⊂ F_{p^m}` together with a fixed `F_p`-basis of `F_{p^m}`.
#[derive(Clone)]
pub struct FieldTower {
    p: u32,
    m: usize,
    order: u32,
    modulus: Vec<u32>,
    pow_p: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    basis: Vec<Scalar>,
    // rows: coordinates of the polynomial-basis vectors in the alpha basis
    basis_inv: Vec<Vec<u32>>,
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.m == other.m
            && self.modulus == other.modulus
            && self.basis == other.basis
    }
}

impl Eq for FieldTower {}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo the monic polynomial `b` over `F_p`
/// (coefficients little-endian).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for (i, &bc) in b.iter().enumerate() {
                let sub = (lead as u64 * bc as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
    }
    r
}

/// Whether the monic polynomial `poly = c_0 + c_1 y + ... + c_d y^d` is
/// irreducible over `F_p`, by trial division with every monic polynomial of
/// degree at most `d/2`.
pub fn check_irreducible(poly: &[u32], p: u32) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::Field(format!("{p} is not prime")));
    }
    if poly.len() < 2 {
        return Err(Error::Field("polynomial must have degree >= 1".into()));
    }
    if poly.iter().any(|&c| c >= p) {
        return Err(Error::Field("coefficients must be reduced mod p".into()));
    }
    if *poly.last().unwrap() != 1 {
        return Err(Error::Field("polynomial must be monic".into()));
    }
    let d = poly.len() - 1;
    for e in 1..=d / 2 {
        let count = (p as u64).pow(e as u32);
        for idx in 0..count {
            let mut div = Vec::with_capacity(e + 1);
            let mut v = idx;
            for _ in 0..e {
                div.push((v % p as u64) as u32);
                v /= p as u64;
            }
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The smallest irreducible monic polynomial of degree `m` over `F_p`,
/// ordering candidates by the integer `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`
/// (so higher-degree coefficients are compared first).
pub fn default_modulus(p: u32, m: usize) -> Result<Vec<u32>> {
    if m == 0 {
        return Err(Error::Field("extension degree must be >= 1".into()));
    }
    let count = (p as u64)
        .checked_pow(m as u32)
        .filter(|&c| c <= MAX_ORDER)
        .ok_or_else(|| Error::Field(format!("field order {p}^{m} too large")))?;
    for idx in 0..count {
        let mut poly = Vec::with_capacity(m + 1);
        let mut v = idx;
        for _ in 0..m {
            poly.push((v % p as u64) as u32);
            v /= p as u64;
        }
        poly.push(1);
        if check_irreducible(&poly, p)? {
            return Ok(poly);
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Inverse of a square matrix over `F_p` (rows as vectors), if invertible.
fn invert_mod_p(mat: &[Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
    let n = mat.len();
    let mut a: Vec<Vec<u32>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u32::from(i == j)));
            r
        })
        .collect();
    let inv_mod = |x: u32| -> u32 {
        let mut r = 1u64;
        let mut b = x as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    };
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col] != 0)?;
        a.swap(col, piv);
        let iv = inv_mod(a[col][col]);
        for x in a[col].iter_mut() {
            *x = (*x as u64 * iv as u64 % p as u64) as u32;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..2 * n {
                    let sub = (f as u64 * a[col][c] as u64 % p as u64) as u32;
                    a[r][c] = (a[r][c] + p - sub) % p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl FieldTower {
    /// Tower over `F_p` of degree `m` with the default modulus and the
    /// polynomial basis `alpha_i = y^{i-1}`.
    pub fn new(p: u32, m: usize) -> Result<Self> {
        let modulus = default_modulus(p, m)?;
        Self::with_modulus(p, &modulus)
    }

    /// Tower defined by an explicit monic irreducible modulus
    /// `c_0, c_1, ..., c_m` (little-endian, `c_m = 1`).
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Self> {
        if !check_irreducible(modulus, p)? {
            return Err(Error::Field(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        let m = modulus.len() - 1;
        let order = (p as u64)
            .checked_pow(m as u32)
            .filter(|&c| c <= MAX_ORDER)
            .ok_or_else(|| Error::Field(format!("field order {p}^{m} too large")))?
            as u32;
        let pow_p: Vec<u32> = (0..m).map(|i| p.pow(i as u32)).collect();

        let mut tower = FieldTower {
            p,
            m,
            order,
            modulus: modulus.to_vec(),
            pow_p,
            exp: Vec::new(),
            log: vec![0; order as usize],
            add_table: None,
            basis: Vec::new(),
            basis_inv: Vec::new(),
        };
        if p != 2 && order <= 729 {
            let q = order as usize;
            let mut table = vec![0u32; q * q];
            for a in 0..q {
                for b in 0..q {
                    table[a * q + b] = tower.add_digits(a as u32, b as u32);
                }
            }
            tower.add_table = Some(table);
        }
        tower.build_log_tables();
        let poly_basis: Vec<Scalar> = tower.pow_p.iter().map(|&v| Scalar(v)).collect();
        tower.set_basis(poly_basis)?;
        Ok(tower)
    }

    /// Replaces the `F_p`-basis `alpha_1..alpha_m` used by matrix
    /// representations.
    pub fn with_basis(mut self, basis: Vec<Scalar>) -> Result<Self> {
        self.set_basis(basis)?;
        Ok(self)
    }

    fn set_basis(&mut self, basis: Vec<Scalar>) -> Result<()> {
        if basis.len() != self.m {
            return Err(Error::Field(format!(
                "basis needs {} elements, got {}",
                self.m,
                basis.len()
            )));
        }
        let rows: Vec<Vec<u32>> = basis.iter().map(|&b| self.digits(b)).collect();
        let inv = invert_mod_p(&rows, self.p)
            .ok_or_else(|| Error::Field("basis elements are linearly dependent over F_p".into()))?;
        self.basis = basis;
        self.basis_inv = inv;
        Ok(())
    }

    fn build_log_tables(&mut self) {
        let q = self.order;
        for cand in 1..q {
            let mut exp = Vec::with_capacity((q - 1) as usize);
            let mut x = 1u32;
            let mut ok = true;
            for i in 0..q - 1 {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp.push(x);
                x = self.mul_poly(x, cand);
            }
            if ok && x == 1 {
                for (i, &e) in exp.iter().enumerate() {
                    self.log[e as usize] = i as u32;
                }
                self.exp = exp;
                return;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    /// Schoolbook product modulo the modulus; used only to build tables.
    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(Scalar(a)), self.digits(Scalar(b)));
        let mut prod = vec![0u32; 2 * self.m];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        let r = poly_rem(&prod, &self.modulus, self.p);
        self.from_digits_unchecked(&r)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        for &w in &self.pow_p {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * w;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of elements `p^m`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The basis `alpha_1..alpha_m` of `F_{p^m}` over `F_p`.
    pub fn basis(&self) -> &[Scalar] {
        &self.basis
    }

    pub fn alpha(&self, i: usize) -> Scalar {
        self.basis[i]
    }

    pub fn contains(&self, x: Scalar) -> bool {
        x.0 < self.order
    }

    pub fn in_base_field(&self, x: Scalar) -> bool {
        x.0 < self.p
    }

    /// Embeds an integer mod `p` into the base field.
    pub fn base(&self, c: u32) -> Scalar {
        Scalar(c % self.p)
    }

    /// The generator used for the log tables.
    pub fn primitive(&self) -> Scalar {
        Scalar(*self.exp.get(1).unwrap_or(&1))
    }

    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        (0..self.order).map(Scalar)
    }

    pub fn base_elements(&self) -> impl Iterator<Item = Scalar> {
        (0..self.p).map(Scalar)
    }

    /// Polynomial-basis coefficients `c_0..c_{m-1}`.
    pub fn digits(&self, x: Scalar) -> Vec<u32> {
        let mut v = x.0;
        (0..self.m)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    fn from_digits_unchecked(&self, digits: &[u32]) -> u32 {
        digits
            .iter()
            .zip(&self.pow_p)
            .map(|(&d, &w)| d * w)
            .sum()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Scalar> {
        if digits.len() != self.m {
            return Err(Error::Field(format!(
                "expected {} digits, got {}",
                self.m,
                digits.len()
            )));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= self.p) {
            return Err(Error::Field(format!("digit {d} not reduced mod {}", self.p)));
        }
        Ok(Scalar(self.from_digits_unchecked(digits)))
    }

    /// Coordinates of `x` in the basis `alpha_1..alpha_m`.
    pub fn alpha_coords(&self, x: Scalar) -> Vec<u32> {
        let d = self.digits(x);
        (0..self.m)
            .map(|j| {
                let s: u64 = d
                    .iter()
                    .zip(&self.basis_inv)
                    .map(|(&di, row)| di as u64 * row[j] as u64)
                    .sum();
                (s % self.p as u64) as u32
            })
            .collect()
    }

    /// Parses the textual syntax `c_0,c_1,...,c_{m-1}`.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let digits = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Field(format!("bad digit {t:?} in scalar {text:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.from_digits(&digits)
    }

    pub fn format_scalar(&self, x: Scalar) -> String {
        self.digits(x)
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    #[inline]
    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        if self.p == 2 {
            Scalar(a.0 ^ b.0)
        } else if let Some(t) = &self.add_table {
            Scalar(t[(a.0 * self.order + b.0) as usize])
        } else {
            Scalar(self.add_digits(a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Scalar) -> Scalar {
        if self.p == 2 || a.is_zero() {
            return a;
        }
        let mut v = a.0;
        let mut out = 0;
        for &w in &self.pow_p {
            let d = v % self.p;
            out += ((self.p - d) % self.p) * w;
            v /= self.p;
        }
        Scalar(out)
    }

    #[inline]
    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        if a.is_zero() || b.is_zero() {
            return Scalar::ZERO;
        }
        let q1 = self.order - 1;
        let e = (self.log[a.0 as usize] + self.log[b.0 as usize]) % q1;
        Scalar(self.exp[e as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Scalar) -> Option<Scalar> {
        if a.is_zero() {
            return None;
        }
        let q1 = self.order - 1;
        let e = (q1 - self.log[a.0 as usize] % q1) % q1;
        Some(Scalar(self.exp[e as usize]))
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Option<Scalar> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, a: Scalar, e: u64) -> Scalar {
        if e == 0 {
            return Scalar::ONE;
        }
        if a.is_zero() {
            return Scalar::ZERO;
        }
        let q1 = (self.order - 1) as u64;
        let l = self.log[a.0 as usize] as u64 * (e % q1) % q1;
        Scalar(self.exp[l as usize])
    }

    /// `x^{p^i}`; the exponent is reduced mod `m`.
    pub fn frobenius(&self, x: Scalar, i: usize) -> Scalar {
        if x.is_zero() {
            return x;
        }
        let i = i % self.m;
        let q1 = (self.order - 1) as u64;
        let mut factor = 1u64;
        for _ in 0..i {
            factor = factor * self.p as u64 % q1.max(1);
        }
        let l = self.log[x.0 as usize] as u64 * factor % q1.max(1);
        Scalar(self.exp[l as usize])
    }

    /// Absolute trace `x + x^p + ... + x^{p^{m-1}}`, an element of `F_p`.
    pub fn trace(&self, x: Scalar) -> Scalar {
        let mut acc = Scalar::ZERO;
        let mut y = x;
        for _ in 0..self.m {
            acc = self.add(acc, y);
            y = self.frobenius(y, 1);
        }
        debug_assert!(self.in_base_field(acc));
        acc
    }

    pub fn sum<I: IntoIterator<Item = Scalar>>(&self, it: I) -> Scalar {
        it.into_iter().fold(Scalar::ZERO, |a, b| self.add(a, b))
    }
}
