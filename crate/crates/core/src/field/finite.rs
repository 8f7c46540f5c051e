//! Table-driven arithmetic in `F_q = F_p[x]/(f)` for small odd `q`.
//!
//! Elements are encoded as integers `c_0 + c_1 p + ... + c_{d-1} p^{d-1}`, where
//! `c_i` are the coefficients of the reduced polynomial representative. The
//! integer order of these encodings is the canonical residue order.

use crate::error::{Error, Result};

/// Largest field order accepted; keeps the log/exp tables small.
pub const MAX_ORDER: u64 = 1 << 16;

#[derive(Debug, Clone)]
pub(crate) struct FiniteField {
    p: u64,
    degree: u32,
    order: u64,
    /// Monic modulus, coefficients from low to high degree (length `degree + 1`).
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    generator: u32,
}

impl FiniteField {
    pub(crate) fn new(order: u64, modulus: Option<Vec<u64>>) -> Result<Self> {
        let (p, degree) = prime_power(order)
            .ok_or_else(|| Error::InvalidField(format!("{order} is not a prime power")))?;
        if p == 2 {
            return Err(Error::InvalidField("characteristic 2 is not supported".into()));
        }
        if order > MAX_ORDER {
            return Err(Error::InvalidField(format!(
                "order {order} exceeds the supported bound {MAX_ORDER}"
            )));
        }
        let modulus = match modulus {
            Some(m) => {
                let m: Vec<u64> = m.into_iter().map(|c| c % p).collect();
                let m = trim(m);
                if m.len() != degree as usize + 1 {
                    return Err(Error::InvalidModulus(format!(
                        "expected degree {degree}, got degree {}",
                        m.len().saturating_sub(1)
                    )));
                }
                if *m.last().unwrap() != 1 {
                    return Err(Error::InvalidModulus("modulus is not monic".into()));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::InvalidModulus(format!(
                        "{} is reducible over F_{p}",
                        format_poly(&m)
                    )));
                }
                m
            }
            None => smallest_irreducible(p, degree),
        };

        let mut field = FiniteField {
            p,
            degree,
            order,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            generator: 0,
        };
        field.build_tables()?;
        Ok(field)
    }

    fn build_tables(&mut self) -> Result<()> {
        let group_order = self.order - 1;
        let generator = (1..self.order as u32)
            .find(|&g| self.slow_order(g) == group_order)
            .ok_or_else(|| Error::Internal("no multiplicative generator found".into()))?;
        let mut exp = Vec::with_capacity(group_order as usize);
        let mut log = vec![u32::MAX; self.order as usize];
        let mut x = 1u32;
        for k in 0..group_order {
            exp.push(x);
            log[x as usize] = k as u32;
            x = self.slow_mul(x, generator);
        }
        self.exp = exp;
        self.log = log;
        self.generator = generator;
        Ok(())
    }

    fn slow_order(&self, g: u32) -> u64 {
        let mut x = g;
        let mut k = 1;
        while x != 1 {
            x = self.slow_mul(x, g);
            k += 1;
            if k > self.order {
                return 0;
            }
        }
        k
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let pa = self.digits(a);
        let pb = self.digits(b);
        let mut prod = vec![0u64; pa.len() + pb.len()];
        for (i, &x) in pa.iter().enumerate() {
            for (j, &y) in pb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        let r = poly_rem(&prod, &self.modulus, self.p);
        self.encode(&r)
    }

    pub(crate) fn p(&self) -> u64 {
        self.p
    }

    pub(crate) fn degree(&self) -> u32 {
        self.degree
    }

    pub(crate) fn order(&self) -> u64 {
        self.order
    }

    pub(crate) fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub(crate) fn generator(&self) -> u32 {
        self.generator
    }

    /// Coefficients `c_0..c_{d-1}` of an encoded element.
    pub(crate) fn digits(&self, mut e: u32) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.degree as usize);
        for _ in 0..self.degree {
            out.push(e as u64 % self.p);
            e /= self.p as u32;
        }
        out
    }

    pub(crate) fn encode(&self, coeffs: &[u64]) -> u32 {
        coeffs
            .iter()
            .take(self.degree as usize)
            .rev()
            .fold(0u64, |acc, &c| acc * self.p + c % self.p) as u32
    }

    pub(crate) fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        if self.degree == 1 {
            return ((a as u64 + b as u64) % self.p) as u32;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.degree {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub(crate) fn neg(&self, a: u32) -> u32 {
        if self.degree == 1 {
            return ((self.p - a as u64) % self.p) as u32;
        }
        let mut a = a as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.degree {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub(crate) fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.order - 1;
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % n;
        self.exp[k as usize]
    }

    /// Inverse of a nonzero element.
    pub(crate) fn inv(&self, a: u32) -> u32 {
        debug_assert_ne!(a, 0);
        let n = self.order - 1;
        let k = (n - self.log[a as usize] as u64) % n;
        self.exp[k as usize]
    }

    pub(crate) fn pow(&self, a: u32, k: i64) -> u32 {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let n = (self.order - 1) as i64;
        let e = (self.log[a as usize] as i64 * k.rem_euclid(n)).rem_euclid(n);
        self.exp[e as usize]
    }

    /// Discrete logarithm with respect to the fixed generator.
    pub(crate) fn log(&self, a: u32) -> u64 {
        debug_assert_ne!(a, 0);
        self.log[a as usize] as u64
    }

    pub(crate) fn exp(&self, k: i64) -> u32 {
        let n = (self.order - 1) as i64;
        self.exp[k.rem_euclid(n) as usize]
    }

    /// Euler's criterion: `a` is a square iff `a^((q-1)/2) = 1`.
    pub(crate) fn is_square(&self, a: u32) -> bool {
        self.pow(a, ((self.order - 1) / 2) as i64) == 1
    }

    pub(crate) fn in_prime_field(&self, a: u32) -> bool {
        (a as u64) < self.p
    }
}

/// Returns `(p, d)` with `q = p^d`, `p` prime.
pub(crate) fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut d = 0;
    while rest % p == 0 {
        rest /= p;
        d += 1;
    }
    (rest == 1).then_some((p, d))
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Remainder of `a` modulo the nonzero polynomial `b` over `F_p`.
pub(crate) fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod(*b.last().unwrap(), p);
    while r.len() > db && !(r.len() == 1 && r[0] == 0) {
        let shift = r.len() - 1 - db;
        let factor = r.last().unwrap() * lead_inv % p;
        for (i, &c) in b.iter().enumerate() {
            r[i + shift] = (r[i + shift] + p - factor * c % p) % p;
        }
        r = trim(r);
        if r.len() - 1 < db {
            break;
        }
    }
    r
}

fn is_zero_poly(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() - 1;
    if d == 0 {
        return false;
    }
    for k in 1..=d / 2 {
        let count = p.pow(k as u32);
        for low in 0..count {
            let mut g = Vec::with_capacity(k + 1);
            let mut e = low;
            for _ in 0..k {
                g.push(e % p);
                e /= p;
            }
            g.push(1);
            if is_zero_poly(&poly_rem(f, &g, p)) {
                return false;
            }
        }
    }
    true
}

/// The smallest monic irreducible of degree `d`, ordering the non-leading
/// coefficients lexicographically from the highest degree down.
pub(crate) fn smallest_irreducible(p: u64, d: u32) -> Vec<u64> {
    let count = p.pow(d);
    for low in 0..count {
        let mut f = Vec::with_capacity(d as usize + 1);
        let mut e = low;
        for _ in 0..d {
            f.push(e % p);
            e /= p;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

pub(crate) fn format_poly(f: &[u64]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in f.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coeff = if c == 1 && i > 0 { String::new() } else { c.to_string() };
        let part = match i {
            0 => coeff,
            1 => format!("{coeff}x"),
            _ => format!("{coeff}x^{i}"),
        };
        parts.push(part);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join("+")
    }
}

/// Parses `x^2+2x+1`-style polynomials; coefficients are reduced mod `p`.
pub(crate) fn parse_poly(s: &str, p: u64) -> Result<Vec<u64>> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let normalized = cleaned.replace('-', "+-");
    let mut coeffs: Vec<i64> = Vec::new();
    for term in normalized.split('+').filter(|t| !t.is_empty()) {
        let (neg, body) = match term.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, term),
        };
        let (coeff, power) = match body.find('x') {
            None => (
                body.parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad polynomial term `{term}`")))?,
                0usize,
            ),
            Some(idx) => {
                let c = body[..idx].trim_end_matches('*');
                let c = if c.is_empty() {
                    1
                } else {
                    c.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad coefficient in `{term}`")))?
                };
                let rest = &body[idx + 1..];
                let k = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|k| k.parse::<usize>().ok())
                        .ok_or_else(|| Error::Parse(format!("bad exponent in `{term}`")))?
                };
                (c, k)
            }
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, 0);
        }
        coeffs[power] += if neg { -coeff } else { coeff };
    }
    Ok(trim(
        coeffs
            .into_iter()
            .map(|c| c.rem_euclid(p as i64) as u64)
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(125), Some((5, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn default_moduli() {
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(5, 2), vec![2, 0, 1]);
        assert_eq!(smallest_irreducible(3, 3), vec![1, 2, 0, 1]);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x + 2)(x + 3) over F_5
        let err = FiniteField::new(25, Some(vec![1, 0, 1])).unwrap_err();
        assert!(matches!(err, Error::InvalidModulus(_)));
        let err = FiniteField::new(9, Some(vec![1, 1])).unwrap_err();
        assert!(matches!(err, Error::InvalidModulus(_)));
    }

    #[test]
    fn poly_round_trip() {
        let f = parse_poly("x^3 + 2x + 1", 3).unwrap();
        assert_eq!(f, vec![1, 2, 0, 1]);
        assert_eq!(format_poly(&f), "x^3+2x+1");
        assert_eq!(parse_poly("x^2-1", 3).unwrap(), vec![2, 0, 1]);
    }

    #[test]
    fn f7_arithmetic() {
        let f = FiniteField::new(7, None).unwrap();
        assert_eq!(f.add(3, 5), 1);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.generator(), 3);
        assert!(f.is_square(2));
        assert!(!f.is_square(6));
    }

    #[test]
    fn table_agrees_with_schoolbook_multiplication() {
        for q in [9u64, 25, 27] {
            let f = FiniteField::new(q, None).unwrap();
            for a in 0..q as u32 {
                for b in 0..q as u32 {
                    let slow = if a == 0 || b == 0 { 0 } else { f.slow_mul(a, b) };
                    assert_eq!(f.mul(a, b), slow, "q={q} a={a} b={b}");
                }
            }
        }
    }
}
