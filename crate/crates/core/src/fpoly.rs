//! Polynomials over `F_p`, ascending coefficients, and their factorization.

use crate::padic::pow_p;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

impl FpPoly {
    pub fn new(p: u64, c: Vec<u64>) -> Self {
        let mut f = FpPoly { p, c: c.into_iter().map(|x| x % p).collect() };
        f.trim();
        f
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn constant(p: u64, a: u64) -> Self {
        Self::new(p, vec![a])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, with `-1` for zero.
    pub fn degree(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c.iter().rev().fold(0, |acc, &a| (acc * x + a) % self.p)
    }

    pub fn monic(&self) -> Self {
        match self.c.last() {
            None => self.clone(),
            Some(&l) => {
                let i = inv_mod(l, self.p);
                Self::new(self.p, self.c.iter().map(|&a| a * i % self.p).collect())
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let get = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(self.p, (0..n).map(|i| (get(&self.c, i) + get(&o.c, i)) % self.p).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let get = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(self.p, (0..n).map(|i| (get(&self.c, i) + self.p - get(&o.c, i)) % self.p).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(self.p, vec![]);
        }
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % self.p;
            }
        }
        Self::new(self.p, out)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let p = self.p;
        let mut r = self.c.clone();
        let dl = d.c.len();
        let li = inv_mod(*d.c.last().unwrap(), p);
        if r.len() < dl {
            return (Self::new(p, vec![]), self.clone());
        }
        let mut q = vec![0u64; r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let coef = r[k + dl - 1] * li % p;
            q[k] = coef;
            for (j, &b) in d.c.iter().enumerate() {
                r[k + j] = (r[k + j] + p * p - coef * b % p) % p;
            }
        }
        (Self::new(p, q), Self::new(p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.p, self.c.iter().enumerate().skip(1).map(|(i, &a)| a * (i as u64 % self.p) % self.p).collect())
    }

    /// `self^e mod m`, with the exponent as a big integer in base `2^64` limbs.
    pub fn pow_mod(&self, e: u128, m: &Self) -> Self {
        let mut acc = Self::constant(self.p, 1).rem(m);
        let mut base = self.rem(m);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }
}

/// Irreducible monic factors of a squarefree monic polynomial, sorted by
/// degree then coefficients. Returns `None` if equal-degree splitting fails
/// to separate factors with its deterministic trial elements.
pub fn factor_squarefree(f: &FpPoly) -> Option<Vec<FpPoly>> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.monic();
    let x = FpPoly::x(p);
    let mut h = x.clone();
    let mut d = 1u32;
    while rest.degree() >= 2 * d as i64 {
        h = h.pow_mod(p as u128, &rest);
        let g = rest.gcd(&h.sub(&x));
        if g.degree() > 0 {
            out.extend(equal_degree(&g, d)?);
            rest = rest.divrem(&g).0.monic();
            h = h.rem(&rest);
        }
        d += 1;
    }
    if rest.degree() > 0 {
        out.push(rest);
    }
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then(a.c.cmp(&b.c)));
    Some(out)
}

fn equal_degree(g: &FpPoly, d: u32) -> Option<Vec<FpPoly>> {
    if g.degree() == d as i64 {
        return Some(vec![g.clone()]);
    }
    let p = g.p;
    let e = (pow_p(p as u32, d) as u128 - 1) / 2;
    let one = FpPoly::constant(p, 1);
    // trial elements x + c, then x^2 + a x + c
    let mut trials = Vec::new();
    for c in 0..p {
        trials.push(FpPoly::new(p, vec![c, 1]));
    }
    for a in 0..p {
        for c in 0..p {
            trials.push(FpPoly::new(p, vec![c, a, 1]));
        }
    }
    for t in trials {
        let b = t.pow_mod(e, g).sub(&one);
        let q = g.gcd(&b);
        if q.degree() > 0 && q.degree() < g.degree() {
            let r = g.divrem(&q).0.monic();
            let mut out = equal_degree(&q, d)?;
            out.extend(equal_degree(&r, d)?);
            return Some(out);
        }
    }
    None
}
