use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exactlin::Rat;

/// Normally ordered monomial `x^a ∂^b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub x: Vec<u32>,
    pub d: Vec<u32>,
}

impl Mono {
    pub fn one(n: usize) -> Mono {
        Mono { x: vec![0; n], d: vec![0; n] }
    }

    pub fn order(&self) -> u32 {
        self.d.iter().sum()
    }

    pub fn degree(&self) -> u32 {
        self.x.iter().sum::<u32>() + self.order()
    }
}

/// Element of the Weyl algebra in `N` variables, stored in normal order
/// (every `x` to the left of every `∂`); zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct WeylPoly {
    pub n: usize,
    pub terms: BTreeMap<Mono, Rat>,
}

impl WeylPoly {
    pub fn zero(n: usize) -> WeylPoly {
        WeylPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rat) -> WeylPoly {
        WeylPoly::monomial(Mono::one(n), c)
    }

    pub fn monomial(m: Mono, c: Rat) -> WeylPoly {
        let mut p = WeylPoly::zero(m.x.len());
        p.add_term(m, c);
        p
    }

    pub fn x(n: usize, i: usize) -> WeylPoly {
        let mut m = Mono::one(n);
        m.x[i] = 1;
        WeylPoly::monomial(m, Rat::one())
    }

    pub fn dx(n: usize, i: usize) -> WeylPoly {
        let mut m = Mono::one(n);
        m.d[i] = 1;
        WeylPoly::monomial(m, Rat::one())
    }

    /// `Σ c_i x_i + c0`.
    pub fn affine(coeffs: &[Rat], c0: &Rat) -> WeylPoly {
        let n = coeffs.len();
        let mut p = WeylPoly::constant(n, c0.clone());
        for (i, c) in coeffs.iter().enumerate() {
            p = &p + &WeylPoly::x(n, i).scale(c);
        }
        p
    }

    /// `Σ v_i ∂_i`.
    pub fn derivation(v: &[Rat]) -> WeylPoly {
        let n = v.len();
        let mut p = WeylPoly::zero(n);
        for (i, c) in v.iter().enumerate() {
            p = &p + &WeylPoly::dx(n, i).scale(c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> WeylPoly {
        if c.is_zero() {
            return WeylPoly::zero(self.n);
        }
        WeylPoly { n: self.n, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Largest number of `∂`s in a term.
    pub fn order(&self) -> u32 {
        self.terms.keys().map(Mono::order).max().unwrap_or(0)
    }

    /// The anti-involution `x ↦ x`, `∂ ↦ −∂`, reversing products; it turns
    /// right modules into left ones.
    pub fn adjoint(&self) -> WeylPoly {
        let mut out = WeylPoly::zero(self.n);
        for (m, c) in &self.terms {
            // (x^a ∂^b)^* = (−∂)^b x^a, renormalized
            let mut dpart = Mono::one(self.n);
            dpart.d = m.d.clone();
            let mut xpart = Mono::one(self.n);
            xpart.x = m.x.clone();
            let sign = if m.order() % 2 == 0 { c.clone() } else { -c };
            let p = &WeylPoly::monomial(dpart, sign) * &WeylPoly::monomial(xpart, Rat::one());
            out = &out + &p;
        }
        out
    }

    /// Applies the operator to a polynomial (an element with no `∂`s).
    pub fn apply(&self, f: &WeylPoly) -> WeylPoly {
        let prod = self * f;
        let mut out = WeylPoly::zero(self.n);
        for (m, c) in prod.terms {
            if m.order() == 0 {
                out.add_term(m, c);
            }
        }
        out
    }
}

fn falling(c: u32, k: u32) -> Rat {
    (0..k).fold(Rat::one(), |acc, i| acc * Rat::from_int((c - i) as i64))
}

fn binomial(b: u32, k: u32) -> Rat {
    falling(b, k) * falling(k, k).recip().expect("k! ≠ 0")
}

/// `∂^b x^c = Σ_k C(b,k) c!/(c−k)! x^{c−k} ∂^{b−k}` in one variable.
fn commute_one(b: u32, c: u32) -> Vec<(u32, u32, Rat)> {
    (0..=b.min(c)).map(|k| (c - k, b - k, binomial(b, k) * falling(c, k))).collect()
}

fn mono_mul(l: &Mono, r: &Mono, out: &mut WeylPoly) {
    let n = l.x.len();
    // expand ∂^{l.d} x^{r.x} variable by variable
    let mut partial: Vec<(Vec<u32>, Vec<u32>, Rat)> = vec![(Vec::new(), Vec::new(), Rat::one())];
    for i in 0..n {
        let opts = commute_one(l.d[i], r.x[i]);
        let mut next = Vec::with_capacity(partial.len() * opts.len());
        for (xs, ds, c) in &partial {
            for (xe, de, k) in &opts {
                let mut xs = xs.clone();
                let mut ds = ds.clone();
                xs.push(l.x[i] + xe);
                ds.push(de + r.d[i]);
                next.push((xs, ds, c * k));
            }
        }
        partial = next;
    }
    for (x, d, c) in partial {
        out.add_term(Mono { x, d }, c);
    }
}

impl Mul for &WeylPoly {
    type Output = WeylPoly;
    fn mul(self, rhs: &WeylPoly) -> WeylPoly {
        let mut out = WeylPoly::zero(self.n.max(rhs.n));
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                let mut t = WeylPoly::zero(out.n);
                mono_mul(a, b, &mut t);
                for (m, c) in t.terms {
                    out.add_term(m, c * ca * cb);
                }
            }
        }
        out
    }
}

impl Add for &WeylPoly {
    type Output = WeylPoly;
    fn add(self, rhs: &WeylPoly) -> WeylPoly {
        let mut out = self.clone();
        out.n = self.n.max(rhs.n);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &WeylPoly {
    type Output = WeylPoly;
    fn sub(self, rhs: &WeylPoly) -> WeylPoly {
        self + &(-rhs)
    }
}

impl Neg for &WeylPoly {
    type Output = WeylPoly;
    fn neg(self) -> WeylPoly {
        self.scale(&Rat::from_int(-1))
    }
}

impl fmt::Display for WeylPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &e) in m.x.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{i}")?,
                    _ => write!(f, "*x{i}^{e}")?,
                }
            }
            for (i, &e) in m.d.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*d{i}")?,
                    _ => write!(f, "*d{i}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeylPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
