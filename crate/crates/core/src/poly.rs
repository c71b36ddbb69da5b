//! Sparse multivariate polynomials with integer coefficients, just enough
//! to expand a Pfaffian symbolically.

use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg};

use num_traits::{One, Zero};

use crate::rational::Rational;

/// A monomial is the sorted list of its variable indices, with repetition.
pub type Monomial = Vec<usize>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Monomial, i64>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(index: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![index], 1);
        p
    }

    pub fn add_term(&mut self, monomial: Monomial, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(monomial.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&monomial);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, i64> {
        &self.terms
    }

    pub fn coefficient(&self, monomial: &[usize]) -> i64 {
        self.terms.get(monomial).copied().unwrap_or(0)
    }

    pub fn scaled(&self, c: i64) -> Self {
        let mut p = Self::zero();
        for (m, &k) in &self.terms {
            p.add_term(m.clone(), k * c);
        }
        p
    }

    /// Value at the point `value(index)`.
    pub fn eval(&self, value: impl Fn(usize) -> Rational) -> Rational {
        let mut total = Rational::zero();
        for (m, &c) in &self.terms {
            let mut t = Rational::from_integer(c.into());
            for &v in m {
                t *= value(v);
            }
            total += t;
        }
        total
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut p = self.clone();
        p += rhs;
        p
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, &c) in &rhs.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (a, &ca) in &self.terms {
            for (b, &cb) in &rhs.terms {
                let mut m = a.clone();
                m.extend_from_slice(b);
                m.sort_unstable();
                p.add_term(m, ca * cb);
            }
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scaled(-1)
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(1)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational;

    #[test]
    fn square_of_a_binomial() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let s = &x + &y;
        let d = &x + &-&y;
        let p = &s * &d;
        assert_eq!(p.coefficient(&[0, 0]), 1);
        assert_eq!(p.coefficient(&[1, 1]), -1);
        assert_eq!(p.coefficient(&[0, 1]), 0);
        assert_eq!(p.terms().len(), 2);
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = Poly::var(3);
        let mut p = x.clone();
        p += &-&x;
        assert!(p.is_zero());
    }

    #[test]
    fn evaluation() {
        let p = &(&Poly::var(0) * &Poly::var(1)) + &Poly::constant(2);
        let v = p.eval(|i| rational::int(i as i64 + 2));
        assert_eq!(v, rational::int(8));
    }
}
