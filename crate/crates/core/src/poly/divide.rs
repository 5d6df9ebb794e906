//! Exact division by a linear form.
//!
//! Long division in the pivot variable (the first variable with a nonzero
//! coefficient) using lex order with that variable most significant, so the
//! leading term of `q * L` is always `lt(q) * c_pivot * x_pivot`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Int, LinearForm, Monomial, Poly, PolyError};

/// Result of a divisibility query. `integral` is only meaningful when
/// `divides` holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divisibility {
    pub divides: bool,
    pub integral: bool,
}

fn pivot_key(m: &[u16], pivot: usize) -> Vec<u16> {
    let mut k = Vec::with_capacity(m.len());
    k.push(m[pivot]);
    k.extend(m.iter().enumerate().filter(|&(i, _)| i != pivot).map(|(_, &e)| e));
    k
}

enum Step {
    Done(Poly),
    NotIntegral,
    Remainder,
}

fn divide_integral(f: &Poly, l: &LinearForm) -> Step {
    let p = l.pivot();
    let cp = Int::from(l.coeffs()[p]);
    let mut rem: BTreeMap<Vec<u16>, (Monomial, Int)> =
        f.terms.iter().map(|(m, c)| (pivot_key(&m.0, p), (m.clone(), c.clone()))).collect();
    let mut q = Poly::zero(f.rank);
    while let Some((_, (m, c))) = rem.pop_last() {
        if m.0[p] == 0 {
            return Step::Remainder;
        }
        let Some(t) = c.checked_div_exact(&cp) else {
            return Step::NotIntegral;
        };
        let mut qm = m.clone();
        qm.0[p] -= 1;
        for (j, &lj) in l.coeffs().iter().enumerate() {
            if lj == 0 || j == p {
                continue;
            }
            let mut e = qm.clone();
            e.0[j] += 1;
            let delta = t.mul_small(lj);
            let key = pivot_key(&e.0, p);
            match rem.get_mut(&key) {
                Some((_, v)) => {
                    *v -= &delta;
                    if v.is_zero() {
                        rem.remove(&key);
                    }
                }
                None => {
                    rem.insert(key, (e, -&delta));
                }
            }
        }
        q.add_term(qm, &t);
    }
    Step::Done(q)
}

/// Rational long division; returns whether the remainder vanishes.
fn divides_rationally(f: &Poly, l: &LinearForm) -> bool {
    let p = l.pivot();
    let cp = BigRational::from_integer(BigInt::from(l.coeffs()[p]));
    let mut rem: BTreeMap<Vec<u16>, (Vec<u16>, BigRational)> = f
        .terms
        .iter()
        .map(|(m, c)| (pivot_key(&m.0, p), (m.0.to_vec(), BigRational::from_integer(c.to_big()))))
        .collect();
    while let Some((_, (m, c))) = rem.pop_last() {
        if m[p] == 0 {
            return false;
        }
        let t = c / &cp;
        let mut qm = m.clone();
        qm[p] -= 1;
        for (j, &lj) in l.coeffs().iter().enumerate() {
            if lj == 0 || j == p {
                continue;
            }
            let mut e = qm.clone();
            e[j] += 1;
            let delta = &t * BigRational::from_integer(BigInt::from(lj));
            let key = pivot_key(&e, p);
            let entry = rem.entry(key).or_insert_with(|| (e, BigRational::zero()));
            entry.1 -= delta;
            if entry.1.is_zero() {
                let key = pivot_key(&entry.0, p);
                rem.remove(&key);
            }
        }
    }
    true
}

impl Poly {
    /// Returns `q` with `self = q * l`.
    pub fn divide_exact_by_linear(&self, l: &LinearForm) -> Result<Poly, PolyError> {
        if self.rank != l.rank() {
            return Err(PolyError::RankMismatch(self.rank, l.rank()));
        }
        match divide_integral(self, l) {
            Step::Done(q) => Ok(q),
            Step::Remainder => Err(PolyError::NonExactDivision),
            Step::NotIntegral => {
                if divides_rationally(self, l) {
                    Err(PolyError::NonIntegralQuotient)
                } else {
                    Err(PolyError::NonExactDivision)
                }
            }
        }
    }

    pub fn divisibility_test(&self, l: &LinearForm) -> Divisibility {
        match self.divide_exact_by_linear(l) {
            Ok(_) => Divisibility { divides: true, integral: true },
            Err(PolyError::NonIntegralQuotient) => Divisibility { divides: true, integral: false },
            Err(_) => Divisibility { divides: false, integral: false },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lf(c: &[i64]) -> LinearForm {
        LinearForm::new(c.to_vec()).unwrap()
    }

    fn p(rank: usize, terms: &[(&[u16], i64)]) -> Poly {
        Poly::from_terms(rank, terms.iter().map(|(e, c)| (e.to_vec(), Int::from(*c)))).unwrap()
    }

    #[test]
    fn divides_off_a_factor() {
        let f = p(2, &[(&[2, 0], 2), (&[1, 1], 1)]); // b1 (2 b1 + b2)
        assert_eq!(f.divide_exact_by_linear(&lf(&[2, 1])).unwrap(), Poly::var(2, 0));
    }

    #[test]
    fn difference_of_squares_not_divisible_by_unrelated_root() {
        let f = p(3, &[(&[2, 0, 0], 1), (&[0, 0, 2], -1)]);
        assert_eq!(f.divide_exact_by_linear(&lf(&[1, 1, 0])), Err(PolyError::NonExactDivision));
        assert_eq!(f.divide_exact_by_linear(&lf(&[1, 0, 1])).unwrap(), p(3, &[(&[1, 0, 0], 1), (&[0, 0, 1], -1)]));
    }

    #[test]
    fn a1_minus_a3_not_divisible_by_a1() {
        let f = p(3, &[(&[1, 0, 0], 1), (&[0, 0, 1], -1)]);
        assert_eq!(f.divide_exact_by_linear(&lf(&[1, 0, 0])), Err(PolyError::NonExactDivision));
        assert_eq!(f.divisibility_test(&lf(&[1, 0, 0])), Divisibility { divides: false, integral: false });
    }

    #[test]
    fn rational_but_not_integral() {
        // x = (1/2)(2x)
        let f = Poly::var(1, 0);
        assert_eq!(f.divide_exact_by_linear(&lf(&[2])), Err(PolyError::NonIntegralQuotient));
        assert_eq!(f.divisibility_test(&lf(&[2])), Divisibility { divides: true, integral: false });
        // 3x + 3y over 2x + 2y
        let g = p(2, &[(&[1, 0], 3), (&[0, 1], 3)]);
        assert_eq!(g.divide_exact_by_linear(&lf(&[2, 2])), Err(PolyError::NonIntegralQuotient));
    }

    #[test]
    fn zero_divides_to_zero_and_constants_fail() {
        assert!(Poly::zero(2).divide_exact_by_linear(&lf(&[1, 1])).unwrap().is_zero());
        assert_eq!(Poly::one(2).divide_exact_by_linear(&lf(&[1, 1])), Err(PolyError::NonExactDivision));
    }

    fn arb_poly(rank: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u16..3, rank), -7i64..8), 0..6)
            .prop_map(move |ts| Poly::from_terms(rank, ts.into_iter().map(|(e, c)| (e, Int::from(c)))).unwrap())
    }

    proptest! {
        #[test]
        fn multiply_then_divide(f in arb_poly(3), l in prop::collection::vec(-3i64..4, 3)) {
            prop_assume!(l.iter().any(|&c| c != 0));
            let l = LinearForm::new(l).unwrap();
            let prod = f.mul_linear(&l);
            match prod.divide_exact_by_linear(&l) {
                Ok(q) => prop_assert_eq!(q, f),
                Err(e) => prop_assert!(false, "unexpected {e:?}"),
            }
        }
    }
}
