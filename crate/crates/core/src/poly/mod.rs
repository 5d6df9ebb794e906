//! Sparse exact polynomials in the simple-root variables.
//!
//! Variables are indexed from 0 internally; the text format and every
//! user-facing glyph (`b1`, `z3`, ...) is 1-based.

mod divide;
mod int;
pub mod lp;
mod newton;
mod text;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

pub use divide::Divisibility;
pub use int::Int;
pub use newton::{NewtonPolytope, SnpVerdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("linear form is identically zero")]
    ZeroLinearForm,
    #[error("remainder is nonzero: polynomial is not divisible by the linear form")]
    NonExactDivision,
    #[error("quotient has non-integral coefficients")]
    NonIntegralQuotient,
    #[error("variable {0} has no image under the substitution")]
    UnmappedVariable(usize),
    #[error("zero polynomial has no Newton polytope")]
    ZeroPolynomial,
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then lexicographic with the first variable most significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(rank: usize) -> Self {
        Monomial(SmallVec::from_elem(0, rank))
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<&[u16]> for Monomial {
    fn from(e: &[u16]) -> Self {
        Monomial(SmallVec::from_slice(e))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.as_slice().cmp(other.0.as_slice()))
    }
}

/// A nonzero integer linear form `c_1 x_1 + ... + c_r x_r`, typically a
/// positive root written in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LinearForm {
    coeffs: Vec<i64>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<i64>) -> Result<Self, PolyError> {
        if coeffs.iter().all(|&c| c == 0) {
            return Err(PolyError::ZeroLinearForm);
        }
        Ok(LinearForm { coeffs })
    }

    pub fn var(rank: usize, i: usize) -> Self {
        let mut coeffs = vec![0; rank];
        coeffs[i] = 1;
        LinearForm { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// Index of the first nonzero coefficient.
    pub fn pivot(&self) -> usize {
        self.coeffs.iter().position(|&c| c != 0).expect("nonzero by construction")
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Poly::from_linear(self).to_text('x'))
    }
}

/// Summary used by the positivity and degree checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyProps {
    pub nonneg: bool,
    /// Total degree; `-1` for the zero polynomial.
    pub total_degree: i64,
    /// All exponent sums equal. The zero polynomial counts as homogeneous.
    pub homogeneous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    rank: usize,
    terms: BTreeMap<Monomial, Int>,
}

impl Poly {
    pub fn zero(rank: usize) -> Self {
        Poly { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, Int::one())
    }

    pub fn constant(rank: usize, c: Int) -> Self {
        let mut p = Poly::zero(rank);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(rank), c);
        }
        p
    }

    pub fn var(rank: usize, i: usize) -> Self {
        assert!(i < rank, "variable index {i} out of range for rank {rank}");
        let mut m = Monomial::one(rank);
        m.0[i] = 1;
        let mut p = Poly::zero(rank);
        p.terms.insert(m, Int::one());
        p
    }

    pub fn from_linear(l: &LinearForm) -> Self {
        let rank = l.rank();
        let mut p = Poly::zero(rank);
        for (i, &c) in l.coeffs.iter().enumerate() {
            if c != 0 {
                let mut m = Monomial::one(rank);
                m.0[i] = 1;
                p.terms.insert(m, Int::from(c));
            }
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated exponents and dropping zeros.
    pub fn from_terms<I, E>(rank: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (E, Int)>,
        E: AsRef<[u16]>,
    {
        let mut p = Poly::zero(rank);
        for (e, c) in terms {
            let e = e.as_ref();
            if e.len() != rank {
                return Err(PolyError::RankMismatch(rank, e.len()));
            }
            p.add_term(Monomial::from(e), &c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: &Int) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order (the display order).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Int)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, exps: &[u16]) -> Int {
        self.terms.get(&Monomial::from(exps)).cloned().unwrap_or_else(Int::zero)
    }

    /// Exponent vectors with nonzero coefficient, ascending graded-lex.
    pub fn support(&self) -> Vec<Vec<u16>> {
        self.terms.keys().map(|m| m.0.to_vec()).collect()
    }

    /// The constant term when the polynomial has degree 0 (or is zero).
    pub fn as_constant(&self) -> Option<Int> {
        match self.terms.len() {
            0 => Some(Int::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn check_rank(&self, other: &Poly) -> Result<(), PolyError> {
        if self.rank != other.rank {
            Err(PolyError::RankMismatch(self.rank, other.rank))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_rank(other)?;
        let mut out = Poly::zero(self.rank);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        Ok(out)
    }

    /// `self += a * b`, in place.
    pub fn add_scaled_product(&mut self, a: &Poly, b: &Poly) {
        assert_eq!(a.rank, b.rank);
        assert_eq!(self.rank, a.rank);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                self.add_term(ma.mul(mb), &(ca * cb));
            }
        }
    }

    /// `self -= a * b`, in place.
    pub fn sub_product(&mut self, a: &Poly, b: &Poly) {
        assert_eq!(a.rank, b.rank);
        assert_eq!(self.rank, a.rank);
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                self.add_term(ma.mul(mb), &-&(ca * cb));
            }
        }
    }

    pub fn scale(&self, k: &Int) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.rank);
        }
        Poly {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_linear(&self, l: &LinearForm) -> Poly {
        assert_eq!(self.rank, l.rank(), "rank mismatch");
        let mut out = Poly::zero(self.rank);
        for (m, c) in &self.terms {
            for (i, &k) in l.coeffs.iter().enumerate() {
                if k != 0 {
                    let mut e = m.clone();
                    e.0[i] += 1;
                    out.add_term(e, &c.mul_small(k));
                }
            }
        }
        out
    }

    /// Divides every coefficient exactly by `d`, if possible.
    pub fn div_scalar_exact(&self, d: &Int) -> Option<Poly> {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            terms.insert(m.clone(), c.checked_div_exact(d)?);
        }
        Some(Poly { rank: self.rank, terms })
    }

    pub fn substitute(&self, sub: &Substitution) -> Result<Poly, PolyError> {
        if sub.source_rank() != self.rank {
            return Err(PolyError::RankMismatch(self.rank, sub.source_rank()));
        }
        let target = sub.target_rank();
        let mut out = Poly::zero(target);
        // cache powers of each image
        let mut powers: Vec<Vec<Poly>> = vec![Vec::new(); self.rank];
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let image = sub.image(i).ok_or(PolyError::UnmappedVariable(i))?;
                let cache = &mut powers[i];
                if cache.is_empty() {
                    cache.push(Poly::one(target));
                }
                while cache.len() <= e as usize {
                    let next = cache.last().unwrap().mul_linear(image);
                    cache.push(next);
                }
                acc = acc.try_mul(&cache[e as usize])?;
            }
            for (tm, tc) in acc.terms {
                out.add_term(tm, &tc);
            }
        }
        Ok(out)
    }

    pub fn props(&self) -> PolyProps {
        let nonneg = self.terms.values().all(|c| !c.is_negative());
        let mut degrees = self.terms.keys().map(|m| m.degree());
        match degrees.next() {
            None => PolyProps { nonneg, total_degree: -1, homogeneous: true },
            Some(first) => {
                let mut max = first;
                let mut homogeneous = true;
                for d in degrees {
                    homogeneous &= d == first;
                    max = max.max(d);
                }
                PolyProps { nonneg, total_degree: max as i64, homogeneous }
            }
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Re-embeds into a larger ring (or same rank) by sending variable `i`
    /// to variable `map[i]`.
    pub fn relabel(&self, map: &[usize], target_rank: usize) -> Poly {
        assert_eq!(map.len(), self.rank);
        let mut out = Poly::zero(target_rank);
        for (m, c) in &self.terms {
            let mut e = Monomial::one(target_rank);
            for (i, &x) in m.0.iter().enumerate() {
                e.0[map[i]] += x;
            }
            out.add_term(e, c);
        }
        out
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("rank mismatch")
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("rank mismatch")
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("rank mismatch")
    }
}

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { rank: self.rank, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl std::ops::AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.rank, rhs.rank, "rank mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl std::ops::SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        assert_eq!(self.rank, rhs.rank, "rank mismatch");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), &-c);
        }
    }
}

/// A linear change of variables `x_i -> image_i` into another polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    target_rank: usize,
    images: Vec<Option<LinearForm>>,
}

impl Substitution {
    pub fn new(target_rank: usize, images: Vec<Option<LinearForm>>) -> Self {
        for l in images.iter().flatten() {
            assert_eq!(l.rank(), target_rank, "image rank must equal target rank");
        }
        Substitution { target_rank, images }
    }

    /// `x_i -> y_{map[i]}`.
    pub fn relabeling(map: &[usize], target_rank: usize) -> Self {
        let images = map.iter().map(|&j| Some(LinearForm::var(target_rank, j))).collect();
        Substitution { target_rank, images }
    }

    pub fn identity(rank: usize) -> Self {
        Self::relabeling(&(0..rank).collect::<Vec<_>>(), rank)
    }

    /// The type C to type B map: first variable doubled, the rest fixed.
    pub fn bar(rank: usize) -> Self {
        let mut images: Vec<_> = (0..rank).map(|i| Some(LinearForm::var(rank, i))).collect();
        if rank > 0 {
            let mut c = vec![0; rank];
            c[0] = 2;
            images[0] = Some(LinearForm { coeffs: c });
        }
        Substitution { target_rank: rank, images }
    }

    pub fn source_rank(&self) -> usize {
        self.images.len()
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn image(&self, i: usize) -> Option<&LinearForm> {
        self.images.get(i).and_then(|x| x.as_ref())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text('x'))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u16>,
    pub coef: String,
}

/// Wire form: `{"rank": r, "terms": [{"exp": [..], "coef": ".."}]}`, terms in
/// descending graded-lex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub rank: usize,
    pub terms: Vec<TermJson>,
}

impl From<&Poly> for PolyJson {
    fn from(p: &Poly) -> Self {
        PolyJson {
            rank: p.rank,
            terms: p
                .terms()
                .map(|(m, c)| TermJson { exp: m.0.to_vec(), coef: c.to_string() })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for Poly {
    type Error = PolyError;
    fn try_from(j: PolyJson) -> Result<Self, PolyError> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in j.terms {
            let c: Int = t.coef.parse().map_err(|_| PolyError::Parse(format!("bad coefficient {:?}", t.coef)))?;
            terms.push((t.exp, c));
        }
        Poly::from_terms(j.rank, terms)
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        Poly::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(rank: usize, terms: &[(&[u16], i64)]) -> Poly {
        Poly::from_terms(rank, terms.iter().map(|(e, c)| (e.to_vec(), Int::from(*c)))).unwrap()
    }

    #[test]
    fn cancellation_and_squares() {
        let a1 = Poly::var(2, 0);
        assert!((&a1 + &a1.scale(&Int::from(-1))).is_zero());
        let s = &Poly::var(2, 0) + &Poly::var(2, 1);
        assert_eq!(&s * &s, p(2, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)]));
    }

    #[test]
    fn b2_diagonal_product_expands() {
        // b1 (2 b1 + b2) (b1 + b2)
        let b1 = Poly::var(2, 0);
        let f1 = Poly::from_linear(&LinearForm::new(vec![2, 1]).unwrap());
        let f2 = Poly::from_linear(&LinearForm::new(vec![1, 1]).unwrap());
        let prod = &(&b1 * &f1) * &f2;
        assert_eq!(prod, p(2, &[(&[3, 0], 2), (&[2, 1], 3), (&[1, 2], 1)]));
    }

    #[test]
    fn bar_substitution_example() {
        let y = p(3, &[(&[1, 2, 0], 2), (&[1, 1, 1], 2), (&[0, 3, 0], 4), (&[0, 2, 1], 6), (&[0, 1, 2], 2)]);
        let x = y.substitute(&Substitution::bar(3)).unwrap();
        assert_eq!(x, p(3, &[(&[1, 2, 0], 4), (&[1, 1, 1], 4), (&[0, 3, 0], 4), (&[0, 2, 1], 6), (&[0, 1, 2], 2)]));
    }

    #[test]
    fn relabel_into_f4() {
        let f = p(3, &[(&[2, 0, 0], 2), (&[1, 1, 0], 3), (&[0, 2, 0], 1)]);
        let sub = Substitution::relabeling(&[1, 2, 3], 4);
        let g = f.substitute(&sub).unwrap();
        assert_eq!(g, p(4, &[(&[0, 2, 0, 0], 2), (&[0, 1, 1, 0], 3), (&[0, 0, 2, 0], 1)]));
        assert_eq!(g, f.relabel(&[1, 2, 3], 4));
        assert_eq!(f.substitute(&Substitution::identity(3)).unwrap(), f);
    }

    #[test]
    fn unmapped_variable_is_error() {
        let sub = Substitution::new(2, vec![Some(LinearForm::var(2, 0)), None]);
        assert_eq!(Poly::var(2, 1).substitute(&sub), Err(PolyError::UnmappedVariable(1)));
        assert!(Poly::var(2, 0).substitute(&sub).is_ok());
    }

    #[test]
    fn rank_mismatch_is_error() {
        assert_eq!(Poly::var(2, 0).try_add(&Poly::var(3, 0)), Err(PolyError::RankMismatch(2, 3)));
        assert!(LinearForm::new(vec![0, 0]).is_err());
    }

    #[test]
    fn props_conventions() {
        let f = p(3, &[(&[1, 0, 0], 1), (&[0, 0, 1], -1)]);
        assert!(!f.props().nonneg);
        let z = Poly::zero(3);
        assert_eq!(z.props(), PolyProps { nonneg: true, total_degree: -1, homogeneous: true });
        let x = p(3, &[(&[1, 2, 0], 2), (&[1, 1, 1], 2), (&[0, 3, 0], 2), (&[0, 2, 1], 3), (&[0, 1, 2], 1)]);
        assert_eq!(x.props(), PolyProps { nonneg: true, total_degree: 3, homogeneous: true });
        let mixed = &Poly::one(2) + &Poly::var(2, 0);
        assert!(!mixed.props().homogeneous);
    }

    #[test]
    fn json_roundtrip_and_order() {
        let x = p(3, &[(&[0, 1, 2], 1), (&[1, 2, 0], 2), (&[0, 3, 0], 2)]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(
            s,
            r#"{"rank":3,"terms":[{"exp":[1,2,0],"coef":"2"},{"exp":[0,3,0],"coef":"2"},{"exp":[0,1,2],"coef":"1"}]}"#
        );
        let back: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    fn arb_poly(rank: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((prop::collection::vec(0u16..3, rank), -5i64..6), 0..6)
            .prop_map(move |ts| Poly::from_terms(rank, ts.into_iter().map(|(e, c)| (e, Int::from(c)))).unwrap())
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(3), b in arb_poly(3), c in arb_poly(3)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn bar_scales_by_power_of_two(a in arb_poly(3)) {
            let barred = a.substitute(&Substitution::bar(3)).unwrap();
            prop_assert_eq!(barred.num_terms(), a.num_terms());
            for (m, c) in a.terms() {
                let k = Int::pow2(m.exps()[0] as u32);
                prop_assert_eq!(barred.coefficient(m.exps()), c * &k);
            }
        }
    }
}
