//! Newton polytopes and the saturated-Newton-polytope test.

use serde::{Deserialize, Serialize};

use super::lp::in_convex_hull;
use super::{Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolytope {
    /// Extreme points of the support, ascending graded-lex.
    pub vertices: Vec<Vec<u16>>,
    pub support: Vec<Vec<u16>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnpVerdict {
    pub saturated: bool,
    /// First lattice point (lex order) of the hull with zero coefficient.
    pub witness: Option<Vec<u16>>,
}

fn to_i64(p: &[u16]) -> Vec<i64> {
    p.iter().map(|&e| e as i64).collect()
}

impl NewtonPolytope {
    pub fn contains(&self, point: &[u16]) -> bool {
        let verts: Vec<Vec<i64>> = self.vertices.iter().map(|v| to_i64(v)).collect();
        in_convex_hull(&verts, &to_i64(point))
    }

    /// Every vertex of `self` lies in `other`, i.e. `self` is a subset of `other`.
    pub fn is_subset_of(&self, other: &NewtonPolytope) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }
}

impl Poly {
    pub fn newton_polytope(&self) -> Result<NewtonPolytope, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let support = self.support();
        let pts: Vec<Vec<i64>> = support.iter().map(|p| to_i64(p)).collect();
        let mut vertices = Vec::new();
        for (k, p) in pts.iter().enumerate() {
            let others: Vec<Vec<i64>> =
                pts.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, q)| q.clone()).collect();
            if !in_convex_hull(&others, p) {
                vertices.push(support[k].clone());
            }
        }
        Ok(NewtonPolytope { vertices, support })
    }

    /// Saturated Newton polytope test. The zero polynomial is saturated
    /// vacuously.
    pub fn snp_test(&self) -> SnpVerdict {
        if self.is_zero() {
            return SnpVerdict { saturated: true, witness: None };
        }
        let newton = self.newton_polytope().expect("nonzero");
        let rank = self.rank;
        let mut lo = vec![u16::MAX; rank];
        let mut hi = vec![0u16; rank];
        let (mut dmin, mut dmax) = (u32::MAX, 0u32);
        for p in &newton.support {
            for k in 0..rank {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
            let d: u32 = p.iter().map(|&e| e as u32).sum();
            dmin = dmin.min(d);
            dmax = dmax.max(d);
        }
        let verts: Vec<Vec<i64>> = newton.vertices.iter().map(|v| to_i64(v)).collect();
        let mut witness = None;
        let mut cur = vec![0u16; rank];
        box_points(&lo, &hi, dmin, dmax, 0, 0, &mut cur, &mut |pt| {
            if !self.coefficient(pt).is_zero() {
                return false;
            }
            if in_convex_hull(&verts, &to_i64(pt)) {
                witness = Some(pt.to_vec());
                return true;
            }
            false
        });
        SnpVerdict { saturated: witness.is_none(), witness }
    }
}

/// Visits lattice points of the box `lo..=hi` with coordinate sum in
/// `dmin..=dmax`, in lex order; stops when `visit` returns true.
#[allow(clippy::too_many_arguments)]
fn box_points(
    lo: &[u16],
    hi: &[u16],
    dmin: u32,
    dmax: u32,
    k: usize,
    sum: u32,
    cur: &mut Vec<u16>,
    visit: &mut dyn FnMut(&[u16]) -> bool,
) -> bool {
    if k == lo.len() {
        return (dmin..=dmax).contains(&sum) && visit(cur);
    }
    let rest_min: u32 = lo[k + 1..].iter().map(|&x| x as u32).sum();
    let rest_max: u32 = hi[k + 1..].iter().map(|&x| x as u32).sum();
    for e in lo[k]..=hi[k] {
        let s = sum + e as u32;
        if s + rest_min > dmax {
            break;
        }
        if s + rest_max < dmin {
            continue;
        }
        cur[k] = e;
        if box_points(lo, hi, dmin, dmax, k + 1, s, cur, visit) {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Int;

    fn p(rank: usize, terms: &[(&[u16], i64)]) -> Poly {
        Poly::from_terms(rank, terms.iter().map(|(e, c)| (e.to_vec(), Int::from(*c)))).unwrap()
    }

    /// Independent membership oracle: enumerate rational combinations of at
    /// most two support points with denominators up to `den`. Adequate for the
    /// small degree-2 examples below.
    fn pairwise_oracle(support: &[Vec<u16>], pt: &[u16], den: i64) -> bool {
        for a in support {
            for b in support {
                for t in 0..=den {
                    let ok = (0..pt.len()).all(|k| {
                        t * a[k] as i64 + (den - t) * b[k] as i64 == den * pt[k] as i64
                    });
                    if ok {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn simplex_vertices() {
        let f = &Poly::var(2, 0) + &Poly::var(2, 1);
        let n = f.newton_polytope().unwrap();
        assert_eq!(n.vertices, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(Poly::one(3).newton_polytope().unwrap().vertices, vec![vec![0, 0, 0]]);
        assert_eq!(Poly::zero(2).newton_polytope(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn lg_example_polytope() {
        // 3g1^2 + 10g1g2 + 8g2^2 + 5g1g3 + 8g2g3 + 2g3^2
        let f = p(3, &[(&[2, 0, 0], 3), (&[1, 1, 0], 10), (&[0, 2, 0], 8), (&[1, 0, 1], 5), (&[0, 1, 1], 8), (&[0, 0, 2], 2)]);
        let n = f.newton_polytope().unwrap();
        // the three pure squares are the vertices; mixed terms are edge midpoints
        assert_eq!(n.vertices, vec![vec![0, 0, 2], vec![0, 2, 0], vec![2, 0, 0]]);
        for s in &n.support {
            assert!(pairwise_oracle(&n.vertices, s, 2));
        }
        assert!(n.contains(&[1, 1, 0]));
        assert!(f.snp_test().saturated);
    }

    #[test]
    fn snp_verdicts() {
        let f = &Poly::var(2, 0) + &Poly::var(2, 1);
        assert_eq!(f.snp_test(), SnpVerdict { saturated: true, witness: None });
        let g = p(2, &[(&[2, 0], 1), (&[0, 2], 1)]);
        assert_eq!(g.snp_test(), SnpVerdict { saturated: false, witness: Some(vec![1, 1]) });
        let h = p(3, &[(&[0, 1, 0], 1), (&[0, 0, 1], 1)]);
        assert!(h.snp_test().saturated);
        assert!(Poly::zero(2).snp_test().saturated);
        // inhomogeneous: 1 + x^2 misses x
        let k = p(1, &[(&[0], 1), (&[2], 1)]);
        assert_eq!(k.snp_test().witness, Some(vec![1]));
    }

    #[test]
    fn snp_matches_pairwise_oracle_on_quadratics() {
        // every nonempty subset of the six degree-2 monomials in 3 variables
        let mons: Vec<Vec<u16>> = vec![
            vec![2, 0, 0], vec![1, 1, 0], vec![0, 2, 0], vec![1, 0, 1], vec![0, 1, 1], vec![0, 0, 2],
        ];
        for mask in 1u32..64 {
            let chosen: Vec<Vec<u16>> = (0..6).filter(|i| mask >> i & 1 == 1).map(|i| mons[i].clone()).collect();
            let f = Poly::from_terms(3, chosen.iter().map(|e| (e.clone(), Int::one()))).unwrap();
            let oracle = mons.iter().all(|m| chosen.contains(m) || !pairwise_oracle(&chosen, m, 2));
            assert_eq!(f.snp_test().saturated, oracle, "mask {mask:b}");
        }
    }
}
