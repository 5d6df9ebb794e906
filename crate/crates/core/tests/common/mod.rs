//! Independent oracles for integration tests.
//!
//! Everything here is rebuilt from a hardcoded Cartan matrix with plain
//! vectors and maps: no group tables, no Bruhat order, no DP. Only words and
//! the final comparison touch the library.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use eqschub::poly::Poly;

pub fn cartan(label: &str) -> Vec<Vec<i64>> {
    let rows: &[&[i64]] = match label {
        "A2" => &[&[2, -1], &[-1, 2]],
        "A3" => &[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]],
        "B2" => &[&[2, -2], &[-1, 2]],
        "C2" => &[&[2, -1], &[-2, 2]],
        "G2" => &[&[2, -3], &[-1, 2]],
        "B3" => &[&[2, -2, 0], &[-1, 2, -1], &[0, -1, 2]],
        "F4" => &[&[2, -1, 0, 0], &[-1, 2, -2, 0], &[0, -1, 2, -1], &[0, 0, -1, 2]],
        other => panic!("no oracle Cartan matrix for {other}"),
    };
    rows.iter().map(|r| r.to_vec()).collect()
}

/// Root system data computed from scratch.
pub struct Oracle {
    a: Vec<Vec<i64>>,
    positive: HashSet<Vec<i64>>,
}

/// A group element as the images of the simple roots.
pub type Mat = Vec<Vec<i64>>;

impl Oracle {
    pub fn new(label: &str) -> Self {
        let a = cartan(label);
        let n = a.len();
        let mut positive = HashSet::new();
        let mut frontier: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i)).collect();
        while let Some(r) = frontier.pop() {
            if r.iter().all(|&c| c >= 0) && positive.insert(r.clone()) {
                for i in 0..n {
                    frontier.push(reflect(&a, i, &r));
                }
            }
        }
        Oracle { a, positive }
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn positive_count(&self) -> usize {
        self.positive.len()
    }

    /// Applies `s_{w_1} ... s_{w_k}` to `x`.
    pub fn act(&self, word: &[usize], x: &[i64]) -> Vec<i64> {
        word.iter().rev().fold(x.to_vec(), |acc, &i| reflect(&self.a, i, &acc))
    }

    pub fn matrix(&self, word: &[usize]) -> Mat {
        (0..self.rank()).map(|j| self.act(word, &unit(self.rank(), j))).collect()
    }

    /// Number of positive roots sent negative.
    pub fn length(&self, word: &[usize]) -> usize {
        self.positive.iter().filter(|r| self.act(word, r).iter().any(|&c| c < 0)).count()
    }

    /// Every nonzero `xi_w|_v`, keyed by the matrix of `w`, by summing over
    /// all `2^m` subwords of `v_word` and keeping the reduced ones.
    pub fn naive_column(&self, v_word: &[usize]) -> HashMap<Mat, BTreeMap<Vec<u32>, i64>> {
        let m = v_word.len();
        let roots: Vec<Vec<i64>> = (0..m).map(|k| self.act(&v_word[..k], &unit(self.rank(), v_word[k]))).collect();
        let mut out: HashMap<Mat, BTreeMap<Vec<u32>, i64>> = HashMap::new();
        for mask in 0u32..(1 << m) {
            let picked: Vec<usize> = (0..m).filter(|&k| mask >> k & 1 == 1).collect();
            let sub: Vec<usize> = picked.iter().map(|&k| v_word[k]).collect();
            if self.length(&sub) != sub.len() {
                continue;
            }
            let mut term: BTreeMap<Vec<u32>, i64> = BTreeMap::from([(vec![0; self.rank()], 1)]);
            for &k in &picked {
                term = mul_linear(&term, &roots[k]);
            }
            let acc = out.entry(self.matrix(&sub)).or_default();
            for (e, c) in term {
                *acc.entry(e).or_insert(0) += c;
            }
        }
        for p in out.values_mut() {
            p.retain(|_, c| *c != 0);
        }
        out.retain(|_, p| !p.is_empty());
        out
    }

    /// Products of all subwords of `v_word` (the Bruhat interval below `v`).
    pub fn subword_products(&self, v_word: &[usize]) -> HashSet<Mat> {
        let m = v_word.len();
        (0u32..(1 << m))
            .map(|mask| {
                let sub: Vec<usize> = (0..m).filter(|&k| mask >> k & 1 == 1).map(|k| v_word[k]).collect();
                self.matrix(&sub)
            })
            .collect()
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// `s_i(x) = x - <x, alpha_i^vee> alpha_i`, with `<alpha_j, alpha_i^vee> = A[i][j]`.
fn reflect(a: &[Vec<i64>], i: usize, x: &[i64]) -> Vec<i64> {
    let pairing: i64 = (0..x.len()).map(|j| a[i][j] * x[j]).sum();
    let mut y = x.to_vec();
    y[i] -= pairing;
    y
}

fn mul_linear(p: &BTreeMap<Vec<u32>, i64>, l: &[i64]) -> BTreeMap<Vec<u32>, i64> {
    let mut out = BTreeMap::new();
    for (e, c) in p {
        for (i, &k) in l.iter().enumerate() {
            if k != 0 {
                let mut e2 = e.clone();
                e2[i] += 1;
                *out.entry(e2).or_insert(0) += c * k;
            }
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// A library polynomial in the oracle's representation.
pub fn to_map(p: &Poly) -> BTreeMap<Vec<u32>, i64> {
    p.terms()
        .map(|(m, c)| {
            let e = m.exps().iter().map(|&x| x as u32).collect();
            (e, c.to_string().parse::<i64>().expect("small coefficient"))
        })
        .collect()
}
