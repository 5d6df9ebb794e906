//! Finite root systems in simple-root coordinates.
//!
//! Node labelings follow these conventions (1-based in all text I/O):
//!
//! * `B_n`, `C_n`: the doubled bond joins nodes 1 and 2. In `B_n` node 1 is
//!   the short simple root, in `C_n` it is the long one.
//! * `D_n`: fork nodes 1 and 2 both attach to node 3, then a chain 3-4-...-n.
//! * `F_4`: chain 1-2=3-4 with node 2 short and node 3 long, so nodes
//!   {2,3,4} induce a copy of `B_3`.
//! * `G_2`: node 1 is the short root.
//!
//! The Cartan matrix `A` is stored so that `s_i(alpha_j) = alpha_j - A[i][j] alpha_i`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{LinearForm, Substitution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSystemError {
    #[error("invalid rank {rank} for type {family}")]
    InvalidRank { family: Family, rank: usize },
    #[error("cannot parse type label {0:?}")]
    ParseLabel(String),
    #[error("simple index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("{0:?} is not a positive root")]
    NotAPositiveRoot(Vec<i32>),
    #[error("invalid Dynkin inclusion: {0}")]
    InvalidInclusion(String),
    #[error("folding needs D(n+1) -> B(n), got {0} -> {1}")]
    FoldingMismatch(TypeLabel, TypeLabel),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    F,
    G,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::F => "F",
            Family::G => "G",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeLabel {
    family: Family,
    rank: usize,
}

impl TypeLabel {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootSystemError> {
        let ok = match family {
            Family::A | Family::B | Family::C => rank >= 1,
            Family::D => rank >= 3,
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(TypeLabel { family, rank })
        } else {
            Err(RootSystemError::InvalidRank { family, rank })
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Display glyph for the simple-root variables of this type.
    pub fn glyph(&self) -> char {
        match self.family {
            Family::A => 'a',
            Family::B => 'b',
            Family::C => 'c',
            Family::D => 'd',
            Family::F => 'z',
            Family::G => 'g',
        }
    }

    /// Families whose elements have a (signed) permutation one-line form.
    pub fn is_classical(&self) -> bool {
        matches!(self.family, Family::A | Family::B | Family::C | Family::D)
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

impl FromStr for TypeLabel {
    type Err = RootSystemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || RootSystemError::ParseLabel(s.to_string());
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        TypeLabel::new(family, rank)
    }
}

impl Serialize for TypeLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TypeLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Small dense square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i32>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<i32>]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.len(), n, "matrix must be square");
            data.extend_from_slice(r);
        }
        IntMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> i32 {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i32) {
        self.data[r * self.n + c] = v;
    }

    pub fn entries(&self) -> &[i32] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<i32>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<i32> {
        (0..self.n).map(|r| self.get(r, c)).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        IntMatrix { n, data }
    }

    pub fn apply(&self, v: &[i32]) -> Vec<i32> {
        assert_eq!(v.len(), self.n);
        (0..self.n).map(|r| (0..self.n).map(|c| self.get(r, c) * v[c]).sum()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }

    pub fn pow(&self, k: u32) -> IntMatrix {
        (0..k).fold(IntMatrix::identity(self.n), |acc, _| acc.mul(self))
    }

    /// Determinant by fraction-free elimination (Bareiss).
    pub fn determinant(&self) -> i64 {
        let n = self.n;
        let mut m: Vec<Vec<i64>> = self.rows().into_iter().map(|r| r.into_iter().map(i64::from).collect()).collect();
        let mut sign = 1i64;
        let mut prev = 1i64;
        for k in 0..n {
            if m[k][k] == 0 {
                let Some(p) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                    return 0;
                };
                m.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        if n == 0 {
            1
        } else {
            sign * m[n - 1][n - 1]
        }
    }
}

/// A root in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root(pub Vec<i32>);

impl Root {
    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().all(|&c| c <= 0) && self.0.iter().any(|&c| c < 0)
    }

    pub fn height(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn to_linear_form(&self) -> LinearForm {
        LinearForm::new(self.0.iter().map(|&c| c as i64).collect()).expect("roots are nonzero")
    }
}

/// `alpha = (s_{word[0]} ... s_{word[k-1]})(alpha_{simple})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionExpr {
    pub word: Vec<usize>,
    pub simple: usize,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    label: TypeLabel,
    cartan: IntMatrix,
    simple_reflections: Vec<IntMatrix>,
    positive_roots: Vec<Root>,
    reflection_exprs: Vec<ReflectionExpr>,
    root_index: HashMap<Vec<i32>, usize>,
}

fn cartan_matrix(label: TypeLabel) -> IntMatrix {
    let n = label.rank;
    let mut a = IntMatrix::identity(n);
    for i in 0..n {
        a.set(i, i, 2);
    }
    let mut bond = |i: usize, j: usize, aij: i32, aji: i32| {
        a.set(i, j, aij);
        a.set(j, i, aji);
    };
    match label.family {
        Family::A => {
            for i in 0..n.saturating_sub(1) {
                bond(i, i + 1, -1, -1);
            }
        }
        Family::B | Family::C => {
            for i in 1..n.saturating_sub(1) {
                bond(i, i + 1, -1, -1);
            }
            if n >= 2 {
                if label.family == Family::B {
                    // node 1 short: s_1(alpha_2) = alpha_2 + 2 alpha_1
                    bond(0, 1, -2, -1);
                } else {
                    bond(0, 1, -1, -2);
                }
            }
        }
        Family::D => {
            bond(0, 2, -1, -1);
            bond(1, 2, -1, -1);
            for i in 2..n - 1 {
                bond(i, i + 1, -1, -1);
            }
        }
        Family::F => {
            bond(0, 1, -1, -1);
            bond(1, 2, -2, -1);
            bond(2, 3, -1, -1);
        }
        Family::G => {
            bond(0, 1, -3, -1);
        }
    }
    a
}

impl RootSystem {
    pub fn new(label: TypeLabel) -> Self {
        let cartan = cartan_matrix(label);
        let n = label.rank;
        let simple_reflections: Vec<IntMatrix> = (0..n)
            .map(|i| {
                let mut m = IntMatrix::identity(n);
                for j in 0..n {
                    m.set(i, j, m.get(i, j) - cartan.get(i, j));
                }
                m
            })
            .collect();

        // breadth-first closure of the simple roots under simple reflections
        let mut found: HashMap<Vec<i32>, ReflectionExpr> = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut v = vec![0; n];
            v[i] = 1;
            found.insert(v.clone(), ReflectionExpr { word: vec![], simple: i });
            queue.push_back(v);
        }
        while let Some(beta) = queue.pop_front() {
            let expr = found[&beta].clone();
            for (i, s) in simple_reflections.iter().enumerate() {
                let gamma = s.apply(&beta);
                if Root(gamma.clone()).is_positive() && !found.contains_key(&gamma) {
                    let mut word = vec![i];
                    word.extend_from_slice(&expr.word);
                    found.insert(gamma.clone(), ReflectionExpr { word, simple: expr.simple });
                    queue.push_back(gamma);
                }
            }
        }
        let mut roots: Vec<(Vec<i32>, ReflectionExpr)> = found.into_iter().collect();
        roots.sort_by(|(a, _), (b, _)| {
            let ha: i32 = a.iter().sum();
            let hb: i32 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        let root_index = roots.iter().enumerate().map(|(k, (r, _))| (r.clone(), k)).collect();
        let (positive_roots, reflection_exprs) = roots.into_iter().map(|(r, e)| (Root(r), e)).unzip();
        RootSystem { label, cartan, simple_reflections, positive_roots, reflection_exprs, root_index }
    }

    pub fn label(&self) -> TypeLabel {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.label.rank
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    /// Positive roots ordered by height, simple roots first in index order.
    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn reflection_expr(&self, k: usize) -> &ReflectionExpr {
        &self.reflection_exprs[k]
    }

    pub fn positive_root_index(&self, coords: &[i32]) -> Option<usize> {
        self.root_index.get(coords).copied()
    }

    /// Whether `coords` is a root (positive or negative).
    pub fn is_root(&self, coords: &[i32]) -> bool {
        if self.root_index.contains_key(coords) {
            return true;
        }
        let neg: Vec<i32> = coords.iter().map(|c| -c).collect();
        self.root_index.contains_key(&neg)
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        Root(v)
    }

    /// The matrix of `s_i` (0-based `i`) acting on simple-root coordinates.
    pub fn simple_reflection_matrix(&self, i: usize) -> Result<&IntMatrix, RootSystemError> {
        self.simple_reflections
            .get(i)
            .ok_or(RootSystemError::IndexOutOfRange { index: i, rank: self.rank() })
    }

    pub(crate) fn simple_reflections(&self) -> &[IntMatrix] {
        &self.simple_reflections
    }

    /// Product `s_{word[0]} ... s_{word[k-1]}`.
    pub fn word_matrix(&self, word: &[usize]) -> Result<IntMatrix, RootSystemError> {
        let mut m = IntMatrix::identity(self.rank());
        for &i in word {
            m = m.mul(self.simple_reflection_matrix(i)?);
        }
        Ok(m)
    }

    /// `s_alpha = w s_i w^{-1}` where `alpha = w(alpha_i)`.
    pub fn reflection_in_root(&self, alpha: &Root) -> Result<IntMatrix, RootSystemError> {
        let k = self
            .positive_root_index(&alpha.0)
            .ok_or_else(|| RootSystemError::NotAPositiveRoot(alpha.0.clone()))?;
        let expr = &self.reflection_exprs[k];
        let w = self.word_matrix(&expr.word)?;
        let rev: Vec<usize> = expr.word.iter().rev().copied().collect();
        let w_inv = self.word_matrix(&rev)?;
        Ok(w.mul(&self.simple_reflections[expr.simple]).mul(&w_inv))
    }

    /// Finite-type Cartan conditions on the stored matrix.
    pub fn cartan_is_valid(&self) -> bool {
        let a = &self.cartan;
        let n = a.dim();
        (0..n).all(|i| a.get(i, i) == 2)
            && (0..n).all(|i| {
                (0..n).all(|j| i == j || (a.get(i, j) <= 0 && ((a.get(i, j) == 0) == (a.get(j, i) == 0))))
            })
    }

    /// The classical count of positive roots for the type.
    pub fn expected_positive_roots(label: TypeLabel) -> usize {
        let n = label.rank;
        match label.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::F => 24,
            Family::G => 6,
        }
    }
}

/// An arrow-respecting injection of Dynkin diagrams, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynkinInclusion {
    source: TypeLabel,
    target: TypeLabel,
    node_map: Vec<usize>,
}

impl DynkinInclusion {
    pub fn new(source: TypeLabel, target: TypeLabel, node_map: Vec<usize>) -> Result<Self, RootSystemError> {
        let bad = |m: String| Err(RootSystemError::InvalidInclusion(m));
        if node_map.len() != source.rank {
            return bad(format!("node map has {} entries, source rank is {}", node_map.len(), source.rank));
        }
        if let Some(&j) = node_map.iter().find(|&&j| j >= target.rank) {
            return bad(format!("node {} exceeds target rank {}", j + 1, target.rank));
        }
        let mut seen = node_map.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != node_map.len() {
            return bad("node map is not injective".into());
        }
        let a = cartan_matrix(source);
        let b = cartan_matrix(target);
        for i in 0..source.rank {
            for j in 0..source.rank {
                if a.get(i, j) != b.get(node_map[i], node_map[j]) {
                    return bad(format!(
                        "Cartan entry ({},{}) = {} not preserved (target has {})",
                        i + 1,
                        j + 1,
                        a.get(i, j),
                        b.get(node_map[i], node_map[j])
                    ));
                }
            }
        }
        Ok(DynkinInclusion { source, target, node_map })
    }

    /// Parses `"1:2,2:3,3:4"` (1-based).
    pub fn parse(source: TypeLabel, target: TypeLabel, map: &str) -> Result<Self, RootSystemError> {
        let bad = || RootSystemError::InvalidInclusion(format!("cannot parse node map {map:?}"));
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for part in map.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (a, b) = part.split_once(':').ok_or_else(bad)?;
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            if a == 0 || b == 0 {
                return Err(bad());
            }
            pairs.push((a - 1, b - 1));
        }
        pairs.sort_unstable();
        if pairs.iter().enumerate().any(|(k, &(a, _))| a != k) {
            return Err(RootSystemError::InvalidInclusion(format!("node map {map:?} must list each source node once")));
        }
        Self::new(source, target, pairs.into_iter().map(|(_, b)| b).collect())
    }

    pub fn source(&self) -> TypeLabel {
        self.source
    }

    pub fn target(&self) -> TypeLabel {
        self.target
    }

    pub fn node_map(&self) -> &[usize] {
        &self.node_map
    }

    /// The variable map `alpha_i -> beta_{node_map(i)}`.
    pub fn psi(&self) -> Substitution {
        Substitution::relabeling(&self.node_map, self.target.rank)
    }
}

impl fmt::Display for DynkinInclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let map: Vec<String> = self.node_map.iter().enumerate().map(|(i, j)| format!("{}:{}", i + 1, j + 1)).collect();
        write!(f, "{} -> {} [{}]", self.source, self.target, map.join(","))
    }
}

/// Variable map from `D_{n+1}` to `B_n`: the two fork variables go to the
/// first `B` variable, variable `k >= 3` goes to `k - 1`.
pub fn folding_substitution(source: TypeLabel, target: TypeLabel) -> Result<Substitution, RootSystemError> {
    if source.family != Family::D || target.family != Family::B || source.rank != target.rank + 1 {
        return Err(RootSystemError::FoldingMismatch(source, target));
    }
    let map: Vec<usize> = (0..source.rank).map(|k| if k < 2 { 0 } else { k - 1 }).collect();
    Ok(Substitution::relabeling(&map, target.rank))
}
