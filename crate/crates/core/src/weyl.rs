//! Weyl group elements, words, Bruhat order and one-line codecs.
//!
//! An element is canonically its integer matrix acting on the root lattice.
//! For scans the whole group is enumerated once ([`WeylGroup`]) and elements
//! are then handled as dense indices ([`Elem`]) with precomputed left and
//! right multiplication tables.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::LinearForm;
use crate::rootsys::{Family, IntMatrix, Root, RootSystem, RootSystemError, TypeLabel, DynkinInclusion};

pub const DEFAULT_ENUMERATION_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error("group of type {label} exceeds the enumeration bound {limit}")]
    GroupTooLarge { label: TypeLabel, limit: usize },
    #[error("cannot parse word {0:?}")]
    ParseWord(String),
    #[error("cannot parse one-line notation {0:?}")]
    ParseOneLine(String),
    #[error("invalid one-line element for {label}: {reason}")]
    InvalidOneLine { label: TypeLabel, reason: String },
    #[error("type {0} has no one-line notation")]
    NoOneLine(TypeLabel),
    #[error("matrix is not an element of the Weyl group of {0}")]
    NotAnElement(TypeLabel),
    #[error("element belongs to {found}, expected {expected}")]
    WrongGroup { expected: TypeLabel, found: TypeLabel },
}

/// A word in the simple reflections; letters are 0-based, printed 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Builds a word from 1-based letters.
    pub fn from_one_based(letters: &[usize]) -> Self {
        Word(letters.iter().map(|&l| l - 1).collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self.0.iter().map(|i| format!("s{}", i + 1)).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Word {
    type Err = WeylError;
    /// Accepts `"s2 s1 s3"`, `"s2s1s3"`, `"2,1,3"`, `"2 1 3"`; empty or `"e"`
    /// is the identity.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WeylError::ParseWord(s.to_string());
        let t = s.trim();
        if t.is_empty() || t == "e" || t == "id" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        if t.contains(['s', 'S']) {
            for chunk in t.split(['s', 'S']).map(|c| c.trim_matches(|x: char| x == ',' || x.is_whitespace())) {
                if chunk.is_empty() {
                    continue;
                }
                let v: usize = chunk.parse().map_err(|_| bad())?;
                letters.push(v);
            }
        } else {
            for tok in t.split(|c: char| c == ',' || c.is_whitespace()).filter(|x| !x.is_empty()) {
                letters.push(tok.parse::<usize>().map_err(|_| bad())?);
            }
        }
        if letters.contains(&0) {
            return Err(bad());
        }
        Ok(Word::from_one_based(&letters))
    }
}

/// A group element as its matrix on simple-root coordinates, with length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    matrix: IntMatrix,
    length: usize,
}

/// `#{alpha > 0 : m(alpha) < 0}`.
pub fn inversion_count(rs: &RootSystem, m: &IntMatrix) -> usize {
    rs.positive_roots().iter().filter(|r| Root(m.apply(&r.0)).is_negative()).count()
}

impl WeylElement {
    pub fn identity(rs: &RootSystem) -> Self {
        WeylElement { matrix: IntMatrix::identity(rs.rank()), length: 0 }
    }

    /// The product `s_{i1} ... s_{im}`; the word need not be reduced.
    pub fn from_word(rs: &RootSystem, word: &Word) -> Result<Self, WeylError> {
        let matrix = rs.word_matrix(word.letters())?;
        let length = inversion_count(rs, &matrix);
        Ok(WeylElement { matrix, length })
    }

    pub fn from_matrix(rs: &RootSystem, matrix: IntMatrix) -> Result<Self, WeylError> {
        let images_are_roots = (0..rs.rank()).all(|j| rs.is_root(&matrix.column(j)));
        if matrix.dim() != rs.rank() || !images_are_roots || matrix.determinant().abs() != 1 {
            return Err(WeylError::NotAnElement(rs.label()));
        }
        let length = inversion_count(rs, &matrix);
        Ok(WeylElement { matrix, length })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Greedy reduced word: repeatedly strip the smallest left descent.
    pub fn reduced_word(&self, rs: &RootSystem) -> Word {
        let mut cur = self.matrix.clone();
        let mut len = self.length;
        let mut word = Vec::with_capacity(len);
        while len > 0 {
            let (i, next) = (0..rs.rank())
                .map(|i| (i, rs.simple_reflections()[i].mul(&cur)))
                .find(|(_, m)| inversion_count(rs, m) < len)
                .expect("a nonidentity element has a left descent");
            word.push(i);
            cur = next;
            len -= 1;
        }
        Word(word)
    }
}

/// Element handle inside an enumerated [`WeylGroup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(pub u32);

impl Elem {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

/// One-line notation: a (signed) permutation of `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedPermutation(pub Vec<i32>);

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        SignedPermutation((1..=n as i32).collect())
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    /// Number of negative entries.
    pub fn sign_count(&self) -> usize {
        self.0.iter().filter(|&&x| x < 0).count()
    }

    fn abs_is_permutation(&self) -> bool {
        let n = self.0.len();
        let mut seen = vec![false; n + 1];
        for &x in &self.0 {
            let a = x.unsigned_abs() as usize;
            if a == 0 || a > n || seen[a] {
                return false;
            }
            seen[a] = true;
        }
        true
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for SignedPermutation {
    type Err = WeylError;
    /// Space- or comma-separated integers, e.g. `"3 -2 1"`. A string of
    /// single digits with no separators (`"351624"`) is also accepted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WeylError::ParseOneLine(s.to_string());
        let t = s.trim();
        let toks: Vec<&str> = t.split(|c: char| c == ',' || c.is_whitespace()).filter(|x| !x.is_empty()).collect();
        let entries: Vec<i32> = if toks.len() == 1 && toks[0].len() > 1 && toks[0].chars().all(|c| c.is_ascii_digit()) {
            toks[0].chars().map(|c| c.to_digit(10).unwrap() as i32).collect()
        } else {
            toks.iter().map(|x| x.parse::<i32>().map_err(|_| bad())).collect::<Result<_, _>>()?
        };
        if entries.is_empty() {
            return Err(bad());
        }
        Ok(SignedPermutation(entries))
    }
}

/// Right action of a simple reflection on one-line notation (positions).
fn act_on_positions(family: Family, entries: &mut [i32], i: usize) {
    match family {
        Family::A => entries.swap(i, i + 1),
        Family::B | Family::C => {
            if i == 0 {
                entries[0] = -entries[0];
            } else {
                entries.swap(i - 1, i);
            }
        }
        Family::D => match i {
            0 => {
                let (a, b) = (entries[0], entries[1]);
                entries[0] = -b;
                entries[1] = -a;
            }
            1 => entries.swap(0, 1),
            _ => entries.swap(i - 1, i),
        },
        Family::F | Family::G => unreachable!("no one-line notation"),
    }
}

fn one_line_size(label: TypeLabel) -> Option<usize> {
    match label.family() {
        Family::A => Some(label.rank() + 1),
        Family::B | Family::C | Family::D => Some(label.rank()),
        _ => None,
    }
}

/// Dense bitset over group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElemSet {
    bits: Vec<u64>,
}

impl ElemSet {
    pub fn new(n: usize) -> Self {
        ElemSet { bits: vec![0; n.div_ceil(64)] }
    }

    pub fn insert(&mut self, e: Elem) -> bool {
        let (w, b) = (e.idx() / 64, e.idx() % 64);
        let fresh = self.bits[w] >> b & 1 == 0;
        self.bits[w] |= 1 << b;
        fresh
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.bits[e.idx() / 64] >> (e.idx() % 64) & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| Elem((w * 64 + b) as u32))
        })
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }
}

/// A fully enumerated Weyl group.
#[derive(Debug)]
pub struct WeylGroup {
    rs: RootSystem,
    elements: Vec<WeylElement>,
    index: HashMap<IntMatrix, Elem>,
    left: Vec<Elem>,
    right: Vec<Elem>,
    words: Vec<Word>,
    prefix_roots: Vec<Vec<LinearForm>>,
    one_line: Option<HashMap<SignedPermutation, Elem>>,
}

impl WeylGroup {
    pub fn new(label: TypeLabel) -> Result<Self, WeylError> {
        Self::with_limit(label, DEFAULT_ENUMERATION_LIMIT)
    }

    pub fn with_limit(label: TypeLabel, limit: usize) -> Result<Self, WeylError> {
        let rs = RootSystem::new(label);
        let n = rs.rank();
        let gens = rs.simple_reflections().to_vec();

        // breadth-first search on the right Cayley graph; depth = length
        let mut seen: HashMap<IntMatrix, usize> = HashMap::new();
        let mut found: Vec<WeylElement> = Vec::new();
        let mut queue = VecDeque::new();
        let id = IntMatrix::identity(n);
        seen.insert(id.clone(), 0);
        found.push(WeylElement { matrix: id.clone(), length: 0 });
        queue.push_back(0usize);
        while let Some(k) = queue.pop_front() {
            let (m, len) = (found[k].matrix.clone(), found[k].length);
            for g in &gens {
                let next = m.mul(g);
                if !seen.contains_key(&next) {
                    if found.len() >= limit {
                        return Err(WeylError::GroupTooLarge { label, limit });
                    }
                    seen.insert(next.clone(), found.len());
                    found.push(WeylElement { matrix: next, length: len + 1 });
                    queue.push_back(found.len() - 1);
                }
            }
        }
        found.sort_by(|a, b| a.length.cmp(&b.length).then_with(|| a.matrix.entries().cmp(b.matrix.entries())));
        let index: HashMap<IntMatrix, Elem> =
            found.iter().enumerate().map(|(k, e)| (e.matrix.clone(), Elem(k as u32))).collect();

        let size = found.len();
        let mut left = Vec::with_capacity(size * n);
        let mut right = Vec::with_capacity(size * n);
        for e in &found {
            for g in &gens {
                left.push(index[&g.mul(&e.matrix)]);
            }
            for g in &gens {
                right.push(index[&e.matrix.mul(g)]);
            }
        }

        // canonical words: smallest left descent, then recurse (elements are length-sorted)
        let mut words: Vec<Word> = Vec::with_capacity(size);
        for k in 0..size {
            if found[k].length == 0 {
                words.push(Word::empty());
                continue;
            }
            let (i, rest) = (0..n)
                .map(|i| (i, left[k * n + i]))
                .find(|&(_, r)| found[r.idx()].length < found[k].length)
                .expect("left descent exists");
            let mut w = vec![i];
            w.extend_from_slice(&words[rest.idx()].0);
            words.push(Word(w));
        }

        let mut group = WeylGroup {
            rs,
            elements: found,
            index,
            left,
            right,
            words,
            prefix_roots: Vec::new(),
            one_line: None,
        };
        group.prefix_roots = (0..size).map(|k| group.prefix_roots_of_word(&group.words[k].clone())).collect();
        if one_line_size(label).is_some() {
            let map = (0..size as u32).map(|k| (group.one_line_of_word(&group.words[k as usize]), Elem(k))).collect();
            group.one_line = Some(map);
        }
        Ok(group)
    }

    pub fn rs(&self) -> &RootSystem {
        &self.rs
    }

    pub fn label(&self) -> TypeLabel {
        self.rs.label()
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// All elements sorted by (length, matrix entries).
    pub fn elements(&self) -> impl ExactSizeIterator<Item = Elem> + Clone {
        (0..self.elements.len() as u32).map(Elem)
    }

    pub fn element(&self, e: Elem) -> &WeylElement {
        &self.elements[e.idx()]
    }

    pub fn find(&self, m: &IntMatrix) -> Option<Elem> {
        self.index.get(m).copied()
    }

    pub fn identity(&self) -> Elem {
        Elem(0)
    }

    pub fn longest(&self) -> Elem {
        Elem(self.elements.len() as u32 - 1)
    }

    pub fn length(&self, e: Elem) -> usize {
        self.elements[e.idx()].length
    }

    /// `s_i * e`.
    pub fn lmul(&self, i: usize, e: Elem) -> Elem {
        self.left[e.idx() * self.rank() + i]
    }

    /// `e * s_i`.
    pub fn rmul(&self, e: Elem, i: usize) -> Elem {
        self.right[e.idx() * self.rank() + i]
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.words[b.idx()].0.iter().fold(a, |acc, &i| self.rmul(acc, i))
    }

    pub fn inverse(&self, e: Elem) -> Elem {
        self.words[e.idx()].0.iter().fold(self.identity(), |acc, &i| self.lmul(i, acc))
    }

    pub fn is_left_descent(&self, e: Elem, i: usize) -> bool {
        self.length(self.lmul(i, e)) < self.length(e)
    }

    pub fn is_right_descent(&self, e: Elem, i: usize) -> bool {
        self.length(self.rmul(e, i)) < self.length(e)
    }

    pub fn element_from_word(&self, word: &Word) -> Result<Elem, WeylError> {
        let mut e = self.identity();
        for &i in word.letters() {
            if i >= self.rank() {
                return Err(RootSystemError::IndexOutOfRange { index: i, rank: self.rank() }.into());
            }
            e = self.rmul(e, i);
        }
        Ok(e)
    }

    /// The canonical reduced word (smallest left descent first).
    pub fn reduced_word(&self, e: Elem) -> &Word {
        &self.words[e.idx()]
    }

    /// Roots `r_k = (s_{i1} ... s_{i(k-1)})(alpha_{ik})` for the canonical
    /// reduced word of `e`: the inversion set of `e^{-1}` in word order.
    pub fn prefix_roots(&self, e: Elem) -> &[LinearForm] {
        &self.prefix_roots[e.idx()]
    }

    pub fn prefix_roots_of_word(&self, word: &Word) -> Vec<LinearForm> {
        let mut prefix = IntMatrix::identity(self.rank());
        let mut out = Vec::with_capacity(word.len());
        for &i in word.letters() {
            let r: Vec<i64> = prefix.column(i).into_iter().map(i64::from).collect();
            out.push(LinearForm::new(r).expect("root"));
            prefix = prefix.mul(&self.rs.simple_reflections()[i]);
        }
        out
    }

    /// Whether `word` is a reduced word (for the element it multiplies to).
    pub fn is_reduced(&self, word: &Word) -> bool {
        let mut e = self.identity();
        for &i in word.letters() {
            let next = self.rmul(e, i);
            if self.length(next) <= self.length(e) {
                return false;
            }
            e = next;
        }
        true
    }

    /// Bruhat order by the lifting recursion: for a left descent `s` of `v`,
    /// `w <= v` iff `sw <= sv` (when `s` is a descent of `w`) or `w <= sv`.
    pub fn leq(&self, w: Elem, v: Elem) -> bool {
        let (mut w, mut v) = (w, v);
        loop {
            let (lw, lv) = (self.length(w), self.length(v));
            if lw > lv {
                return false;
            }
            if lw == 0 {
                return true;
            }
            if lw == lv {
                return w == v;
            }
            let s = self.words[v.idx()].0[0];
            let sw = self.lmul(s, w);
            if self.length(sw) < lw {
                w = sw;
            }
            v = self.lmul(s, v);
        }
    }

    /// `{z : z <= w}` as subword products of the canonical word of `w`.
    pub fn interval_below_set(&self, w: Elem) -> ElemSet {
        let mut set = ElemSet::new(self.size());
        let mut members = vec![self.identity()];
        set.insert(self.identity());
        for &i in self.words[w.idx()].letters() {
            let grown: Vec<Elem> = members.iter().map(|&z| self.rmul(z, i)).collect();
            for z in grown {
                if set.insert(z) {
                    members.push(z);
                }
            }
        }
        set
    }

    /// Elements below `w` in Bruhat order, in index order.
    pub fn interval_below(&self, w: Elem) -> Vec<Elem> {
        self.interval_below_set(w).iter().collect()
    }

    pub fn interval_above(&self, u: Elem) -> Vec<Elem> {
        self.elements().filter(|&z| self.leq(u, z)).collect()
    }

    /// `v < v'` with `l(v') = l(v) + 1`.
    pub fn covers(&self, v: Elem, v_prime: Elem) -> bool {
        self.length(v_prime) == self.length(v) + 1 && self.leq(v, v_prime)
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Elem {
        Elem(rng.gen_range(0..self.size() as u32))
    }

    fn one_line_of_word(&self, word: &Word) -> SignedPermutation {
        let n = one_line_size(self.label()).expect("classical type");
        let mut entries: Vec<i32> = (1..=n as i32).collect();
        for &i in word.letters() {
            act_on_positions(self.label().family(), &mut entries, i);
        }
        SignedPermutation(entries)
    }

    /// One-line form; `s_i` acts on positions from the right.
    pub fn to_one_line(&self, e: Elem) -> Result<SignedPermutation, WeylError> {
        if self.one_line.is_none() {
            return Err(WeylError::NoOneLine(self.label()));
        }
        Ok(self.one_line_of_word(&self.words[e.idx()]))
    }

    pub fn from_one_line(&self, p: &SignedPermutation) -> Result<Elem, WeylError> {
        let label = self.label();
        let Some(map) = &self.one_line else {
            return Err(WeylError::NoOneLine(label));
        };
        let invalid = |reason: String| WeylError::InvalidOneLine { label, reason };
        let n = one_line_size(label).unwrap();
        if p.0.len() != n {
            return Err(invalid(format!("expected {n} entries, got {}", p.0.len())));
        }
        if !p.abs_is_permutation() {
            return Err(invalid("absolute values are not a permutation".into()));
        }
        match label.family() {
            Family::A if p.sign_count() > 0 => return Err(invalid("type A entries must be positive".into())),
            Family::D if p.sign_count() % 2 == 1 => return Err(invalid("type D needs an even number of negative entries".into())),
            _ => {}
        }
        map.get(p).copied().ok_or_else(|| invalid("not in the group".into()))
    }

    /// One-line form for classical types, canonical reduced word otherwise.
    pub fn format_element(&self, e: Elem) -> String {
        match self.to_one_line(e) {
            Ok(p) => p.to_string(),
            Err(_) => self.words[e.idx()].to_string(),
        }
    }

    /// Parses a word (`"s2 s1"`, empty for the identity) or, for classical
    /// types, one-line notation (`"3 -2 1"`). Bare integer lists are read as
    /// one-line notation whenever the type has one.
    pub fn parse_element(&self, s: &str) -> Result<Elem, WeylError> {
        let t = s.trim();
        if t.is_empty() || t == "e" || t == "id" || t.contains(['s', 'S']) {
            return self.element_from_word(&t.parse()?);
        }
        if self.one_line.is_some() {
            self.from_one_line(&t.parse()?)
        } else {
            self.element_from_word(&t.parse()?)
        }
    }
}

/// The image `w°` of `w` under a Dynkin inclusion: relabel a reduced word.
pub fn transport_element(inc: &DynkinInclusion, source: &WeylGroup, target: &WeylGroup, w: Elem) -> Result<Elem, WeylError> {
    if source.label() != inc.source() {
        return Err(WeylError::WrongGroup { expected: inc.source(), found: source.label() });
    }
    if target.label() != inc.target() {
        return Err(WeylError::WrongGroup { expected: inc.target(), found: target.label() });
    }
    let word = Word(source.reduced_word(w).letters().iter().map(|&i| inc.node_map()[i]).collect());
    target.element_from_word(&word)
}
