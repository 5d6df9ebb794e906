//! Batch scans over theorems, conjectures and known counterexamples.
//!
//! Every scan enumerates a list of work units (elements, pairs, triples or
//! chains), optionally samples it with a seeded RNG, maps the units through
//! [`exec::map`](crate::exec::map) and concatenates the findings in unit
//! order. Reports therefore do not depend on the number of jobs.
//!
//! Conjecture scans report counterexamples rather than failing. Known
//! counterexamples from the literature are replayed as fixtures: a fixture
//! that does not reproduce is itself reported as a counterexample.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};
use std::time::Instant;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::billey::{
    arabia_roots, check_arabia, check_monotonicity, restrict_diag, restrict_on_word, squarefree_summand_audit,
    transport_restriction_check, uses_outside_node, BilleyError, PrefixRoots, RestrictionTable,
};
use crate::coeffs::{
    bc_correspondence, bc_restriction_check, coeff_identity_check, defining_identity_holds, oglg_correspondence,
    transport_coeff_check, CoeffError, CoeffSolver, StrictPartition,
};
use crate::exec;
use crate::poly::{Poly, SnpVerdict};
use crate::rootsys::{folding_substitution, DynkinInclusion, Family, RootSystemError, TypeLabel};
use crate::weyl::{Elem, SignedPermutation, WeylError, WeylGroup, Word};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("invalid scan configuration: {0}")]
    Config(String),
    #[error(transparent)]
    RootSystem(#[from] RootSystemError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Billey(#[from] BilleyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    /// Interval nonvanishing conjecture, parts (I) and (II).
    Interval,
    SnpRestrictions,
    SnpCoeffs,
    Monotonicity,
    Arabia,
    Folding,
    NewtonMonotone,
    Bc,
    OgLg,
    Transport,
    RestrictionProperties,
    CoeffProperties,
}

impl Property {
    pub const ALL: [Property; 12] = [
        Property::Interval,
        Property::SnpRestrictions,
        Property::SnpCoeffs,
        Property::Monotonicity,
        Property::Arabia,
        Property::Folding,
        Property::NewtonMonotone,
        Property::Bc,
        Property::OgLg,
        Property::Transport,
        Property::RestrictionProperties,
        Property::CoeffProperties,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Property::Interval => "interval",
            Property::SnpRestrictions => "snp-restrictions",
            Property::SnpCoeffs => "snp-coeffs",
            Property::Monotonicity => "monotonicity",
            Property::Arabia => "arabia",
            Property::Folding => "folding",
            Property::NewtonMonotone => "newton-monotone",
            Property::Bc => "bc",
            Property::OgLg => "oglg",
            Property::Transport => "transport",
            Property::RestrictionProperties => "restriction-properties",
            Property::CoeffProperties => "coeff-properties",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Property {
    type Err = VerifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL
            .into_iter()
            .find(|p| p.id() == s)
            .ok_or_else(|| VerifyError::Config(format!("unknown property {s:?}")))
    }
}

impl Serialize for Property {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

impl<'de> Deserialize<'de> for Property {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// What to scan and over which range. `jobs` is not echoed in reports
/// since it never affects results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub property: Property,
    pub label: TypeLabel,
    /// Transport target and node map (`"1:2,2:3"`), for `transport`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<TypeLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_map: Option<String>,
    /// Only elements of length at most this.
    pub max_length: Option<usize>,
    /// Check every unit; otherwise `samples` units drawn with `seed`.
    pub exhaustive: bool,
    pub samples: usize,
    pub seed: u64,
    /// Arabia: only simple roots instead of all positive roots.
    pub simple_only: bool,
    /// Replay the literature counterexamples tied to the property.
    pub fixtures: bool,
    #[serde(skip)]
    pub jobs: usize,
}

impl ScanConfig {
    pub fn new(property: Property, label: TypeLabel) -> Self {
        ScanConfig {
            property,
            label,
            target: None,
            node_map: None,
            max_length: None,
            exhaustive: true,
            samples: 0,
            seed: 0,
            simple_only: false,
            fixtures: true,
            jobs: exec::default_jobs(),
        }
    }

    pub fn sampled(mut self, samples: usize, seed: u64) -> Self {
        self.exhaustive = false;
        self.samples = samples;
        self.seed = seed;
        self
    }

    pub fn max_length(mut self, l: usize) -> Self {
        self.max_length = Some(l);
        self
    }

    pub fn jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn without_fixtures(mut self) -> Self {
        self.fixtures = false;
        self
    }

    pub fn transport(mut self, target: TypeLabel, node_map: &str) -> Self {
        self.target = Some(target);
        self.node_map = Some(node_map.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub inputs: BTreeMap<String, String>,
    pub lhs: Option<Poly>,
    pub rhs: Option<Poly>,
    pub detail: String,
}

impl Counterexample {
    fn new(detail: impl Into<String>, inputs: &[(&str, String)]) -> Self {
        Counterexample {
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            lhs: None,
            rhs: None,
            detail: detail.into(),
        }
    }

    fn sides(mut self, lhs: Poly, rhs: Poly) -> Self {
        self.lhs = Some(lhs);
        self.rhs = Some(rhs);
        self
    }
}

/// A replayed example with a known outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub reproduced: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub property: Property,
    pub config: ScanConfig,
    pub cases: u64,
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_ms: u64,
    #[serde(default)]
    pub stats: BTreeMap<String, u64>,
    #[serde(default)]
    pub fixtures: Vec<Fixture>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// The report with timing zeroed, for byte-level comparisons.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = 0;
        self
    }
}

#[derive(Default)]
struct Findings {
    cases: u64,
    counterexamples: Vec<Counterexample>,
    stats: BTreeMap<String, u64>,
    fixtures: Vec<Fixture>,
}

impl Findings {
    fn stat(&mut self, key: &str, n: u64) {
        *self.stats.entry(key.to_string()).or_insert(0) += n;
    }

    fn absorb(&mut self, other: Findings) {
        self.cases += other.cases;
        self.counterexamples.extend(other.counterexamples);
        for (k, v) in other.stats {
            *self.stats.entry(k).or_insert(0) += v;
        }
        self.fixtures.extend(other.fixtures);
    }

    fn fixture(&mut self, name: &str, expected: String, observed: String) {
        let reproduced = expected == observed;
        if !reproduced {
            self.counterexamples.push(Counterexample::new(
                format!("fixture {name} not reproduced"),
                &[("expected", expected.clone()), ("observed", observed.clone())],
            ));
        }
        self.fixtures.push(Fixture { name: name.to_string(), expected, observed, reproduced });
    }
}

/// Runs shards in parallel and merges them in shard order.
fn run_units<T: Sync>(jobs: usize, units: &[T], f: impl Fn(&T) -> Result<Findings, VerifyError> + Sync + Send) -> Result<Findings, VerifyError> {
    let mut out = Findings::default();
    for r in exec::map(jobs, units, f) {
        out.absorb(r?);
    }
    Ok(out)
}

/// Unit indices `0..total`, all or a seeded sample (ascending).
fn unit_indices(total: usize, cfg: &ScanConfig) -> Vec<usize> {
    if cfg.exhaustive || cfg.samples >= total {
        return (0..total).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut picked = index::sample(&mut rng, total, cfg.samples).into_vec();
    picked.sort_unstable();
    picked
}

fn range(g: &WeylGroup, cfg: &ScanConfig) -> Vec<Elem> {
    g.elements().filter(|&e| cfg.max_length.is_none_or(|l| g.length(e) <= l)).collect()
}

fn pairs(range: &[Elem], cfg: &ScanConfig) -> Vec<(Elem, Elem)> {
    let n = range.len();
    unit_indices(n * n, cfg).into_iter().map(|k| (range[k / n], range[k % n])).collect()
}

fn triples(range: &[Elem], cfg: &ScanConfig) -> Vec<(Elem, Elem, Elem)> {
    let n = range.len();
    unit_indices(n * n * n, cfg)
        .into_iter()
        .map(|k| (range[k / (n * n)], range[k / n % n], range[k % n]))
        .collect()
}

fn solver_for(label: TypeLabel) -> Result<CoeffSolver, VerifyError> {
    Ok(CoeffSolver::for_label(label)?)
}

/// SNP verdicts only depend on the support, which many polynomials share.
#[derive(Default)]
struct SnpCache {
    verdicts: RwLock<HashMap<Vec<Vec<u16>>, SnpVerdict>>,
}

impl SnpCache {
    fn test(&self, p: &Poly) -> SnpVerdict {
        let key = p.support();
        if let Some(v) = self.verdicts.read().expect("snp cache").get(&key) {
            return v.clone();
        }
        let verdict = p.snp_test();
        self.verdicts.write().expect("snp cache").insert(key, verdict.clone());
        verdict
    }
}

pub fn run_scan(cfg: &ScanConfig) -> Result<ScanReport, VerifyError> {
    let start = Instant::now();
    let findings = match cfg.property {
        Property::Interval => scan_conjecture_interval(cfg)?,
        Property::SnpRestrictions => scan_snp_restrictions(cfg)?,
        Property::SnpCoeffs => scan_snp_coeffs(cfg)?,
        Property::Monotonicity => scan_monotonicity(cfg)?,
        Property::Arabia => scan_arabia(cfg)?,
        Property::Folding => scan_folding(cfg)?,
        Property::NewtonMonotone => scan_newton_monotone(cfg)?,
        Property::Bc => scan_bc(cfg)?,
        Property::OgLg => scan_oglg(cfg)?,
        Property::Transport => scan_transport(cfg)?,
        Property::RestrictionProperties => scan_restriction_properties(cfg)?,
        Property::CoeffProperties => scan_coeff_properties(cfg)?,
    };
    Ok(ScanReport {
        property: cfg.property,
        config: cfg.clone(),
        cases: findings.cases,
        counterexamples: findings.counterexamples,
        elapsed_ms: start.elapsed().as_millis() as u64,
        stats: findings.stats,
        fixtures: findings.fixtures,
    })
}

fn scan_conjecture_interval(cfg: &ScanConfig) -> Result<Findings, VerifyError> {
    let solver = solver_for(cfg.label)?;
    let g = solver.group();
    let range = range(g, cfg);
    let in_range = |e: Elem| cfg.max_length.is_none_or(|l| g.length(e) <= l);
    let units = pairs(&range, cfg);
    let mut out = run_units(cfg.jobs, &units, |&(u, v)| {
        let mut f = Findings::default();
        let vector = solver.solve(u, v)?;
        for (w, _) in vector.nonzero().filter(|&(w, _)| in_range(w)) {
            f.cases += 1;
            let name = |x: Elem| g.format_element(x);
            for i in 0..g.rank() {
                let sv = g.lmul(i, v);
                if g.length(sv) > g.length(v) && g.leq(sv, w) && solver.coeff_value(u, sv, w)?.is_zero() {
                    f.counterexamples.push(Counterexample::new(
                        "(I): C_{u,s v}^w = 0 although v < s v <= w",
                        &[("u", name(u)), ("v", name(v)), ("w", name(w)), ("s", format!("s{}", i + 1))],
                    ));
                }
            }
            if g.length(w) < g.length(u) + g.length(v) {
                f.stat("part_ii_cases", 1);
                let mut found = false;
                for i in 0..g.rank() {
                    let sv = g.lmul(i, v);
                    if g.length(sv) < g.length(v) && !solver.coeff_value(u, sv, w)?.is_zero() {
                        found = true;
                        break;
                    }
                }
                if !found {
                    f.counterexamples.push(Counterexample::new(
                        "(II): no simple s with s v < v and C_{u,s v}^w != 0",
                        &[("u", name(u)), ("v", name(v)), ("w", name(w))],
                    ));
                }
            }
        }
        Ok(f)
    })?;
    if cfg.fixtures {
        interval_fixtures(&mut out)?;
    }
    Ok(out)
}

fn interval_fixtures(out: &mut Findings) -> Result<(), VerifyError> {
    let b3 = solver_for("B3".parse()?)?;
    let g = b3.group();
    let e = |s: &str| g.parse_element(s);
    let (u, w) = (e("s2 s3")?, e("s2 s1 s3")?);
    let v = e("s1 s3")?;
    let values = [
        b3.coeff_value(u, v, w)?,
        b3.coeff_value(u, g.lmul(0, v), w)?,
        b3.coeff_value(u, g.lmul(2, v), w)?,
    ];
    let observed: Vec<String> = values.iter().map(|p| p.to_text('b')).collect();
    out.fixture("B3 interval (II) needs the existential", "b2 + b3, 0, 1".into(), observed.join(", "));

    let a2 = solver_for("A2".parse()?)?;
    let g = a2.group();
    let e = |s: &str| g.parse_element(s);
    let (u, w) = (e("s1 s2")?, e("s1 s2 s1")?);
    let values = [
        a2.coeff_value(u, e("s1")?, w)?,
        a2.coeff_value(u, e("s1 s2")?, w)?,
        a2.coeff_value(u, e("s2 s1")?, w)?,
        a2.coeff_value(u, e("s2 s1 s1")?, w)?,
    ];
    let observed: Vec<String> = values.iter().map(|p| p.to_text('a')).collect();
    out.fixture("A2 no righthand version", "1, 0, a1 + a2, 0".into(), observed.join(", "));
    Ok(())
}

fn snp_finding(verdict: &SnpVerdict, p: &Poly, what: &str, inputs: &[(&str, String)]) -> Option<Counterexample> {
    if verdict.saturated {
        return None;
    }
    let mut c = Counterexample::new(format!("{what} lacks SNP; missing lattice point {:?}", verdict.witness), inputs);
    c.lhs = Some(p.clone());
    Some(c)
}

fn scan_snp_restrictions(cfg: &ScanConfig) -> Result<Findings, VerifyError> {
    let group = Arc::new(WeylGroup::new(cfg.label)?);
    let table = RestrictionTable::new(group.clone());
    let range = range(&group, cfg);
    let units: Vec<Elem> = unit_indices(range.len(), cfg).into_iter().map(|k| range[k]).collect();
    let cache = SnpCache::default();
    run_units(cfg.jobs, &units, |&v| {
        let mut f = Findings::default();
        let col = table.column(v);
        for w in col.support() {
            f.cases += 1;
            let p = col.get(w).expect("in support");
            let inputs = [("w", group.format_element(w)), ("v", group.format_element(v))];
            f.counterexamples.extend(snp_finding(&cache.test(p), p, "restriction", &inputs));
        }
        Ok(f)
    })
}

fn scan_snp_coeffs(cfg: &ScanConfig) -> Result<Findings, VerifyError> {
    let solver = solver_for(cfg.label)?;
    let g = solver.group();
    let range = range(g, cfg);
    let units = pairs(&range, cfg);
    let cache = SnpCache::default();
    run_units(cfg.jobs, &units, |&(u, v)| {
        let mut f = Findings::default();
        for (w, p) in solver.solve(u, v)?.nonzero() {
            f.cases += 1;
            let inputs = [("u", g.format_element(u)), ("v", g.format_element(v)), ("w", g.format_element(w))];
            f.counterexamples.extend(snp_finding(&cache.test(p), p, "coefficient", &inputs));
        }
        Ok(f)
    })
}

fn scan_monotonicity(cfg: &ScanConfig) -> Result<Findings, VerifyError> {
    let solver = solver_for(cfg.label)?;
    let g = solver.group();
    let range = range(g, cfg);
    let units: Vec<Elem> = unit_indices(range.len(), cfg).into_iter().map(|k| range[k]).collect();
    let mut out = run_units(cfg.jobs, &units, |&v| {
        let mut f = Findings::default();
        let covers: Vec<Elem> = range.iter().copied().filter(|&x| g.covers(v, x)).collect();
        for w in g.interval_below(v) {
            for &vp in &covers {
                f.cases += 1;
                let r = check_monotonicity(&solver, w, v, vp)?;
                if r.difference.is_zero() {
                    f.stat("zero_differences", 1);
                }
                if !r.passed() {
                    let mut c = Counterexample::new(
                        format!(
                            "monotonicity: nonnegative = {}, exchange = {:?}, quotient identity = {:?}",
                            r.nonnegative, r.exchange_position, r.quotient_identity
                        ),
                        &[("w", r.w.clone()), ("v", r.v.clone()), ("v'", r.v_prime.clone())],
                    );
                    c.lhs = Some(r.difference);
                    f.counterexamples.push(c);
                }
            }
        }
        Ok(f)
    })?;
    if cfg.fixtures {
        // the coefficient-level analogue fails: c goes from 1 to 0
        let a5 = solver_for("A5".parse()?)?;
        let g = a5.group();
        let p = |s: &str| -> Result<Elem, VerifyError> { Ok(g.from_one_line(&s.parse::<SignedPermutation>()?)?) };
        let (u, v, w) = (p("351624")?, p("214356")?, p("631524")?);
        let (u2, w2) = (g.rmul(u, 2), g.rmul(w, 2));
        let before = a5.coeff_value(u, v, w)?;
        let after = a5.coeff_value(u2, v, w2)?;
        let observed = format!(
            "{} * s3 = {}, {} * s3 = {}: c = {}, then c = {}",
            g.format_element(u),
            g.format_element(u2),
            g.format_element(w),
            g.format_element(w2),
            before.to_text('a'),
            after.to_text('a')
        );
        out.fixture(
            "A5 coefficient monotonicity fails",
            "3 5 1 6 2 4 * s3 = 3 5 6 1 2 4, 6 3 1 5 2 4 * s3 = 6 3 5 1 2 4: c = 1, then c = 0".into(),
            observed,
        );
    }
    Ok(out)
}

fn scan_arabia(cfg: &ScanConfig) -> Result<Findings, VerifyError> {
    let group = Arc::new(WeylGroup::new(cfg.label)?);
    let table = RestrictionTable::new(group.clone());
    let range = range(&group, cfg);
    let roots = arabia_roots(&group, cfg.simple_only);
    let (n, m) = (range.len(), roots.len());
    let units: Vec<(Elem, Elem, usize)> = unit_indices(n * n * m, cfg)
        .into_iter()
        .map(|k| (range[k / (n * m)], range[k / m % n], k % m))
        .collect();
    let mut out = run_units(cfg.jobs, &units, |&(w, v, a)| {
        let mut f = Findings::default();
        f.cases += 1;
        let r = check_arabia(&table, w, v, &roots[a])?;
        if !r.divisible {
            let mut c = Counterexample::new(
                format!("{} does not divide the difference", r.alpha),
                &[("w", r.w.clone()), ("v", r.v.clone()), ("s_alpha v", r.s_alpha_v.clone())],
            );
            c.lhs = Some(r.difference);
            f.counterexamples.push(c);
        }
        Ok(f)
    })?;
    if cfg.fixtures {
        // coefficient-level divisibility fails in A3
        let a3 = solver_for("A3".parse()?)?;
        let g = a3.group();
        let e = |s: &str| g.parse_element(s);
        let (u, v) = (e("s3")?, e("s2 s3 s1")?);
        let w = v;
        let (su, sw) = (g.lmul(0, u), g.lmul(0, w));
        let c1 = a3.coeff_value(u, v, w)?;
        let c2 = a3.coeff_value(su, v, sw)?;
        let diff = &c2 - &c1;
        let alpha = crate::poly::LinearForm::var(3, 0);
        let observed = format!(
            "C = {}, C' = {}, difference = {}, nonnegative = {}, divisible = {}",
            c1.to_text('a'),
            c2.to_text('a'),
            diff.to_text('a'),
            diff.is_nonnegative(),
            diff.divisibility_test(&alpha).divides
        );
        out.fixture(
            "A3 coefficient divisibility fails",
            "C = a2 + a3, C' = a1 + a2, difference = a1 - a3, nonnegative = false, divisible = false".into(),
            observed,
        );
    }
    Ok(out)
}

fn scan_folding(cfg: &ScanConfig) -> Result<Findings, VerifyError> {
    let mut out = Findings::default();
    let b2: TypeLabel = "B2".parse()?;
    let d3: TypeLabel = "D3".parse()?;
    let d3_solver = solver_for(d3)?;
    let b2_solver = solver_for(b2)?;
    let gd = d3_solver.group();
    let v = gd.parse_element("s1 s3 s2")?;
    let c_d3 = d3_solver.coeff_value(v, v, v)?;
    let folded = c_d3.substitute(&folding_substitution(d3, b2)?).map_err(CoeffError::from)?;
    let gb = b2_solver.group();
    let vb = gb.parse_element("s1 s2 s1")?;
    let c_b2 = b2_solver.coeff_value(vb, vb, vb)?;
    let expect_d3 = Poly::parse_text("d1", Some(3)).map_err(CoeffError::from)?;
    let expect_d3 = &(&expect_d3 * &Poly::parse_text("d1 + d2 + d3", Some(3)).map_err(CoeffError::from)?)
        * &Poly::parse_text("d1 + d3", Some(3)).map_err(CoeffError::from)?;
    out.cases += 1;
    out.fixture(
        "B2/D3 folding coincidence",
        format!("{} folds to {}", expect_d3.to_text('d'), c_b2.to_text('b')),
        format!("{} folds to {}", c_d3.to_text('d'), folded.to_text('b')),
    );

    // no diagonal restriction of D4 folds onto the support of this B3 one
    let b3 = WeylGroup::new("B3".parse()?)?;
    let vb3 = b3.parse_element("s2 s1 s2 s3")?;
    let target = restrict_diag(&b3, vb3).support();
    let d4 = WeylGroup::new("D4".parse()?)?;
    let fold = folding_substitution(d4.label(), b3.label())?;
    let all: Vec<Elem> = d4.elements().collect();
    let matches = run_units(cfg.jobs, &all, |&v| {
        let mut f = Findings::default();
        f.cases += 1;
        let folded = restrict_diag(&d4, v).substitute(&fold).map_err(CoeffError::from)?;
        if folded.support() == target {
            f.counterexamples.push(Counterexample::new(
                "folded diagonal restriction of D4 has the B3 support",
                &[("v", d4.format_element(v))],
            ));
        }
        Ok(f)
    })?;
    let found = matches.counterexamples.len();
    out.cases += matches.cases;
    out.stat("d4_elements", all.len() as u64);
    out.fixture("D4 folding search", "0 matches over 192".into(), format!("{found} matches over {}", all.len()));
    Ok(out)
}

fn scan_newton_monotone(cfg: &ScanConfig) -> Result<Findings, VerifyError> {
    let group = Arc::new(WeylGroup::new(cfg.label)?);
    let table = RestrictionTable::new(group.clone());
    let range = range(&group, cfg);
    let mut chains = Vec::new();
    for &v in &range {
        for &vp in &range {
            if group.leq(v, vp) {
                for w in group.interval_below(v) {
                    chains.push((w, v, vp));
                }
            }
        }
    }
    let units: Vec<(Elem, Elem, Elem)> = unit_indices(chains.len(), cfg).into_iter().map(|k| chains[k]).collect();
    run_units(cfg.jobs, &units, |&(w, v, vp)| {
        let mut f = Findings::default();
        f.cases += 1;
        let small = table.get(w, v).newton_polytope().map_err(CoeffError::from)?;
        let large = table.get(w, vp).newton_polytope().map_err(CoeffError::from)?;
        if !small.is_subset_of(&large) {
            f.counterexamples.push(
                Counterexample::new(
                    "Newton polytope not contained",
                    &[("w", group.format_element(w)), ("v", group.format_element(v)), ("v'", group.format_element(vp))],
                )
                .sides(table.get(w, v), table.get(w, vp)),
            );
        }
        Ok(f)
    })
}

fn bc_labels(cfg: &ScanConfig) -> Result<(TypeLabel, TypeLabel), VerifyError> {
    let n = cfg.label.rank();
    if !matches!(cfg.label.family(), Family::B | Family::C) {
        return Err(VerifyError::Config(format!("B/C scans need type B or C, got {}", cfg.label)));
    }
    Ok((TypeLabel::new(Family::B, n)?, TypeLabel::new(Family::C, n)?))
}

fn scan_bc(cfg: &ScanConfig) -> Result<Findings, VerifyError> {
    let (lb, lc) = bc_labels(cfg)?;
    let (b, c) = (solver_for(lb)?, solver_for(lc)?);
    let g = b.group();
    let range = range(g, cfg);
    let units = triples(&range, cfg);
    let one_line = |e: Elem| g.to_one_line(e).expect("type B");
    run_units(cfg.jobs, &units, |&(u, v, w)| {
        let mut f = Findings::default();
        f.cases += 1;
        let (pu, pv, pw) = (one_line(u), one_line(v), one_line(w));
        let r = bc_correspondence(&b, &c, &pu, &pv, &pw)?;
        if !r.lhs.is_zero() {
            f.stat("nonzero", 1);
        }
        if g.length(u) + g.length(v) == g.length(w) {
            f.stat("degree_matching", 1);
        }
        if !r.equal || !r.support_equivalent {
            f.counterexamples.push(
                Counterexample::new(
                    format!("B/C correspondence fails (exponent {}, supports agree: {})", r.exponent, r.support_equivalent),
                    &[("u", pu.to_string()), ("v", pv.to_string()), ("w", pw.to_string())],
                )
                .sides(r.lhs, r.rhs),
            );
        }
        Ok(f)
    })
}

fn scan_oglg(cfg: &ScanConfig) -> Result<Findings, VerifyError> {
    let (lb, lc) = bc_labels(cfg)?;
    let n = lb.rank();
    let (b, c) = (solver_for(lb)?, solver_for(lc)?);
    let parts = StrictPartition::all(n);
    let k = parts.len();
    let units: Vec<(usize, usize, usize)> =
        unit_indices(k * k * k, cfg).into_iter().map(|i| (i / (k * k), i / k % k, i % k)).collect();
    run_units(cfg.jobs, &units, |&(a, m, z)| {
        let mut f = Findings::default();
        f.cases += 1;
        let r = oglg_correspondence(&b, &c, n, &parts[a], &parts[m], &parts[z])?;
        if !r.equal || !r.nonvanishing_equivalent {
            f.counterexamples.push(
                Counterexample::new(
                    format!("OG/LG correspondence fails (exponent {})", r.exponent),
                    &[("lambda", parts[a].to_string()), ("mu", parts[m].to_string()), ("nu", parts[z].to_string())],
                )
                .sides(r.lhs, r.rhs),
            );
        }
        Ok(f)
    })
}

fn scan_transport(cfg: &ScanConfig) -> Result<Findings, VerifyError> {
    let (Some(target), Some(map)) = (cfg.target, cfg.node_map.as_deref()) else {
        return Err(VerifyError::Config("transport needs a target type and a node map".into()));
    };
    let inc = DynkinInclusion::parse(cfg.label, target, map)?;
    let (src, tgt) = (solver_for(cfg.label)?, solver_for(target)?);
    let (gs, gt) = (src.group(), tgt.group());
    let range = range(gs, cfg);
    // a bounded sample of target elements outside the image, for the vanishing claim
    let outside: Vec<Elem> = gt.elements().filter(|&x| gt.length(x) <= 3 && uses_outside_node(&inc, gt, x)).collect();
    let units = pairs(&range, cfg);
    run_units(cfg.jobs, &units, |&(u, v)| {
        let mut f = Findings::default();
        let name = |x: Elem| gs.format_element(x);
        let r = transport_restriction_check(&inc, src.table(), tgt.table(), u, v, &outside)?;
        f.stat("restriction_cases", 1);
        f.stat("vanishing_cases", r.vanishing_checked as u64);
        if !r.passed() {
            f.counterexamples.push(
                Counterexample::new(
                    format!("restriction transport fails (vanishing ok: {})", r.vanishing_ok),
                    &[("w", name(u)), ("v", name(v))],
                )
                .sides(r.lhs, r.rhs),
            );
        }
        for &w in &range {
            f.cases += 1;
            let r = transport_coeff_check(&inc, &src, &tgt, u, v, w)?;
            if !r.equal {
                f.counterexamples.push(
                    Counterexample::new("coefficient transport fails", &[("u", name(u)), ("v", name(v)), ("w", name(w))])
                        .sides(r.lhs, r.rhs),
                );
            }
        }
        Ok(f)
    })
}

/// Per `v`: vanishing exactly off the Bruhat interval, positivity, degree,
/// square-free summands, reduced-word independence, and for types B/C the
/// power-of-two relation with the other family.
fn scan_restriction_properties(cfg: &ScanConfig) -> Result<Findings, VerifyError> {
    let group = Arc::new(WeylGroup::new(cfg.label)?);
    let table = RestrictionTable::new(group.clone());
    let partner = match cfg.label.family() {
        Family::B | Family::C => {
            let other = if cfg.label.family() == Family::B { Family::C } else { Family::B };
            let g = Arc::new(WeylGroup::new(TypeLabel::new(other, cfg.label.rank())?)?);
            Some(RestrictionTable::new(g))
        }
        _ => None,
    };
    let range = range(&group, cfg);
    let units: Vec<Elem> = unit_indices(range.len(), cfg).into_iter().map(|k| range[k]).collect();
    let seed = cfg.seed;
    run_units(cfg.jobs, &units, |&v| {
        let mut f = Findings::default();
        let g = &*group;
        let name = |x: Elem| g.format_element(x);
        if !PrefixRoots::of(g, v).is_inversion_set() {
            f.counterexamples.push(Counterexample::new("prefix roots are not a set of positive roots", &[("v", name(v))]));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (v.0 as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let word = random_reduced_word(g, v, &mut rng);
        for w in g.elements() {
            f.cases += 1;
            let r = table.get(w, v);
            let inputs = [("w", name(w)), ("v", name(v))];
            if r.is_zero() == g.leq(w, v) {
                f.counterexamples.push(Counterexample::new("vanishing does not match Bruhat order", &inputs));
            }
            if r.is_zero() {
                continue;
            }
            let p = r.props();
            if !p.nonneg || !p.homogeneous || p.total_degree != g.length(w) as i64 {
                f.counterexamples.push(Counterexample::new("restriction not positive of degree l(w)", &inputs).sides(r.clone(), r.clone()));
            }
            let other = restrict_on_word(g, w, &word, true);
            if other != r {
                f.counterexamples.push(
                    Counterexample::new(format!("depends on the reduced word ({word})"), &inputs).sides(r.clone(), other),
                );
            }
            let audit = squarefree_summand_audit(&table, w, v);
            if !audit.squarefree || !audit.sum_matches {
                f.counterexamples.push(Counterexample::new("square-free summand audit fails", &inputs));
            }
            if let Some(other) = &partner {
                let (wp, vp) = (g.to_one_line(w)?, g.to_one_line(v)?);
                let (bt, ct) = if cfg.label.family() == Family::B { (&table, other) } else { (other, &table) };
                let rep = bc_restriction_check(bt, ct, &wp, &vp)?;
                f.stat("bc_restriction_cases", 1);
                if !rep.equal {
                    f.counterexamples.push(
                        Counterexample::new("bar(C side) != 2^s(w) * B side", &inputs).sides(rep.lhs, rep.rhs),
                    );
                }
            }
        }
        Ok(f)
    })
}

/// A random reduced word, peeling a uniformly chosen left descent each step.
pub fn random_reduced_word(g: &WeylGroup, v: Elem, rng: &mut ChaCha8Rng) -> Word {
    let mut cur = v;
    let mut word = Vec::with_capacity(g.length(v));
    while g.length(cur) > 0 {
        let descents: Vec<usize> = (0..g.rank()).filter(|&i| g.is_left_descent(cur, i)).collect();
        let i = *descents.choose(rng).expect("nonidentity has a descent");
        word.push(i);
        cur = g.lmul(i, cur);
    }
    Word(word)
}

/// Per `(u, v)`: exact solve, positivity and degree, commutativity, the
/// `C_{u,v}^u = xi_v|_u` identity, and the defining relation at every point.
fn scan_coeff_properties(cfg: &ScanConfig) -> Result<Findings, VerifyError> {
    let solver = solver_for(cfg.label)?;
    let g = solver.group();
    let all: Vec<Elem> = g.elements().collect();
    let range = range(g, cfg);
    let units = pairs(&range, cfg);
    run_units(cfg.jobs, &units, |&(u, v)| {
        let mut f = Findings::default();
        let name = |x: Elem| g.format_element(x);
        let vector = match solver.solve(u, v) {
            Ok(vec) => vec,
            Err(e) => {
                f.counterexamples.push(Counterexample::new(format!("solve failed: {e}"), &[("u", name(u)), ("v", name(v))]));
                return Ok(f);
            }
        };
        for &w in &all {
            f.cases += 1;
            let r = solver.coeff(u, v, w)?;
            let inputs = [("u", name(u)), ("v", name(v)), ("w", name(w))];
            if !r.meta.positive || !r.meta.degree_ok {
                f.counterexamples.push(Counterexample::new("coefficient not positive of the expected degree", &inputs));
            }
            let swapped = solver.coeff_value(v, u, w)?;
            if swapped != r.value {
                f.counterexamples.push(Counterexample::new("not commutative", &inputs).sides(r.value.clone(), swapped));
            }
            if g.length(u) + g.length(v) == g.length(w) && !r.value.is_zero() && r.value.as_constant().is_none() {
                f.counterexamples.push(Counterexample::new("top-degree coefficient is not a constant", &inputs));
            }
        }
        f.stat("nonzero", vector.nonzero().count() as u64);
        let id = coeff_identity_check(&solver, u, v)?;
        if !id.equal {
            f.counterexamples.push(
                Counterexample::new("C_{u,v}^u != xi_v|_u", &[("u", name(u)), ("v", name(v))]).sides(id.lhs, id.rhs),
            );
        }
        if !defining_identity_holds(&solver, u, v, &all)? {
            f.counterexamples.push(Counterexample::new("product expansion fails at some fixed point", &[("u", name(u)), ("v", name(v))]));
        }
        Ok(f)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: Property, l: &str) -> ScanConfig {
        ScanConfig::new(p, l.parse().unwrap()).jobs(1)
    }

    #[test]
    fn property_ids_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.id().parse::<Property>().unwrap(), p);
        }
        assert!("nope".parse::<Property>().is_err());
    }

    #[test]
    fn interval_a2_with_fixtures() {
        let r = run_scan(&cfg(Property::Interval, "A2")).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
        assert!(r.cases > 0);
        assert_eq!(r.fixtures.len(), 2);
        assert!(r.fixtures.iter().all(|f| f.reproduced));
    }

    #[test]
    fn snp_small_scans() {
        for (p, l) in [(Property::SnpCoeffs, "A2"), (Property::SnpRestrictions, "G2")] {
            let r = run_scan(&cfg(p, l)).unwrap();
            assert!(r.passed(), "{p} {l}");
        }
    }

    #[test]
    fn monotonicity_b2_and_a5_fixture() {
        let r = run_scan(&cfg(Property::Monotonicity, "B2")).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
        assert!(r.fixtures[0].reproduced, "{:?}", r.fixtures);
    }

    #[test]
    fn arabia_a2_and_a3_fixture() {
        let r = run_scan(&cfg(Property::Arabia, "A2")).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
        assert_eq!(r.cases, 6 * 6 * 3);
    }

    #[test]
    fn folding_fixtures() {
        let r = run_scan(&cfg(Property::Folding, "B3")).unwrap();
        assert!(r.passed(), "{:?}", r.fixtures);
        assert_eq!(r.cases, 193);
    }

    #[test]
    fn bc_rank_two_counts() {
        let r = run_scan(&cfg(Property::Bc, "B2")).unwrap();
        assert!(r.passed());
        assert_eq!(r.cases, 512);
        let sampled = run_scan(&cfg(Property::Bc, "B2").sampled(40, 3)).unwrap();
        assert_eq!(sampled.cases, 40);
    }

    #[test]
    fn reports_ignore_job_count() {
        let a = run_scan(&cfg(Property::SnpCoeffs, "B2").jobs(1)).unwrap().without_timing();
        let b = run_scan(&cfg(Property::SnpCoeffs, "B2").jobs(3)).unwrap().without_timing();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let back: ScanReport = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(back.config.property, a.config.property);
        assert_eq!(back.cases, a.cases);
    }

    #[test]
    fn sampling_is_seeded() {
        let c = cfg(Property::Bc, "B2").sampled(25, 11);
        assert_eq!(unit_indices(512, &c), unit_indices(512, &c));
        assert_ne!(unit_indices(512, &c), unit_indices(512, &c.clone().sampled(25, 12)));
        assert_eq!(unit_indices(512, &c).len(), 25);
    }

    #[test]
    fn transport_needs_target() {
        assert!(run_scan(&cfg(Property::Transport, "B2")).is_err());
        let r = run_scan(&cfg(Property::Transport, "A2").transport("B3".parse().unwrap(), "1:1,2:2")).unwrap_err();
        assert!(matches!(r, VerifyError::RootSystem(_)));
        let ok = run_scan(&cfg(Property::Transport, "A1").transport("A2".parse().unwrap(), "1:2")).unwrap();
        assert!(ok.passed());
    }
}
