//! Identity checks at random generic parameter points, plus exact counting
//! and bijection checks, with reproducible reports.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::One;
use qd::Quad;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::biject::{
    cycles_to_file, file_to_cycles, file_to_forest, forest_to_file, partition_to_rooks, rooks_to_partition, rooks_to_tubes,
    tubes_to_rooks, AbelShape,
};
use crate::boards::{enumerate_placements, PlacementKind, SkylineBoard};
use crate::error::{Error, Result};
use crate::file::{
    file_above_product_sides, file_above_product_sides_with, file_numbers, file_numbers_via_recursion, file_product_sides,
    file_product_sides_with, FileWeighting,
};
use crate::jattack::{
    enumerate_rg_words, gen_stirling1_row, gen_stirling1_via_recursion, gen_stirling2_prefactor, gen_stirling2_row,
    gen_stirling2_via_recursion, jump_product_enumerated, jump_product_sides, matrix_inverse_residual, phi, placement_weight_j,
    word_weight,
};
use crate::rook::{
    max_identity_sides, product_formula_sides, product_formula_sides_with, q_rook_number, rect_rook_number_aq, rook_numbers,
    rook_numbers_via_recursion,
};
use crate::scalar::{lift_complex, modulus, rel_err, Real, Scalar};
use crate::special::{
    abel_gen_closed, abel_gen_row, carlitz_stirling2_q, lah_aq_closed, lah_r_aq_closed, lah_r_row, lah_row, stirling2,
    stirling2_small_k, SpecialFamily,
};
use crate::theta::{theta, Nome};
use crate::weights::{q_factorial, q_number, CachedWeights, ExactQ, Family, WeightFamily, WeightSystem};

/// Weight family requested on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Elliptic,
    ABq,
    Aq,
    ZeroBq,
    PlainQ,
    FrakPQ,
    Trivial,
}

impl FamilyKind {
    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Elliptic => "elliptic",
            FamilyKind::ABq => "abq",
            FamilyKind::Aq => "aq",
            FamilyKind::ZeroBq => "zerobq",
            FamilyKind::PlainQ => "q",
            FamilyKind::FrakPQ => "pq",
            FamilyKind::Trivial => "trivial",
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "elliptic" => FamilyKind::Elliptic,
            "abq" => FamilyKind::ABq,
            "aq" => FamilyKind::Aq,
            "zerobq" | "bq" => FamilyKind::ZeroBq,
            "q" => FamilyKind::PlainQ,
            "pq" => FamilyKind::FrakPQ,
            "trivial" => FamilyKind::Trivial,
            other => return Err(Error::InvalidParameter(format!("unknown weight family {other:?}"))),
        })
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Modulus ranges for the sampled parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub ab_modulus: (f64, f64),
    pub q_modulus: (f64, f64),
    pub p_modulus: (f64, f64),
    pub z_modulus: (f64, f64),
    pub max_resamples: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            ab_modulus: (0.5, 2.0),
            q_modulus: (0.6, 0.95),
            p_modulus: (0.05, 0.4),
            z_modulus: (0.5, 4.0),
            max_resamples: 50,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplerConfig { seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |(lo, hi): (f64, f64), cap: f64| lo > 0.0 && lo <= hi && hi < cap;
        if !ok(self.ab_modulus, f64::INFINITY)
            || !ok(self.q_modulus, 1.0)
            || !ok(self.p_modulus, 1.0)
            || !ok(self.z_modulus, f64::INFINITY)
        {
            return Err(Error::InvalidParameter(format!("sampler ranges out of bounds: {self:?}")));
        }
        Ok(())
    }
}

fn polar<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> Complex64 {
    Complex64::from_polar(rng.gen_range(lo..=hi), rng.gen_range(-PI..PI))
}

/// Phase kept away from the real axis.
fn nonreal_polar<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> Complex64 {
    let phase = rng.gen_range(0.15..PI - 0.15) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    Complex64::from_polar(rng.gen_range(lo..=hi), phase)
}

/// One sampled point `(a, b, q, p, z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParameterPoint {
    pub a: Complex64,
    pub b: Complex64,
    pub q: Complex64,
    pub p: Complex64,
    pub z: Complex64,
}

impl ParameterPoint {
    pub fn sample<R: Rng>(rng: &mut R, cfg: &SamplerConfig) -> Self {
        ParameterPoint {
            a: polar(rng, cfg.ab_modulus),
            b: polar(rng, cfg.ab_modulus),
            q: nonreal_polar(rng, cfg.q_modulus),
            p: nonreal_polar(rng, cfg.p_modulus),
            z: polar(rng, cfg.z_modulus),
        }
    }

    pub fn nome(&self) -> Result<Nome> {
        Nome::new(self.p)
    }

    /// The family of `kind` at this point; the frak_p,q family takes `p` as frak_p.
    pub fn family(&self, kind: FamilyKind) -> Result<WeightFamily> {
        let ParameterPoint { a, b, q, p, .. } = *self;
        Ok(match kind {
            FamilyKind::Elliptic => WeightFamily::Elliptic { a, b, q, p: self.nome()? },
            FamilyKind::ABq => WeightFamily::ABq { a, b, q },
            FamilyKind::Aq => WeightFamily::Aq { a, q },
            FamilyKind::ZeroBq => WeightFamily::ZeroBq { b, q },
            FamilyKind::PlainQ => WeightFamily::PlainQ { q },
            FamilyKind::FrakPQ => WeightFamily::FrakPQ { a, b, q, frak_p: p },
            FamilyKind::Trivial => WeightFamily::PlainQ { q: Complex64::new(1.0, 0.0) },
        })
    }
}

macro_rules! identities {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Every checkable identity, named in kebab case.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum Identity { $($variant),* }

        impl Identity {
            pub const ALL: &'static [Identity] = &[$(Identity::$variant),*];

            pub fn name(&self) -> &'static str {
                match self { $(Identity::$variant => $name),* }
            }
        }
    };
}

identities! {
    ProductRook => "product-rook",
    ProductFile => "product-file",
    ProductFileAbove => "product-file-above",
    ProductJump => "product-jump",
    MaxIdentity => "max-identity",
    RecursionRook => "recursion-rook",
    RecursionFile => "recursion-file",
    RecursionStirling2 => "recursion-stirling2",
    RecursionLah => "recursion-lah",
    RecursionLahR => "recursion-lah-r",
    RecursionStirling1 => "recursion-stirling1",
    RecursionGenStir2 => "recursion-genstir2",
    RecursionGenStir1 => "recursion-genstir1",
    RecursionBinomial => "recursion-binomial",
    ClosedFormAqRect => "closed-form-aqrect",
    ClosedFormLah => "closed-form-lah",
    ClosedFormLahR => "closed-form-lah-r",
    ClosedFormAbel => "closed-form-abel",
    ClosedFormAbelR => "closed-form-abel-r",
    ClosedFormAbelGen => "closed-form-abel-gen",
    ClosedFormSnk => "closed-form-snk",
    DegenerationMahonian => "degeneration-mahonian",
    DegenerationCarlitz => "degeneration-carlitz",
    DegenerationQRook => "degeneration-q-rook",
    DegenerationFileQ => "degeneration-file-q",
    DegenerationP0 => "degeneration-p0",
    DegenerationPq => "degeneration-pq",
    Inversion => "inversion",
    QuasiPeriodicity => "quasi-periodicity",
    AdditionFormula => "addition-formula",
    Ellipticity => "ellipticity",
    Telescoping => "telescoping",
    NumberShift => "number-shift",
    RgStatistic => "rg-statistic",
    MatrixInverse => "matrix-inverse",
    RookEquivalence => "rook-equivalence",
    FileEquivalence => "file-equivalence",
    BijectionPartition => "bijection-partition",
    BijectionCycles => "bijection-cycles",
    BijectionAbel => "bijection-abel",
    BijectionAbelColored => "bijection-abel-colored",
    BijectionTubes => "bijection-tubes",
    JumpEnumeration => "jump-enumeration",
}

/// How a check decides pass or fail.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Tolerance {
    Relative(f64),
    /// Exact arithmetic: passes iff every comparison is an equality.
    Exact,
}

impl Identity {
    pub fn default_tolerance(&self) -> Tolerance {
        use Identity::*;
        match self {
            DegenerationMahonian | DegenerationCarlitz | DegenerationQRook | DegenerationFileQ | BijectionPartition
            | BijectionCycles | BijectionAbel | BijectionAbelColored | BijectionTubes => Tolerance::Exact,
            ProductRook | ProductFile | ProductFileAbove | ProductJump | MaxIdentity | ClosedFormAqRect | ClosedFormLah
            | ClosedFormLahR | ClosedFormAbel | ClosedFormAbelR | ClosedFormAbelGen | ClosedFormSnk | DegenerationPq
            | JumpEnumeration => Tolerance::Relative(1e-8),
            Inversion | QuasiPeriodicity | AdditionFormula | NumberShift | RecursionBinomial | RgStatistic => {
                Tolerance::Relative(1e-10)
            }
            _ => Tolerance::Relative(1e-9),
        }
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL.iter().copied().find(|i| i.name() == s).ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A board given by heights (`"0,2,3,5,5"`) or by named parameters (`"n=5,r=2"`).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoardSpec {
    pub board: Option<SkylineBoard>,
    pub params: BTreeMap<String, usize>,
}

impl BoardSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if !spec.contains('=') {
            return Ok(BoardSpec { board: Some(SkylineBoard::parse(spec)?), params: BTreeMap::new() });
        }
        let mut params = BTreeMap::new();
        for part in spec.split(',') {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::BadBoardSpec(format!("expected key=value, got {part:?}")))?;
            let v = v.trim().parse::<usize>().map_err(|_| Error::BadBoardSpec(format!("bad value in {part:?}")))?;
            params.insert(k.trim().to_string(), v);
        }
        Ok(BoardSpec { board: None, params })
    }

    pub fn set(&mut self, key: &str, value: Option<usize>) {
        if let Some(v) = value {
            self.params.insert(key.to_string(), v);
        }
    }

    pub fn get(&self, key: &str) -> Option<usize> {
        self.params.get(key).copied()
    }

    pub fn get_or(&self, key: &str, default: usize) -> usize {
        self.get(key).unwrap_or(default)
    }

    pub fn board(&self) -> Result<&SkylineBoard> {
        self.board.as_ref().ok_or_else(|| Error::BadBoardSpec("this identity needs a board given by column heights".into()))
    }
}

/// Arithmetic used for random checks. Parameter points are drawn in `f64`
/// either way and embed exactly.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Precision {
    Double,
    #[default]
    DoubleDouble,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::Double => "double",
            Precision::DoubleDouble => "double-double",
        }
    }
}

impl FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "double" | "f64" => Ok(Precision::Double),
            "double-double" | "dd" => Ok(Precision::DoubleDouble),
            other => Err(Error::InvalidParameter(format!("unknown precision {other:?}"))),
        }
    }
}

/// Everything `run_check` needs.
#[derive(Clone, Debug)]
pub struct CheckRequest {
    pub identity: Identity,
    pub board: Option<String>,
    pub family: FamilyKind,
    pub trials: usize,
    pub tol: Option<f64>,
    pub z: Option<Complex64>,
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub r: Option<usize>,
    pub precision: Precision,
    pub sampler: SamplerConfig,
}

impl CheckRequest {
    pub fn new(identity: Identity, board: Option<&str>, family: FamilyKind, trials: usize, seed: u64) -> Self {
        CheckRequest {
            identity,
            board: board.map(str::to_string),
            family,
            trials,
            tol: None,
            z: None,
            i: None,
            j: None,
            r: None,
            precision: Precision::default(),
            sampler: SamplerConfig::with_seed(seed),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub identity_name: String,
    pub board: String,
    pub family: String,
    pub trials: usize,
    pub max_rel_err: f64,
    pub resamples: usize,
    pub seed: u64,
    pub precision: Precision,
    pub passed: bool,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} board={} family={} trials={} max_rel_err={:.3e} resamples={} seed={} precision={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.identity_name,
            self.board,
            self.family,
            self.trials,
            self.max_rel_err,
            self.resamples,
            self.seed,
            self.precision.name()
        )
    }
}

/// Largest relative error over pairs.
fn worst<V: Scalar, I: IntoIterator<Item = (V, V)>>(pairs: I) -> f64 {
    pairs.into_iter().map(|(x, y)| rel_err(&x, &y)).fold(0.0, f64::max)
}

fn worst_rows<V: Scalar>(a: &[Vec<V>], b: &[Vec<V>]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut e: f64 = 0.0;
    for (ra, rb) in a.iter().zip(b) {
        if ra.len() != rb.len() {
            return f64::INFINITY;
        }
        e = e.max(worst(ra.iter().cloned().zip(rb.iter().cloned())));
    }
    e
}

type Trial<'a> = Box<dyn Fn(&ParameterPoint) -> Result<f64> + Sync + 'a>;

/// Runs `trials` independent trials; trial `t` draws from stream `t` of the
/// seeded generator, so results do not depend on scheduling.
fn run_trials(trials: usize, cfg: &SamplerConfig, trial: &Trial<'_>) -> Result<(f64, usize)> {
    let results = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(t as u64);
            for attempt in 0..=cfg.max_resamples {
                let pt = ParameterPoint::sample(&mut rng, cfg);
                match trial(&pt) {
                    Ok(e) => return Ok((if e.is_nan() { f64::INFINITY } else { e }, attempt)),
                    Err(Error::PoleEncountered(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(Error::TooManyResamples(cfg.max_resamples))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(results.into_iter().fold((0.0, 0), |(e, r), (e2, r2)| (f64::max(e, e2), r + r2)))
}

/// Distinct rational evaluation points `2/3, 4/3, 5/3, ...`.
pub fn rational_points(count: usize) -> Vec<BigRational> {
    (0..count).map(|i| BigRational::new(BigInt::from(i as i64 + 2), BigInt::from(3))).collect()
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128 / (j + 1) as u128)
}

fn falling(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, j| acc * (n - j) as u128)
}

/// Exact bijection check: `per_k[k]` must equal `expected(k)` and every
/// roundtrip must succeed.
fn bijection_report(counts: &BTreeMap<usize, u128>, expected: impl Fn(usize) -> u128, n: usize) -> bool {
    (0..=n).all(|k| counts.get(&k).copied().unwrap_or(0) == expected(k))
}

pub fn run_check(req: &CheckRequest) -> Result<CheckReport> {
    req.sampler.validate()?;
    let mut spec = match &req.board {
        Some(s) => BoardSpec::parse(s)?,
        None => BoardSpec::default(),
    };
    spec.set("I", req.i);
    spec.set("J", req.j);
    spec.set("r", req.r);
    let tolerance = match (req.tol, req.identity.default_tolerance()) {
        (_, Tolerance::Exact) => Tolerance::Exact,
        (Some(t), _) => Tolerance::Relative(t),
        (None, t) => t,
    };
    let board_label = req.board.clone().unwrap_or_else(|| "-".into());
    let family_label = req.family.name().to_string();
    let (max_rel_err, resamples, trials) = match exact_check(req.identity, &spec)? {
        Some(ok) => (if ok { 0.0 } else { 1.0 }, 0, 1),
        None => {
            let trial = match req.precision {
                Precision::Double => random_check::<f64>(req, &spec)?,
                Precision::DoubleDouble => random_check::<Quad>(req, &spec)?,
            };
            let (e, r) = run_trials(req.trials, &req.sampler, &trial)?;
            (e, r, req.trials)
        }
    };
    let passed = match tolerance {
        Tolerance::Exact => max_rel_err == 0.0,
        Tolerance::Relative(t) => max_rel_err < t,
    };
    Ok(CheckReport {
        identity_name: req.identity.name().to_string(),
        board: board_label,
        family: family_label,
        trials,
        max_rel_err,
        resamples,
        seed: req.sampler.seed,
        precision: req.precision,
        passed,
    })
}

/// Exact checks; `None` for identities checked at random points.
fn exact_check(identity: Identity, spec: &BoardSpec) -> Result<Option<bool>> {
    use Identity::*;
    let ok = match identity {
        DegenerationMahonian => {
            let n_max = spec.get_or("n", 6);
            (1..=n_max).all(|n| {
                let degree = n * (n - 1) / 2;
                rational_points(10.max(degree + 1)).iter().all(|q| {
                    let sys = ExactQ::new(q.clone());
                    rook_numbers(&SkylineBoard::rectangle(n, n), &sys).map(|r| r[n] == q_factorial(q, n as i64)).unwrap_or(false)
                })
            })
        }
        DegenerationCarlitz => {
            let n_max = spec.get_or("n", 8);
            rational_points(5).iter().all(|q| {
                let sys = ExactQ::new(q.clone());
                (0..=n_max).all(|n| {
                    crate::special::stirling2_row(n, &sys)
                        .map(|row| (0..=n).all(|k| row[k] == carlitz_stirling2_q(n, k, q)))
                        .unwrap_or(false)
                })
            })
        }
        DegenerationQRook => {
            let board = spec.board()?;
            board.require_ferrers()?;
            let n = board.n();
            let top = board.heights().iter().copied().max().unwrap_or(0);
            let mut ok = true;
            for q in rational_points(5) {
                let sys = ExactQ::new(q.clone());
                let rs = rook_numbers(board, &sys)?;
                for (k, r) in rs.iter().enumerate() {
                    ok &= *r == q_rook_number(board, k, &q)?;
                }
                for z in 0..=(n + top) as i64 {
                    let (l, r) = product_formula_sides_with(board, &sys, |_, d| Ok(q_number(&q, z + d)))?;
                    ok &= l == r;
                }
            }
            ok
        }
        DegenerationFileQ => {
            let board = spec.board()?;
            let n = board.n();
            let top = board.heights().iter().copied().max().unwrap_or(0);
            let mut ok = true;
            for q in rational_points(5) {
                let sys = ExactQ::new(q.clone());
                for z in 0..=(n + top) as i64 {
                    let (l, r) = file_product_sides_with(board, &sys, |_, d| Ok(q_number(&q, z + d)))?;
                    ok &= l == r;
                    let (l, r) = file_above_product_sides_with(board, &sys, |_, d| Ok(q_number(&q, z + d)))?;
                    ok &= l == r;
                }
            }
            ok
        }
        BijectionPartition => {
            let n = spec.get_or("n", 5);
            let board = SkylineBoard::staircase(n).extended(0);
            let mut counts = BTreeMap::new();
            let mut seen = BTreeSet::new();
            for rooks in 0..=n {
                for p in enumerate_placements(&board, PlacementKind::NonattackingRook, rooks)? {
                    let part = rooks_to_partition(&p)?;
                    if partition_to_rooks(&part, n)? != p || !seen.insert(part.blocks.clone()) {
                        return Ok(Some(false));
                    }
                    *counts.entry(part.blocks.len()).or_insert(0u128) += 1;
                }
            }
            bijection_report(&counts, |k| classical_stirling2(n, k), n)
        }
        BijectionCycles => {
            let (n, r) = (spec.get_or("n", 5), spec.get_or("r", 1));
            let board = SkylineBoard::staircase_r(n, r).extended(0);
            let mut counts = BTreeMap::new();
            let mut seen = BTreeSet::new();
            for rooks in 0..=n {
                for q in enumerate_placements(&board, PlacementKind::File, rooks)? {
                    let perm = file_to_cycles(&q, r)?;
                    if cycles_to_file(&perm, n, r)? != q || !seen.insert(perm.cycles.clone()) {
                        return Ok(Some(false));
                    }
                    *counts.entry(perm.cycles.len()).or_insert(0u128) += 1;
                }
            }
            bijection_report(&counts, |k| classical_r_stirling1(n, k, r), n)
        }
        BijectionAbel | BijectionAbelColored => {
            let n = spec.get_or("n", 5);
            let m = if identity == BijectionAbel { n } else { spec.get_or("m", n) };
            let r = spec.get_or("r", 1);
            let shape = AbelShape::new(m, n, r)?;
            let board = shape.board().extended(0);
            let mut counts = BTreeMap::new();
            let mut seen = BTreeSet::new();
            for rooks in 0..=n {
                for q in enumerate_placements(&board, PlacementKind::File, rooks)? {
                    let f = file_to_forest(&q, &shape)?;
                    f.validate(&shape)?;
                    if forest_to_file(&f, &shape)? != q || !seen.insert((f.parent.clone(), f.colors.clone())) {
                        return Ok(Some(false));
                    }
                    *counts.entry(f.tree_count()).or_insert(0u128) += 1;
                }
            }
            bijection_report(&counts, |k| if k < r { 0 } else { binom(n - r, k - r) * (m as u128).pow((n - k) as u32) }, n)
        }
        BijectionTubes => {
            let (n, r) = (spec.get_or("n", 5), spec.get_or("r", 1));
            let board = SkylineBoard::lah_r(n, r).extended(0);
            let mut counts = BTreeMap::new();
            let mut seen = BTreeSet::new();
            for rooks in 0..=n - r {
                for p in enumerate_placements(&board, PlacementKind::NonattackingRook, rooks)? {
                    let (t, _) = rooks_to_tubes(&p, n, r)?;
                    if tubes_to_rooks(&t, n, r)? != p || !seen.insert(t.tubes.clone()) {
                        return Ok(Some(false));
                    }
                    *counts.entry(t.tubes.len()).or_insert(0u128) += 1;
                }
            }
            bijection_report(&counts, |k| if k < r { 0 } else { binom(n + r - 1, k + r - 1) * falling(n - r, n - k) }, n)
        }
        _ => return Ok(None),
    };
    Ok(Some(ok))
}

/// Classical Stirling numbers of the second kind by their recursion.
pub fn classical_stirling2(n: usize, k: usize) -> u128 {
    let mut row = vec![1u128];
    for m in 0..n {
        let mut next = vec![0u128; m + 2];
        for j in 0..=m + 1 {
            if j >= 1 {
                next[j] += row[j - 1];
            }
            if j <= m {
                next[j] += j as u128 * row[j];
            }
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

/// Unsigned r-Stirling numbers of the first kind, `c(r, r) = 1`.
pub fn classical_r_stirling1(n: usize, k: usize, r: usize) -> u128 {
    let r = r.max(1);
    if n < r {
        return 0;
    }
    let mut row = vec![0u128; r + 1];
    row[r] = 1;
    for m in r..n {
        let mut next = vec![0u128; m + 2];
        for j in 0..=m + 1 {
            if j >= 1 {
                next[j] += row[j - 1];
            }
            if j <= m {
                next[j] += m as u128 * row[j];
            }
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

fn special_check<T: Real>(family: SpecialFamily, n_max: usize, kind: FamilyKind) -> Trial<'static> {
    Box::new(move |pt: &ParameterPoint| -> Result<f64> {
        let fam = pt.family(kind)?.widen::<T>();
        let formula = family.rows_by_formula(n_max, &fam)?;
        let mut e: f64 = 0.0;
        for (n, expected) in formula.iter().enumerate().skip(family.first_n()) {
            let row = family.row(n, &fam)?;
            e = e.max(worst(row.into_iter().zip(expected.iter().cloned())));
        }
        Ok(e)
    })
}

/// Builds the trial for a random identity, evaluated in the field `T`.
fn random_check<'a, T: Real>(req: &'a CheckRequest, spec: &'a BoardSpec) -> Result<Trial<'a>> {
    use Identity::*;
    let kind = req.family;
    let z_of = move |pt: &ParameterPoint| lift_complex::<T>(req.z.unwrap_or(pt.z));
    let fam_of = move |pt: &ParameterPoint| pt.family(kind).map(|f| f.widen::<T>());
    let lift = lift_complex::<T>;
    let trial: Trial<'a> = match req.identity {
        ProductRook => {
            let board = spec.board()?;
            board.require_ferrers()?;
            Box::new(move |pt| {
                let (l, r) = product_formula_sides(board, &fam_of(pt)?, z_of(pt))?;
                Ok(rel_err(&l, &r))
            })
        }
        ProductFile => {
            let board = spec.board()?;
            Box::new(move |pt| {
                let (l, r) = file_product_sides(board, &fam_of(pt)?, z_of(pt))?;
                Ok(rel_err(&l, &r))
            })
        }
        ProductFileAbove => {
            let board = spec.board()?;
            Box::new(move |pt| {
                let (l, r) = file_above_product_sides(board, &fam_of(pt)?, z_of(pt))?;
                Ok(rel_err(&l, &r))
            })
        }
        ProductJump | JumpEnumeration => {
            let j = spec.get_or("J", 1);
            let board = match &spec.board {
                Some(b) => b.clone(),
                None => SkylineBoard::jump(spec.get_or("I", 0), j, spec.get_or("n", 3)),
            };
            board.require_j_attacking(j)?;
            let enumerate = req.identity == JumpEnumeration;
            Box::new(move |pt| {
                let fam = fam_of(pt)?;
                if enumerate {
                    let cached = CachedWeights::new(fam);
                    let [full, lhs, rhs] = jump_product_enumerated(&board, j, &cached, j * board.n())?;
                    return Ok(worst([(full, lhs), (full, rhs), (lhs, rhs)]));
                }
                let (l, r) = jump_product_sides(&board, j, &fam, z_of(pt))?;
                Ok(rel_err(&l, &r))
            })
        }
        MaxIdentity => {
            let board = spec.board()?;
            board.require_ferrers()?;
            let depth = spec.get_or("k", 3);
            Box::new(move |pt| {
                let fam = fam_of(pt)?;
                let mut e: f64 = 0.0;
                for k in 0..=depth {
                    let (l, r) = max_identity_sides(board, &fam, k)?;
                    e = e.max(rel_err(&l, &r));
                }
                Ok(e)
            })
        }
        RecursionRook => {
            let board = spec.board()?;
            board.require_ferrers()?;
            Box::new(move |pt| {
                let fam = fam_of(pt)?;
                Ok(worst(rook_numbers(board, &fam)?.into_iter().zip(rook_numbers_via_recursion(board, &fam)?)))
            })
        }
        RecursionFile => {
            let board = spec.board()?;
            Box::new(move |pt| {
                let fam = fam_of(pt)?;
                let e = file_numbers(board, &fam, FileWeighting::RowOnly)?;
                Ok(worst(e.into_iter().zip(file_numbers_via_recursion(board, &fam)?)))
            })
        }
        RecursionStirling2 | RecursionLah | RecursionLahR | RecursionStirling1 => {
            let r = spec.get_or("r", if req.identity == RecursionLahR { 2 } else { 1 });
            let family = match (req.identity, r) {
                (RecursionStirling2, 1) => SpecialFamily::Stirling2,
                (RecursionStirling2, r) => SpecialFamily::Stirling2R(r),
                (RecursionLah, _) => SpecialFamily::Lah,
                (RecursionLahR, r) => SpecialFamily::LahR(r),
                (_, 1) => SpecialFamily::Stirling1,
                (_, r) => SpecialFamily::Stirling1R(r),
            };
            let n_max = spec.get_or("n", 5);
            special_check::<T>(family, n_max, kind)
        }
        RecursionGenStir2 | RecursionGenStir1 => {
            let (i, j, n) = (spec.get_or("I", 1), spec.get_or("J", 2), spec.get_or("n", 5));
            let second = req.identity == RecursionGenStir2;
            Box::new(move |pt| {
                let fam = fam_of(pt)?;
                let rec = if second {
                    gen_stirling2_via_recursion(i, j, n, &fam)?
                } else {
                    gen_stirling1_via_recursion(i, j, n, &fam)?
                };
                let direct = (0..=n)
                    .map(|m| if second { gen_stirling2_row(i, j, m, &fam) } else { gen_stirling1_row(i, j, m, &fam) })
                    .collect::<Result<Vec<_>>>()?;
                Ok(worst_rows(&direct, &rec))
            })
        }
        RecursionBinomial => {
            let n_max = spec.get_or("n", 6) as i64;
            Box::new(move |pt| {
                let fam = fam_of(pt)?;
                let mut e: f64 = 0.0;
                for n in 0..n_max {
                    for k in 1..=n + 1 {
                        let lhs = fam.binomial(n + 1, k)?;
                        let rhs = fam.binomial(n, k)?
                            + fam.binomial(n, k - 1)? * fam.rescaled(k - 1, 2 * k - 2).big_weight(n + 1 - k)?;
                        e = e.max(rel_err(&lhs, &rhs));
                    }
                }
                Ok(e)
            })
        }
        ClosedFormAqRect => {
            let pairs: Vec<(usize, usize)> = match (spec.get("l"), spec.get("m")) {
                (Some(l), Some(m)) => vec![(l, m)],
                _ => (1..=5).cartesian_product(1..=5).collect(),
            };
            Box::new(move |pt| {
                let fam = WeightFamily::Aq { a: pt.a, q: pt.q }.widen::<T>();
                let mut e: f64 = 0.0;
                for &(l, m) in &pairs {
                    let rs = rook_numbers(&SkylineBoard::rectangle(l, m), &fam)?;
                    for (k, r) in rs.into_iter().enumerate() {
                        e = e.max(rel_err(&r, &rect_rook_number_aq(l as i64, m as i64, k as i64, lift(pt.a), lift(pt.q))));
                    }
                }
                Ok(e)
            })
        }
        ClosedFormLah | ClosedFormLahR => {
            let n_max = spec.get_or("n", 5);
            let r = if req.identity == ClosedFormLah { 1 } else { spec.get_or("r", 2) };
            Box::new(move |pt| {
                let fam = WeightFamily::Aq { a: pt.a, q: pt.q }.widen::<T>();
                let mut e: f64 = 0.0;
                for n in r.max(1)..=n_max {
                    let row = if r == 1 { lah_row(n, &fam)? } else { lah_r_row(n, r, &fam)? };
                    for (k, v) in row.into_iter().enumerate() {
                        let (n, k) = (n as i64, k as i64);
                        let (a, q) = (lift(pt.a), lift(pt.q));
                        let closed = if r == 1 { lah_aq_closed(n, k, a, q) } else { lah_r_aq_closed(n, k, r as i64, a, q) };
                        e = e.max(rel_err(&v, &closed));
                    }
                }
                Ok(e)
            })
        }
        ClosedFormAbel | ClosedFormAbelR | ClosedFormAbelGen => {
            let n_max = spec.get_or("n", 5);
            let r = if req.identity == ClosedFormAbel { 1 } else { spec.get_or("r", 1) };
            let m = if req.identity == ClosedFormAbelGen { spec.get("m") } else { None };
            Box::new(move |pt| {
                let fam = fam_of(pt)?;
                let mut e: f64 = 0.0;
                for n in r..=n_max {
                    let m = m.unwrap_or(n);
                    let row = abel_gen_row(m, n, r, &fam)?;
                    for (k, v) in row.into_iter().enumerate() {
                        e = e.max(rel_err(&v, &abel_gen_closed(m, n, k as i64, r, &fam)?));
                    }
                }
                Ok(e)
            })
        }
        ClosedFormSnk => {
            let n_max = spec.get_or("n", 6);
            Box::new(move |pt| {
                let fam = fam_of(pt)?;
                let mut e: f64 = 0.0;
                for n in 0..=n_max {
                    for k in 0..=3.min(n) {
                        e = e.max(rel_err(&stirling2(n, k as i64, &fam)?, &stirling2_small_k(n, k, &fam)?));
                    }
                }
                Ok(e)
            })
        }
        DegenerationP0 | DegenerationPq => {
            let board = spec.board()?;
            board.require_ferrers()?;
            let p0 = req.identity == DegenerationP0;
            Box::new(move |pt| {
                let (a, b, q) = (lift(pt.a), lift(pt.b), lift(pt.q));
                let (left, right) = if p0 {
                    (Family::Elliptic { a, b, q, p: Nome::zero() }, Family::ABq { a, b, q })
                } else {
                    let frak_p = lift(pt.p);
                    (Family::FrakPQ { a, b, q, frak_p }, Family::ABq { a, b, q: q / frak_p })
                };
                let mut e = worst(rook_numbers(board, &left)?.into_iter().zip(rook_numbers(board, &right)?));
                if p0 {
                    e = e.max(rel_err(&left.number_at(z_of(pt))?, &right.number_at(z_of(pt))?));
                } else {
                    // q^z / frak_p^z and (q / frak_p)^z only share a branch at integer z
                    for z in -2..=2 * board.n() as i64 {
                        let z = Complex::new(T::lift(z as f64), T::zero());
                        e = e.max(rel_err(&left.number_at(z)?, &right.number_at(z)?));
                    }
                }
                Ok(e)
            })
        }
        Inversion => Box::new(move |pt| {
            let x = lift(pt.a);
            let p = pt.nome()?.widen::<T>();
            let (t1, t2) = (theta(x, p)?, x * theta(x.inv(), p)?);
            Ok(modulus(t1 + t2) / modulus(t1).max(modulus(t2)).max(1e-30))
        }),
        QuasiPeriodicity => Box::new(move |pt| {
            let x = lift(pt.a);
            let p = pt.nome()?.widen::<T>();
            let (t1, t2) = (theta(lift(pt.p) * x, p)?, theta(x, p)? / x);
            Ok(modulus(t1 + t2) / modulus(t1).max(modulus(t2)).max(1e-30))
        }),
        AdditionFormula => Box::new(move |pt| {
            let p = pt.nome()?.widen::<T>();
            let (x, y, u, v) = (lift(pt.a), lift(pt.b), lift(pt.z), lift(pt.q));
            let th = |xs: [Complex<T>; 4]| -> Result<Complex<T>> {
                xs.iter().try_fold(Complex::<T>::one(), |acc, &w| Ok(acc * theta(w, p)?))
            };
            let t1 = th([x * y, x / y, u * v, u / v])?;
            let t2 = th([x * v, x / v, u * y, u / y])?;
            let t3 = u / y * th([y * v, y / v, x * u, x / u])?;
            let scale = modulus(t1).max(modulus(t2)).max(modulus(t3)).max(1e-30);
            Ok(modulus(t1 - t2 - t3) / scale)
        }),
        Ellipticity => Box::new(move |pt| {
            let p = pt.nome()?.widen::<T>();
            let (a, b, q, pp) = (lift(pt.a), lift(pt.b), lift(pt.q), lift(pt.p));
            let base = Family::Elliptic { a, b, q, p };
            let moved_a = Family::Elliptic { a: a * pp, b, q, p };
            let moved_b = Family::Elliptic { a, b: b * pp, q, p };
            let mut e: f64 = 0.0;
            for k in -3..=3 {
                let w = base.small_weight(k)?;
                e = e.max(rel_err(&w, &moved_a.small_weight(k)?)).max(rel_err(&w, &moved_b.small_weight(k)?));
            }
            Ok(e)
        }),
        Telescoping => {
            let n_max = spec.get_or("n", 8) as i64;
            Box::new(move |pt| {
                let fam = fam_of(pt)?;
                let mut e: f64 = 0.0;
                let mut sum = Complex::<T>::one();
                for n in 1..=n_max {
                    if n > 1 {
                        sum = sum + fam.big_weight(n - 1)?;
                    }
                    e = e.max(rel_err(&fam.number(n)?, &sum));
                }
                Ok(e)
            })
        }
        NumberShift => Box::new(move |pt| {
            let fam = fam_of(pt)?;
            let z = z_of(pt);
            let mut e: f64 = 0.0;
            for y in 1..=3 {
                let rhs = fam.number(y)? + fam.big_weight(y)? * fam.shifted(y).number_at(z - T::lift(y as f64))?;
                e = e.max(rel_err(&fam.number_at(z)?, &rhs));
            }
            Ok(e)
        }),
        RgStatistic => {
            let (i, j, n) = (spec.get_or("I", 1), spec.get_or("J", 2), spec.get_or("n", 5));
            let board = SkylineBoard::jump(i, j, n).extended(0);
            let mut words = Vec::new();
            let mut counts_match = true;
            for k in 0..=n {
                let ws = enumerate_rg_words(i, j, n, k)?;
                let placed = enumerate_placements(&board, PlacementKind::JNonattacking(j), n - k)?;
                let images: BTreeSet<Vec<Option<i64>>> = ws.iter().map(|w| phi(w).map(|p| p.rows)).collect::<Result<_>>()?;
                counts_match &= ws.len() == placed.len() && images.len() == ws.len();
                words.extend(ws.into_iter().map(|w| (k, w)));
            }
            Box::new(move |pt| {
                if !counts_match {
                    return Ok(f64::INFINITY);
                }
                let fam = CachedWeights::new(fam_of(pt)?);
                let mut e: f64 = 0.0;
                for (k, w) in &words {
                    let lhs = placement_weight_j(&phi(w)?, j, &fam)?;
                    let rhs = gen_stirling2_prefactor(i, j, *k, &fam)? * word_weight(w, &fam)?;
                    e = e.max(rel_err(&lhs, &rhs));
                }
                Ok(e)
            })
        }
        MatrixInverse => {
            let n_max = spec.get_or("n", 6);
            Box::new(move |pt| matrix_inverse_residual(n_max, &fam_of(pt)?))
        }
        RookEquivalence => {
            let n_max = spec.get_or("n", 5);
            Box::new(move |pt| {
                let fam = fam_of(pt)?;
                let mut e: f64 = 0.0;
                for n in 1..=n_max {
                    let even = SkylineBoard::new((0..n).map(|i| 2 * i).collect());
                    e = e.max(worst(rook_numbers(&SkylineBoard::lah(n), &fam)?.into_iter().zip(rook_numbers(&even, &fam)?)));
                }
                Ok(e)
            })
        }
        FileEquivalence => {
            let board = spec.board()?;
            let perms: Vec<SkylineBoard> =
                board.heights().iter().copied().permutations(board.n()).unique().map(SkylineBoard::new).collect();
            Box::new(move |pt| {
                let fam = fam_of(pt)?;
                let reference = file_numbers(board, &fam, FileWeighting::RowOnly)?;
                let mut e: f64 = 0.0;
                for b in &perms {
                    let f = file_numbers(b, &fam, FileWeighting::RowOnly)?;
                    e = e.max(worst(reference.iter().cloned().zip(f)));
                }
                Ok(e)
            })
        }
        other => return Err(Error::UnknownIdentity(other.name().to_string())),
    };
    Ok(trial)
}
