//! Acceptance run: one PASS/FAIL line per criterion, tolerances pinned here.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ellrook::biject::{file_to_forest, AbelShape};
use ellrook::boards::{enumerate_placements, PlacementKind, SkylineBoard};
use ellrook::harness::{run_check, CheckReport, CheckRequest, FamilyKind, Identity, ParameterPoint, SamplerConfig};
use ellrook::rook::rook_numbers;
use ellrook::scalar::rel_err;
use ellrook::weights::WeightSystem;
use ellrook::Error;

/// Outcome of one criterion: every sub-check passed, plus the worst error.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
    worst: f64,
}

impl Tally {
    fn add(&mut self, report: CheckReport) {
        self.checks += 1;
        self.worst = self.worst.max(report.max_rel_err);
        if !report.passed {
            self.failures.push(report.to_string());
        }
    }

    fn fail(&mut self, what: String) {
        self.checks += 1;
        self.failures.push(what);
    }

    fn run(&mut self, identity: Identity, board: Option<&str>, family: FamilyKind, trials: usize, seed: u64, tol: Option<f64>) {
        self.run_with(identity, board, family, trials, seed, tol, |_| {});
    }

    #[allow(clippy::too_many_arguments)]
    fn run_with(
        &mut self,
        identity: Identity,
        board: Option<&str>,
        family: FamilyKind,
        trials: usize,
        seed: u64,
        tol: Option<f64>,
        tweak: impl FnOnce(&mut CheckRequest),
    ) {
        let mut req = CheckRequest::new(identity, board, family, trials, seed);
        req.tol = tol;
        tweak(&mut req);
        match run_check(&req) {
            Ok(report) => self.add(report),
            Err(e) => self.fail(format!("{} board={board:?}: {e}", identity.name())),
        }
    }
}

struct Criterion {
    number: usize,
    title: &'static str,
    tolerance: &'static str,
    tally: Tally,
    seconds: f64,
}

impl Criterion {
    fn passed(&self) -> bool {
        self.tally.failures.is_empty() && self.tally.checks > 0
    }

    fn print(&self) {
        println!(
            "{} criterion {:>2}: {} ({} checks, max_rel_err={:.3e}, tol {}, {:.1}s)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.number,
            self.title,
            self.tally.checks,
            self.tally.worst,
            self.tolerance,
            self.seconds
        );
        for f in self.tally.failures.iter().take(5) {
            println!("      {f}");
        }
    }
}

fn criterion(number: usize, title: &'static str, tolerance: &'static str, body: impl FnOnce(&mut Tally)) -> Criterion {
    let start = Instant::now();
    let mut tally = Tally::default();
    body(&mut tally);
    let c = Criterion { number, title, tolerance, tally, seconds: start.elapsed().as_secs_f64() };
    c.print();
    c
}

/// Nondecreasing height profiles of length `1..=n_max` with entries `0..=h_max`.
fn ferrers_profiles(n_max: usize, h_max: usize) -> Vec<Vec<usize>> {
    (1..=n_max).flat_map(|n| (0..=h_max).combinations_with_replacement(n)).collect()
}

fn board_arg(heights: &[usize]) -> String {
    heights.iter().join(",")
}

fn factorization(t: &mut Tally) {
    for (i, heights) in ferrers_profiles(5, 5).iter().enumerate() {
        t.run(Identity::ProductRook, Some(&board_arg(heights)), FamilyKind::Elliptic, 25, i as u64, Some(1e-8));
    }
}

fn rectangle_example(t: &mut Tally) {
    let board = SkylineBoard::new(vec![3, 3, 3]);
    let cfg = SamplerConfig::with_seed(2);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut done = 0;
    let mut resamples = 0;
    while done < 50 {
        let pt = ParameterPoint::sample(&mut rng, &cfg);
        let fam = match pt.family(FamilyKind::Elliptic) {
            Ok(f) => f.precise(),
            Err(e) => return t.fail(format!("sampling: {e}")),
        };
        let sides = rook_numbers(&board, &fam).and_then(|rs| {
            let rhs = fam.shifted(-3).number(3)? * fam.shifted(-2).number(2)?;
            Ok((rs[3], rhs))
        });
        match sides {
            Ok((lhs, rhs)) => {
                t.worst = t.worst.max(rel_err(&lhs, &rhs));
                done += 1;
            }
            Err(Error::PoleEncountered(_)) if resamples < 50 => resamples += 1,
            Err(e) => return t.fail(format!("r_3(B(3,3,3)): {e}")),
        }
    }
    t.checks += 1;
    if t.worst >= 1e-10 {
        t.failures.push(format!("r_3(B(3,3,3)) max_rel_err={:.3e}", t.worst));
    }
}

fn recursions(t: &mut Tally) {
    for (i, heights) in ferrers_profiles(5, 5).iter().enumerate() {
        t.run(Identity::RecursionRook, Some(&board_arg(heights)), FamilyKind::Elliptic, 5, i as u64, Some(1e-9));
    }
    // every skyline board, heights in any order
    let skylines = (1..=5).flat_map(|n| (0..n).map(|_| 0..=3usize).multi_cartesian_product());
    for (i, heights) in skylines.enumerate() {
        t.run(Identity::RecursionFile, Some(&board_arg(&heights)), FamilyKind::Elliptic, 3, i as u64, Some(1e-9));
    }
    for i in 0..=2 {
        for j in 1..=3 {
            if i > j {
                continue;
            }
            for identity in [Identity::RecursionGenStir2, Identity::RecursionGenStir1] {
                t.run_with(identity, Some("n=5"), FamilyKind::Elliptic, 25, 11, Some(1e-9), |r| (r.i, r.j) = (Some(i), Some(j)));
            }
        }
    }
    t.run(Identity::RecursionLah, Some("n=5"), FamilyKind::Elliptic, 25, 12, Some(1e-9));
    for r in 1..=2 {
        t.run(Identity::RecursionLahR, Some(&format!("n=5,r={r}")), FamilyKind::Elliptic, 25, 13, Some(1e-9));
    }
    for r in 1..=3 {
        t.run(Identity::RecursionStirling1, Some(&format!("n=5,r={r}")), FamilyKind::Elliptic, 25, 14, Some(1e-9));
        t.run(Identity::RecursionStirling2, Some(&format!("n=5,r={r}")), FamilyKind::Elliptic, 25, 15, Some(1e-9));
    }
    t.run(Identity::RecursionBinomial, Some("n=5"), FamilyKind::Elliptic, 25, 16, Some(1e-9));
}

fn closed_forms(t: &mut Tally) {
    t.run(Identity::ClosedFormAqRect, None, FamilyKind::Aq, 25, 21, Some(1e-9));
    t.run(Identity::ClosedFormLah, Some("n=5"), FamilyKind::Aq, 25, 22, Some(1e-9));
    t.run(Identity::ClosedFormLahR, Some("n=5,r=2"), FamilyKind::Aq, 25, 23, Some(1e-9));
    t.run(Identity::ClosedFormAbel, Some("n=5"), FamilyKind::Elliptic, 25, 24, Some(1e-9));
    for r in 1..=3 {
        t.run(Identity::ClosedFormAbelR, Some(&format!("n=5,r={r}")), FamilyKind::Elliptic, 25, 25, Some(1e-9));
    }
    for m in 1..=8 {
        for r in 1..=2 {
            t.run(Identity::ClosedFormAbelGen, Some(&format!("m={m},n=5,r={r}")), FamilyKind::Elliptic, 25, 26, Some(1e-9));
        }
    }
}

fn jump_formula(t: &mut Tally) {
    for i in 0..=2 {
        for j in 1..=3 {
            for n in 1..=4 {
                let board = format!("n={n}");
                let set = |r: &mut CheckRequest| (r.i, r.j) = (Some(i), Some(j));
                t.run_with(Identity::ProductJump, Some(&board), FamilyKind::Elliptic, 25, 31, Some(1e-8), set);
                t.run_with(Identity::JumpEnumeration, Some(&board), FamilyKind::Elliptic, 25, 32, Some(1e-8), set);
            }
        }
    }
}

fn rg_statistic(t: &mut Tally) {
    for (i, j, n) in [(1, 2, 5), (2, 3, 4)] {
        let board = format!("n={n}");
        t.run_with(Identity::RgStatistic, Some(&board), FamilyKind::Elliptic, 25, 41, Some(1e-10), |r| {
            (r.i, r.j) = (Some(i), Some(j))
        });
    }
}

/// Forest counts of `A_{m,n}` by number of trees, straight from the bijection.
fn forest_counts(m: usize, n: usize) -> Result<BTreeMap<usize, u64>, Error> {
    let shape = AbelShape::new(m, n, 1)?;
    let board = shape.board().extended(0);
    let mut counts = BTreeMap::new();
    for rooks in 0..=n {
        for q in enumerate_placements(&board, PlacementKind::File, rooks)? {
            *counts.entry(file_to_forest(&q, &shape)?.tree_count()).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

fn bijections(t: &mut Tally) {
    let exact = None;
    for n in 1..=7 {
        t.run(Identity::BijectionPartition, Some(&format!("n={n}")), FamilyKind::Trivial, 1, 0, exact);
        for r in 1..=3.min(n) {
            t.run(Identity::BijectionCycles, Some(&format!("n={n},r={r}")), FamilyKind::Trivial, 1, 0, exact);
        }
    }
    for n in 1..=5 {
        for r in 1..=2.min(n) {
            t.run(Identity::BijectionTubes, Some(&format!("n={n},r={r}")), FamilyKind::Trivial, 1, 0, exact);
        }
    }
    for n in 1..=6 {
        t.run(Identity::BijectionAbel, Some(&format!("n={n}")), FamilyKind::Trivial, 1, 0, exact);
    }
    for m in 1..=8 {
        for n in 1..=4 {
            for r in 1..=2.min(n) {
                t.run(Identity::BijectionAbelColored, Some(&format!("m={m},n={n},r={r}")), FamilyKind::Trivial, 1, 0, exact);
            }
        }
    }
    match forest_counts(5, 5) {
        Ok(c) if c.get(&2) == Some(&500) => t.checks += 1,
        other => t.fail(format!("t_(5,2) != 500: {other:?}")),
    }
    match forest_counts(4, 3) {
        Ok(c) if c == BTreeMap::from([(1, 16), (2, 8), (3, 1)]) => t.checks += 1,
        other => t.fail(format!("A_(4,3) forest counts != 16/8/1: {other:?}")),
    }
}

fn analytic(t: &mut Tally) {
    t.run(Identity::Inversion, None, FamilyKind::Elliptic, 200, 51, Some(1e-9));
    t.run(Identity::QuasiPeriodicity, None, FamilyKind::Elliptic, 200, 52, Some(1e-9));
    t.run(Identity::AdditionFormula, None, FamilyKind::Elliptic, 200, 53, Some(1e-10));
    t.run(Identity::Ellipticity, None, FamilyKind::Elliptic, 200, 54, Some(1e-9));
}

fn equivalences(t: &mut Tally) {
    t.run(Identity::RookEquivalence, Some("n=5"), FamilyKind::Elliptic, 25, 61, Some(1e-9));
    for (i, heights) in ferrers_profiles(5, 4).iter().enumerate() {
        t.run(Identity::FileEquivalence, Some(&board_arg(heights)), FamilyKind::Elliptic, 3, i as u64, Some(1e-9));
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let results = [
        criterion(1, "rook factorization, Ferrers boards n,h <= 5", "1e-8", factorization),
        criterion(2, "r_3 on B(3,3,3) as a product of two shifted numbers", "1e-10", rectangle_example),
        criterion(3, "mahonian anchor r_n([n]x[n]) = [n]_q!, n <= 6", "exact", |t| {
            t.run(Identity::DegenerationMahonian, Some("n=6"), FamilyKind::Trivial, 1, 0, None)
        }),
        criterion(4, "Carlitz oracle for q-Stirling numbers, n <= 8", "exact", |t| {
            t.run(Identity::DegenerationCarlitz, Some("n=8"), FamilyKind::Trivial, 1, 0, None)
        }),
        criterion(5, "recursions agree with enumeration, n <= 5", "1e-9", recursions),
        criterion(6, "a;q rectangle, Lah and Abel closed forms", "1e-9", closed_forms),
        criterion(7, "j-attacking product formula, I <= 2, J <= 3, n <= 4", "1e-8", jump_formula),
        criterion(8, "restricted growth word statistic", "1e-10", rg_statistic),
        criterion(9, "bijection roundtrips and exact counts", "exact", bijections),
        criterion(10, "theta inversion, quasi-periodicity, addition, ellipticity", "1e-9 / 1e-10", analytic),
        criterion(11, "Stirling matrix inverse at (I,J) = (0,1), n <= 6", "1e-9", |t| {
            t.run(Identity::MatrixInverse, Some("n=6"), FamilyKind::Elliptic, 25, 71, Some(1e-9))
        }),
        criterion(12, "rook and file equivalences, n <= 5", "1e-9", equivalences),
    ];
    let failed = results.iter().filter(|c| !c.passed()).count();
    println!(
        "acceptance: {} of {} criteria passed in {:.1}s",
        results.len() - failed,
        results.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
