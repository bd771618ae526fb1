use num_complex::{Complex, Complex64};
use proptest::prelude::*;
use qd::Quad;

use ellrook::biject::{
    cycles_to_file, file_to_cycles, file_to_forest, forest_to_file, partition_to_rooks, rooks_to_partition, rooks_to_tubes,
    tubes_to_rooks, AbelShape, PermutationCycles, SetPartition,
};
use ellrook::boards::{count_placements, enumerate_placements, PlacementKind, SkylineBoard};
use ellrook::file::{file_numbers, file_numbers_via_recursion, FileWeighting};
use ellrook::rook::{product_formula_sides, rook_numbers, rook_numbers_via_recursion};
use ellrook::scalar::{lift_complex, modulus, rel_err};
use ellrook::theta::{theta, Nome};
use ellrook::weights::{ExactQ, PreciseFamily, WeightFamily, WeightSystem};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

fn polar(r: f64, phase: f64) -> Complex64 {
    Complex64::from_polar(r, phase)
}

fn complex_in(lo: f64, hi: f64) -> impl Strategy<Value = Complex64> {
    (lo..hi, -3.1f64..3.1).prop_map(|(r, t)| polar(r, t))
}

/// Nonreal phase, kept away from the real axis.
fn nonreal_in(lo: f64, hi: f64) -> impl Strategy<Value = Complex64> {
    (lo..hi, 0.2f64..2.9, any::<bool>()).prop_map(|(r, t, up)| polar(r, if up { t } else { -t }))
}

fn nome(p: Complex64) -> Nome<Quad> {
    Nome::new(p).unwrap().widen()
}

fn elliptic() -> impl Strategy<Value = PreciseFamily> {
    (complex_in(0.5, 2.0), complex_in(0.5, 2.0), nonreal_in(0.6, 0.95), complex_in(0.05, 0.4))
        .prop_map(|(a, b, q, p)| WeightFamily::Elliptic { a, b, q, p: Nome::new(p).unwrap() }.precise())
}

fn ferrers() -> impl Strategy<Value = SkylineBoard> {
    prop::collection::vec(0usize..=5, 1..=5).prop_map(|mut h| {
        h.sort_unstable();
        SkylineBoard::new(h)
    })
}

/// Restricted growth word of length `n` as a set partition of `1..=n`.
fn set_partition(n: usize) -> impl Strategy<Value = SetPartition> {
    prop::collection::vec(0.0f64..1.0, n).prop_map(move |us| {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for (s, u) in us.into_iter().enumerate() {
            let b = (u * (blocks.len() + 1) as f64) as usize;
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(s + 1);
        }
        SetPartition::new(blocks)
    })
}

fn cycles_of(perm: &[usize]) -> PermutationCycles {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    let mut cycles = Vec::new();
    for start in 1..=n {
        if seen[start] {
            continue;
        }
        let mut c = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            c.push(x);
            x = perm[x - 1];
        }
        cycles.push(c);
    }
    PermutationCycles::new(cycles)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta_inversion_and_quasi_periodicity(x in complex_in(0.3, 3.0), p in complex_in(0.0, 0.6)) {
        let (x, pn) = (lift_complex::<Quad>(x), nome(p));
        let t = theta(x, pn).unwrap();
        let inv = -x * theta(x.inv(), pn).unwrap();
        prop_assert!(rel_err(&t, &inv) < 1e-25);
        let shifted = theta(lift_complex::<Quad>(p) * x, pn).unwrap();
        prop_assert!(rel_err(&shifted, &(-t / x)) < 1e-25);
    }

    #[test]
    fn theta_addition_formula(
        x in complex_in(0.5, 2.0), y in complex_in(0.5, 2.0),
        u in complex_in(0.5, 2.0), v in complex_in(0.5, 2.0), p in complex_in(0.0, 0.4),
    ) {
        let pn = nome(p);
        let [x, y, u, v] = [x, y, u, v].map(lift_complex::<Quad>);
        let th = |zs: [Complex<Quad>; 4]| zs.iter().fold(Complex::<Quad>::one(), |acc, &z| acc * theta(z, pn).unwrap());
        let lhs = th([x * y, x / y, u * v, u / v]);
        let rhs = th([x * v, x / v, u * y, u / y]) + u / y * th([y * v, y / v, x * u, x / u]);
        let scale = modulus(lhs).max(modulus(rhs)).max(1e-30);
        prop_assert!(modulus(lhs - rhs) / scale < 1e-20);
    }

    #[test]
    fn rook_product_formula(board in ferrers(), fam in elliptic(), z in complex_in(0.5, 4.0)) {
        let (l, r) = product_formula_sides(&board, &fam, lift_complex(z)).unwrap();
        prop_assert!(rel_err(&l, &r) < 1e-8, "{board:?}: {}", rel_err(&l, &r));
    }

    #[test]
    fn rook_and_file_recursions(board in ferrers(), fam in elliptic()) {
        let direct = rook_numbers(&board, &fam).unwrap();
        for (x, y) in direct.iter().zip(rook_numbers_via_recursion(&board, &fam).unwrap()) {
            prop_assert!(rel_err(x, &y) < 1e-9);
        }
        let files = file_numbers(&board, &fam, FileWeighting::RowOnly).unwrap();
        for (x, y) in files.iter().zip(file_numbers_via_recursion(&board, &fam).unwrap()) {
            prop_assert!(rel_err(x, &y) < 1e-9);
        }
    }

    #[test]
    fn telescoping_numbers(fam in elliptic()) {
        let mut sum = Complex::<Quad>::one();
        for n in 2..=8 {
            sum += fam.big_weight(n - 1).unwrap();
            prop_assert!(rel_err(&fam.number(n).unwrap(), &sum) < 1e-20);
        }
    }

    #[test]
    fn trivial_weights_count_placements(board in ferrers()) {
        let counts = rook_numbers(&board, &ExactQ::trivial()).unwrap();
        let ext = board.extended(0);
        for (k, c) in counts.iter().enumerate() {
            let n = count_placements(&ext, PlacementKind::NonattackingRook, k).unwrap();
            prop_assert_eq!(c.clone(), BigRational::from_integer(n.into()));
        }
    }

    #[test]
    fn partition_roundtrip(part in (1usize..=7).prop_flat_map(set_partition)) {
        let n = part.n();
        let rooks = partition_to_rooks(&part, n).unwrap();
        prop_assert_eq!(rooks.cells().len(), n - part.blocks.len());
        prop_assert_eq!(rooks_to_partition(&rooks).unwrap(), part);
    }

    #[test]
    fn cycles_roundtrip(perm in (1usize..=7).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle()), r in 1usize..=3) {
        let cycles = cycles_of(&perm);
        let firsts_apart = cycles.cycles.iter().all(|c| c.iter().filter(|&&x| x <= r).count() <= 1);
        prop_assume!(r <= perm.len() && firsts_apart);
        let file = cycles_to_file(&cycles, perm.len(), r).unwrap();
        prop_assert_eq!(file_to_cycles(&file, r).unwrap(), cycles);
    }

    #[test]
    fn tube_roundtrip(n in 1usize..=5, r in 1usize..=2, pick in any::<prop::sample::Index>()) {
        prop_assume!(r <= n);
        let board = SkylineBoard::lah_r(n, r).extended(0);
        let all: Vec<_> = (0..=n - r)
            .flat_map(|k| enumerate_placements(&board, PlacementKind::NonattackingRook, k).unwrap())
            .collect();
        let p = pick.get(&all);
        let (tubes, _) = rooks_to_tubes(p, n, r).unwrap();
        prop_assert_eq!(&tubes_to_rooks(&tubes, n, r).unwrap(), p);
    }

    #[test]
    fn forest_roundtrip(n in 1usize..=5, extra in 0usize..=2, r in 1usize..=2, pick in any::<prop::sample::Index>()) {
        prop_assume!(r <= n);
        let shape = AbelShape::new(n + extra, n, r).unwrap();
        let board = shape.board().extended(0);
        let all: Vec<_> = (0..=n)
            .flat_map(|k| enumerate_placements(&board, PlacementKind::File, k).unwrap())
            .collect();
        let q = pick.get(&all);
        let forest = file_to_forest(q, &shape).unwrap();
        forest.validate(&shape).unwrap();
        prop_assert_eq!(&forest_to_file(&forest, &shape).unwrap(), q);
    }
}

#[test]
fn rectangle_rook_count_is_classical() {
    let rs = rook_numbers(&SkylineBoard::rectangle(3, 3), &ExactQ::trivial()).unwrap();
    let counts: Vec<i64> = rs.iter().map(|v| v.to_integer().to_i64().unwrap()).collect();
    assert_eq!(counts, vec![1, 9, 18, 6]);
}
