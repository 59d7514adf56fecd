//! Acceptance suite. Each test prints one PASS/FAIL line and then asserts.
//!
//! Run with `cargo test -p zklat-core --test acceptance -- --nocapture`.
//! The full dimension-48 certification is `#[ignore]`d; run it with
//! `-- --ignored criterion_5_full`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zklat::code::DEFAULT_ENUMERATION_CAP;
use zklat::constructions::{four_negacirculant_code, search_negacirculant, Catalog};
use zklat::lattice::{
    code_from_frame, construction_a, double_frame, even_neighbors, even_sublattice,
    frame_coordinates, standard_frame,
};
use zklat::modforms::{
    basis_form, decompose_e4_delta, e4, extremal_defect, extremal_theta, series_from_shells,
    theta_from_swe, QSeries,
};
use zklat::{extremal_bound, EnumOptions, LatticeBasis, Modulus};

// Every comparison below is exact; only wall-clock budgets carry slack.
const BUDGET_1: Duration = Duration::from_secs(60);
const BUDGET_2: Duration = Duration::from_secs(10);
const BUDGET_3: Duration = Duration::from_secs(60);
const BUDGET_4: Duration = Duration::from_secs(3600);
const BUDGET_5_PARTIAL: Duration = Duration::from_secs(30 * 60);
const BUDGET_6: Duration = Duration::from_secs(60);
const BUDGET_7: Duration = Duration::from_secs(600);
const BUDGET_8: Duration = Duration::from_secs(60);

const E4_HEAD: [i64; 6] = [1, 240, 2160, 6720, 17520, 30240];
const KISSING_32: i64 = 146880;
const KISSING_24: i64 = 196560;
const SHELL_5_DIM_48: u64 = 393216;

fn report(id: &str, what: &str, ok: bool, elapsed: Duration, budget: Duration) {
    let within = elapsed <= budget;
    let verdict = if ok && within { "PASS" } else { "FAIL" };
    println!(
        "[criterion {id}] {verdict}: {what} ({:.1}s, budget {}s)",
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    assert!(ok, "criterion {id} failed: {what}");
    assert!(within, "criterion {id} exceeded its time budget");
}

fn int(s: &QSeries, e: u64) -> BigInt {
    s.coeff_int(e).expect("coefficient present")
}

fn unlimited() -> EnumOptions {
    EnumOptions::default()
}

#[test]
fn criterion_1_e4_triple_identity() {
    let t = Instant::now();
    let catalog = Catalog::bundled();
    let sigma = e4(10);
    let mut ok = (0..=5).all(|i| int(&sigma, 2 * i) == BigInt::from(E4_HEAD[i as usize]));
    for k in 1..=6 {
        let code = catalog.seed(k).unwrap().code().unwrap();
        let swe = code.swe(DEFAULT_ENUMERATION_CAP).unwrap();
        let from_swe = theta_from_swe(&swe, 10).unwrap();
        let shells = construction_a(&code)
            .unwrap()
            .shell_sizes(Rational64::from_integer(10), &unlimited())
            .unwrap();
        let from_shells = series_from_shells(&shells, 1).unwrap();
        let this = from_swe.simplified().agrees_with(&sigma)
            && from_shells.agrees_with(&sigma)
            && from_swe.exact_through() >= 10 * 2 * k as usize
            && from_shells.exact_through() >= 10;
        if !this {
            println!("  k = {k}: swe {from_swe}  shells {from_shells}");
        }
        ok &= this;
    }
    report(
        "1",
        "E4 = swe substitution = Construction A shells, k = 1..6, through q^10",
        ok,
        t.elapsed(),
        BUDGET_1,
    );
}

#[test]
fn criterion_2_table_codes_verify() {
    let t = Instant::now();
    let catalog = Catalog::bundled();
    let names = [
        "C_{8,56}",
        "C_{8,64}",
        "C_{10,56}",
        "C_{10,64}",
        "C_{12,32}",
        "C_{12,40}",
        "C_{12,56}",
    ];
    let mut ok = true;
    for name in names {
        let code = catalog.get(name).unwrap().code().unwrap();
        let sd = code.is_self_dual();
        let t2 = code.is_type_ii();
        if !(sd && t2) {
            println!("  {name}: self_dual {sd}, type_ii {t2}");
        }
        ok &= sd && t2;
    }
    report(
        "2",
        "seven table codes are self-dual and Type II",
        ok,
        t.elapsed(),
        BUDGET_2,
    );
}

#[test]
fn criterion_3_defect_table() {
    let t = Instant::now();
    let mut ok = extremal_defect(8, 1, None).unwrap() == BigInt::from(224);
    let mut count = 0;
    for m in 1..=9 {
        for k in 1..=6 {
            let d = extremal_defect(8 * m, k, None).unwrap();
            if d <= BigInt::from(0) {
                println!("  n = {}, k = {k}: defect {d}", 8 * m);
                ok = false;
            }
            count += 1;
        }
    }
    ok &= count == 54;
    report(
        "3",
        "54 extremal defects positive, defect(8, 1) = 224",
        ok,
        t.elapsed(),
        BUDGET_3,
    );
}

#[test]
fn criterion_4_c12_32_is_extremal() {
    let t = Instant::now();
    let code = Catalog::bundled().get("C_{12,32}").unwrap().code().unwrap();
    let lattice = construction_a(&code).unwrap();
    let mu = lattice.min_norm(&unlimited()).unwrap();
    let d_e = (mu * Rational64::from_integer(12)).to_integer() as u64;
    let shells = lattice
        .shell_sizes(Rational64::from_integer(4), &unlimited())
        .unwrap();
    let predicted = int(&extremal_theta(32, 4).unwrap(), 4);
    let ok = mu == Rational64::from_integer(4)
        && d_e == 48
        && d_e == extremal_bound(32, 6)
        && shells.count_int(2) == 0
        && BigInt::from(shells.count_int(4)) == predicted
        && predicted == BigInt::from(KISSING_32);
    report(
        "4",
        &format!(
            "min norm {mu}, d_E {d_e}, {} vectors of norm 4",
            shells.count_int(4)
        ),
        ok,
        t.elapsed(),
        BUDGET_4,
    );
}

struct OddPipeline {
    lattice: LatticeBasis,
    ok: bool,
    neighbors: Vec<LatticeBasis>,
}

/// Checks shared by the partial and full runs of criterion 5.
fn odd_pipeline(top_norm: i64) -> OddPipeline {
    let code = Catalog::bundled().get("C_{5,48}").unwrap().code().unwrap();
    let mut ok = code.modulus() == Modulus::new(5).unwrap() && code.is_self_dual();
    let lattice = construction_a(&code).unwrap();
    let inv = lattice.invariants();
    ok &= inv.unimodular && inv.odd;

    let shells = lattice
        .shell_sizes(Rational64::from_integer(top_norm), &unlimited())
        .unwrap();
    ok &= (1..top_norm.min(5)).all(|m| shells.count_int(m) == 0);
    if top_norm >= 5 {
        ok &= shells.count_int(5) == SHELL_5_DIM_48;
    }

    let l0 = even_sublattice(&lattice).unwrap().lattice;
    let neighbors = even_neighbors(&lattice).unwrap();
    ok &= !neighbors.is_empty();
    for nb in &neighbors {
        let inv = nb.invariants();
        ok &= inv.even && inv.unimodular;
        let big = l0.rescaled(nb.scale()).unwrap();
        ok &= big.rows().iter().all(|r| nb.contains(r));
    }

    let ten = double_frame(&standard_frame(&code).unwrap()).unwrap();
    ok &= ten.norm() == Rational64::from_integer(10) && ten.len() == 48;
    let mut contained = 0;
    for nb in &neighbors {
        if let Ok(f) = ten.rehost(nb) {
            contained += 1;
            let z10 = code_from_frame(nb, &f).unwrap();
            ok &= z10.modulus() == Modulus::from_k(5).unwrap()
                && z10.is_self_dual()
                && z10.is_type_ii();
        }
    }
    println!(
        "  neighbors: {}, containing the 10-frame: {contained}",
        neighbors.len()
    );
    ok &= contained > 0;
    OddPipeline {
        lattice,
        ok,
        neighbors,
    }
}

#[test]
fn criterion_5_partial_odd_lattice_pipeline() {
    let t = Instant::now();
    let p = odd_pipeline(3);
    report(
        "5",
        "PARTIAL: C_{5,48} self-dual, A_5 odd unimodular, no vectors of norm 1..3, even neighbor holds a 10-frame with a Type II Z_10 code",
        p.ok,
        t.elapsed(),
        BUDGET_5_PARTIAL,
    );
}

#[test]
#[ignore = "dimension-48 enumeration to norm 5 takes on the order of a day on one core"]
fn criterion_5_full() {
    let t = Instant::now();
    let p = odd_pipeline(5);
    let ok = p.ok
        && p.lattice.dim() == 48
        && p.neighbors
            .iter()
            .any(|nb| nb.min_norm(&unlimited()).unwrap() == Rational64::from_integer(6));
    report(
        "5",
        "FULL: shells through norm 5 and an extremal even neighbor",
        ok,
        t.elapsed(),
        Duration::MAX,
    );
}

#[test]
fn criterion_6_frame_doubling_small() {
    let t = Instant::now();
    let seed = Catalog::bundled().seed(3).unwrap().code().unwrap();
    let mut ok = seed.modulus() == Modulus::from_k(3).unwrap() && seed.is_type_ii();
    let lattice = construction_a(&seed).unwrap();
    let doubled = double_frame(&standard_frame(&seed).unwrap()).unwrap();
    let z12 = code_from_frame(&lattice, &doubled).unwrap();
    ok &= z12.modulus() == Modulus::from_k(6).unwrap() && z12.length() == 8 && z12.is_type_ii();

    // Gram of the input lattice, read through frame coordinates inside A_12
    let rebuilt = construction_a(&z12).unwrap();
    let coords = frame_coordinates(&doubled.rehost(&lattice).unwrap()).unwrap();
    ok &= coords.iter().all(|c| rebuilt.contains(c));
    let g_in = lattice.gram_scaled();
    for i in 0..8 {
        for j in 0..8 {
            let d: i64 = coords[i].iter().zip(&coords[j]).map(|(a, b)| a * b).sum();
            // <c_i, c_j>/12 in A_12 versus g_in/6 in A_6
            ok &= d * 6 == g_in[i][j] * 12;
        }
    }
    let same = LatticeBasis::new(12, coords).unwrap();
    ok &= same.same_lattice(&rebuilt);
    report(
        "6",
        "Z_6 seed doubles to a Type II Z_12 code with the same Gram matrix",
        ok,
        t.elapsed(),
        BUDGET_6,
    );
}

#[test]
fn criterion_7_bruteforce_matches_lattice() {
    let t = Instant::now();
    let mut checked = 0;
    let mut ok = true;
    for (k, length, seed) in [
        (2, 8, 7),
        (2, 12, 7),
        (2, 16, 7),
        (3, 8, 11),
        (3, 12, 11),
        (3, 16, 11),
    ] {
        let m = Modulus::from_k(k).unwrap();
        let hits = search_negacirculant(m, length, 1 << 16, seed).unwrap();
        for spec in hits.iter().take(5) {
            let code = four_negacirculant_code(spec).unwrap();
            assert!(code.is_self_dual());
            let brute = code
                .min_euclidean_weight_bruteforce(DEFAULT_ENUMERATION_CAP)
                .unwrap();
            let mu = construction_a(&code)
                .unwrap()
                .min_norm(&unlimited())
                .unwrap();
            let two_k = Rational64::from_integer(2 * k as i64);
            let agree = if mu < two_k {
                Rational64::from_integer(brute as i64) == mu * two_k
            } else {
                brute >= (4 * k * k) as u64
            };
            if !agree {
                println!(
                    "  Z_{} length {length}: brute force {brute}, min norm {mu}",
                    2 * k
                );
            }
            ok &= agree;
            checked += 1;
        }
    }
    ok &= checked >= 20;
    report(
        "7",
        &format!("brute-force d_E = 2k min_norm on {checked} searched codes"),
        ok,
        t.elapsed(),
        BUDGET_7,
    );
}

#[test]
fn criterion_8_extremal_theta_and_round_trip() {
    let t = Instant::now();
    let mut ok = extremal_theta(8, 10).unwrap().agrees_with(&e4(10));
    let t24 = extremal_theta(24, 6).unwrap();
    ok &= int(&t24, 2) == BigInt::from(0) && int(&t24, 4) == BigInt::from(KISSING_24);

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let j = rng.gen_range(1..=9usize);
        let mu = rng.gen_range(0..=j / 3);
        let p = 2 * (mu as u64 + 1) + rng.gen_range(0..6) * 2;
        let a: Vec<BigInt> = (0..=mu)
            .map(|_| BigInt::from(rng.gen_range(-10_000i64..10_000)))
            .collect();
        let tail = QSeries::from_terms(
            1,
            p as usize,
            (mu + 1..=p as usize / 2)
                .map(|e| (2 * e, BigInt::from(rng.gen_range(-1_000_000i64..1_000_000)))),
        );
        let mut theta = tail.clone();
        for (s, c) in a.iter().enumerate() {
            theta = theta.add(&basis_form(j as i64, s as u32, p).unwrap().scale(c));
        }
        let d = decompose_e4_delta(&theta, j, mu).unwrap();
        let mut rebuilt = d.remainder.clone();
        for (s, c) in d.coefficients.iter().enumerate() {
            rebuilt = rebuilt.add(&basis_form(j as i64, s as u32, p).unwrap().scale(c));
        }
        ok &= d.coefficients == a
            && rebuilt.agrees_with(&theta)
            && d.remainder.valuation().is_none_or(|v| v >= 2 * (mu + 1));
    }
    report(
        "8",
        "extremal theta in dimensions 8 and 24, 50 exact decomposition round trips",
        ok,
        t.elapsed(),
        BUDGET_8,
    );
}
