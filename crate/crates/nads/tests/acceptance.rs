//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its elapsed time (visible under `cargo test --test acceptance -- --nocapture`).
//!
//! The bundled specs and configs under specs/ and configs/ are the corpus;
//! every tolerance and threshold is pinned here.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nads::config::{load_config, load_system_spec};
use nads::linear::{
    collective_from_transitivity, lemma_zero_witness, synchronous_from_transitivity, LinearConfig,
    LinearSystemSpec,
};
use nads::modulus::verify_power_convergence;
use nads::periodic::{detect_periodic_point, is_invariant_periodic_point, is_invariant_set};
use nads::preservation::{
    verify_iterate_preservation, PreservationConfig, PreservationMode, PreservationVerdict,
};
use nads::run::{run, EXIT_NO_EVIDENCE, EXIT_POSITIVE};
use nads::sensitivity::{check_collective, check_synchronous, find_witness};
use nads::{MapSequence, Point, StateSpace};

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn bundled_system(name: &str) -> MapSequence {
    load_system_spec(&manifest().join("specs").join(name))
        .unwrap_or_else(|e| panic!("loading {name}: {e}"))
        .build()
        .unwrap()
}

fn config_path(name: &str) -> PathBuf {
    manifest().join("configs").join(name)
}

struct Criterion {
    label: &'static str,
    budget_s: f64,
    started: Instant,
}

impl Criterion {
    fn start(label: &'static str, budget_s: f64) -> Self {
        Criterion {
            label,
            budget_s,
            started: Instant::now(),
        }
    }

    fn pass(self) {
        let elapsed = self.started.elapsed().as_secs_f64();
        println!(
            "ACCEPTANCE {}: PASS in {elapsed:.2}s (budget {}s)",
            self.label, self.budget_s
        );
        assert!(
            elapsed < self.budget_s,
            "{} exceeded its runtime budget: {elapsed:.2}s >= {}s",
            self.label,
            self.budget_s
        );
    }
}

fn s(v: f64) -> Point {
    Point::scalar(v)
}

#[test]
fn criterion_1_worked_example_reproduction() {
    let c = Criterion::start("criterion 1 (worked-example reproduction)", 1.0);

    let f = bundled_system("f_system.json");
    let orbit = f.trajectory(&s(1.0), 4).unwrap();
    let values: Vec<f64> = orbit
        .points
        .iter()
        .map(|p| p.as_scalar().unwrap())
        .collect();
    assert_eq!(values, vec![1.0, 2.0, 1.0, 2.0, 1.0], "exact trajectory");

    let rep = detect_periodic_point(&f, &s(1.0), 8, 16, 1e-9)
        .unwrap()
        .expect("1 is periodic");
    assert_eq!(rep.period, 2);

    let chk = is_invariant_set(&f, &[s(1.0), s(2.0)], 1e-9, None).unwrap();
    assert!(!chk.invariant);
    let v = chk.violation.unwrap();
    assert_eq!(v.map_index, 0, "the +1 translation violates first");
    assert_eq!(v.point, s(2.0));
    assert_eq!(v.image, s(3.0), "f_1(2) = 3 leaves {{1, 2}}");

    let g = bundled_system("g_system.json");
    let res = is_invariant_periodic_point(&g, &s(-1.0), 8, 16, 1e-9).unwrap();
    assert!(res.invariant_periodic);
    let rep = res.report.unwrap();
    assert_eq!(rep.period, 2);
    assert_eq!(rep.orbit_points, vec![s(-1.0), s(1.0)]);

    c.pass();
}

#[test]
fn criterion_2_composition_law_10k_instances() {
    let c = Criterion::start("criterion 2 (composition law, 10^4 instances)", 10.0);

    let systems: Vec<(MapSequence, &str)> = vec![
        (bundled_system("f_system.json"), "f"),
        (bundled_system("g_system.json"), "g"),
        (bundled_system("doubling.json"), "doubling"),
        (bundled_system("identity.json"), "identity"),
        (bundled_system("shift8.json"), "shift8"),
        (bundled_system("tent_limit.json"), "tent-limit"),
        (bundled_system("rotation.json"), "rotation"),
    ];
    let tau_compose = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(20240810);
    let mut checked = 0u64;
    while checked < 10_000 {
        let (seq, name) = &systems[rng.gen_range(0..systems.len())];
        let i = rng.gen_range(1..=6u64);
        let m = rng.gen_range(0..=6u64);
        let n = rng.gen_range(0..=6u64);
        // starts drawn from a region whose windows stay inside each system's
        // analysis window
        let x = match *name {
            "f" => s(rng.gen_range(-2.0..2.0)),
            "g" => s(rng.gen_range(-1.0..1.0)),
            "shift8" => Point::Vector((0..8).map(|_| rng.gen_range(-0.5..0.5)).collect()),
            _ => s(rng.gen_range(0.0..1.0)),
        };
        let whole = seq.apply_window(i, m + n, &x).unwrap();
        let first = seq.apply_window(i, m, &x).unwrap();
        let split = seq.apply_window(i + m, n, &first).unwrap();
        let d = seq.space.distance(&whole, &split).unwrap();
        assert!(
            d <= tau_compose,
            "{name}: window split at (i={i}, m={m}, n={n}) differs by {d}"
        );
        checked += 1;
    }
    assert_eq!(checked, 10_000);

    c.pass();
}

#[test]
fn criterion_3_iterate_preservation_desk_check() {
    let c = Criterion::start("criterion 3 (iterate preservation, k = 2..8)", 60.0);

    let doubling = bundled_system("doubling.json");
    let k_list: Vec<u64> = (2..=8).collect();
    let cfg = PreservationConfig {
        base_points: StateSpace::Circle.grid(32).unwrap(),
        xs: vec![s(0.1), s(0.3)],
        eps_ladder: vec![0.1, 0.01, 0.001],
        horizon: 48,
        budget: 48,
        rng_seed: 11,
        grid_points: 128,
    };

    for mode in [PreservationMode::Plain, PreservationMode::Collective] {
        let rep = verify_iterate_preservation(&doubling, &k_list, mode, &cfg).unwrap();
        assert!(rep.hypothesis_met, "{mode:?}: base system must be sensitive");
        assert_eq!(
            rep.verdict,
            PreservationVerdict::PreservedAtDeskScale,
            "{mode:?}"
        );
        for row in &rep.rows {
            assert!(row.witness_found, "{mode:?} k={}", row.k);
            let predicted = row.predicted_eps_delta.unwrap();
            // structural Lipschitz constant 2 makes the prediction exact
            assert_eq!(
                predicted,
                rep.base_delta / 2f64.powi(row.k as i32 + 2),
                "{mode:?} k={}",
                row.k
            );
            assert!(
                row.measured_delta >= predicted,
                "{mode:?} k={}: measured {} < predicted {predicted}",
                row.k,
                row.measured_delta
            );
        }
    }

    c.pass();
}

#[test]
fn criterion_4_banks_pipeline_desk_check() {
    let c = Criterion::start("criterion 4 (certificate pipeline on doubling)", 120.0);

    let config = load_config(&config_path("banks_doubling.json"), None, None).unwrap();
    let outcome = run(&config).unwrap();
    assert_eq!(outcome.exit_code, EXIT_POSITIVE);
    assert_eq!(outcome.report.verdict, "certified-at-desk-scale");

    let delta = outcome.report.constants["delta"];
    let eta = outcome.report.constants["eta"];
    assert!((delta - 1.0 / 9.0).abs() <= 1e-12, "delta = {delta}");
    assert!((eta - 1.0 / 72.0).abs() <= 1e-12, "eta = {eta}");

    let detail = &outcome.report.detail;
    let hit_fraction = detail["transitivity"]["hit_fraction"].as_f64().unwrap();
    assert_eq!(hit_fraction, 1.0);
    assert_eq!(
        detail["transitivity"]["balls"].as_array().unwrap().len(),
        16,
        "resolution 1/16"
    );
    assert_eq!(detail["transitivity"]["horizon"].as_u64().unwrap(), 64);
    let coverage = detail["density"]["coverage"].as_f64().unwrap();
    assert!(coverage >= 0.95, "coverage = {coverage}");
    let conf = &detail["sensitivity_confirmation"];
    assert_eq!(conf["witness_coverage"].as_f64().unwrap(), 1.0);
    assert_eq!(conf["base_points_tested"].as_u64().unwrap(), 32);
    assert_eq!(conf["delta_estimate"].as_f64().unwrap(), eta);

    c.pass();
}

#[test]
fn criterion_5_isometry_null_results() {
    let c = Criterion::start("criterion 5 (isometry null results)", 30.0);

    let f = bundled_system("f_system.json");
    let identity = bundled_system("identity.json");
    let horizon = 1_000;

    for (seq, starts, name) in [
        (&f, vec![s(1.0), s(-0.5)], "f"),
        (&identity, vec![s(0.3), s(0.8)], "identity"),
    ] {
        for eps in [0.1, 0.01, 0.001] {
            let delta = eps * 1.0001; // any delta > eps
            for x in &starts {
                let w = find_witness(seq, x, eps, delta, horizon, 64, 7).unwrap();
                assert!(w.is_none(), "{name}: unexpected witness at eps={eps}");
            }
            let xs: Vec<Point> = if name == "f" {
                vec![s(0.0), s(1.0)]
            } else {
                vec![s(0.25), s(0.75)]
            };
            let w = check_collective(seq, &xs, eps, delta, horizon, 64, 7).unwrap();
            assert!(w.is_none(), "{name}: unexpected collective witness");
            let w = check_synchronous(seq, &xs, eps, delta, horizon, 64, 7).unwrap();
            assert!(w.is_none(), "{name}: unexpected synchronous witness");
        }
    }

    // both systems fail the certificate pipeline
    for cfg_name in ["banks_f.json", "banks_identity.json"] {
        let config = load_config(&config_path(cfg_name), None, None).unwrap();
        let outcome = run(&config).unwrap();
        assert_eq!(outcome.exit_code, EXIT_NO_EVIDENCE, "{cfg_name}");
        assert_eq!(outcome.report.verdict, "hypothesis-unmet", "{cfg_name}");
    }

    c.pass();
}

#[test]
fn criterion_6_linear_constructions() {
    let c = Criterion::start("criterion 6 (linear shift constructions)", 10.0);

    let seq = bundled_system("shift8.json");
    let spec = LinearSystemSpec::new(seq.clone()).unwrap();
    let eps = 1e-2;

    let zw = lemma_zero_witness(&spec, eps, 0.5, 32, 64, 3)
        .unwrap()
        .expect("zero witness");
    assert!(zw.k <= 8, "k = {}", zw.k);
    assert!(zw.revalidate(&seq, eps, 0.5).unwrap());

    let cfg = LinearConfig {
        eta: 0.5,
        rng_seed: 7,
        ..LinearConfig::default()
    };
    let space = &seq.space;
    let zero = space.zero();

    let xs2 = vec![Point::basis(8, 0, 0.5), Point::basis(8, 1, 0.5)];
    let xs3 = vec![
        Point::basis(8, 0, 0.5),
        Point::basis(8, 1, 0.5),
        Point::basis(8, 2, 0.5),
    ];
    let built = [
        collective_from_transitivity(&spec, &xs2, eps, &cfg).unwrap(),
        synchronous_from_transitivity(&spec, &xs3, eps, &cfg).unwrap(),
    ];
    for construction in &built {
        // every recorded inequality re-validates
        assert!(construction.trace.all_passed);
        for chk in &construction.trace.checks {
            assert!(chk.passed, "trace check failed: {}", chk.label);
        }
        let w = &construction.witness;
        assert!(w
            .revalidate(&seq, construction.claimed_delta, eps)
            .unwrap());

        // translation identity within 1e-12, recomputed from scratch
        for (x, y) in w.xs.iter().zip(&w.ys) {
            let direct = space.distance(x, y).unwrap();
            let z = y.sub(x).unwrap();
            let at_zero = space.distance(&zero, &z).unwrap();
            assert!(
                (direct - at_zero).abs() <= 1e-12,
                "translation identity: {direct} vs {at_zero}"
            );
        }

        // branch guarantee at every index: the selected branch separates
        // beyond eta/2 at the witness time
        for sep in &w.separations {
            assert!(*sep > construction.claimed_delta);
        }
    }

    c.pass();
}

#[test]
fn criterion_7_uniform_convergence() {
    let c = Criterion::start("criterion 7 (uniform convergence of powers)", 30.0);

    let seq = bundled_system("tent_limit.json");
    for k in [1u64, 2, 3] {
        let fine = verify_power_convergence(&seq, k, 0.05, 10_001, 512, 4).unwrap();
        assert!(fine.n_of_k >= 1);
        assert!(fine.sup_at_n < 0.05);
        let coarse = verify_power_convergence(&seq, k, 0.1, 10_001, 512, 4).unwrap();
        assert!(
            coarse.n_of_k <= fine.n_of_k,
            "k={k}: N must not increase with eps ({} vs {})",
            coarse.n_of_k,
            fine.n_of_k
        );
    }

    c.pass();
}

#[test]
fn criterion_8_reproducibility_of_every_pipeline() {
    let c = Criterion::start("criterion 8 (byte-identical reports)", 120.0);

    let configs_dir = manifest().join("configs");
    let mut names: Vec<String> = std::fs::read_dir(&configs_dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    assert!(names.len() >= 11, "bundled corpus covers every analysis");

    let mut analyses_seen = std::collections::BTreeSet::new();
    for name in &names {
        let config = load_config(&Path::new(&configs_dir).join(name), None, None).unwrap();
        analyses_seen.insert(config.analysis.name().to_string());
        let first = run(&config).unwrap();
        let second = run(&config).unwrap();
        assert_eq!(
            first.report.comparable_json().unwrap(),
            second.report.comparable_json().unwrap(),
            "{name}: reports differ between identical runs"
        );
        assert_eq!(first.artifacts, second.artifacts, "{name}: artifacts differ");
        assert_eq!(first.exit_code, second.exit_code);
    }
    assert_eq!(
        analyses_seen.len(),
        11,
        "all analyses exercised: {analyses_seen:?}"
    );

    c.pass();
}
