use formation_core::geometry::min_pairwise_distance;
use formation_core::motion::{run_to_formation, ConflictKind, ControlMode, StepDecision, Trajectory};
use formation_core::{
    assign_with_center, assign_with_leader, centroid, FormationSpec, QuantizerSpec, RngStream, SensorModel, Shape,
    SimConfig, Vec2,
};
use proptest::prelude::*;
use rand::Rng;

fn setup() -> (SimConfig, SensorModel, QuantizerSpec) {
    let cfg = SimConfig {
        radius: 100.0,
        n_r: 64,
        n_theta: 65,
        arrival_tolerance: 100.0 / 63.0,
        max_slots: 3000,
        ..SimConfig::default()
    };
    let q = QuantizerSpec::new(100.0, 64, 65, 50.0).unwrap();
    (cfg, SensorModel::new(0.5, 5, 0.01).unwrap(), q)
}

fn scattered(seed: u64, n: usize) -> Vec<Vec2<f64>> {
    let mut rng = RngStream::new(seed).rng();
    let mut out: Vec<Vec2<f64>> = Vec::new();
    while out.len() < n {
        let p = Vec2::new(rng.random_range(0.0..80.0), rng.random_range(0.0..80.0));
        if out.iter().all(|q| q.distance(p) >= 4.0) {
            out.push(p);
        }
    }
    out
}

fn run(seed: u64, n: usize, shape: Shape, leader: bool) -> Trajectory {
    let (cfg, sensor, q) = setup();
    let x = scattered(seed, n);
    let f = FormationSpec::new(shape, n, 1600.0).build().unwrap();
    let motion = RngStream::new(seed).derive(1);
    if leader {
        let a = assign_with_leader(&x, &f).unwrap().assignment;
        run_to_formation(&x, &f, &a, ControlMode::Leader, &cfg, &sensor, &q, &motion).unwrap()
    } else {
        let c = centroid(&x).unwrap();
        let a = assign_with_center(&x, &f, c).unwrap().assignment;
        run_to_formation(&x, &f, &a, ControlMode::Center(c), &cfg, &sensor, &q, &motion).unwrap()
    }
}

fn shape_of(k: u8) -> Shape {
    match k % 3 {
        0 => Shape::Square,
        1 => Shape::Circle,
        _ => Shape::Triangle,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn runs_stay_apart_and_converge(seed in any::<u64>(), n in 4usize..=10, shape in any::<u8>(), leader in any::<bool>()) {
        let (cfg, _, _) = setup();
        let t = run(seed, n, shape_of(shape), leader);
        prop_assert!(t.converged);
        prop_assert!(t.collisions.is_empty(), "{:?}", t.collisions);
        for s in &t.states {
            prop_assert!(min_pairwise_distance(&s.positions()).unwrap() >= cfg.safety_radius);
        }
        for w in t.states.windows(2) {
            for (a, b) in w[0].robots.iter().zip(&w[1].robots) {
                prop_assert!(a.position.distance(b.position) <= cfg.u_max + 1e-9);
            }
        }
    }

    #[test]
    fn lower_ids_have_priority(seed in any::<u64>(), n in 4usize..=10, leader in any::<bool>()) {
        let t = run(seed, n, Shape::Circle, leader);
        for d in &t.decisions {
            for c in &d.conflicts {
                prop_assert_eq!(c.robot, d.robot);
                if c.kind == ConflictKind::Claim {
                    prop_assert!(c.other < d.robot, "robot {} yielded to later claim of {}", d.robot, c.other);
                }
            }
            if d.chosen != d.preferred {
                prop_assert!(!d.conflicts.is_empty());
            }
            if d.region.is_none() {
                prop_assert_eq!(d.chosen, StepDecision::Arrived);
            }
        }
    }
}

#[test]
fn reruns_are_bit_identical() {
    for (seed, leader) in [(3, true), (4, false)] {
        let a = run(seed, 8, Shape::Triangle, leader);
        let b = run(seed, 8, Shape::Triangle, leader);
        assert_eq!(a.states.len(), b.states.len());
        for (x, y) in a.states.iter().zip(&b.states) {
            for (p, q) in x.positions().iter().zip(y.positions()) {
                assert_eq!(p.x.to_bits(), q.x.to_bits());
                assert_eq!(p.y.to_bits(), q.y.to_bits());
            }
        }
        assert_eq!(a.path_lengths, b.path_lengths);
    }
}

#[test]
fn leader_never_moves() {
    let t = run(21, 9, Shape::Square, true);
    let lead = t.states[0].assignment.leader().unwrap();
    let start = t.states[0].robots[lead].position;
    assert!(t.states.iter().all(|s| s.robots[lead].position == start));
}
