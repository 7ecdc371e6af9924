use tigris::bench::{generate_scenario, mix_seed};
use tigris::dubins::VehicleState;
use tigris::planner::{plan, PlannerKind, StopCondition, World};
use tigris::scenario::Scenario;

fn main() {
    let mut template = Scenario::desk_template();
    template.start = VehicleState::new(150.0, 150.0, 100.0, std::f64::consts::FRAC_PI_4);
    for iters in [800u64, 1500, 4000] {
        let mut line = format!("corner iters {iters:>5}:");
        for count in [1usize, 2, 3, 10, 11, 12] {
            template.generator.fixed_centroid_count = Some(count);
            let n = 12;
            let (mut tm, mut rm) = (0.0, 0.0);
            for s in 0..n {
                let mut sc = generate_scenario(mix_seed(321, s), &template);
                sc.planner.stop = StopCondition::Iterations(iters);
                let grid = sc.build_grid().unwrap();
                let world = World { grid: &grid, sensor: &sc.sensor, weights: &sc.weights, zones: &sc.zones };
                let mut cfg = sc.planner;
                cfg.seed = mix_seed(sc.seed, 1);
                tm += plan(&world, sc.start, &cfg, PlannerKind::Tigris).unwrap().info;
                cfg.seed = mix_seed(sc.seed, 2);
                rm += plan(&world, sc.start, &cfg, PlannerKind::Rig).unwrap().info;
            }
            line.push_str(&format!(" n{count}:{:5.1}%", 100.0 * (tm - rm) / rm));
        }
        println!("{line}");
    }
}
