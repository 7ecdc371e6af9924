fn main() {
    let t0 = std::time::Instant::now();
    for seed in 0..3u64 {
        let toy = tigris::oracles::toy_instance(seed);
        let world = tigris::planner::World {
            grid: &toy.grid, sensor: &toy.sensor, weights: &toy.weights, zones: &[],
        };
        let t = std::time::Instant::now();
        let (r, tree) = tigris::planner::plan_with_tree(&world, toy.start, &toy.cfg, tigris::planner::PlannerKind::Tigris).unwrap();
        let opt = {
            let t = std::time::Instant::now();
            let o = tigris::oracles::lattice_optimum(&toy.grid, &toy.sensor, &toy.weights, toy.start, toy.cfg.budget, toy.cfg.turn_radius, 6);
            eprintln!("  oracle took {:?}", t.elapsed());
            o
        };
        eprintln!("seed {seed}: plan {:?} iters {} nodes {} info {:.3} vs opt {:.3} ratio {:.3}",
            t.elapsed(), r.iterations, tree.nodes.len(), r.info, opt, r.info / opt);
    }
    eprintln!("total {:?}", t0.elapsed());
}
