use priorcalc::harness::*;
use priorcalc::Engine;

fn main() {
    let eng = Engine::default();
    for seed in [42u64, 7, 99] {
        let cfg = GeneratorConfig::with_seed(seed);
        let rules = check_rules(&eng, &cfg, 600).unwrap();
        let relabel = check_relabel_invariance(&eng, &cfg, 600).unwrap();
        let route = check_route_identity(&eng, &cfg, 600).unwrap();
        println!("seed {seed}: rules skipped {}/600, relabel skipped {}/600, route skipped {}/600",
            rules.skipped, relabel.skipped, route.skipped);
    }
}
