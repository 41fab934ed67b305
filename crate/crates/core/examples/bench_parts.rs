use gossip_core::branching::{next_birth_delta, BranchState};
use gossip_core::seeds::replicate_rng;
use rand::Rng;
use rand_distr::Exp1;

fn main() {
    let n: u64 = 50_000_000;
    // (a) raw exp draws from ChaCha8
    let mut rng = replicate_rng(1, 0);
    let t0 = std::time::Instant::now();
    let mut acc = 0.0f64;
    for _ in 0..n {
        let e: f64 = rng.sample(Exp1);
        acc += e;
    }
    let d_exp = t0.elapsed().as_secs_f64() / n as f64 * 1e9;
    // (b) newton solve on a mature-looking state
    let s = BranchState { t: 14.0, x: 400_000, l: 1_200_000.0, a: 1_150_000.0, lambda: 1.0 };
    let t0 = std::time::Instant::now();
    let mut acc2 = 0.0f64;
    let mut e = 0.3f64;
    for _ in 0..n {
        e = 0.3 + 0.7 * (e - e.floor()); // cheap varying e in (0.3, 1)
        acc2 += next_birth_delta(&s, e);
    }
    let d_newton = t0.elapsed().as_secs_f64() / n as f64 * 1e9;
    println!("exp1 draw: {d_exp:.1} ns   newton: {d_newton:.1} ns   (sink {acc:.1} {acc2:.1})");
}
