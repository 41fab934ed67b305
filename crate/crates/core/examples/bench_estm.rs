// quick calibration: time estimate_m at t=15 for a few replicates
fn main() {
    let start = std::time::Instant::now();
    let ms = gossip_core::branching::estimate_m(1.0, 15.0, 40, 12345).unwrap();
    let dt = start.elapsed().as_secs_f64();
    let mean: f64 = ms.iter().sum::<f64>() / ms.len() as f64;
    println!("40 reps in {dt:.2}s -> {:.1}s for 20000 reps, mean M = {mean:.4}", dt / 40.0 * 20000.0);
}
