// Samples a PPP of base stations and checks the nearest-in-sector distance
// against its Rayleigh law.

use cellsearch::geometry::{nearest_in_sector_ccdf, nearest_per_sector, sample_ppp_disk};
use cellsearch::rng::stream;

pub fn run_example() -> cellsearch::Result<()> {
    let (lambda, m, radius) = (1e-4, 8u32, 2_000.0);
    let probe = 60.0;
    let mut rng = stream(7, 0);
    let (mut sectors, mut beyond) = (0usize, 0usize);
    for _ in 0..400 {
        let topo = sample_ppp_disk(lambda, radius, &mut rng);
        for near in nearest_per_sector(&topo, m) {
            sectors += 1;
            if near.is_none_or(|(d, _)| d > probe) {
                beyond += 1;
            }
        }
    }
    let empirical = beyond as f64 / sectors as f64;
    let exact = nearest_in_sector_ccdf(lambda, m, probe);
    println!("P(nearest in sector > {probe} m): empirical {empirical:.4}, exact {exact:.4}");
    assert!((empirical - exact).abs() < 0.03);
    Ok(())
}

fn main() -> cellsearch::Result<()> {
    run_example()
}
