//! Poisson base-station topologies, beam sectors and nearest-distance sampling.

use std::f64::consts::{PI, TAU};
use std::io::{BufRead, Write};

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// BS positions in metres around the typical user at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub points: Vec<[f64; 2]>,
    pub window_radius: f64,
    pub lambda_bs: f64,
    /// Index and exact distance of a BS placed by conditioning; no other
    /// point is closer. The distance is kept so that rounding in the
    /// coordinates cannot move it across a path-loss breakpoint.
    pub conditioned_point: Option<(usize, f64)>,
}

/// One-based beam sector: sector `i` is the wedge `[2π(i−1)/M, 2πi/M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SectorIndex(pub u32);

impl SectorIndex {
    /// Zero-based position, handy for indexing per-sector vectors.
    pub fn slot(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl std::fmt::Display for SectorIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Angle of `p` mapped to `[0, 2π)`.
pub fn polar_angle(p: [f64; 2]) -> f64 {
    let t = p[1].atan2(p[0]);
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

pub fn norm(p: [f64; 2]) -> f64 {
    p[0].hypot(p[1])
}

pub fn sector_of(point: [f64; 2], m_beams: u32) -> Result<SectorIndex> {
    if point == [0.0, 0.0] {
        return Err(Error::domain("the origin belongs to no sector"));
    }
    if m_beams == 0 {
        return Err(Error::domain("m_beams must be >= 1"));
    }
    let m = m_beams as f64;
    let idx = (polar_angle(point) * m / TAU).floor() as u32;
    // an angle of -0.0 or one that rounds up to 2π sits in the last wedge
    Ok(SectorIndex(idx.min(m_beams - 1) + 1))
}

/// Nearest BS in each sector: `(distance, point)`, `None` for an empty sector.
pub fn nearest_per_sector(topology: &Topology, m_beams: u32) -> Vec<Option<(f64, [f64; 2])>> {
    let mut best: Vec<Option<(f64, [f64; 2])>> = vec![None; m_beams as usize];
    for &p in &topology.points {
        let Ok(s) = sector_of(p, m_beams) else {
            continue;
        };
        let d = norm(p);
        let slot = &mut best[s.slot()];
        if slot.is_none_or(|(bd, _)| d < bd) {
            *slot = Some((d, p));
        }
    }
    best
}

/// Radius of the smallest disk holding every sector's nearest BS with
/// probability at least `1 − 10⁻⁶`.
pub fn default_window_radius(lambda_bs: f64, m_beams: u32) -> f64 {
    let m = m_beams as f64;
    (m * (1e6 * m).ln() / (lambda_bs * PI)).sqrt()
}

pub fn sample_ppp_disk<R: Rng + ?Sized>(
    lambda_bs: f64,
    window_radius: f64,
    rng: &mut R,
) -> Topology {
    let points = sample_annulus_points(lambda_bs, 0.0, window_radius, rng);
    Topology {
        points,
        window_radius,
        lambda_bs,
        conditioned_point: None,
    }
}

/// One BS at distance `r0` with a uniform angle, plus a PPP on `r0 < |x| <= window_radius`.
pub fn sample_conditioned_on_nearest<R: Rng + ?Sized>(
    lambda_bs: f64,
    r0: f64,
    window_radius: f64,
    rng: &mut R,
) -> Result<Topology> {
    if !(r0 >= 0.0 && r0 < window_radius) {
        return Err(Error::config(
            "window_radius",
            format!("conditioning distance {r0} m must lie inside the window of {window_radius} m"),
        ));
    }
    let theta = rng.random::<f64>() * TAU;
    let mut points = vec![[r0 * theta.cos(), r0 * theta.sin()]];
    points.extend(sample_annulus_points(lambda_bs, r0, window_radius, rng));
    Ok(Topology {
        points,
        window_radius,
        lambda_bs,
        conditioned_point: Some((0, r0)),
    })
}

fn sample_annulus_points<R: Rng + ?Sized>(
    lambda_bs: f64,
    r_in: f64,
    r_out: f64,
    rng: &mut R,
) -> Vec<[f64; 2]> {
    let area = PI * (r_out * r_out - r_in * r_in);
    let mean = lambda_bs * area;
    let n = if mean > 0.0 {
        Poisson::new(mean)
            .map(|d| d.sample(rng) as usize)
            .unwrap_or(0)
    } else {
        0
    };
    let (a2, b2) = (r_in * r_in, r_out * r_out);
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            let r = (a2 + u * (b2 - a2)).sqrt();
            // keep the annulus open at r_in
            let r = if r <= r_in { r_in.next_up() } else { r };
            let t = rng.random::<f64>() * TAU;
            [r * t.cos(), r * t.sin()]
        })
        .collect()
}

/// Inverse-CDF draw with CCDF `exp(−λπr²/M)`.
pub fn sample_nearest_in_sector_distance<R: Rng + ?Sized>(
    lambda_bs: f64,
    m_beams: u32,
    rng: &mut R,
) -> f64 {
    // 1 - U lies in (0, 1], so the log is finite
    let u = 1.0 - rng.random::<f64>();
    (-(m_beams as f64) * u.ln() / (lambda_bs * PI)).sqrt()
}

pub fn sample_r0<R: Rng + ?Sized>(lambda_bs: f64, rng: &mut R) -> f64 {
    sample_nearest_in_sector_distance(lambda_bs, 1, rng)
}

pub fn nearest_in_sector_ccdf(lambda_bs: f64, m_beams: u32, r: f64) -> f64 {
    (-lambda_bs * PI * r * r / m_beams as f64).exp()
}

impl Topology {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Distance of point `i` from the origin.
    pub fn distance(&self, i: usize) -> f64 {
        match self.conditioned_point {
            Some((c, r)) if c == i => r,
            _ => norm(self.points[i]),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// A topology holding exactly the given points.
    pub fn from_points(points: Vec<[f64; 2]>, lambda_bs: f64) -> Self {
        let window_radius = points.iter().map(|&p| norm(p)).fold(0.0, f64::max).max(1.0);
        Topology {
            points,
            window_radius,
            lambda_bs,
            conditioned_point: None,
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x_m,y_m")?;
        for p in &self.points {
            writeln!(w, "{:e},{:e}", p[0], p[1])?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R, lambda_bs: f64) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("x_m") {
                continue;
            }
            let mut it = line.split(',').map(str::trim);
            let parse = |s: Option<&str>| -> Result<f64> {
                s.and_then(|s| s.parse::<f64>().ok())
                    .ok_or_else(|| Error::Parse(format!("line {}: expected `x_m,y_m`", lineno + 1)))
            };
            let x = parse(it.next())?;
            let y = parse(it.next())?;
            points.push([x, y]);
        }
        Ok(Topology::from_points(points, lambda_bs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::*;

    #[test]
    fn sector_examples() {
        assert_eq!(sector_of([1.0, 1.0], 4).unwrap(), SectorIndex(1));
        assert_eq!(sector_of([-1.0, 0.0], 4).unwrap(), SectorIndex(3));
        assert_eq!(sector_of([0.0, 1.0], 4).unwrap(), SectorIndex(2));
        assert_eq!(sector_of([1.0, 0.0], 4).unwrap(), SectorIndex(1));
        assert_eq!(sector_of([1.0, -1e-300], 4).unwrap(), SectorIndex(4));
        assert!(sector_of([0.0, 0.0], 4).is_err());
    }

    #[test]
    fn sectors_partition_the_angle_grid() {
        for m in [1u32, 2, 3, 4, 8, 12, 36] {
            for i in 0..10_000 {
                let t = TAU * i as f64 / 10_000.0;
                let p = [t.cos(), t.sin()];
                let s = sector_of(p, m).unwrap();
                assert!(s.0 >= 1 && s.0 <= m);
                let a = polar_angle(p);
                let lo = TAU * (s.0 - 1) as f64 / m as f64;
                let hi = TAU * s.0 as f64 / m as f64;
                assert!(
                    a >= lo - 1e-12 && a < hi + 1e-12,
                    "m={m} angle={a} sector={s}"
                );
            }
        }
    }

    #[test]
    fn nearest_examples() {
        let t = Topology::from_points(vec![[3.0, 0.0]], 1e-4);
        let n = nearest_per_sector(&t, 1);
        assert_eq!(n[0], Some((3.0, [3.0, 0.0])));
        let t = Topology::from_points(vec![[2.0, 0.1], [1.0, 0.1]], 1e-4);
        let n = nearest_per_sector(&t, 4);
        assert_eq!(n[0].unwrap().1, [1.0, 0.1]);
        assert!(n[1].is_none() && n[2].is_none() && n[3].is_none());
    }

    #[test]
    fn seeded_topologies_repeat() {
        let a = sample_ppp_disk(1e-4, 500.0, &mut stream(11, 0));
        let b = sample_ppp_disk(1e-4, 500.0, &mut stream(11, 0));
        assert_eq!(a, b);
        assert!(a.points.iter().all(|&p| norm(p) <= 500.0));
    }

    #[test]
    fn conditioned_point_is_nearest() {
        let t = sample_conditioned_on_nearest(1e-4, 40.0, 600.0, &mut stream(3, 9)).unwrap();
        assert_eq!(t.conditioned_point.map(|c| c.0), Some(0));
        assert!((norm(t.points[0]) - 40.0).abs() < 1e-9);
        assert!(t
            .points
            .iter()
            .skip(1)
            .all(|&p| norm(p) > 40.0 && norm(p) <= 600.0 + 1e-9));
        assert!(sample_conditioned_on_nearest(1e-4, 700.0, 600.0, &mut stream(3, 9)).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let t = sample_ppp_disk(1e-4, 300.0, &mut stream(5, 1));
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = Topology::read_csv(buf.as_slice(), 1e-4).unwrap();
        assert_eq!(back.points, t.points);
    }

    #[test]
    fn default_window_covers_every_sector() {
        // P(some sector's nearest BS is outside) <= M exp(-λπR²/M) = 1e-6
        for m in [1u32, 4, 12, 36] {
            let r = default_window_radius(1e-4, m);
            let miss = m as f64 * nearest_in_sector_ccdf(1e-4, m, r);
            assert!((miss - 1e-6).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn exactly_one_sector(x in -1e3f64..1e3, y in -1e3f64..1e3, m in 1u32..64) {
            prop_assume!(x != 0.0 || y != 0.0);
            let s = sector_of([x, y], m).unwrap();
            prop_assert!(s.0 >= 1 && s.0 <= m);
        }

        #[test]
        fn nearest_matches_brute_force(seed in 0u64..1000, m in 1u32..13) {
            let t = sample_ppp_disk(2e-4, 200.0, &mut stream(seed, 0));
            let got = nearest_per_sector(&t, m);
            for (slot, g) in got.iter().enumerate() {
                let brute = t.points.iter()
                    .filter(|&&p| sector_of(p, m).unwrap().slot() == slot)
                    .map(|&p| norm(p))
                    .fold(f64::INFINITY, f64::min);
                match g {
                    Some((d, _)) => prop_assert_eq!(*d, brute),
                    None => prop_assert!(brute.is_infinite()),
                }
            }
        }
    }
}
