//! Deficits of zonal sets and their distance to the nearest cap.

use std::f64::consts::PI;

use profiles::{iso_gauss, SphereGeometry};
use sphere_engine::BandSet;

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pole {
    North,
    South,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeficitRecord {
    pub geom: SphereGeometry,
    pub set: BandSet,
    pub v: f64,
    /// Minkowski content.
    pub boundary: f64,
    /// `boundary − I_γ(v)`.
    pub delta_gauss: f64,
    /// `boundary − I_S(v)`.
    pub delta_sphere: f64,
    pub nearest_cap: BandSet,
    pub nearest_pole: Pole,
    /// `μ(A Δ H)`.
    pub sym_diff: f64,
}

/// `μ(A Δ B)` for zonal sets on the same sphere.
pub fn sym_diff(a: &BandSet, b: &BandSet) -> f64 {
    let mut cuts: Vec<f64> = vec![0.0, PI];
    cuts.extend(&a.breakpoints);
    cuts.extend(&b.breakpoints);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .filter(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            a.contains(mid) != b.contains(mid)
        })
        .map(|w| a.geom.band_volume(w[0], w[1]))
        .sum()
}

pub fn deficit_measure(set: &BandSet) -> Result<DeficitRecord> {
    let geom = set.geom;
    let v = set.volume().clamp(0.0, 1.0);
    let boundary = set.boundary();
    let north = BandSet::cap_of_volume(geom, v)?;
    let south = north.reflected();
    let (dn, ds) = (sym_diff(set, &north), sym_diff(set, &south));
    let (nearest_cap, nearest_pole, sym) = if dn <= ds {
        (north, Pole::North, dn)
    } else {
        (south, Pole::South, ds)
    };
    Ok(DeficitRecord {
        geom,
        set: set.clone(),
        v,
        boundary,
        delta_gauss: boundary - iso_gauss(v),
        delta_sphere: boundary - geom.iso_sphere(v)?,
        nearest_cap,
        nearest_pole,
        sym_diff: sym,
    })
}
