//! Zonal perturbations of a cap with prescribed volume.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use profiles::SphereGeometry;
use sphere_engine::BandSet;

use crate::error::{DeficitError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Cap of volume `v−s` plus the antipodal cap of volume `s`.
    CapAntipodal,
    /// Cap of volume `v−s` plus a band of volume `s` centred (in volume)
    /// halfway between the cap and the south pole.
    CapBand,
    /// Cap of volume `v−s` plus the band between volumes `v` and `v+s`: the
    /// boundary layer of mass `s` is pushed outwards past a gap.
    BoundaryWobble,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::CapAntipodal, Family::CapBand, Family::BoundaryWobble];

    pub fn name(self) -> &'static str {
        match self {
            Family::CapAntipodal => "cap-antipodal",
            Family::CapBand => "cap-band",
            Family::BoundaryWobble => "boundary-wobble",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = DeficitError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cap-antipodal" | "cap+antipodal-cap" => Ok(Family::CapAntipodal),
            "cap-band" | "cap+band" => Ok(Family::CapBand),
            "boundary-wobble" | "boundary-wobble-band" => Ok(Family::BoundaryWobble),
            other => Err(DeficitError::Parameter(format!("unknown family {other:?}"))),
        }
    }
}

/// Colatitude below which the cap has volume `w`.
fn colat(geom: &SphereGeometry, w: f64) -> Result<f64> {
    if w > 0.5 {
        Ok(PI - geom.cap_colatitude(1.0 - w)?)
    } else {
        Ok(geom.cap_colatitude(w)?)
    }
}

pub fn make_perturbed_set(geom: SphereGeometry, family: Family, v: f64, s: f64) -> Result<BandSet> {
    if !(v > 0.0 && v < 1.0) {
        return Err(DeficitError::Parameter(format!(
            "target volume must be in (0,1), got {v}"
        )));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(DeficitError::Parameter(format!(
            "perturbation size must be ≥ 0, got {s}"
        )));
    }
    if s == 0.0 {
        return Ok(BandSet::cap(geom, colat(&geom, v)?)?);
    }
    let infeasible = || DeficitError::Construction(format!("{family} with v = {v} cannot take s = {s}"));
    let main = colat(&geom, v - s);
    let pts = match family {
        Family::CapAntipodal => {
            if s >= v || v - s >= 1.0 - s {
                return Err(infeasible());
            }
            vec![0.0, main?, PI - geom.cap_colatitude(s)?, PI]
        }
        Family::CapBand => {
            let mid = 0.5 * (v + 1.0);
            if s >= v || mid - 0.5 * s <= v {
                return Err(infeasible());
            }
            vec![0.0, main?, colat(&geom, mid - 0.5 * s)?, colat(&geom, mid + 0.5 * s)?]
        }
        Family::BoundaryWobble => {
            if s >= v || v + s >= 1.0 {
                return Err(infeasible());
            }
            vec![0.0, main?, colat(&geom, v)?, colat(&geom, v + s)?]
        }
    };
    BandSet::new(geom, pts).map_err(|e| DeficitError::Construction(e.to_string()))
}
