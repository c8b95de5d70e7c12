//! Convex potentials `V` for the measure `e^{−V}dx`.

use std::path::Path;

use crate::error::{LineError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// `x²/2`.
    Gaussian,
    /// `x²/2 + c x⁴`.
    Quartic { c: f64 },
    /// Double well `(x²−1)²` with its curvature floored at `floor`:
    /// `V″ = max(12x² − 4, floor)`, `V(0) = 0`, `V′(0) = 0`.
    DoubleWellCapped { floor: f64 },
    /// Tabulated `(x, V, V′, V″)`, interpolated by cubic Hermite pieces.
    Table(PotentialTable),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialTable {
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub dv: Vec<f64>,
    pub d2v: Vec<f64>,
}

impl PotentialTable {
    pub fn new(x: Vec<f64>, v: Vec<f64>, dv: Vec<f64>, d2v: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || v.len() != n || dv.len() != n || d2v.len() != n {
            return Err(LineError::Table("need at least two rows of (x, V, V′, V″)".into()));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(LineError::Table("x must be strictly increasing".into()));
        }
        if x.iter().chain(&v).chain(&dv).chain(&d2v).any(|z| !z.is_finite()) {
            return Err(LineError::Table("non-finite entry".into()));
        }
        Ok(Self { x, v, dv, d2v })
    }

    /// Reads a headed CSV with columns `x,V,dV,d2V`.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut rdr = csv::Reader::from_path(path).map_err(|e| LineError::Table(e.to_string()))?;
        let (mut x, mut v, mut dv, mut d2v) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        for rec in rdr.records() {
            let rec = rec.map_err(|e| LineError::Table(e.to_string()))?;
            if rec.len() != 4 {
                return Err(LineError::Table(format!("expected 4 columns, got {}", rec.len())));
            }
            let num = |i: usize| -> Result<f64> {
                rec[i]
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| LineError::Table(format!("bad number {:?}: {e}", &rec[i])))
            };
            x.push(num(0)?);
            v.push(num(1)?);
            dv.push(num(2)?);
            d2v.push(num(3)?);
        }
        Self::new(x, v, dv, d2v)
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let last = self.x.len() - 2;
        let i = match self.x.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(i) => i.min(last),
            Err(i) => i.saturating_sub(1).min(last),
        };
        let h = self.x[i + 1] - self.x[i];
        (i, ((x - self.x[i]) / h).clamp(0.0, 1.0))
    }

    /// Cubic Hermite interpolation of `(f, f′)` and its derivative.
    fn hermite(&self, f: &[f64], df: &[f64], x: f64) -> (f64, f64) {
        let (i, s) = self.locate(x);
        let h = self.x[i + 1] - self.x[i];
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let val = h00 * f[i] + h10 * h * df[i] + h01 * f[i + 1] + h11 * h * df[i + 1];
        let d00 = 6.0 * s2 - 6.0 * s;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = -6.0 * s2 + 6.0 * s;
        let d11 = 3.0 * s2 - 2.0 * s;
        let der = (d00 * f[i] + d01 * f[i + 1]) / h + d10 * df[i] + d11 * df[i + 1];
        (val, der)
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().expect("non-empty table"))
    }
}

impl Potential {
    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "gaussian" => Ok(Self::Gaussian),
            "quartic" | "quartic-perturbed" => Ok(Self::Quartic { c: 0.1 }),
            "double-well-capped" => Ok(Self::DoubleWellCapped { floor: 1.0 }),
            other => Err(LineError::Parameter(format!("unknown potential {other:?}"))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Gaussian => "gaussian".into(),
            Self::Quartic { c } => format!("quartic(c={c})"),
            Self::DoubleWellCapped { floor } => format!("double-well-capped(floor={floor})"),
            Self::Table(_) => "table".into(),
        }
    }

    /// Suggested truncation interval.
    pub fn default_domain(&self) -> (f64, f64) {
        match self {
            Self::Gaussian => (-8.0, 8.0),
            Self::Quartic { .. } => (-6.0, 6.0),
            Self::DoubleWellCapped { .. } => (-4.0, 4.0),
            Self::Table(t) => t.domain(),
        }
    }

    fn dw_cut(floor: f64) -> f64 {
        ((floor + 4.0) / 12.0).sqrt()
    }

    pub fn v(&self, x: f64) -> f64 {
        match self {
            Self::Gaussian => 0.5 * x * x,
            Self::Quartic { c } => 0.5 * x * x + c * x.powi(4),
            Self::DoubleWellCapped { floor } => {
                let xc = Self::dw_cut(*floor);
                let a = x.abs();
                if a <= xc {
                    0.5 * floor * a * a
                } else {
                    // V = V(xc) + V′(xc)(a−xc) + [W(a) − W(xc) − W′(xc)(a−xc)], W = (a²−1)².
                    let w = |y: f64| (y * y - 1.0).powi(2);
                    let dw = |y: f64| 4.0 * y * (y * y - 1.0);
                    0.5 * floor * xc * xc + floor * xc * (a - xc) + w(a) - w(xc) - dw(xc) * (a - xc)
                }
            }
            Self::Table(t) => t.hermite(&t.v, &t.dv, x).0,
        }
    }

    pub fn dv(&self, x: f64) -> f64 {
        match self {
            Self::Gaussian => x,
            Self::Quartic { c } => x + 4.0 * c * x.powi(3),
            Self::DoubleWellCapped { floor } => {
                let xc = Self::dw_cut(*floor);
                let a = x.abs();
                let d = if a <= xc {
                    floor * a
                } else {
                    let dw = |y: f64| 4.0 * y * (y * y - 1.0);
                    floor * xc + dw(a) - dw(xc)
                };
                d.copysign(x)
            }
            Self::Table(t) => t.hermite(&t.dv, &t.d2v, x).0,
        }
    }

    pub fn d2v(&self, x: f64) -> f64 {
        match self {
            Self::Gaussian => 1.0,
            Self::Quartic { c } => 1.0 + 12.0 * c * x * x,
            Self::DoubleWellCapped { floor } => (12.0 * x * x - 4.0).max(*floor),
            Self::Table(t) => t.hermite(&t.dv, &t.d2v, x).1,
        }
    }
}
