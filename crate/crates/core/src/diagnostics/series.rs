//! Diagnostic rows and the CSV files that carry them.

use std::fmt::Write as _;

use serde::Serialize;

use super::{rate_fit, DiagError, RateError, RateFit};

/// First line of every diagnostics file.
pub const DIAG_SCHEMA: &str = "# bqc diagnostics v1";

/// One output time of a simulation. Weighted quantities are `NaN` when the
/// weights are undefined (`β <= 1/2`, or `E_v` at `t = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct DiagRow {
    pub t: f64,
    pub l2_omega_neq: f64,
    pub l2_gradtheta_neq: f64,
    pub l2_ux_neq: f64,
    pub l2_uy_neq: f64,
    pub l2_theta_neq: f64,
    pub e_l: f64,
    pub e_n: f64,
    pub e_v: f64,
    pub g_lambda_z: f64,
    pub g_w_z: f64,
    pub g_m_z: f64,
    pub l2_omega: f64,
    pub l2_theta: f64,
    /// `½‖u‖² + ½β²‖θ‖²`
    pub energy: f64,
    /// `∫ u^x u^y`
    pub flux: f64,
    /// RK4 quadrature of `∫₀ᵗ ∫ u^x u^y`
    pub flux_integral: f64,
    /// `energy(t) − energy(0) + flux_integral(t)`, zero for exact dynamics.
    pub energy_residual: f64,
    /// `‖v̇‖_{G^{λ(t), σ−6}}`
    pub vdot_gevrey: f64,
    /// Largest `|ω|` next to the seam `|v| = L_v/2` over the largest `|ω|`.
    pub wrap_ratio: f64,
}

impl DiagRow {
    pub const COLUMNS: [&'static str; 20] = [
        "t",
        "l2_omega_neq",
        "l2_gradtheta_neq",
        "l2_ux_neq",
        "l2_uy_neq",
        "l2_theta_neq",
        "E_L",
        "E_n",
        "E_v",
        "G_lambda_Z",
        "G_w_Z",
        "G_m_Z",
        "l2_omega",
        "l2_theta",
        "energy",
        "flux",
        "flux_integral",
        "energy_residual",
        "vdot_gevrey",
        "wrap_ratio",
    ];

    pub fn values(&self) -> [f64; 20] {
        [
            self.t,
            self.l2_omega_neq,
            self.l2_gradtheta_neq,
            self.l2_ux_neq,
            self.l2_uy_neq,
            self.l2_theta_neq,
            self.e_l,
            self.e_n,
            self.e_v,
            self.g_lambda_z,
            self.g_w_z,
            self.g_m_z,
            self.l2_omega,
            self.l2_theta,
            self.energy,
            self.flux,
            self.flux_integral,
            self.energy_residual,
            self.vdot_gevrey,
            self.wrap_ratio,
        ]
    }
}

/// CSV text: schema line, header, one line per row. Numbers use the
/// shortest representation that parses back to the same `f64`.
/// Shortest round-trip text of `x`; scientific outside `[1e-4, 1e15)`.
pub fn csv_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

pub fn diag_csv(rows: &[DiagRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{DIAG_SCHEMA}");
    let _ = writeln!(s, "{}", DiagRow::COLUMNS.join(","));
    for r in rows {
        let line: Vec<String> = r.values().iter().map(|&v| csv_f64(v)).collect();
        let _ = writeln!(s, "{}", line.join(","));
    }
    s
}

/// Named columns keyed by a leading `t` column, read from any CSV this
/// crate writes. Lines starting with `#` are skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSeries {
    pub t: Vec<f64>,
    pub names: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl NormSeries {
    pub fn from_csv(text: &str) -> Result<Self, DiagError> {
        let mut header: Option<Vec<String>> = None;
        let mut t = Vec::new();
        let mut columns: Vec<Vec<f64>> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let Some(h) = &header else {
                if fields.first() != Some(&"t") {
                    return Err(DiagError::Parse {
                        line: line_no,
                        msg: "first column must be named t".into(),
                    });
                }
                columns = vec![Vec::new(); fields.len() - 1];
                header = Some(fields.iter().map(|s| s.to_string()).collect());
                continue;
            };
            if fields.len() != h.len() {
                return Err(DiagError::Parse {
                    line: line_no,
                    msg: format!("{} fields, header has {}", fields.len(), h.len()),
                });
            }
            let mut vals = Vec::with_capacity(fields.len());
            for f in &fields {
                vals.push(f.parse::<f64>().map_err(|_| DiagError::Parse {
                    line: line_no,
                    msg: format!("not a number: '{f}'"),
                })?);
            }
            t.push(vals[0]);
            for (c, v) in columns.iter_mut().zip(&vals[1..]) {
                c.push(*v);
            }
        }
        let Some(h) = header else {
            return Err(DiagError::Parse {
                line: 0,
                msg: "no header line".into(),
            });
        };
        Ok(Self {
            t,
            names: h[1..].to_vec(),
            columns,
        })
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    /// Rate fit of one column on `window`.
    pub fn fit(&self, name: &str, window: (f64, f64)) -> Result<RateFit, DiagError> {
        let col = self
            .column(name)
            .ok_or_else(|| DiagError::Precondition(format!("no column named {name}")))?;
        Ok(rate_fit(&self.t, col, window)?)
    }
}

impl From<RateError> for DiagError {
    fn from(e: RateError) -> Self {
        DiagError::Rate(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_values_round_trip() {
        for x in [0.0, -0.0, 1.5, 1e-300, -7.25e200, 0.1 + 0.2, 1e15, 9.99e-5, f64::MIN_POSITIVE] {
            let s = csv_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(csv_f64(2.5e20), "2.5e20");
        assert_eq!(csv_f64(f64::NAN), "NaN");
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let rows: Vec<DiagRow> = (0..12)
            .map(|i| {
                let t = 1.0 + i as f64 * 0.1;
                DiagRow {
                    t,
                    l2_omega_neq: t.sqrt() / 3.0,
                    e_v: f64::NAN,
                    ..Default::default()
                }
            })
            .collect();
        let text = diag_csv(&rows);
        assert!(text.starts_with(DIAG_SCHEMA));
        let s = NormSeries::from_csv(&text).unwrap();
        assert_eq!(s.names.len(), 19);
        for (r, (&t, &w)) in rows.iter().zip(s.t.iter().zip(s.column("l2_omega_neq").unwrap())) {
            assert_eq!(t, r.t);
            assert_eq!(w, r.l2_omega_neq);
        }
        assert!(s.column("E_v").unwrap()[0].is_nan());
        let f = s.fit("l2_omega_neq", (1.0, 3.0)).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-10);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let e = NormSeries::from_csv("# x\nt,a\n1,2\n2,oops\n").unwrap_err();
        assert_eq!(
            e,
            DiagError::Parse {
                line: 4,
                msg: "not a number: 'oops'".into()
            }
        );
        assert!(NormSeries::from_csv("a,t\n").is_err());
        assert!(NormSeries::from_csv("t,a\n1,2,3\n").is_err());
    }
}
