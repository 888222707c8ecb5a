//! Werner-family sweeps and their CSV and gnuplot renderings.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::measures::{
    brukner_zeilinger, critical_alpha, luo_uncertainty, q_alpha, q_star, von_neumann, Alpha, CriticalAlpha,
    DEFAULT_ROOT_TOL,
};
use crate::states::werner;
use crate::{Error, Result};

pub const DEGENERATE: &str = "degenerate";

/// `(λ, α, Q_α)`.
pub type SurfacePoint = (f64, f64, f64);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanGrid {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_steps: usize,
    pub alpha_min: f64,
    pub alpha_max: f64,
    pub alpha_steps: usize,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self {
            lambda_min: 0.25,
            lambda_max: 1.0,
            lambda_steps: 51,
            alpha_min: 0.01,
            alpha_max: 0.99,
            alpha_steps: 99,
        }
    }
}

/// `steps` points from `lo` to `hi`, both included; the last is exactly `hi`.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|k| if k + 1 == steps { hi } else { lo + (hi - lo) * k as f64 / (steps - 1) as f64 })
        .collect()
}

impl ScanGrid {
    pub fn validate(&self) -> Result<()> {
        if self.lambda_steps < 2 || self.alpha_steps < 2 {
            return Err(Error::Format("grid resolutions must be at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.lambda_min) || !(0.0..=1.0).contains(&self.lambda_max) || self.lambda_min >= self.lambda_max {
            return Err(Error::WernerOutOfRange(self.lambda_min));
        }
        Alpha::new(self.alpha_min)?;
        Alpha::new(self.alpha_max)?;
        if self.alpha_min >= self.alpha_max {
            return Err(Error::AlphaOutOfRange(self.alpha_min));
        }
        Ok(())
    }

    pub fn lambdas(&self) -> Vec<f64> {
        linspace(self.lambda_min, self.lambda_max, self.lambda_steps)
    }

    pub fn alphas(&self) -> Vec<f64> {
        linspace(self.alpha_min, self.alpha_max, self.alpha_steps)
    }
}

/// α-independent quantities at one `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub lambda: f64,
    pub i_bz: f64,
    pub q_half: f64,
    pub q_third: f64,
    pub q_star: f64,
    pub luo: f64,
    pub entropy: f64,
    pub alpha_c: CriticalAlpha,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WernerScan {
    pub grid: ScanGrid,
    pub rows: Vec<ScanRow>,
    /// λ-major order.
    pub surface: Vec<SurfacePoint>,
}

pub fn werner_scan(grid: &ScanGrid) -> Result<WernerScan> {
    grid.validate()?;
    let alphas = grid.alphas();
    let per_lambda: Vec<(ScanRow, Vec<SurfacePoint>)> = grid
        .lambdas()
        .into_par_iter()
        .map(|lambda| {
            let rho = werner(lambda)?;
            let row = ScanRow {
                lambda,
                i_bz: brukner_zeilinger(&rho),
                q_half: q_alpha(&rho, Alpha::HALF),
                q_third: q_alpha(&rho, Alpha::new(1.0 / 3.0)?),
                q_star: q_star(&rho),
                luo: luo_uncertainty(&rho),
                entropy: von_neumann(&rho),
                alpha_c: critical_alpha(&rho, DEFAULT_ROOT_TOL)?,
            };
            let cells = alphas
                .iter()
                .map(|&a| Ok((lambda, a, q_alpha(&rho, Alpha::new(a)?))))
                .collect::<Result<Vec<_>>>()?;
            Ok((row, cells))
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(per_lambda.len());
    let mut surface = Vec::with_capacity(per_lambda.len() * alphas.len());
    for (row, cells) in per_lambda {
        rows.push(row);
        surface.extend(cells);
    }
    Ok(WernerScan { grid: *grid, rows, surface })
}

/// 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl WernerScan {
    pub fn fig1_csv(&self) -> String {
        let mut s = String::from("lambda,alpha,q_alpha\n");
        for &(l, a, q) in &self.surface {
            let _ = writeln!(s, "{},{},{}", fmt_float(l), fmt_float(a), fmt_float(q));
        }
        s
    }

    /// Curves normalised by `n - 1 = 3`, so the pure state sits at one.
    pub fn fig2_csv(&self) -> String {
        let mut s = String::from("lambda,i_bz,q_half_norm,q_third_norm,q_star_norm\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                fmt_float(r.lambda),
                fmt_float(r.i_bz),
                fmt_float(r.q_half / 3.0),
                fmt_float(r.q_third / 3.0),
                fmt_float(r.q_star / 3.0)
            );
        }
        s
    }

    pub fn fig3_csv(&self) -> String {
        let mut s = String::from("lambda,alpha_c\n");
        for r in &self.rows {
            let ac = match r.alpha_c {
                CriticalAlpha::Root(a) => fmt_float(a),
                CriticalAlpha::Degenerate => DEGENERATE.to_string(),
            };
            let _ = writeln!(s, "{},{}", fmt_float(r.lambda), ac);
        }
        s
    }

    pub fn fig1_gnuplot(&self) -> String {
        format!(
            "set datafile separator ','\n\
             set key off\n\
             set xlabel 'alpha'\n\
             set ylabel 'lambda'\n\
             set zlabel 'Q_alpha'\n\
             set xrange [0:1]\n\
             set yrange [{lo}:{hi}]\n\
             set zrange [0:3]\n\
             set dgrid3d {ny},{nx}\n\
             set pm3d\n\
             splot 'fig1.csv' every ::1 using 2:1:3 with pm3d\n",
            lo = self.grid.lambda_min,
            hi = self.grid.lambda_max,
            ny = self.grid.lambda_steps,
            nx = self.grid.alpha_steps,
        )
    }

    pub fn fig2_gnuplot(&self) -> String {
        format!(
            "set datafile separator ','\n\
             set key top left\n\
             set xlabel 'lambda'\n\
             set ylabel 'normalized measure'\n\
             set xrange [{lo}:{hi}]\n\
             set yrange [0:1]\n\
             plot 'fig2.csv' every ::1 using 1:2 with lines title '(a) I_BZ', \\\n\
             \x20    '' every ::1 using 1:3 with lines title '(b) Q_1/2', \\\n\
             \x20    '' every ::1 using 1:4 with lines title '(c) Q_1/3', \\\n\
             \x20    '' every ::1 using 1:5 with lines title '(d) Q*'\n",
            lo = self.grid.lambda_min,
            hi = self.grid.lambda_max,
        )
    }

    /// Rows marked `degenerate` are not numbers and gnuplot skips them.
    pub fn fig3_gnuplot(&self) -> String {
        format!(
            "set datafile separator ','\n\
             set key off\n\
             set xlabel 'lambda'\n\
             set ylabel 'alpha_c'\n\
             set xrange [{lo}:{hi}]\n\
             set yrange [0:0.5]\n\
             plot 'fig3.csv' every ::1 using 1:2 with linespoints\n",
            lo = self.grid.lambda_min,
            hi = self.grid.lambda_max,
        )
    }

    /// `(file name, contents)` for every output of the scan.
    pub fn files(&self) -> Vec<(&'static str, String)> {
        vec![
            ("fig1.csv", self.fig1_csv()),
            ("fig2.csv", self.fig2_csv()),
            ("fig3.csv", self.fig3_csv()),
            ("fig1.gp", self.fig1_gnuplot()),
            ("fig2.gp", self.fig2_gnuplot()),
            ("fig3.gp", self.fig3_gnuplot()),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> WernerScan {
        werner_scan(&ScanGrid { lambda_steps: 7, alpha_steps: 5, ..Default::default() }).unwrap()
    }

    #[test]
    fn linspace_hits_both_ends() {
        let v = linspace(0.25, 1.0, 51);
        assert_eq!(v[0], 0.25);
        assert_eq!(v[50], 1.0);
        assert!((v[25] - 0.625).abs() < 1e-15);
    }

    #[test]
    fn rejects_coarse_or_bad_grids() {
        assert!(ScanGrid { lambda_steps: 1, ..Default::default() }.validate().is_err());
        assert!(ScanGrid { alpha_min: 0.0, ..Default::default() }.validate().is_err());
        assert!(ScanGrid { lambda_max: 1.5, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn endpoints() {
        let s = small();
        let first = s.rows.first().unwrap();
        let last = s.rows.last().unwrap();
        assert_eq!(first.alpha_c, CriticalAlpha::Degenerate);
        assert_eq!(last.alpha_c, CriticalAlpha::Degenerate);
        for v in [first.i_bz, first.q_half, first.q_third, first.q_star] {
            assert!(v.abs() <= 1e-10);
        }
        for v in [last.i_bz, last.q_half / 3.0, last.q_third / 3.0, last.q_star / 3.0] {
            assert!((v - 1.0).abs() <= 1e-10);
        }
        for r in &s.rows[1..6] {
            let a = r.alpha_c.root().unwrap();
            assert!(a > 0.0 && a < 0.5);
        }
    }

    #[test]
    fn csv_shape() {
        let s = small();
        let f1 = s.fig1_csv();
        assert_eq!(f1.lines().count(), 1 + 7 * 5);
        assert!(!f1.contains('\r'));
        let f3 = s.fig3_csv();
        let lines: Vec<_> = f3.lines().collect();
        assert_eq!(lines[0], "lambda,alpha_c");
        assert_eq!(lines[1], "2.5000000000000000e-1,degenerate");
        assert!(lines[7].ends_with(",degenerate"));
        let parsed: f64 = lines[4].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(fmt_float(parsed), lines[4].split(',').nth(1).unwrap());
    }

    #[test]
    fn deterministic() {
        assert_eq!(small().files(), small().files());
    }
}
