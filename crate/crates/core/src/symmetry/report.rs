use std::fmt::Write;

/// Outcome of one sample of a symmetry check.
#[derive(Debug, Clone, PartialEq)]
pub enum RowStatus {
    Pass,
    Fail,
    /// The sample could not be evaluated (e.g. a singular Jacobian).
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub index: usize,
    pub coords: Vec<f64>,
    pub residual: f64,
    pub status: RowStatus,
}

/// Per-sample results of a symmetry check, in sample order.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub rows: Vec<SampleRow>,
    pub tol: f64,
}

impl SymmetryReport {
    pub(crate) fn from_residuals(rows: Vec<(Vec<f64>, Result<f64, String>)>, tol: f64) -> SymmetryReport {
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(index, (coords, r))| match r {
                Ok(residual) => SampleRow {
                    index,
                    coords,
                    residual,
                    status: if residual <= tol { RowStatus::Pass } else { RowStatus::Fail },
                },
                Err(reason) => SampleRow { index, coords, residual: f64::NAN, status: RowStatus::Skipped(reason) },
            })
            .collect();
        SymmetryReport { rows, tol }
    }

    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.status == RowStatus::Pass).count()
    }

    pub fn skipped(&self) -> usize {
        self.rows.iter().filter(|r| matches!(r.status, RowStatus::Skipped(_))).count()
    }

    /// Number of evaluated samples.
    pub fn evaluated(&self) -> usize {
        self.rows.len() - self.skipped()
    }

    /// Largest residual over evaluated samples.
    pub fn worst(&self) -> f64 {
        self.rows
            .iter()
            .filter(|r| !matches!(r.status, RowStatus::Skipped(_)))
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }

    /// True iff at least one sample was evaluated and all evaluated ones pass.
    pub fn holds(&self) -> bool {
        self.evaluated() > 0 && self.passed() == self.evaluated()
    }

    /// `PASS k/N tol=<t>` (or `FAIL …`), `N` counting evaluated samples.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "{} {}/{} tol={:e}",
            if self.holds() { "PASS" } else { "FAIL" },
            self.passed(),
            self.evaluated(),
            self.tol
        );
        if self.skipped() > 0 {
            let _ = write!(s, " skipped={}", self.skipped());
        }
        s
    }

    /// CSV with one row per sample: coordinates, residual, status.
    pub fn to_csv(&self, coord_names: &[String]) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["index".to_string()];
        header.extend(coord_names.iter().cloned());
        header.extend(["residual".to_string(), "status".to_string()]);
        w.write_record(&header).expect("in-memory write");
        for row in &self.rows {
            let mut rec = vec![row.index.to_string()];
            rec.extend(row.coords.iter().map(|v| format!("{v:e}")));
            rec.push(format!("{:e}", row.residual));
            rec.push(match &row.status {
                RowStatus::Pass => "pass".to_string(),
                RowStatus::Fail => "fail".to_string(),
                RowStatus::Skipped(reason) => format!("skipped: {reason}"),
            });
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}
