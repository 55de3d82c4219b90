use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

use jetgeo::connections::{grass_invariants, thomas_pi, Connection, IndexedFamily};
use jetgeo::expr::CoordinateFrame;
use jetgeo::geodesy::{
    ddot_gamma, ddot_gamma_pro, distribution_pushforward, grass_equivalent, integrate_geodesic, param_residual2, residual2,
    GeodesicStart,
};
use jetgeo::jets::{cover1, cover2, load_jets, AffineMap, Jet, SecJet};
use jetgeo::sampling::{max_expr_difference, random_secjet, rng_for, EqualityConfig, EQUALITY_POINTS};
use jetgeo::selftest::{run_criterion, RunConfig, CRITERIA};
use jetgeo::symmetry::{
    affine_symmetry_check, field_preserves_distribution, parse_point_map, preserves_distribution, preserves_pro_distribution,
    prolong_point_field, prolong_point_map, secjet_frame, CheckConfig, JetKind, JetMapSpec, RowStatus,
    SymmetryReport, SPAN_TOL,
};
use jetgeo::Error;
use nalgebra::{DMatrix, DVector};

use crate::table::{Cell, Table};
use crate::{Format, Global, Mode};

const DEFAULT_SAMPLES: usize = 200;
const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        CliError { code: 2, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> CliError {
    CliError { code: 2, message: message.into() }
}

type CmdResult = Result<u8, CliError>;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_connection(path: &Path) -> Result<Connection, CliError> {
    Connection::from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// The parameter connection: from a spec file, or flat on `ℝⁿ`.
fn load_theta(path: Option<&Path>, n: usize) -> Result<Connection, CliError> {
    let theta = match path {
        Some(p) => load_connection(p)?,
        None => Connection::zero(CoordinateFrame::numbered("x", n, n).map_err(Error::from)?),
    };
    if theta.dim() != n {
        return Err(usage(format!("parameter connection has dimension {}, expected {n}", theta.dim())));
    }
    Ok(theta)
}

fn emit(global: &Global, text: &str) -> Result<(), CliError> {
    match &global.out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| usage(e.to_string()))
        }
    }
}

fn samples(global: &Global, default: usize) -> Result<usize, CliError> {
    match global.samples {
        Some(0) => Err(usage("--samples must be at least 1")),
        Some(s) => Ok(s),
        None => Ok(default),
    }
}

fn tol(global: &Global, default: f64) -> Result<f64, CliError> {
    match global.tol {
        Some(t) if !(t > 0.0 && t.is_finite()) => Err(usage("--tol must be positive")),
        Some(t) => Ok(t),
        None => Ok(default),
    }
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| usage(format!("{what}: `{s}`: {e}"))))
        .collect()
}

fn index_label(indices: &[usize]) -> String {
    indices.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(".")
}

/// Global 0-based coordinate indices of a family entry, given which slots
/// are Latin.
fn family_rows(table: &mut Table, name: &str, family: &IndexedFamily, latin: &[bool], n: usize) {
    let shape = family.shape();
    let mut idx = vec![0; shape.len()];
    for expr in family.entries() {
        let global: Vec<usize> = idx.iter().zip(latin).map(|(&i, &is_latin)| if is_latin { n + i } else { i }).collect();
        table.push(vec![name.into(), index_label(&global).into(), expr.to_string().into()]);
        for d in (0..shape.len()).rev() {
            idx[d] += 1;
            if idx[d] < shape[d] {
                break;
            }
            idx[d] = 0;
        }
    }
}

pub fn invariants(global: &Global, spec: &Path, n: Option<usize>, compare: Option<&Path>) -> CmdResult {
    let g = load_connection(spec)?;
    if let Some(other) = compare {
        let h = load_connection(other)?;
        if g.frame().names() != h.frame().names() {
            return Err(usage("the two specs use different coordinates"));
        }
        let tol = tol(global, DEFAULT_TOL)?;
        let cfg = EqualityConfig { points: samples(global, EQUALITY_POINTS)?, tol, seed: global.seed };
        let mut singular = g.singular_points().to_vec();
        singular.extend_from_slice(h.singular_points());
        let dev = max_expr_difference(g.frame(), &singular, &thomas_pi(&g).flat(), &thomas_pi(&h).flat(), &cfg)?;
        let same = dev <= tol;
        let mut table = Table::new(vec!["invariant".into(), "max_deviation".into(), "verdict".into()]);
        table.push(vec!["Pi".into(), dev.into(), if same { "IDENTICAL" } else { "DIFFERENT" }.into()]);
        emit(global, &table.render(global.format))?;
        return Ok(if same { 0 } else { 1 });
    }
    let n = n.unwrap_or(g.split());
    let grass = grass_invariants(&g, n)?;
    let l = g.dim();
    let mut table = Table::new(vec!["table".into(), "index".into(), "expression".into()]);
    for a in 0..l {
        for c in 0..l {
            for b in 0..l {
                let pi = thomas_pi(&g).component(a, c, b);
                table.push(vec!["Pi".into(), index_label(&[a, c, b]).into(), pi.to_string().into()]);
            }
        }
    }
    let latin: [&[bool]; 4] = [
        &[false, true, false],
        &[false, true, true, false, false],
        &[true, true, true, false, false, false, false],
        &[true, false, true],
    ];
    for ((name, family), latin) in grass.families().into_iter().zip(latin) {
        family_rows(&mut table, name, family, latin, n);
    }
    emit(global, &table.render(global.format))?;
    Ok(0)
}

pub fn equivalent(global: &Global, spec1: &Path, spec2: &Path, n: Option<usize>) -> CmdResult {
    let g1 = load_connection(spec1)?;
    let g2 = load_connection(spec2)?;
    if g1.dim() != g2.dim() {
        return Err(usage(format!("dimension mismatch: {} vs {}", g1.dim(), g2.dim())));
    }
    let n = n.unwrap_or(g1.split());
    let tol = tol(global, DEFAULT_TOL)?;
    let report = grass_equivalent(&g1, &g2, n, samples(global, DEFAULT_SAMPLES)?, tol, global.seed)?;
    let verdict = if report.equivalent { "EQUIVALENT" } else { "NOT EQUIVALENT" };
    let mut table = Table::new(
        ["verdict", "max_deviation", "invariants_equal", "invariant_deviation", "samples", "tol"]
            .map(String::from)
            .to_vec(),
    );
    table.push(vec![
        verdict.into(),
        report.max_deviation.into(),
        report.invariants_equal.to_string().into(),
        report.invariant_deviation.into(),
        report.samples.into(),
        tol.into(),
    ]);
    emit(global, &table.render(global.format))?;
    eprintln!(
        "{verdict} (max deviation {:.3e}; invariants {} with deviation {:.3e})",
        report.max_deviation,
        if report.invariants_equal { "equal" } else { "differ" },
        report.invariant_deviation
    );
    Ok(if report.equivalent { 0 } else { 1 })
}

fn sigma_label(sigma: &jetgeo::jets::MultiIndex) -> String {
    sigma.indices().iter().map(|i| (i + 1).to_string()).collect()
}

fn jet_header(jet: &Jet, frame: &CoordinateFrame) -> Vec<String> {
    match jet {
        Jet::Sub(p) => {
            let mut h: Vec<String> = frame.names().iter().map(|s| s.to_string()).collect();
            h.extend(p.derivs().keys().map(|(i, s)| format!("{}_{}", frame.name(*i), sigma_label(s))));
            h
        }
        Jet::Sec(t) => {
            let mut h: Vec<String> = (1..=t.n()).map(|i| format!("x{i}")).collect();
            h.extend(frame.names().iter().map(|s| s.to_string()));
            h.extend(t.derivs().keys().map(|(a, s)| format!("{}_x{}", frame.name(*a), sigma_label(s))));
            h
        }
    }
}

fn jet_values(jet: &Jet) -> Vec<f64> {
    match jet {
        Jet::Sub(p) => p.base().iter().chain(p.derivs().values()).copied().collect(),
        Jet::Sec(t) => t.x().iter().chain(t.u()).chain(t.derivs().values()).copied().collect(),
    }
}

fn jet_shape(jet: &Jet) -> (&'static str, usize, usize, usize) {
    match jet {
        Jet::Sub(p) => ("subjet", p.n(), p.l(), p.order()),
        Jet::Sec(t) => ("secjet", t.n(), t.l(), t.order()),
    }
}

pub fn residual(global: &Global, spec: &Path, jets: &Path, mode: Mode, theta: Option<&Path>) -> CmdResult {
    let g = load_connection(spec)?;
    let jets = load_jets(&read(jets)?).map_err(|e| usage(format!("{}: {e}", jets.display())))?;
    let Some(first) = jets.first() else {
        return Err(usage("the jet file is empty"));
    };
    let shape = jet_shape(first);
    if let Some(k) = jets.iter().position(|j| jet_shape(j) != shape) {
        return Err(usage(format!("jet {} differs in kind or shape from the first jet", k + 1)));
    }
    let (kind, n, l, _) = shape;
    if l != g.dim() {
        return Err(usage(format!("jets over E of dimension {l}, connection of dimension {}", g.dim())));
    }
    if mode == Mode::Param && kind != "secjet" {
        return Err(usage("kind mismatch: mode param needs secjet input"));
    }
    let g = g.with_split(n)?;
    let theta = load_theta(theta, n)?;
    let frame = g.frame();
    let mut header = vec!["index".to_string()];
    header.extend(jet_header(first, frame));
    let m = l - n;
    match mode {
        Mode::Unparam => {
            for k in n..l {
                for lambda in 0..n {
                    for xi in lambda..n {
                        header.push(format!("res_{}_{}{}", k + 1, lambda + 1, xi + 1));
                    }
                }
            }
        }
        Mode::Param => {
            for c in 0..l {
                for xi in 0..n {
                    for lambda in xi..n {
                        header.push(format!("res_{}_{}{}", c + 1, xi + 1, lambda + 1));
                    }
                }
            }
        }
    }
    let width = match mode {
        Mode::Unparam => m * n * (n + 1) / 2,
        Mode::Param => l * n * (n + 1) / 2,
    };
    header.extend(["max_abs".to_string(), "error".to_string()]);
    let mut table = Table::new(header);
    for (index, jet) in jets.iter().enumerate() {
        let outcome = match (mode, jet) {
            (Mode::Unparam, Jet::Sub(p)) => residual2(&g, p).map(|r| (r.components(), r.max_abs())),
            (Mode::Unparam, Jet::Sec(t)) => cover2(t).and_then(|q| residual2(&g, &q)).map(|r| (r.components(), r.max_abs())),
            (Mode::Param, Jet::Sec(t)) => param_residual2(&g, &theta, t).map(|r| (r.components(), r.max_abs())),
            (Mode::Param, Jet::Sub(_)) => unreachable!("rejected above"),
        };
        let mut row: Vec<Cell> = vec![index.into()];
        row.extend(jet_values(jet).into_iter().map(Cell::from));
        match outcome {
            Ok((components, max_abs)) => {
                row.extend(components.into_iter().map(Cell::from));
                row.push(max_abs.into());
                row.push(Cell::Empty);
            }
            Err(e) if e.is_domain() => {
                row.extend(std::iter::repeat_n(Cell::Empty, width + 1));
                row.push(e.to_string().into());
            }
            Err(e) => return Err(e.into()),
        }
        table.push(row);
    }
    emit(global, &table.render(global.format))?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
pub fn geodesic(global: &Global, spec: &Path, start: &str, velocity: &str, h: f64, steps: usize, x0: f64, theta: Option<&Path>) -> CmdResult {
    let g = load_connection(spec)?;
    if g.split() != 1 {
        return Err(usage(format!("geodesic needs a spec with n = 1, got n = {}", g.split())));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(usage(format!("step size must be positive, got {h}")));
    }
    let start = GeodesicStart { x: x0, u: parse_list(start, "--start")?, velocity: parse_list(velocity, "--velocity")? };
    if start.u.len() != g.dim() || start.velocity.len() != g.dim() {
        return Err(usage(format!("--start and --velocity need {} coordinates", g.dim())));
    }
    let theta = load_theta(theta, 1)?;
    let trajectory = integrate_geodesic(&g, &theta, &start, h, steps)?;
    let l = g.dim();
    let names: Vec<String> = g.frame().names().iter().map(|s| s.to_string()).collect();
    let mut header = vec!["step".to_string(), "t".to_string()];
    header.extend(names.iter().cloned());
    header.extend(names.iter().map(|s| format!("d{s}")));
    header.push("residual".into());
    let speeds = match trajectory.speeds(&g) {
        Some(Ok(s)) => Some(s),
        Some(Err(e)) if e.is_domain() => None,
        Some(Err(e)) => return Err(e.into()),
        None => None,
    };
    if speeds.is_some() {
        header.extend(["speed".to_string(), "speed_drift".to_string()]);
    }
    header.push("error".into());
    let mut table = Table::new(header);
    for (step, t) in trajectory.jets.iter().enumerate() {
        let mut row: Vec<Cell> = vec![step.into(), t.x()[0].into()];
        row.extend(t.u().iter().map(|&v| Cell::from(v)));
        row.extend((0..l).map(|a| Cell::from(t.d1(a, 0))));
        row.push(match cover2(t).and_then(|q| residual2(&g, &q)) {
            Ok(r) => r.max_abs().into(),
            Err(_) => Cell::Empty,
        });
        if let Some(s) = &speeds {
            row.push(s[step].into());
            row.push((s[step] - s[0]).abs().into());
        }
        table.push(row);
    }
    let code = match &trajectory.error {
        Some(e) => {
            let mut row: Vec<Cell> = vec![trajectory.jets.len().into()];
            row.resize(table.header.len() - 1, Cell::Empty);
            row.push(e.to_string().into());
            table.push(row);
            eprintln!("integration stopped after {} of {} steps: {e}", trajectory.jets.len().saturating_sub(1), steps);
            3
        }
        None => 0,
    };
    emit(global, &table.render(global.format))?;
    Ok(code)
}

fn status_cell(status: &RowStatus) -> Cell {
    match status {
        RowStatus::Pass => "pass".into(),
        RowStatus::Fail => "fail".into(),
        RowStatus::Skipped(reason) => format!("skipped: {reason}").into(),
    }
}

pub fn cover_check(global: &Global, spec: &Path, theta: Option<&Path>, jets: Option<&Path>) -> CmdResult {
    let g = load_connection(spec)?;
    let (n, l) = (g.split(), g.dim());
    let theta = load_theta(theta, n)?;
    let tol = tol(global, DEFAULT_TOL)?;
    let points: Vec<SecJet> = match jets {
        Some(path) => load_jets(&read(path)?)?
            .into_iter()
            .map(|j| match j {
                Jet::Sec(t) if t.n() == n && t.l() == l && t.order() >= 1 => Ok(t.truncate(1)),
                other => Err(usage(format!("cover-check needs section jets with (n, l) = ({n}, {l}), got a {}", other.kind()))),
            })
            .collect::<Result<_, _>>()?,
        None => (0..samples(global, DEFAULT_SAMPLES)?)
            .map(|i| random_secjet(&mut rng_for(global.seed, i as u64), n, l, 1, g.singular_points()))
            .collect(),
    };
    let names = secjet_frame(g.frame(), n)?;
    let mut header = vec!["index".to_string()];
    header.extend(names.names().iter().map(|s| s.to_string()));
    header.extend(["commutation".to_string(), "span_residual".to_string(), "rank".to_string(), "status".to_string()]);
    let mut table = Table::new(header);
    let (mut passed, mut evaluated) = (0, 0);
    for (index, t) in points.iter().enumerate() {
        let outcome = (|| -> jetgeo::Result<(f64, f64, usize)> {
            let left = cover2(&ddot_gamma_pro(&g, &theta, t)?)?;
            let right = ddot_gamma(&g, &cover1(t)?)?;
            let dev = left.derivs().values().zip(right.derivs().values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let push = distribution_pushforward(&g, &theta, t)?;
            Ok((dev, push.span_residual, push.rank))
        })();
        let mut row: Vec<Cell> = vec![index.into()];
        row.extend(t.j1_coords().into_iter().map(Cell::from));
        match outcome {
            Ok((dev, span, rank)) => {
                evaluated += 1;
                let ok = dev <= tol && span <= tol && rank == n;
                passed += usize::from(ok);
                row.extend([dev.into(), span.into(), rank.into(), if ok { "pass" } else { "fail" }.into()]);
            }
            Err(e) if e.is_domain() => {
                row.extend([Cell::Empty, Cell::Empty, Cell::Empty, format!("skipped: {e}").into()]);
            }
            Err(e) => return Err(e.into()),
        }
        table.push(row);
    }
    emit(global, &table.render(global.format))?;
    let holds = evaluated > 0 && passed == evaluated;
    eprintln!("{} {passed}/{evaluated} tol={tol:e}", if holds { "PASS" } else { "FAIL" });
    Ok(if holds { 0 } else { 1 })
}

pub enum Candidate {
    PointMap(String),
    PointField(String),
    JetMap(std::path::PathBuf),
    Affine(String, Option<String>),
}

fn split_components(text: &str) -> Vec<&str> {
    text.split(';').map(str::trim).collect()
}

fn report_table(report: &SymmetryReport, names: &CoordinateFrame) -> Table {
    let mut header = vec!["index".to_string()];
    header.extend(names.names().iter().map(|s| s.to_string()));
    header.extend(["residual".to_string(), "status".to_string()]);
    let mut table = Table::new(header);
    for row in &report.rows {
        let mut cells: Vec<Cell> = vec![row.index.into()];
        cells.extend(row.coords.iter().map(|&v| Cell::from(v)));
        cells.push(if matches!(row.status, RowStatus::Skipped(_)) { Cell::Empty } else { row.residual.into() });
        cells.push(status_cell(&row.status));
        table.push(cells);
    }
    table
}

pub fn symmetry_check(global: &Global, spec: &Path, candidate: Candidate, theta: Option<&Path>) -> CmdResult {
    let g = load_connection(spec)?;
    let n = g.split();
    let samples = samples(global, DEFAULT_SAMPLES)?;
    let span_cfg = CheckConfig { samples, tol: tol(global, SPAN_TOL)?, seed: global.seed };
    let (report, names) = match candidate {
        Candidate::PointMap(text) => {
            let f = parse_point_map(g.frame(), &split_components(&text))?;
            let map = prolong_point_map(g.frame(), n, &f)?;
            (preserves_distribution(&map, &g, &span_cfg)?, map.frame().clone())
        }
        Candidate::PointField(text) => {
            let f = parse_point_map(g.frame(), &split_components(&text))?;
            let field = prolong_point_field(g.frame(), n, &f)?;
            (field_preserves_distribution(&field, &g, &span_cfg)?, field.frame().clone())
        }
        Candidate::JetMap(path) => {
            let map = JetMapSpec::from_json(&read(&path)?)?.build()?;
            let report = match map.kind() {
                JetKind::Subjet => preserves_distribution(&map, &g, &span_cfg)?,
                JetKind::Secjet => preserves_pro_distribution(&map, &g, &load_theta(theta, map.n())?, &span_cfg)?,
            };
            (report, map.frame().clone())
        }
        Candidate::Affine(matrix, shift) => {
            let rows: Vec<Vec<f64>> = split_components(&matrix).iter().map(|r| parse_list(r, "--affine")).collect::<Result<_, _>>()?;
            let k = rows.len();
            if rows.iter().any(|r| r.len() != k) {
                return Err(usage("--affine needs a square matrix"));
            }
            let b = match shift {
                Some(s) => parse_list(&s, "--shift")?,
                None => vec![0.0; k],
            };
            let aff = AffineMap::new(DMatrix::from_fn(k, k, |r, c| rows[r][c]), DVector::from_vec(b))?;
            let cfg = CheckConfig { tol: tol(global, DEFAULT_TOL)?, ..span_cfg };
            let report = affine_symmetry_check(&g, &load_theta(theta, k)?, &aff, &cfg)?;
            (report, secjet_frame(g.frame(), k)?)
        }
    };
    emit(global, &report_table(&report, &names).render(global.format))?;
    eprintln!("{}", report.summary());
    Ok(if report.holds() { 0 } else { 1 })
}

pub fn selftest(global: &Global) -> CmdResult {
    if global.samples == Some(0) {
        return Err(usage("--samples must be at least 1"));
    }
    if let Some(t) = global.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(usage("--tol must be positive"));
        }
    }
    let cfg = RunConfig { seed: global.seed, samples: global.samples, tol: global.tol };
    let started = Instant::now();
    let mut results = Vec::with_capacity(CRITERIA);
    for id in 1..=CRITERIA {
        let r = run_criterion(id, &cfg);
        eprintln!("criterion {id}: {:.3} s", r.elapsed.as_secs_f64());
        results.push(r);
    }
    let text = match global.format {
        Format::Csv => results.iter().map(|r| format!("{r}\n")).collect::<String>(),
        Format::Json => {
            let items: Vec<serde_json::Value> = results
                .iter()
                .map(|r| serde_json::json!({"id": r.id, "title": r.title, "passed": r.passed, "detail": r.detail}))
                .collect();
            let mut s = serde_json::to_string_pretty(&items).expect("serializes");
            s.push('\n');
            s
        }
    };
    emit(global, &text)?;
    let passed = results.iter().filter(|r| r.passed).count();
    eprintln!("selftest: {passed}/{CRITERIA} criteria passed in {:.2} s", started.elapsed().as_secs_f64());
    Ok(if passed == CRITERIA { 0 } else { 1 })
}
