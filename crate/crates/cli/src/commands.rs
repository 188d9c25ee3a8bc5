use std::f64::consts::PI;

use kapitza_dirac::correlation::{correlation_quadrature, ClosedCorrelation};
use kapitza_dirac::momentum::{
    joint_table, p_distinguishable, p_identical, resonance, DEFAULT_RESONANCE_TOL,
};
use kapitza_dirac::multimode::MultimodeModel;
use kapitza_dirac::spatial::{linspace, visibility, SpatialModel};
use kapitza_dirac::{DiffractionCoefficients, GratingParams, SingleMode, Statistics};

use crate::config::{MomentumKind, ScenarioConfig};
use crate::output::{Cell, Table};
use crate::CliError;

fn with_config(mut table: Table, cfg: &ScenarioConfig) -> Table {
    let mut meta: Vec<(String, String)> = cfg
        .entries()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    meta.append(&mut table.meta);
    table.meta = meta;
    table
}

fn grid(cfg: &ScenarioConfig, default: (f64, f64)) -> Vec<f64> {
    let (lo, hi) = cfg.range.unwrap_or(default);
    linspace(lo, hi, cfg.points)
}

pub fn coefficients(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let coeffs = DiffractionCoefficients::new(&cfg.grating()?, cfg.nmax)?;
    let mut t = Table::new(["n", "re_b", "im_b", "abs2_b"]);
    t.push_meta("n_max", coeffs.n_max());
    for (n, b) in coeffs.iter() {
        t.push(vec![
            Cell::Int(n as i64),
            Cell::Real(b.re),
            Cell::Real(b.im),
            Cell::Real(b.norm_sqr()),
        ]);
    }
    t.push(vec![
        Cell::Text("sum".into()),
        Cell::Empty,
        Cell::Empty,
        Cell::Real(coeffs.norm_sqr_sum()),
    ]);
    Ok(with_config(t, cfg))
}

pub fn spatial(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let (a, b) = cfg.single_modes()?;
    let model = SpatialModel::new(&cfg.grating()?, cfg.nmax, a, b)?;
    let xs = grid(cfg, (-10.0, 10.0));
    let mut t = Table::new([
        "x",
        "density_distinguishable",
        "density_boson",
        "density_fermion",
    ]);
    let mut columns = Vec::new();
    for stats in Statistics::ALL {
        let p = model.pattern_scan(cfg.y, &xs, stats)?;
        t.push_meta(
            format!("normalization_constant_{stats}"),
            model.normalization_constant(cfg.y, stats),
        );
        t.push_meta(format!("scale_{stats}"), p.normalization);
        let v = visibility(&p).map_or_else(|_| "undefined".to_string(), |v| v.to_string());
        t.push_meta(format!("visibility_{stats}"), v);
        columns.push(p.values);
    }
    for (i, &x) in xs.iter().enumerate() {
        t.push(vec![
            Cell::Real(x),
            Cell::Real(columns[0][i]),
            Cell::Real(columns[1][i]),
            Cell::Real(columns[2][i]),
        ]);
    }
    Ok(with_config(t, cfg))
}

/// Densities scaled so the distinguishable curve peaks at one, plus the raw values.
pub fn multimode(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let (a, b) = cfg.gaussian_modes()?;
    let model = MultimodeModel::new(&cfg.grating()?, cfg.nmax, a, b)?;
    let xs = grid(cfg, (-10.0, 10.0));
    let mut raw = Vec::with_capacity(xs.len());
    for &x in &xs {
        let mut row = [0.0; 3];
        for (slot, stats) in row.iter_mut().zip(Statistics::ALL) {
            *slot = model.joint_density(x, cfg.y, stats)?;
        }
        raw.push(row);
    }
    let peak = raw.iter().map(|r| r[0]).fold(0.0, f64::max);
    if peak <= 0.0 {
        return Err(kapitza_dirac::Error::Numerical(
            "distinguishable density vanishes on the whole scan".into(),
        )
        .into());
    }
    let mut t = Table::new([
        "x",
        "density_distinguishable",
        "density_boson",
        "density_fermion",
        "raw_distinguishable",
        "raw_boson",
        "raw_fermion",
    ]);
    t.push_meta("scale", peak);
    for (&x, r) in xs.iter().zip(&raw) {
        let mut row = vec![Cell::Real(x)];
        row.extend(r.iter().map(|v| Cell::Real(v / peak)));
        row.extend(r.iter().map(|&v| Cell::Real(v)));
        t.push(row);
    }
    Ok(with_config(t, cfg))
}

pub fn correlation(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let (a, b) = cfg.single_modes()?;
    let model = SpatialModel::new(&cfg.grating()?, cfg.nmax, a, b)?;
    let etas = grid(cfg, (0.0, 4.0 * PI / cfg.kl));
    let closed = ClosedCorrelation::new(&model);
    let mut t = Table::new(["eta", "c_closed", "c_quadrature", "abs_diff"]);
    for eta in etas {
        let c = closed.evaluate(eta, cfg.stats);
        let q = correlation_quadrature(&model, eta, cfg.stats)?;
        t.push(vec![
            Cell::Real(eta),
            Cell::Real(c),
            Cell::Real(q),
            Cell::Real((c - q).abs()),
        ]);
    }
    Ok(with_config(t, cfg))
}

const FIG4_LINES: [(i32, i32); 6] = [(0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (2, 2)];

pub fn momentum(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    match cfg.kind {
        MomentumKind::Fig4 => momentum_fig4(cfg),
        MomentumKind::Fig6 => momentum_fig6(cfg),
        MomentumKind::Table => momentum_table(cfg),
    }
}

fn momentum_fig4(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let mut columns = vec!["w".to_string()];
    columns.extend(FIG4_LINES.iter().map(|(n, m)| format!("p_{n}_{m}")));
    let mut t = Table::new(columns);
    for w in grid(cfg, (0.0, 1.5)) {
        let g = GratingParams::new(w, cfg.kl)?;
        let mut row = vec![Cell::Real(w)];
        for &(n, m) in &FIG4_LINES {
            row.push(Cell::Real(p_distinguishable(n, m, &g)?));
        }
        t.push(row);
    }
    Ok(with_config(t, cfg))
}

/// `P(1,0)` for particles entering at `k₀ = 0` and `q₀ = 2Nk_L`, `N = ±1`.
fn momentum_fig6(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let mut t = Table::new([
        "w",
        "p_dis_1_0",
        "p_boson_n1",
        "p_fermion_n1",
        "p_boson_nm1",
        "p_fermion_nm1",
    ]);
    let first = SingleMode::new(0.0, 0.0)?;
    for w in grid(cfg, (0.0, 1.5)) {
        let g = GratingParams::new(w, cfg.kl)?;
        let mut row = vec![Cell::Real(w), Cell::Real(p_distinguishable(1, 0, &g)?)];
        for shift in [1.0, -1.0] {
            let second = SingleMode::new(2.0 * shift * cfg.kl, 0.0)?;
            let res = resonance(&first, &second, &g, DEFAULT_RESONANCE_TOL);
            for stats in [Statistics::Boson, Statistics::Fermion] {
                row.push(Cell::Real(p_identical(1, 0, &g, &res, stats)?));
            }
        }
        t.push(row);
    }
    Ok(with_config(t, cfg))
}

fn momentum_table(cfg: &ScenarioConfig) -> Result<Table, CliError> {
    let (a, b) = cfg.single_modes()?;
    let table = joint_table(&cfg.grating()?, cfg.nmax, &a, &b, cfg.stats, cfg.nrange)?;
    let mut t = Table::new([
        "n",
        "m",
        "k",
        "q",
        "probability",
        "unclamped",
        "resonant",
        "truncated",
        "negative",
    ]);
    let shift = table
        .resonance
        .n
        .map_or_else(|| "none".to_string(), |n| n.to_string());
    t.push_meta("resonance", shift);
    t.push_meta("total", table.total());
    for e in &table.entries {
        t.push(vec![
            Cell::Int(e.n as i64),
            Cell::Int(e.m as i64),
            Cell::Real(e.k),
            Cell::Real(e.q),
            Cell::Real(e.probability),
            Cell::Real(e.unclamped),
            Cell::Flag(e.resonant),
            Cell::Flag(e.truncated),
            Cell::Flag(e.negative),
        ]);
    }
    Ok(with_config(t, cfg))
}

/// Gnuplot script plotting every data column of `data_file` against the first.
pub fn plot_script(data_file: &str, table: &Table, xlabel: &str, ylabel: &str) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set xlabel '{xlabel}'\n"));
    s.push_str(&format!("set ylabel '{ylabel}'\n"));
    let curves: Vec<String> = (2..=table.columns.len())
        .filter(|&i| !table.columns[i - 1].starts_with("raw_"))
        .enumerate()
        .map(|(k, i)| {
            let file = if k == 0 {
                format!("'{data_file}'")
            } else {
                "''".to_string()
            };
            format!("{file} using 1:{i} with lines")
        })
        .collect();
    s.push_str(&format!("plot {}\n", curves.join(", \\\n     ")));
    s
}
