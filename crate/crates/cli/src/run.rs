//! Validation and computation of scenario products.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use causticlab::action::{build_reduced_action, InitialData, ReducedAction};
use causticlab::polyalg::Polynomial;
use causticlab::geometry::{
    complex_double_points_in, compute_caustic, cusp_and_normal_checks, deflate, export_curves, factorisation_holds, reduce_fraction,
    hot_cool, hot_cool_boundaries, maxwell_klein, perestroika_detect, pre_maxwell, CausticData, CheckConfig, CurveKind,
    CurveSet, DoublePointWindow, ExportOptions,
};
use causticlab::turbulence::{
    eta_process, exchangeability_test, recurrence_stats, stats_csv, zeta_ddim, zeta_orthogonal, BrownianScenario,
    ZetaDdimConfig, ZetaEnsemble, MIN_PATHS, ZETA_GRAZE_TOL,
};
use serde_json::{json, Value};

use crate::scenario::{Product, Scenario, TimePoint, ZetaMode};
use crate::svg::{curves_svg, process_svg};
use crate::CliError;

/// Artifacts of a run, keyed by file name, and the named numbers that
/// expectations are checked against.
#[derive(Debug, Default)]
pub struct Outputs {
    pub files: BTreeMap<String, Vec<u8>>,
    pub observed: BTreeMap<String, Vec<f64>>,
    /// Wall time per product in seconds; never part of the JSON outputs.
    pub timing: Vec<(String, f64)>,
}

impl Outputs {
    fn file(&mut self, name: impl Into<String>, content: impl Into<Vec<u8>>) {
        self.files.insert(name.into(), content.into());
    }

    fn json(&mut self, name: impl Into<String>, v: &Value) {
        let mut text = serde_json::to_string_pretty(v).expect("JSON values serialise");
        text.push('\n');
        self.file(name, text);
    }

    fn observe(&mut self, key: impl Into<String>, v: Vec<f64>) {
        self.observed.insert(key.into(), v);
    }
}

struct Prepared {
    ra: ReducedAction,
    caustic: Option<CausticData>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn failed(product: Product, e: impl std::fmt::Display) -> CliError {
    CliError::Computation { product: product.name().into(), message: e.to_string() }
}

fn check_grid(h: f64, horizon: f64, what: &str) -> Result<(), CliError> {
    if !(h > 0.0 && horizon > 0.0) {
        return Err(invalid(format!("{what}: step and horizon must be positive")));
    }
    if horizon / h > 5e7 {
        return Err(invalid(format!("{what}: {} steps exceed the limit of 5e7", (horizon / h).round())));
    }
    Ok(())
}

/// Checks every requested product's preconditions before anything runs.
fn validate(sc: &Scenario) -> Result<Prepared, CliError> {
    if !(2..=3).contains(&sc.dim) {
        return Err(invalid(format!("dim must be 2 or 3, got {}", sc.dim)));
    }
    let data = InitialData::new(sc.dim, sc.s0.clone(), sc.direction.clone(), sc.epsilon)
        .map_err(|e| invalid(format!("s0 = {}: {e}", sc.s0_text)))?;
    let ra = build_reduced_action(&data).map_err(|e| invalid(format!("s0 = {}: {e}", sc.s0_text)))?;
    let degree = ra.scaled.degree_in("x0").unwrap_or(0);
    for p in &sc.products {
        let two_d = || {
            if sc.dim == 2 {
                Ok(())
            } else {
                Err(invalid(format!("{p} needs dim = 2")))
            }
        };
        if p.needs_times() && sc.times.is_empty() && !(sc.symbolic && matches!(p, Product::Maxwell | Product::Premaxwell | Product::Caustic)) {
            return Err(invalid(format!("{p} needs [time] t")));
        }
        match p {
            Product::Caustic => {}
            Product::Levels => {
                two_d()?;
                if sc.levels.is_empty() {
                    return Err(invalid("levels needs [levels] c"));
                }
            }
            Product::Maxwell | Product::Premaxwell => {
                two_d()?;
                if degree < 4 {
                    return Err(invalid(format!("{p} needs degree >= 4 in x0 of t f, got {degree}")));
                }
            }
            Product::Hotcool | Product::Perestroika | Product::Doublepoints | Product::Eta => two_d()?,
            Product::Zeta => {
                check_grid(sc.zeta.h, sc.zeta.horizon, "zeta")?;
                if sc.zeta.mode == ZetaMode::Ddim && sc.zeta.window.len() < sc.dim - 1 {
                    return Err(invalid("zeta window needs one pair per caustic parameter"));
                }
            }
            Product::Stats => {
                let horizon = sc.stats.horizons.iter().chain(&sc.stats.mean_times).copied().fold(0.0, f64::max);
                check_grid(sc.zeta.h, horizon, "stats")?;
                if sc.stats.paths < MIN_PATHS {
                    return Err(invalid(format!("stats needs at least {MIN_PATHS} paths, got {}", sc.stats.paths)));
                }
                if sc.stats.horizons.is_empty() {
                    return Err(invalid("stats needs [stats] horizons"));
                }
            }
        }
        if *p == Product::Eta {
            check_grid(sc.eta_h, sc.eta_horizon, "eta")?;
        }
    }
    let needs_caustic = sc.products.iter().any(|p| !matches!(p, Product::Stats) && !(*p == Product::Zeta && sc.zeta.mode == ZetaMode::Orthogonal));
    let caustic = if needs_caustic {
        Some(compute_caustic(&ra).map_err(|e| invalid(format!("caustic of s0 = {}: {e}", sc.s0_text)))?)
    } else {
        None
    };
    Ok(Prepared { ra, caustic })
}

/// Validates, then computes every product of the scenario.
pub fn run(sc: &Scenario) -> Result<Outputs, CliError> {
    let prep = validate(sc)?;
    let mut out = Outputs::default();
    for &p in &sc.products {
        let start = Instant::now();
        match p {
            Product::Caustic | Product::Levels | Product::Maxwell | Product::Premaxwell => continue,
            Product::Hotcool => hotcool(sc, &prep, &mut out)?,
            Product::Perestroika => perestroika(sc, &prep, &mut out)?,
            Product::Doublepoints => doublepoints(sc, &prep, &mut out)?,
            Product::Zeta => zeta(sc, &prep, &mut out)?,
            Product::Eta => eta(sc, &prep, &mut out)?,
            Product::Stats => stats(sc, &mut out)?,
        }
        out.timing.push((p.name().into(), start.elapsed().as_secs_f64()));
    }
    let start = Instant::now();
    let before = out.timing.len();
    curves(sc, &prep, &mut out)?;
    let symbolic: f64 = out.timing[before..].iter().map(|(_, s)| s).sum();
    if sc.products.iter().any(|p| matches!(p, Product::Caustic | Product::Levels | Product::Maxwell | Product::Premaxwell)) {
        out.timing.push(("curves".into(), start.elapsed().as_secs_f64() - symbolic));
    }
    Ok(out)
}

fn fmt_poly_lines(pairs: &[(&str, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

/// Symbolic files and sampled curves for caustic, levels, Maxwell and
/// pre-Maxwell, with one SVG per time drawn from the CSV files.
fn curves(sc: &Scenario, prep: &Prepared, out: &mut Outputs) -> Result<(), CliError> {
    let has = |p| sc.products.contains(&p);
    let geometric = [Product::Caustic, Product::Levels, Product::Maxwell, Product::Premaxwell];
    if !geometric.iter().any(|p| has(*p)) {
        return Ok(());
    }
    let ra = &prep.ra;
    let caustic = prep.caustic.as_ref().expect("validated");
    if has(Product::Caustic) {
        let mut lines: Vec<(&str, String)> = ["x", "y", "z"]
            .iter()
            .zip(&caustic.preparam.num)
            .map(|(k, n)| {
                let (n, d) = reduce_fraction(n, &caustic.preparam.den);
                (*k, if d == Polynomial::one() { n.to_string() } else { format!("({n}) / ({d})") })
            })
            .collect();
        lines.push(("pre_caustic", caustic.pre_caustic.to_string()));
        lines.push(("implicit", caustic.implicit.to_string()));
        out.file("caustic.txt", fmt_poly_lines(&lines));
    }
    if has(Product::Maxwell) {
        let start = Instant::now();
        let mk = maxwell_klein(ra, caustic).map_err(|e| failed(Product::Maxwell, e))?;
        out.file("maxwell_bt.txt", format!("{}\n", mk.b_t));
        out.file("maxwell_ct.txt", format!("{}\n", mk.c_t));
        let holds = factorisation_holds(&mk);
        out.json(
            "maxwell.json",
            &json!({
                "c_exponent": mk.c_exponent,
                "b_exponent": mk.b_exponent,
                "b_terms": mk.b_t.len(),
                "constant": mk.constant.to_string(),
                "factorisation_holds": holds,
            }),
        );
        out.observe("maxwell.c_exponent", vec![f64::from(mk.c_exponent)]);
        out.observe("maxwell.b_exponent", vec![f64::from(mk.b_exponent)]);
        out.observe("maxwell.b_terms", vec![mk.b_t.len() as f64]);
        out.observe("maxwell.factorisation", vec![f64::from(u8::from(holds))]);
        out.timing.push(("maxwell".into(), start.elapsed().as_secs_f64()));
    }
    if has(Product::Premaxwell) {
        let start = Instant::now();
        let pm = pre_maxwell(ra, caustic).map_err(|e| failed(Product::Premaxwell, e))?;
        out.file("premaxwell.txt", format!("{}\n", pm.poly));
        out.observe("premaxwell.pre_caustic_exponent", vec![f64::from(pm.pre_caustic_exponent)]);
        out.observe("premaxwell.terms", vec![pm.poly.len() as f64]);
        out.timing.push(("premaxwell".into(), start.elapsed().as_secs_f64()));
    }
    for tp in &sc.times {
        let opts = ExportOptions {
            lambda_range: sc.lambda_range,
            samples: sc.samples,
            levels: if has(Product::Levels) { sc.levels.iter().map(|(_, c)| c.clone()).collect() } else { Vec::new() },
            maxwell: has(Product::Maxwell) || has(Product::Premaxwell),
            window: sc.window,
            pre_window: sc.pre_window,
            lambda2: vec![0.0],
        };
        let set = export_curves(ra, caustic, &tp.value, &opts).map_err(|e| failed(Product::Caustic, e))?;
        let groups: [(Product, &str, &[CurveKind]); 4] = [
            (Product::Caustic, "caustic", &[CurveKind::Caustic, CurveKind::PreCaustic]),
            (Product::Levels, "levels", &[CurveKind::Level, CurveKind::PreLevel]),
            (Product::Maxwell, "maxwell", &[CurveKind::Maxwell]),
            (Product::Premaxwell, "premaxwell", &[CurveKind::PreMaxwell]),
        ];
        let mut csvs = Vec::new();
        for (p, stem, kinds) in groups {
            if !has(p) {
                continue;
            }
            let subset = CurveSet {
                t: set.t,
                dim: set.dim,
                curves: set.curves.iter().filter(|c| kinds.contains(&c.kind)).cloned().collect(),
            };
            let csv = subset.to_csv();
            out.file(format!("{stem}_t{}.csv", tp.slug()), csv.clone());
            csvs.push(csv);
        }
        if has(Product::Caustic) {
            let cusps = caustic.cusp_params(&tp.value);
            out.observe(format!("caustic.cusp_count@{}", tp.text), vec![cusps.len() as f64]);
        }
        if has(Product::Levels) {
            level_checks(sc, prep, tp, out)?;
        }
        let svg = curves_svg(&csvs, &format!("{} at t = {}", sc.name, tp.text));
        out.file(format!("curves_t{}.svg", tp.slug()), svg);
    }
    Ok(())
}

fn level_checks(sc: &Scenario, prep: &Prepared, tp: &TimePoint, out: &mut Outputs) -> Result<(), CliError> {
    let cfg = CheckConfig {
        levels: sc.levels.iter().map(|(_, c)| c.clone()).collect(),
        x0_range: sc.pre_window[0],
        ..CheckConfig::default()
    };
    let caustic = prep.caustic.as_ref().expect("validated");
    let report = cusp_and_normal_checks(&prep.ra, caustic, &tp.value, &cfg).map_err(|e| failed(Product::Levels, e))?;
    for c in &report.checks {
        out.observe(format!("levels.{}@{}", c.name, tp.text), vec![c.observed]);
    }
    out.observe(format!("levels.passed@{}", tp.text), vec![f64::from(u8::from(report.all_passed()))]);
    out.json(
        format!("levels_checks_t{}.json", tp.slug()),
        &json!({
            "t": tp.text,
            "checks": report.checks,
            "level_cusps": report.level_cusps,
            "maxwell_cusps": report.maxwell_cusps,
        }),
    );
    Ok(())
}

fn hotcool(sc: &Scenario, prep: &Prepared, out: &mut Outputs) -> Result<(), CliError> {
    let caustic = prep.caustic.as_ref().expect("validated");
    let defl = deflate(&prep.ra, caustic).map_err(|e| failed(Product::Hotcool, e))?;
    out.file(
        "hotcool.txt",
        fmt_poly_lines(&[("f_tilde", defl.f_tilde.to_string()), ("g_tilde", defl.g_tilde.to_string())]),
    );
    for tp in &sc.times {
        let t = tp.as_f64();
        let bounds = hot_cool_boundaries(&prep.ra, caustic, &defl, &tp.value).map_err(|e| failed(Product::Hotcool, e))?;
        let mut csv = String::from("lambda,x,y,source,below,above\n");
        for (i, b) in bounds.iter().enumerate() {
            csv.push_str(&format!(
                "{:e},{:e},{:e},{},{},{}\n",
                b.lambda,
                b.point[0],
                b.point[1],
                json!(b.source).as_str().unwrap_or(""),
                json!(b.below).as_str().unwrap_or(""),
                json!(b.above).as_str().unwrap_or("")
            ));
            out.observe(format!("hotcool.boundary[{i}]@{}", tp.text), b.point.clone());
            out.observe(format!("hotcool.boundary_lambda[{i}]@{}", tp.text), vec![b.lambda]);
        }
        out.observe(format!("hotcool.boundary_count@{}", tp.text), vec![bounds.len() as f64]);
        out.file(format!("hotcool_boundaries_t{}.csv", tp.slug()), csv);

        let n = sc.hotcool_samples.max(2);
        let (lo, hi) = sc.hotcool_range;
        let mut csv = String::from("lambda,x,y,label,tie,boundary_flag\n");
        for k in 0..n {
            let lam = lo + (hi - lo) * k as f64 / (n - 1) as f64;
            let Ok(l) = hot_cool(&prep.ra, caustic, &defl, lam, t) else { continue };
            csv.push_str(&format!(
                "{:e},{:e},{:e},{},{},{}\n",
                lam,
                l.point[0],
                l.point[1],
                json!(l.label).as_str().unwrap_or(""),
                l.tie,
                l.boundary_flag
            ));
        }
        out.file(format!("hotcool_t{}.csv", tp.slug()), csv);
    }
    Ok(())
}

fn perestroika(sc: &Scenario, prep: &Prepared, out: &mut Outputs) -> Result<(), CliError> {
    let caustic = prep.caustic.as_ref().expect("validated");
    let pts = perestroika_detect(&prep.ra, caustic, sc.perestroika_range).map_err(|e| failed(Product::Perestroika, e))?;
    let mut csv = String::from("t,lambda,x,y,certificate,dx,d2x\n");
    for (i, p) in pts.iter().enumerate() {
        csv.push_str(&format!(
            "{:e},{:e},{:e},{:e},{},{:e},{:e}\n",
            p.t, p.lambda, p.point[0], p.point[1], p.certificate, p.dx, p.d2x
        ));
        out.observe(format!("perestroika.t[{i}]"), vec![p.t]);
        out.observe(format!("perestroika.lambda[{i}]"), vec![p.lambda]);
        out.observe(format!("perestroika.dx[{i}]"), vec![p.dx]);
        out.observe(format!("perestroika.d2x[{i}]"), vec![p.d2x]);
    }
    out.observe("perestroika.count", vec![pts.len() as f64]);
    out.file("perestroika.csv", csv);
    Ok(())
}

fn doublepoints(sc: &Scenario, prep: &Prepared, out: &mut Outputs) -> Result<(), CliError> {
    let caustic = prep.caustic.as_ref().expect("validated");
    let window = DoublePointWindow { a: sc.dp_a, eta: sc.dp_eta, min_width: sc.dp_min_width };
    for tp in &sc.times {
        let res = complex_double_points_in(caustic, &tp.value, window).map_err(|e| failed(Product::Doublepoints, e))?;
        let mut csv = String::from("a,eta,x,y,near_boundary\n");
        for p in &res.points {
            csv.push_str(&format!("{:e},{:e},{:e},{:e},{}\n", p.a, p.eta, p.point[0], p.point[1], p.near_boundary));
        }
        out.file(format!("doublepoints_t{}.csv", tp.slug()), csv);
        out.observe(format!("doublepoints.count@{}", tp.text), vec![res.points.len() as f64]);
        out.observe(format!("doublepoints.unresolved@{}", tp.text), vec![res.unresolved_boxes as f64]);
        if let Some(m) = res.points.iter().map(|p| p.eta).min_by(f64::total_cmp) {
            out.observe(format!("doublepoints.min_eta@{}", tp.text), vec![m]);
        }
    }
    Ok(())
}

fn zeta(sc: &Scenario, prep: &Prepared, out: &mut Outputs) -> Result<(), CliError> {
    let z = &sc.zeta;
    let dim = if z.mode == ZetaMode::Orthogonal { 1 } else { sc.dim };
    let scn = BrownianScenario::new(sc.seed, 0, z.h, z.horizon, dim).map_err(|e| failed(Product::Zeta, e))?;
    out.file("path.csv", scn.to_csv());
    let (process, records) = match z.mode {
        ZetaMode::Orthogonal => {
            let (p, rec) = zeta_orthogonal(&scn, z.a, z.eps, z.c);
            (p, vec![(0, rec)])
        }
        ZetaMode::Ddim => {
            let caustic = prep.caustic.as_ref().expect("validated");
            let cfg = ZetaDdimConfig { eps: z.eps, c: z.c, window: z.window.clone(), ..ZetaDdimConfig::default() };
            let p = zeta_ddim(&scn, caustic, &prep.ra, &cfg).map_err(|e| failed(Product::Zeta, e))?;
            let recs = p.branches().into_iter().map(|id| (id, causticlab::turbulence::branch_zeros(&p, id, &cfg, z.horizon))).collect();
            let mut events = String::from("t,branch_id,kind,lambda\n");
            for e in &p.events {
                let lam: Vec<String> = e.lambda.iter().map(|v| format!("{v:e}")).collect();
                events.push_str(&format!("{:e},{},{},{}\n", e.t, e.branch, json!(e.kind).as_str().unwrap_or(""), lam.join(";")));
            }
            out.file("zeta_events.csv", events);
            out.observe("zeta.event_count", vec![p.events.len() as f64]);
            out.observe("zeta.gap_count", vec![p.gaps.len() as f64]);
            out.observe("zeta.branch_count", vec![p.branches().len() as f64]);
            (p, recs)
        }
    };
    let csv = process.to_csv(sc.seed, z.h);
    out.file("zeta.svg", process_svg(&csv, "zeta"));
    out.file("zeta.csv", csv);
    let zeros: usize = records.iter().map(|(_, r)| r.times.len()).sum();
    out.observe("zeta.zero_count", vec![zeros as f64]);
    out.observe("zeta.degenerate", vec![f64::from(u8::from(records.iter().any(|(_, r)| r.degenerate)))]);
    let recs: Vec<Value> = records.iter().map(|(id, r)| json!({ "branch_id": id, "record": r })).collect();
    out.json("zeta_zeros.json", &json!({ "master_seed": sc.seed, "h": z.h, "records": recs }));
    Ok(())
}

fn eta(sc: &Scenario, prep: &Prepared, out: &mut Outputs) -> Result<(), CliError> {
    let caustic = prep.caustic.as_ref().expect("validated");
    let scn = BrownianScenario::new(sc.seed, 0, sc.eta_h, sc.eta_horizon, 1).map_err(|e| failed(Product::Eta, e))?;
    let e = eta_process(&prep.ra, caustic, &scn, sc.epsilon).map_err(|e| failed(Product::Eta, e))?;
    let mut csv = format!("# seed={} h={:e}\nt,value,branch_id\n", sc.seed, sc.eta_h);
    for (t, v) in e.times.iter().zip(&e.values) {
        csv.push_str(&format!("{t:e},{v:e},0\n"));
    }
    out.file("eta.svg", process_svg(&csv, "eta"));
    out.file("eta.csv", csv);
    for (i, z) in e.record.times.iter().enumerate() {
        out.observe(format!("eta.zero[{i}]"), vec![*z]);
    }
    out.observe("eta.zero_count", vec![e.record.times.len() as f64]);
    out.json("eta.json", &json!({ "master_seed": sc.seed, "h": sc.eta_h, "record": e.record, "zeros": e.zeros }));
    Ok(())
}

fn stats(sc: &Scenario, out: &mut Outputs) -> Result<(), CliError> {
    let z = &sc.zeta;
    let horizon = sc.stats.horizons.iter().copied().fold(0.0, f64::max);
    let ens = ZetaEnsemble { master_seed: sc.seed, paths: sc.stats.paths, h: z.h, horizon, a: z.a, eps: z.eps, c: z.c };
    let records = ens.records().map_err(|e| failed(Product::Stats, e))?;
    let table = recurrence_stats(&records, &sc.stats.horizons, sc.stats.delta).map_err(|e| failed(Product::Stats, e))?;
    let chi = exchangeability_test(&records, horizon, sc.stats.delta, sc.stats.permutation_seed)
        .map_err(|e| failed(Product::Stats, e))?;
    for row in &table {
        for k in 0..3 {
            out.observe(format!("stats.fraction_ge{}@{}", k + 1, row.horizon), vec![row.fraction[k]]);
            out.observe(format!("stats.fraction_se_ge{}@{}", k + 1, row.horizon), vec![row.fraction_se[k]]);
        }
        if let Some(g) = row.mean_gap {
            out.observe(format!("stats.mean_gap@{}", row.horizon), vec![g]);
        }
    }
    out.observe("stats.chi2_p", vec![chi.p_value]);
    let mut means = Vec::new();
    for &t in &sc.stats.mean_times {
        let ens_t = ZetaEnsemble { horizon: t, ..ens.clone() };
        let (m, se) = ens_t.mean_at(t).map_err(|e| failed(Product::Stats, e))?;
        out.observe(format!("stats.mean@{t}"), vec![m]);
        out.observe(format!("stats.mean_se@{t}"), vec![se]);
        means.push(json!({ "t": t, "mean": m, "se": se }));
    }
    out.file("stats.csv", stats_csv(&table, sc.seed, z.h));
    out.json(
        "stats.json",
        &json!({
            "master_seed": sc.seed,
            "h": z.h,
            "paths": sc.stats.paths,
            "delta": sc.stats.delta,
            "a": z.a,
            "eps": z.eps,
            "c": z.c,
            "horizons": table,
            "exchangeability": chi,
            "mean_zeta_plus_c": means,
        }),
    );
    Ok(())
}

/// Manifest of inputs, versions, seed, tolerances and output files. Wall
/// time is kept out of it so that reruns are byte-identical.
pub fn manifest(sc: &Scenario, out: &Outputs) -> Value {
    let mut files: Vec<&String> = out.files.keys().collect();
    files.sort();
    json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "core_version": causticlab::VERSION,
        "scenario": {
            "name": sc.name,
            "dim": sc.dim,
            "s0": sc.s0_text,
            "direction": sc.direction,
            "epsilon": sc.epsilon,
            "products": sc.products,
            "times": sc.times.iter().map(|t| t.text.clone()).collect::<Vec<_>>(),
            "symbolic": sc.symbolic,
            "levels": sc.levels.iter().map(|(s, _)| s.clone()).collect::<Vec<_>>(),
        },
        "seed": sc.seed,
        "tolerances": {
            "default": sc.default_tolerance,
            "zeta_graze": ZETA_GRAZE_TOL,
        },
        "outputs": files,
        "wall_time": "timing.txt",
    })
}

/// Writes all artifacts, `manifest.json` and `timing.txt` into `dir`.
pub fn write_outputs(dir: &Path, sc: &Scenario, out: &Outputs) -> Result<Vec<PathBuf>, CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Output { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let mut written = Vec::new();
    for (name, bytes) in &out.files {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(io(&path))?;
        written.push(path);
    }
    let path = dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest(sc, out)).expect("JSON values serialise");
    text.push('\n');
    fs::write(&path, text).map_err(io(&path))?;
    written.push(path);
    if out.timing.is_empty() {
        return Ok(written);
    }
    let path = dir.join("timing.txt");
    let total: f64 = out.timing.iter().map(|(_, s)| s).sum();
    let mut timing: String = out.timing.iter().map(|(k, s)| format!("{k} {s:.6}\n")).collect();
    timing.push_str(&format!("total {total:.6}\n"));
    fs::write(&path, timing).map_err(io(&path))?;
    written.push(path);
    Ok(written)
}
