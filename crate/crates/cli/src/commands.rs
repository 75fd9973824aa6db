//! Table builders for each subcommand.

use serde_json::{json, Value};
use zenolab::continuum::{denominator_near_level, weight_prefactor};
use zenolab::{
    analyze_level, crossover, p2, p4, p4_approx, sweep_tau2_vs_gap, sweep_tau2_vs_w, Error, LevelAnalysisF64,
    ModelParamsF64, PhysicalConfigF64, QuasiLevelF64, SurvivalOracle, SweepResultF64, TimeGrid, Tolerances,
};

use crate::table::{Cell, Table};
use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    P2,
    P4,
    P4Approx,
    Oracle,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepParam {
    W,
    V0,
}

pub struct Context {
    pub config: PhysicalConfigF64,
    pub params: ModelParamsF64,
    pub levels: Vec<QuasiLevelF64>,
    pub include_shallow: bool,
    pub tolerances: Tolerances,
}

impl Context {
    pub fn new(config: PhysicalConfigF64, include_shallow: bool, tolerances: Tolerances) -> Result<Self, Failure> {
        let params = config.to_dimensionless()?;
        let levels = zenolab::find_levels(&params);
        Ok(Self { config, params, levels, include_shallow, tolerances })
    }

    fn time(&self, t_tilde: f64) -> f64 {
        self.params.physical_time(t_tilde)
    }

    fn require_levels(&self) -> Result<(), Failure> {
        if self.levels.is_empty() {
            return Err(Failure::no_levels(format!(
                "no quasi-levels found (sqrt(u) = {:.6} is below pi/2)",
                self.params.sqrt_u()
            )));
        }
        Ok(())
    }

    /// The requested level, or every level when none is given.
    fn select(&self, level: Option<usize>) -> Result<Vec<QuasiLevelF64>, Failure> {
        self.require_levels()?;
        match level {
            None => Ok(self.levels.clone()),
            Some(n) => self.levels.iter().find(|l| l.index == n).map(|l| vec![*l]).ok_or_else(|| {
                Failure::no_levels(format!("no quasi-level with index {n} ({} found)", self.levels.len()))
            }),
        }
    }

    /// A single level (default: the first) that must be analyzable.
    fn single(&self, level: Option<usize>) -> Result<LevelAnalysisF64, Failure> {
        let l = self.select(Some(level.unwrap_or(1)))?[0];
        Ok(analyze_level(&self.params, &l, self.include_shallow)?)
    }

    /// `Ok(None)` for a shallow level that was not asked for.
    fn analyze(&self, l: &QuasiLevelF64) -> Result<Option<LevelAnalysisF64>, Failure> {
        match analyze_level(&self.params, l, self.include_shallow) {
            Ok(an) => Ok(Some(an)),
            Err(Error::ShallowLevel { .. }) => Ok(None),
            Err(e) => Err(e.into()),
        }
    }
}

fn status(an: Option<&LevelAnalysisF64>) -> String {
    match an {
        None => "shallow".into(),
        Some(an) => match &an.survival {
            Ok(_) => "ok".into(),
            Err(e) => e.to_string(),
        },
    }
}

/// Propagates kernel failures and leaves regime limits to the status column.
fn fatal(an: &LevelAnalysisF64) -> Result<(), Failure> {
    match &an.survival {
        Err(e) if e.is_numerical() && !matches!(e, Error::Classification(_)) => Err(e.clone().into()),
        _ => Ok(()),
    }
}

pub fn levels(ctx: &Context) -> Result<Table, Failure> {
    ctx.require_levels()?;
    let mut t = Table::new(&["level", "sigma0", "e0_over_v0", "arho0", "e0", "shallow"]);
    for l in &ctx.levels {
        t.push(vec![
            l.index.into(),
            l.sigma0.into(),
            l.e0_over_v0.into(),
            l.arho0.into(),
            (l.e0_over_v0 * ctx.config.v0).into(),
            l.is_shallow().into(),
        ]);
    }
    Ok(t)
}

pub fn spectrum(ctx: &Context, level: Option<usize>, samples: usize, window: f64) -> Result<Table, Failure> {
    if !(window > 0.0 && window.is_finite()) {
        return Err(Failure::invalid("--window must be positive"));
    }
    let an = ctx.single(level)?;
    let (shape, taylor, l) = (&an.shape, &an.taylor, &an.level);
    let pref = weight_prefactor(l);
    let centre = shape.epsilon / 2.0;
    let half = window * shape.gamma;
    let mut t = Table::new(&["delta", "sigma", "weight", "weight_quadratic", "weight_quartic"]);
    for i in 0..samples {
        let d = centre - half + 2.0 * half * i as f64 / (samples - 1) as f64;
        let f = denominator_near_level(ctx.params.u, ctx.params.w, l.sigma0, d);
        let q2 = d * d - shape.epsilon * d + shape.gamma * shape.gamma;
        let w2 = pref * (-shape.log_k).exp() / q2;
        let w4 = pref * (-taylor.log_c2).exp() / taylor.eval_normalized(d);
        t.push(vec![d.into(), (l.sigma0 + d).into(), (pref / f).into(), w2.into(), w4.into()]);
    }
    t.note("level", l.index);
    t.note("sigma0", l.sigma0);
    t.note("epsilon", shape.epsilon);
    t.note("gamma", shape.gamma);
    Ok(t)
}

pub fn poles(ctx: &Context, level: Option<usize>) -> Result<Table, Failure> {
    let mut t = Table::new(&[
        "level",
        "sigma0",
        "epsilon",
        "gamma",
        "x0",
        "y0",
        "x1",
        "y1",
        "x2",
        "y2",
        "residual1",
        "residual2",
        "pole_match",
        "status",
    ]);
    for l in ctx.select(level)? {
        let an = ctx.analyze(&l)?;
        let mut row: Vec<Cell> = vec![l.index.into(), l.sigma0.into()];
        match &an {
            None => row.extend(std::iter::repeat_n(Cell::Empty, 11)),
            Some(an) => {
                fatal(an)?;
                let ps = an.poles.as_ref().ok();
                row.extend([
                    an.shape.epsilon.into(),
                    an.shape.gamma.into(),
                    an.z0.x.into(),
                    an.z0.y.into(),
                    ps.map(|p| p.z1.x).into(),
                    ps.map(|p| p.z1.y).into(),
                    ps.map(|p| p.z2.x).into(),
                    ps.map(|p| p.z2.y).into(),
                    ps.map(|p| p.residual1).into(),
                    ps.map(|p| p.residual2).into(),
                    an.narrow.as_ref().ok().map(|z| z.relative_distance(&an.z0)).into(),
                ]);
            }
        }
        row.push(status(an.as_ref()).into());
        t.push(row);
    }
    Ok(t)
}

pub fn survival(
    ctx: &Context,
    level: Option<usize>,
    method: Method,
    t_max: Option<f64>,
    samples: usize,
) -> Result<Table, Failure> {
    let an = ctx.single(level)?;
    let want = |m: Method| method == Method::All || method == m;
    let needs_poles = want(Method::P4) || want(Method::P4Approx) || t_max.is_none();
    let sp = if needs_poles { Some(an.survival.clone()?) } else { None };
    let t_max = t_max.unwrap_or_else(|| 3.0 * sp.as_ref().map_or(f64::NAN, |s| s.tau1_tilde));
    let grid = TimeGrid::uniform(t_max, samples, ctx.params.time_scale)?;
    let oracle = if want(Method::Oracle) {
        Some(SurvivalOracle::new(&ctx.params, &an.level, &ctx.tolerances.quadrature)?)
    } else {
        None
    };
    let mut cols = vec!["t_tilde", "t"];
    for (m, name) in [
        (Method::P2, "p2"),
        (Method::P4, "p4"),
        (Method::P4Approx, "p4_approx"),
        (Method::Oracle, "p_oracle_renormalized"),
    ] {
        if want(m) {
            cols.push(name);
        }
    }
    let mut t = Table::new(&cols);
    for (&tt, phys) in grid.t_tilde_values.iter().zip(grid.physical()) {
        let mut row: Vec<Cell> = vec![tt.into(), phys.into()];
        if want(Method::P2) {
            row.push(p2(tt, &an.z0).into());
        }
        if let Some(sp) = &sp {
            if want(Method::P4) {
                row.push(p4(tt, sp).into());
            }
            if want(Method::P4Approx) {
                row.push(p4_approx(tt, sp).into());
            }
        }
        if let Some(o) = &oracle {
            row.push(o.eval(tt).renormalized.into());
        }
        t.push(row);
    }
    t.note("level", an.level.index);
    if let Some(sp) = &sp {
        t.note("tau1_tilde", sp.tau1_tilde);
        t.note("tau2_tilde", sp.tau2_tilde);
    }
    if let Some(o) = &oracle {
        t.note("oracle_panels", o.panel_count());
        t.note("oracle_error_estimate", o.estimated_error());
    }
    Ok(t)
}

pub fn crossover_table(ctx: &Context, level: Option<usize>) -> Result<Table, Failure> {
    let mut t = Table::new(&[
        "level",
        "exists",
        "lhs",
        "rhs",
        "t_star_tilde",
        "t_star",
        "phi_residual",
        "t_star_exact_tilde",
        "t_star_exact",
        "status",
    ]);
    for l in ctx.select(level)? {
        let an = ctx.analyze(&l)?;
        let mut row: Vec<Cell> = vec![l.index.into()];
        match an.as_ref().map(|a| (a, a.survival.as_ref())) {
            Some((a, Ok(sp))) => {
                fatal(a)?;
                let c = crossover(sp)?;
                row.extend([
                    c.exists.into(),
                    c.lhs.into(),
                    c.rhs.into(),
                    c.t_star_tilde.into(),
                    c.t_star_tilde.map(|x| ctx.time(x)).into(),
                    c.phi_residual.into(),
                    c.t_star_exact_tilde.into(),
                    c.t_star_exact_tilde.map(|x| ctx.time(x)).into(),
                ]);
            }
            other => {
                if let Some((a, _)) = other {
                    fatal(a)?;
                }
                row.extend(std::iter::repeat_n(Cell::Empty, 8));
            }
        }
        row.push(status(an.as_ref()).into());
        t.push(row);
    }
    Ok(t)
}

pub struct SweepGrid {
    pub param: SweepParam,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub steps: usize,
}

pub fn sweep(ctx: &Context, level: Option<usize>, grid: &SweepGrid) -> Result<Table, Failure> {
    let (from, to) = match (grid.from, grid.to) {
        (Some(f), Some(t)) if f < t => (f, t),
        _ => return Err(Failure::invalid("sweep needs --sweep-from < --sweep-to")),
    };
    if grid.steps < 2 {
        return Err(Failure::invalid("--sweep-steps must be at least 2"));
    }
    let values: Vec<f64> = (0..grid.steps).map(|i| from + (to - from) * i as f64 / (grid.steps - 1) as f64).collect();
    let (res, x_name): (SweepResultF64, &str) = match grid.param {
        SweepParam::W => (sweep_tau2_vs_w(&ctx.config, level.unwrap_or(1), &values, ctx.include_shallow)?, "w"),
        SweepParam::V0 => (sweep_tau2_vs_gap(&ctx.config, &values, level, ctx.include_shallow)?, "a/arho0"),
    };
    if res.rows.is_empty() {
        return Err(Failure::no_levels(format!(
            "no analyzable quasi-levels along the sweep ({} skipped)",
            res.warnings.len()
        )));
    }
    let mut t = Table::new(&[
        "param",
        "w",
        "v0",
        "level",
        "sigma0",
        "arho0",
        "x1",
        "y1",
        "x2",
        "y2",
        "tau1_tilde",
        "tau1",
        "tau2_tilde",
        "tau2",
        "tau2_phenomenological",
        "tau2_ratio",
    ]);
    for r in &res.rows {
        t.push(vec![
            r.param.into(),
            r.w.into(),
            r.v0.into(),
            r.level_index.into(),
            r.sigma0.into(),
            r.arho0.into(),
            r.x1.into(),
            r.y1.into(),
            r.x2.into(),
            r.y2.into(),
            r.tau1_tilde.into(),
            r.tau1.into(),
            r.tau2_tilde.into(),
            r.tau2.into(),
            r.tau2_phenomenological.into(),
            (r.tau2 / r.tau2_phenomenological).into(),
        ]);
    }
    t.note("param", x_name);
    t.note(
        "fit",
        res.fit.map_or(
            Value::Null,
            |f| json!({"slope": f.slope, "intercept": f.intercept, "r_squared": f.r_squared, "n": f.n}),
        ),
    );
    t.note("warnings", res.warnings.clone());
    Ok(t)
}

pub fn report(ctx: &Context, level: Option<usize>) -> Result<Table, Failure> {
    let mut t = Table::new(&[
        "level",
        "sigma0",
        "e0_over_v0",
        "arho0",
        "epsilon",
        "gamma",
        "x1",
        "y1",
        "x2",
        "y2",
        "tau1_tilde",
        "tau1",
        "tau2_tilde",
        "tau2",
        "tau0_exact_tilde",
        "tau0_exact",
        "tau0_approx_tilde",
        "tau0_approx",
        "alpha",
        "beta",
        "n",
        "t_star_tilde",
        "t_star",
        "status",
    ]);
    for l in ctx.select(level)? {
        let an = ctx.analyze(&l)?;
        let mut row: Vec<Cell> = vec![l.index.into(), l.sigma0.into(), l.e0_over_v0.into(), l.arho0.into()];
        let sp = an.as_ref().and_then(|a| a.survival.as_ref().ok());
        if let Some(a) = &an {
            fatal(a)?;
            row.extend([a.shape.epsilon.into(), a.shape.gamma.into()]);
        } else {
            row.extend([Cell::Empty, Cell::Empty]);
        }
        let cross = sp.map(crossover).transpose()?;
        let t_star = cross.and_then(|c| c.t_star_tilde);
        let opt = |f: fn(&zenolab::SurvivalParamsF64) -> f64| -> Cell { sp.map(f).into() };
        let phys = |f: fn(&zenolab::SurvivalParamsF64) -> f64| -> Cell { sp.map(|s| ctx.time(f(s))).into() };
        row.extend([
            opt(|s| s.x1),
            opt(|s| s.y1),
            opt(|s| s.x2),
            opt(|s| s.y2),
            opt(|s| s.tau1_tilde),
            phys(|s| s.tau1_tilde),
            opt(|s| s.tau2_tilde),
            phys(|s| s.tau2_tilde),
            opt(|s| s.tau0_exact),
            phys(|s| s.tau0_exact),
            opt(|s| s.tau0_approx),
            phys(|s| s.tau0_approx),
            opt(|s| s.alpha),
            opt(|s| s.beta),
            opt(|s| s.n),
            t_star.into(),
            t_star.map(|x| ctx.time(x)).into(),
        ]);
        row.push(status(an.as_ref()).into());
        t.push(row);
    }
    Ok(t)
}
