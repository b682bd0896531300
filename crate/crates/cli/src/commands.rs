use std::path::Path;
use std::time::Duration;

use anyhow::{Context, Result};
use relgrowth_core::boundary::{
    cylinder_mass, shadow_decompose, verify_partial_shadow_lemma, verify_shadow_lemma, ShadowKind, ShadowLemmaReport,
};
use relgrowth_core::cayley::{
    build_ball, growth_from_spheres, load_or_build, poincare_from_counts, Ball, Budget, FreeGroup, Geometry,
};
use relgrowth_core::quotient::{injectivity_check, language_filter, make_power_quotient, ContainmentFilter};
use relgrowth_core::relgeom::{
    enumerate_types, floyd_distance, partial_cone_members, tree_floyd_distance, Classifier, PeripheralIndex,
    PeripheralStructure,
};
use relgrowth_core::suite::{bundled, bundled_text, verify_all};
use relgrowth_core::treelab::{build_tree, verify_tree, TreeConfig};
use relgrowth_core::{Error, GeneratorSet, Presentation, Word};

use crate::cli::*;
use crate::output::{fmt_f64, Report};

/// Bad configuration that is not a core error (missing file, invalid flag
/// combination). Exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug)]
pub struct ChecksFailed(String);

impl std::fmt::Display for ChecksFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ChecksFailed {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

pub fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| usage(format!("--threads: {e}")))?;
    }
    let mut rep = Report::default();
    let result = match cli.command {
        Command::Ball(a) => ball(a, &mut rep),
        Command::Growth(a) => growth(a, &mut rep),
        Command::Floyd(a) => floyd(a, &mut rep),
        Command::Cones(a) => cones(a, &mut rep),
        Command::Shadow(a) => shadow(a, &mut rep),
        Command::PartialShadow(a) => partial_shadow(a, &mut rep),
        Command::Quotient(a) => quotient(a, &mut rep),
        Command::Filter(a) => filter(a, &mut rep),
        Command::Tree(a) => tree(a, &mut rep),
        Command::VerifyAll => verify(&mut rep),
    };
    // partial artifacts and failing check tables are written before the
    // error is reported
    let keep = match &result {
        Ok(()) => true,
        Err(e) => {
            e.downcast_ref::<ChecksFailed>().is_some()
                || matches!(e.downcast_ref::<Error>(), Some(Error::BudgetExceeded { .. }))
        }
    };
    if keep {
        rep.emit(cli.out.as_deref())?;
        if let Some(g) = &cli.gnuplot {
            std::fs::write(g, rep.gnuplot(cli.out.as_deref())).with_context(|| format!("writing {}", g.display()))?;
        }
    }
    result
}

fn load_pres(text: &str) -> Result<Presentation> {
    if Path::new(text).exists() {
        return Ok(Presentation::from_file(text)?);
    }
    match bundled_text(text) {
        Some(text) => Ok(Presentation::parse(text)?),
        None => Err(usage(format!(
            "--pres {text}: no such file and no bundled presentation of that name"
        ))),
    }
}

fn budget(b: &BudgetArgs) -> Result<Budget> {
    let mut out = match b.max_elements {
        Some(n) => Budget::max_elements(n),
        None => Budget::unlimited(),
    };
    if let Some(t) = b.time_limit {
        if !(t.is_finite() && t >= 0.0) {
            return Err(usage("--time-limit must be a non-negative number of seconds"));
        }
        out = out.with_time_limit(Duration::from_secs_f64(t));
    }
    Ok(out)
}

fn word(gens: &GeneratorSet, text: &str) -> Result<Word> {
    Ok(gens.parse_word(text)?)
}

fn fmt_word(gens: &GeneratorSet, w: &Word) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        gens.format(w)
    }
}

/// Ball build that keeps the largest complete ball when the budget runs out.
fn partial_ball(p: &Presentation, radius: usize, b: &Budget, rep: &mut Report) -> (Ball, Option<Error>) {
    let (ball, err) = Ball::build_partial(p.oracle(), radius, b);
    if let Some(e) = &err {
        rep.comment(format!("partial: {e}; tables cover radius {} of {radius}", ball.radius()));
    }
    (ball, err)
}

fn finish(err: Option<Error>) -> Result<()> {
    err.map_or(Ok(()), |e| Err(e.into()))
}

fn ball(a: BallArgs, rep: &mut Report) -> Result<()> {
    let p = load_pres(&a.pres.pres)?;
    let b = budget(&a.budget)?;
    let (ball, err) = match &a.cache {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            (load_or_build(dir, &p, a.radius, &b)?, None)
        }
        None => partial_ball(&p, a.radius, &b, rep),
    };
    rep.comment(format!("presentation: {}", ball.label()));
    rep.table("exact breadth-first enumeration, lexi-geodesic normal forms", &["radius", "sphere", "ball"]);
    for (k, (s, t)) in ball.sphere_sizes().iter().zip(ball.ball_sizes()).enumerate() {
        rep.row(&[k.to_string(), s.to_string(), t.to_string()]);
    }
    if a.words {
        let gens = p.generators();
        rep.table("lexi-geodesic of every element", &["length", "word"]);
        for w in ball.words() {
            rep.row(&[w.len().to_string(), fmt_word(gens, w)]);
        }
    }
    finish(err)
}

fn growth(a: GrowthArgs, rep: &mut Report) -> Result<()> {
    let p = load_pres(&a.pres.pres)?;
    let (ball, err) = partial_ball(&p, a.radius, &budget(&a.budget)?, rep);
    let spheres = ball.sphere_sizes();
    let est = growth_from_spheres::<f64>(&spheres)?;
    rep.comment(format!("presentation: {}", ball.label()));
    rep.comment(format!("estimate: {}", fmt_f64(est.reported)));
    rep.table(est.method, &["radius", "sphere", "ball", "ratio_log"]);
    for (k, (s, t)) in spheres.iter().zip(ball.ball_sizes()).enumerate() {
        let ratio = if k == 0 { "nan".into() } else { fmt_f64(est.ratio_log[k - 1]) };
        rep.row(&[k.to_string(), s.to_string(), t.to_string(), ratio]);
    }
    if let Some(s) = a.s {
        let pr = poincare_from_counts(&spheres, (-s).exp());
        rep.comment(format!("poincare verdict at s = {s}: {:?}", pr.verdict));
        if let Some(x) = pr.extrapolated {
            rep.comment(format!("poincare extrapolated: {}", fmt_f64(x)));
        }
        rep.table(pr.method, &["radius", "partial_sum"]);
        for (k, v) in pr.partial_sums.iter().enumerate() {
            rep.row(&[k.to_string(), fmt_f64(*v)]);
        }
    }
    finish(err)
}

fn floyd(a: FloydArgs, rep: &mut Report) -> Result<()> {
    let p = load_pres(&a.pres.pres)?;
    let gens = p.generators();
    let (x, y, v) = (word(gens, &a.x)?, word(gens, &a.y)?, word(gens, &a.v)?);
    let (lo, hi, method) = if p.is_free() {
        // translate so the basepoint is the identity
        let f = FreeGroup::new(gens.clone())?;
        let (xv, yv) = (f.normal_form(&gens.left_div(&v, &x))?, f.normal_form(&gens.left_div(&v, &y))?);
        let d = tree_floyd_distance(&xv, &yv, &a.lambda);
        (d, d, "exact tree formula: sum of lambda^(-d(v,e)) over the geodesic's edges")
    } else {
        let ball = build_ball(&p, a.radius, &Budget::unlimited())?;
        let iv = floyd_distance(&x, &y, &v, &a.lambda, &ball)?;
        (iv.lo, iv.hi, iv.method)
    };
    rep.table(method, &["x", "y", "v", "lambda", "lo", "hi"]);
    rep.row(&[a.x, a.y, if a.v.is_empty() { "1".into() } else { a.v }, a.lambda.to_string(), fmt_f64(lo), fmt_f64(hi)]);
    Ok(())
}

/// The geometry used for relative computations: the exact free group when
/// the presentation is free, otherwise a finite ball of the given radius.
enum Geom {
    Free(FreeGroup),
    Ball(Ball),
}

fn geometry(p: &Presentation, ball_radius: usize) -> Result<Geom> {
    if p.is_free() {
        Ok(Geom::Free(FreeGroup::new(p.generators().clone())?))
    } else {
        Ok(Geom::Ball(build_ball(p, ball_radius, &Budget::unlimited())?))
    }
}

fn peripherals<G: Geometry>(geom: &G, rel: &RelArgs, bound: usize) -> Result<PeripheralIndex> {
    let s = PeripheralStructure::parse(&rel.peripherals, geom.generators())?;
    let bound = geom.horizon().map_or(bound, |h| h.min(bound));
    Ok(PeripheralIndex::new(geom, &s, bound, 0)?)
}

fn cones(a: ConesArgs, rep: &mut Report) -> Result<()> {
    let p = load_pres(&a.pres.pres)?;
    let reach = a.radius.max(a.cone_radius + a.horizon + a.delta) + 2 * a.c + 4 * a.rel.big_r + a.r + 2;
    match geometry(&p, reach)? {
        Geom::Free(f) => cones_in(&f, &a, reach, rep),
        Geom::Ball(b) => cones_in(&b, &a, reach, rep),
    }
}

fn cones_in<G: Geometry>(geom: &G, a: &ConesArgs, reach: usize, rep: &mut Report) -> Result<()> {
    let idx = peripherals(geom, &a.rel, 2 * reach)?;
    let cls = Classifier::new(geom, &idx, a.rel.eps, a.rel.big_r)?;
    let census = enumerate_types(a.radius, a.c, &cls)?;
    rep.comment(format!(
        "peripherals: {:?}; eps = {}, R = {}, C = {}",
        a.rel.peripherals, a.rel.eps, a.rel.big_r, a.c
    ));
    rep.comment(format!("stabilized: {}", census.stabilized));
    rep.table("partial cone types keyed by transition data on B(1,2R+1) and F_g", &["radius", "types", "cumulative"]);
    for i in 0..census.spheres.len() {
        rep.row(&[census.spheres[i].to_string(), census.per_sphere[i].to_string(), census.cumulative[i].to_string()]);
    }
    let gens = geom.generators();
    rep.table(
        &format!("partial cone annulus counts, r = {}, delta = {}", a.r, a.delta),
        &["g", "n", "members"],
    );
    for k in 0..=a.cone_radius {
        for g in geom.sphere(k)? {
            for n in 1..=a.horizon {
                let m = partial_cone_members(&g, a.r, n, a.delta, &cls)?.len();
                rep.row(&[fmt_word(gens, &g), n.to_string(), m.to_string()]);
            }
        }
    }
    Ok(())
}

fn shadow_table(rep: &mut Report, r: &ShadowLemmaReport, f: &FreeGroup, method: &str) {
    let gens = f.generators();
    rep.comment(format!("r = {}, eps = {}, R = {}", r.r, r.eps, r.big_r));
    rep.comment(format!("ratio range over g != 1: [{}, {}]", r.min_ratio, r.max_ratio));
    rep.comment(format!("horizon stable: {}", r.horizon_stable));
    rep.comment(format!("headroom constant: {}", r.headroom_constant(f)));
    rep.comment(r.note);
    rep.table(method, &["g", "d", "mass_num", "mass_den", "ratio"]);
    for row in &r.rows {
        rep.row(&[
            fmt_word(gens, &row.g),
            row.d.to_string(),
            row.mass.numer().to_string(),
            row.mass.denom().to_string(),
            row.ratio.to_string(),
        ]);
    }
}

fn free_rank(rank: usize) -> Result<FreeGroup> {
    if rank == 0 {
        return Err(usage("--rank must be at least 1"));
    }
    Ok(FreeGroup::of_rank(rank))
}

fn decomposition(
    g: &str,
    a: &ShadowArgs,
    kind: ShadowKind,
    f: &FreeGroup,
    cls: Option<&Classifier<'_, FreeGroup>>,
    rep: &mut Report,
) -> Result<()> {
    let gens = f.generators();
    let d = shadow_decompose(&word(gens, g)?, a.r, kind, f, cls)?;
    rep.comment(format!("target: {}", fmt_word(gens, &d.target)));
    rep.comment(format!("total mass: {}", d.mass(f)?));
    rep.table(
        &format!("exact cylinder decomposition decided by depth {}", d.horizon),
        &["cylinder", "mass_num", "mass_den"],
    );
    for c in &d.cylinders {
        let m = cylinder_mass(c, f)?;
        rep.row(&[fmt_word(gens, c), m.numer().to_string(), m.denom().to_string()]);
    }
    Ok(())
}

fn shadow(a: ShadowArgs, rep: &mut Report) -> Result<()> {
    let f = free_rank(a.rank)?;
    if let Some(g) = &a.g {
        return decomposition(g, &a, ShadowKind::Full, &f, None, rep);
    }
    let r = verify_shadow_lemma(&f, a.radius, a.r)?;
    shadow_table(rep, &r, &f, "exact cylinder masses of the tree boundary measure, ratio = mass*(2k-1)^d");
    Ok(())
}

fn partial_shadow(a: PartialShadowArgs, rep: &mut Report) -> Result<()> {
    let f = free_rank(a.shadow.rank)?;
    let bound = 2 * (a.shadow.radius + a.shadow.r) + 6 * a.rel.big_r + 4;
    let idx = peripherals(&f, &a.rel, bound.max(16))?;
    let cls = Classifier::new(&f, &idx, a.rel.eps, a.rel.big_r)?;
    if let Some(g) = &a.shadow.g {
        return decomposition(g, &a.shadow, ShadowKind::Partial, &f, Some(&cls), rep);
    }
    let r = verify_partial_shadow_lemma(a.shadow.radius, a.shadow.r, &cls)?;
    rep.comment(format!("peripherals: {:?}", a.rel.peripherals));
    shadow_table(rep, &r, &f, "exact cylinder masses of rays with a transition point in B(g,2R)");
    Ok(())
}

fn quotient(a: QuotientArgs, rep: &mut Report) -> Result<()> {
    let p = load_pres(&a.pres.pres)?;
    let gens = p.generators();
    let h = word(gens, &a.h)?;
    let b = budget(&a.budget)?;
    let (free, mut err) = partial_ball(&p, a.radius, &b, rep);
    let free_spheres = free.sphere_sizes();
    let mut ns = a.n.clone();
    ns.sort_unstable();
    ns.dedup();
    rep.comment(format!("h = {}", fmt_word(gens, &h)));
    let mut rows = Vec::new();
    for &n in &ns {
        let q = make_power_quotient(&p, &h, n)?;
        rep.comment(format!("n = {n}: relator root^{}, girth bound {}", q.exponent, q.girth_bound));
        let (ball, e) = Ball::build_partial(q.quotient.oracle(), free.radius(), &b);
        if let Some(e) = e {
            rep.comment(format!("partial: n = {n}: {e}; rows cover radius {}", ball.radius()));
            err.get_or_insert(e);
        }
        rows.push((n.to_string(), ball.sphere_sizes()));
    }
    rows.push(("inf".into(), free_spheres.clone()));
    rep.table(
        "exact quotient balls; collapse = free sphere minus quotient sphere; estimate = ln(#S_k/#S_(k-1))",
        &["n", "radius", "sphere", "collapse", "estimate"],
    );
    for (n, spheres) in rows {
        for (k, s) in spheres.iter().enumerate() {
            let est = if k == 0 || spheres[k - 1] == 0 {
                "nan".into()
            } else {
                fmt_f64((*s as f64 / spheres[k - 1] as f64).ln())
            };
            let collapse = free_spheres[k] as i64 - *s as i64;
            rep.row(&[n.clone(), k.to_string(), s.to_string(), collapse.to_string(), est]);
        }
    }
    finish(err)
}

fn filter(a: FilterArgs, rep: &mut Report) -> Result<()> {
    let p = load_pres(&a.pres.pres)?;
    if !p.is_free() {
        return Err(usage("filter needs a free presentation"));
    }
    let f = FreeGroup::new(p.generators().clone())?;
    let gens = p.generators();
    let h = word(gens, &a.h)?;
    let q = a.n.map(|n| make_power_quotient(&p, &h, n)).transpose()?;
    let mut sizes = 0;
    for k in 0..=a.radius {
        sizes += f.sphere(k)?.len();
    }
    let mut cols = vec!["L", "eps", "radius", "ball", "kept"];
    if q.is_some() {
        cols.extend(["pairs", "collisions"]);
    }
    rep.table(
        "kept = elements of B(1,radius) none of whose geodesics eps-contains a root power longer than L",
        &cols,
    );
    for &l in &a.l {
        for &eps in &a.eps {
            let filt = ContainmentFilter::new(&h, l, eps)?;
            let kept = language_filter(a.radius, &filt, &f)?;
            let mut row = vec![l.to_string(), eps.to_string(), a.radius.to_string(), sizes.to_string(), kept.len().to_string()];
            if let Some(q) = &q {
                let inj = injectivity_check(&kept, q)?;
                row.push(inj.pairs.to_string());
                row.push(inj.collisions.len().to_string());
            }
            rep.row(&row);
        }
    }
    Ok(())
}

fn tree(a: TreeArgs, rep: &mut Report) -> Result<()> {
    let p = load_pres(&a.pres.pres)?;
    let reach = a.depth * (a.r + a.delta) + a.r + a.delta + 4 * a.rel.big_r + 1;
    match geometry(&p, reach)? {
        Geom::Free(f) => {
            let gamma = ((2 * f.rank() - 1) as f64).ln();
            tree_in(&f, &a, reach, gamma, rep)
        }
        Geom::Ball(b) => {
            let gamma = growth_from_spheres::<f64>(&b.sphere_sizes())?.reported;
            tree_in(&b, &a, reach, gamma, rep)
        }
    }
}

fn tree_in<G: Geometry>(geom: &G, a: &TreeArgs, reach: usize, gamma: f64, rep: &mut Report) -> Result<()> {
    let idx = peripherals(geom, &a.rel, 2 * reach)?;
    let cls = Classifier::new(geom, &idx, a.rel.eps, a.rel.big_r)?;
    let cfg = TreeConfig {
        r: a.r,
        delta: a.delta,
        target_branching: (a.target > 0).then_some(a.target),
    };
    let t = build_tree(cfg, a.depth, &cls)?;
    let rep_t = verify_tree(&t, gamma, &cls)?;
    let opt = |x: Option<f64>| x.map_or("none".to_string(), fmt_f64);
    rep.comment(format!("peripherals: {:?}; eps = {}, R = {}", a.rel.peripherals, a.rel.eps, a.rel.big_r));
    rep.comment(format!("vertices: {}", rep_t.vertices));
    rep.comment(format!("spacing: {} (bound {}, ok {})", rep_t.spacing, rep_t.spacing_bound, rep_t.spacing_ok));
    rep.comment(format!("rate bound: {}", opt(rep_t.rate_bound)));
    rep.comment(format!("empirical slope: {}", opt(rep_t.empirical_slope)));
    rep.comment(format!("kappa (gamma_hat = {}): {}", fmt_f64(gamma), opt(rep_t.kappa)));
    rep.comment(rep_t.note);
    rep.table("transitional tree built level by level from partial lexi-cone annuli", &["level", "vertices"]);
    for (i, n) in rep_t.levels.iter().enumerate() {
        rep.row(&[i.to_string(), n.to_string()]);
    }
    let json = t.to_json();
    match &a.json {
        Some(path) => std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))?,
        None => {
            rep.comment("json:");
            for line in json.lines() {
                rep.comment(line);
            }
        }
    }
    Ok(())
}

fn verify(rep: &mut Report) -> Result<()> {
    let results = verify_all(&bundled())?;
    rep.table("invariant suites on the bundled presentations", &["check", "presentation", "cases", "skipped", "failures"]);
    let mut failed = 0;
    for r in &results {
        rep.row(&[
            r.check.to_string(),
            r.presentation.clone(),
            r.cases.to_string(),
            r.skipped.to_string(),
            r.failure_count.to_string(),
        ]);
        for f in &r.failures {
            rep.comment(format!("{} on {}: {f}", r.check, r.presentation));
        }
        failed += usize::from(!r.passed());
    }
    if failed > 0 {
        return Err(ChecksFailed(format!("{failed} of {} checks failed", results.len())).into());
    }
    Ok(())
}
