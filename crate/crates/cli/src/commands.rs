use std::fmt::Write as _;

use zaklab_core::mollifier::derivative_norm;
use zaklab_core::{
    build_mollifier, dilate, gamma_constant, identity_residuals, jump_set, l2_norm, lemma1_search,
    lemma3_set, probe_sweep, riesz_bounds, sample_function, sharpness_sweep, smoothing_difference,
    uncertainty_functional, winding_number, zak_transform, zak_transform_padded, ArgumentBranch,
    BoundConvention, CheckMode, Error, Family, Generator, GridSpec, Mode, PlaneFunction, Rectangle,
    SampledFunction, TailReport,
};

use crate::args::{
    Common, ConventionArg, GammaArgs, IdentitiesArgs, Lemma1Args, Lemma3Args, ModeArg, PlaneArgs,
    ProbeArgs, SharpnessArgs, TailsArgs, ZakArgs,
};
use crate::output::{pgm, real, short, Report, Table};

pub enum Failure {
    Invalid(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_precondition() {
            Failure::Precondition(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Invalid(s)
    }
}

type Run = Result<(), Failure>;

fn list(s: &str, sep: char) -> Result<Vec<f64>, Failure> {
    s.split(sep)
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Invalid(format!("cannot parse `{t}` as a number")))
        })
        .collect()
}

fn usizes(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Failure::Invalid(format!("cannot parse `{t}` as a count")))
        })
        .collect()
}

/// One value broadcasts to every axis; otherwise one value per axis.
fn rectangle(s: &str, d: usize) -> Result<Rectangle, Failure> {
    let v = list(s, ':')?;
    let v = match v.len() {
        1 => vec![v[0]; d],
        n if n == d => v,
        n => {
            return Err(Failure::Invalid(format!(
                "rectangle `{s}` has {n} half-widths for dimension {d}"
            )))
        }
    };
    Ok(Rectangle::new(v)?)
}

fn generator(c: &Common) -> Result<Generator, Failure> {
    let mut g = Generator::from_name(&c.family)?;
    if let Some(seed) = c.seed {
        if !matches!(g.family, Family::Synthetic { .. }) {
            return Err(Failure::Invalid(
                "--seed applies to the synthetic family only".into(),
            ));
        }
        g.family = Family::Synthetic { seed };
    }
    if let Some(width) = c.width {
        if !matches!(g.family, Family::Gaussian { .. }) {
            return Err(Failure::Invalid(
                "--width applies to the gaussian family only".into(),
            ));
        }
        g.family = Family::Gaussian { width };
    }
    if let Some(a) = c.amplitude {
        g = g.with_amplitude(a);
    }
    if let Some(m) = &c.modulation {
        g = g.modulated(list(m, ',')?);
    }
    if let Some(t) = &c.translation {
        g = g.translated(list(t, ',')?);
    }
    Ok(g)
}

fn sample(c: &Common, q: usize, m: usize) -> Result<SampledFunction, Failure> {
    let grid = GridSpec::new(c.d, q, m)?;
    Ok(sample_function(&generator(c)?, &grid)?)
}

fn mode(c: &Common) -> Mode {
    match c.mode {
        ModeArg::Strict => Mode::Strict,
        ModeArg::Advisory => Mode::Advisory,
    }
}

pub fn zak(args: &ZakArgs, rep: &mut Report) -> Run {
    let c = &args.common;
    let (q, m) = (c.q.unwrap_or(64), c.m.unwrap_or(8));
    let f = sample(c, q, m)?;
    let z = match args.n {
        Some(n) => zak_transform_padded(&f, n)?,
        None => zak_transform(&f)?,
    };
    let norm = l2_norm(&f);
    let gap = if norm > 0.0 {
        (z.l2_norm() - norm).abs() / norm
    } else {
        z.l2_norm()
    };
    let gaussian = matches!(generator(c)?.family, Family::Gaussian { .. });
    let tol = args.tol.unwrap_or(if gaussian { 1e-3 } else { 1e-6 });
    let padded = z.frequency_resolution() != 2 * m;

    let d = c.d;
    let mut header: Vec<String> = (1..=d).map(|i| format!("a{i}")).collect();
    header.extend((1..=d).map(|i| format!("b{i}")));
    header.extend(["re".into(), "im".into()]);
    let mut table = Table::new(header);
    let (mut a, mut b) = (vec![0usize; d], vec![0usize; d]);
    for (flat, v) in z.values().iter().enumerate() {
        z.node_of(flat, &mut a, &mut b);
        let mut row: Vec<String> = a.iter().chain(&b).map(|i| i.to_string()).collect();
        row.extend([real(v.re), real(v.im)]);
        table.push(row);
    }
    rep.artifact("zak.csv", table.render().as_bytes())?;

    println!("norm g = {}", short(norm));
    println!("norm Zg = {}", short(z.l2_norm()));
    if padded {
        println!(
            "padded frequency resolution {}: unitarity is not expected",
            z.frequency_resolution()
        );
    }
    println!("relative gap = {gap:.3e} (tolerance {tol:e})");
    rep.pass = padded || gap <= tol;
    rep.metric("relative_norm_gap", gap);
    rep.metric("tolerance", tol);
    rep.metric("nodes", z.len());
    Ok(())
}

pub fn riesz(c: &Common, rep: &mut Report) -> Run {
    let f = sample(c, c.q.unwrap_or(64), c.m.unwrap_or(8))?;
    let b = riesz_bounds(&zak_transform(&f)?);
    println!("A={} B={} riesz={}", short(b.a), short(b.b), b.is_riesz);
    if let Some(w) = &b.zero_witness {
        let pts: Vec<String> = w.iter().map(|v| short(*v)).collect();
        println!("zero_witness=({})", pts.join(", "));
        rep.metric("zero_witness", w.clone());
    }
    rep.pass = b.a <= b.b && b.is_riesz == b.zero_witness.is_none();
    rep.metric("A", b.a);
    rep.metric("B", b.b);
    rep.metric("riesz", b.is_riesz);
    Ok(())
}

pub fn identities(args: &IdentitiesArgs, rep: &mut Report) -> Run {
    let c = &args.common;
    let f = sample(c, c.q.unwrap_or(64), c.m.unwrap_or(8))?;
    let kernel = match args.p3_r {
        Some(r) => {
            let m = build_mollifier(f.grid())?;
            Some(
                dilate(
                    &m,
                    &rectangle(&r.to_string(), c.d)?,
                    &Rectangle::cube(c.d, 1.0)?,
                )?
                .phi,
            )
        }
        None => None,
    };
    let res = identity_residuals(&f, kernel.as_ref())?;
    println!("r_qp = {:e}", res.qp);
    println!("r_zf = {:e}", res.zf);
    let mut pass = res.qp == 0.0 && res.zf <= args.tol_zf;
    if let Some(p3) = res.p3 {
        println!("r_p3 = {p3:e}");
        pass &= p3 <= args.tol_p3;
        rep.metric("r_p3", p3);
    }
    rep.pass = pass;
    rep.metric("r_qp", res.qp);
    rep.metric("r_zf", res.zf);
    Ok(())
}

/// Zak transform of the generator on a `Q × ny` plane.
fn plane(args: &PlaneArgs, default_q: usize) -> Result<(PlaneFunction, f64, usize), Failure> {
    let c = &args.common;
    if c.d != 1 {
        return Err(Failure::Invalid("plane computations need d = 1".into()));
    }
    let q = c.q.unwrap_or(default_q);
    let ny = args.ny.unwrap_or(64 * args.n);
    let f = sample(c, q, c.m.unwrap_or(8))?;
    let z = zak_transform_padded(&f, ny)?;
    let b = riesz_bounds(&z);
    Ok((PlaneFunction::from_zak(&z)?, b.a, ny))
}

pub fn winding(args: &PlaneArgs, rep: &mut Report) -> Run {
    let (g, _, ny) = plane(args, args.common.q.unwrap_or(64))?;
    let w = winding_number(&g)?;
    println!("{w}");
    rep.pass = w == 1;
    rep.metric("winding", w);
    rep.metric("y_resolution", ny);
    Ok(())
}

pub fn lemma1(args: &Lemma1Args, rep: &mut Report) -> Run {
    let p = &args.plane;
    let (g, _, _) = plane(p, 64 * p.k)?;
    let h = ArgumentBranch::from_plane(&g, args.base_a, args.base_b, p.k, p.n)?;
    match lemma1_search(&h) {
        Ok(cert) => {
            println!(
                "i={} j={} direction={:?} gap={}",
                cert.i,
                cert.j,
                cert.direction,
                short(cert.gap)
            );
            rep.pass = cert.gap > 0.125;
            rep.metric("i", cert.i);
            rep.metric("j", cert.j);
            rep.metric("direction", format!("{:?}", cert.direction).to_lowercase());
            rep.metric("gap", cert.gap);
        }
        Err(Error::NoWitness { min_max_distance }) => {
            println!(
                "no witness; smallest worst-case distance {}",
                short(min_max_distance)
            );
            rep.pass = false;
            rep.metric("min_max_distance", min_max_distance);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

pub fn jumpset(args: &PlaneArgs, rep: &mut Report) -> Run {
    let (g, riesz_a, ny) = plane(args, 64 * args.k)?;
    let check = if args.common.mode == ModeArg::Strict {
        CheckMode::Strict
    } else {
        CheckMode::Diagnostic
    };
    if check == CheckMode::Strict && riesz_a <= 0.0 {
        return Err(Failure::Precondition(
            "Zak transform vanishes; not a Riesz generator".into(),
        ));
    }
    let s = jump_set(&g, args.k, args.n, riesz_a.sqrt(), check)?;
    let mut table = Table::new([
        "k",
        "n",
        "threshold",
        "estimated_measure",
        "lower_bound",
        "pass",
    ]);
    table.push(vec![
        args.k.to_string(),
        args.n.to_string(),
        real(s.threshold),
        real(s.estimated_measure),
        real(s.lower_bound),
        s.bound_holds.to_string(),
    ]);
    print!("{}", table.render());
    rep.artifact("jumpset.csv", table.render().as_bytes())?;
    rep.artifact(
        "jumpset.pgm",
        &pgm(s.y_resolution(), s.x_resolution(), s.mask()),
    )?;
    println!(
        "measure={} bound={} pass={}",
        short(s.estimated_measure),
        short(s.lower_bound),
        s.bound_holds
    );
    rep.pass = s.bound_holds;
    rep.metric("estimated_measure", s.estimated_measure);
    rep.metric("lower_bound", s.lower_bound);
    rep.metric("y_resolution", ny);
    Ok(())
}

pub fn lemma3(args: &Lemma3Args, rep: &mut Report) -> Run {
    let c = &args.common;
    let f = sample(c, c.q.unwrap_or(4096), c.m.unwrap_or(8))?;
    let convention = match args.convention {
        ConventionArg::Squared => BoundConvention::Squared,
        ConventionArg::Modulus => BoundConvention::Modulus,
    };
    let rb = riesz_bounds(&zak_transform(&f)?);
    if c.mode == ModeArg::Strict && !rb.is_riesz {
        return Err(Error::NotRiesz { lower: rb.a }.into());
    }
    let (default_a, default_b) = match convention {
        BoundConvention::Squared => (rb.a, rb.b),
        BoundConvention::Modulus => (rb.a.sqrt(), rb.b.sqrt()),
    };
    let (a, b) = (args.a.unwrap_or(default_a), args.b.unwrap_or(default_b));
    let m = build_mollifier(f.grid())?;
    let pair = dilate(&m, &rectangle(&args.r, c.d)?, &rectangle(&args.l, c.d)?)?;
    let set = lemma3_set(&f, &pair, a, b, args.axis, convention)?;
    let smooth = smoothing_difference(&f, &pair, a, b, args.axis, convention)?;

    let mut table = Table::new([
        "axis",
        "k",
        "n",
        "estimated_measure",
        "phi_measure",
        "psi_measure",
        "bound_squared",
        "bound_linear",
        "asserted_bound",
        "smoothing_difference",
        "smoothing_bound",
        "convention",
        "pass",
    ]);
    let pass = set.holds && smooth.holds;
    table.push(vec![
        args.axis.to_string(),
        set.k.to_string(),
        set.n.to_string(),
        real(set.set.estimated_measure),
        real(set.phi_measure),
        real(set.psi_measure),
        real(set.bound_squared),
        real(set.bound_linear),
        real(set.asserted_bound),
        real(smooth.max_difference),
        real(smooth.bound),
        format!("{:?}", convention).to_lowercase(),
        pass.to_string(),
    ]);
    print!("{}", table.render());
    rep.artifact("lemma3.csv", table.render().as_bytes())?;
    rep.artifact(
        "lemma3.pgm",
        &pgm(
            set.set.y_resolution(),
            set.set.x_resolution(),
            set.set.mask(),
        ),
    )?;
    rep.pass = pass;
    rep.metric("estimated_measure", set.set.estimated_measure);
    rep.metric("asserted_bound", set.asserted_bound);
    rep.metric("smoothing_difference", smooth.max_difference);
    rep.metric("smoothing_bound", smooth.bound);
    rep.metric("k", set.k);
    Ok(())
}

fn tail_table(d: usize) -> Table {
    let mut header = vec!["d".to_string()];
    header.extend((1..=d).map(|i| format!("R{i}")));
    header.extend((1..=d).map(|i| format!("L{i}")));
    header.extend(
        [
            "space_tail",
            "freq_tail",
            "total",
            "best_axis",
            "bound",
            "ratio",
        ]
        .map(String::from),
    );
    Table::new(header)
}

fn tail_row(d: usize, t: &TailReport) -> Vec<String> {
    let mut row = vec![d.to_string()];
    row.extend(t.r.iter().chain(&t.l).map(|v| real(*v)));
    row.extend([
        real(t.space_tail),
        real(t.freq_tail),
        real(t.total),
        t.best_axis.to_string(),
        real(t.best_bound),
        real(t.ratio()),
    ]);
    row
}

fn warn(warnings: &[String]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

pub fn tails(args: &TailsArgs, rep: &mut Report) -> Run {
    let c = &args.common;
    let f = sample(c, c.q.unwrap_or(64), c.m.unwrap_or(8))?;
    let bounds = riesz_bounds(&zak_transform(&f)?);
    let gamma = gamma_constant(c.d, f.grid().samples_per_unit())?;
    let t = uncertainty_functional(
        &f,
        &rectangle(&args.r, c.d)?,
        &rectangle(&args.l, c.d)?,
        &bounds,
        gamma,
        mode(c),
    )?;
    warn(&t.warnings);
    let mut table = tail_table(c.d);
    table.push(tail_row(c.d, &t));
    print!("{}", table.render());
    rep.artifact("tails.csv", table.render().as_bytes())?;
    rep.pass = !t.riesz || t.holds;
    rep.metric("total", t.total);
    rep.metric("bound", t.best_bound);
    rep.metric("constant_c", t.constant_c);
    rep.metric("riesz", t.riesz);
    Ok(())
}

pub fn probe(args: &ProbeArgs, rep: &mut Report) -> Run {
    let c = &args.common;
    let f = sample(c, c.q.unwrap_or(64), c.m.unwrap_or(8))?;
    let bounds = riesz_bounds(&zak_transform(&f)?);
    let gamma = gamma_constant(c.d, f.grid().samples_per_unit())?;
    let rects = |s: &str| {
        s.split(',')
            .map(|r| rectangle(r, c.d))
            .collect::<Result<Vec<_>, _>>()
    };
    let sweep = probe_sweep(
        &f,
        &rects(&args.r_list)?,
        &rects(&args.l_list)?,
        &bounds,
        gamma,
        mode(c),
    )?;
    let mut table = tail_table(c.d);
    for row in &sweep.rows {
        table.push(tail_row(c.d, row));
    }
    if let Some(first) = sweep.rows.first() {
        warn(&first.warnings);
    }
    print!("{}", table.render());
    rep.artifact("probe.csv", table.render().as_bytes())?;
    rep.pass = !bounds.is_riesz || sweep.min_ratio >= 1.0;
    rep.metric("rows", sweep.rows.len());
    rep.metric("min_ratio", sweep.min_ratio);
    rep.metric("riesz", bounds.is_riesz);
    Ok(())
}

pub fn sharpness(args: &SharpnessArgs, rep: &mut Report) -> Run {
    let c = &args.common;
    let r_values = list(&args.r_values, ',')?;
    let f = if args.measured {
        let mut line = c.clone();
        line.d = 1;
        Some(sample(&line, c.q.unwrap_or(64), c.m.unwrap_or(8))?)
    } else {
        None
    };
    let rows = sharpness_sweep(f.as_ref(), c.d, &r_values)?;
    let mut table = Table::new([
        "d",
        "R",
        "L",
        "model_value",
        "cap_3d_over_R2",
        "measured_total",
        "generator_id",
    ]);
    let id = if args.measured {
        c.family.clone()
    } else {
        "model".to_string()
    };
    for row in &rows {
        table.push(vec![
            row.d.to_string(),
            real(row.r),
            real(row.l),
            real(row.model),
            real(row.cap),
            row.measured.map(real).unwrap_or_default(),
            id.clone(),
        ]);
    }
    print!("{}", table.render());
    rep.artifact("sharpness.csv", table.render().as_bytes())?;
    rep.pass = rows.iter().all(|r| r.model_within_cap);
    rep.metric("rows", rows.len());
    rep.metric(
        "max_model_over_cap",
        rows.iter().map(|r| r.model / r.cap).fold(0.0, f64::max),
    );
    Ok(())
}

pub fn gamma(args: &GammaArgs, rep: &mut Report) -> Run {
    let dims = usizes(&args.dims)?;
    let res = usizes(&args.resolutions)?;
    let mut text = String::from("# d samples_per_unit gamma\n");
    let mut worst: f64 = 0.0;
    for &d in &dims {
        let mut first = None;
        for &q in &res {
            let g = gamma_constant(d, q)?;
            writeln!(text, "{d} {q} {g:.12}").unwrap();
            let base = *first.get_or_insert(g);
            worst = worst.max(((g - base) / base).abs());
            let doubled = derivative_norm(d, q, 2.0)?;
            worst = worst.max((doubled / (2.0 * g) - 1.0).abs());
        }
    }
    print!("{text}");
    rep.artifact("gamma.txt", text.as_bytes())?;
    rep.pass = worst < 1e-4;
    rep.metric("max_relative_spread", worst);
    Ok(())
}

pub fn new_report(
    name: &'static str,
    c: Option<&Common>,
    out: Option<std::path::PathBuf>,
) -> Report {
    match c {
        Some(c) => {
            let mut r = Report::new(name, c.out.clone());
            r.metric("family", c.family.clone());
            r
        }
        None => Report::new(name, out),
    }
}
