//! `ge`: generalized ellipsoids from the command line. Results go to stdout
//! as JSON; figures go to the paths given with `--svg` / `--csv`.

mod figure;
mod io;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use serde_json::{json, Value};

use ge_core::apps::{
    contraction_certificate, contraction_sample_check, fit_cov_curve, least_squares, portfolio_baseline, portfolio_ge,
    rdo_inner, rdo_outer_sample, robust_regress, synth_covariance_demo, worst_case_residual, worst_case_variance,
    CovSamples, RdoInstance, RdoOutcome, RegressInstance, DEMO_SEED,
};
use ge_core::exact_rep::{from_polytope, from_semiellipsoids};
use ge_core::genellipsoid::GenEllipsoid;
use ge_core::polymat::{matrix_from_json, polymat_to_json};
use ge_core::recognition::recognize;
use ge_core::scalar::{parse_rational, rationalize};
use ge_core::sdp::{ge_distance, ge_distance_problem, minimize_over_ge, minimize_over_ge_problem, ConicProblem};
use ge_core::simplex_tour::{build_tour, verify_tour};
use ge_core::{PolyMat, Rational, Scalar, ScalarField, UniPoly};

use figure::{Figure, Series};
use io::{parse_list, print_json, read_csv, read_json, read_polymat, write_text, CliError, CliResult};

#[derive(Parser)]
#[command(name = "ge", version, about = "Generalized ellipsoids: recognition, norms, constructions and SDP drivers")]
struct Cli {
    /// Exact rational arithmetic (overrides GE_SCALAR_MODE)
    #[arg(long, global = true, conflicts_with = "float")]
    exact: bool,
    /// Double precision arithmetic (overrides GE_SCALAR_MODE)
    #[arg(long, global = true)]
    float: bool,
    /// Indented JSON
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FigureOut {
    /// SVG rendering
    #[arg(long)]
    svg: Option<PathBuf>,
    /// CSV twin of the figure
    #[arg(long)]
    csv: Option<PathBuf>,
}

impl FigureOut {
    fn wanted(&self) -> bool {
        self.svg.is_some() || self.csv.is_some()
    }

    fn emit(&self, f: &Figure) -> CliResult<()> {
        f.emit(self.svg.as_deref(), self.csv.as_deref())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check the psd and kernel conditions (exit 2: psd fails, 3: kernel fails)
    Recognize { polymat: PathBuf },
    /// max over t of sqrt((x - c)^T P(t) (x - c))
    Norm {
        polymat: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
    },
    /// Membership of a point
    Member {
        polymat: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
    },
    /// Boundary curve of a planar set
    Plot {
        polymat: PathBuf,
        #[arg(long, default_value_t = 512)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Polynomial tour of the simplex
    Tour {
        #[arg(long)]
        m: usize,
        /// also write the JSON result here
        #[arg(long)]
        json: Option<PathBuf>,
        /// grid size for the curve figure
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Exact representation of an ellipsoid intersection or symmetric polytope
    Represent {
        /// JSON list of psd matrices
        #[arg(long, conflicts_with = "polytope", required_unless_present = "polytope")]
        ellipsoids: Option<PathBuf>,
        /// CSV with one row h per facet pair |h^T x| <= 1
        #[arg(long)]
        polytope: Option<PathBuf>,
    },
    /// Euclidean distance between two sets
    Distance {
        p1: PathBuf,
        p2: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        c1: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c2: Option<String>,
        /// write the conic program as JSON
        #[arg(long)]
        dump_problem: Option<PathBuf>,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Minimize a linear function over a set
    Minimize {
        polymat: PathBuf,
        /// CSV with one row of objective coefficients
        #[arg(long)]
        obj: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        center: Option<String>,
        #[arg(long)]
        dump_problem: Option<PathBuf>,
    },
    /// Minimum worst-case variance portfolios
    Portfolio {
        /// JSON with `times` and `mats`
        #[arg(long, required_unless_present = "demo")]
        samples: Option<PathBuf>,
        /// use the synthetic ten-asset demo instead of a file
        #[arg(long, conflicts_with = "samples")]
        demo: bool,
        #[arg(long, default_value_t = DEMO_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// report every degree from 0 up to --degree
        #[arg(long)]
        ladder: bool,
        /// write the demo samples as JSON
        #[arg(long)]
        write_samples: Option<PathBuf>,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Inner approximation for an uncertain linear system in a polytope (exit 4: infeasible)
    Rdo {
        #[arg(long = "H", required_unless_present = "example")]
        h: Option<PathBuf>,
        #[arg(long = "Ahat", required_unless_present = "example")]
        a_hat: Option<PathBuf>,
        #[arg(long = "Acheck", required_unless_present = "example")]
        a_check: Option<PathBuf>,
        /// the built-in planar two-mode instance
        #[arg(long, conflicts_with_all = ["h", "a_hat", "a_check"])]
        example: bool,
        #[arg(long, default_value_t = 2)]
        degree: usize,
        /// horizon of the sampled outer approximation
        #[arg(long)]
        outer: Option<usize>,
        /// number of sampled segment points for --outer
        #[arg(long, default_value_t = 21)]
        grid: usize,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Shift-robust polynomial regression
    Regress {
        /// CSV with columns x,y
        #[arg(long, required_unless_present = "runge")]
        data: Option<PathBuf>,
        /// equispaced samples of 1/(1+25x^2) instead of a file
        #[arg(long, conflicts_with = "data")]
        runge: Option<usize>,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        eps: f64,
        #[command(flatten)]
        fig: FigureOut,
    },
    /// Contraction checks for a finite matrix set
    Contract {
        #[arg(long = "P")]
        p: PathBuf,
        /// JSON list of square matrices
        #[arg(long)]
        mats: PathBuf,
        /// JSON list of reindexing polynomials (ascending coefficients), one per matrix
        #[arg(long)]
        reindex: Option<PathBuf>,
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn scalar_field(cli: &Cli) -> CliResult<ScalarField> {
    if cli.exact {
        return Ok(ScalarField::ExactRational);
    }
    if cli.float {
        return Ok(ScalarField::Float64);
    }
    match std::env::var("GE_SCALAR_MODE") {
        Ok(v) => ScalarField::parse(&v).ok_or_else(|| CliError::Usage(format!("GE_SCALAR_MODE={v:?} is not exact or float"))),
        Err(_) => Ok(ScalarField::Float64),
    }
}

fn field_name(f: ScalarField) -> &'static str {
    match f {
        ScalarField::ExactRational => "exact",
        ScalarField::Float64 => "float",
    }
}

fn center_arg(c: &Option<String>) -> CliResult<Option<Vec<f64>>> {
    c.as_deref().map(parse_list).transpose()
}

fn load_ge<S: Scalar>(path: &Path, center: &Option<String>) -> CliResult<GenEllipsoid> {
    let p: PolyMat<S> = read_polymat(path)?;
    Ok(GenEllipsoid::new(&p, center_arg(center)?)?)
}

fn load_ge_in(field: ScalarField, path: &Path, center: &Option<String>) -> CliResult<GenEllipsoid> {
    match field {
        ScalarField::ExactRational => load_ge::<Rational>(path, center),
        ScalarField::Float64 => load_ge::<f64>(path, center),
    }
}

fn dump(problem: impl FnOnce() -> ge_core::Result<ConicProblem>, path: &Option<PathBuf>) -> CliResult<()> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(&problem()?.to_debug_json()).map_err(|e| CliError::Io(e.to_string()))?;
        write_text(p, &(text + "\n"))?;
    }
    Ok(())
}

fn matrix(rows: Vec<Vec<f64>>) -> CliResult<DMatrix<f64>> {
    Ok(ge_core::apps::to_dmatrix(&rows)?)
}

/// Vertices of `{x : a^T x <= 1}` in the plane, by clipping a large square.
fn halfspace_polygon(rows: &[Vec<f64>]) -> Vec<[f64; 2]> {
    let r = 1e3;
    let mut poly = vec![[-r, -r], [r, -r], [r, r], [-r, r]];
    for a in rows {
        if a[0] == 0.0 && a[1] == 0.0 {
            continue;
        }
        let f = |p: &[f64; 2]| a[0] * p[0] + a[1] * p[1] - 1.0;
        let mut next = Vec::new();
        for i in 0..poly.len() {
            let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
            let (fp, fq) = (f(&p), f(&q));
            if fp <= 0.0 {
                next.push(p);
            }
            if (fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0) {
                let s = fp / (fp - fq);
                next.push([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]);
            }
        }
        poly = next;
        if poly.is_empty() {
            break;
        }
    }
    poly
}

fn grid(k: usize) -> Vec<f64> {
    (0..k).map(|i| -1.0 + 2.0 * i as f64 / (k - 1).max(1) as f64).collect()
}

fn run(cli: &Cli) -> CliResult<(Value, i32)> {
    let field = scalar_field(cli)?;
    match &cli.command {
        Command::Recognize { polymat } => {
            let report = match field {
                ScalarField::ExactRational => recognize(&read_polymat::<Rational>(polymat)?)?,
                ScalarField::Float64 => recognize(&read_polymat::<f64>(polymat)?)?,
            };
            let code = if !report.psd_on_interval {
                io::EXIT_PSD_FAILS
            } else if !report.kernel_condition {
                io::EXIT_KERNEL_FAILS
            } else {
                io::EXIT_OK
            };
            let mut v = serde_json::to_value(&report).map_err(|e| CliError::Io(e.to_string()))?;
            v["is_ge"] = json!(report.is_ge());
            v["field"] = json!(field_name(field));
            Ok((v, code))
        }
        Command::Norm { polymat, x, center } => {
            let e = load_ge_in(field, polymat, center)?;
            let g = e.gauge(&parse_list(x)?)?;
            Ok((json!({ "norm": g.value, "squared": g.value * g.value, "t_star": g.t_star }), io::EXIT_OK))
        }
        Command::Member { polymat, x, center } => {
            let e = load_ge_in(field, polymat, center)?;
            let (inside, gauge) = match field {
                ScalarField::ExactRational => {
                    let xs: Vec<Rational> = x.split(',').map(parse_rational).collect::<ge_core::Result<_>>()?;
                    let xf: Vec<f64> = xs.iter().map(|v| v.to_f64()).collect();
                    (e.contains_exact(&xs)?, e.gauge(&xf)?.value)
                }
                ScalarField::Float64 => {
                    let xs = parse_list(x)?;
                    (e.contains(&xs)?, e.gauge(&xs)?.value)
                }
            };
            Ok((json!({ "inside": inside, "norm": gauge, "field": field_name(field) }), io::EXIT_OK))
        }
        Command::Plot { polymat, k, center, fig } => {
            let e = load_ge_in(field, polymat, center)?;
            let pts = e.boundary_polyline(*k)?;
            fig.emit(&Figure {
                title: format!("boundary of {}", polymat.display()),
                series: vec![Series::closed("boundary", pts.clone())],
            })?;
            Ok((json!({ "k": k, "center": e.center(), "boundary": pts }), io::EXIT_OK))
        }
        Command::Tour { m, json: out, grid: k, fig } => {
            let tour = build_tour(*m, field)?;
            let report = verify_tour(&tour)?;
            let mut v = json!({
                "m": m,
                "field": field_name(tour.field),
                "nodes": tour.nodes,
                "max_degree": tour.max_degree(),
                "polynomials": tour.polys.iter().map(|p| p.coeffs().to_vec()).collect::<Vec<_>>(),
                "report": report,
            });
            if tour.field == ScalarField::ExactRational {
                v["exact_polynomials"] = json!(tour
                    .exact
                    .iter()
                    .map(|p| p.coeffs().iter().map(ge_core::scalar::format_rational).collect::<Vec<_>>())
                    .collect::<Vec<_>>());
            }
            if let Some(path) = out {
                write_text(path, &(serde_json::to_string_pretty(&v).map_err(|e| CliError::Io(e.to_string()))? + "\n"))?;
            }
            if fig.wanted() {
                // include the nodes so every curve reaches its peak on the grid
                let mut ts = grid(*k);
                ts.extend(&tour.nodes);
                ts.sort_by(f64::total_cmp);
                ts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
                let series = tour
                    .polys
                    .iter()
                    .enumerate()
                    .map(|(i, p)| Series::open(format!("p{}", i + 1), ts.iter().map(|t| [*t, p.eval(t)]).collect()))
                    .collect();
                fig.emit(&Figure { title: format!("simplex tour, m = {m}"), series })?;
            }
            let code = if report.passed() { io::EXIT_OK } else { io::EXIT_NUMERICAL };
            Ok((v, code))
        }
        Command::Represent { ellipsoids, polytope } => {
            let e = if let Some(path) = ellipsoids {
                let v = read_json(path)?;
                let list = v.as_array().ok_or_else(|| CliError::Usage("expected a JSON list of matrices".into()))?;
                match field {
                    ScalarField::ExactRational => {
                        let mats = list.iter().map(matrix_from_json::<Rational>).collect::<ge_core::Result<Vec<_>>>()?;
                        from_semiellipsoids(&mats)?
                    }
                    ScalarField::Float64 => {
                        let mats = list.iter().map(matrix_from_json::<f64>).collect::<ge_core::Result<Vec<_>>>()?;
                        from_semiellipsoids(&mats)?
                    }
                }
            } else {
                let rows = read_csv(polytope.as_ref().expect("clap requires one input"))?;
                let exact: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|v| rationalize(*v)).collect()).collect();
                from_polytope(&exact)?
            };
            let v = match field {
                ScalarField::ExactRational => serde_json::to_value(polymat_to_json(e.exact_matrix())),
                ScalarField::Float64 => serde_json::to_value(polymat_to_json(e.matrix())),
            }
            .map_err(|e| CliError::Io(e.to_string()))?;
            Ok((v, io::EXIT_OK))
        }
        Command::Distance { p1, p2, c1, c2, dump_problem, fig } => {
            let e1 = load_ge_in(field, p1, c1)?;
            let e2 = load_ge_in(field, p2, c2)?;
            dump(|| ge_distance_problem(&e1, &e2), dump_problem)?;
            let d = ge_distance(&e1, &e2)?;
            if fig.wanted() {
                if e1.n() != 2 {
                    return Err(CliError::Usage("figures are drawn for planar sets only".into()));
                }
                fig.emit(&Figure {
                    title: "distance between two sets".into(),
                    series: vec![
                        Series::closed("first", e1.boundary_polyline(256)?),
                        Series::closed("second", e2.boundary_polyline(256)?),
                        Series::open("segment", vec![[d.y[0], d.y[1]], [d.z[0], d.z[1]]]),
                    ],
                })?;
            }
            Ok((serde_json::to_value(&d).map_err(|e| CliError::Io(e.to_string()))?, io::EXIT_OK))
        }
        Command::Minimize { polymat, obj, center, dump_problem } => {
            let e = load_ge_in(field, polymat, center)?;
            let c = read_csv(obj)?.swap_remove(0);
            dump(|| minimize_over_ge_problem(&e, &c, &[]), dump_problem)?;
            let r = minimize_over_ge(&e, &c, &[])?;
            Ok((serde_json::to_value(&r).map_err(|e| CliError::Io(e.to_string()))?, io::EXIT_OK))
        }
        Command::Portfolio { samples, demo, seed, degree, ladder, write_samples, fig } => portfolio(
            samples.as_deref(),
            demo.then_some(*seed),
            *degree,
            *ladder,
            write_samples.as_deref(),
            fig,
        ),
        Command::Rdo { h, a_hat, a_check, example, degree, outer, grid: k, fig } => {
            let r = if *example {
                RdoInstance::box_two_modes()
            } else {
                let load = |p: &Option<PathBuf>| matrix(read_csv(p.as_ref().expect("clap requires the file"))?);
                RdoInstance::new(load(h)?, load(a_hat)?, load(a_check)?)?
            };
            rdo(&r, *degree, *outer, *k, fig)
        }
        Command::Regress { data, runge, degree, eps, fig } => {
            let r = match (data, runge) {
                (_, Some(m)) => RegressInstance::runge(*m, *degree, *eps),
                (Some(path), None) => {
                    let rows = read_csv(path)?;
                    if rows.iter().any(|r| r.len() != 2) {
                        return Err(CliError::Usage(format!("{}: expected columns x,y", path.display())));
                    }
                    RegressInstance::new(rows.iter().map(|r| r[0]).collect(), rows.iter().map(|r| r[1]).collect(), *degree, *eps)?
                }
                (None, None) => return Err(CliError::Usage("give --data or --runge".into())),
            };
            regress(&r, fig)
        }
        Command::Contract { p, mats, reindex, samples, seed } => contract(p, mats, reindex.as_deref(), *samples, *seed),
    }
}

fn portfolio(
    samples: Option<&Path>,
    demo_seed: Option<u64>,
    degree: usize,
    ladder: bool,
    write_samples: Option<&Path>,
    fig: &FigureOut,
) -> CliResult<(Value, i32)> {
    let (c, truth) = match demo_seed {
        Some(seed) => {
            let d = synth_covariance_demo(seed);
            (d.samples, Some(d.truth))
        }
        None => {
            let path = samples.expect("clap requires --samples");
            let c: CovSamples = serde_json::from_value(read_json(path)?).map_err(|e| CliError::Usage(e.to_string()))?;
            c.validate()?;
            (c, None)
        }
    };
    if let Some(p) = write_samples {
        write_text(p, &(serde_json::to_string(&c).map_err(|e| CliError::Io(e.to_string()))? + "\n"))?;
    }
    let base = portfolio_baseline(&c)?;
    let degrees: Vec<usize> = if ladder { (0..=degree).collect() } else { vec![degree] };
    let mut ge = Vec::new();
    for d in &degrees {
        let p = fit_cov_curve(&c, *d)?;
        ge.push((*d, portfolio_ge(&p)?));
    }
    let mut v = json!({
        "assets": c.n(),
        "samples": c.m(),
        "baseline": base,
        "ge": ge.iter().map(|(d, p)| json!({ "degree": d, "x": p.x, "value": p.value })).collect::<Vec<_>>(),
    });
    if let Some(truth) = &truth {
        let sigma = |t: f64| truth.eval(t);
        v["seed"] = json!(demo_seed);
        v["worst_case_true_variance"] = json!({
            "baseline": worst_case_variance(&base.x, sigma).0,
            "ge": ge.iter().map(|(d, p)| json!({ "degree": d, "value": worst_case_variance(&p.x, sigma).0 })).collect::<Vec<_>>(),
        });
        if fig.wanted() {
            let ts = grid(401);
            let curve = |x: &[f64]| -> Vec<[f64; 2]> {
                let xv = nalgebra::DVector::from_column_slice(x);
                ts.iter().map(|t| [*t, (xv.transpose() * truth.eval(*t) * &xv)[(0, 0)]]).collect()
            };
            let mut series = vec![Series::open("baseline", curve(&base.x))];
            series.extend(ge.iter().map(|(d, p)| Series::open(format!("GE-{d}"), curve(&p.x))));
            fig.emit(&Figure { title: "true variance of each portfolio".into(), series })?;
        }
    } else if fig.wanted() {
        return Err(CliError::Usage("the variance figure needs --demo (the true curve)".into()));
    }
    Ok((v, io::EXIT_OK))
}

fn rdo(r: &RdoInstance, degree: usize, outer: Option<usize>, k: usize, fig: &FigureOut) -> CliResult<(Value, i32)> {
    let outcome = rdo_inner(r, degree)?;
    let rows = outer.map(|h| rdo_outer_sample(r, h, &grid(k)));
    match outcome {
        RdoOutcome::Infeasible { certificate } => Ok((
            json!({ "status": "infeasible", "degree": degree, "certificate": certificate }),
            io::EXIT_INFEASIBLE,
        )),
        RdoOutcome::Feasible(inner) => {
            let mut v = json!({
                "status": "feasible",
                "degree": degree,
                "gamma": inner.gamma,
                "p": polymat_to_json(&inner.p),
                "residuals": inner.residuals,
            });
            if let Some(rows) = &rows {
                v["outer_halfspaces"] = json!(rows);
            }
            if fig.wanted() {
                if r.n() != 2 {
                    return Err(CliError::Usage("figures are drawn for planar instances only".into()));
                }
                let omega: Vec<Vec<f64>> = (0..r.h.nrows()).map(|i| r.h.row(i).iter().copied().collect()).collect();
                let mut series = vec![Series::closed("omega", halfspace_polygon(&omega))];
                if let Some(rows) = &rows {
                    series.push(Series::closed("outer", halfspace_polygon(rows)));
                }
                series.push(Series::closed(format!("inner-{degree}"), inner.ge.boundary_polyline(256)?));
                fig.emit(&Figure { title: "inner and sampled outer approximations".into(), series })?;
            }
            Ok((v, io::EXIT_OK))
        }
    }
}

fn regress(r: &RegressInstance, fig: &FigureOut) -> CliResult<(Value, i32)> {
    let fit = robust_regress(r)?;
    let ls = least_squares(r);
    let v = json!({
        "degree": r.degree,
        "eps": r.eps,
        "robust": { "c": fit.c, "gamma": fit.gamma, "worst_case": worst_case_residual(&fit.c, r).0 },
        "least_squares": { "c": ls, "worst_case": worst_case_residual(&ls, r).0 },
    });
    if fig.wanted() {
        let ts = grid(401);
        let curve = |c: &[f64]| -> Vec<[f64; 2]> {
            let p = UniPoly::from_f64s(c);
            ts.iter().map(|t| [*t, p.eval(t)]).collect()
        };
        fig.emit(&Figure {
            title: "robust and least-squares fits".into(),
            series: vec![
                Series::open("data", r.x.iter().zip(&r.y).map(|(a, b)| [*a, *b]).collect()),
                Series::open("robust", curve(&fit.c)),
                Series::open("least-squares", curve(&ls)),
            ],
        })?;
    }
    Ok((v, io::EXIT_OK))
}

fn contract(
    p: &Path,
    mats: &Path,
    reindex: Option<&Path>,
    samples: usize,
    seed: u64,
) -> CliResult<(Value, i32)> {
    let pf: PolyMat<f64> = read_polymat(p)?;
    let mv = read_json(mats)?;
    let list = mv.as_array().ok_or_else(|| CliError::Usage("expected a JSON list of matrices".into()))?;
    let float_mats = list
        .iter()
        .map(|m| matrix_from_json::<f64>(m).map_err(CliError::from).and_then(matrix))
        .collect::<CliResult<Vec<_>>>()?;
    let check = contraction_sample_check(&pf, &float_mats, samples, seed);
    let mut v = json!({ "sample_check": check });
    if let Some(path) = reindex {
        let sv = read_json(path)?;
        let polys = sv.as_array().ok_or_else(|| CliError::Usage("expected a JSON list of polynomials".into()))?;
        if polys.len() != list.len() {
            return Err(CliError::Usage(format!("{} reindexing maps for {} matrices", polys.len(), list.len())));
        }
        let pr: PolyMat<Rational> = read_polymat(p)?;
        let mut certs = Vec::new();
        for (m, s) in list.iter().zip(polys) {
            let coeffs = s.as_array().ok_or_else(|| CliError::Usage("a polynomial is a list of coefficients".into()))?;
            // certificates are exact statements, so they are always checked over the rationals
            let cs = json!([coeffs]);
            let s = UniPoly::new(matrix_from_json::<Rational>(&cs)?.swap_remove(0));
            let ok = contraction_certificate(&pr, &matrix_from_json::<Rational>(m)?, &s)?;
            certs.push(ok);
        }
        v["certificates"] = json!(certs);
    }
    Ok((v, io::EXIT_OK))
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { io::EXIT_USAGE } else { io::EXIT_OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(&cli) {
        Ok((v, code)) => match print_json(&v, cli.pretty) {
            Ok(()) => code,
            Err(e) => {
                eprintln!("ge: {e}");
                e.exit_code()
            }
        },
        Err(e) => {
            eprintln!("ge: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clipped_square() {
        let rows = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]];
        let mut p = halfspace_polygon(&rows);
        p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        let want = [[-1.0, -1.0], [-1.0, 1.0], [1.0, -1.0], [1.0, 1.0]];
        assert_eq!(p.len(), 4);
        for (a, b) in p.iter().zip(&want) {
            assert!((a[0] - b[0]).abs() < 1e-9 && (a[1] - b[1]).abs() < 1e-9, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn flags_parse() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
