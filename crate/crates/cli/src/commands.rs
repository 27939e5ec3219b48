use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use freeconv::superconv::{self, Scheme};
use freeconv::{ConvPow, DensityTable, DiscreteMeasure, FreeError};
use serde_json::json;

use crate::args::{Command, OutputArgs, SchemeKind, TableArgs};
use crate::parse;

/// A failure and the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    Usage(FreeError),
    Compute(FreeError),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Compute(_) | Failure::Io(_) => 3,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Usage(e) | Failure::Compute(e) => format!("{}: {e}", e.name()),
            Failure::Io(msg) => format!("Io: {msg}"),
        }
    }
}

fn usage<T>(r: Result<T, FreeError>) -> Result<T, Failure> {
    r.map_err(Failure::Usage)
}

fn compute<T>(r: Result<T, FreeError>) -> Result<T, Failure> {
    r.map_err(Failure::Compute)
}

/// Table inputs after validation.
struct Table {
    grid: Vec<f64>,
    exclude: Option<(f64, f64)>,
}

fn table_args(args: &TableArgs) -> Result<Table, Failure> {
    Ok(Table {
        grid: usage(parse::grid(&args.grid))?,
        exclude: usage(args.exclude.as_deref().map(parse::interval).transpose())?,
    })
}

pub fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Density { law, table } => {
            let law = usage(parse::law(&law))?;
            let t = table_args(&table)?;
            let exclude = match t.exclude {
                Some(u) => Some(u),
                None => compute(law.default_exclusion())?,
            };
            let result = compute(law.density_table(&t.grid, exclude))?;
            emit_table(&result, &table)
        }
        Command::Atoms { law, out } => {
            let law = usage(parse::law(&law))?;
            let report = compute(law.atom_report())?;
            let value = json!({
                "L": report.l.is_finite().then_some(report.l),
                "t_nu": report.t_nu,
                "mass": report.atom_mass,
            });
            emit(&out, format!("{value}\n"))
        }
        Command::Convpow { atoms, k, table } => {
            let mu = usage(parse::measure(&atoms))?;
            let t = table_args(&table)?;
            let cp = usage(ConvPow::new(mu, k))?;
            let result = compute(cp.density_table(&t.grid, t.exclude))?;
            emit_table(&result, &table)
        }
        Command::Superconv {
            scheme,
            atoms,
            lambda,
            jump,
            n,
            p,
            grid,
            exclude,
            out,
        } => {
            let scheme = usage(match scheme {
                SchemeKind::Clt => {
                    let base = match atoms.as_deref() {
                        Some(text) => parse::measure(text),
                        None => DiscreteMeasure::new(&[(-1.0, 0.5), (1.0, 0.5)]),
                    };
                    base.and_then(Scheme::free_clt)
                }
                SchemeKind::Poisson => parse::real(&lambda)
                    .and_then(|l| Ok((l, parse::measure(&jump)?)))
                    .and_then(|(l, j)| Scheme::free_poisson(l, j)),
            })?;
            let n_list = usage(parse::list(&n, parse::count))?;
            let p_list = usage(parse::list(&p, parse::real))?;
            let grid = usage(parse::grid(&grid))?;
            let exclude = match exclude {
                Some(text) => Some(usage(parse::interval(&text))?),
                None => compute(usage(scheme.target())?.default_exclusion())?,
            };
            let report = compute(superconv::run(&scheme, None, &n_list, &grid, exclude, &p_list))?;
            let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::Io(e.to_string()))?;
            emit(&out, text + "\n")
        }
        Command::StableCheck { stable, grid, out } => {
            let params = usage(parse::stable(&stable))?;
            let grid = usage(parse::grid(&grid))?;
            let error = compute(params.max_dilation_error(&grid))?;
            let b = params.b();
            let value = json!({
                "alpha": params.alpha(),
                "b": [b.re, b.im],
                "max_dilation_error": error,
            });
            emit(&out, format!("{value}\n"))
        }
    }
}

/// CSV with header `t,density`, excluded points dropped, the atom (if any)
/// as a trailing comment.
pub fn csv(table: &DensityTable) -> String {
    let mut s = String::from("t,density\n");
    for (t, v) in table.points() {
        let _ = writeln!(s, "{t:.16e},{v:.16e}");
    }
    if let Some((loc, mass)) = table.atom() {
        let _ = writeln!(s, "# atom,{loc:.16e},{mass:.16e}");
    }
    s
}

fn gnuplot_script(data: &str) -> String {
    let mut s = String::from("set datafile separator ','\nset datafile commentschars '#'\n$density << EOD\n");
    for line in data.lines().skip(1).filter(|l| !l.starts_with('#')) {
        s.push_str(line);
        s.push('\n');
    }
    s.push_str("EOD\nset xlabel 't'\nset ylabel 'density'\nunset key\nplot $density using 1:2 with lines\n");
    s
}

fn emit_table(table: &DensityTable, args: &TableArgs) -> Result<(), Failure> {
    let data = csv(table);
    if let Some(path) = &args.gnuplot {
        write_file(path, &gnuplot_script(&data))?;
    }
    emit(&args.out, data)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(out: &OutputArgs, text: String) -> Result<(), Failure> {
    match &out.output {
        Some(path) => write_file(path, &text),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

