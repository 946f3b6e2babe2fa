use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use reducible_grw::bounds::{
    d1_or_n_plus_1, degeneracy, dual_grw_upper, exact_with_bounds, grw_bounds_reducible, grw_estimates_mrd,
    mrd_rank_bounds, mrd_rank_from_table, mrd_rank_via_dual, singleton_check, ComponentTables,
};
use reducible_grw::codes::{gabidulin, TransposedGabidulin};
use reducible_grw::equivalence::{exact_product_test, product_characterization, to_c_opt};
use reducible_grw::format::{parse_code, parse_wiretap, write_code, write_reduction, write_witness, CodeFile};
use reducible_grw::grw::{grw_report, grw_table};
use reducible_grw::mrd::{build_mrd_reducible, mrd_plan};
use reducible_grw::reduction::{
    c_opt, cartesian, exact_reduction_for_d1, plotkin, random_block_transform, reducible, transform_reduction,
    OffDiagonal, PlotkinMode,
};
use reducible_grw::wiretap::{composition_search, leakage_empirical, leakage_exact, leakage_with_reduction, main_tables};
use reducible_grw::{Budget, Error, FieldTower, GaloisClosedSpace, LinearCode, Reduction};

#[derive(Parser)]
#[command(name = "rgrw", version, about = "Generalized rank weights of rank-metric codes")]
struct Cli {
    /// Cap on the number of objects any enumeration may visit.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget: u128,
    /// Code file to read instead of standard input.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code and print it as a code file.
    #[command(subcommand)]
    Construct(Construct),
    /// Generalized rank weights of the input code.
    #[command(subcommand)]
    Grw(Grw),
    /// Structural checks on the input code.
    #[command(subcommand)]
    Check(Check),
    /// Print the dual of the input code.
    Dual,
    /// Rank equivalences.
    #[command(subcommand)]
    Equiv(Equiv),
    /// Coset-coding leakage for a wiretap matrix.
    #[command(subcommand)]
    Wiretap(Wiretap),
    /// Operations on reductions.
    #[command(subcommand)]
    Reduce(Reduce),
}

#[derive(Args, Clone)]
struct FieldArgs {
    #[arg(long)]
    p: u32,
    #[arg(long)]
    m: usize,
    /// Coefficients c0,..,cm of a monic irreducible modulus.
    #[arg(long)]
    modulus: Option<String>,
}

#[derive(Subcommand)]
enum Construct {
    Gabidulin {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Cartesian product of the given code files.
    Cartesian { parts: Vec<PathBuf> },
    /// Reducible code with the given main components and random off-diagonal blocks.
    Reducible {
        parts: Vec<PathBuf>,
        #[arg(long)]
        seed: u64,
    },
    /// Parameters of the reducible MRD family.
    MrdPlan {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// A member of the reducible MRD family; zero off-diagonal blocks unless `--seed` is given.
    MrdBuild {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// `k` copies of the length-`m` one-dimensional Gabidulin code.
    Opt {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        k: usize,
    },
    Plotkin {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value = "sum")]
        mode: Mode,
        /// Scalar for `scaled` mode.
        #[arg(long)]
        alpha: Option<String>,
        /// Frobenius exponent for `frobenius` mode.
        #[arg(long, default_value_t = 1)]
        shift: usize,
    },
    /// Report on the transposed Gabidulin code (F_q-linear, not emitted as a code file).
    TransposedGab {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Also scan every codeword.
        #[arg(long)]
        scan: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sum,
    Scaled,
    Frobenius,
}

#[derive(Subcommand)]
enum Grw {
    Exact,
    /// Bounds from the main components of the input reduction.
    Bounds {
        /// Also compute the exact table.
        #[arg(long)]
        exact: bool,
    },
    /// Closed-form estimates for the MRD family plan.
    Estimates {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum Check {
    Mrd,
    Degenerate,
    Product,
    MrdRank,
}

#[derive(Subcommand)]
enum Equiv {
    ToOpt,
    ProductTest,
}

#[derive(Args)]
struct TapArgs {
    /// Wiretap file.
    #[arg(long)]
    wiretap: PathBuf,
}

#[derive(Subcommand)]
enum Wiretap {
    Leak(TapArgs),
    Empirical(TapArgs),
    Certify(TapArgs),
}

#[derive(Subcommand)]
enum Reduce {
    ExactD1,
    Transform {
        #[arg(long)]
        seed: u64,
    },
}

fn field(a: &FieldArgs) -> Result<Arc<FieldTower>, Error> {
    let f = match &a.modulus {
        None => FieldTower::new(a.p, a.m)?,
        Some(text) => {
            let coeffs = text
                .split(',')
                .map(|c| c.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Error::Field(format!("--modulus {text:?} is not a comma-separated list")))?;
            if coeffs.len() != a.m + 1 {
                return Err(Error::Field(format!("--modulus has {} coefficients, expected {}", coeffs.len(), a.m + 1)));
            }
            FieldTower::with_modulus(a.p, &coeffs)?
        }
    };
    Ok(Arc::new(f))
}

fn read_path(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Code(format!("{}: {e}", path.display())))
}

fn read_input(input: &Option<PathBuf>) -> Result<CodeFile, Error> {
    let text = match input {
        Some(p) => read_path(p)?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::Code(format!("standard input: {e}")))?;
            s
        }
    };
    parse_code(&text)
}

fn read_parts(paths: &[PathBuf]) -> Result<Vec<LinearCode>, Error> {
    if paths.is_empty() {
        return Err(Error::Code("no component files given".into()));
    }
    paths
        .iter()
        .map(|p| {
            parse_code(&read_path(p)?)
                .map(|c| c.code)
                .map_err(|e| Error::Code(format!("{}: {e}", p.display())))
        })
        .collect()
}

fn need_reduction(file: CodeFile) -> Result<Reduction, Error> {
    file.reduction
        .ok_or_else(|| Error::Code("input has no `blocks` line; this command needs a reduction".into()))
}

fn run(cli: Cli) -> Result<String, Error> {
    let budget = Budget(cli.budget);
    let input = &cli.input;
    let out = match cli.cmd {
        Command::Construct(c) => match c {
            Construct::Gabidulin { field: fa, n, k } => write_code(&gabidulin(field(&fa)?, n, k, None)?),
            Construct::Cartesian { parts } => write_reduction(&cartesian(&read_parts(&parts)?)?),
            Construct::Reducible { parts, seed } => {
                write_reduction(&reducible(&read_parts(&parts)?, &OffDiagonal::Random { seed })?)
            }
            Construct::MrdPlan { m, n, k } => format!("{}\n", mrd_plan(m, n, k)?),
            Construct::MrdBuild { field: fa, n, k, seed } => {
                let plan = mrd_plan(fa.m, n, k)?;
                let off = seed.map_or(OffDiagonal::Zero, |seed| OffDiagonal::Random { seed });
                write_reduction(&build_mrd_reducible(field(&fa)?, &plan, &off)?)
            }
            Construct::Opt { field: fa, k } => write_reduction(&c_opt(field(&fa)?, k)?),
            Construct::Plotkin { first, second, mode, alpha, shift } => {
                let parts = read_parts(&[first, second])?;
                let f = parts[0].field();
                let mode = match mode {
                    Mode::Sum => PlotkinMode::Sum,
                    Mode::Frobenius => PlotkinMode::Frobenius(shift),
                    Mode::Scaled => {
                        let a = alpha.ok_or_else(|| Error::Code("--mode scaled needs --alpha".into()))?;
                        PlotkinMode::Scaled(f.parse_scalar(&a).map_err(|e| Error::Code(format!("--alpha: {e}")))?)
                    }
                };
                write_reduction(&plotkin(&parts[0], &parts[1], mode)?)
            }
            Construct::TransposedGab { field: fa, n, k, scan } => {
                let t = TransposedGabidulin::new(field(&fa)?, n, k)?;
                let mut s = format!("transposed-gabidulin p={} m={} n={n} k={k} size={}^{} d1={}\n", fa.p, fa.m, fa.p, n * k, t.min_distance());
                if scan {
                    s += &format!("scan d1={}\n", t.scan_min_distance(budget)?);
                }
                s
            }
        },
        Command::Grw(g) => match g {
            Grw::Exact => format!("{}\n", grw_report(&read_input(input)?.code, budget)?),
            Grw::Bounds { exact } => {
                let r = need_reduction(read_input(input)?)?;
                if exact {
                    let (e, b) = exact_with_bounds(&r, budget)?;
                    let mut s = String::new();
                    for (x, y) in e.entries.iter().zip(&b.entries) {
                        s += &format!("r={} lower={} upper={} exact={}\n", x.r, y.lower, y.upper, x.exact.unwrap());
                    }
                    s
                } else {
                    let tables = ComponentTables::compute(&r, budget)?;
                    format!("{}\n", grw_bounds_reducible(&r, &tables)?)
                }
            }
            Grw::Estimates { m, n, k } => {
                let plan = mrd_plan(m, n, k)?;
                let est = grw_estimates_mrd(&plan)?;
                let mut s = format!("verdict={}\n", plan.verdict);
                for (i, d) in est.iter().enumerate() {
                    s += &format!("r={} estimate={d}\n", i + 1);
                }
                s
            }
        },
        Command::Check(c) => {
            let file = read_input(input)?;
            let code = &file.code;
            match c {
                Check::Mrd => {
                    let d1 = d1_or_n_plus_1(code, budget)?;
                    let s = singleton_check(code.n(), code.field().m(), code.k(), d1);
                    format!("d1={d1} d_max={} defect={} mrd={}\n", s.d_max, s.defect, s.is_mrd)
                }
                Check::Degenerate => {
                    let mut s = format!("closure_dim={} n={} degenerate={}\n", code.closure_dim(), code.n(), code.is_degenerate());
                    if let Some(r) = &file.reduction {
                        let d = degeneracy(r);
                        let flags = |v: &[bool]| v.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(",");
                        s += &format!("main={} column={}\n", flags(&d.main), flags(&d.column));
                    }
                    s
                }
                Check::Product => {
                    let r = need_reduction(file)?;
                    let pc = product_characterization(&r.row_components())?;
                    format!(
                        "cartesian={} exact_product={} equivalent_to_product={} closure_dim={} sum_of_closures={}\n",
                        r.is_cartesian(),
                        exact_product_test(&r),
                        pc.equivalent,
                        pc.closure_dim,
                        pc.sum_of_closures
                    )
                }
                Check::MrdRank => {
                    let (t, _) = grw_table(code, budget)?;
                    let mut s = format!(
                        "mrd_rank_table={} mrd_rank_dual={}\n",
                        mrd_rank_from_table(code.n(), &t),
                        mrd_rank_via_dual(code, budget)?
                    );
                    if let Some(r) = &file.reduction {
                        let b = mrd_rank_bounds(r, budget)?;
                        s += &format!(
                            "k_minus_rank lower={} upper_columns={} upper_dual={}\n",
                            b.lower, b.upper_columns, b.upper_dual
                        );
                    }
                    s
                }
            }
        }
        Command::Dual => {
            let file = read_input(input)?;
            match &file.reduction {
                Some(r) => {
                    let mut s = write_code(&file.code.dual());
                    let upper = dual_grw_upper(r, budget)?;
                    for (i, u) in upper.iter().enumerate() {
                        s += &format!("# r={} upper={u}\n", i + 1);
                    }
                    s
                }
                None => write_code(&file.code.dual()),
            }
        }
        Command::Equiv(e) => {
            let file = read_input(input)?;
            match e {
                Equiv::ToOpt => {
                    let (map, cert) = to_c_opt(&file.code)?;
                    write_witness(file.code.field(), &map, cert.certified())
                }
                Equiv::ProductTest => {
                    let r = need_reduction(file)?;
                    let pc = product_characterization(&r.row_components())?;
                    let mut s = format!("equivalent={}\n", pc.equivalent);
                    if let Some((map, product)) = &pc.witness {
                        s += &write_witness(r.field(), map, true);
                        s += &write_reduction(product);
                    }
                    s
                }
            }
        }
        Command::Wiretap(w) => {
            let file = read_input(input)?;
            let code = &file.code;
            let tap = |a: &TapArgs| -> Result<_, Error> { parse_wiretap(code.field(), code.n(), &read_path(&a.wiretap)?) };
            match w {
                Wiretap::Leak(a) => {
                    let b = tap(&a)?;
                    let rep = match &file.reduction {
                        Some(r) => leakage_with_reduction(r, &b, budget)?,
                        None => leakage_exact(code, &b, Some(&grw_table(code, budget)?.0))?,
                    };
                    format!("{rep}\n")
                }
                Wiretap::Empirical(a) => {
                    let b = tap(&a)?;
                    let emp = leakage_empirical(code, &b, budget)?;
                    let exact = leakage_exact(code, &b, None)?.leakage;
                    format!("mutual_information={emp} dimension={exact} agree={}\n", emp == (exact as i128).into())
                }
                Wiretap::Certify(a) => {
                    let b = tap(&a)?;
                    let r = need_reduction(file.clone())?;
                    let v = GaloisClosedSpace::from_base_rows(code.field(), &b)?;
                    let tables = main_tables(&r, budget)?;
                    let leak = leakage_exact(code, &b, None)?.leakage;
                    match composition_search(&r, &v, &tables)? {
                        Some((comp, bound)) => {
                            let comp: Vec<String> = comp.iter().map(|x| x.to_string()).collect();
                            format!("composition={} bound={bound} leakage={leak} holds={}\n", comp.join(","), leak <= bound)
                        }
                        None => format!("composition=- bound=- leakage={leak}\n"),
                    }
                }
            }
        }
        Command::Reduce(rd) => {
            let r = need_reduction(read_input(input)?)?;
            match rd {
                Reduce::ExactD1 => write_reduction(&exact_reduction_for_d1(&r, budget)?),
                Reduce::Transform { seed } => write_reduction(&transform_reduction(&r, &random_block_transform(&r, seed))?),
            }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    // clap's own usage errors exit with 2, which is reserved for budget errors
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_budget() { 2 } else { 1 })
        }
    }
}
