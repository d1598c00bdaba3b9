//! The `fusioncat` command line. [`run`] does the work and returns the exit
//! status: 0 success, 1 verification failure, 2 parse or usage error.

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};

use fusioncat_core::catalog::{self, ULabel, VLabel};
use fusioncat_core::lattice::{l_coset, Half};
use fusioncat_core::modular_data::{CycMatrix, ModularError};
use fusioncat_core::qseries::{character, eta_inverse_power, theta_coset};
use fusioncat_core::{Coset, CycNum, ModularDatum, QSeries, RingElement, DEFAULT_ORDER_CAP, Q};

use crate::output::{fmt_complex, fmt_sig, grid, series_dump, table, FLOAT_DIGITS};
use crate::{fcat, lattice_text};

#[derive(Parser, Debug)]
#[command(name = "fusioncat", version, about = "Exact modular data for fusion categories")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Largest cyclotomic order arithmetic may promote to.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    order_cap: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum CatalogName {
    #[value(name = "U")]
    U,
    #[value(name = "VLtau")]
    VLtau,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Grid,
    Fcat,
    Float,
}

#[derive(Args, Debug)]
struct Source {
    /// Use a built-in category instead of a file.
    #[arg(long, value_enum)]
    catalog: Option<CatalogName>,

    /// FCAT file (`-` for stdin).
    #[arg(short, long)]
    input: Option<String>,
}

#[derive(Args, Debug)]
struct FileSource {
    #[command(flatten)]
    src: Source,

    /// FCAT file (`-` for stdin); same as `--input`.
    file: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the ring axioms and, when twists and dimensions are given, the
    /// modular identities and the Verlinde round-trip.
    Verify(FileSource),
    /// Fuse two or more labels.
    Fuse {
        #[command(flatten)]
        src: Source,
        #[arg(required = true, num_args = 2..)]
        labels: Vec<String>,
    },
    /// Perron-Frobenius dimensions and exact column ratios.
    Qdim(FileSource),
    /// S matrix (or s~ with `--stilde`).
    Smatrix {
        #[command(flatten)]
        src: FileSource,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Print the unnormalized s~ instead of S.
        #[arg(long)]
        stilde: bool,
        /// Shorthand for `--format float`.
        #[arg(long)]
        float: bool,
    },
    /// Diagonal of T and the (ST)^3 relations.
    Tmatrix {
        #[command(flatten)]
        src: FileSource,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        float: bool,
    },
    /// Structure constants recovered from S, as FCAT `N` lines.
    Verlinde(FileSource),
    /// Emit a built-in category.
    Catalog {
        #[arg(value_enum)]
        name: CatalogName,
        #[arg(long, value_enum, default_value_t = Format::Fcat)]
        format: Format,
    },
    /// Character q-series of lattice modules.
    Char {
        /// Labels of a built-in category whose character is a lattice sum.
        #[arg(long, value_enum, conflicts_with = "lattice")]
        catalog: Option<CatalogName>,
        /// Lattice text file; names are then coset names.
        #[arg(long)]
        lattice: Option<String>,
        #[arg(required = true)]
        names: Vec<String>,
        /// Exponent cutoff (rational).
        #[arg(long, default_value = "30")]
        cutoff: String,
        /// Print the theta series only (no eta factor or q^{-c/24}).
        #[arg(long)]
        theta: bool,
    },
    /// Number of irreducible modules of the Z3 permutation orbifold over a
    /// lattice VOA with `n` irreducibles.
    Count { n: u64 },
}

enum Failure {
    Usage(String),
    Verify(String),
    /// stdout closed early (`| head`); not an error.
    Closed,
}

impl From<fcat::ParseError> for Failure {
    fn from(e: fcat::ParseError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Failure::Closed;
        }
        Failure::Usage(e.to_string())
    }
}

fn modular_failure(e: ModularError) -> Failure {
    match e {
        ModularError::MissingTwist(_) | ModularError::MissingDim(_) | ModularError::MissingCentralCharge => {
            Failure::Usage(e.to_string())
        }
        _ => Failure::Verify(e.to_string()),
    }
}

struct Ctx<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
    cap: u32,
}

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let rendered = e.to_string();
            let first = rendered.lines().next().unwrap_or("usage error");
            let _ = writeln!(err, "fusioncat: {}", first.trim_start_matches("error: "));
            return 2;
        }
    };
    let mut ctx = Ctx { stdin, out, cap: cli.order_cap };
    match dispatch(cli.cmd, &mut ctx) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "fusioncat: {m}");
            2
        }
        Err(Failure::Verify(m)) => {
            let _ = writeln!(err, "fusioncat: {m}");
            1
        }
        Err(Failure::Closed) => 0,
    }
}

fn build(name: CatalogName) -> Result<(String, ModularDatum), Failure> {
    let (n, md) = match name {
        CatalogName::U => ("U", catalog::build_u()),
        CatalogName::VLtau => ("VLtau", catalog::build_vltau()),
    };
    md.map(|m| (n.to_string(), m)).map_err(|e| Failure::Verify(e.to_string()))
}

fn load(src: &Source, file: Option<&String>, ctx: &mut Ctx) -> Result<(String, ModularDatum), Failure> {
    let path = match (file, &src.input) {
        (Some(_), Some(_)) => return Err(Failure::Usage("give the input once, positionally or with --input".into())),
        (Some(p), None) | (None, Some(p)) => Some(p),
        (None, None) => None,
    };
    match (src.catalog, path) {
        (Some(_), Some(_)) => Err(Failure::Usage("--catalog and an input file are exclusive".into())),
        (None, None) => Err(Failure::Usage("no input: give an FCAT file, `-`, or --catalog".into())),
        (Some(c), None) => {
            let (n, mut md) = build(c)?;
            md.set_order_cap(ctx.cap);
            Ok((n, md))
        }
        (None, Some(p)) => {
            let text = read_input(p, ctx)?;
            let doc = fcat::parse_with_cap(&text, ctx.cap)
                .map_err(|e| Failure::Usage(format!("{}: {e}", display_path(p))))?;
            Ok((doc.name, doc.datum))
        }
    }
}

fn display_path(p: &str) -> &str {
    if p == "-" {
        "<stdin>"
    } else {
        p
    }
}

fn read_input(p: &str, ctx: &mut Ctx) -> Result<String, Failure> {
    let mut s = String::new();
    if p == "-" {
        ctx.stdin.read_to_string(&mut s)?;
    } else {
        s = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{p}: {e}")))?;
    }
    Ok(s)
}

fn resolve(md: &ModularDatum, is_u: bool, name: &str) -> Result<usize, Failure> {
    let ring = md.ring();
    if let Some(i) = ring.index_of(name) {
        return Ok(i);
    }
    if is_u {
        if let Some(i) = catalog::u_index(name) {
            return Ok(i);
        }
    }
    if let Some(i) = name.strip_prefix('W').and_then(|n| n.parse::<usize>().ok()) {
        if i < ring.rank() {
            return Ok(i);
        }
    }
    Err(Failure::Usage(format!("unknown label `{name}`")))
}

fn dispatch(cmd: Cmd, ctx: &mut Ctx) -> Result<i32, Failure> {
    match cmd {
        Cmd::Verify(fs) => {
            let (name, md) = load(&fs.src, fs.file.as_ref(), ctx)?;
            verify(&name, &md, ctx)
        }
        Cmd::Fuse { src, labels } => {
            let (_, md) = load(&src, None, ctx)?;
            let is_u = src.catalog == Some(CatalogName::U);
            let ring = md.ring();
            let mut acc = RingElement::basis(resolve(&md, is_u, &labels[0])?);
            for l in &labels[1..] {
                let b = RingElement::basis(resolve(&md, is_u, l)?);
                acc = ring.fuse(&acc, &b).map_err(|e| Failure::Usage(e.to_string()))?;
            }
            writeln!(ctx.out, "{}", ring.format_element(&acc))?;
            Ok(0)
        }
        Cmd::Qdim(fs) => {
            let (_, md) = load(&fs.src, fs.file.as_ref(), ctx)?;
            qdim(&md, ctx)
        }
        Cmd::Smatrix { src, format, stilde, float } => {
            let (_, md) = load(&src.src, src.file.as_ref(), ctx)?;
            let format = if float { Format::Float } else { format };
            let m = if stilde { md.stilde() } else { md.s_matrix() }.map_err(modular_failure)?;
            print_matrix(&m, format, "smatrix", ctx)?;
            Ok(0)
        }
        Cmd::Tmatrix { src, format, float } => {
            let (_, mut md) = load(&src.src, src.file.as_ref(), ctx)?;
            let format = if float { Format::Float } else { format };
            let inferred = if md.central_charge().is_none() {
                let rep = md.verify_modular().map_err(modular_failure)?;
                let c = rep
                    .inferred_c_mod_8
                    .ok_or_else(|| Failure::Verify("no central charge given and none can be inferred".into()))?;
                md.set_central_charge(c);
                Some(c)
            } else {
                None
            };
            let t = md.t_matrix().map_err(modular_failure)?;
            match format {
                Format::Text | Format::Grid => {
                    for (i, x) in t.diag.iter().enumerate() {
                        writeln!(ctx.out, "{i} {i} {x}")?;
                    }
                }
                Format::Float => {
                    for (i, x) in t.diag.iter().enumerate() {
                        writeln!(ctx.out, "{i} {i} {}", fmt_complex(x.embed()))?;
                    }
                }
                Format::Fcat => return Err(Failure::Usage("tmatrix has no fcat format".into())),
            }
            if format == Format::Text {
                if let Some(c) = inferred {
                    writeln!(ctx.out, "# c = {c} mod 8 (inferred)")?;
                }
                writeln!(ctx.out, "# (ST)^3 = S^2: {}", yes_no(t.st_cubed_plain))?;
                writeln!(ctx.out, "# (ST)^3 = e(c/8) S^2: {}", yes_no(t.st_cubed_e_c8))?;
            }
            Ok(0)
        }
        Cmd::Verlinde(fs) => {
            let (_, md) = load(&fs.src, fs.file.as_ref(), ctx)?;
            let v = md.verlinde().map_err(modular_failure)?;
            write!(ctx.out, "{}", fcat::emit_entries(&v))?;
            Ok(0)
        }
        Cmd::Catalog { name, format } => {
            let (n, md) = build(name)?;
            match format {
                Format::Fcat => write!(ctx.out, "{}", fcat::emit(&n, &md))?,
                Format::Text => catalog_table(&md, ctx)?,
                _ => return Err(Failure::Usage("catalog supports --format fcat|text".into())),
            }
            Ok(0)
        }
        Cmd::Char { catalog, lattice, names, cutoff, theta } => {
            let cutoff: Q = cutoff.parse().map_err(|_| Failure::Usage(format!("bad cutoff `{cutoff}`")))?;
            if cutoff <= Q::from_integer(0) {
                return Err(Failure::Usage("cutoff must be positive".into()));
            }
            let s = char_series(catalog, lattice.as_deref(), &names, cutoff, theta, ctx)?;
            write!(ctx.out, "{}", series_dump(&s))?;
            Ok(0)
        }
        Cmd::Count { n } => {
            if n > 2_000_000 {
                return Err(Failure::Usage("n too large".into()));
            }
            writeln!(ctx.out, "{}", catalog::count_orbifold_irreducibles(n))?;
            Ok(0)
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_matrix(m: &CycMatrix, format: Format, cmd: &str, ctx: &mut Ctx) -> Result<(), Failure> {
    let s = match format {
        Format::Text => table(m, |x| x.to_string()),
        Format::Grid => grid(m),
        Format::Float => table(m, |x| fmt_complex(x.embed())),
        Format::Fcat => return Err(Failure::Usage(format!("{cmd} has no fcat format"))),
    };
    write!(ctx.out, "{s}")?;
    Ok(())
}

fn verify(name: &str, md: &ModularDatum, ctx: &mut Ctx) -> Result<i32, Failure> {
    let ring = md.ring();
    let mut failed = 0usize;
    let mut line = |out: &mut dyn Write, ok: bool, what: &str, detail: &str| -> std::io::Result<()> {
        if !ok {
            failed += 1;
        }
        if detail.is_empty() {
            writeln!(out, "{} {what}", if ok { "PASS" } else { "FAIL" })
        } else {
            writeln!(out, "{} {what}: {detail}", if ok { "PASS" } else { "FAIL" })
        }
    };
    writeln!(ctx.out, "category {name} ({} labels)", ring.rank())?;
    let rep = ring.validate();
    for (what, v) in rep.checks() {
        line(ctx.out, v.is_none(), what, v.as_ref().map_or("", |v| v.detail.as_str()))?;
    }
    let has_data = (0..ring.rank()).all(|i| md.twist(i).is_some() && md.dim(i).is_some());
    if !has_data {
        writeln!(ctx.out, "SKIP modular checks: twists or dimensions missing")?;
    } else if rep.passed() {
        match md.verify_modular() {
            Ok(mrep) => {
                for c in &mrep.checks {
                    line(ctx.out, c.passed, &c.name, &c.detail)?;
                }
                if mrep.passed() {
                    verlinde_and_dims(md, &mut line, ctx)?;
                }
                writeln!(ctx.out, "D = {}", mrep.global_dim)?;
                if let Ok(d2) = md.global_dim_squared() {
                    writeln!(ctx.out, "D^2 = {d2}")?;
                }
                writeln!(ctx.out, "p+ = {}", mrep.gauss_plus)?;
                writeln!(ctx.out, "p- = {}", mrep.gauss_minus)?;
                match (md.central_charge(), mrep.inferred_c_mod_8) {
                    (Some(c), _) => writeln!(ctx.out, "c = {c}")?,
                    (None, Some(c)) => writeln!(ctx.out, "c = {c} mod 8 (inferred)")?,
                    (None, None) => writeln!(ctx.out, "c undetermined")?,
                }
            }
            Err(e) => line(ctx.out, false, "modular data", &e.to_string())?,
        }
    } else {
        writeln!(ctx.out, "SKIP modular checks: ring axioms fail")?;
    }
    writeln!(
        ctx.out,
        "{}",
        if failed == 0 { "all checks passed".to_string() } else { format!("{failed} check(s) failed") }
    )?;
    Ok(if failed == 0 { 0 } else { 1 })
}

type LineFn<'a> = dyn FnMut(&mut dyn Write, bool, &str, &str) -> std::io::Result<()> + 'a;

fn verlinde_and_dims(md: &ModularDatum, line: &mut LineFn, ctx: &mut Ctx) -> Result<(), Failure> {
    match md.verlinde() {
        Ok(mut v) => {
            v.sort();
            let mut want: Vec<_> = md.ring().entries().filter(|e| e.3 != 0).collect();
            want.sort();
            let detail = if v == want {
                String::new()
            } else {
                let diff = v.iter().zip(&want).find(|(a, b)| a != b);
                match diff {
                    Some((a, b)) => format!("Verlinde gives N{:?} where the ring has N{:?}", a, b),
                    None => format!("{} constants vs {} in the ring", v.len(), want.len()),
                }
            };
            line(ctx.out, v == want, "Verlinde round-trip", &detail)?;
        }
        Err(e) => line(ctx.out, false, "Verlinde round-trip", &e.to_string())?,
    }
    let st = md.stilde().map_err(modular_failure)?;
    let u = md.ring().unit();
    let mut bad = None;
    for i in 0..md.rank() {
        let ratio = &st[i][u] / &st[u][u];
        let (re, im) = ratio.embed();
        let pf = md.ring().qdim_pf(i);
        let ok = match pf {
            Ok(pf) => (re.abs() - pf).abs() < 1e-8 && im.abs() < 1e-8,
            Err(_) => false,
        };
        if !ok {
            bad = Some(i);
            break;
        }
    }
    let detail = bad.map(|i| format!("label {i}")).unwrap_or_default();
    line(ctx.out, bad.is_none(), "|s~(i,0)/s~(0,0)| = PF dimension", &detail)?;
    Ok(())
}

fn qdim(md: &ModularDatum, ctx: &mut Ctx) -> Result<i32, Failure> {
    let ring = md.ring();
    let st = if (0..ring.rank()).all(|i| md.twist(i).is_some() && md.dim(i).is_some()) {
        Some(md.stilde().map_err(modular_failure)?)
    } else {
        None
    };
    let u = ring.unit();
    let mut code = 0;
    for i in 0..ring.rank() {
        let pf = match ring.qdim_pf(i) {
            Ok(x) => fmt_sig(x, FLOAT_DIGITS),
            Err(e) => {
                code = 1;
                format!("({e})")
            }
        };
        match &st {
            Some(st) => {
                let r: CycNum = &st[i][u] / &st[u][u];
                writeln!(ctx.out, "{i} {} {pf} {r}", ring.label(i))?;
            }
            None => writeln!(ctx.out, "{i} {} {pf}", ring.label(i))?,
        }
    }
    Ok(code)
}

fn catalog_table(md: &ModularDatum, ctx: &mut Ctx) -> Result<(), Failure> {
    let ring = md.ring();
    writeln!(ctx.out, "# index name weight dim dual")?;
    for i in 0..ring.rank() {
        let dual = ring.dual_of(i).map_or("?".to_string(), |d| ring.label(d).to_string());
        writeln!(
            ctx.out,
            "W{i} {} {} {} {dual}",
            ring.label(i),
            md.twist(i).map_or("?".to_string(), |t| t.to_string()),
            md.dim(i).map_or("?".to_string(), |d| d.to_string()),
        )?;
    }
    Ok(())
}

fn char_series(
    cat: Option<CatalogName>,
    lattice: Option<&str>,
    names: &[String],
    cutoff: Q,
    theta_only: bool,
    ctx: &mut Ctx,
) -> Result<QSeries, Failure> {
    // each module is a list of (rank-1 coset, rank-2 coset) pairs or a single coset
    let mut pieces: Vec<Vec<Coset>> = Vec::new();
    match (cat, lattice) {
        (Some(CatalogName::U), _) => {
            for n in names {
                let l = catalog::u_index(n)
                    .and_then(ULabel::from_index)
                    .ok_or_else(|| Failure::Usage(format!("unknown label `{n}`")))?;
                let ps = catalog::u_character_pieces(l).ok_or_else(|| {
                    Failure::Usage(format!("no lattice character for `{n}`: needs tau-eigenspace traces"))
                })?;
                pieces.extend(ps.into_iter().map(|(a, b)| vec![a, b]));
            }
        }
        (Some(CatalogName::VLtau), _) => {
            for n in names {
                let l = VLabel::all().into_iter().find(|l| &l.name() == n);
                match l {
                    Some(VLabel::C { j }) => pieces.push(vec![l_coset(Half::C, j)]),
                    Some(_) => {
                        return Err(Failure::Usage(format!(
                            "no lattice character for `{n}`: needs tau-eigenspace traces"
                        )))
                    }
                    None => return Err(Failure::Usage(format!("unknown label `{n}`"))),
                }
            }
        }
        (None, Some(path)) => {
            let text = read_input(path, ctx)?;
            let f = lattice_text::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", display_path(path))))?;
            for n in names {
                let c = f.coset(n).ok_or_else(|| Failure::Usage(format!("unknown coset `{n}`")))?;
                pieces.push(vec![c.clone()]);
            }
        }
        (None, None) => return Err(Failure::Usage("char needs --catalog or --lattice".into())),
    }
    let rank = |p: &Vec<Coset>| p.iter().map(|c| c.lattice().rank()).sum::<usize>();
    let r0 = rank(&pieces[0]);
    if pieces.iter().any(|p| rank(p) != r0) {
        return Err(Failure::Usage("modules of different rank cannot be summed".into()));
    }
    let mut total = QSeries::zero(cutoff);
    for p in &pieces {
        let s = if theta_only {
            p.iter().map(|c| theta_coset(c, cutoff)).reduce(|a, b| a.mul(&b)).expect("nonempty")
        } else if p.len() == 2 {
            character(&[(p[0].clone(), p[1].clone())], Q::from_integer(r0 as i64), cutoff)
        } else {
            single_character(&p[0], cutoff)
        };
        total = total.add(&s);
    }
    Ok(total)
}

/// `q^{-r/24} theta / prod (1-q^n)^r` for one rank-`r` coset, with the
/// same cutoff convention as [`character`].
fn single_character(c: &Coset, cutoff: Q) -> QSeries {
    let r = c.lattice().rank();
    let shift = Q::new(r as i64, 24);
    let eta = eta_inverse_power(r as u32, cutoff).shift(shift);
    theta_coset(c, cutoff).mul(&eta).truncate(cutoff).shift(-shift)
}
