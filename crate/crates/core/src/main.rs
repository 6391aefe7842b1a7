//! Command-line front end: JSON on stdout, diagnostics on stderr,
//! deterministic output for identical inputs.

use std::io::Read;
use std::process::ExitCode;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use om_ideals::arith::{AlgElem, Int, IntPoly, NumberField, Rat};
use om_ideals::crt::{crt_solve, reduce, ResidueTarget};
use om_ideals::error::Error;
use om_ideals::ideal::{factor_ideal_with, generator, two_element};
use om_ideals::json::*;
use om_ideals::montes::montes_factorize;
use om_ideals::pbasis::{local_index_from, p_integral_basis_from};
use om_ideals::polygon::ascii_render;
use om_ideals::valuation::vp_full;

#[derive(Parser)]
#[command(name = "om-ideals", version, about = "Prime ideals and fractional ideal arithmetic in number fields")]
struct Cli {
    /// Path to a field spec JSON file: {"f": ["c0","c1",...], "label": "..."}
    #[arg(long, global = true)]
    field: Option<String>,
    /// Inline coefficient list of f, lowest degree first, comma separated
    #[arg(long, global = true)]
    coeffs: Option<String>,
    /// Print per-phase wall clock to stderr
    #[arg(long, global = true)]
    timings: bool,
    /// Run per-prime work concurrently where the operation allows it
    #[arg(long, global = true)]
    parallel: bool,
    /// Dump the Newton polygons of f at every level of every prime to stderr
    #[arg(long, global = true)]
    dump_polygons: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decompose a rational prime into prime ideals
    FactorPrime(FactorPrimeArgs),
    /// Factor the fractional ideal generated by the given elements
    FactorIdeal(GensArgs),
    /// P-adic valuation of an element
    Valuation(PrimeElemArgs),
    /// Integral generator alpha with P = (p, alpha)
    Generator(PrimeArgs),
    /// Two-element representation of a fractional ideal
    TwoElement(GensArgs),
    /// Residue of a P-integral element in the residue field
    Reduce(PrimeElemArgs),
    /// Solve a Chinese remainder system over one or more rational primes
    Crt(CrtArgs),
    /// p-integral basis of the field
    PBasis(POnlyArgs),
    /// p-valuation of the index of the defining polynomial
    Index(POnlyArgs),
}

#[derive(Args)]
struct FactorPrimeArgs {
    #[arg(short = 'p', long)]
    p: String,
    /// Include the full serialized types in the output
    #[arg(long)]
    types: bool,
}

#[derive(Args)]
struct POnlyArgs {
    #[arg(short = 'p', long)]
    p: String,
}

#[derive(Args)]
struct PrimeArgs {
    #[arg(short = 'p', long)]
    p: String,
    /// Prime ideal label within the decomposition, e.g. p2
    #[arg(long)]
    prime: String,
}

#[derive(Args)]
struct PrimeElemArgs {
    #[arg(short = 'p', long)]
    p: String,
    #[arg(long)]
    prime: String,
    /// Element of K: "num=<c0,c1,...>;den=<d>"
    #[arg(long)]
    elem: String,
}

#[derive(Args)]
struct GensArgs {
    /// Ideal generator, repeatable: "num=<c0,c1,...>;den=<d>"
    #[arg(long = "gen", required = true)]
    gens: Vec<String>,
}

#[derive(Args)]
struct CrtArgs {
    /// Target, repeatable: "p=<prime>;prime=<label>;exp=<k>;num=<c0,..>;den=<d>"
    #[arg(long = "target", required = true)]
    targets: Vec<String>,
}

#[derive(Deserialize)]
struct FieldSpec {
    f: Vec<String>,
    label: Option<String>,
}

fn parse_int(s: &str) -> Result<Int, Error> {
    Int::from_str(s.trim()).map_err(|_| Error::InvalidInput(format!("bad integer: {}", s)))
}

fn parse_coeffs(s: &str) -> Result<IntPoly, Error> {
    let cs: Result<Vec<Int>, Error> = s.split(',').map(parse_int).collect();
    Ok(IntPoly::new(cs?))
}

fn parse_elem(nf: &NumberField, s: &str) -> Result<AlgElem, Error> {
    let mut num: Option<IntPoly> = None;
    let mut den: Int = Int::from(1);
    for part in s.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("bad element part: {}", part)))?;
        match key.trim() {
            "num" => num = Some(parse_coeffs(val)?),
            "den" => den = parse_int(val)?,
            other => return Err(Error::InvalidInput(format!("unknown element key: {}", other))),
        }
    }
    let num = num.ok_or_else(|| Error::InvalidInput("element needs num=".into()))?;
    if den <= Int::from(0) {
        return Err(Error::InvalidInput("den must be positive".into()));
    }
    Ok(nf.elem(Rat::new(Int::from(1), den), num))
}

fn parse_label(s: &str) -> Result<usize, Error> {
    let body = s.trim().trim_start_matches('p');
    body.parse::<usize>()
        .map_err(|_| Error::InvalidInput(format!("bad prime label: {}", s)))
}

fn load_field(cli: &Cli) -> Result<(Arc<NumberField>, Option<String>), Error> {
    let (coeffs, label) = if let Some(path) = &cli.field {
        let mut text = String::new();
        if path == "-" {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::InvalidInput(format!("cannot read stdin: {}", e)))?;
        } else {
            text = std::fs::read_to_string(path)
                .map_err(|e| Error::InvalidInput(format!("cannot read {}: {}", path, e)))?;
        }
        let spec: FieldSpec =
            serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("bad field spec: {}", e)))?;
        let cs: Result<Vec<Int>, Error> = spec.f.iter().map(|s| parse_int(s)).collect();
        (IntPoly::new(cs?), spec.label)
    } else if let Some(cs) = &cli.coeffs {
        (parse_coeffs(cs)?, None)
    } else {
        return Err(Error::InvalidInput("provide --field or --coeffs".into()));
    };
    Ok((Arc::new(NumberField::new(coeffs)?), label))
}

fn emit<T: serde::Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serialization"));
}

fn parse_crt_target(nf: &NumberField, s: &str) -> Result<ResidueTarget, Error> {
    let mut p: Option<Int> = None;
    let mut label: Option<usize> = None;
    let mut exp: Option<i64> = None;
    let mut num: Option<IntPoly> = None;
    let mut den = Int::from(1);
    for part in s.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("bad target part: {}", part)))?;
        match key.trim() {
            "p" => p = Some(parse_int(val)?),
            "prime" | "label" => label = Some(parse_label(val)?),
            "exp" => {
                exp = Some(
                    val.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::InvalidInput(format!("bad exponent: {}", val)))?,
                )
            }
            "num" => num = Some(parse_coeffs(val)?),
            "den" => den = parse_int(val)?,
            other => return Err(Error::InvalidInput(format!("unknown target key: {}", other))),
        }
    }
    let exp = exp.unwrap_or(1);
    if exp < 1 {
        return Err(Error::InvalidInput("exponent must be at least 1".into()));
    }
    Ok(ResidueTarget {
        p: p.ok_or_else(|| Error::InvalidInput("target needs p=".into()))?,
        label: label.ok_or_else(|| Error::InvalidInput("target needs prime=".into()))?,
        exponent: exp,
        target: nf.elem(
            Rat::new(Int::from(1), den),
            num.ok_or_else(|| Error::InvalidInput("target needs num=".into()))?,
        ),
    })
}

fn dump_polygons(d: &om_ideals::montes::Decomposition) {
    for pr in &d.primes {
        eprintln!("prime p{}:", pr.label);
        for i in 1..=pr.om.levels.len() {
            match pr.om.newton_polygon(i, d.nf.poly(), None) {
                Ok(np) => eprint!("level {}:\n{}", i, ascii_render(&np)),
                Err(e) => eprintln!("level {}: <{}>", i, e),
            }
        }
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    let t_load = Instant::now();
    let (nf, label) = load_field(cli)?;
    if cli.timings {
        eprintln!("load field: {:?}", t_load.elapsed());
    }
    let t_run = Instant::now();
    match &cli.cmd {
        Cmd::FactorPrime(args) => {
            let p = parse_int(&args.p)?;
            let d = montes_factorize(&nf, &p)?;
            if cli.dump_polygons {
                dump_polygons(&d);
            }
            emit(&decomposition_out(&d, label, args.types));
        }
        Cmd::FactorIdeal(args) => {
            let gens: Result<Vec<AlgElem>, Error> =
                args.gens.iter().map(|g| parse_elem(&nf, g)).collect();
            let a = factor_ideal_with(&nf, &gens?, cli.parallel)?;
            emit(&ideal_out(&a, label));
        }
        Cmd::Valuation(args) => {
            let p = parse_int(&args.p)?;
            let lab = parse_label(&args.prime)?;
            let alpha = parse_elem(&nf, &args.elem)?;
            let d = montes_factorize(&nf, &p)?;
            let mut pr = d
                .find_label(lab)
                .ok_or_else(|| Error::InvalidInput(format!("no prime labeled p{} over {}", lab, p)))?
                .clone();
            let v = vp_full(&mut pr, &alpha)?;
            emit(&valuation_out(&p, lab, &v));
        }
        Cmd::Generator(args) => {
            let p = parse_int(&args.p)?;
            let lab = parse_label(&args.prime)?;
            let d = montes_factorize(&nf, &p)?;
            let mut primes = d.primes.clone();
            let idx = primes
                .iter()
                .position(|q| q.label == lab)
                .ok_or_else(|| Error::InvalidInput(format!("no prime labeled p{} over {}", lab, p)))?;
            let alpha = generator(&mut primes, idx)?;
            emit(&GeneratorOut {
                p: p.to_string(),
                label: format!("p{}", lab),
                element: elem_out(&nf, &alpha),
            });
        }
        Cmd::TwoElement(args) => {
            let gens: Result<Vec<AlgElem>, Error> =
                args.gens.iter().map(|g| parse_elem(&nf, g)).collect();
            let a = factor_ideal_with(&nf, &gens?, cli.parallel)?;
            let rep = two_element(&a)?;
            emit(&TwoElementOut {
                field: field_out(&nf, label),
                ell: rat_out(&rep.ell),
                alpha: elem_out(&nf, &rep.alpha),
            });
        }
        Cmd::Reduce(args) => {
            let p = parse_int(&args.p)?;
            let lab = parse_label(&args.prime)?;
            let alpha = parse_elem(&nf, &args.elem)?;
            let d = montes_factorize(&nf, &p)?;
            let mut pr = d
                .find_label(lab)
                .ok_or_else(|| Error::InvalidInput(format!("no prime labeled p{} over {}", lab, p)))?
                .clone();
            let r = reduce(&mut pr, &alpha)?;
            emit(&ResidueOut {
                p: p.to_string(),
                label: format!("p{}", lab),
                residue: ff_out(&pr.om.tower, &r),
                residue_field_degree: pr.f.to_string(),
            });
        }
        Cmd::Crt(args) => {
            let targets: Result<Vec<ResidueTarget>, Error> =
                args.targets.iter().map(|t| parse_crt_target(&nf, t)).collect();
            let alpha = crt_solve(&nf, &targets?)?;
            emit(&GeneratorOut {
                p: "crt".into(),
                label: "crt".into(),
                element: elem_out(&nf, &alpha),
            });
        }
        Cmd::PBasis(args) => {
            let p = parse_int(&args.p)?;
            let d = montes_factorize(&nf, &p)?;
            let basis = p_integral_basis_from(&nf, &d)?;
            emit(&BasisOut {
                field: field_out(&nf, label),
                p: p.to_string(),
                elements: basis.iter().map(|b| elem_out(&nf, b)).collect(),
            });
        }
        Cmd::Index(args) => {
            let p = parse_int(&args.p)?;
            let d = montes_factorize(&nf, &p)?;
            emit(&IndexOut { p: p.to_string(), index: local_index_from(&d)?.to_string() });
        }
    }
    if cli.timings {
        eprintln!("command: {:?}", t_run.elapsed());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            let code = match e {
                Error::Internal(_) | Error::InconsistentLogVector | Error::SquarefreeUndecided => 3,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
