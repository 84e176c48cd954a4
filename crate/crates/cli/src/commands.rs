use clap::{Parser, Subcommand};
use rigidwitt::ideals::{in_In, rigid_decompose};
use rigidwitt::pfnum::{bounds_table, classify14, classify16, pfister_number, PfisterCertificate, SearchOptions};
use rigidwitt::witt::{anisotropic_part, group_ring_equal, is_isotropic, value_set, witt_index};
use rigidwitt::{parse_class, parse_field, parse_form, print_form, print_pfister, DiagonalForm, Error, FieldDesc};
use rigidwitt_verify::{table, Context, Suite, DEFAULT_SEED};
use serde_json::{json, Value};

const PARSE: u8 = 2;
const PRECONDITION: u8 = 3;
const DEPTH_CAP: u8 = 4;
const SUITE_FAILED: u8 = 5;

/// Highest power of the fundamental ideal reported by `analyze`.
const LADDER_TOP: u32 = 8;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::UnknownVariable { .. } => PARSE,
            Error::DepthCapExceeded { .. } | Error::SearchBudgetExceeded { .. } => DEPTH_CAP,
            _ => PRECONDITION,
        };
        Failure::new(code, e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "rigidwitt", version, about = "Quadratic forms and Pfister numbers over rigid Laurent series fields")]
pub struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug)]
struct FormArgs {
    /// Field, e.g. `F3[t1,t2]`, `R[]`, `C[t1]` or `F9[t1]`.
    #[arg(long)]
    field: String,
    /// Form, e.g. `<1,-t1,t2>`, `<<t1,t2>>` or `t1*<<t2>> + <1,1>`.
    #[arg(long)]
    form: String,
}

impl FormArgs {
    fn parse(&self) -> Result<(FieldDesc, DiagonalForm), Failure> {
        let field = parse_field(&self.field)?;
        let form = parse_form(&self.form, &field)?;
        Ok((field, form))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimension, anisotropic part, Witt index, value set and ideal membership.
    Analyze(#[command(flatten)] FormArgs),
    /// Exact Pfister number with a certificate.
    PfisterNumber {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        n: usize,
        /// Also compute the unscaled number P_n.
        #[arg(long)]
        unscaled: bool,
        /// Give up (exit 4) instead of searching beyond this many terms.
        #[arg(long)]
        depth_cap: Option<usize>,
        /// Search node budget.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Classify an anisotropic I^3 form of dimension 14 or 16.
    Classify {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["14", "16"]))]
        dim: String,
    },
    /// Split the form along the valuation in which `a` is a uniformizer.
    Decompose {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        at: String,
    },
    /// CSV of the bounds for even dimensions up to `dmax`.
    Bounds {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        dmax: u64,
    },
    /// CSV of the largest Pfister number over seeded random samples.
    Tabulate {
        #[arg(long, default_value = "F3[t1,t2,t3,t4,t5]")]
        field: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Comma separated even dimensions.
        #[arg(long, value_delimiter = ',', default_values_t = table::TABLE_DIMS)]
        dims: Vec<usize>,
        #[arg(long, default_value_t = table::SAMPLES_PER_DIM as usize)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Run a named verification suite; exits 5 if any criterion fails.
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn emit(json: bool, doc: Value, text: impl FnOnce() -> String) {
    if json {
        let mut doc = doc;
        doc["schema"] = json!(1);
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        print!("{}", text());
    }
}

pub fn run(cli: Cli) -> Result<u8, Failure> {
    let json = cli.json;
    match cli.command {
        Command::Analyze(args) => analyze(json, &args),
        Command::PfisterNumber { form, n, unscaled, depth_cap, budget } => {
            let mut opts = SearchOptions { depth_cap, ..SearchOptions::default() };
            if let Some(b) = budget {
                opts.node_budget = b;
            }
            pfister(json, &form, n, unscaled, opts)
        }
        Command::Classify { form, dim } => classify(json, &form, &dim),
        Command::Decompose { form, at } => decompose(json, &form, &at),
        Command::Bounds { n, dmax } => bounds(json, n, dmax),
        Command::Tabulate { field, n, dims, samples, seed } => tabulate(json, &field, n, &dims, samples, seed),
        Command::Verify { suite, seed } => verify(json, &suite, seed),
    }
}

fn analyze(json: bool, args: &FormArgs) -> Result<u8, Failure> {
    let (field, phi) = args.parse()?;
    let an = anisotropic_part(&phi);
    let iw = witt_index(&phi);
    let status = if an.is_zero() {
        "hyperbolic"
    } else if is_isotropic(&phi) {
        "isotropic"
    } else {
        "anisotropic"
    };
    let values: Vec<String> = value_set(&phi).into_iter().map(|a| field.print_class(a)).collect();
    let ladder: Vec<bool> = (1..=LADDER_TOP).map(|n| in_In(&phi, n)).collect();
    let det = field.print_class(phi.determinant());
    let disc = field.print_class(phi.discriminant());
    let doc = json!({
        "command": "analyze",
        "field": field.to_string(),
        "form": print_form(&phi),
        "dim": phi.dim(),
        "anisotropic_part": print_form(&an),
        "witt_index": iw,
        "status": status,
        "value_set": values,
        "ideal_ladder": ladder,
        "determinant": det,
        "discriminant": disc,
    });
    emit(json, doc, || {
        let ladder: Vec<String> = ladder
            .iter()
            .enumerate()
            .map(|(i, &m)| format!("I^{}:{}", i + 1, if m { "yes" } else { "no" }))
            .collect();
        format!(
            "field: {field}\nform: {}\ndim: {}\nanisotropic part: {} (dim {})\nWitt index: {iw}\nstatus: {status}\nvalue set: {{{}}}\nideal ladder: {}\ndeterminant: {det}\ndiscriminant: {disc}\n",
            print_form(&phi),
            phi.dim(),
            print_form(&an),
            an.dim(),
            values.join(", "),
            ladder.join(" "),
        )
    });
    Ok(0)
}

fn certificate_text(label: &str, n: usize, k: usize, cert: &PfisterCertificate) -> String {
    let mut out = format!("{label}_{n} = {k}\n");
    for t in &cert.terms {
        out.push_str(&format!("  {}\n", print_pfister(&cert.field, t)));
    }
    out.push_str(&format!("  verified: {}\n", cert.verify()));
    out
}

fn pfister(json: bool, args: &FormArgs, n: usize, unscaled: bool, opts: SearchOptions) -> Result<u8, Failure> {
    let (_, phi) = args.parse()?;
    let (gp, cert) = pfister_number(&phi, n, &opts)?;
    let mut doc = json!({
        "command": "pfister-number",
        "n": n,
        "form": print_form(&phi),
        "gp": gp,
        "certificate": cert.to_json(),
        "verified": cert.verify(),
    });
    let mut text = certificate_text("GP", n, gp, &cert);
    if unscaled {
        let (p, ucert) = pfister_number(&phi, n, &SearchOptions { unscaled: true, ..opts })?;
        doc["p"] = json!(p);
        doc["unscaled_certificate"] = json!(ucert.to_json());
        text.push_str(&certificate_text("P", n, p, &ucert));
    }
    emit(json, doc, || text);
    Ok(0)
}

fn classify(json: bool, args: &FormArgs, dim: &str) -> Result<u8, Failure> {
    let (field, phi) = args.parse()?;
    let phi = anisotropic_part(&phi);
    let (mut doc, text) = if dim == "14" {
        let r = classify14(&phi)?;
        let mut text = certificate_text("GP", 3, r.gp3, &r.certificate);
        text.push_str(&format!("two-term certificates: {}\n", r.two_term_certificates));
        match &r.subform {
            Some((s, rest)) => text.push_str(&format!("GP_2 subform: {} + {}\n", print_pfister(&field, s), print_form(rest))),
            None => text.push_str("GP_2 subform: none\n"),
        }
        match &r.pure_part_shape {
            Some(p) => text.push_str(&format!(
                "pure-part shape: {} * ({}' - {}')\n",
                field.print_class(p.s),
                print_pfister(&field, &p.tau1),
                print_pfister(&field, &p.tau2)
            )),
            None => text.push_str("pure-part shape: none\n"),
        }
        text.push_str(&format!("equivalence holds: {}\nflagged: {}\n", r.equivalence_holds, r.flagged));
        (r.to_json(), text)
    } else {
        let r = classify16(&phi)?;
        let mut text = certificate_text("GP", 3, r.gp3, &r.certificate);
        text.push_str(&format!(
            "GP_2 subform: {} + {}\n",
            print_pfister(&field, &r.subform.0),
            print_form(&r.subform.1)
        ));
        let parts: Vec<String> = r.gp2_decomposition.iter().map(|s| print_pfister(&field, s)).collect();
        text.push_str(&format!("GP_2 decomposition: {}\n", parts.join(" _|_ ")));
        text.push_str(&format!(
            "biquadratic splitting: sqrt({}), sqrt({})\n",
            field.print_class(r.biquadratic.0),
            field.print_class(r.biquadratic.1)
        ));
        match r.quadratic {
            Some(a) => text.push_str(&format!("quadratic splitting: sqrt({})\n", field.print_class(a))),
            None => text.push_str("quadratic splitting: none\n"),
        }
        (r.to_json(), text)
    };
    doc["command"] = json!("classify");
    doc["dim"] = json!(phi.dim());
    emit(json, doc, || text);
    Ok(0)
}

fn decompose(json: bool, args: &FormArgs, at: &str) -> Result<u8, Failure> {
    let (field, phi) = args.parse()?;
    let a = parse_class(at, &field)?;
    let split = rigid_decompose(&phi, a)?;
    let consistent = group_ring_equal(&anisotropic_part(&phi), &split.recombine());
    if !consistent {
        return Err(Error::InternalContradiction("decomposition does not recombine to the input".into()).into());
    }
    let t = field.print_class(split.t);
    let doc = json!({
        "command": "decompose",
        "form": print_form(&phi),
        "at": field.print_class(a),
        "t": t,
        "sigma": print_form(&split.sigma),
        "tau": print_form(&split.tau),
        "recombines": consistent,
    });
    emit(json, doc, || {
        format!(
            "phi = sigma + <<-t>> tau in the Witt ring\nt: {t}\nsigma: {}\ntau: {}\n",
            print_form(&split.sigma),
            print_form(&split.tau)
        )
    });
    Ok(0)
}

fn bounds(json: bool, n: u32, dmax: u64) -> Result<u8, Failure> {
    let rows = bounds_table(n, dmax)?;
    let bound = |d: u64| rigidwitt::pfnum::applicable_bound(n, d).ok();
    if json {
        let rows: Vec<Value> = rows
            .iter()
            .map(|r| {
                let mut v = json!(r);
                v["bound"] = json!(bound(r.d));
                v
            })
            .collect();
        emit(true, json!({ "command": "bounds", "n": n, "rows": rows }), String::new);
        return Ok(0);
    }
    println!("d,bound,two_pfister,three_pfister,coarse,poly,faulhaber_poly,lower_generic");
    for r in &rows {
        println!(
            "{},{},{},{},{},{},{},{}",
            r.d,
            bound(r.d).map_or(String::new(), |b| b.to_string()),
            r.two_pfister,
            r.three_pfister,
            r.coarse,
            r.poly,
            r.faulhaber_poly,
            r.lower_generic
        );
    }
    Ok(0)
}

fn tabulate(json: bool, field: &str, n: usize, dims: &[usize], samples: usize, seed: u64) -> Result<u8, Failure> {
    let field = parse_field(field)?;
    let rows = table::tabulate(&field, n, dims, samples, seed)?;
    if json {
        emit(
            true,
            json!({ "command": "tabulate", "field": field.to_string(), "n": n, "seed": seed, "rows": rows }),
            String::new,
        );
        return Ok(0);
    }
    println!("d,window_lo,window_hi,samples,rejected,max_gp,histogram");
    for r in &rows {
        let hist: Vec<String> = r.histogram.iter().map(|(k, c)| format!("{k}:{c}")).collect();
        println!(
            "{},{},{},{},{},{},{}",
            r.d,
            r.window.0,
            r.window.1,
            r.samples,
            r.rejected,
            r.max_gp,
            hist.join(";")
        );
    }
    Ok(0)
}

fn verify(json: bool, suite: &str, seed: u64) -> Result<u8, Failure> {
    let suite: Suite = suite.parse().map_err(|e: String| Failure::new(1, e))?;
    let mut ctx = Context::new(seed);
    let outcomes = rigidwitt_verify::run(suite, &mut ctx, &mut |o| {
        if !json {
            println!("{o}");
        }
    });
    let pass = outcomes.iter().all(|o| o.pass);
    if json {
        emit(
            true,
            json!({ "command": "verify", "seed": seed, "pass": pass, "outcomes": outcomes }),
            String::new,
        );
    } else {
        let failed = outcomes.iter().filter(|o| !o.pass).count();
        println!("{} of {} criteria passed", outcomes.len() - failed, outcomes.len());
    }
    Ok(if pass { 0 } else { SUITE_FAILED })
}
