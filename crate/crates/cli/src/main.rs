use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use polyvir::binduced::{BElement, BInducedModule, TailModuleSpec};
use polyvir::character::ExpPolyCharacter;
use polyvir::config::{parse_checked, CharacterConfig, TensorConfig};
use polyvir::induced::{FactorialReading, InducedModule, ModuleElement, SmallDegreeReading};
use polyvir::tensor::{
    genf_tensor_map, iso_decide, restricted_tensor_map, restricted_verdict, simplicity_verdict, TensorElement,
};
use polyvir::verify::{run_suite, SuiteOptions, SUITES};
use polyvir::{Error, Field, LaurentPoly, SparseVec, VirElement, VirModule};

#[derive(Parser)]
#[command(name = "polyvir", version, about = "Exact computations with polynomial subalgebras of the Virasoro algebra")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Base field for input scalars, overriding the file's "field".
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bracket of two Virasoro elements ({"x","y"}) or Laurent polynomials ({"f","g"}).
    Bracket {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Action of an element on a vector of an induced, b_m-induced or tensor module.
    Act {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Checks the recurrence of a character and reports its degree profile.
    CharValidate {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Splits a character of b_m^f into its Vir^f and b_m parts.
    CharSplit {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Decomposes a character of Vir^f into single-root characters.
    CharDecompose {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Reduces a vector to the generator line by the simplicity argument.
    Reduce {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
        j_window: u32,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
    },
    /// Simplicity verdict for a tensor product or a restricted character.
    Simplicity {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        kac_level: u32,
    },
    /// Decides isomorphism of two tensor products given as {"a","b"}.
    Iso {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Runs a named verification suite, or "all".
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 3)]
        nmax: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// "corrected" or "literal" reading of the factorial and small-degree statements.
        #[arg(long, default_value = "corrected")]
        reading: String,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u32).range(1..))]
        j_window: u32,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Compares V^f_μ (or V^{f,m}_μ) with its tensor decomposition on word slices.
    TensorMap {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Invalid(String),
    /// A report was produced but a check failed.
    Check(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SearchExhausted { .. } | Error::StepLimit(_) => Failure::Check(json!({ "error": e.to_string() })),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn checked(report: Value, ok: bool) -> Outcome {
    if ok {
        Ok(report)
    } else {
        Err(Failure::Check(report))
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load<T: DeserializeOwned + Serialize>(path: &Path, field: Option<Field>) -> Result<T, Failure> {
    Ok(parse_checked(read_json(path)?, field)?)
}

/// A JSON object whose variant is chosen by which of `keys` it contains.
struct Input {
    obj: serde_json::Map<String, Value>,
    field: Option<Field>,
}

impl Input {
    fn new(raw: Value, field: Option<Field>) -> Result<Self, Failure> {
        match raw {
            Value::Object(obj) => Ok(Input { obj, field }),
            _ => Err(Failure::Invalid("input must be a JSON object".into())),
        }
    }

    /// The single key of `keys` present in the input.
    fn variant(&self, keys: &[&'static str]) -> Result<&'static str, Failure> {
        let found: Vec<_> = keys.iter().copied().filter(|k| self.obj.contains_key(*k)).collect();
        match found[..] {
            [k] => Ok(k),
            _ => Err(Failure::Invalid(format!("input needs exactly one of {keys:?}"))),
        }
    }

    /// Uses the `"field"` of a nested config when no flag was given.
    fn inherit_field(&mut self, key: &str) {
        if self.field.is_none() {
            self.field = self.obj.get(key).and_then(|c| c.get("field")).and_then(|f| serde_json::from_value(f.clone()).ok());
        }
    }

    fn take<T: DeserializeOwned + Serialize>(&mut self, key: &str) -> Result<Option<T>, Failure> {
        let field = Some(self.field.unwrap_or_default());
        match self.obj.remove(key) {
            None => Ok(None),
            Some(v) if key == "character" || key == "tensor" => Ok(Some(parse_checked(v, self.field)?)),
            Some(v) => Ok(Some(parse_checked(v, field)?)),
        }
    }

    fn need<T: DeserializeOwned + Serialize>(&mut self, key: &str) -> Result<T, Failure> {
        self.take(key)?.ok_or_else(|| Failure::Invalid(format!("missing \"{key}\"")))
    }

    fn finish(self) -> Result<(), Failure> {
        match self.obj.keys().next() {
            Some(k) => Err(Failure::Invalid(format!("unknown key \"{k}\""))),
            None => Ok(()),
        }
    }

    /// The acting element, given as `"x"` in `Vir` or `"g"` in `C[t^±]`.
    fn operator(&mut self) -> Result<VirElement, Failure> {
        match self.variant(&["x", "g"])? {
            "x" => self.need("x"),
            _ => Ok(VirElement::from_laurent(&self.need::<LaurentPoly>("g")?)),
        }
    }
}

fn cmd_bracket(mut input: Input) -> Outcome {
    let out = match input.variant(&["x", "f"])? {
        "x" => to_json(&input.need::<VirElement>("x")?.bracket(&input.need("y")?)),
        _ => to_json(&input.need::<LaurentPoly>("f")?.lie_bracket(&input.need("g")?)),
    };
    input.finish()?;
    Ok(json!({ "bracket": out }))
}

fn act_on<M: VirModule>(m: &M, x: &VirElement, v: Option<SparseVec<M::Index>>) -> SparseVec<M::Index> {
    let v = v.unwrap_or_else(|| m.generator());
    m.act(x, &v)
}

fn cmd_act(mut input: Input) -> Outcome {
    let kind = input.variant(&["character", "tail", "tensor"])?;
    input.inherit_field(kind);
    let x = input.operator()?;
    let out = match kind {
        "character" => {
            let cfg: CharacterConfig = input.need(kind)?;
            match cfg.restricted()? {
                Some(rc) => to_json(&act_on(&BInducedModule::from_restricted(&rc), &x, input.take::<BElement>("v")?)),
                None => to_json(&act_on(&InducedModule::new(cfg.character()?), &x, input.take::<ModuleElement>("v")?)),
            }
        }
        "tail" => {
            let tail: TailModuleSpec = input.need(kind)?;
            to_json(&act_on(&BInducedModule::from_tail(&tail)?, &x, input.take::<BElement>("v")?))
        }
        _ => {
            let cfg: TensorConfig = input.need(kind)?;
            to_json(&act_on(&cfg.spec()?.module()?, &x, input.take::<TensorElement>("v")?))
        }
    };
    input.finish()?;
    Ok(json!({ "result": out }))
}

fn cmd_validate(cfg: CharacterConfig) -> Outcome {
    let mu = cfg.character()?;
    let restricted = cfg.restricted()?.is_some();
    let valid = mu.validate(-10..=10);
    let report = json!({
        "valid": valid,
        "range": [-10, 10],
        "modulus": mu.modulus(),
        "degree_profile": mu.degree_profile(),
        "large_degree": mu.is_large_degree(),
        "restricted": restricted,
    });
    checked(report, valid)
}

fn cmd_split(cfg: CharacterConfig) -> Outcome {
    let rc = cfg.restricted()?.ok_or_else(|| Failure::Invalid("char-split needs a \"restriction\"".into()))?;
    let split = rc.split_muhat();
    let closed = if rc.m() >= 0 { Some(rc.closed_forms()?) } else { None };
    Ok(json!({ "m": rc.m(), "split": split, "closed_forms": closed }))
}

fn cmd_decompose(cfg: CharacterConfig) -> Outcome {
    let mu = cfg.character()?;
    let parts = mu.decompose()?;
    let round_trip = ExpPolyCharacter::compose(&parts)? == mu;
    checked(json!({ "parts": parts, "round_trip": round_trip }), round_trip)
}

fn cmd_reduce(mut input: Input, window: u32, max_steps: usize) -> Outcome {
    let kind = input.variant(&["character", "tensor"])?;
    input.inherit_field(kind);
    let out = if kind == "character" {
        let cfg: CharacterConfig = input.need(kind)?;
        let v: ModuleElement = input.need("v")?;
        let steps = InducedModule::new(cfg.character()?).reduce_to_generator(&v, window, max_steps)?;
        let result = steps.last().map_or(v, |s| s.w.clone());
        json!({ "steps": steps, "result": result })
    } else {
        let cfg: TensorConfig = input.need(kind)?;
        let v: TensorElement = input.need("v")?;
        to_json(&cfg.spec()?.module()?.cyclic_reduce(&v, window, max_steps)?)
    };
    input.finish()?;
    Ok(out)
}

fn cmd_simplicity(path: &Path, field: Option<Field>, kac_level: u32) -> Outcome {
    let raw = read_json(path)?;
    let report = if raw.get("restriction").is_some() {
        let cfg: CharacterConfig = parse_checked(raw, field)?;
        let rc = cfg.restricted()?.expect("restriction present");
        restricted_verdict(&rc, kac_level)?
    } else {
        let cfg: TensorConfig = parse_checked(raw, field)?;
        simplicity_verdict(&cfg.spec()?, kac_level)?
    };
    Ok(to_json(&report))
}

#[derive(Serialize, Deserialize)]
struct IsoInput {
    a: TensorConfig,
    b: TensorConfig,
}

fn cmd_iso(input: IsoInput) -> Outcome {
    Ok(to_json(&iso_decide(&input.a.spec()?, &input.b.spec()?)))
}

fn cmd_verify(suite: &str, opts: &SuiteOptions) -> Outcome {
    if suite == "all" {
        let mut reports = Vec::new();
        let mut ok = true;
        for s in SUITES {
            let r = run_suite(s, opts)?;
            ok &= r.failed == 0;
            reports.push(r);
        }
        return checked(json!({ "reports": reports }), ok);
    }
    let r = run_suite(suite, opts)?;
    let ok = r.failed == 0;
    checked(to_json(&r), ok)
}

fn cmd_tensor_map(cfg: CharacterConfig, depth: u32) -> Outcome {
    let report = match cfg.restricted()? {
        Some(rc) => restricted_tensor_map(&rc, depth)?,
        None => genf_tensor_map(&cfg.character()?.decompose()?, depth)?,
    };
    let ok = report.passed;
    checked(to_json(&report), ok)
}

fn run(cli: Cli) -> Outcome {
    let field = cli.field;
    match cli.cmd {
        Cmd::Bracket { spec } => cmd_bracket(Input::new(read_json(&spec)?, field)?),
        Cmd::Act { spec } => cmd_act(Input::new(read_json(&spec)?, field)?),
        Cmd::CharValidate { spec } => cmd_validate(load(&spec, field)?),
        Cmd::CharSplit { spec } => cmd_split(load(&spec, field)?),
        Cmd::CharDecompose { spec } => cmd_decompose(load(&spec, field)?),
        Cmd::Reduce { spec, j_window, max_steps } => cmd_reduce(Input::new(read_json(&spec)?, field)?, j_window, max_steps),
        Cmd::Simplicity { spec, kac_level } => cmd_simplicity(&spec, field, kac_level),
        Cmd::Iso { spec } => cmd_iso(load(&spec, field)?),
        Cmd::Verify { suite, nmax, seed, reading, j_window, depth } => {
            let opts = SuiteOptions {
                nmax,
                seed,
                factorial_reading: reading.parse::<FactorialReading>()?,
                small_degree_reading: reading.parse::<SmallDegreeReading>()?,
                j_window,
                depth,
            };
            cmd_verify(&suite, &opts)
        }
        Cmd::TensorMap { spec, depth } => cmd_tensor_map(load(&spec, field)?, depth),
    }
}

fn emit(v: &Value) {
    let mut out = std::io::stdout().lock();
    // A closed pipe is not an error for a report printer.
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(v) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Check(v)) => {
            emit(&v);
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
