//! Named verification suites; each yields one outcome per checked criterion.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rigidwitt::pfnum::applicable_bound;
use serde::Serialize;

mod bounds;
mod generic;
mod oracles;
mod sharpness;
pub mod table;
mod tensor;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    GenericI2,
    Gp3Table,
    D14,
    Classify16,
    Sharpness16,
    TensorLift,
    Oracles,
    Bounds,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 9] = [
        "generic-i2",
        "gp3-table",
        "d14",
        "classify16",
        "sharpness16",
        "tensor-lift",
        "oracles",
        "bounds",
        "all",
    ];
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "generic-i2" => Suite::GenericI2,
            "gp3-table" => Suite::Gp3Table,
            "d14" => Suite::D14,
            "classify16" => Suite::Classify16,
            "sharpness16" => Suite::Sharpness16,
            "tensor-lift" => Suite::TensorLift,
            "oracles" => Suite::Oracles,
            "bounds" => Suite::Bounds,
            "all" => Suite::All,
            _ => return Err(format!("unknown suite `{s}`; expected one of {}", Suite::NAMES.join(", "))),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: String,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: {} ({:.1}s)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

/// An exact Pfister number computed by some suite.
#[derive(Debug, Clone, Serialize)]
pub struct GpRecord {
    pub source: String,
    pub n: u32,
    pub dim: usize,
    pub value: usize,
}

/// Shared state across suites: seed, computed values, cached samples.
#[derive(Debug, Default)]
pub struct Context {
    pub seed: u64,
    pub samples: u32,
    pub records: Vec<GpRecord>,
    pub table: Option<table::TableData>,
}

impl Context {
    pub fn new(seed: u64) -> Self {
        Context { seed, samples: table::SAMPLES_PER_DIM, records: Vec::new(), table: None }
    }

    pub fn record(&mut self, source: &str, n: u32, dim: usize, value: usize) {
        self.records.push(GpRecord { source: source.to_string(), n, dim, value });
    }

    /// Records whose value exceeds the bound for their dimension.
    pub fn bound_violations(&self) -> Vec<&GpRecord> {
        self.records
            .iter()
            .filter(|r| applicable_bound(r.n, r.dim as u64).map_or(true, |b| r.value as u64 > b))
            .collect()
    }
}

pub(crate) fn timed(
    id: &str,
    name: &str,
    f: impl FnOnce() -> Result<String, String>,
) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = match f() {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Outcome {
        id: id.to_string(),
        name: name.to_string(),
        pass,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Run one suite (or all of them in order), reporting through `emit` as
/// soon as each outcome is known.
pub fn run(suite: Suite, ctx: &mut Context, emit: &mut dyn FnMut(&Outcome)) -> Vec<Outcome> {
    let mut out = Vec::new();
    let mut push = |o: Outcome| {
        emit(&o);
        out.push(o);
    };
    let order: &[Suite] = match suite {
        Suite::All => &[
            Suite::GenericI2,
            Suite::Gp3Table,
            Suite::D14,
            Suite::Classify16,
            Suite::Sharpness16,
            Suite::TensorLift,
            Suite::Oracles,
            Suite::Bounds,
        ],
        _ => std::slice::from_ref(&suite),
    };
    for s in order {
        match s {
            Suite::GenericI2 => generic::run(ctx).into_iter().for_each(&mut push),
            Suite::Gp3Table => push(table::run_table(ctx)),
            Suite::D14 => push(table::run_d14(ctx)),
            Suite::Classify16 => push(table::run_classify16(ctx)),
            Suite::Sharpness16 => sharpness::run(ctx).into_iter().for_each(&mut push),
            Suite::TensorLift => push(tensor::run(ctx)),
            Suite::Oracles => oracles::run(ctx).into_iter().for_each(&mut push),
            Suite::Bounds => bounds::run(ctx).into_iter().for_each(&mut push),
            Suite::All => unreachable!(),
        }
    }
    out
}
