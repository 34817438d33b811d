//! Input generators and reference computations shared by the integration
//! test targets.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use belief_calculus::frames::{Bba, FrameOfDiscernment, Subset};
use belief_calculus::oracle::gen;
use belief_calculus::operators::{self, LimitParams};
use belief_calculus::Opinion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn lp() -> LimitParams {
    LimitParams::default()
}

pub fn e(w: &Opinion) -> f64 {
    w.expectation().value()
}

/// Largest component difference, base rate included.
pub fn dist(x: &Opinion, y: &Opinion) -> f64 {
    x.max_abs_diff(y)
}

/// Operands of a well-defined sum: base rates, beliefs and expectations each
/// add up to at most 1.
pub fn addable_pair<R: Rng>(rng: &mut R) -> (Opinion, Opinion) {
    loop {
        let ax = rng.random_range(0.05..=0.45);
        let ay = rng.random_range(0.05..=0.95 - ax);
        let x = gen::opinion_with_base_rate(rng, ax);
        let y = gen::opinion_with_base_rate(rng, ay);
        if x.b() + y.b() <= 1.0 && e(&x) + e(&y) <= 1.0 {
            return (x, y);
        }
    }
}

/// `(x + y, y, x)`: a minuend and subtrahend whose difference is `x`.
///
/// Pairs whose raw sum has negative disbelief are clipped by `add` and
/// cannot be recovered; a sum also need not satisfy the subtraction
/// preconditions (its disbelief can exceed `d_y`). Both are redrawn.
pub fn subtractable<R: Rng>(rng: &mut R) -> (Opinion, Opinion, Opinion) {
    loop {
        let (x, y) = addable_pair(rng);
        if x.a() * (x.d() - y.b()) + y.a() * (y.d() - x.b()) < 0.0 {
            continue;
        }
        let sum = operators::add(&x, &y).expect("addable pair");
        if operators::subtract(&sum, &y).is_ok() {
            return (sum, y, x);
        }
    }
}

/// `(x · y, y, x)`.
pub fn divisible<R: Rng>(rng: &mut R) -> (Opinion, Opinion, Opinion) {
    let x = gen::opinion(rng);
    let y = gen::opinion(rng);
    let p = operators::multiply(&x, &y, &lp()).expect("interior base rates");
    (p, y, x)
}

/// `(x ⊔ y, y, x)`.
pub fn codivisible<R: Rng>(rng: &mut R) -> (Opinion, Opinion, Opinion) {
    let x = gen::opinion(rng);
    let y = gen::opinion(rng);
    let p = operators::comultiply(&x, &y, &lp()).expect("interior base rates");
    (p, y, x)
}

/// A (cluster) Dirichlet bba and one of its focal targets. With `atoms_only`
/// the clusters are singletons.
pub fn dirichlet_bba<R: Rng>(rng: &mut R, n: usize, atoms_only: bool) -> (Bba, Subset) {
    let frame = FrameOfDiscernment::numbered(n).unwrap();
    let theta = frame.theta();
    loop {
        let blocks: Vec<Subset> = if atoms_only {
            (0..n).map(Subset::atom).collect()
        } else {
            let mut bits = vec![0u64; n];
            for i in 0..n {
                bits[rng.random_range(0..n)] |= 1 << i;
            }
            bits.into_iter()
                .filter(|b| *b != 0)
                .map(Subset::from_bits)
                .collect()
        };
        let focal: Vec<Subset> = blocks
            .into_iter()
            .filter(|b| *b != theta && rng.random_bool(0.7))
            .collect();
        if focal.is_empty() {
            continue;
        }
        let target = focal[rng.random_range(0..focal.len())];
        let mut masses: Vec<(Subset, f64)> = focal
            .iter()
            .map(|s| (*s, rng.random::<f64>() + 1e-3))
            .collect();
        if rng.random_bool(0.7) {
            masses.push((theta, rng.random::<f64>() + 1e-3));
        }
        let total: f64 = masses.iter().map(|(_, m)| m).sum();
        for (_, m) in &mut masses {
            *m /= total;
        }
        return (Bba::new(frame, masses).unwrap(), target);
    }
}

/// Bayesian bba: all mass on atoms.
pub fn bayesian_bba<R: Rng>(rng: &mut R, n: usize) -> Bba {
    let frame = FrameOfDiscernment::numbered(n).unwrap();
    let w: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = w.iter().sum();
    Bba::new(frame, w.iter().enumerate().map(|(i, m)| (Subset::atom(i), m / total))).unwrap()
}

/// Four atoms, target `{t1, t2}` and masses on `{t1,t2,t3}` and `{t1,t3,t4}`
/// of `m + delta` and `m - delta`. At `delta = 0` the pignistic expectation
/// equals `b + a u`, so the two coarsening branches meet there.
pub fn boundary_bba(m: f64, delta: f64) -> (Bba, Subset) {
    let frame = FrameOfDiscernment::numbered(4).unwrap();
    let x = frame.parse_subset("t1,t2").unwrap();
    let y = frame.parse_subset("t1,t2,t3").unwrap();
    let z = frame.parse_subset("t1,t3,t4").unwrap();
    let rest = 1.0 - 2.0 * m;
    let bba = Bba::new(
        frame,
        [
            (y, m + delta),
            (z, m - delta),
            (Subset::atom(0), rest / 2.0),
            (Subset::atom(3), rest / 2.0),
        ],
    )
    .unwrap();
    (bba, x)
}

/// `P(x ∧ (y ∨ z))` for independent `x`, `y`, `z`.
pub fn and_of_or(px: f64, py: f64, pz: f64) -> f64 {
    px * (py + pz - py * pz)
}

/// `P((x ∧ y) ∨ (x ∧ z))` treating the two conjunctions as independent.
pub fn or_of_ands(px: f64, py: f64, pz: f64) -> f64 {
    let (p, q) = (px * py, px * pz);
    p + q - p * q
}

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// A `$ belcalc ...` line from the README with the output printed below it.
#[derive(Debug)]
pub struct GoldenExample {
    pub command: String,
    pub expected: String,
}

/// Every `$ ` command inside ```` ```console ```` blocks of the README.
pub fn readme_examples() -> Vec<GoldenExample> {
    let text = std::fs::read_to_string(workspace_root().join("README.md")).expect("README.md");
    let mut out: Vec<GoldenExample> = Vec::new();
    let mut in_block = false;
    for line in text.lines() {
        if !in_block {
            in_block = line.trim_end() == "```console";
            continue;
        }
        if line.trim_end() == "```" {
            in_block = false;
        } else if let Some(cmd) = line.strip_prefix("$ ") {
            out.push(GoldenExample {
                command: cmd.to_string(),
                expected: String::new(),
            });
        } else if let Some(ex) = out.last_mut() {
            ex.expected.push_str(line);
            ex.expected.push('\n');
        }
    }
    out
}

/// Runs an example from the workspace root and returns stdout followed by
/// stderr.
pub fn run_example(ex: &GoldenExample) -> Result<String, String> {
    let words = shlex::split(&ex.command).ok_or_else(|| format!("bad quoting: {}", ex.command))?;
    let (prog, args) = words.split_first().ok_or("empty command")?;
    if prog != "belcalc" {
        return Err(format!("unexpected program `{prog}`"));
    }
    let output = Command::new(env!("CARGO_BIN_EXE_belcalc"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .map_err(|e| e.to_string())?;
    let mut text = String::from_utf8_lossy(&output.stdout).into_owned();
    text.push_str(&String::from_utf8_lossy(&output.stderr));
    Ok(text)
}
