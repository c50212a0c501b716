//! Oracle suites behind `verify`.

use clap::ValueEnum;
use serde::Serialize;
use sre_purity::bench::{gamma_tensor_norm, magic_entanglement_balance, replica_expectation};
use sre_purity::channel::{exact_channel_output, CopyLayout};
use sre_purity::oracle::{
    a_alpha_exact, characteristic_distribution, haar_random, m_alpha_exact, psi_theta,
    single_qubit_stabilizer_states, CliffordCircuit,
};
use sre_purity::rng::stream_rng;
use sre_purity::{DensityMatrix, StateVector};

use crate::error::CliResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    All,
    /// Magic/entanglement balance of the coherent preparation.
    #[value(name = "theorem1", alias = "magic-entanglement")]
    MagicEntanglement,
    Replica,
    Monotone,
    Twirl,
    Normalization,
}

impl Suite {
    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Normalization,
                Suite::MagicEntanglement,
                Suite::Replica,
                Suite::Monotone,
                Suite::Twirl,
            ],
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::MagicEntanglement => "magic_entanglement",
            Suite::Replica => "replica",
            Suite::Monotone => "monotone",
            Suite::Twirl => "twirl",
            Suite::Normalization => "normalization",
        }
    }
}

/// Deliberate corruption used to check that the suites can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Negate every checked quantity before comparing it.
    Sign,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyRow {
    pub suite: &'static str,
    pub check: String,
    pub value: f64,
    pub requirement: String,
    pub pass: bool,
}

struct Ctx {
    sign: f64,
    states: Vec<(usize, StateVector)>,
    seed: u64,
}

fn below(suite: Suite, check: String, value: f64, tol: f64) -> VerifyRow {
    VerifyRow {
        suite: suite.name(),
        check,
        value,
        requirement: format!("< {tol:e}"),
        pass: value < tol,
    }
}

fn max_entry_diff(a: &DensityMatrix, b: &DensityMatrix, sign: f64) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x * sign - y).norm())
        .fold(0.0, f64::max)
}

fn for_n(ctx: &Ctx, n: usize) -> impl Iterator<Item = &StateVector> {
    ctx.states
        .iter()
        .filter(move |(k, _)| *k == n)
        .map(|(_, s)| s)
}

fn normalization(ctx: &Ctx, out: &mut Vec<VerifyRow>) -> CliResult<()> {
    let s = Suite::Normalization;
    for n in 1..=3 {
        let mut rng = stream_rng(ctx.seed, 100 + n as u64);
        let mut worst = 0.0f64;
        for _ in 0..ctx.states.len().max(1) {
            let psi = haar_random(n, &mut rng)?;
            let total: f64 = characteristic_distribution(&psi)?.probs().iter().sum();
            worst = worst.max((ctx.sign * total - 1.0).abs());
        }
        out.push(below(
            s,
            format!("characteristic distribution sums to 1, n={n}"),
            worst,
            1e-10,
        ));
    }
    for n in 1..=2 {
        let d = (1 << n) as f64;
        for alpha in 1..=3 {
            let mut worst = 0.0f64;
            for psi in for_n(ctx, n) {
                let p = exact_channel_output(psi, alpha)?.purity();
                worst = worst.max((ctx.sign * d * p - a_alpha_exact(psi, alpha)?).abs());
            }
            out.push(below(
                s,
                format!("d*purity of channel output = A, n={n} alpha={alpha}"),
                worst,
                1e-10,
            ));
        }
    }
    Ok(())
}

fn magic_entanglement(ctx: &Ctx, out: &mut Vec<VerifyRow>) -> CliResult<()> {
    let s = Suite::MagicEntanglement;
    for n in 1..=2 {
        for alpha in 1..=3 {
            let mut worst = 0.0f64;
            for psi in for_n(ctx, n) {
                let b = magic_entanglement_balance(psi, alpha)?;
                let lhs = ctx.sign * b.magic_term + ctx.sign * b.e2;
                worst = worst.max((lhs - b.ln_d).abs());
            }
            out.push(below(
                s,
                format!("(1-alpha)M + E2 - ln d, n={n} alpha={alpha}"),
                worst,
                1e-9,
            ));
        }
    }
    Ok(())
}

fn replica(ctx: &Ctx, out: &mut Vec<VerifyRow>) -> CliResult<()> {
    let s = Suite::Replica;
    for n in 1..=2 {
        for alpha in 1..=3 {
            let mut worst = 0.0f64;
            for psi in for_n(ctx, n) {
                let r = replica_expectation(psi, alpha)?;
                worst = worst.max((ctx.sign * r - a_alpha_exact(psi, alpha)?).abs());
            }
            out.push(below(
                s,
                format!("replica expectation = A, n={n} alpha={alpha}"),
                worst,
                1e-10,
            ));
        }
        for alpha in 1..=4 {
            let expected = if alpha % 2 == 0 { (1 << n) as f64 } else { 1.0 };
            let norm = ctx.sign * gamma_tensor_norm(alpha, n)?;
            out.push(below(
                s,
                format!("max |eig| of Gamma^n = {expected}, n={n} alpha={alpha}"),
                (norm - expected).abs(),
                1e-9,
            ));
        }
    }
    Ok(())
}

fn monotone(ctx: &Ctx, out: &mut Vec<VerifyRow>) -> CliResult<()> {
    let s = Suite::Monotone;
    let mut rng = stream_rng(ctx.seed, 200);
    let mut stabilizers = single_qubit_stabilizer_states();
    for _ in 0..20 {
        stabilizers.push(CliffordCircuit::random(2, &mut rng).apply(&StateVector::zero(2)?)?);
    }
    let mut worst = f64::NEG_INFINITY;
    for psi in &stabilizers {
        for alpha in 2..=4 {
            worst = worst.max(ctx.sign * m_alpha_exact(psi, alpha)?);
        }
    }
    out.push(below(
        s,
        format!("M on {} stabilizer states", stabilizers.len()),
        worst,
        1e-12,
    ));

    let m = ctx.sign * m_alpha_exact(&psi_theta(std::f64::consts::FRAC_PI_8), 2)?;
    out.push(VerifyRow {
        suite: s.name(),
        check: "M > 0 on a non-stabilizer state".into(),
        value: m,
        requirement: "> 0".into(),
        pass: m > 0.0,
    });

    let mut worst_inv = 0.0f64;
    let mut worst_add = 0.0f64;
    let ones: Vec<&StateVector> = for_n(ctx, 1).collect();
    for (i, psi) in for_n(ctx, 2).enumerate() {
        let c = CliffordCircuit::random(2, &mut rng);
        let moved = c.apply(psi)?;
        let a = ones[i % ones.len()];
        let joint = a.tensor(psi)?;
        for alpha in 2..=3 {
            let m0 = m_alpha_exact(psi, alpha)?;
            worst_inv = worst_inv.max((ctx.sign * m_alpha_exact(&moved, alpha)? - m0).abs());
            let sum = m_alpha_exact(a, alpha)? + m0;
            worst_add = worst_add.max((ctx.sign * m_alpha_exact(&joint, alpha)? - sum).abs());
        }
    }
    out.push(below(s, "Clifford invariance".into(), worst_inv, 1e-10));
    out.push(below(
        s,
        "additivity under tensor products".into(),
        worst_add,
        1e-10,
    ));
    Ok(())
}

fn twirl(ctx: &Ctx, out: &mut Vec<VerifyRow>) -> CliResult<()> {
    let s = Suite::Twirl;
    for n in 1..=2 {
        let mixed = DensityMatrix::maximally_mixed(n)?;
        for alpha in 2..=3 {
            let layout = CopyLayout::new(n, alpha)?;
            let (mut worst_local, mut worst_sub) = (0.0f64, 0.0f64);
            for psi in for_n(ctx, n) {
                let rho = exact_channel_output(psi, alpha)?;
                for i in 1..=alpha {
                    let local = rho.partial_trace(&layout.block(i))?;
                    worst_local = worst_local.max(max_entry_diff(&local, &mixed, ctx.sign));
                }
                for mask in 1..(1u32 << alpha) - 1 {
                    let keep: Vec<usize> = (1..=alpha)
                        .filter(|i| mask >> (i - 1) & 1 == 1)
                        .flat_map(|i| layout.block(i))
                        .collect();
                    let reduced = rho.partial_trace(&keep)?;
                    let fewer = exact_channel_output(psi, mask.count_ones() as usize)?;
                    worst_sub = worst_sub.max(max_entry_diff(&reduced, &fewer, ctx.sign));
                }
            }
            out.push(below(
                s,
                format!("single-copy marginal = I/d, n={n} alpha={alpha}"),
                worst_local,
                1e-10,
            ));
            out.push(below(
                s,
                format!("copy-subset marginal = fewer copies, n={n} alpha={alpha}"),
                worst_sub,
                1e-10,
            ));
        }
    }
    Ok(())
}

/// Runs `suite` on `states` Haar-random states per qubit count in {1, 2}.
pub fn run_suite(
    suite: Suite,
    states: usize,
    seed: u64,
    fault: Option<Fault>,
) -> CliResult<Vec<VerifyRow>> {
    let mut list = Vec::new();
    for n in 1..=2 {
        let mut rng = stream_rng(seed, n as u64);
        for _ in 0..states.max(1) {
            list.push((n, haar_random(n, &mut rng)?));
        }
    }
    let ctx = Ctx {
        sign: if fault == Some(Fault::Sign) {
            -1.0
        } else {
            1.0
        },
        states: list,
        seed,
    };
    let mut rows = Vec::new();
    for s in suite.expand() {
        match s {
            Suite::Normalization => normalization(&ctx, &mut rows)?,
            Suite::MagicEntanglement => magic_entanglement(&ctx, &mut rows)?,
            Suite::Replica => replica(&ctx, &mut rows)?,
            Suite::Monotone => monotone(&ctx, &mut rows)?,
            Suite::Twirl => twirl(&ctx, &mut rows)?,
            Suite::All => unreachable!("expanded above"),
        }
    }
    Ok(rows)
}
