//! Wall-clock benchmarks with exact group-operation counts.

use std::time::{Duration, Instant};

use rand_core::{CryptoRng, RngCore};
use serde::{Deserialize, Serialize};

use crate::energy::{energy_compute, EnergyProfile, Work};
use crate::error::{Error, Result};
use crate::eta::{eta_keygen_from, eta_sign, eta_verify, EtaSigningState, INDEX_LEN, NONCE_LEN};
use crate::group::Group;
use crate::keystore::SchemeTag;
use crate::schnorr::{schnorr_keygen, schnorr_sign, schnorr_verify};
use crate::semecs::{
    semecs_keygen_from_secret, semecs_sign, semecs_verify_indexed, semecs_verify_search, SemecsSigningState,
};
use crate::state::InMemory;
use crate::suite::Suite;

/// Verification keys in the verify benchmarks are cycled through this many
/// indices rather than generating one token per iteration.
const VERIFY_POOL: u64 = 64;

const MESSAGE: &[u8] = b"sensor frame 0042: t=21.5C p=1013hPa rh=40%";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operation {
    Sign,
    Verify,
    /// SEMECS verification by binary search over sorted tokens.
    VerifySearch,
}

impl Operation {
    pub fn name(self) -> &'static str {
        match self {
            Operation::Sign => "sign",
            Operation::Verify => "verify",
            Operation::VerifySearch => "verify-search",
        }
    }
}

/// One row of a benchmark report. Energy columns stay empty until a profile
/// is applied.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub scheme: String,
    pub operation: String,
    pub iters: u64,
    pub median_ns: u64,
    pub p10_ns: u64,
    pub p90_ns: u64,
    /// Per iteration.
    pub exp_ops: f64,
    pub double_exp_ops: f64,
    /// Signature octets sent on top of the message.
    pub tx_bytes: u64,
    #[serde(rename = "compute_mJ")]
    pub compute_mj: Option<f64>,
    #[serde(rename = "comm_uJ")]
    pub comm_uj: Option<f64>,
}

impl BenchRecord {
    /// Fills the energy columns from the median time and `tx_bytes`.
    pub fn with_energy(mut self, profile: &EnergyProfile) -> Self {
        let e = energy_compute(profile, Work::Duration(Duration::from_nanos(self.median_ns)), self.tx_bytes * 8);
        self.compute_mj = Some(e.compute_mj);
        self.comm_uj = Some(e.comm_uj);
        self
    }
}

/// Signature octets beyond the message for each scheme.
pub fn tx_bytes<G: Group>(group: &G, scheme: SchemeTag) -> u64 {
    let l = group.scalar_len() as u64;
    match scheme {
        SchemeTag::Schnorr => 2 * l,
        SchemeTag::Eta => l + (NONCE_LEN + INDEX_LEN) as u64,
        SchemeTag::Semecs => l,
    }
}

fn percentile(sorted: &[u64], p: usize) -> u64 {
    sorted[(sorted.len() - 1) * p / 100]
}

/// Runs `op` `warmup + iters` times, timing each call and counting group
/// operations over the measured calls only.
fn measure<G: Group>(group: &G, iters: u64, mut op: impl FnMut(u64) -> Result<()>) -> Result<(Vec<u64>, f64, f64)> {
    let warmup = (iters / 10).clamp(1, 100);
    for i in 0..warmup {
        op(i)?;
    }
    let before = group.counter().snapshot();
    let mut times = Vec::with_capacity(iters as usize);
    for i in 0..iters {
        let t = Instant::now();
        op(warmup + i)?;
        times.push(t.elapsed().as_nanos() as u64);
    }
    let ops = group.counter().snapshot().since(&before);
    times.sort_unstable();
    Ok((times, ops.exp as f64 / iters as f64, ops.double_exp as f64 / iters as f64))
}

pub fn run_bench<G: Group, R: RngCore + CryptoRng>(
    suite: &Suite<G>,
    scheme: SchemeTag,
    op: Operation,
    iters: u64,
    rng: &mut R,
) -> Result<BenchRecord> {
    if iters == 0 {
        return Err(Error::InvalidParams("iterations must be at least 1".into()));
    }
    if op == Operation::VerifySearch && scheme != SchemeTag::Semecs {
        return Err(Error::UnsupportedCombo(format!("{} has no search verification", scheme.name())));
    }
    let g = &suite.group;
    let y = g.random_scalar(rng)?;

    let (times, exp_ops, double_exp_ops) = match (scheme, op) {
        (SchemeTag::Semecs, Operation::Sign) => {
            // Signing needs only y and the counter, so the capacity can be
            // arbitrary without paying for tokens.
            let mut state = SemecsSigningState::from_parts(y, 0, u32::MAX as u64);
            measure(g, iters, |_| semecs_sign(suite, &mut state, MESSAGE, InMemory).map(drop))?
        }
        (SchemeTag::Semecs, _) => {
            let (mut state, pk) = semecs_keygen_from_secret(suite, y, VERIFY_POOL)?;
            let mut envs = Vec::new();
            for _ in 0..VERIFY_POOL {
                envs.push(semecs_sign(suite, &mut state, MESSAGE, InMemory)?);
            }
            if op == Operation::VerifySearch {
                if pk.search_index().is_none() {
                    return Err(Error::UnsupportedCombo("key has colliding tokens; search is unavailable".into()));
                }
                let stripped: Vec<_> = envs.iter().map(|e| e.without_index()).collect();
                measure(g, iters, |i| {
                    let out = semecs_verify_search(suite, &pk, &stripped[(i % VERIFY_POOL) as usize]);
                    out.verified.map(drop).ok_or_else(|| Error::InvalidParams("benchmark envelope rejected".into()))
                })?
            } else {
                measure(g, iters, |i| {
                    semecs_verify_indexed(suite, &pk, &envs[(i % VERIFY_POOL) as usize])
                        .map(drop)
                        .ok_or_else(|| Error::InvalidParams("benchmark envelope rejected".into()))
                })?
            }
        }
        (SchemeTag::Schnorr, Operation::Sign) => {
            let kp = schnorr_keygen(suite, rng)?;
            measure(g, iters, |_| schnorr_sign(suite, &kp, MESSAGE, rng).map(drop))?
        }
        (SchemeTag::Schnorr, _) => {
            let kp = schnorr_keygen(suite, rng)?;
            let sig = schnorr_sign(suite, &kp, MESSAGE, rng)?;
            measure(g, iters, |_| {
                schnorr_verify(suite, &kp.public, MESSAGE, &sig)
                    .then_some(())
                    .ok_or_else(|| Error::InvalidParams("benchmark signature rejected".into()))
            })?
        }
        (SchemeTag::Eta, Operation::Sign) => {
            let r0 = g.random_scalar(rng)?;
            let mut state = EtaSigningState::from_parts(y, r0, 0, u32::MAX as u64);
            measure(g, iters, |_| eta_sign(suite, &mut state, MESSAGE, rng, InMemory).map(drop))?
        }
        (SchemeTag::Eta, _) => {
            let r0 = g.random_scalar(rng)?;
            let (mut state, pk) = eta_keygen_from(suite, y, r0, VERIFY_POOL)?;
            let mut sigs = Vec::new();
            for _ in 0..VERIFY_POOL {
                sigs.push(eta_sign(suite, &mut state, MESSAGE, rng, InMemory)?);
            }
            measure(g, iters, |i| {
                eta_verify(suite, &pk, MESSAGE, &sigs[(i % VERIFY_POOL) as usize])
                    .then_some(())
                    .ok_or_else(|| Error::InvalidParams("benchmark signature rejected".into()))
            })?
        }
    };

    Ok(BenchRecord {
        scheme: scheme.name().to_owned(),
        operation: op.name().to_owned(),
        iters,
        median_ns: percentile(&times, 50),
        p10_ns: percentile(&times, 10),
        p90_ns: percentile(&times, 90),
        exp_ops,
        double_exp_ops,
        tx_bytes: tx_bytes(g, scheme),
        compute_mj: None,
        comm_uj: None,
    })
}
