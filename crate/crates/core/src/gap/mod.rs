//! Construction of long runs of composites around `q0^k`.
//!
//! The pipeline: [`build_context`] fixes the windows and prime sets,
//! [`choose_vectors`] picks one admissible class per sieving prime, [`sift`]
//! keeps what those classes miss, [`pair_exceptions`] covers leftovers with
//! auxiliary primes, [`assemble_m0`] glues everything with the CRT, and
//! [`ScanPlan`] walks rows `q0 = m0 + 1 + r M` looking for prime `q0` whose
//! row is free of primes. Clean rows become [`GapCertificate`]s.

pub mod certificate;
pub mod context;
pub mod growth;
pub mod scan;
pub mod system;

pub use certificate::{certify_gap, verify_certificate, Certifier, GapCertificate, Provenance, TranscriptEntry, Window, Witness};
pub use context::{build_context, Overrides, SieveContext};
pub use growth::{g1, g2, g2_big, ln_big};
pub use scan::{scan_rows, RowResult, RowStatus, ScanPlan};
pub use system::{
    assemble_m0, choose_vectors, pair_exceptions, qr_exceptional, sift, PairingResult, ResidueSystem, SiftedSet,
    Strategy, SurvivorTag,
};

use num_bigint::BigUint;

use crate::Result;

/// Everything needed to scan rows for one context.
#[derive(Debug, Clone)]
pub struct Construction {
    pub system: ResidueSystem,
    pub sifted: SiftedSet,
    pub pairing: PairingResult,
    pub m0: BigUint,
    pub modulus: BigUint,
    pub plan: ScanPlan,
}

pub fn prepare(ctx: &SieveContext, strategy: Strategy, seed: u64) -> Result<Construction> {
    let system = choose_vectors(ctx, strategy, seed);
    let sifted = sift(ctx, &system);
    let pairing = pair_exceptions(ctx, &sifted);
    let (m0, modulus) = assemble_m0(ctx, &system, &pairing)?;
    let plan = ScanPlan::new(ctx, &m0, &modulus);
    Ok(Construction {
        system,
        sifted,
        pairing,
        m0,
        modulus,
        plan,
    })
}

impl Construction {
    /// Certificate for a clean row of this construction.
    pub fn certify_row(&self, ctx: &SieveContext, certifier: &Certifier, row: &RowResult) -> Result<GapCertificate> {
        let prov = Provenance {
            x: ctx.x,
            c: ctx.c,
            c0: ctx.c0,
            m0: self.m0.clone(),
            p_x: self.modulus.clone(),
            r: row.r,
        };
        certifier.certify_with(&row.q0, ctx.k, ctx.y, prov)
    }
}
