//! Built-in experiment presets.
//!
//! Presets 1–7 are full-scale parameter sets from the reference
//! experiments this harness reproduces, including the two NIST round-3
//! sets (N, q) = (509, 2048) and (677, 2048) and the recommended
//! (557, 8192). Full-scale runs cost a long LLL reduction; the `scale`
//! step derives a desk-scale variant by shrinking `N` (to a prime) and
//! scaling the weight parameter proportionally.

use crate::attack::{AStrategy, AttackConfig};
use crate::ntru::{NtruError, NtruParams};

/// One named preset. `r_success` is the largest oracle radius the
/// reference experiments report succeeding at full scale, and `r_fail`
/// the radius where they report failure; both are recorded as expectations
/// only, never asserted.
#[derive(Debug, Clone, Copy)]
pub struct ExamplePreset {
    pub index: u8,
    pub n: usize,
    pub d: usize,
    pub p: u64,
    pub q: u64,
    pub y: f64,
    pub r_radius: u64,
    pub strategy: AStrategy,
    pub r_success: u64,
    pub r_fail: u64,
}

pub fn example_preset(index: u8) -> Option<ExamplePreset> {
    let (n, d, q, y, r, strategy) = match index {
        1 => (239, 71, 256, 2.3, 9, AStrategy::Binary01),
        2 => (257, 91, 256, 2.3, 9, AStrategy::Binary01),
        3 => (283, 99, 1024, 2.3, 16, AStrategy::Binary01),
        4 => (307, 15, 1024, 2.5, 18, AStrategy::Binary01),
        5 => (509, 10, 2048, 2.5, 26, AStrategy::Pm2Shuffled),
        6 => (677, 20, 2048, 2.5, 17, AStrategy::Structured),
        7 => (557, 40, 8192, 2.5, 38, AStrategy::Structured),
        _ => return None,
    };
    Some(ExamplePreset {
        index,
        n,
        d,
        p: 3,
        q,
        y,
        r_radius: r,
        strategy,
        r_success: r,
        r_fail: r + 1,
    })
}

impl ExamplePreset {
    pub fn params(&self) -> Result<NtruParams, NtruError> {
        NtruParams::new(self.n, self.p, self.q, self.d)
    }

    pub fn attack_config(&self) -> AttackConfig {
        AttackConfig { a_strategy: self.strategy, ..AttackConfig::new(self.y, self.r_radius) }
    }
}

/// Desk-scale variant: replaces `N` (which must stay prime) and scales
/// the ternary weight `d` proportionally, keeping `p`, `q`, `y` and the
/// strategy.
pub fn scale_preset(preset: &ExamplePreset, n_new: usize) -> Result<ExamplePreset, NtruError> {
    let d_scaled = ((preset.d as f64 * n_new as f64 / preset.n as f64).round() as usize).max(1);
    let mut scaled = *preset;
    scaled.n = n_new;
    scaled.d = d_scaled;
    scaled.params()?; // validates primality and weights
    Ok(scaled)
}
