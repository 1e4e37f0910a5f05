//! Property suites with exact oracles, one per acceptance item.
//!
//! Every item draws its randomness from its own stream of the run seed, so
//! items can be run alone and still reproduce the full run.

mod oracle;
mod perm_items;
mod rpp_items;
mod space_items;
mod walk_items;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use rpp_items::{cover_instances, CoverInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// Reduced counts; finishes well under a minute.
    Quick,
    /// The sizes of the acceptance criteria.
    Standard,
    /// Standard plus large eigensolve cross-checks.
    Full,
}

impl Profile {
    pub fn pick<T>(self, quick: T, standard: T) -> T {
        match self {
            Profile::Quick => quick,
            _ => standard,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: Value) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemReport {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub profile: Profile,
    pub seed: u64,
    pub passed: bool,
    pub items: Vec<ItemReport>,
}

pub const ITEM_IDS: [u32; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];

pub fn item_name(id: u32) -> &'static str {
    match id {
        1 => "bias_matches_lambda",
        2 => "construction_quality",
        3 => "prime_field_exact_bias",
        4 => "quotient_lift_bias",
        5 => "cover_soundness",
        6 => "schreier_sims",
        7 => "greedy_solver",
        8 => "hitting_solver",
        9 => "block_reduction",
        10 => "random_walk_confinement",
        11 => "determinism",
        _ => "unknown",
    }
}

/// Generator for item `id`: stream `id` of the run seed.
pub fn item_rng(seed: u64, id: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    rng
}

pub fn run_item(id: u32, profile: Profile, seed: u64) -> ItemReport {
    let checks = match id {
        1 => space_items::bias_matches_lambda(profile, seed),
        2 => space_items::construction_quality(profile),
        3 => space_items::prime_field_exact(),
        4 => space_items::quotient_lift(profile, seed),
        5 => rpp_items::cover_soundness(profile, seed),
        6 => perm_items::schreier_sims_checks(profile, seed),
        7 => rpp_items::greedy_solver(profile, seed),
        8 => rpp_items::hitting_solver(profile, seed),
        9 => rpp_items::block_reduction(profile, seed),
        10 => walk_items::confinement(profile, seed),
        11 => determinism(seed),
        _ => vec![Check::new("known_item", false, Value::from(id))],
    };
    ItemReport {
        id,
        name: item_name(id).to_string(),
        passed: !checks.is_empty() && checks.iter().all(|c| c.passed),
        checks,
    }
}

/// Run the items in id order. Timings go to `on_item`, never into the
/// summary, so the summary depends only on `(profile, seed, ids)`.
pub fn run(profile: Profile, seed: u64, ids: &[u32], mut on_item: impl FnMut(&ItemReport, Duration)) -> Summary {
    let mut ids = ids.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let items: Vec<ItemReport> = ids
        .iter()
        .map(|&id| {
            let start = Instant::now();
            let report = run_item(id, profile, seed);
            on_item(&report, start.elapsed());
            report
        })
        .collect();
    Summary {
        profile,
        seed,
        passed: items.iter().all(|i| i.passed),
        items,
    }
}

/// Re-run two cheap items in-process and compare serialized reports.
fn determinism(seed: u64) -> Vec<Check> {
    [3u32, 9]
        .iter()
        .map(|&id| {
            let a = serde_json::to_string(&run_item(id, Profile::Quick, seed)).unwrap_or_default();
            let b = serde_json::to_string(&run_item(id, Profile::Quick, seed)).unwrap_or_default();
            Check::new(
                format!("item_{id}_repeatable"),
                !a.is_empty() && a == b,
                serde_json::json!({ "bytes": a.len() }),
            )
        })
        .collect()
}

/// Render an error as a failed check.
pub(crate) fn error_check(name: impl Into<String>, err: impl std::fmt::Display) -> Check {
    Check::new(name, false, serde_json::json!({ "error": err.to_string() }))
}
