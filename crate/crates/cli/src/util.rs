use anyhow::Result;
use geolab_core::circle::{Atom, CircleGrid};
use geolab_core::domains::DomainDescriptor;
use geolab_core::geodesic::reconstruct;
use geolab_core::hclass::{Constrained, HParams};
use geolab_core::json;
use geolab_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cli::UtilCmd;
use crate::{report, EXIT_OK, EXIT_USAGE};

#[derive(Serialize, Deserialize)]
struct Config {
    count: usize,
    seed: u64,
}

#[derive(Serialize)]
struct Summary {
    payloads: usize,
    identical: usize,
    first_failure: Option<String>,
}

/// Serialize, parse, serialize again; both texts and values must agree.
fn round_trip<T: Serialize + DeserializeOwned + PartialEq>(value: &T) -> Result<bool> {
    let first = json::to_string(value)?;
    let back: T = serde_json::from_str(&first)?;
    Ok(back == *value && json::to_string(&back)? == first)
}

fn random_c(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0))
}

fn random_h(rng: &mut ChaCha8Rng) -> Result<HParams> {
    let free = vec![(0..rng.random_range(1..6)).map(|_| random_c(rng)).collect()];
    let tail = if rng.random_bool(0.5) {
        Constrained::pair(random_c(rng), rng.random_range(-10.0..10.0))
    } else {
        let d = C64::from_polar(
            rng.random_range(0.0..1.0),
            rng.random_range(0.0..std::f64::consts::TAU),
        );
        Constrained::positive(
            if rng.random_bool(0.5) { 1 } else { -1 },
            rng.random_range(0.1..10.0),
            d,
        )
    };
    Ok(HParams::new(free, vec![tail])?)
}

pub fn run(cmd: UtilCmd) -> Result<u8> {
    let UtilCmd::RoundtripTest {
        count,
        seed,
        output,
    } = cmd;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dom = DomainDescriptor::builtin("semiball")?;
    let grid = CircleGrid::new(64)?;
    let mut identical = 0;
    let mut first_failure = None;
    for k in 0..count {
        let h = random_h(&mut rng)?;
        let atom = Atom::new(
            rng.random_range(0.0..std::f64::consts::TAU),
            rng.random_range(0.0..10.0),
            vec![if rng.random_bool(0.5) { 1.0 } else { -1.0 }],
        )?;
        let ok = match k % 3 {
            0 => round_trip(&h)?,
            1 => round_trip(&atom)?,
            _ => {
                let semiball_h = HParams::new(
                    h.free.clone(),
                    vec![Constrained::pair(random_c(&mut rng), 1.0)],
                )?;
                match reconstruct(&dom, &semiball_h, grid, &[], &[rng.random_range(-1.0..1.0)]) {
                    Ok(cand) => round_trip(&cand)?,
                    Err(_) => round_trip(&dom)?,
                }
            }
        };
        if ok {
            identical += 1;
        } else if first_failure.is_none() {
            first_failure = Some(format!("payload {k}"));
        }
    }
    let code = if identical == count {
        EXIT_OK
    } else {
        EXIT_USAGE
    };
    let summary = Summary {
        payloads: count,
        identical,
        first_failure,
    };
    report::emit(
        "util roundtrip-test",
        code,
        Config { count, seed },
        summary,
        output.out.as_deref(),
        None,
    )?;
    Ok(code)
}
