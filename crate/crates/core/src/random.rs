//! Seeded random circuits for property checks and benchmarks.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;

use crate::ir::Circuit;

/// Uniform on `[−2π, 2π)`, replaced one time in ten by an angle where
/// phases are exact or wrap.
pub fn random_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    const SPECIAL: [f64; 6] = [0.0, FRAC_PI_2, -FRAC_PI_2, PI, -PI, TAU];
    if rng.gen_bool(0.1) {
        SPECIAL[rng.gen_range(0..SPECIAL.len())]
    } else {
        rng.gen_range(-TAU..TAU)
    }
}

/// A circuit on `1..=max_wires` wires whose tree depth is at most `max_depth`.
pub fn random_circuit<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    max_wires: usize,
    max_depth: usize,
) -> Circuit {
    let n = rng.gen_range(1..=max_wires.max(1));
    random_on(rng, d, n, max_depth)
}

/// A circuit of arity exactly `n` and tree depth at most `depth`, or at most
/// the least depth that fits `n` wires.
pub fn random_on<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize, depth: usize) -> Circuit {
    let floor = min_depth(n);
    if depth <= floor || rng.gen_bool(0.2) {
        return leaf(rng, d, n, depth.max(floor));
    }
    match rng.gen_range(0..10) {
        0..=3 => Circuit::seq(
            random_on(rng, d, n, depth - 1),
            random_on(rng, d, n, depth - 1),
        ),
        4..=6 => {
            let a = rng.gen_range(0..=n);
            Circuit::par(
                random_on(rng, d, a, depth - 1),
                random_on(rng, d, n - a, depth - 1),
            )
        }
        _ if n >= 1 => Circuit::ctrl(rng.gen_range(0..d), random_on(rng, d, n - 1, depth - 1)),
        _ => leaf(rng, d, n, depth),
    }
}

/// Depth of the shallowest leaf on `n` wires: swaps paired by `Par`.
fn min_depth(n: usize) -> usize {
    if n <= 2 {
        0
    } else {
        1 + min_depth(n - 2)
    }
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, d: usize, n: usize, budget: usize) -> Circuit {
    let pk = |rng: &mut R| Circuit::ctrl(rng.gen_range(0..d), Circuit::phase(random_angle(rng)));
    match (n, budget) {
        (0, _) => match rng.gen_range(0..4) {
            0 => Circuit::empty(),
            _ => Circuit::phase(random_angle(rng)),
        },
        (1, 0) => match rng.gen_range(0..3) {
            0 => Circuit::wire(),
            _ => Circuit::hadamard(rng.gen_range(0..d - 1)),
        },
        (1, _) => match rng.gen_range(0..5) {
            0 => Circuit::wire(),
            1 | 2 => Circuit::hadamard(rng.gen_range(0..d - 1)),
            _ => pk(rng),
        },
        (2, 0) => Circuit::swap(),
        (2, _) => match rng.gen_range(0..4) {
            0 => Circuit::swap(),
            1 => Circuit::ctrl(rng.gen_range(0..d), leaf(rng, d, 1, budget - 1)),
            _ => Circuit::par(leaf(rng, d, 1, budget - 1), leaf(rng, d, 1, budget - 1)),
        },
        _ => Circuit::par(leaf(rng, d, 2, budget - 1), leaf(rng, d, n - 2, budget - 1)),
    }
}
