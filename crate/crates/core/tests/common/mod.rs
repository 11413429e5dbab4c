//! Shared corpus for the integration suites.
#![allow(dead_code)]

pub mod oracles;

use hyperquiver::arrangement::{Arrangement, Hyperplane};
use hyperquiver::exactlin::Rat;
use hyperquiver::weights::Weights;

fn arr(dim: usize, rows: &[(&[i64], i64)]) -> Arrangement {
    Arrangement::new(dim, rows.iter().map(|(n, c)| Hyperplane::from_ints(n, *c)).collect()).unwrap()
}

/// One point in the line.
pub fn a1() -> Arrangement {
    arr(1, &[(&[1], 0)])
}

/// Two lines through the origin.
pub fn a2() -> Arrangement {
    arr(2, &[(&[1, 0], 0), (&[0, 1], 0)])
}

/// Three concurrent lines.
pub fn a3() -> Arrangement {
    arr(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[1, 1], 0)])
}

/// Generic triangle.
pub fn a4() -> Arrangement {
    arr(2, &[(&[1, 0], 0), (&[0, 1], 0), (&[1, 1], -1)])
}

/// y = 1, y = x, y = −x, x = 1, x = 0.
pub fn a5() -> Arrangement {
    arr(2, &[(&[0, 1], -1), (&[-1, 1], 0), (&[1, 1], 0), (&[1, 0], -1), (&[1, 0], 0)])
}

/// Coordinate planes in 3-space.
pub fn a6() -> Arrangement {
    arr(3, &[(&[1, 0, 0], 0), (&[0, 1, 0], 0), (&[0, 0, 1], 0)])
}

/// n lines through the origin: x + k y = 0.
pub fn concurrent(n: i64) -> Arrangement {
    Arrangement::new(2, (0..n).map(|k| Hyperplane::from_ints(&[1, k], 0)).collect()).unwrap()
}

pub fn corpus() -> Vec<(&'static str, Arrangement)> {
    vec![("A1", a1()), ("A2", a2()), ("A3", a3()), ("A4", a4()), ("A5", a5()), ("A6", a6())]
}

const FRACTIONS: [(i64, i64); 5] = [(1, 2), (1, 3), (1, 5), (1, 7), (2, 11)];

/// (1/2, 1/3, 1/5, …) truncated to the arrangement.
pub fn nonresonant(arr: &Arrangement) -> Weights {
    Weights::from_fractions(&FRACTIONS[..arr.len()])
}

/// A second non-resonant family: 1/(2k+3) shifted by 1/4.
pub fn nonresonant_alt(arr: &Arrangement) -> Weights {
    Weights::new((0..arr.len() as i64).map(|k| Rat::new(1, 2 * k + 3) + Rat::new(1, 4)).collect())
}

/// Resonant controls: all weights 1.
pub fn resonant(arr: &Arrangement) -> Weights {
    Weights::new(vec![Rat::one(); arr.len()])
}

pub fn weight_sets(arr: &Arrangement) -> Vec<Weights> {
    vec![nonresonant(arr), nonresonant_alt(arr)]
}
