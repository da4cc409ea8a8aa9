//! Small worked networks used throughout the docs and tests.
//!
//! The same networks ship as text documents under `fixtures/` at the
//! workspace root; the integration tests check that both agree.

use crate::exact::Rational;
use crate::network::{Prn, Probability, State, StateFunction, StateSpace};

fn prob(s: &str) -> Probability {
    s.parse().expect("fixture probability")
}

type CoordMap = fn(u32, u32) -> (u32, u32);

fn binary_network(entries: &[(&str, CoordMap, &str)]) -> Prn {
    let space = StateSpace::binary(2).expect("binary space");
    let entries = entries
        .iter()
        .map(|&(name, f, p)| {
            let func = StateFunction::from_coords(name, &space, |c| {
                let (x, y) = f(c[0], c[1]);
                vec![x, y]
            })
            .expect("fixture function");
            (func, prob(p))
        })
        .collect();
    Prn::new(space, entries).expect("fixture network")
}

/// Four functions on `{0,1}^2`: `f1 = (x,y)`, `f2 = (x,0)`, `f3 = (1,y)`,
/// `f4 = (1,0)` with probabilities `.46, .21, .22, .11`.
///
/// Transition matrix:
///
/// ```text
/// .67  0   .33  0
/// .21 .46  .11 .22
///  0   0    1   0
///  0   0   .32 .68
/// ```
pub fn reference_network() -> Prn {
    binary_network(&[
        ("f1", |x, y| (x, y), ".46"),
        ("f2", |x, _| (x, 0), ".21"),
        ("f3", |_, y| (1, y), ".22"),
        ("f4", |_, _| (1, 0), ".11"),
    ])
}

/// The first three functions of [`reference_network`] with probabilities
/// `.47, .28, .25`.
pub fn reduced_network() -> Prn {
    binary_network(&[("f1", |x, y| (x, y), ".47"), ("f2", |x, _| (x, 0), ".28"), ("f3", |_, y| (1, y), ".25")])
}

/// Two conjugate finite dynamical systems on `{0,1}^2`:
/// `(x,y) -> (xy, y)` and `(x,y) -> (x, (x+1)y)`.
pub fn conjugate_fds_pair() -> (Prn, Prn) {
    let first = binary_network(&[("f1", |x, y| (x * y, y), "1")]);
    let second = binary_network(&[("f2", |x, y| (x, ((x + 1) % 2) * y), "1")]);
    (first, second)
}

/// The bijection conjugating the two systems of [`conjugate_fds_pair`].
pub fn conjugating_bijection() -> Vec<(State, State)> {
    [([1, 0], [1, 1]), ([0, 0], [1, 0]), ([0, 1], [0, 0]), ([1, 1], [0, 1])]
        .into_iter()
        .map(|(a, b)| (State::coords(a), State::coords(b)))
        .collect()
}

/// A two-function cascade on `{0,1}^2`: `(1,1)` stays with `.6` and drops
/// to `(1,0)` with `.4`; `(1,0)` stays with `.4` and falls to `(0,0)` with
/// `.6`; `(0,0)` and `(0,1)` are fixed.
pub fn cascade_network() -> Prn {
    binary_network(&[
        ("f1", |x, y| if (x, y) == (1, 0) { (0, 0) } else { (x, y) }, ".6"),
        ("f2", |x, y| if (x, y) == (1, 1) { (1, 0) } else { (x, y) }, ".4"),
    ])
}

/// The four self-maps of `Z_2`: `x`, `1`, `0`, `x + 1`, named `f1`..`f4`.
pub fn z2_maps() -> (StateSpace, [StateFunction; 4]) {
    let space = StateSpace::product(&[2]).expect("Z_2");
    let make =
        |name: &str, f: fn(u32) -> u32| StateFunction::from_coords(name, &space, |c| vec![f(c[0])]).expect("Z_2 map");
    let maps = [make("f1", |x| x), make("f2", |_| 1), make("f3", |_| 0), make("f4", |x| (x + 1) % 2)];
    (space, maps)
}

/// Superposition of the `Z_2` maps picked by `which` (1-based), with the
/// given probabilities.
pub fn z2_superposition(which: &[usize], probs: &[&str]) -> Prn {
    let (space, maps) = z2_maps();
    let entries = which.iter().zip(probs).map(|(&k, p)| (maps[k - 1].clone(), prob(p))).collect();
    Prn::new(space, entries).expect("Z_2 superposition")
}

/// A 4x4 row-stochastic block observed as the invariant lower-right part of
/// an 8-state transition matrix.
pub fn lower_invariant_block() -> Vec<Vec<Rational>> {
    [["0", ".544", ".456", "0"], ["0", ".337", "0", ".663"], [".113", ".448", ".439", "0"], ["0", ".011", "0", ".989"]]
        .iter()
        .map(|row| row.iter().map(|s| crate::exact::ratio(s)).collect())
        .collect()
}
