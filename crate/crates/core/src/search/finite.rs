use serde::Serialize;

use super::SearchWindow;
use crate::algebra::Matrix;
use crate::colouring::integer_matrix;
use crate::error::{Error, Result};

/// Largest window the exhaustive colouring search accepts.
pub const MAX_WITNESS_SIZE: u64 = 25;

/// `{1}, {1, 2}, ..., {1, ..., 25}`.
pub fn default_schedule() -> Vec<SearchWindow> {
    (1..=MAX_WITNESS_SIZE).map(|n| SearchWindow::Positive { n }).collect()
}

/// A window on which every `r`-colouring has a monochromatic solution.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteWitness {
    pub set: Vec<i64>,
    pub colours: u32,
    /// The previous window in the schedule (empty for the first).
    pub predecessor: Vec<i64>,
    /// A colouring of the predecessor with no monochromatic solution, as
    /// colour classes.
    pub bad_colouring: Vec<Vec<i64>>,
    pub solutions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum WitnessOutcome {
    Found(FiniteWitness),
    BudgetExhausted {
        largest: Vec<i64>,
        bad_colouring: Vec<Vec<i64>>,
        reason: String,
    },
}

/// Nonzero solutions inside `elements`, as bitmasks of the positions used.
fn solution_masks(rows: &[Vec<i128>], elements: &[i64], budget: u64) -> Result<Vec<u32>> {
    let l = rows.first().map_or(0, Vec::len);
    let size = elements.len();
    if size == 0 {
        return Ok(Vec::new());
    }
    let cost = (0..l.saturating_sub(1)).try_fold(1u64, |acc, _| acc.checked_mul(size as u64));
    if l == 0 || cost.is_none_or(|c| c > budget) {
        return Err(Error::BudgetExceeded(format!("{size}^{} candidate tuples", l.saturating_sub(1))));
    }
    let position = |v: i128| elements.iter().position(|&e| e as i128 == v);
    let pivot = rows.iter().position(|r| r[l - 1] != 0);
    let mut masks = Vec::new();
    let mut idx = vec![0usize; l];
    'outer: loop {
        let mut residual: Vec<i128> = rows
            .iter()
            .map(|r| (0..l - 1).map(|j| r[j] * elements[idx[j]] as i128).sum())
            .collect();
        let prefix: u32 = idx[..l - 1].iter().fold(0, |m, &i| m | 1 << i);
        let prefix_nonzero = idx[..l - 1].iter().any(|&i| elements[i] != 0);
        match pivot {
            None if residual.iter().all(|&r| r == 0) => {
                for (j, &e) in elements.iter().enumerate() {
                    if prefix_nonzero || e != 0 {
                        masks.push(prefix | 1 << j);
                    }
                }
            }
            None => {}
            Some(k) => {
                let a = rows[k][l - 1];
                if residual[k] % a == 0 {
                    let x = -residual[k] / a;
                    for (r, row) in residual.iter_mut().zip(rows) {
                        *r += row[l - 1] * x;
                    }
                    if residual.iter().all(|&r| r == 0) && (x != 0 || prefix_nonzero) {
                        if let Some(j) = position(x) {
                            masks.push(prefix | 1 << j);
                        }
                    }
                }
            }
        }
        let mut d = l - 1;
        loop {
            if d == 0 {
                break 'outer;
            }
            idx[d - 1] += 1;
            if idx[d - 1] < size {
                break;
            }
            idx[d - 1] = 0;
            d -= 1;
        }
    }
    masks.sort_unstable();
    masks.dedup();
    // A superset of another solution set never decides anything new.
    let minimal: Vec<u32> = masks
        .iter()
        .copied()
        .filter(|&m| !masks.iter().any(|&o| o != m && o & m == o))
        .collect();
    Ok(minimal)
}

/// First `r`-colouring (colour of position 0 fixed, new colours introduced in
/// order) with no monochromatic solution mask, or `None` if every colouring
/// has one. `nodes` counts visited partial colourings.
fn good_colouring(size: usize, r: u32, masks: &[u32], nodes: &mut u64, budget: u64) -> Result<Option<Vec<u8>>> {
    let mut by_top: Vec<Vec<u32>> = vec![Vec::new(); size];
    for &m in masks {
        by_top[31 - m.leading_zeros() as usize].push(m);
    }
    let mut colouring = vec![0u8; size];
    let mut classes = vec![0u32; r as usize];
    fn dfs(
        i: usize,
        used: u32,
        r: u32,
        by_top: &[Vec<u32>],
        colouring: &mut [u8],
        classes: &mut [u32],
        nodes: &mut u64,
        budget: u64,
    ) -> Result<bool> {
        if i == colouring.len() {
            return Ok(true);
        }
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::BudgetExceeded(format!("{budget} partial colourings")));
        }
        let limit = if i == 0 { 1 } else { r.min(used + 1) };
        for c in 0..limit {
            let class = classes[c as usize] | 1 << i;
            if by_top[i].iter().any(|&m| m & !class == 0) {
                continue;
            }
            classes[c as usize] = class;
            colouring[i] = c as u8;
            if dfs(i + 1, used.max(c + 1), r, by_top, colouring, classes, nodes, budget)? {
                return Ok(true);
            }
            classes[c as usize] &= !(1 << i);
        }
        Ok(false)
    }
    let found = dfs(0, 0, r, &by_top, &mut colouring, &mut classes, nodes, budget)?;
    Ok(found.then_some(colouring))
}

fn classes_of(elements: &[i64], colouring: &[u8]) -> Vec<Vec<i64>> {
    let k = colouring.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut out = vec![Vec::new(); k];
    for (&e, &c) in elements.iter().zip(colouring) {
        out[c as usize].push(e);
    }
    out
}

/// The first window in `schedule` on which every `r`-colouring of its
/// elements admits a nonzero monochromatic solution of `A m = 0`, together
/// with a bad colouring of the window before it.
///
/// Windows must be integer windows of at most [`MAX_WITNESS_SIZE`] elements,
/// each extending the previous one.
pub fn finite_witness(a: &Matrix, r: u32, schedule: &[SearchWindow], budget: u64) -> Result<WitnessOutcome> {
    if !(1..=4).contains(&r) {
        return Err(Error::invalid("/colours", "colour count must be between 1 and 4"));
    }
    let rows: Vec<Vec<i128>> = integer_matrix(a)?
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| i64::try_from(x).map(i128::from))
                .collect::<std::result::Result<_, _>>()
        })
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::invalid("/matrix", "entries must fit in 64 bits"))?;
    let mut previous: Vec<i64> = Vec::new();
    let mut previous_bad: Vec<Vec<i64>> = Vec::new();
    let mut nodes = 0u64;
    for (s, w) in schedule.iter().enumerate() {
        let size = w.size()?;
        if !w.is_integral() || size > MAX_WITNESS_SIZE {
            return Err(Error::invalid(
                format!("/schedule/{s}"),
                format!("expected an integer window of at most {MAX_WITNESS_SIZE} elements"),
            ));
        }
        let elements: Vec<i64> = (0..size).map(|i| w.int_at(i)).collect();
        if !elements.starts_with(&previous) {
            return Err(Error::invalid(format!("/schedule/{s}"), "windows must extend each other"));
        }
        let outcome = solution_masks(&rows, &elements, budget)
            .and_then(|masks| Ok((good_colouring(elements.len(), r, &masks, &mut nodes, budget)?, masks.len())));
        let (good, solutions) = match outcome {
            Ok(x) => x,
            Err(Error::BudgetExceeded(reason)) => {
                return Ok(WitnessOutcome::BudgetExhausted {
                    largest: previous,
                    bad_colouring: previous_bad,
                    reason,
                })
            }
            Err(e) => return Err(e),
        };
        match good {
            None => {
                return Ok(WitnessOutcome::Found(FiniteWitness {
                    set: elements,
                    colours: r,
                    predecessor: previous,
                    bad_colouring: previous_bad,
                    solutions,
                }))
            }
            Some(c) => {
                previous_bad = classes_of(&elements, &c);
                previous = elements;
            }
        }
    }
    Ok(WitnessOutcome::BudgetExhausted {
        largest: previous,
        bad_colouring: previous_bad,
        reason: "schedule exhausted".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RingDescriptor;

    fn ints(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_i64(RingDescriptor::Integers, rows).unwrap()
    }

    /// Every colouring of `elements` by brute force.
    fn all_colourings_hit(rows: &[Vec<i128>], elements: &[i64], r: u32) -> bool {
        let masks = solution_masks(rows, elements, u64::MAX).unwrap();
        let n = elements.len() as u32;
        (0..(r as u64).pow(n)).all(|mut code| {
            let colours: Vec<u64> = (0..n)
                .map(|_| {
                    let c = code % r as u64;
                    code /= r as u64;
                    c
                })
                .collect();
            masks.iter().any(|&m| {
                let members: Vec<usize> = (0..n as usize).filter(|i| m >> i & 1 == 1).collect();
                members.iter().all(|&i| colours[i] == colours[members[0]])
            })
        })
    }

    #[test]
    fn schur_two_colours() {
        let WitnessOutcome::Found(w) = finite_witness(&ints(&[vec![1, 1, -1]]), 2, &default_schedule(), u64::MAX).unwrap() else {
            panic!()
        };
        assert_eq!(w.set, vec![1, 2, 3, 4, 5]);
        assert_eq!(w.bad_colouring, vec![vec![1, 4], vec![2, 3]]);
        let rows = vec![vec![1i128, 1, -1]];
        assert!(all_colourings_hit(&rows, &w.set, 2));
        assert!(!all_colourings_hit(&rows, &w.predecessor, 2));
    }

    #[test]
    fn constant_solutions() {
        let WitnessOutcome::Found(w) = finite_witness(&ints(&[vec![1, -1]]), 3, &default_schedule(), u64::MAX).unwrap() else {
            panic!()
        };
        assert_eq!(w.set, vec![1]);
        assert!(w.predecessor.is_empty());
    }

    #[test]
    fn not_regular_but_two_regular() {
        // x + y = 3z fails the columns condition, yet two colours are not
        // enough to avoid it: every 2-colouring of {1, ..., 9} has a solution.
        let a = ints(&[vec![1, 1, -3]]);
        let WitnessOutcome::Found(w) = finite_witness(&a, 2, &default_schedule(), 100_000_000).unwrap() else {
            panic!()
        };
        assert_eq!(w.set, (1..=9).collect::<Vec<_>>());
        let rows = vec![vec![1i128, 1, -3]];
        assert!(!all_colourings_hit(&rows, &w.predecessor, 2));
        let out = finite_witness(&a, 4, &default_schedule(), 100_000_000).unwrap();
        let WitnessOutcome::BudgetExhausted { largest, bad_colouring, .. } = out else { panic!() };
        assert_eq!(largest.len(), 25);
        assert!(bad_colouring.len() <= 4);
    }

    #[test]
    fn agrees_with_brute_force() {
        for rows in [vec![vec![1i64, 2, -1]], vec![vec![1, 1, -2]], vec![vec![2, -1]], vec![vec![1, 1, 1, -1]]] {
            let a = ints(&rows);
            let rows128: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
            let schedule: Vec<SearchWindow> = (1..=9).map(|n| SearchWindow::Positive { n }).collect();
            match finite_witness(&a, 2, &schedule, u64::MAX).unwrap() {
                WitnessOutcome::Found(w) => {
                    assert!(all_colourings_hit(&rows128, &w.set, 2));
                    assert!(!all_colourings_hit(&rows128, &w.predecessor, 2) || w.predecessor.is_empty());
                }
                WitnessOutcome::BudgetExhausted { largest, .. } => {
                    assert!(!all_colourings_hit(&rows128, &largest, 2));
                }
            }
        }
    }
}
