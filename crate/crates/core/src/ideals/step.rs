use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// Total function `ℕ → ℕ` (with `ℕ = {1, 2, …}` as argument set) given by a
/// finite table followed by an affine tail with non-negative slope.
///
/// `f(j) = table[j-1]` for `j ≤ table.len()`, then
/// `f(j) = offset + slope·(j - table.len() - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StepFunction {
    pub table: Vec<u64>,
    pub slope: u64,
    pub offset: u64,
}

impl StepFunction {
    pub fn new(table: Vec<u64>, slope: u64, offset: u64) -> Self {
        StepFunction { table, slope, offset }
    }

    pub fn constant(c: u64) -> Self {
        StepFunction { table: vec![], slope: 0, offset: c }
    }

    /// `j ↦ slope·j + intercept`.
    pub fn linear(slope: u64, intercept: u64) -> Self {
        StepFunction { table: vec![], slope, offset: slope + intercept }
    }

    pub fn identity() -> Self {
        StepFunction::linear(1, 0)
    }

    /// First argument handled by the affine tail.
    pub fn tail_start(&self) -> usize {
        self.table.len() + 1
    }

    pub fn eval(&self, j: u64) -> u64 {
        debug_assert!(j >= 1, "arguments start at 1");
        let n = self.table.len() as u64;
        if j >= 1 && j <= n {
            self.table[(j - 1) as usize]
        } else {
            self.offset.saturating_add(self.slope.saturating_mul(j.saturating_sub(n + 1)))
        }
    }

    /// Same function with the table extended to at least `len` entries.
    pub fn rebased(&self, len: usize) -> StepFunction {
        if len <= self.table.len() {
            return self.clone();
        }
        let table = (1..=len as u64).map(|j| self.eval(j)).collect();
        StepFunction { table, slope: self.slope, offset: self.eval(len as u64 + 1) }
    }

    pub fn plus(&self, c: u64) -> StepFunction {
        StepFunction {
            table: self.table.iter().map(|v| v + c).collect(),
            slope: self.slope,
            offset: self.offset + c,
        }
    }

    /// `max(f - c, 0)`.
    pub fn saturating_minus(&self, c: u64) -> StepFunction {
        let mut f = self.clone();
        if f.offset < c && f.slope > 0 {
            // extend the table until the tail clears `c`
            let need = (c - f.offset).div_ceil(f.slope) as usize;
            f = f.rebased(f.table.len() + need);
        }
        StepFunction {
            table: f.table.iter().map(|v| v.saturating_sub(c)).collect(),
            slope: f.slope,
            offset: f.offset.saturating_sub(c),
        }
    }

    /// Least `j₀` such that the sign of `f(j) - g(j)` is the same for all `j ≥ j₀`.
    pub fn order_stable_from(&self, other: &StepFunction) -> usize {
        let (s1, s2) = (self.tail_start() as i128, other.tail_start() as i128);
        let s = s1.max(s2);
        let (a1, a2) = (self.slope as i128, other.slope as i128);
        let a = a1 - a2;
        let c = (self.offset as i128 - a1 * s1) - (other.offset as i128 - a2 * s2);
        if a == 0 {
            return s as usize;
        }
        let (a, c) = if a > 0 { (a, c) } else { (-a, -c) };
        // a·j + c > 0 exactly when j > -c/a
        let root = Integer::div_floor(&(-c), &a);
        s.max(root + 1).max(1) as usize
    }

    fn combine(&self, other: &StepFunction, pick_max: bool) -> StepFunction {
        let from = self.order_stable_from(other);
        let len = from.saturating_sub(1).max(self.table.len()).max(other.table.len());
        let (f, g) = (self.rebased(len), other.rebased(len));
        let table = f.table.iter().zip(&g.table).map(|(x, y)| if pick_max { *x.max(y) } else { *x.min(y) }).collect();
        let j = len as u64 + 1;
        let tail = if (f.eval(j) >= g.eval(j)) == pick_max { &f } else { &g };
        StepFunction { table, slope: tail.slope, offset: tail.offset }
    }

    pub fn min(&self, other: &StepFunction) -> StepFunction {
        self.combine(other, false)
    }

    pub fn max(&self, other: &StepFunction) -> StepFunction {
        self.combine(other, true)
    }

    /// Pointwise `f ≤ g` for every argument.
    pub fn le(&self, other: &StepFunction) -> bool {
        let from = self.order_stable_from(other) as u64;
        (1..=from).all(|j| self.eval(j) <= other.eval(j))
    }

    /// For `f(j) = max(j + d, 0)`, the function `x ↦ max(x - d, 0)`, so
    /// that `x ≤ f(j) ⟺ j ≥ g(x)` and `x ≥ f(j) ⟺ j ≤ g(x)` on `ℕ`.
    pub fn inverse_shift(&self) -> Option<StepFunction> {
        if self.slope != 1 {
            return None;
        }
        let j0 = self.tail_start() as i64;
        let d = self.eval(j0 as u64) as i64 - j0;
        let fits = (1..=j0 + 1).all(|j| self.eval(j as u64) as i64 == (j + d).max(0));
        fits.then(|| {
            let id = StepFunction::identity();
            if d >= 0 {
                id.saturating_minus(d as u64)
            } else {
                id.plus((-d) as u64)
            }
        })
    }

    /// Drops redundant table entries at the end.
    pub fn normalized(mut self) -> StepFunction {
        while let Some(&last) = self.table.last() {
            if self.offset >= self.slope && last == self.offset - self.slope {
                self.table.pop();
                self.offset = last;
            } else {
                break;
            }
        }
        self
    }
}

impl fmt::Display for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j0 = self.tail_start();
        let tail = match (self.slope, j0) {
            (0, _) => format!("{}", self.offset),
            (a, 1) => format!("{a}*(j-1) + {}", self.offset),
            (a, _) => format!("{a}*(j-{j0}) + {}", self.offset),
        };
        if self.table.is_empty() {
            write!(f, "{tail}")
        } else {
            write!(f, "{:?} then {tail}", self.table)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_step() -> impl Strategy<Value = StepFunction> {
        (proptest::collection::vec(0u64..20, 0..6), 0u64..4, 0u64..20).prop_map(|(t, a, b)| StepFunction::new(t, a, b))
    }

    #[test]
    fn evaluation() {
        let f = StepFunction::new(vec![5, 0], 2, 1);
        assert_eq!((1..=5).map(|j| f.eval(j)).collect::<Vec<_>>(), vec![5, 0, 1, 3, 5]);
        assert_eq!(StepFunction::identity().eval(7), 7);
        assert_eq!(StepFunction::linear(3, 2).eval(1), 5);
    }

    #[test]
    fn crossing_tails() {
        let f = StepFunction::linear(1, 0);
        let g = StepFunction::constant(10);
        assert_eq!(f.order_stable_from(&g), 11);
        let m = f.min(&g);
        assert_eq!(m.eval(4), 4);
        assert_eq!(m.eval(50), 10);
    }

    proptest! {
        #[test]
        fn min_max_are_pointwise(f in arb_step(), g in arb_step()) {
            let (lo, hi) = (f.min(&g), f.max(&g));
            for j in 1..60u64 {
                prop_assert_eq!(lo.eval(j), f.eval(j).min(g.eval(j)));
                prop_assert_eq!(hi.eval(j), f.eval(j).max(g.eval(j)));
            }
        }

        #[test]
        fn shifts_are_pointwise(f in arb_step(), c in 0u64..30) {
            let up = f.plus(c);
            let down = f.saturating_minus(c);
            for j in 1..60u64 {
                prop_assert_eq!(up.eval(j), f.eval(j) + c);
                prop_assert_eq!(down.eval(j), f.eval(j).saturating_sub(c));
            }
        }

        #[test]
        fn inverse_shift_swaps_comparisons(d in -5i64..5, x in 1u64..30, j in 1u64..30) {
            let id = StepFunction::identity();
            let f = if d >= 0 { id.plus(d as u64) } else { id.saturating_minus((-d) as u64) };
            let g = f.inverse_shift().unwrap();
            prop_assert_eq!(x <= f.eval(j), j >= g.eval(x));
            prop_assert_eq!(x >= f.eval(j), j <= g.eval(x));
        }

        #[test]
        fn normalization_keeps_values(f in arb_step()) {
            let n = f.clone().normalized();
            for j in 1..40u64 {
                prop_assert_eq!(n.eval(j), f.eval(j));
            }
        }
    }
}
