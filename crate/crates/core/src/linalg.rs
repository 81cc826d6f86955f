//! Exact sparse linear algebra over the rationals.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::Rational;

/// A sparse vector keyed by row labels.
pub type SparseVector<R> = BTreeMap<R, Rational>;

struct Pivot<R> {
    /// Reduced column; its smallest key is the pivot row.
    column: SparseVector<R>,
    /// The reduced column as a combination of the original columns.
    combination: BTreeMap<usize, Rational>,
}

/// Incremental Gaussian elimination: columns are added in order and the
/// earliest independent ones become pivots.
pub struct Eliminator<R: Ord + Clone> {
    pivots: BTreeMap<R, Pivot<R>>,
    columns: usize,
}

impl<R: Ord + Clone> Default for Eliminator<R> {
    fn default() -> Self {
        Eliminator { pivots: BTreeMap::new(), columns: 0 }
    }
}

impl<R: Ord + Clone> Eliminator<R> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the pivots, recording the multiples of the
    /// original columns that were subtracted.
    fn reduce(&self, v: &mut SparseVector<R>, combination: &mut BTreeMap<usize, Rational>) {
        let mut cursor: Option<R> = None;
        loop {
            let next = match &cursor {
                None => v.keys().find(|r| self.pivots.contains_key(*r)).cloned(),
                Some(c) => v
                    .range(c.clone()..)
                    .map(|(r, _)| r)
                    .find(|r| self.pivots.contains_key(*r))
                    .cloned(),
            };
            let Some(row) = next else { return };
            let pivot = &self.pivots[&row];
            let factor = &v[&row] / &pivot.column[&row];
            for (r, x) in &pivot.column {
                axpy(v, r.clone(), -(&factor * x));
            }
            for (&j, x) in &pivot.combination {
                axpy(combination, j, -(&factor * x));
            }
            cursor = Some(row);
        }
    }

    /// Adds the next column. Returns true if it is independent of the
    /// previous ones.
    pub fn push(&mut self, column: SparseVector<R>) -> bool {
        let index = self.columns;
        self.columns += 1;
        let mut v: SparseVector<R> = column.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        let mut combination = BTreeMap::from([(index, Rational::from_integer(1.into()))]);
        self.reduce(&mut v, &mut combination);
        match v.keys().next().cloned() {
            Some(row) => {
                self.pivots.insert(row, Pivot { column: v, combination });
                true
            }
            None => false,
        }
    }

    /// A solution of `A x = b` over the pushed columns, supported on pivot
    /// columns (free variables are zero), or `None` if `b` is not in the
    /// column span.
    pub fn solve(&self, rhs: &SparseVector<R>) -> Option<Vec<Rational>> {
        let mut v: SparseVector<R> = rhs.iter().filter(|(_, x)| !x.is_zero()).map(|(r, x)| (r.clone(), x.clone())).collect();
        let mut combination = BTreeMap::new();
        self.reduce(&mut v, &mut combination);
        if !v.is_empty() {
            return None;
        }
        // b - sum(subtracted) = 0, so x = -combination
        let mut x = vec![Rational::zero(); self.columns];
        for (j, c) in combination {
            x[j] = -c;
        }
        Some(x)
    }
}

fn axpy<K: Ord>(v: &mut BTreeMap<K, Rational>, key: K, delta: Rational) {
    use std::collections::btree_map::Entry;
    if delta.is_zero() {
        return;
    }
    match v.entry(key) {
        Entry::Vacant(e) => {
            e.insert(delta);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += delta;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Solves `A x = b` for sparse columns of `A`.
pub fn solve<R: Ord + Clone>(columns: &[SparseVector<R>], rhs: &SparseVector<R>) -> Option<Vec<Rational>> {
    let mut elim = Eliminator::new();
    for c in columns {
        elim.push(c.clone());
    }
    elim.solve(rhs)
}
