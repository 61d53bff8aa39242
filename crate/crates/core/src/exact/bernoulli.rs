use std::sync::{OnceLock, RwLock};

use super::{binomial_row, weighted_sum, Rational};

/// Grow-only memo of exact Bernoulli numbers `B_0, B_1, ...` with the
/// `B_1 = -1/2` convention.
///
/// Entries are produced in index order from
/// `Σ_{k=0}^{m-1} C(m, k) B_k = 0`, solved for `B_{m-1}`. Once written an
/// entry never changes. Readers share the lock; extension takes the write
/// lock, so there is at most one writer at a time.
#[derive(Debug)]
pub struct BernoulliTable {
    values: RwLock<Vec<Rational>>,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliTable {
    pub fn new() -> Self {
        BernoulliTable {
            values: RwLock::new(vec![Rational::one()]),
        }
    }

    /// The process-wide shared table.
    pub fn global() -> &'static BernoulliTable {
        static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
        TABLE.get_or_init(BernoulliTable::new)
    }

    /// Largest index currently stored.
    pub fn max_index(&self) -> u64 {
        let values = self.values.read().expect("bernoulli table poisoned");
        values.len() as u64 - 1
    }

    pub fn get(&self, n: u64) -> Rational {
        {
            let values = self.values.read().expect("bernoulli table poisoned");
            if let Some(v) = values.get(n as usize) {
                return v.clone();
            }
        }
        let mut values = self.values.write().expect("bernoulli table poisoned");
        // another writer may have filled it while we waited
        while values.len() as u64 <= n {
            let next = values.len() as u64;
            let value = next_bernoulli(&values, next);
            values.push(value);
        }
        values[n as usize].clone()
    }

    /// Copy of `B_0..=B_n`.
    pub fn prefix(&self, n: u64) -> Vec<Rational> {
        self.get(n);
        let values = self.values.read().expect("bernoulli table poisoned");
        values[..=n as usize].to_vec()
    }
}

fn next_bernoulli(known: &[Rational], n: u64) -> Rational {
    debug_assert_eq!(known.len() as u64, n);
    if n >= 3 && n % 2 == 1 {
        return Rational::zero();
    }
    let m = n + 1;
    let row = binomial_row(m);
    let partial = weighted_sum(known.iter().enumerate().map(|(k, b)| (row[k].clone(), b)));
    -(partial / Rational::from_integer(row[n as usize].clone()))
}

/// Exact `B_n` from the shared table.
pub fn bernoulli(n: u64) -> Rational {
    BernoulliTable::global().get(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::binomial_exact;

    /// Akiyama–Tanigawa algorithm. Produces `B_1 = +1/2`, so the sign of
    /// index 1 is flipped for comparison.
    fn akiyama_tanigawa(n: usize) -> Vec<Rational> {
        let mut out = Vec::with_capacity(n + 1);
        let mut row: Vec<Rational> = Vec::with_capacity(n + 1);
        for m in 0..=n {
            row.push(Rational::new(1, m as i64 + 1));
            for j in (1..=m).rev() {
                row[j - 1] = Rational::from_integer(j as i64) * (&row[j - 1] - &row[j]);
            }
            out.push(row[0].clone());
        }
        if n >= 1 {
            out[1] = -out[1].clone();
        }
        out
    }

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), Rational::one());
        assert_eq!(bernoulli(1), Rational::new(-1, 2));
        assert_eq!(bernoulli(2), Rational::new(1, 6));
        assert_eq!(bernoulli(12), Rational::new(-691, 2730));
    }

    #[test]
    fn agrees_with_akiyama_tanigawa() {
        let oracle = akiyama_tanigawa(60);
        assert_eq!(oracle[12], Rational::new(-691, 2730));
        let table = BernoulliTable::new();
        for (n, expected) in oracle.iter().enumerate() {
            assert_eq!(&table.get(n as u64), expected, "B_{n}");
        }
    }

    #[test]
    fn odd_values_vanish() {
        for m in 1..40 {
            assert!(bernoulli(2 * m + 1).is_zero());
        }
    }

    #[test]
    fn defining_recurrence_holds() {
        let b = BernoulliTable::new().prefix(61);
        for m in 2..=62u64 {
            let s: Rational = (0..m)
                .map(|k| binomial_exact(m, k as i64) * &b[k as usize])
                .sum();
            assert!(s.is_zero(), "m={m}");
        }
    }

    #[test]
    fn table_is_grow_only_and_shared_across_threads() {
        let table = BernoulliTable::new();
        assert_eq!(table.max_index(), 0);
        std::thread::scope(|s| {
            for i in 0..4 {
                let table = &table;
                s.spawn(move || {
                    for n in (0..=40).rev().skip(i) {
                        table.get(n);
                    }
                });
            }
        });
        assert_eq!(table.max_index(), 40);
        assert_eq!(table.get(20), Rational::new(-174611, 330));
        table.get(5);
        assert_eq!(table.max_index(), 40);
    }
}
