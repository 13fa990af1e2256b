//! Gauss–Jordan elimination over `Q(q, t)` for the overdetermined systems
//! that define `H_λ`.

use crate::coeff::RatFunc;
use crate::error::{Error, Result};

/// Solves `rows · x = rhs`, where the last entry of each row is the
/// right-hand side. Pivots are chosen by smallest size. Every equation not
/// used as a pivot must reduce to `0 = 0`, otherwise the system is reported
/// as inconsistent.
pub(crate) fn solve(
    mut rows: Vec<Vec<RatFunc>>,
    unknowns: usize,
    what: &str,
) -> Result<Vec<RatFunc>> {
    let size = |x: &RatFunc| x.numer().len() + x.denom().len();
    let mut pivot_of: Vec<usize> = Vec::with_capacity(unknowns);
    let mut used = vec![false; rows.len()];
    for col in 0..unknowns {
        let r = (0..rows.len())
            .filter(|&i| !used[i] && !rows[i][col].is_zero())
            .min_by_key(|&i| size(&rows[i][col]))
            .ok_or_else(|| Error::SingularSystem(what.to_string()))?;
        used[r] = true;
        pivot_of.push(r);
        let inv = rows[r][col].recip()?;
        let pivot_row: Vec<RatFunc> = rows[r].iter().map(|x| x * &inv).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let a = row[col].clone();
            for j in 0..=unknowns {
                if !pivot_row[j].is_zero() {
                    row[j] = &row[j] - &(&a * &pivot_row[j]);
                }
            }
        }
        rows[r] = pivot_row;
    }
    for (i, row) in rows.iter().enumerate() {
        if !used[i] && row.iter().any(|x| !x.is_zero()) {
            return Err(Error::SingularSystem(format!(
                "{what}: surplus equation {i} is not satisfied"
            )));
        }
    }
    Ok(pivot_of
        .iter()
        .map(|&r| rows[r][unknowns].clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> RatFunc {
        RatFunc::from_int(n)
    }

    #[test]
    fn small_integer_system() {
        // x + y = 3, x - y = 1, 2x = 4
        let rows = vec![
            vec![c(1), c(1), c(3)],
            vec![c(1), c(-1), c(1)],
            vec![c(2), c(0), c(4)],
        ];
        let x = solve(rows, 2, "test").unwrap();
        assert_eq!(x, vec![c(2), c(1)]);
    }

    #[test]
    fn inconsistent_system() {
        let rows = vec![vec![c(1), c(1)], vec![c(1), c(2)]];
        assert!(matches!(
            solve(rows, 1, "test"),
            Err(Error::SingularSystem(_))
        ));
    }

    #[test]
    fn underdetermined_system() {
        let rows = vec![vec![c(1), c(1), c(1)]];
        assert!(matches!(
            solve(rows, 2, "test"),
            Err(Error::SingularSystem(_))
        ));
    }

    #[test]
    fn rational_function_entries() {
        let q = RatFunc::q();
        // (1 - q) x = 1 - q^2
        let rows = vec![vec![&c(1) - &q, &c(1) - &q.pow(2).unwrap()]];
        assert_eq!(
            solve(rows, 1, "test").unwrap(),
            vec![RatFunc::parse("1 + q").unwrap()]
        );
    }
}
