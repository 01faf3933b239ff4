use crate::gf::FieldCtx;

/// Dense row-major matrix of raw field values.
pub type Matrix = Vec<Vec<u32>>;

pub(crate) fn matmul(field: &FieldCtx, a: &Matrix, b: &Matrix) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(0u32, |acc, (&x, brow)| field.add(acc, field.mul(x, brow[j])))
                })
                .collect()
        })
        .collect()
}

/// Reduces `m` to row echelon form in place; returns the rank and whether an
/// odd number of row swaps occurred.
fn eliminate(field: &FieldCtx, m: &mut Matrix) -> (usize, bool) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut odd = false;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&i| m[i][col] != 0) else {
            continue;
        };
        if pivot != rank {
            m.swap(pivot, rank);
            odd = !odd;
        }
        let inv = field.inv(m[rank][col]).expect("nonzero pivot");
        for i in rank + 1..rows {
            let factor = field.mul(m[i][col], inv);
            if factor == 0 {
                continue;
            }
            for j in col..cols {
                let v = field.mul(factor, m[rank][j]);
                m[i][j] = field.sub(m[i][j], v);
            }
        }
        rank += 1;
    }
    (rank, odd)
}

/// Rank over F_q by Gaussian elimination.
pub fn rank(field: &FieldCtx, m: &Matrix) -> usize {
    eliminate(field, &mut m.clone()).0
}

/// Determinant of a square matrix by Gaussian elimination.
pub fn determinant(field: &FieldCtx, m: &Matrix) -> u32 {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "square matrix required");
    let mut work = m.clone();
    let (rank, odd) = eliminate(field, &mut work);
    if rank < n {
        return 0;
    }
    let det = (0..n).fold(1u32, |acc, i| field.mul(acc, work[i][i]));
    if odd {
        field.neg(det)
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        let f = FieldCtx::prime(7).unwrap();
        assert_eq!(determinant(&f, &vec![vec![0, 1], vec![1, 0]]), 6);
        assert_eq!(determinant(&f, &vec![vec![2, 3], vec![4, 6]]), 0);
        assert_eq!(determinant(&f, &vec![vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]]), 1);
        assert_eq!(rank(&f, &vec![vec![1, 2, 3], vec![2, 4, 6]]), 1);
        assert_eq!(rank(&f, &vec![vec![0, 0, 0]]), 0);
    }

    #[test]
    fn cofactor_expansion_agrees() {
        fn cofactor(f: &FieldCtx, m: &Matrix) -> u32 {
            if m.len() == 1 {
                return m[0][0];
            }
            let mut acc = 0u32;
            for (j, &c) in m[0].iter().enumerate() {
                let minor: Matrix = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
                    .collect();
                let term = f.mul(c, cofactor(f, &minor));
                acc = if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
            }
            acc
        }
        let f = FieldCtx::parse("9").unwrap();
        let mut state = 11u64;
        for n in 1..=4 {
            for _ in 0..50 {
                let m: Matrix = (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                                ((state >> 33) % 9) as u32
                            })
                            .collect()
                    })
                    .collect();
                assert_eq!(determinant(&f, &m), cofactor(&f, &m));
            }
        }
    }
}
