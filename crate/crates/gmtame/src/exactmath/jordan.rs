use super::qmatrix::QMatrix;
use crate::error::{Error, Result};

/// Jordan block sizes of a nilpotent matrix, decreasing. Errors when the
/// matrix is not nilpotent.
pub fn nilpotent_jordan(n: &QMatrix) -> Result<Vec<usize>> {
    assert!(n.is_square());
    let dim = n.rows;
    if dim == 0 {
        return Ok(Vec::new());
    }
    // ranks[k] = rank(n^k); nilpotency means rank(n^dim) = 0
    let mut ranks = vec![dim];
    let mut power = QMatrix::identity(dim);
    for _ in 0..dim {
        power = &power * n;
        let r = power.rank();
        ranks.push(r);
        if r == 0 {
            break;
        }
    }
    if *ranks.last().unwrap() != 0 {
        return Err(Error::NotNilpotent);
    }
    // number of blocks of size >= k is rank(n^{k-1}) - rank(n^k)
    let mut partition = Vec::new();
    for k in 1..ranks.len() {
        let at_least_k = ranks[k - 1] - ranks[k];
        let at_least_k1 = if k + 1 < ranks.len() {
            ranks[k] - ranks[k + 1]
        } else {
            0
        };
        let exactly_k = at_least_k - at_least_k1;
        for _ in 0..exactly_k {
            partition.push(k);
        }
    }
    partition.sort_unstable_by(|a, b| b.cmp(a));
    debug_assert_eq!(partition.iter().sum::<usize>(), dim);
    Ok(partition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat_i;

    fn shift_block(sizes: &[usize]) -> QMatrix {
        let dim: usize = sizes.iter().sum();
        let mut m = QMatrix::zero(dim, dim);
        let mut off = 0;
        for &s in sizes {
            for i in 0..s.saturating_sub(1) {
                m[(off + i, off + i + 1)] = rat_i(1);
            }
            off += s;
        }
        m
    }

    #[test]
    fn recovers_partition() {
        for sizes in [vec![1], vec![3, 1], vec![2, 2, 1], vec![4]] {
            let m = shift_block(&sizes);
            assert_eq!(nilpotent_jordan(&m).unwrap(), sizes);
        }
    }

    #[test]
    fn zero_matrix_is_all_ones() {
        let m = QMatrix::zero(3, 3);
        assert_eq!(nilpotent_jordan(&m).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn rejects_non_nilpotent() {
        let m = QMatrix::identity(2);
        assert!(matches!(nilpotent_jordan(&m), Err(Error::NotNilpotent)));
    }
}
