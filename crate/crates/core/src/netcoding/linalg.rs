//! Content packing and elimination over the scalar field.

use crate::sigcore::pairing::Scalar;

use super::NcError;

/// Content bytes per field element; 31 bytes always fit below `r`.
pub const BYTES_PER_ELEMENT: usize = 31;
const LENGTH_PREFIX: usize = 8;

pub fn capacity_bytes(n: usize, m: usize) -> usize {
    (n * m * BYTES_PER_ELEMENT).saturating_sub(LENGTH_PREFIX)
}

/// `len(content) as u64 BE || content || zeros`, cut into `m` rows of `n`
/// elements.
pub fn pack(content: &[u8], n: usize, m: usize) -> Result<Vec<Vec<Scalar>>, NcError> {
    if content.is_empty() {
        return Err(NcError::EmptyContent);
    }
    if content.len() > capacity_bytes(n, m) {
        return Err(NcError::Dimension(format!(
            "{} content bytes exceed the {} available for n={n}, m={m}",
            content.len(),
            capacity_bytes(n, m)
        )));
    }
    let mut buf = Vec::with_capacity(n * m * BYTES_PER_ELEMENT);
    buf.extend_from_slice(&(content.len() as u64).to_be_bytes());
    buf.extend_from_slice(content);
    buf.resize(n * m * BYTES_PER_ELEMENT, 0);
    let elems: Vec<Scalar> = buf
        .chunks(BYTES_PER_ELEMENT)
        .map(|c| {
            let mut be = [0u8; 32];
            be[1..].copy_from_slice(c);
            Scalar::from_be_bytes(&be).expect("248-bit value is below r")
        })
        .collect();
    Ok(elems.chunks(n).map(<[Scalar]>::to_vec).collect())
}

pub fn unpack(rows: &[Vec<Scalar>]) -> Result<Vec<u8>, NcError> {
    let mut buf = Vec::new();
    for e in rows.iter().flatten() {
        let be = e.to_be_bytes();
        if be[0] != 0 {
            return Err(NcError::Malformed("decoded element exceeds 31 bytes".into()));
        }
        buf.extend_from_slice(&be[1..]);
    }
    if buf.len() < LENGTH_PREFIX {
        return Err(NcError::Malformed("missing length prefix".into()));
    }
    let len = u64::from_be_bytes(buf[..LENGTH_PREFIX].try_into().expect("8 bytes"));
    let body = &buf[LENGTH_PREFIX..];
    if len == 0 || len > body.len() as u64 {
        return Err(NcError::Malformed(format!("length prefix {len} out of range")));
    }
    let len = len as usize;
    if body[len..].iter().any(|&b| b != 0) {
        return Err(NcError::Malformed("nonzero padding".into()));
    }
    Ok(body[..len].to_vec())
}

/// Row `i` of the result is `rows[i] || e_i`.
pub fn augment(rows: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let m = rows.len();
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..m).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            v
        })
        .collect()
}

/// Gauss-Jordan elimination on rows of `(data || coefficients)`. Returns the
/// `m` data rows `V` with `C V = D`, or `RankDeficient` when the coefficient
/// columns have rank below `m`. Extra rows are allowed.
pub fn solve(rows: &[Vec<Scalar>], n: usize, m: usize) -> Result<Vec<Vec<Scalar>>, NcError> {
    // pivot on coefficient columns, carrying the data columns along
    let mut a: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|r| {
            let mut v = r[n..n + m].to_vec();
            v.extend_from_slice(&r[..n]);
            v
        })
        .collect();
    let width = m + n;
    for col in 0..m {
        let pivot = (col..a.len()).find(|&r| !a[r][col].is_zero()).ok_or(NcError::RankDeficient)?;
        a.swap(col, pivot);
        let inv = a[col][col].inverse().expect("pivot is nonzero");
        for x in a[col].iter_mut() {
            *x *= inv;
        }
        let prow = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col];
            for k in col..width {
                let t = f * prow[k];
                row[k] -= t;
            }
        }
    }
    Ok(a.into_iter().take(m).map(|r| r[m..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn s(v: u64) -> Scalar {
        Scalar::from_u64(v)
    }

    #[test]
    fn unit_augmentation() {
        let rows = vec![vec![s(5), s(3)], vec![s(2), s(7)]];
        let aug = augment(&rows);
        assert_eq!(aug[0], vec![s(5), s(3), s(1), s(0)]);
        assert_eq!(aug[1], vec![s(2), s(7), s(0), s(1)]);
        assert_eq!(augment(&[vec![s(9)]])[0], vec![s(9), s(1)]);
    }

    #[test]
    fn pack_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(141);
        for len in [1usize, 30, 31, 200, capacity_bytes(4, 3)] {
            let content: Vec<u8> = (0..len).map(|_| rng.gen()).collect();
            let rows = pack(&content, 4, 3).unwrap();
            assert_eq!(rows.len(), 3);
            assert!(rows.iter().all(|r| r.len() == 4));
            assert_eq!(unpack(&rows).unwrap(), content);
        }
        assert!(matches!(pack(&vec![1; capacity_bytes(4, 3) + 1], 4, 3), Err(NcError::Dimension(_))));
        assert!(matches!(pack(&[], 4, 3), Err(NcError::EmptyContent)));
    }

    #[test]
    fn solves_random_system() {
        let mut rng = ChaCha20Rng::seed_from_u64(142);
        let (n, m) = (3, 4);
        let v: Vec<Vec<Scalar>> = (0..m).map(|_| (0..n).map(|_| Scalar::random(&mut rng)).collect()).collect();
        let c: Vec<Vec<Scalar>> = (0..m).map(|_| (0..m).map(|_| Scalar::random(&mut rng)).collect()).collect();
        // row i: (sum_j c_ij v_j || c_i)
        let rows: Vec<Vec<Scalar>> = c
            .iter()
            .map(|ci| {
                let mut r: Vec<Scalar> = (0..n)
                    .map(|k| ci.iter().zip(&v).map(|(a, vj)| *a * vj[k]).sum())
                    .collect();
                r.extend_from_slice(ci);
                r
            })
            .collect();
        assert_eq!(solve(&rows, n, m).unwrap(), v);
    }

    #[test]
    fn singular_system() {
        let rows = augment(&[vec![s(1)], vec![s(2)]]);
        let dup = vec![rows[0].clone(), rows[0].clone()];
        assert!(matches!(solve(&dup, 1, 2), Err(NcError::RankDeficient)));
        assert!(matches!(solve(&rows[..1], 1, 2), Err(NcError::RankDeficient)));
    }
}
