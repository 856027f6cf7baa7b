use super::DenseMatrix;
use crate::{Limits, Result, SocError};
use num_complex::Complex64;

/// Digits of `index` in base `d`, most significant first (the Kronecker order).
fn digits(mut index: usize, d: usize, n: usize, out: &mut [usize]) {
    for k in (0..n).rev() {
        out[k] = index % d;
        index /= d;
    }
}

/// For each basis index of `(ℂ^d)^{⊗n}`, the index obtained by reading its
/// tensor factors in the order `perm`.
fn factor_index_map(perm: &[usize], d: usize) -> Vec<usize> {
    let n = perm.len();
    let size = d.pow(n as u32);
    let mut buf = vec![0usize; n];
    (0..size)
        .map(|i| {
            digits(i, d, n, &mut buf);
            perm.iter().fold(0, |acc, &p| acc * d + buf[p])
        })
        .collect()
}

fn check_tensor_shape(t: &DenseMatrix, n: usize, d: usize, op: &'static str) -> Result<usize> {
    let size = t.require_square(op)?;
    let expected = (d as u128).checked_pow(n as u32);
    if expected != Some(size as u128) {
        return Err(SocError::shape(
            op,
            format!("matrix of size {size} does not act on a {d}^{n}-dimensional space"),
        ));
    }
    Ok(size)
}

/// Conjugates `t` by the tensor-factor permutation `perm`: entry `(I, J)` of
/// the result is entry `(perm·I, perm·J)` of `t`.
pub fn permute_tensor_factors(t: &DenseMatrix, perm: &[usize], d: usize) -> Result<DenseMatrix> {
    let n = perm.len();
    let size = check_tensor_shape(t, n, d, "permute_tensor_factors")?;
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(SocError::Validation(format!("{perm:?} is not a permutation")));
        }
    }
    let map = factor_index_map(perm, d);
    let mut out = DenseMatrix::zeros(size, size);
    for i in 0..size {
        for j in 0..size {
            out.set(i, j, t.get(map[i], map[j]));
        }
    }
    Ok(out)
}

/// Next permutation in lexicographic order; false after the last one.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Projection `(1/n!)·Σ_π P_π t P_π⁻¹` of an operator on `(ℂ^d)^{⊗n}` onto its
/// `Sₙ`-equivariant part.
pub fn symmetrize(t: &DenseMatrix, n: usize, d: usize, limits: &Limits) -> Result<DenseMatrix> {
    if n > limits.max_symmetrize_order {
        return Err(SocError::capacity(
            "symmetrize order",
            n as u128,
            limits.max_symmetrize_order as u128,
        ));
    }
    let size = check_tensor_shape(t, n, d, "symmetrize")?;
    if n <= 1 {
        return Ok(t.clone());
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); size * size];
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0u64;
    loop {
        let map = factor_index_map(&perm, d);
        for i in 0..size {
            let row = &mut acc[i * size..(i + 1) * size];
            for (j, slot) in row.iter_mut().enumerate() {
                *slot += t.get(map[i], map[j]);
            }
        }
        count += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let inv = 1.0 / count as f64;
    for z in acc.iter_mut() {
        *z *= inv;
    }
    Ok(DenseMatrix::from_vec_unchecked(size, size, acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kron;

    fn m(rows: &[Vec<f64>]) -> DenseMatrix {
        DenseMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn order_one_is_identity_map() {
        let t = m(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        assert_eq!(symmetrize(&t, 1, 2, &Limits::default()).unwrap(), t);
    }

    #[test]
    fn two_factor_average() {
        let l = Limits::default();
        let a = m(&[vec![1.0, 2.0], vec![0.0, -1.0]]);
        let b = m(&[vec![0.5, 0.0], vec![3.0, 2.0]]);
        let ab = kron(&a, &b, &l).unwrap();
        let ba = kron(&b, &a, &l).unwrap();
        let expected = ab.add(&ba).unwrap().scale_real(0.5);
        let got = symmetrize(&ab, 2, 2, &l).unwrap();
        assert!(got.max_abs_diff(&expected) < 1e-15);
        let swapped = permute_tensor_factors(&ab, &[1, 0], 2).unwrap();
        assert_eq!(swapped, ba);
    }

    #[test]
    fn shape_and_capacity_errors() {
        let l = Limits::default();
        let t = DenseMatrix::identity(5);
        assert!(matches!(symmetrize(&t, 2, 2, &l), Err(SocError::Shape { .. })));
        let big = DenseMatrix::identity(512);
        assert!(symmetrize(&big, 9, 2, &l).unwrap_err().is_capacity());
        assert!(permute_tensor_factors(&DenseMatrix::identity(4), &[0, 0], 2).is_err());
    }

    #[test]
    fn permutations_enumerated() {
        let mut p = vec![0, 1, 2, 3];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 24);
    }
}
