//! Small dense helpers: vector arithmetic and deflated power iteration on
//! symmetric positive semi-definite matrices.

use crate::scalar::Scalar;

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn norm<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Removes the component of `v` along the unit vector `u`.
pub(crate) fn project_out<T: Scalar>(v: &mut [T], u: &[T]) {
    let c = dot(v, u);
    for (x, &y) in v.iter_mut().zip(u) {
        *x = *x - c * y;
    }
}

/// Flips `v` so its first entry with magnitude above `tol` is positive.
pub(crate) fn canonical_sign<T: Scalar>(v: &mut [T], tol: T) {
    if let Some(&first) = v.iter().find(|x| x.abs() > tol) {
        if first < T::zero() {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// Deterministic pseudo-random start vector with entries in `[-1, 1)`.
pub(crate) fn start_vector<T: Scalar>(n: usize, salt: u64) -> Vec<T> {
    (0..n)
        .map(|i| {
            let bits = crate::walk::splitmix64(salt ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            T::lit((bits >> 11) as f64 / (1u64 << 52) as f64 - 1.0)
        })
        .collect()
}

/// Dense symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![T::zero(); n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    /// Sets both `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    pub fn mul_vec(&self, v: &[T], out: &mut [T]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = dot(&self.data[i * self.n..(i + 1) * self.n], v);
        }
    }
}

/// One eigenpair with its final residual `‖A v - λ v‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair<T> {
    pub value: T,
    pub vector: Vec<T>,
    pub residual: T,
}

/// Leading `k` eigenpairs of a PSD matrix by power iteration with
/// deflation against previously found vectors.
///
/// Stops each pair when the residual drops below `tol` or after `max_iter`
/// steps; unconverged pairs are returned as they stand. Pairs whose
/// eigenvalue is numerically zero come back with a zero vector.
pub fn top_eigenpairs<T: Scalar>(a: &SymMatrix<T>, k: usize, tol: T, max_iter: usize) -> Vec<EigenPair<T>> {
    let n = a.dim();
    let mut found: Vec<EigenPair<T>> = Vec::with_capacity(k);
    let scale = (0..n).map(|i| a.get(i, i).abs()).fold(T::zero(), T::max);
    let null_tol = scale * T::epsilon() * T::of_usize(n.max(1)) * T::lit(16.0);
    let mut w = vec![T::zero(); n];
    for idx in 0..k.min(n) {
        let mut v = start_vector::<T>(n, 0xC0FF_EE00 + idx as u64);
        for p in &found {
            project_out(&mut v, &p.vector);
        }
        let nv = norm(&v);
        if nv <= T::zero() {
            found.push(EigenPair { value: T::zero(), vector: vec![T::zero(); n], residual: T::zero() });
            continue;
        }
        v.iter_mut().for_each(|x| *x = *x / nv);
        let mut value = T::zero();
        let mut residual = T::infinity();
        for _ in 0..max_iter {
            a.mul_vec(&v, &mut w);
            for p in &found {
                project_out(&mut w, &p.vector);
            }
            value = dot(&v, &w);
            residual = w
                .iter()
                .zip(&v)
                .map(|(&wi, &vi)| (wi - value * vi) * (wi - value * vi))
                .sum::<T>()
                .sqrt();
            let nw = norm(&w);
            if nw <= null_tol {
                value = T::zero();
                residual = T::zero();
                v.iter_mut().for_each(|x| *x = T::zero());
                break;
            }
            v.iter_mut().zip(&w).for_each(|(x, &y)| *x = y / nw);
            if residual <= tol {
                break;
            }
        }
        canonical_sign(&mut v, T::lit(1e-9));
        found.push(EigenPair { value, vector: v, residual });
    }
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let mut a = SymMatrix::<f64>::zeros(3);
        a.set(0, 0, 1.0);
        a.set(1, 1, 5.0);
        a.set(2, 2, 3.0);
        let pairs = top_eigenpairs(&a, 3, 1e-12, 10_000);
        let values: Vec<f64> = pairs.iter().map(|p| p.value).collect();
        for (got, want) in values.iter().zip([5.0, 3.0, 1.0]) {
            assert!((got - want).abs() < 1e-10, "{values:?}");
        }
        assert!(pairs[0].vector[1] > 0.999);
    }

    #[test]
    fn rank_one_pads_with_zero() {
        let mut a = SymMatrix::<f64>::zeros(2);
        a.set(0, 0, 1.0);
        a.set(0, 1, 1.0);
        a.set(1, 1, 1.0);
        let pairs = top_eigenpairs(&a, 2, 1e-12, 1000);
        assert!((pairs[0].value - 2.0).abs() < 1e-10);
        assert!(pairs[1].value.abs() < 1e-10);
    }
}
