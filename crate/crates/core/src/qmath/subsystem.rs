use crate::error::{Error, Result};
use crate::qmath::matrix::{ComplexMatrix, DensityMatrix};

/// Per-factor dimensions of a tensor-product space.
///
/// Factor 0 is the leftmost (most significant) one: a product basis state
/// `|d_0 d_1 … d_{k-1}⟩` has index `Σ d_i · Π_{j>i} dims[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemShape {
    dims: Vec<usize>,
}

impl SubsystemShape {
    pub fn new(dims: Vec<usize>) -> Self {
        Self { dims }
    }

    /// `n` two-level factors.
    pub fn qubits(n: usize) -> Self {
        Self { dims: vec![2; n] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Mixed-radix digits of `index`, most significant first.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&digit, &d)| acc * d + digit)
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        let total = self.total_dim();
        if total != n {
            return Err(Error::DimensionMismatch {
                expected: total,
                got: n,
            });
        }
        Ok(())
    }

    /// Sorted, deduplicated copy of `indices`, validated against this shape.
    fn normalize(&self, indices: &[usize]) -> Result<Vec<usize>> {
        let mut v = indices.to_vec();
        v.sort_unstable();
        v.dedup();
        if let Some(&bad) = v.iter().find(|&&i| i >= self.dims.len()) {
            return Err(Error::SubsystemOutOfRange {
                index: bad,
                count: self.dims.len(),
            });
        }
        Ok(v)
    }
}

/// Reduced density matrix over the factors in `keep`, listed in their
/// original order.
pub fn partial_trace(
    rho: &DensityMatrix,
    shape: &SubsystemShape,
    keep: &[usize],
) -> Result<DensityMatrix> {
    shape.check_dim(rho.dim())?;
    let keep = shape.normalize(keep)?;
    let traced: Vec<usize> = (0..shape.len()).filter(|i| !keep.contains(i)).collect();
    let kept_shape = SubsystemShape::new(keep.iter().map(|&i| shape.dims[i]).collect());
    let traced_shape = SubsystemShape::new(traced.iter().map(|&i| shape.dims[i]).collect());

    let n = rho.dim();
    // (kept index, traced index) of every ambient basis state
    let split: Vec<(usize, usize)> = (0..n)
        .map(|idx| {
            let digits = shape.digits(idx);
            let k: Vec<usize> = keep.iter().map(|&i| digits[i]).collect();
            let t: Vec<usize> = traced.iter().map(|&i| digits[i]).collect();
            (kept_shape.index_of(&k), traced_shape.index_of(&t))
        })
        .collect();

    let m = kept_shape.total_dim();
    let mut out = ComplexMatrix::zeros(m, m);
    let src = rho.matrix();
    for r in 0..n {
        let (kr, tr) = split[r];
        for c in 0..n {
            let (kc, tc) = split[c];
            if tr == tc {
                out[(kr, kc)] += src[(r, c)];
            }
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// Transposes the factors in `subset`, leaving the others untouched.
pub fn partial_transpose(
    rho: &DensityMatrix,
    shape: &SubsystemShape,
    subset: &[usize],
) -> Result<ComplexMatrix> {
    partial_transpose_matrix(rho.matrix(), shape, subset)
}

/// [`partial_transpose`] on an arbitrary square matrix.
pub fn partial_transpose_matrix(
    m: &ComplexMatrix,
    shape: &SubsystemShape,
    subset: &[usize],
) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows(), m.cols()));
    }
    shape.check_dim(m.rows())?;
    let subset = shape.normalize(subset)?;
    let n = m.rows();
    let digits: Vec<Vec<usize>> = (0..n).map(|i| shape.digits(i)).collect();
    let mut out = ComplexMatrix::zeros(n, n);
    let mut rd = vec![0; shape.len()];
    let mut cd = vec![0; shape.len()];
    for r in 0..n {
        for c in 0..n {
            rd.copy_from_slice(&digits[r]);
            cd.copy_from_slice(&digits[c]);
            for &s in &subset {
                std::mem::swap(&mut rd[s], &mut cd[s]);
            }
            out[(shape.index_of(&rd), shape.index_of(&cd))] = m[(r, c)];
        }
    }
    Ok(out)
}
