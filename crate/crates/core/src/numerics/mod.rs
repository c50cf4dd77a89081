//! Eigensolvers behind every quadrature rule and the Schrödinger discretization.

mod dense;
mod tridiagonal;

pub use dense::eigen_dense_symmetric;
pub use tridiagonal::{eigen_tridiagonal, eigen_tridiagonal_with_vectors, SymTridiagonal};

use rug::Float;

/// Eigenvalues in ascending order plus the first component of each
/// unit-norm eigenvector (sign chosen non-negative).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<Float>,
    pub first_components: Vec<Float>,
    /// `vectors[k]` is the eigenvector belonging to `values[k]`, when requested.
    pub vectors: Option<Vec<Vec<Float>>>,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Runs `f` over `0..n` on all available cores and collects in order.
pub(crate) fn par_map<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    let threads = std::thread::available_parallelism().map_or(1, |p| p.get()).min(n.max(1));
    if threads <= 1 || n < 8 {
        return (0..n).map(f).collect();
    }
    let chunk = n.div_ceil(threads);
    let f = &f;
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|t| s.spawn(move || (t * chunk..((t + 1) * chunk).min(n)).map(f).collect::<Vec<T>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}
