use super::DistanceMatrix;
use crate::error::Result;

/// Costs `M - c[i][j]` off the diagonal: a minimum tour of the transformed
/// matrix is a maximum tour of the original.
#[derive(Debug, Clone)]
pub struct MaxTspTransform {
    offset: f64,
    matrix: DistanceMatrix,
}

impl MaxTspTransform {
    /// The offset `M`.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn matrix(&self) -> &DistanceMatrix {
        &self.matrix
    }

    /// Maps a transformed tour length back to the original costs via
    /// `L = n*M - L'`.
    pub fn original_length(&self, transformed_length: f64) -> f64 {
        self.matrix.n() as f64 * self.offset - transformed_length
    }
}

/// Builds the transform with `M = max off-diagonal cost + 1`.
pub fn maxtsp_transform(d: &DistanceMatrix) -> Result<MaxTspTransform> {
    d.require_symmetric("the max-TSP transform")?;
    let offset = d.max_cost() + 1.0;
    let matrix = DistanceMatrix::from_fn(d.n(), |i, j| offset - d.get(i, j))?;
    Ok(MaxTspTransform { offset, matrix })
}
