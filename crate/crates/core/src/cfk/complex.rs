use crate::error::{Error, Result};
use crate::f2linalg::{kernel_basis, BitMatrix, BitVec, Elimination};

/// Finite chain complex over GF(2); the differential maps columns to rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedComplex {
    generators: Vec<(String, i64)>,
    differential: BitMatrix,
}

impl GradedComplex {
    pub fn new(generators: Vec<(String, i64)>, differential: BitMatrix) -> Result<Self> {
        let n = generators.len();
        if differential.rows() != n || differential.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "differential is {}x{} for {n} generators",
                differential.rows(),
                differential.cols()
            )));
        }
        if !differential.mul(&differential).is_zero() {
            return Err(Error::invariant("d² = 0", "differential does not square to zero"));
        }
        Ok(Self { generators, differential })
    }

    pub fn generators(&self) -> &[(String, i64)] {
        &self.generators
    }

    pub fn differential(&self) -> &BitMatrix {
        &self.differential
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn homology_rank(&self) -> usize {
        self.dim() - 2 * self.differential.rank()
    }

    pub fn homology(&self) -> Homology {
        Homology::new(&self.differential)
    }
}

/// Homology with explicit cycle representatives and a coordinate solver.
#[derive(Clone, Debug)]
pub struct Homology {
    differential: BitMatrix,
    representatives: Vec<BitVec>,
    solver: Elimination,
}

impl Homology {
    pub fn new(differential: &BitMatrix) -> Self {
        let n = differential.rows();
        let image_el = Elimination::new(differential);
        let boundaries: Vec<BitVec> = image_el.pivots.iter().map(|&c| differential.column(c)).collect();
        let cycles = kernel_basis(differential).columns();

        let mut all = boundaries.clone();
        all.extend(cycles.iter().cloned());
        let picked = Elimination::new(&BitMatrix::from_columns(n, &all));
        let representatives: Vec<BitVec> =
            picked.pivots.iter().filter(|&&c| c >= boundaries.len()).map(|&c| all[c].clone()).collect();

        let mut basis = representatives.clone();
        basis.extend(boundaries);
        let solver = Elimination::new(&BitMatrix::from_columns(n, &basis));
        Self { differential: differential.clone(), representatives, solver }
    }

    pub fn rank(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[BitVec] {
        &self.representatives
    }

    /// Coordinates of the class of the cycle `v` in the representative basis.
    pub fn coords(&self, v: &BitVec) -> Result<BitVec> {
        if !self.differential.mul_vec(v).is_zero() {
            return Err(Error::validation("cycle", "vector is not a cycle"));
        }
        let x = self
            .solver
            .solve(v)
            .ok_or_else(|| Error::validation("cycle", "cycle outside the span of representatives and boundaries"))?;
        let mut out = BitVec::zeros(self.rank());
        for i in x.ones().filter(|&i| i < self.rank()) {
            out.set(i, true);
        }
        Ok(out)
    }
}

/// A matrix between two complexes satisfying `f ∘ d_source = d_target ∘ f`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: GradedComplex,
    target: GradedComplex,
    matrix: BitMatrix,
}

impl ChainMap {
    pub fn new(source: GradedComplex, target: GradedComplex, matrix: BitMatrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch(format!(
                "map is {}x{}, complexes have dims {} → {}",
                matrix.rows(),
                matrix.cols(),
                source.dim(),
                target.dim()
            )));
        }
        if matrix.mul(source.differential()) != target.differential().mul(&matrix) {
            return Err(Error::invariant("chain map", "f∘d ≠ d∘f"));
        }
        Ok(Self { source, target, matrix })
    }

    pub fn source(&self) -> &GradedComplex {
        &self.source
    }

    pub fn target(&self) -> &GradedComplex {
        &self.target
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    /// Whether the map is an isomorphism of chain complexes.
    pub fn is_isomorphism(&self) -> bool {
        self.matrix.is_invertible()
    }

    /// The induced map on homology in the representative bases.
    pub fn induced(&self) -> Result<BitMatrix> {
        let hs = self.source.homology();
        let ht = self.target.homology();
        let cols: Vec<BitVec> =
            hs.representatives().iter().map(|r| ht.coords(&self.matrix.mul_vec(r))).collect::<Result<_>>()?;
        Ok(BitMatrix::from_columns(ht.rank(), &cols))
    }
}
