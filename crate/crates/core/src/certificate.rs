//! Equivalence certificates and derived-invariant comparisons.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::{cartan_matrix, center_dimension, FDAlgebra, TriangularPresentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        }
    }
}

/// One verified condition. `window` is the range of degrees inspected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub id: String,
    pub description: String,
    pub window: Option<(i64, i64)>,
    pub status: Status,
    pub witness: Option<String>,
}

impl Condition {
    pub fn new(id: &str, description: impl Into<String>, status: Status) -> Self {
        Condition { id: id.into(), description: description.into(), window: None, status, witness: None }
    }

    pub fn with_window(mut self, lo: i64, hi: i64) -> Self {
        self.window = Some((lo, hi));
        self
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantComparison {
    pub simples: (usize, usize),
    /// `None` when the distinguished idempotents are not primitive.
    pub cartan_determinant: (Option<BigInt>, Option<BigInt>),
    pub center_dimension: (usize, usize),
}

impl InvariantComparison {
    pub fn agree(&self) -> bool {
        self.simples.0 == self.simples.1
            && self.cartan_determinant.0.is_some()
            && self.cartan_determinant.0 == self.cartan_determinant.1
            && self.center_dimension.0 == self.center_dimension.1
    }
}

/// Number of simples, Cartan determinant and center dimension of two algebras.
pub fn invariants_compare(a: &FDAlgebra, e: &FDAlgebra) -> InvariantComparison {
    InvariantComparison {
        simples: (a.num_vertices(), e.num_vertices()),
        cartan_determinant: (
            cartan_matrix(a).ok().map(|c| c.determinant),
            cartan_matrix(e).ok().map(|c| c.determinant),
        ),
        center_dimension: (center_dimension(a), center_dimension(e)),
    }
}

#[derive(Clone, Debug)]
pub struct EquivalenceCertificate {
    pub construction: String,
    /// Human-readable description of the tilting object.
    pub tilting_object: String,
    pub conditions: Vec<Condition>,
    pub algebra: Arc<FDAlgebra>,
    pub endomorphism_algebra: Option<Arc<FDAlgebra>>,
    pub endomorphism_triangular: Option<TriangularPresentation>,
    pub invariants: Option<InvariantComparison>,
}

impl EquivalenceCertificate {
    pub fn new(construction: &str, tilting_object: impl Into<String>, algebra: &Arc<FDAlgebra>) -> Self {
        EquivalenceCertificate {
            construction: construction.into(),
            tilting_object: tilting_object.into(),
            conditions: vec![],
            algebra: algebra.clone(),
            endomorphism_algebra: None,
            endomorphism_triangular: None,
            invariants: None,
        }
    }

    pub fn push(&mut self, c: Condition) {
        self.conditions.push(c);
    }

    /// Records `E` and compares its invariants with the base algebra.
    pub fn set_endomorphism_algebra(&mut self, e: Arc<FDAlgebra>) {
        self.invariants = Some(invariants_compare(&self.algebra, &e));
        self.endomorphism_algebra = Some(e);
    }

    /// Valid only when every condition passes and the invariants agree.
    pub fn is_valid(&self) -> bool {
        self.conditions.iter().all(|c| c.status == Status::Pass) && self.invariants.as_ref().is_some_and(|i| i.agree())
    }

    pub fn failing(&self) -> Vec<&Condition> {
        self.conditions.iter().filter(|c| c.status != Status::Pass).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn compare_self_and_field() {
        let a = fixtures::kr(2, 2);
        assert!(invariants_compare(&a, &a).agree());
        let k = fixtures::truncated_polynomial(1);
        assert!(!invariants_compare(&a, &k).agree());
    }

    #[test]
    fn certificate_needs_invariants() {
        let a = fixtures::a2();
        let mut c = EquivalenceCertificate::new("test", "A", &a);
        c.push(Condition::new("x", "trivial", Status::Pass));
        assert!(!c.is_valid());
        c.set_endomorphism_algebra(a.clone());
        assert!(c.is_valid());
        c.push(Condition::new("y", "broken", Status::Fail));
        assert!(!c.is_valid());
    }
}
