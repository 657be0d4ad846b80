use super::homotopy::hom_resolved;
use super::resolve::{proj_resolve, ProjResolution};
use super::Complex;
use crate::error::Result;
use crate::module::ExtDim;

#[derive(Clone, Debug)]
pub enum Compactness {
    /// A perfect representative was found.
    Compact(ProjResolution),
    Unknown {
        bound: usize,
    },
}

impl Compactness {
    pub fn is_compact(&self) -> bool {
        matches!(self, Compactness::Compact(_))
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Compactness::Compact(_) => "compact",
            Compactness::Unknown { .. } => "unknown",
        }
    }
}

pub fn compactness_check(x: &Complex, bound: usize) -> Result<Compactness> {
    let r = proj_resolve(x, bound)?;
    Ok(if r.truncated { Compactness::Unknown { bound } } else { Compactness::Compact(r) })
}

/// `Hom(X, X[n])` for `n != 0` over the window outside of which it vanishes
/// for degree reasons.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exceptionality {
    pub window: (i64, i64),
    /// Degrees with `Hom(X, X[n]) != 0`, with the dimension.
    pub failures: Vec<(i64, usize)>,
    /// Degrees the truncated resolution could not decide.
    pub unknown: Vec<i64>,
}

impl Exceptionality {
    pub fn is_exceptional(&self) -> bool {
        self.failures.is_empty() && self.unknown.is_empty()
    }
}

/// Degrees `n` for which a chain map `P -> Y[n]` can be nonzero.
pub fn degree_window(p: &Complex, y: &Complex) -> Option<(i64, i64)> {
    let (plo, phi) = p.support()?;
    let (ylo, yhi) = y.support()?;
    Some((ylo - phi, yhi - plo))
}

pub fn exceptionality_check(x: &Complex, bound: usize) -> Result<Exceptionality> {
    let x = x.trimmed();
    let r = proj_resolve(&x, bound)?;
    let Some(window) = degree_window(&r.complex, &x) else {
        return Ok(Exceptionality { window: (0, 0), failures: vec![], unknown: vec![] });
    };
    let mut failures = Vec::new();
    let mut unknown = Vec::new();
    for n in window.0..=window.1 {
        if n == 0 {
            continue;
        }
        match hom_resolved(&r, &x, n, bound)?.dim {
            ExtDim::Known(0) => {}
            ExtDim::Known(d) => failures.push((n, d)),
            ExtDim::Unknown { .. } => unknown.push(n),
        }
    }
    Ok(Exceptionality { window, failures, unknown })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::module::Module;

    #[test]
    fn projective_stalk_is_compact_and_exceptional() {
        let a = fixtures::kr(3, 2);
        let x = Complex::stalk(&Module::regular(&a), 0);
        assert!(compactness_check(&x, 4).unwrap().is_compact());
        assert!(exceptionality_check(&x, 4).unwrap().is_exceptional());
    }

    #[test]
    fn self_extension_detected() {
        let a = fixtures::truncated_polynomial(2);
        let s = Complex::stalk(&Module::simple(&a, 0), 0);
        assert_eq!(compactness_check(&s, 3).unwrap().as_str(), "unknown");
        let e = exceptionality_check(&s, 3).unwrap();
        assert!(e.failures.contains(&(1, 1)));
        assert!(!e.is_exceptional());
    }

    #[test]
    fn empty_complex_is_exceptional() {
        let a = fixtures::kr(2, 2);
        assert!(exceptionality_check(&Complex::zero(&a), 4).unwrap().is_exceptional());
    }

    #[test]
    fn shifted_sum_of_regular() {
        let a = fixtures::kr(2, 2);
        let r = Complex::stalk(&Module::regular(&a), 0);
        let (x, _, _) = Complex::direct_sum(&[r.clone(), r.shift(1)]).unwrap();
        let e = exceptionality_check(&x, 4).unwrap();
        assert_eq!(e.window, (-1, 1));
        assert_eq!(e.failures, vec![(-1, a.dim()), (1, a.dim())]);
    }
}
