//! Small algebras used by tests, the acceptance suite and the CLI examples.

use std::sync::Arc;

use crate::algebra::{build_fd_algebra, FDAlgebra, PathAlgebraPresentation, Quiver, Relation};
use crate::linalg::{int, unit_vec, Scalar};

fn path(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn power(name: &str, n: usize) -> Vec<String> {
    vec![name.to_string(); n]
}

fn monomial(p: Vec<String>) -> Relation {
    Relation { terms: vec![(int(1), p)] }
}

/// Quiver `x --alpha--> y` with loops `delta` at `x` and `theta` at `y`,
/// relations `delta^a = theta^b = 0` and `alpha delta = theta alpha`.
pub fn kr_presentation(a: usize, b: usize) -> PathAlgebraPresentation {
    kr_variant_presentation(a, b, 1, None)
}

/// Variant with `arrows` parallel arrows `alpha1..` each commuting with the
/// loops. When `kill` is `Some(k)`, adds `theta^k alpha2 = 0`.
pub fn kr_variant_presentation(a: usize, b: usize, arrows: usize, kill: Option<usize>) -> PathAlgebraPresentation {
    assert!(a >= 1 && b >= 1 && arrows >= 1);
    let names: Vec<String> =
        if arrows == 1 { vec!["alpha".into()] } else { (1..=arrows).map(|i| format!("alpha{i}")).collect() };
    let mut arrow_list: Vec<(String, &str, &str)> = Vec::new();
    if a > 1 {
        arrow_list.push(("delta".into(), "x", "x"));
    }
    for n in &names {
        arrow_list.push((n.clone(), "x", "y"));
    }
    if b > 1 {
        arrow_list.push(("theta".into(), "y", "y"));
    }
    let arrows_ref: Vec<(&str, &str, &str)> = arrow_list.iter().map(|(n, s, t)| (n.as_str(), *s, *t)).collect();
    let quiver = Quiver::new(&["x", "y"], &arrows_ref);
    let mut relations = Vec::new();
    if a > 1 {
        relations.push(monomial(power("delta", a)));
    }
    if b > 1 {
        relations.push(monomial(power("theta", b)));
    }
    for n in &names {
        match (a > 1, b > 1) {
            (true, true) => {
                relations.push(Relation { terms: vec![(int(1), path(&["delta", n])), (int(-1), path(&[n, "theta"]))] })
            }
            // a missing loop acts as zero on its side of the commutation relation
            (true, false) => relations.push(monomial(path(&["delta", n]))),
            (false, true) => relations.push(monomial(path(&[n, "theta"]))),
            (false, false) => {}
        }
    }
    if let Some(k) = kill {
        if arrows >= 2 && b > 1 && k >= 1 && k < b {
            let mut p = vec![names[1].clone()];
            p.extend(power("theta", k));
            relations.push(monomial(p));
        }
    }
    PathAlgebraPresentation::new(quiver, relations, a + b + 1)
}

pub fn kr(a: usize, b: usize) -> Arc<FDAlgebra> {
    Arc::new(build_fd_algebra(&kr_presentation(a, b)).expect("valid presentation"))
}

pub fn kr_variant(a: usize, b: usize, arrows: usize, kill: Option<usize>) -> Arc<FDAlgebra> {
    Arc::new(build_fd_algebra(&kr_variant_presentation(a, b, arrows, kill)).expect("valid presentation"))
}

/// `k[theta]/theta^b` on a single vertex `v`; the field when `b = 1`.
pub fn truncated_polynomial(b: usize) -> Arc<FDAlgebra> {
    let p = if b <= 1 {
        PathAlgebraPresentation::new(Quiver::new(&["v"], &[]), vec![], 1)
    } else {
        PathAlgebraPresentation::new(
            Quiver::new(&["v"], &[("theta", "v", "v")]),
            vec![monomial(power("theta", b))],
            b + 1,
        )
    };
    Arc::new(build_fd_algebra(&p).expect("valid presentation"))
}

/// `k x ... x k` with vertices `1..n`.
pub fn product_of_fields(n: usize) -> Arc<FDAlgebra> {
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let p = PathAlgebraPresentation::new(Quiver::new(&refs, &[]), vec![], 1);
    Arc::new(build_fd_algebra(&p).expect("valid presentation"))
}

/// Path algebra of `x --a--> y`.
pub fn a2() -> Arc<FDAlgebra> {
    let p = PathAlgebraPresentation::new(Quiver::new(&["x", "y"], &[("a", "x", "y")]), vec![], 2);
    Arc::new(build_fd_algebra(&p).expect("valid presentation"))
}

/// Linear `A_n` quiver `1 -> 2 -> ... -> n`.
pub fn linear_an(n: usize) -> Arc<FDAlgebra> {
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let arrows: Vec<(String, String, String)> =
        (1..n).map(|i| (format!("a{i}"), names[i - 1].clone(), names[i].clone())).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let arefs: Vec<(&str, &str, &str)> = arrows.iter().map(|(a, s, t)| (a.as_str(), s.as_str(), t.as_str())).collect();
    let p = PathAlgebraPresentation::new(Quiver::new(&refs, &arefs), vec![], n);
    Arc::new(build_fd_algebra(&p).expect("valid presentation"))
}

/// Two-cycle `1 <-> 2` with radical square zero.
pub fn two_cycle_rad2() -> Arc<FDAlgebra> {
    let p = PathAlgebraPresentation::new(Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]), vec![], 2);
    Arc::new(build_fd_algebra(&p).expect("valid presentation"))
}

fn matrix_units() -> Vec<Vec<Vec<Scalar>>> {
    let elems = [(0, 0), (0, 1), (1, 0), (1, 1)];
    let mut products = vec![vec![vec![int(0); 4]; 4]; 4];
    for (a, &(i, j)) in elems.iter().enumerate() {
        for (b, &(k, l)) in elems.iter().enumerate() {
            if j == k {
                let c = elems.iter().position(|&e| e == (i, l)).unwrap();
                products[a][b][c] = int(1);
            }
        }
    }
    products
}

/// Full `2 x 2` matrix algebra with the diagonal idempotents `1`, `2`.
pub fn matrix_algebra() -> Arc<FDAlgebra> {
    let idem = vec![unit_vec(4, 0), unit_vec(4, 3)];
    Arc::new(
        FDAlgebra::from_structure_constants(vec!["1".into(), "2".into()], &matrix_units(), &idem)
            .expect("matrix units"),
    )
}

/// Full `2 x 2` matrix algebra with only the identity as distinguished idempotent.
pub fn matrix_algebra_one_idempotent() -> Arc<FDAlgebra> {
    let mut one = unit_vec(4, 0);
    one[3] = int(1);
    Arc::new(FDAlgebra::from_structure_constants(vec!["v".into()], &matrix_units(), &[one]).expect("matrix units"))
}

/// `1 --a1--> 2 --a2--> 3` with `a2 a1 = 0`. With `e = e_1` the bimodule is the
/// simple at `2` over the path algebra of `2 -> 3`, of projective dimension 1.
pub fn linear_a3_rad2() -> Arc<FDAlgebra> {
    let p = PathAlgebraPresentation::new(
        Quiver::new(&["1", "2", "3"], &[("a1", "1", "2"), ("a2", "2", "3")]),
        vec![monomial(path(&["a1", "a2"]))],
        3,
    );
    Arc::new(build_fd_algebra(&p).expect("valid presentation"))
}
