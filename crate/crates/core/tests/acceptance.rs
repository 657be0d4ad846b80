//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero on failure.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tiltkit::algebra::{detect_triangular, FDAlgebra, TriangularPresentation};
use tiltkit::ar::{apr_equivalent_algebra, bimodule_left_module, build_apr_tilting, endo_triangularity, tau_inverse};
use tiltkit::certificate::{invariants_compare, EquivalenceCertificate, Status};
use tiltkit::derived::{hom_derived, Complex};
use tiltkit::fixtures;
use tiltkit::format::{certificate_to_json, to_canonical_string};
use tiltkit::glue::{bimodule_pd, cor45_check, cor46_check, cor48_stalk_glue, glue_jshriek, glue_jstar};
use tiltkit::module::{ext, hom_space, min_projective_resolution, split_left_inverse, ExtDim, Module};
use tiltkit::recollement::{
    prop33_check, torsion_canonical_sequence, verify_recollement_axioms, Corpus, IdempotentRecollement,
};
use tiltkit::Result;

const BOUND: usize = 8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn tp(a: &Arc<FDAlgebra>, e: &[usize]) -> TriangularPresentation {
    detect_triangular(a, e).expect("triangular split")
}

/// Triangular fixtures used by the gluing criteria.
fn glue_fixtures() -> Vec<(&'static str, TriangularPresentation)> {
    vec![
        ("KR(2,2)", tp(&fixtures::kr(2, 2), &[0])),
        ("KR(3,2)", tp(&fixtures::kr(3, 2), &[0])),
        ("A3", tp(&fixtures::linear_an(3), &[0])),
        ("A3 e=1,2", tp(&fixtures::linear_an(3), &[0, 1])),
        ("A3/rad^2", tp(&fixtures::linear_a3_rad2(), &[0])),
    ]
}

fn vertex(a: &FDAlgebra, name: &str) -> usize {
    a.vertex_index(name).unwrap()
}

fn criterion_1() -> Result<Outcome> {
    let a = fixtures::kr(3, 2);
    let t = tp(&a, &[vertex(&a, "x")]);
    let (db, dc, dm) = t.dims();
    let px = Module::projective(&a, vertex(&a, "x"));
    let py = Module::projective(&a, vertex(&a, "y"));
    let tau = tau_inverse(&py)?.module;
    let dims = |m: &Module| (m.dims()[vertex(&a, "x")], m.dims()[vertex(&a, "y")]);
    let got = (a.dim(), db, dc, dm, dims(&px), dims(&py), dims(&tau));
    let want = (7, 3, 2, 2, (3, 2), (0, 2), (3, 0));
    Ok(outcome(got == want, format!("dims (A, B, C, M, P_x, P_y, tau^-1 P_y) = {got:?}")))
}

fn kr_apr(a: usize, b: usize) -> Result<(TriangularPresentation, tiltkit::ar::AprTiltingData)> {
    let alg = fixtures::kr(a, b);
    let t = tp(&alg, &[0]);
    let d = build_apr_tilting(&t, false, BOUND)?;
    Ok((t, d))
}

fn has_any_triangular_split(e: &Arc<FDAlgebra>) -> bool {
    let n = e.num_vertices();
    (1..(1usize << n) - 1).any(|mask| {
        let verts: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
        detect_triangular(e, &verts).is_some()
    })
}

fn criterion_2() -> Result<Outcome> {
    let mut notes = Vec::new();
    // (1, 2): preconditions fail and T is not tilting
    let (t12, d12) = kr_apr(1, 2)?;
    let case1 = build_apr_tilting(&t12, true, BOUND).is_err() && !d12.report.is_tilting();
    notes.push(format!("(1,2) precondition error and not tilting: {case1}"));
    // (3, 2): tilting, Hom both ways nonzero, E not triangular
    let (_, d32) = kr_apr(3, 2)?;
    let tri32 = endo_triangularity(&d32)?;
    let c32 = apr_equivalent_algebra(&d32)?;
    let e32 = c32.endomorphism_algebra.clone().unwrap();
    let case2 = d32.report.is_tilting()
        && tri32.hom_tau_to_aeb > 0
        && tri32.hom_aeb_to_tau > 0
        && c32.endomorphism_triangular.is_none()
        && !has_any_triangular_split(&e32);
    notes.push(format!(
        "(3,2) tilting, Hom(tau,P_x)={}, Hom(P_x,tau)={}, E triangular: {}",
        tri32.hom_tau_to_aeb,
        tri32.hom_aeb_to_tau,
        has_any_triangular_split(&e32)
    ));
    // (2, 2): tilting, Hom(tau^-1 P_y, P_x) = 0, E = [[End(tau^-1 C)^op, 0], [*, B]]
    let (t22, d22) = kr_apr(2, 2)?;
    let tri22 = endo_triangularity(&d22)?;
    let c22 = apr_equivalent_algebra(&d22)?;
    let end_tau = hom_space(&d22.tau.module, &d22.tau.module)?.dim();
    let case3 = match &c22.endomorphism_triangular {
        Some(e) => {
            let same_b = invariants_compare(&e.c, &t22.b).agree() && e.c.dim() == t22.b.dim();
            d22.report.is_tilting() && tri22.hom_tau_to_aeb == 0 && e.b.dim() == end_tau && same_b
        }
        None => false,
    };
    notes.push(format!("(2,2) tilting, Hom(tau,P_x)={}, E triangular: {case3}", tri22.hom_tau_to_aeb));
    Ok(outcome(case1 && case2 && case3, notes.join("; ")))
}

fn criterion_3() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut tilting = 0;
    let mut total = 0;
    let mut counterexamples = Vec::new();
    while tilting < 24 && total < 100 {
        let a = rng.gen_range(1..=4);
        let b = rng.gen_range(1..=4);
        let arrows = rng.gen_range(1..=2);
        let kill = if arrows == 2 && rng.gen_bool(0.5) { Some(rng.gen_range(1..=3)) } else { None };
        let alg = fixtures::kr_variant(a, b, arrows, kill);
        let t = tp(&alg, &[0]);
        let d = build_apr_tilting(&t, false, BOUND)?;
        total += 1;
        if !d.report.is_tilting() {
            continue;
        }
        tilting += 1;
        let v = endo_triangularity(&d)?;
        if !v.equivalence_holds() {
            counterexamples.push(format!("a={a} b={b} arrows={arrows} kill={kill:?}"));
        }
    }
    Ok(outcome(
        tilting >= 20 && counterexamples.is_empty(),
        format!("{total} fixtures, {tilting} with T tilting, counterexamples {counterexamples:?}"),
    ))
}

fn criterion_4() -> Result<Outcome> {
    let corpus: Vec<(&str, Arc<FDAlgebra>)> = vec![
        ("KR(2,2)", fixtures::kr(2, 2)),
        ("KR(3,2)", fixtures::kr(3, 2)),
        ("KR(1,2)", fixtures::kr(1, 2)),
        ("A3", fixtures::linear_an(3)),
        ("A3/rad^2", fixtures::linear_a3_rad2()),
        ("two-cycle", fixtures::two_cycle_rad2()),
        ("M2(k)", fixtures::matrix_algebra()),
        ("k x k", fixtures::product_of_fields(2)),
        ("k x k x k", fixtures::product_of_fields(3)),
    ];
    let mut instances = 0;
    let mut bad = Vec::new();
    let mut controls = 0;
    for (name, a) in &corpus {
        let n = a.num_vertices();
        for mask in 1..(1usize << n) - 1 {
            let e: Vec<usize> = (0..n).filter(|v| mask >> v & 1 == 1).collect();
            let v = prop33_check(a, &e)?;
            instances += 1;
            if v.corner_ef_dim > 0 {
                controls += 1;
            }
            if !v.consistent() {
                bad.push(format!("{name} e={e:?}"));
            }
        }
    }
    Ok(outcome(bad.is_empty(), format!("{instances} instances ({controls} non-triangular), mismatches {bad:?}")))
}

fn criterion_5() -> Result<Outcome> {
    let mut checks = 0;
    let mut failures = Vec::new();
    let mut sequences = 0;
    for (name, t) in glue_fixtures() {
        let r = IdempotentRecollement::new(&t.ambient, &t.b_vertices)?;
        let mut corpus = Corpus::standard(&r);
        for v in 0..t.ambient.num_vertices() {
            let tau = tau_inverse(&Module::projective(&t.ambient, v))?.module;
            if !tau.is_zero() {
                corpus.ambient.push(tau);
            }
        }
        let rep = verify_recollement_axioms(&r, &corpus)?;
        checks += rep.checks;
        failures.extend(rep.failures.iter().map(|f| format!("{name}: {}", f.check)));
        for x in &corpus.ambient {
            let w = torsion_canonical_sequence(&t, x)?;
            sequences += 1;
            if !w.verified() {
                failures.push(format!("{name}: torsion sequence of {:?}", x.dims()));
            }
        }
    }
    Ok(outcome(
        failures.is_empty(),
        format!("{checks} axiom checks, {sequences} torsion sequences, failures {failures:?}"),
    ))
}

fn oracle_modules(a: &Arc<FDAlgebra>) -> Result<Vec<Module>> {
    let mut out = Vec::new();
    for v in 0..a.num_vertices() {
        out.push(Module::projective(a, v));
        out.push(Module::simple(a, v));
        let t = tau_inverse(&Module::projective(a, v))?.module;
        if !t.is_zero() {
            out.push(t);
        }
    }
    Ok(out)
}

fn criterion_6() -> Result<Outcome> {
    let algebras =
        [fixtures::kr(2, 2), fixtures::kr(3, 2), fixtures::linear_a3_rad2(), fixtures::truncated_polynomial(2)];
    let mut compared = 0;
    let mut mismatches = Vec::new();
    for a in &algebras {
        let mods = oracle_modules(a)?;
        for x in &mods {
            for y in &mods {
                for n in 0..=6usize {
                    let k = hom_derived(&Complex::stalk(x, 0), &Complex::stalk(y, 0), n as i64, BOUND)?.dim;
                    let m = ext(x, y, n, BOUND)?;
                    compared += 1;
                    if k != m || matches!(k, ExtDim::Unknown { .. }) {
                        mismatches.push(format!("{:?} {:?} n={n}: {k:?} vs {m:?}", x.dims(), y.dims()));
                    }
                }
            }
        }
    }
    Ok(outcome(
        mismatches.is_empty(),
        format!("{compared} comparisons, mismatches {:?}", &mismatches[..mismatches.len().min(3)]),
    ))
}

/// `P_w + tau^-1(P_v)` for a simple projective non-injective `P_v`, when one exists.
fn apr_module(a: &Arc<FDAlgebra>) -> Result<Option<Module>> {
    for v in 0..a.num_vertices() {
        let p = Module::projective(a, v);
        if p.total_dim() != 1 {
            continue;
        }
        let tau = tau_inverse(&p)?.module;
        if tau.is_zero() {
            continue;
        }
        let mut parts: Vec<Module> =
            (0..a.num_vertices()).filter(|&w| w != v).map(|w| Module::projective(a, w)).collect();
        parts.push(tau);
        return Ok(Some(Module::direct_sum(&parts)?.0));
    }
    Ok(None)
}

fn candidates(a: &Arc<FDAlgebra>) -> Result<Vec<Complex>> {
    let reg = Module::regular(a);
    let mut out = vec![Complex::stalk(&reg, 0), Complex::stalk(&reg, 1), Complex::stalk(&reg, -1)];
    if let Some(t) = apr_module(a)? {
        out.push(Complex::stalk(&t, 0));
    }
    Ok(out)
}

/// `C + (C --id--> C)` in degrees 0 and 1.
fn split_cone(c: &Arc<FDAlgebra>) -> Result<Complex> {
    let reg = Module::regular(c);
    let (sum, incl, _) = Module::direct_sum(&[reg.clone(), reg.clone()])?;
    let proj = split_left_inverse(&incl[0])?.expect("split");
    Complex::new(c, 0, vec![sum, reg], vec![proj])
}

const AUTOMATIC: [&str; 3] = ["hom_jz_iy_automatic", "hom_iy_jz_automatic", "hom_t_b_automatic"];

/// Certificates from every gluing construction on every fixture.
fn glued_certificates() -> Result<Vec<(String, EquivalenceCertificate)>> {
    let mut out = Vec::new();
    for (name, t) in glue_fixtures() {
        let ys = candidates(&t.c)?;
        let zs = candidates(&t.b)?;
        for (i, y) in ys.iter().enumerate() {
            for (j, z) in zs.iter().enumerate() {
                out.push((format!("{name} jshriek y{i} z{j}"), glue_jshriek(&t, y, z, BOUND)?));
                if bimodule_pd(&t, BOUND)?.is_some() {
                    out.push((format!("{name} jstar y{i} z{j}"), glue_jstar(&t, y, z, BOUND)?));
                }
            }
        }
        for s in 1..=2 {
            let g = cor48_stalk_glue(&t, &Module::regular(&t.c), s, BOUND)?;
            out.push((format!("{name} stalk s={s}"), g.certificate));
        }
        let d = build_apr_tilting(&t, false, BOUND)?;
        out.push((format!("{name} apr"), apr_equivalent_algebra(&d)?));
    }
    Ok(out)
}

fn criterion_7(certs: &[(String, EquivalenceCertificate)]) -> Result<Outcome> {
    let mut automatic = 0;
    let mut bad = Vec::new();
    for (name, c) in certs {
        for cond in c.conditions.iter().filter(|k| AUTOMATIC.contains(&k.id.as_str())) {
            automatic += 1;
            if cond.status != Status::Pass {
                bad.push(format!("{name}: {}", cond.id));
            }
        }
    }
    let mut cor45 = 0;
    let mut cor45_violations = 0;
    let mut cor46 = 0;
    let mut cor46_violations = 0;
    for (name, t) in glue_fixtures() {
        for z in candidates(&t.b)? {
            let r = cor45_check(&t, &z, BOUND)?;
            cor45 += 1;
            cor45_violations += usize::from(!r.holds);
            if !r.agrees {
                bad.push(format!("{name}: homology criterion on {:?}", z.support()));
            }
        }
        let c = Module::regular(&t.c);
        for p in [Complex::stalk(&c, 0), Complex::stalk(&c, 1), Complex::stalk(&c, -1), split_cone(&t.c)?] {
            let r = cor46_check(&t, &p, BOUND)?;
            cor46 += 1;
            cor46_violations += usize::from(!r.holds);
            if !r.agrees {
                bad.push(format!("{name}: dual differential criterion on {:?}", p.support()));
            }
        }
    }
    let pass = bad.is_empty() && automatic > 0 && cor45_violations > 0 && cor46_violations > 0;
    Ok(outcome(
        pass,
        format!(
            "{automatic} automatic-vanishing conditions; homology criterion {cor45} cases ({cor45_violations} violations); \
             dual differential criterion {cor46} cases ({cor46_violations} violations); disagreements {bad:?}"
        ),
    ))
}

fn criterion_8() -> Result<Outcome> {
    let mut notes = Vec::new();
    let mut pass = true;
    let s1 = [
        ("KR(2,2)", tp(&fixtures::kr(2, 2), &[0])),
        ("KR(3,2)", tp(&fixtures::kr(3, 2), &[0])),
        ("A3", tp(&fixtures::linear_an(3), &[0])),
    ];
    let mut matched = 0;
    for (name, t) in &s1 {
        let g = cor48_stalk_glue(t, &Module::regular(&t.c), 1, BOUND)?;
        let ok = g.certificate.is_valid()
            && g.certificate.conditions.iter().any(|c| c.id == "structure_constants_agree" && c.status == Status::Pass);
        matched += usize::from(ok);
        notes.push(format!("{name} s=1: {ok}"));
    }
    pass &= matched >= 2;
    // s = d + 1 with T = C
    let t = tp(&fixtures::linear_a3_rad2(), &[0]);
    let d = bimodule_pd(&t, BOUND)?.expect("finite");
    let cm = bimodule_left_module(&t)?;
    let brute = min_projective_resolution(&cm, BOUND)?.ext(&Module::regular(&t.c), d)?.dim;
    let brute = match brute {
        ExtDim::Known(n) => n,
        ExtDim::Unknown { .. } => return Ok(outcome(false, "Ext of the bimodule beyond the bound")),
    };
    let g = cor48_stalk_glue(&t, &Module::regular(&t.c), d + 1, BOUND)?;
    let lower = g.glued.as_ref().map(|e| e.m.dim);
    let ok = g.certificate.is_valid() && lower == Some(brute) && brute > 0;
    notes.push(format!("A3/rad^2 s={}: bimodule dim {lower:?}, Ext^{d}(M, C) = {brute}", d + 1));
    pass &= ok;
    Ok(outcome(pass, notes.join("; ")))
}

fn criterion_9(certs: &[(String, EquivalenceCertificate)]) -> Result<Outcome> {
    let mut valid = 0;
    let mut bad = Vec::new();
    for (name, c) in certs.iter().filter(|(_, c)| c.is_valid()) {
        valid += 1;
        let e = c.endomorphism_algebra.as_ref().expect("valid certificates carry E");
        if !invariants_compare(&c.algebra, e).agree() {
            bad.push(name.clone());
        }
    }
    let (_, d) = kr_apr(2, 2)?;
    let c = apr_equivalent_algebra(&d)?;
    let i = invariants_compare(&c.algebra, c.endomorphism_algebra.as_ref().unwrap());
    let kr = i.simples.0 == i.simples.1
        && i.cartan_determinant.0.is_some()
        && i.cartan_determinant.0 == i.cartan_determinant.1
        && i.center_dimension.0 == i.center_dimension.1;
    Ok(outcome(
        bad.is_empty() && valid > 0 && kr,
        format!("{valid} valid certificates, disagreeing {bad:?}; KR(2,2) vs APR E: {i:?}"),
    ))
}

fn serialized(certs: &[(String, EquivalenceCertificate)]) -> Result<Vec<(String, String)>> {
    certs.iter().map(|(n, c)| Ok((n.clone(), to_canonical_string(&certificate_to_json(c)?)))).collect()
}

fn criterion_10(first: &[(String, EquivalenceCertificate)]) -> Result<Outcome> {
    let dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance_certificates");
    let write = |run: &str, certs: &[(String, String)]| -> std::io::Result<Vec<Vec<u8>>> {
        let d = dir.join(run);
        std::fs::create_dir_all(&d)?;
        let mut bytes = Vec::new();
        for (i, (_, text)) in certs.iter().enumerate() {
            let p = d.join(format!("{i:03}.json"));
            std::fs::write(&p, text)?;
            bytes.push(std::fs::read(&p)?);
        }
        Ok(bytes)
    };
    let a = write("run1", &serialized(first)?).expect("writable target dir");
    let second = glued_certificates()?;
    let b = write("run2", &serialized(&second)?).expect("writable target dir");
    Ok(outcome(a == b && !a.is_empty(), format!("{} certificate files compared byte for byte", a.len())))
}

type Check<'a> = Box<dyn Fn() -> Result<Outcome> + 'a>;

fn main() -> ExitCode {
    let start = Instant::now();
    let certs = glued_certificates().expect("certificates");
    let criteria: Vec<(usize, &str, Check)> = vec![
        (1, "worked example dimensions", Box::new(criterion_1)),
        (2, "worked example trichotomy", Box::new(criterion_2)),
        (3, "triangularity criterion on a seeded corpus", Box::new(criterion_3)),
        (4, "idempotent criteria against eAf = 0", Box::new(criterion_4)),
        (5, "recollement axioms and torsion sequences", Box::new(criterion_5)),
        (6, "homotopy Hom against module Ext", Box::new(criterion_6)),
        (7, "automatic vanishing, homology and dual-differential criteria", Box::new(|| criterion_7(&certs))),
        (8, "stalk gluing structure constants", Box::new(criterion_8)),
        (9, "derived invariants of valid certificates", Box::new(|| criterion_9(&certs))),
        (10, "deterministic certificates", Box::new(|| criterion_10(&certs))),
    ];
    let mut failed = 0;
    for (n, name, f) in criteria {
        let t = Instant::now();
        let o = f().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {n:>2} {}: {name} [{:.1}s] {}",
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("total {:.1}s, {failed} failed", start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
