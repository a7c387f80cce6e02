//! Acceptance criteria, one PASS/FAIL line each. Every bound and tolerance
//! is pinned below. The process fails only on unexpected failures; FAIL
//! lines carrying a `known:` note are documented non-identities.

#[global_allocator]
static GLOBAL: mimalloc::MiMalloc = mimalloc::MiMalloc;

use std::process::ExitCode;
use std::time::Instant;

use symjoin::chains::{check_sign_quasi_iso, check_sign_symmetry};
use symjoin::operads::certify_einfinity;
use symjoin::presheaves::{augment, boundary, fixtures, standard_object, PresheafPair, Variance};
use symjoin::report::IdentityReport;
use symjoin::verify;

/// Morphism calculus: sizes ≤ 5 (associativity ≤ 4 inside the suite).
const C1_MAX_SIZE: usize = 5;
/// Join diagrams: arity and inner arities ≤ 2, degrees ≤ 4.
const C2_ARITY: usize = 2;
const C2_DEGREE: usize = 4;
const C2_SEED: u64 = 0;
/// Sign map: degrees ≤ 4; swap equivariance p+q ≤ 4.
const C3_DEGREE: i64 = 4;
/// E∞ windows `(n, D)`.
const C4_WINDOWS: [(usize, i64); 3] = [(1, 5), (2, 4), (3, 3)];
/// Coactions: n ≤ 2, kᵢ ≤ 2, operad degree ≤ 1, chain degree ≤ 2.
const C6_ARITY: usize = 2;
const C6_DEGREE: i64 = 2;
/// Steenrod perturbation seed (10 perturbations per class, fixed in the suite).
const C8_SEED: u64 = 0x5eed;
/// Bridge: n ≤ 3, degree ≤ 3 (composition n, kᵢ ≤ 2, degree ≤ 1, cup-i ≤ 3).
const C9_ARITY: usize = 3;
const C9_DEGREE: i64 = 3;

struct Outcome {
    unexpected: usize,
}

impl Outcome {
    fn line(&mut self, id: &str, what: &str, reports: &[IdentityReport], started: Instant) {
        let pass = reports.iter().all(IdentityReport::passed);
        let instances: usize = reports.iter().map(|r| r.instance_count).sum();
        println!(
            "{} criterion {id}: {what} ({} identities, {instances} instances, {:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            reports.len(),
            started.elapsed().as_secs_f64()
        );
        for r in reports.iter().filter(|r| !r.passed()) {
            println!("    {}", r.to_string().replace('\n', "\n    "));
            if r.known_failure.is_none() {
                self.unexpected += 1;
            }
        }
    }
}

fn main() -> ExitCode {
    let mut out = Outcome { unexpected: 0 };

    let t = Instant::now();
    let r = verify::oscalc_suite(C1_MAX_SIZE);
    out.line("1", "(P1)–(P4) for Set/O/OΣ at sizes ≤ 5, OΣ associativity at ≤ 4", &r, t);

    let t = Instant::now();
    let r = verify::joins_suite(C2_ARITY, C2_DEGREE, C2_SEED);
    out.line("2", "α naturality, Θ associativity, α/Ψ square, Ψ operad laws and rectangle, pentagon; arity ≤ 2, degree ≤ 4", &r, t);

    let t = Instant::now();
    let hi = C3_DEGREE + 1;
    let mut r = Vec::new();
    let pairs = [
        ("O_2", PresheafPair::absolute(standard_object(Variance::O, 2))),
        ("(Δ¹)₊", PresheafPair::augmentation_pair(augment(fixtures::simplex(1)).unwrap())),
        ("(∂Δ³)₊", PresheafPair::augmentation_pair(augment(fixtures::boundary_simplex(3)).unwrap())),
        ("(O_2, ∂O_2)", boundary(Variance::O, 2)),
    ];
    for (name, pair) in pairs {
        r.push(IdentityReport::from_check(
            &format!("s_X chain map and s_X∘η_X = id on {name}"),
            serde_json::json!({"max_degree": C3_DEGREE}),
            check_sign_quasi_iso(&pair, hi),
        ));
    }
    let a = augment(fixtures::simplex(1)).unwrap();
    r.push(IdentityReport::from_check(
        "swap equivariance with sgn(τ_{p,q}) = (−1)^{pq}, X = O_2, Y = O_1",
        serde_json::json!({"max_p_plus_q": C3_DEGREE}),
        check_sign_symmetry(standard_object(Variance::O, 2), standard_object(Variance::O, 1), C3_DEGREE as usize),
    ));
    r.push(IdentityReport::from_check(
        "swap equivariance with sgn(τ_{p,q}) = (−1)^{pq}, X = Y = (Δ¹)₊",
        serde_json::json!({"max_p_plus_q": C3_DEGREE}),
        check_sign_symmetry(a.clone(), a, C3_DEGREE as usize),
    ));
    out.line("3", "sign map s_X and its swap equivariance, degrees ≤ 4, exact", &r, t);

    let t = Instant::now();
    let mut c4 = Vec::new();
    let mut c5 = Vec::new();
    for (n, d) in C4_WINDOWS {
        match certify_einfinity(n, d) {
            Ok(c) => {
                for rep in c.reports {
                    let degree_zero = rep.identity.contains("𝔧(n)₀") || rep.identity.contains("sgn∘d");
                    if degree_zero && n >= 2 {
                        c5.push(rep.clone());
                    }
                    if !degree_zero {
                        c4.push(rep);
                    }
                }
            }
            Err(e) => {
                let mut rep = IdentityReport::new("E∞ certificate", serde_json::json!({"arity": n, "window": d}));
                rep.fail(e.to_string());
                c4.push(rep);
            }
        }
    }
    out.line("4", "H_*(𝔧(n); ℤ) = ℤ in degree 0 and freeness, (n,D) ∈ {(1,5),(2,4),(3,3)}, SNF exact", &c4, t);
    out.line("5", "𝔧(n)₀ = span{id − sgn(π)π} ⊕ k·id with sgn killing im d, n = 2, 3, exact ranks", &c5, t);

    let t = Instant::now();
    let r = verify::coaction_reports(C6_ARITY, C6_DEGREE);
    let (normalized, rest): (Vec<_>, Vec<_>) = r.into_iter().partition(|r| r.identity.contains("normalized"));
    out.line("6", "coaction chain maps, coherence (n, kᵢ ≤ 2), naturality, augmentation independence on Δ², S¹, ∂Δ³", &rest, t);
    out.line("6n", "coalgebra coherence on normalized chains of Δ², S¹, ∂Δ³", &normalized, t);

    let t = Instant::now();
    let r = verify::cooperation_reports();
    out.line("7", "θ(id₂) = −AW, cup-i relation on ∂Δ³ and RP² for i ≤ 3, d e₁ = −(id₂+τ)", &r, t);

    let t = Instant::now();
    let r = verify::steenrod_suite(C8_SEED);
    out.line("8", "Sq¹ on RP², Sq^d = cup square, Sq⁰ = id, well-defined under 10 seeded perturbations", &r, t);

    let t = Instant::now();
    let r = verify::bridge_suite(C9_ARITY, C9_DEGREE);
    out.line("9", "S chain map and Σ-equivariant for n ≤ 3, degree ≤ 3; composition n, kᵢ ≤ 2, degree ≤ 1; S(e_i), i ≤ 3", &r, t);

    let t = Instant::now();
    let r = verify::homology_oracles();
    out.line("10", "H_*(∂Δ³) = (ℤ,0,ℤ) and H_*(RP²) = (ℤ,ℤ/2,0) from facets", &r, t);

    if out.unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} unexpected failure(s)", out.unexpected);
        ExitCode::FAILURE
    }
}
