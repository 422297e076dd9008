//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use msdiag::cli::execute_command;
use msdiag::compression::{
    handleslide, homological_standardness, standard_double_diagram, validate_cut_system, Sign,
};
use msdiag::curve_map::surger_all;
use msdiag::linalg::{groups_isomorphic, smith_normal_form, AbelianGroup, IntMatrix};
use msdiag::multisection::{
    euler_characteristic_of_x, first_homology_of_x, validate_diagram, xn_diagram, DiagramFailure,
};
use msdiag::surface::{pairing_matrix, quotient_homology, BasisElement};
use msdiag::{
    build_xn, parse_diagram_file, reconstruct_surface, serialize_diagram, ChainComplex, CurveClass,
    CutSystem, MultisectionDiagram, Surface, SurfaceCollection,
};
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<(), String>;
type Criterion = fn() -> Check;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const PAGES: [&str; 6] = ["empty", "1:1", "0:3", "0:1", "2:0,1:2", "0:1,0:1"];

fn within(limit: Duration, f: impl FnOnce() -> Check) -> Check {
    let t = Instant::now();
    f()?;
    let took = t.elapsed();
    ensure!(took < limit, "took {took:?}, limit {limit:?}");
    Ok(())
}

fn xn_homology() -> Check {
    within(Duration::from_secs(1), || {
        let mut h2s = Vec::new();
        for n in 0..=8u64 {
            let h = build_xn(n).homology().map_err(|e| e.to_string())?;
            ensure!(h[0] == AbelianGroup::free(1), "H0(X_{n}) = {}", h[0]);
            let want = AbelianGroup::cyclic(n);
            ensure!(h[2] == want, "H2(X_{n}) = {}, expected {want}", h[2]);
            h2s.push(h[2].clone());
        }
        for a in 2..=8 {
            for b in a + 1..=8 {
                ensure!(
                    !groups_isomorphic(&h2s[a], &h2s[b]),
                    "H2(X_{a}) ~ H2(X_{b})"
                );
            }
        }
        Ok(())
    })
}

fn genus_ladder() -> Check {
    within(Duration::from_secs(1), || {
        for page_text in PAGES {
            let page: SurfaceCollection = page_text.parse().map_err(|e| format!("{e}"))?;
            for k in 0..=2u32 {
                for s in 0..=1u32 {
                    let dd = standard_double_diagram(&page, k, s).map_err(|e| e.to_string())?;
                    let genus = page.total_genus() + u64::from(k + s);
                    ensure!(
                        u64::from(dd.surface.genus) == genus,
                        "{page_text} k={k} s={s}: genus {}",
                        dd.surface.genus
                    );
                    // the empty page closes up into one sphere
                    let c = page.len().max(1);
                    let curves = c + k as usize - 1 + s as usize;
                    for cs in [&dd.alpha, &dd.beta] {
                        ensure!(
                            cs.curve_count() == curves,
                            "{page_text} k={k} s={s}: {} curves",
                            cs.curve_count()
                        );
                        let v = validate_cut_system(cs, &page).map_err(|e| e.to_string())?;
                        ensure!(v.is_valid(), "{page_text} k={k} s={s}: {v}");
                    }
                    let r = homological_standardness(dd.surface, &dd.alpha, &dd.beta, &page)
                        .map_err(|e| e.to_string())?;
                    ensure!(r.passed, "{page_text} k={k} s={s}: {:?}", r.failures);
                    ensure!(
                        r.detected_stabilizations == Some(u64::from(s)),
                        "{page_text} k={k} s={s}: s={:?}",
                        r.detected_stabilizations
                    );
                    ensure!(
                        r.derived_k == Some(u64::from(k)),
                        "{page_text} k={k} s={s}: k={:?}",
                        r.derived_k
                    );
                }
            }
        }
        Ok(())
    })
}

fn sphere_page_rejection() -> Check {
    let (d, page) = xn_diagram();
    ensure!(
        page == SurfaceCollection::single(Surface::SPHERE),
        "xn page is {page}"
    );
    let r = validate_diagram(&d);
    ensure!(!r.passed, "xn diagram passed");
    ensure!(
        r.failures.contains(&DiagramFailure::SphereInPage),
        "failures {:?}",
        r.failures
    );
    let fixed = d
        .with_page(SurfaceCollection::empty())
        .map_err(|e| e.to_string())?;
    let r = validate_diagram(&fixed);
    ensure!(r.passed, "S1xS3 diagram failed: {:?}", r.failures);
    ensure!(
        r.euler_characteristic == Some(0),
        "chi {:?}",
        r.euler_characteristic
    );
    ensure!(r.h1 == Some(AbelianGroup::free(1)), "H1 {:?}", r.h1);
    Ok(())
}

fn sanity_oracles() -> Check {
    let torus = Surface::TORUS;
    let class = |e| CurveClass::basis(torus, e).unwrap();
    let sys = |e| CutSystem::nonseparating(torus, vec![class(e)]).unwrap();
    let (a, b) = (BasisElement::A(1), BasisElement::B(1));
    let empty = SurfaceCollection::empty();
    let trivial = MultisectionDiagram::with_identity_suture(
        Surface::SPHERE,
        vec![CutSystem::empty(Surface::SPHERE); 3],
        empty.clone(),
    )
    .map_err(|e| e.to_string())?;
    let aba = MultisectionDiagram::with_identity_suture(
        torus,
        vec![sys(a), sys(b), sys(a)],
        empty.clone(),
    )
    .map_err(|e| e.to_string())?;
    let aaa = MultisectionDiagram::with_identity_suture(torus, vec![sys(a), sys(a), sys(a)], empty)
        .map_err(|e| e.to_string())?;
    for (name, d, chi, h1) in [
        ("genus-0 S4", &trivial, 2, AbelianGroup::trivial()),
        ("genus-1 S4", &aba, 2, AbelianGroup::trivial()),
        ("S1xS3", &aaa, 0, AbelianGroup::free(1)),
    ] {
        let got = euler_characteristic_of_x(d).map_err(|e| e.to_string())?;
        ensure!(got == chi, "{name}: chi {got}, expected {chi}");
        let got = first_homology_of_x(d).map_err(|e| e.to_string())?;
        ensure!(got == h1, "{name}: H1 {got}, expected {h1}");
    }
    Ok(())
}

fn property_suites() -> Check {
    within(Duration::from_secs(10), || {
        let mut rng = StdRng::seed_from_u64(20240611);

        // (i) Smith normal form contract
        for i in 0..500 {
            let (r, c) = (rng.random_range(1..=8), rng.random_range(1..=8));
            let v: Vec<i64> = (0..r * c).map(|_| rng.random_range(-50..=50)).collect();
            let m = IntMatrix::from_i64(r, c, &v).unwrap();
            let f = smith_normal_form(&m);
            ensure!(
                f.u.mul(&m).unwrap().mul(&f.v).unwrap() == f.s,
                "matrix {i}: U M V != S"
            );
            ensure!(
                is_unimodular_oracle(&f.u) && is_unimodular_oracle(&f.v),
                "matrix {i}: not unimodular"
            );
            ensure!(f.s.is_diagonal(), "matrix {i}: S not diagonal");
            let d = f.s.diagonal();
            ensure!(
                d.iter().all(|x| !x.is_negative()),
                "matrix {i}: negative diagonal"
            );
            for w in d.windows(2) {
                let ok = if w[0].is_zero() {
                    w[1].is_zero()
                } else {
                    (&w[1] % &w[0]).is_zero()
                };
                ensure!(ok, "matrix {i}: divisibility fails at {} {}", w[0], w[1]);
            }
        }

        // (ii) surgery Euler identity
        for i in 0..300 {
            let t = random_trace(&mut rng, 5, 7);
            let whole = reconstruct_surface(&t).map_err(|e| e.to_string())?;
            let cut = surger_all(&t).map_err(|e| e.to_string())?;
            let m = t.curve_count() as i64;
            ensure!(
                cut.euler_characteristic() == whole.euler_characteristic() + 2 * m,
                "trace {i}: chi {} vs {} + 2*{m}",
                cut.euler_characteristic(),
                whole.euler_characteristic()
            );
        }

        // (iii) handleslide invariance
        for page_text in PAGES {
            let page: SurfaceCollection = page_text.parse().unwrap();
            let dd = standard_double_diagram(&page, 2, 1).map_err(|e| e.to_string())?;
            let d = MultisectionDiagram::with_identity_suture(
                dd.surface,
                vec![dd.alpha.clone(), dd.beta.clone(), dd.alpha.clone()],
                page.clone(),
            )
            .map_err(|e| e.to_string())?;
            let chi = euler_characteristic_of_x(&d).map_err(|e| e.to_string())?;
            let mut alpha = dd.alpha.classes().to_vec();
            let beta = dd.beta.classes().to_vec();
            let q0 = quotient_homology(dd.surface, &alpha).unwrap();
            let snf0 =
                smith_normal_form(&pairing_matrix(&alpha, &beta).unwrap()).invariant_factors();
            let mut slid = d.clone();
            for _ in 0..8 {
                let n = alpha.len();
                let j = rng.random_range(0..n);
                let l = (j + rng.random_range(1..n)) % n;
                let sign = if rng.random_bool(0.5) {
                    Sign::Plus
                } else {
                    Sign::Minus
                };
                alpha = handleslide(&alpha, j, l, sign).unwrap();
                slid = slid
                    .slide(rng.random_range(0..3), j, l, sign)
                    .map_err(|e| e.to_string())?;
            }
            ensure!(
                quotient_homology(dd.surface, &alpha).unwrap() == q0,
                "{page_text}: quotient homology moved"
            );
            let snf1 =
                smith_normal_form(&pairing_matrix(&alpha, &beta).unwrap()).invariant_factors();
            ensure!(snf1 == snf0, "{page_text}: pairing SNF moved");
            let chi1 = euler_characteristic_of_x(&slid).map_err(|e| e.to_string())?;
            ensure!(chi1 == chi, "{page_text}: chi {chi1} vs {chi}");
        }

        // (iv) homology engine on small CW complexes
        let m = |r: usize, c: usize, v: &[i64]| IntMatrix::from_i64(r, c, v).unwrap();
        let z = AbelianGroup::free(1);
        let zero = AbelianGroup::trivial();
        let cases: Vec<(&str, ChainComplex, Vec<AbelianGroup>)> = vec![
            (
                "torus",
                ChainComplex::new(vec![1, 2, 1], vec![m(1, 2, &[0, 0]), m(2, 1, &[0, 0])]).unwrap(),
                vec![z.clone(), AbelianGroup::free(2), z.clone()],
            ),
            (
                "sphere",
                ChainComplex::new(vec![1, 0, 1], vec![m(1, 0, &[]), m(0, 1, &[])]).unwrap(),
                vec![z.clone(), zero.clone(), z.clone()],
            ),
            (
                "projective plane",
                ChainComplex::new(vec![1, 1, 1], vec![m(1, 1, &[0]), m(1, 1, &[2])]).unwrap(),
                vec![z.clone(), AbelianGroup::cyclic(2), zero.clone()],
            ),
            (
                "Klein bottle",
                ChainComplex::new(vec![1, 2, 1], vec![m(1, 2, &[0, 0]), m(2, 1, &[0, 2])]).unwrap(),
                vec![
                    z.clone(),
                    AbelianGroup::from_cyclic_orders(1, &[2]),
                    zero.clone(),
                ],
            ),
            (
                "S1 x S2",
                ChainComplex::new(
                    vec![1, 1, 1, 1],
                    vec![m(1, 1, &[0]), m(1, 1, &[0]), m(1, 1, &[0])],
                )
                .unwrap(),
                vec![z.clone(); 4],
            ),
        ];
        for (name, c, want) in cases {
            let got = c.homology().map_err(|e| e.to_string())?;
            ensure!(got == want, "{name}: {got:?}");
        }
        let kb =
            ChainComplex::new(vec![1, 2, 1], vec![m(1, 2, &[0, 0]), m(2, 1, &[0, 2])]).unwrap();
        ensure!(
            kb.homology().unwrap()[1].to_string() == "Z + Z/2",
            "Klein bottle H1 text"
        );
        Ok(())
    })
}

fn cli_round_trip() -> Check {
    let dir = tempfile::TempDir::new().map_err(|e| e.to_string())?;
    let path = dir.path().join("d.txt");
    let p = path.to_str().unwrap();
    for page_text in PAGES {
        for k in 0..=2 {
            for s in 0..=1 {
                let (k, s) = (k.to_string(), s.to_string());
                let (code, text) = execute_command([
                    "generate-standard",
                    "--page",
                    page_text,
                    "--k",
                    &k,
                    "--stab",
                    &s,
                ]);
                ensure!(code == 0, "generate {page_text} {k} {s}: {text}");
                let d = parse_diagram_file(&text).map_err(|e| e.to_string())?;
                ensure!(
                    serialize_diagram(&d) == text,
                    "{page_text} {k} {s}: serialization not stable"
                );
                fs::write(&path, &text).map_err(|e| e.to_string())?;
                let first = execute_command(["validate", p]);
                ensure!(first.0 == 0, "validate {page_text} {k} {s}: {}", first.1);
                ensure!(
                    execute_command(["validate", p]) == first,
                    "validate not deterministic"
                );
            }
        }
    }
    let (code, _) = execute_command([
        "generate-standard",
        "--page",
        "empty",
        "--k",
        "1",
        "--stab",
        "0",
    ]);
    ensure!(code == 0, "generate-standard empty k=1");

    let corpus: Vec<String> = PAGES
        .iter()
        .map(|page_text| {
            execute_command([
                "generate-multisection",
                "--page",
                page_text,
                "--k",
                "1",
                "--sectors",
                "3",
            ])
            .1
        })
        .collect();
    let mut rng = StdRng::seed_from_u64(7);
    for i in 0..1500 {
        let text = mutate(&mut rng, &corpus[i % corpus.len()]);
        let outcome = catch_unwind(AssertUnwindSafe(|| match parse_diagram_file(&text) {
            Ok(d) => {
                let _ = validate_diagram(&d);
                None
            }
            Err(e) => Some(e),
        }));
        match outcome {
            Err(_) => return Err(format!("mutant {i} crashed the parser:\n{text}")),
            Ok(Some(e)) => ensure!(
                e.line >= 1 && !e.message.is_empty(),
                "mutant {i}: unstructured error {e:?}"
            ),
            Ok(None) => {}
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 6] = [
        ("X_n homology", xn_homology),
        ("genus ladder", genus_ladder),
        ("sphere-page rejection", sphere_page_rejection),
        ("sanity oracles", sanity_oracles),
        ("property suites", property_suites),
        ("CLI round-trip and determinism", cli_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = catch_unwind(check).unwrap_or_else(|_| Err("panicked".to_string()));
        let ms = t.elapsed().as_millis();
        match result {
            Ok(()) => println!("criterion {}: PASS {name} ({ms} ms)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({ms} ms): {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
