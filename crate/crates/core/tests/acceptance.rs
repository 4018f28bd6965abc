//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line (run with --nocapture to see them on success).

use std::sync::OnceLock;

use facering::cli::{named_corpus, points, random_complex, rp2_6, simplex_boundary};
use facering::complex::{Face, SimplicialComplex};
use facering::criteria::{classify, cross_validate, spherical_check, CrossValReport};
use facering::face_ring::{hilbert_series, poly_add, poly_mul, poly_trim};
use facering::homology::reduced_cohomology_dims;
use facering::limits::{
    build_normalized_complex, canonical_functor, higher_limit_dims, CanonicalFunctor,
};
use facering::linalg::FieldSpec;
use facering::regularity::{
    ambient_quotient_dims, freeness_of, koszul_tor_dims, pd_check, quotient_algebra, socle_dims,
};

fn fields() -> [FieldSpec; 3] {
    [
        FieldSpec::prime(2).unwrap(),
        FieldSpec::prime(3).unwrap(),
        FieldSpec::Rational,
    ]
}

fn criterion(n: usize, desc: &str, pass: bool) {
    println!(
        "criterion {n} ({desc}): {}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} ({desc}) failed");
}

/// Named corpus plus 200 seeded random complexes on 3..=6 vertices.
fn big_corpus() -> &'static Vec<(String, SimplicialComplex)> {
    static CORPUS: OnceLock<Vec<(String, SimplicialComplex)>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut corpus = named_corpus();
        for seed in 0..200u64 {
            let m = 3 + (seed % 4) as usize;
            corpus.push((format!("random_s{seed}"), random_complex(m, 0.5, seed)));
        }
        corpus
    })
}

fn shared_report() -> &'static CrossValReport {
    static REPORT: OnceLock<CrossValReport> = OnceLock::new();
    REPORT.get_or_init(|| cross_validate(big_corpus(), &fields()))
}

#[test]
fn criterion_1_dimension_zero_base_case() {
    let mut pass = true;
    for m in 1..=6usize {
        let k = points(m);
        for f in fields() {
            let verdicts = classify(&k, f);
            let cm = &verdicts[0];
            pass &= cm.topological.holds && cm.algebraic.holds;
            let a = quotient_algebra(&k, f);
            let expected = if m == 1 { vec![1] } else { vec![1, m - 1] };
            pass &= a.dims == expected;
            let star = &verdicts[2];
            pass &= star.topological.holds == (m == 2);
            pass &= star.algebraic.holds == (m == 2);
        }
    }
    criterion(1, "dimension-0 base case", pass);
}

#[test]
fn criterion_2_sphere_boundaries() {
    let mut pass = true;
    for n in 2..=5usize {
        let k = simplex_boundary(n);
        // the n = 5 quotient is the heavy case; run the fields in parallel
        // and build each quotient exactly once
        let results: Vec<bool> = std::thread::scope(|scope| {
            let handles: Vec<_> = fields()
                .into_iter()
                .map(|f| {
                    let k = &k;
                    scope.spawn(move || {
                        let mut ok = spherical_check(k, f).holds;
                        let a = quotient_algebra(k, f);
                        ok &= freeness_of(k, &a).is_free;
                        ok &= socle_dims(k, &a).iter().sum::<usize>() == 1;
                        ok &= k.core_decomposition().is_reduced;
                        let top = n * (n + 1) / 2;
                        ok &= a.top_degree() == top;
                        ok &= a.dim(top) == 1;
                        for d in 0..=top {
                            ok &= a.dim(d) == a.dim(top - d);
                        }
                        ok
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        pass &= results.into_iter().all(|b| b);
    }
    criterion(2, "sphere boundaries Gorenstein* with symmetric quotient", pass);
}

#[test]
fn criterion_3_characteristic_separation() {
    let k = rp2_6();
    let f2 = FieldSpec::prime(2).unwrap();
    let mut pass = true;
    for f in fields() {
        let verdicts = classify(&k, f);
        let cm = &verdicts[0];
        pass &= cm.agree;
        let expect_cm = f != f2;
        pass &= cm.topological.holds == expect_cm;
        pass &= cm.algebraic.holds == expect_cm;
    }
    let tor = koszul_tor_dims(&k, f2, 9);
    pass &= tor.dims[1].iter().any(|&d| d != 0);
    criterion(3, "projective plane characteristic separation", pass);
}

#[test]
fn criterion_4_differential_test() {
    let report = shared_report();
    let route_clash = report
        .disagreements
        .iter()
        .any(|d| d.check == "cm_routes_agree" || d.check == "gorenstein_star_routes_agree");
    let impure_cm = report
        .disagreements
        .iter()
        .any(|d| d.check == "cm_implies_pure");
    criterion(
        4,
        "200 random + named corpus: routes agree, CM implies pure",
        !route_clash && !impure_cm && report.complexes == big_corpus().len(),
    );
}

#[test]
fn criterion_5_link_decomposition_identity() {
    let report = shared_report();
    let bad = report
        .disagreements
        .iter()
        .any(|d| d.check == "cm_link_decomposition");
    criterion(5, "CM iff proper links CM and low cohomology vanishes", !bad);
}

#[test]
fn criterion_6_spherical_and_reduced_identities() {
    let report = shared_report();
    let bad = report.disagreements.iter().any(|d| {
        d.check == "gorenstein_star_routes_agree"
            || d.check == "gorenstein_reduced_top_cohomology"
            || d.check == "vertex_deletion_cm"
    });
    criterion(6, "Gorenstein* iff spherical; reduced iff top cohomology 1", !bad);
}

#[test]
fn criterion_7_higher_limits() {
    let mut pass = true;
    for (name, k) in named_corpus() {
        for f in fields() {
            let h = reduced_cohomology_dims(&k, f);
            let unreduced = |i: usize| {
                if i == 0 {
                    h.dim(0) + usize::from(k.faces().len() > 1)
                } else {
                    h.dim(i as i64)
                }
            };
            // star functor, internal degrees 0..4
            let series = hilbert_series(&k).expand(4);
            for d in 0..=4usize {
                let phi = canonical_functor(&k, f, CanonicalFunctor::Star(d));
                let lim = higher_limit_dims(&build_normalized_complex(&k, &phi));
                let get = |i: usize| lim.get(i).copied().unwrap_or(0);
                if d > 0 {
                    pass &= get(0) as i64 == series[d];
                    for i in 1..lim.len() {
                        pass &= lim[i] == 0;
                    }
                } else {
                    for i in 0..lim.len().max(k.n() + 1) {
                        pass &= get(i) == unreduced(i);
                    }
                }
                if !pass {
                    panic!("limits identity failed on {name}, field {}, degree {d}", f.label());
                }
            }
            // triple identity for i >= 1
            let lim_c = higher_limit_dims(&build_normalized_complex(
                &k,
                &canonical_functor(&k, f, CanonicalFunctor::Constant(1)),
            ));
            let lim_a = higher_limit_dims(&build_normalized_complex(
                &k,
                &canonical_functor(&k, f, CanonicalFunctor::Atomic(1)),
            ));
            for i in 1..=k.n() {
                let want = h.dim(i as i64);
                pass &= lim_c.get(i).copied().unwrap_or(0) == want;
                pass &= lim_a.get(i + 1).copied().unwrap_or(0) == want;
            }
        }
    }
    criterion(7, "derived-limit identities for star/constant/atomic functors", pass);
}

#[test]
fn criterion_8_exact_sequence_hilbert_identity() {
    let mut pass = true;
    for (_, k) in named_corpus() {
        let n = k.n();
        let lift = |h: &facering::face_ring::HilbertSeries, shift: usize| {
            let mut p = h.numerator.clone();
            for _ in h.denom_pow..n {
                p = poly_mul(&p, &[1, -1]);
            }
            let mut shifted = vec![0i64; shift];
            shifted.extend(p);
            poly_trim(shifted)
        };
        for i in k.used_vertices() {
            let ki = k.full_subcomplex(&[i]).unwrap();
            let st = k.star(&Face::new([i]).unwrap()).unwrap();
            let lhs = lift(&hilbert_series(&k), 0);
            let rhs = poly_trim(poly_add(
                &lift(&hilbert_series(&ki), 0),
                &lift(&hilbert_series(&st), 1),
            ));
            pass &= lhs == rhs;
        }
    }
    criterion(8, "vertex deletion/star short-exact Hilbert identity", pass);
}

#[test]
fn criterion_9_multiplication_isomorphism_shadow() {
    let mut pass = true;
    for (name, k) in named_corpus() {
        for f in fields() {
            let verdicts = classify(&k, f);
            if !(verdicts[2].topological.holds && verdicts[2].algebraic.holds) {
                continue;
            }
            let a = quotient_algebra(&k, f);
            for i in k.used_vertices() {
                let st = k.star(&Face::new([i]).unwrap()).unwrap();
                let amb = ambient_quotient_dims(&k, &st, f);
                for d in 1..=(a.top_degree() + 1) {
                    let rank = a.multiplication_on_quotient(i, d - 1).rank();
                    let want = amb.get(d - 1).copied().unwrap_or(0);
                    if rank != want {
                        eprintln!("mismatch on {name}, vertex {i}, degree {d}");
                        pass = false;
                    }
                }
            }
        }
    }
    criterion(9, "image of vertex multiplication matches ambient star quotient", pass);
}

#[test]
fn criterion_10_socle_pd_equivalence() {
    let mut pass = true;
    for (name, k) in big_corpus().iter().take(60) {
        for f in fields() {
            let a = quotient_algebra(k, f);
            let socle_total: usize = socle_dims(k, &a).iter().sum();
            if pd_check(&a).0 != (socle_total == 1) {
                eprintln!("socle/PD mismatch on {name} over {}", f.label());
                pass = false;
            }
        }
    }
    criterion(10, "Poincaré duality iff one-dimensional socle", pass);
}
