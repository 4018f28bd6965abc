//! The decision layer: link-cohomology criteria (the topological route),
//! quotient-algebra verdicts (the algebraic route), and cross-validation.
//!
//! The two routes are proved equivalent for Cohen-Macaulay and Gorenstein*;
//! a disagreement there is an implementation bug and is reported as a hard
//! failure by the callers. The plain-Gorenstein topological route (the
//! core is spherical) is an empirically validated companion; a mismatch
//! there is surfaced as a finding, never silenced.

use std::fmt;

use crate::complex::SimplicialComplex;
use crate::homology::reduced_cohomology_dims;
use crate::linalg::FieldSpec;
use crate::regularity::{freeness_of, quotient_algebra, socle_dims};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Property {
    CohenMacaulay,
    Gorenstein,
    GorensteinStar,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::CohenMacaulay => write!(f, "cohen_macaulay"),
            Property::Gorenstein => write!(f, "gorenstein"),
            Property::GorensteinStar => write!(f, "gorenstein_star"),
        }
    }
}

/// One route's answer; the witness names the first failure in canonical
/// order when the route rejects.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RouteOutcome {
    pub holds: bool,
    pub witness: Option<String>,
}

impl RouteOutcome {
    fn pass() -> Self {
        RouteOutcome {
            holds: true,
            witness: None,
        }
    }

    fn fail(witness: String) -> Self {
        RouteOutcome {
            holds: false,
            witness: Some(witness),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict {
    pub property: Property,
    pub field: FieldSpec,
    pub topological: RouteOutcome,
    pub algebraic: RouteOutcome,
    pub agree: bool,
}

/// Reisner's criterion: for every σ ∈ K (including ∅), the link has
/// vanishing reduced cohomology below its own dimension.
pub fn reisner_check(k: &SimplicialComplex, field: FieldSpec) -> RouteOutcome {
    for sigma in k.faces() {
        let link = k.link(sigma).unwrap();
        let dims = reduced_cohomology_dims(&link, field);
        let top = link.dim();
        for i in -1..top {
            if dims.dim(i) != 0 {
                return RouteOutcome::fail(format!(
                    "link of {sigma} has nonzero reduced H^{i} below its dimension {top}"
                ));
            }
        }
    }
    RouteOutcome::pass()
}

/// Stanley's criterion: K is 𝔽-spherical, i.e. every link has reduced
/// cohomology of dimension 1 in its top degree and 0 below. The link {∅}
/// satisfies this through H̃^{−1}({∅}) = 𝔽.
pub fn spherical_check(k: &SimplicialComplex, field: FieldSpec) -> RouteOutcome {
    for sigma in k.faces() {
        let link = k.link(sigma).unwrap();
        let dims = reduced_cohomology_dims(&link, field);
        let top = link.dim();
        for i in -1..top {
            if dims.dim(i) != 0 {
                return RouteOutcome::fail(format!(
                    "link of {sigma} has nonzero reduced H^{i} below its dimension {top}"
                ));
            }
        }
        if dims.dim(top) != 1 {
            return RouteOutcome::fail(format!(
                "link of {sigma} has reduced H^{top} of dimension {}, want 1",
                dims.dim(top)
            ));
        }
    }
    RouteOutcome::pass()
}

/// All three verdicts over one field; the quotient algebra is computed once.
pub fn classify(k: &SimplicialComplex, field: FieldSpec) -> Vec<Verdict> {
    let a = quotient_algebra(k, field);
    let freeness = freeness_of(k, &a);
    let algebraic_cm = if freeness.is_free {
        RouteOutcome::pass()
    } else {
        RouteOutcome::fail(format!(
            "quotient dimension exceeds the free prediction at degree {}",
            freeness.witness_degree.unwrap()
        ))
    };
    let socle: usize = socle_dims(k, &a).iter().sum();
    let socle_one = if !freeness.is_free {
        algebraic_cm.clone()
    } else if socle == 1 {
        RouteOutcome::pass()
    } else {
        RouteOutcome::fail(format!("socle dimension {socle}, want 1"))
    };
    let core = k.core_decomposition();

    let cm = Verdict {
        property: Property::CohenMacaulay,
        field,
        topological: reisner_check(k, field),
        algebraic: algebraic_cm,
        agree: false,
    };
    let gorenstein = Verdict {
        property: Property::Gorenstein,
        field,
        topological: spherical_check(&core.core, field),
        algebraic: socle_one.clone(),
        agree: false,
    };
    let star_alg = if socle_one.holds && !core.is_reduced {
        RouteOutcome::fail(format!(
            "not reduced: cone points {:?}",
            core.apex
        ))
    } else {
        socle_one
    };
    let star = Verdict {
        property: Property::GorensteinStar,
        field,
        topological: spherical_check(k, field),
        algebraic: star_alg,
        agree: false,
    };
    [cm, gorenstein, star]
        .into_iter()
        .map(|mut v| {
            v.agree = v.topological.holds == v.algebraic.holds;
            v
        })
        .collect()
}

/// A cross-validation failure payload: enough to reproduce the case.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Disagreement {
    pub complex_name: String,
    pub facets: Vec<Vec<usize>>,
    pub m: usize,
    pub field: String,
    pub check: String,
    pub details: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CrossValReport {
    pub complexes: usize,
    pub checks: usize,
    pub disagreements: Vec<Disagreement>,
    /// non-fatal observations (the plain-Gorenstein companion route)
    pub findings: Vec<String>,
}

impl CrossValReport {
    pub fn ok(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Runs every theorem-derived assertion on every (complex, field) pair and
/// collects violations. An empty disagreement list is the expected state.
pub fn cross_validate(
    corpus: &[(String, SimplicialComplex)],
    fields: &[FieldSpec],
) -> CrossValReport {
    let mut report = CrossValReport {
        complexes: corpus.len(),
        ..Default::default()
    };
    for (name, k) in corpus {
        let facets: Vec<Vec<usize>> = k
            .facets()
            .iter()
            .map(|f| f.vertices().to_vec())
            .collect();
        let fail = |field: &FieldSpec, check: &str, details: String| Disagreement {
            complex_name: name.clone(),
            facets: facets.clone(),
            m: k.m(),
            field: field.label(),
            check: check.to_string(),
            details,
        };
        for field in fields {
            let verdicts = classify(k, *field);
            report.checks += 1;
            let cm = &verdicts[0];
            let gor = &verdicts[1];
            let star = &verdicts[2];
            if !cm.agree {
                report.disagreements.push(fail(
                    field,
                    "cm_routes_agree",
                    format!(
                        "topological {} vs algebraic {}",
                        cm.topological.holds, cm.algebraic.holds
                    ),
                ));
            }
            if !star.agree {
                report.disagreements.push(fail(
                    field,
                    "gorenstein_star_routes_agree",
                    format!(
                        "topological {} vs algebraic {}",
                        star.topological.holds, star.algebraic.holds
                    ),
                ));
            }
            if !gor.agree {
                report.findings.push(format!(
                    "{name} over {}: gorenstein companion route disagrees \
                     (core-spherical {} vs algebraic {})",
                    field.label(),
                    gor.topological.holds,
                    gor.algebraic.holds
                ));
            }
            // CM implies pure
            if cm.algebraic.holds && !k.profile().is_pure {
                report
                    .disagreements
                    .push(fail(field, "cm_implies_pure", "CM but not pure".to_string()));
            }
            // CM(K) iff all proper links CM and H̃^r(K)=0 for r < n−1
            let n = k.n() as i64;
            let dims_k = reduced_cohomology_dims(k, *field);
            let low_vanish = (-1..n - 1).all(|r| dims_k.dim(r) == 0);
            let proper_links_cm = k
                .faces()
                .iter()
                .filter(|s| !s.is_empty())
                .all(|s| reisner_check(&k.link(s).unwrap(), *field).holds);
            if cm.topological.holds != (proper_links_cm && low_vanish) {
                report.disagreements.push(fail(
                    field,
                    "cm_link_decomposition",
                    format!(
                        "CM {} vs (links CM {} and low vanishing {})",
                        cm.topological.holds, proper_links_cm, low_vanish
                    ),
                ));
            }
            // Gorenstein: reduced iff top cohomology is 1-dimensional
            if gor.algebraic.holds {
                let top = dims_k.dim(n - 1);
                let reduced = k.core_decomposition().is_reduced;
                let expected = if reduced { 1 } else { 0 };
                if top != expected {
                    report.disagreements.push(fail(
                        field,
                        "gorenstein_reduced_top_cohomology",
                        format!("reduced {reduced} but dim H^(n-1) = {top}"),
                    ));
                }
            }
            // spherical K: every vertex deletion K_i is CM with vanishing
            // top cohomology
            if star.topological.holds {
                for i in k.used_vertices() {
                    let ki = k.full_subcomplex(&[i]).unwrap();
                    let ki_cm = reisner_check(&ki, *field).holds;
                    let ki_top = reduced_cohomology_dims(&ki, *field).dim(n - 1);
                    if !ki_cm || ki_top != 0 {
                        report.disagreements.push(fail(
                            field,
                            "vertex_deletion_cm",
                            format!("K_{i}: CM {ki_cm}, dim H^(n-1) = {ki_top}"),
                        ));
                    }
                }
            }
        }
    }
    report
}
