use forest_spectra::bijections::Check;
use forest_spectra::forest::check_theorem_range;
use forest_spectra::graph::GraphKind;
use forest_spectra::lefschetz::{range_status, truncated_graphic_polynomial};
use forest_spectra::spectra::{certify_spectrum, SignPrediction};
use forest_spectra::{
    bijection_forestbij, build_families, check_degree_one_lefschetz, closed_form_spectrum, edge_pair_counts,
    enumerate_forests, exact_determinant, graphic_matroid, pq_decomposition, predicted_signs, sign_profile,
    slp_check, structured_params, tilde_hessian, truncate, verify_count_inequalities, verify_exchange_axiom,
    BijectionRecord, Error, ForestFamilies, Graph, PairCounts, StructuredParams,
};
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Map, Value};

use crate::output::{big, matrix, rational, Report};

/// Failures listed per bijection before the list is cut short.
const FAILURE_LIMIT: usize = 20;

fn graph_input(g: &Graph) -> Value {
    match g.kind() {
        GraphKind::Complete { n } => json!({ "graph": g.to_string(), "kind": "complete", "n": n }),
        GraphKind::CompleteBipartite { m, n } => {
            json!({ "graph": g.to_string(), "kind": "bipartite", "m": m, "n": n })
        }
    }
}

fn with(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut base, extra) {
        a.extend(b);
    }
    base
}

fn params_json(p: &StructuredParams) -> Value {
    match p {
        StructuredParams::Complete { alpha, beta, gamma, .. } => {
            json!({ "alpha": rational(alpha), "beta": rational(beta), "gamma": rational(gamma) })
        }
        StructuredParams::Bipartite { alpha, beta, gamma, delta, .. } => json!({
            "alpha": rational(alpha), "beta": rational(beta),
            "gamma": rational(gamma), "delta": rational(delta),
        }),
    }
}

fn prediction_json(p: &SignPrediction) -> Value {
    match p {
        SignPrediction::Complete { middle, last, via_decomposition } => json!({
            "middle": big(middle),
            "last": big(last),
            "via_decomposition": via_decomposition.as_ref().map(|(a, b)| json!([big(a), big(b)])),
            "all_negative": p.all_negative(),
        }),
        SignPrediction::Bipartite { p_minus_r, q_minus_r, r_minus_p_minus_q, second, third, identities_hold } => json!({
            "p_minus_r": big(p_minus_r),
            "q_minus_r": big(q_minus_r),
            "r_minus_p_minus_q": big(r_minus_p_minus_q),
            "second": big(second),
            "third": big(third),
            "identities_hold": identities_hold,
            "all_negative": p.all_negative(),
        }),
    }
}

fn counts_json(c: &PairCounts) -> Value {
    match c {
        PairCounts::Complete { p, q } => json!({ "p": big(p), "q": big(q) }),
        PairCounts::Bipartite { p, q, r } => json!({ "p": big(p), "q": big(q), "r": big(r) }),
    }
}

pub fn spectrum(g: &Graph, k: usize, show_matrix: bool) -> Result<Report, Error> {
    let v = g.vertex_count();
    if k == 0 || k > v {
        return Err(Error::InvalidInput(format!(
            "{g} has spanning forests with 1..={v} components, so k = {k} is out of range"
        )));
    }
    let h = tilde_hessian(g, k)?;
    let params = structured_params(&h, g)?;
    let spectrum = closed_form_spectrum(&params)?;
    let cert = certify_spectrum(&h, &spectrum)?;
    let profile = sign_profile(&spectrum);
    let spectral_det = spectrum.determinant();
    let direct_det = exact_determinant(&h)?;
    let range = check_theorem_range(g, k);

    let mut result = Map::new();
    result.insert(
        "eigenvalues".into(),
        Value::Array(
            spectrum
                .pairs()
                .iter()
                .map(|(val, mult)| json!({ "value": rational(val), "multiplicity": mult }))
                .collect(),
        ),
    );
    result.insert("spectrum".into(), Value::String(spectrum.to_string()));
    result.insert("parameters".into(), params_json(&params));
    result.insert(
        "signs".into(),
        json!({ "positive": profile.positive, "zero": profile.zero, "negative": profile.negative }),
    );
    result.insert("determinant".into(), rational(&direct_det));
    result.insert("spectral_determinant".into(), rational(&spectral_det));
    if show_matrix {
        result.insert("matrix".into(), matrix(&h));
    }

    let certified = cert.is_certified() && spectral_det == direct_det;
    let mut verdict = json!({
        "spectrum_certified": certified,
        "symmetric": cert.symmetric,
        "annihilated": cert.annihilated,
        "moments_checked": cert.moments.len(),
        "routes_agree": true,
    });
    let mut passed = certified;
    match range {
        Ok(()) => {
            let counts = edge_pair_counts(g, k)?;
            let decomposition = match g.kind() {
                GraphKind::Complete { n } => Some(pq_decomposition(n, k)?),
                GraphKind::CompleteBipartite { .. } => None,
            };
            let prediction = predicted_signs(g, k, &counts, decomposition.as_ref())?;
            let edges = g.edge_count();
            let profile_ok = profile.positive == 1 && profile.zero == 0 && profile.negative == edges - 1;
            let sign_ok = if edges % 2 == 0 { direct_det.is_negative() } else { direct_det.is_positive() };
            let decomposition_ok = decomposition.as_ref().is_none_or(|d| d.matches(&counts));
            let holds = profile_ok && sign_ok && prediction.all_negative() && decomposition_ok;
            result.insert("pair_counts".into(), counts_json(&counts));
            if let Some(d) = &decomposition {
                result.insert("decomposition".into(), json!({ "t": big(&d.t), "f": big(&d.f) }));
            }
            result.insert("predicted".into(), prediction_json(&prediction));
            verdict = with(
                verdict,
                json!({
                    "in_theorem_range": true,
                    "sign_pattern_holds": profile_ok,
                    "determinant_sign_holds": sign_ok,
                    "theorem_holds": holds,
                }),
            );
            passed &= holds;
        }
        Err(e) => {
            verdict = with(
                verdict,
                json!({
                    "in_theorem_range": false,
                    "note": format!("outside theorem range ({e}); parameters read from the computed matrix"),
                }),
            );
        }
    }

    Ok(Report {
        command: "spectrum",
        input: with(graph_input(g), json!({ "k": k, "matrix": show_matrix })),
        result: Value::Object(result),
        verdict,
        passed,
    })
}

fn record_json(rec: &BijectionRecord) -> Value {
    json!({
        "name": rec.name,
        "domain_size": rec.domain_size,
        "codomain_size": rec.codomain_size,
        "verified": rec.is_verified(),
        "failure_count": rec.failures.len(),
        "failures": rec.failures.iter().take(FAILURE_LIMIT).map(|f| json!({
            "stage": format!("{:?}", f.stage),
            "forest": f.forest,
            "detail": f.detail,
        })).collect::<Vec<_>>(),
    })
}

fn check_json(c: &Check) -> Value {
    json!({ "name": c.name, "passed": c.passed, "detail": c.detail })
}

fn family_sizes(fam: &ForestFamilies<'_>) -> Value {
    match fam {
        ForestFamilies::Complete(c) => json!({ "P": c.p.len(), "R": c.r.len() }),
        ForestFamilies::Bipartite(b) => {
            let sizes = |parts: &[Vec<_>]| parts.iter().map(Vec::len).collect::<Vec<_>>();
            json!({
                "P": b.p.len(), "Q": b.q.len(), "R": b.r.len(),
                "Z": b.z.len(), "Z'": b.z_prime.len(),
                "P'": b.p_prime.len(), "Q'": b.q_prime.len(),
                "R'": b.r_prime.len(), "R''": b.r_double_prime.len(),
                "P_i": sizes(&b.p_parts), "Q_i": sizes(&b.q_parts),
                "R_i": sizes(&b.r_parts), "R'_i": sizes(&b.r_prime_parts),
            })
        }
    }
}

pub fn bijections(g: &Graph, k: usize, w: Option<usize>) -> Result<Report, Error> {
    let fam = build_families(g, k)?;
    let records = match (g.kind(), w) {
        (GraphKind::Complete { n }, Some(size)) => {
            if !(4..=n).contains(&size) {
                return Err(Error::InvalidInput(format!(
                    "W = {{1..{size}}} must contain the anchors 1, 2, 3, 4 and fit in {g} (4 <= SIZE <= {n})"
                )));
            }
            let labels: Vec<u32> = (1..=size as u32).collect();
            vec![bijection_forestbij(&labels)?]
        }
        (GraphKind::CompleteBipartite { .. }, Some(_)) => {
            return Err(Error::InvalidInput("--w applies to complete graphs only".into()));
        }
        (_, None) => fam.records(),
    };
    let checks = fam.verify()?;

    let mut result = json!({
        "families": family_sizes(&fam),
        "checks": checks.iter().map(check_json).collect::<Vec<_>>(),
        "bijections": records.iter().map(record_json).collect::<Vec<_>>(),
    });
    let checks_ok = checks.iter().all(|c| c.passed);
    let records_ok = records.iter().all(BijectionRecord::is_verified);
    let mut verdict = json!({ "checks_passed": checks_ok, "bijections_verified": records_ok });
    let mut passed = checks_ok && records_ok;

    if let ForestFamilies::Bipartite(_) = &fam {
        let ineq = verify_count_inequalities(&fam)?;
        result = with(
            result,
            json!({ "inequalities": {
                "p": big(&ineq.p), "q": big(&ineq.q), "r": big(&ineq.r),
                "r_minus_p": big(&ineq.r_minus_p),
                "r_minus_q": big(&ineq.r_minus_q),
                "p_plus_q_minus_r": big(&ineq.p_plus_q_minus_r),
                "p_lt_r": ineq.p_lt_r(), "q_lt_r": ineq.q_lt_r(), "r_lt_p_plus_q": ineq.r_lt_p_plus_q(),
                "strict_p_expected": ineq.strict_p_expected,
                "strict_q_expected": ineq.strict_q_expected,
                "boundary": ineq.is_boundary(),
                "identities_hold": ineq.identities_hold,
            }}),
        );
        verdict = with(verdict, json!({ "inequalities_hold": ineq.holds() }));
        passed &= ineq.holds();
    }
    if check_theorem_range(g, k).is_err() {
        verdict = with(verdict, json!({ "note": "k is outside the theorem range; families are still checked" }));
    }

    Ok(Report {
        command: "bijections",
        input: with(graph_input(g), json!({ "k": k, "w": w })),
        result,
        verdict,
        passed,
    })
}

fn parse_point(raw: &[String], expected: usize) -> Result<Vec<BigRational>, Error> {
    if raw.len() != expected {
        return Err(Error::InvalidInput(format!(
            "--point needs one coefficient per edge: expected {expected}, got {}",
            raw.len()
        )));
    }
    raw.iter()
        .map(|s| {
            s.trim()
                .parse::<BigRational>()
                .map_err(|_| Error::InvalidInput(format!("cannot read {s:?} as a rational number")))
        })
        .collect()
}

pub fn slp(g: &Graph, r: usize, point: Option<&[String]>) -> Result<Report, Error> {
    let v = g.vertex_count();
    if r == 0 || r >= v {
        return Err(Error::InvalidInput(format!(
            "the graphic matroid of {g} has rank {}, so the truncation rank must satisfy 1 <= r <= {}",
            v - 1,
            v - 1
        )));
    }
    let phi = truncated_graphic_polynomial(g, r)?;
    let coeffs = match point {
        Some(raw) => parse_point(raw, phi.nvars())?,
        None => vec![BigRational::one(); phi.nvars()],
    };
    let all_ones = coeffs.iter().all(One::is_one);
    let report = slp_check(&phi, &coeffs)?;
    let range = range_status(g, r);

    let degrees: Vec<Value> = report
        .degrees
        .iter()
        .map(|d| {
            json!({
                "k": d.k,
                "basis": d.basis,
                "determinant": rational(&d.determinant),
                "bijective": d.bijective,
                "cross_route_agrees": d.cross_route_agrees,
            })
        })
        .collect();
    let mut result = json!({
        "hilbert_function": report.hilbert.dims,
        "socle_degree": report.hilbert.socle_degree(),
        "coefficients": coeffs.iter().map(rational).collect::<Vec<_>>(),
        "degrees": degrees,
    });
    let slp_holds = report.is_strong_lefschetz();
    let routes = report.routes_agree();
    let mut verdict = json!({
        "strong_lefschetz": slp_holds,
        "routes_agree": routes,
        "natural_range": range.natural,
        "literal_range": range.literal,
    });
    let mut passed = routes;

    if range.natural {
        // The degree-one statement concerns the all-ones form whatever point was given.
        match check_degree_one_lefschetz(g, r) {
            Ok(d1) => {
                result = with(
                    result,
                    json!({ "degree_one": {
                        "variables_independent": d1.variables_independent,
                        "matches_forest_polynomial": d1.matches_forest_polynomial,
                        "spectrum_certified": d1.spectrum_certified,
                        "spectral_determinant": rational(&d1.spectral_determinant),
                        "direct_determinant": rational(&d1.direct_determinant),
                        "bijective": d1.bijective,
                    }}),
                );
                let d1_ok = d1.bijective && d1.matches_forest_polynomial;
                verdict = with(verdict, json!({ "degree_one_holds": d1_ok }));
                passed &= d1_ok;
            }
            Err(Error::StructureViolation(msg)) => return Err(Error::StructureViolation(msg)),
            Err(e) => {
                verdict = with(verdict, json!({ "degree_one_note": format!("not applicable: {e}") }));
            }
        }
        // With socle degree at most 4 only A_0 and A_1 need checking, and the
        // degree-one statement covers A_1.
        if all_ones && r <= 4 {
            verdict = with(verdict, json!({ "strong_lefschetz_expected": true }));
            passed &= slp_holds;
        }
    } else {
        verdict = with(verdict, json!({ "note": format!("r = {r} is outside 2 < r < {v}; reporting the check only") }));
    }

    Ok(Report {
        command: "slp",
        input: with(graph_input(g), json!({ "r": r, "point": point.is_some() })),
        result,
        verdict,
        passed,
    })
}

pub fn matroid(g: &Graph, r: usize, verify_axioms: bool) -> Result<Report, Error> {
    let base = graphic_matroid(g)?;
    let m = truncate(&base, r)?;
    let k = g.vertex_count() - r;
    let mut forests: Vec<u64> = enumerate_forests(g, k)?.iter().map(|f| f.mask()).collect();
    let mut bases = m.bases().to_vec();
    forests.sort_unstable();
    bases.sort_unstable();
    let matches_forests = forests == bases;

    let mut verdict = json!({ "bases_are_forests": matches_forests });
    let mut passed = matches_forests;
    if verify_axioms {
        let axioms = verify_exchange_axiom(&m);
        verdict = with(verdict, json!({ "exchange_axiom": axioms }));
        passed &= axioms;
    }
    Ok(Report {
        command: "matroid",
        input: with(graph_input(g), json!({ "r": r, "verify_axioms": verify_axioms })),
        result: json!({
            "ground": m.ground(),
            "rank": m.rank(),
            "graphic_rank": base.rank(),
            "basis_count": m.bases().len(),
            "forest_components": k,
        }),
        verdict,
        passed,
    })
}

pub fn enumerate(g: &Graph, k: usize, count_only: bool) -> Result<Report, Error> {
    let forests = enumerate_forests(g, k)?;
    let mut result = json!({ "count": forests.len() });
    if !count_only {
        result = with(
            result,
            json!({ "forests": forests
                .iter()
                .map(|f| f.edges().iter().map(ToString::to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>() }),
        );
    }
    let canonical = forests.windows(2).all(|w| w[0] < w[1]);
    let sized = forests.iter().all(|f| f.component_count() == k);
    Ok(Report {
        command: "enumerate",
        input: with(graph_input(g), json!({ "k": k, "count_only": count_only })),
        result,
        verdict: json!({ "canonical_order": canonical, "component_counts": sized }),
        passed: canonical && sized,
    })
}

