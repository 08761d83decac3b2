//! Human-facing analysis of a recurrence: roots, dominance, degeneracy, relations.

use serde_json::{json, Value};

use crate::algebra::algebraic::AlgebraicNumber;
use crate::decide::{analyze_nondegenerate, Config, Outcome};
use crate::error::Result;
use crate::lrs::{degenerate_decomposition, to_text, Lrs};
use crate::relations::relation_lattice;
use crate::spectral::{dominance, exp_poly};

fn number(a: &AlgebraicNumber) -> Value {
    let (re, im) = a.to_f64();
    json!({
        "poly": a.poly().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "re": re,
        "im": im,
    })
}

fn subsequence(u: &Lrs, cfg: &Config) -> Result<Value> {
    if u.is_zero_sequence() {
        return Ok(json!({"lrs": to_text(u), "zero": true}));
    }
    let ep = exp_poly(u)?;
    let roots: Vec<Value> = ep
        .terms
        .iter()
        .map(|t| {
            let mut v = number(&t.root);
            v["multiplicity"] = json!(t.multiplicity);
            v
        })
        .collect();
    let sd = dominance(&ep)?;
    let lambdas: Vec<AlgebraicNumber> = sd.dominant_group.iter().map(|e| e.lambda.clone()).collect();
    let relations = if lambdas.is_empty() {
        Value::Null
    } else {
        json!(relation_lattice(&lambdas, cfg.relation_search_bound, cfg.max_precision_bits).vectors)
    };
    let case = analyze_nondegenerate(u, cfg)?;
    let outcome = match &case.outcome {
        Outcome::UltimatelyPositive(t) => json!({"ultimately_positive": true, "threshold": t.to_json(cfg.prefix_cutoff)}),
        Outcome::NotUltimatelyPositive => json!({"ultimately_positive": false}),
        Outcome::Undetermined(why) => json!({"undetermined": why}),
    };
    Ok(json!({
        "lrs": to_text(u),
        "roots": roots,
        "dominance": {
            "rho": sd.rho.as_ref().map(number),
            "dominant_count": sd.top_terms.len(),
            "lambdas": lambdas.iter().map(number).collect::<Vec<_>>(),
            "residual_terms": sd.residual.len(),
            "tail_epsilon": crate::lrs::format::format_rational(&sd.tail_epsilon),
            "tail_n": sd.tail_n.to_string(),
        },
        "relation_basis": relations,
        "case": outcome,
    }))
}

/// Full structural report for `u`.
pub fn analysis(u: &Lrs, cfg: &Config) -> Result<Value> {
    let dec = degenerate_decomposition(u)?;
    let subs = dec.subsequences.iter().map(|s| subsequence(s, cfg)).collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "input": to_text(u),
        "order": u.order(),
        "char_poly": u.char_poly().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "non_degenerate": dec.modulus == 1,
        "modulus": dec.modulus,
        "subsequences": subs,
    }))
}
