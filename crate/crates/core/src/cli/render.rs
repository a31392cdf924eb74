use serde_json::{json, Value};

use crate::algebra::{CanonicalGroup, GroupResult};
use crate::steenrod::{CechResult, Provenance, SteenrodResult};

pub fn group_json(g: &CanonicalGroup) -> Value {
    json!({
        "rank": g.rank(),
        "torsion": g.torsion().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "text": g.to_string(),
    })
}

pub fn result_json(r: &GroupResult) -> Value {
    let mut v = match r {
        GroupResult::Exact(g) => {
            let mut v = group_json(g);
            v["kind"] = json!("exact");
            return v;
        }
        GroupResult::AdicQuotient { m, .. } => json!({"kind": "adic_quotient", "m": m.to_string(), "nonzero": true}),
        GroupResult::CountableProduct { factor } => json!({"kind": "countable_product", "factor": group_json(factor)}),
        GroupResult::Localization { base, m, .. } => {
            json!({"kind": "localization", "base": group_json(base), "m": m.to_string()})
        }
        GroupResult::SymbolicNonzero { description, .. } => {
            json!({"kind": "symbolic_nonzero", "description": description, "nonzero": true})
        }
        GroupResult::Undetermined { levels, reason } => json!({
            "kind": "undetermined",
            "reason": reason,
            "levels": levels.iter().map(group_json).collect::<Vec<_>>(),
        }),
        GroupResult::DirectSum(parts) => json!({"kind": "direct_sum", "parts": parts.iter().map(result_json).collect::<Vec<_>>()}),
    };
    v["text"] = json!(r.to_string());
    v
}

fn provenance(p: Provenance) -> &'static str {
    match p {
        Provenance::TelescopeExact => "telescope_exact",
        Provenance::MilnorOracle => "milnor_oracle",
        Provenance::CrossChecked => "cross_checked",
    }
}

pub fn steenrod_json(r: &SteenrodResult) -> Value {
    json!({
        "degree": r.degree,
        "reduced": r.reduced,
        "group": result_json(&r.group),
        "provenance": provenance(r.provenance),
        "telescope": r.telescope.as_ref().map(|t| json!({
            "depth": t.depth,
            "relative": group_json(&t.relative),
            "group": group_json(&t.group),
        })),
        "milnor": r.milnor.as_ref().map(|m| json!({
            "lim": result_json(&m.lim),
            "lim1": result_json(&m.lim1),
            "mittag_leffler": m.mittag_leffler,
        })),
        "discrepancy": r.discrepancy,
    })
}

pub fn steenrod_detail(r: &SteenrodResult) -> String {
    let mut parts = vec![provenance(r.provenance).to_string()];
    if let Some(m) = &r.milnor {
        let ml = match m.mittag_leffler {
            Some(true) => "yes",
            Some(false) => "no",
            None => "unknown",
        };
        parts.push(format!("lim={}, lim1={}, mittag_leffler={ml}", m.lim, m.lim1));
    }
    if let Some(t) = &r.telescope {
        parts.push(format!("telescope depth {} gives {}", t.depth, t.group));
    }
    if let Some(d) = &r.discrepancy {
        parts.push(format!("DISCREPANCY: {d}"));
    }
    parts.join("; ")
}

pub fn cech_json(r: &CechResult) -> Value {
    json!({
        "degree": r.degree,
        "group": result_json(&r.group),
        "rational_rank": r.rational_rank(),
    })
}

/// `H0=Z, H1=Z^2` (or `H^0=…` for cohomology).
pub fn summary_line(cohomology: bool, groups: &[(usize, String)]) -> String {
    let sep = if cohomology { "^" } else { "" };
    groups.iter().map(|(n, g)| format!("H{sep}{n}={g}")).collect::<Vec<_>>().join(", ")
}
