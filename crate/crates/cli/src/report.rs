use std::process::ExitCode;

use serde_json::{json, Value};

use idemat_core::catalog;
use idemat_core::iso::are_isomorphic;
use idemat_core::matrix::{InvertibilityCertificate, ResMatrix};
use idemat_core::resmap::ResiduatedMap;
use idemat_core::{Factorization, FiniteLattice};

/// What a command prints, in both renderings, and how it exits.
pub struct Report {
    code: u8,
    text: String,
    json: Option<Value>,
}

impl Report {
    pub fn ok(text: String, json: Value) -> Self {
        Report { code: 0, text, json: Some(json) }
    }

    pub fn verdict(invertible: bool, text: String, json: Value) -> Self {
        Report { code: if invertible { 0 } else { 1 }, text, json: Some(json) }
    }

    pub fn singular() -> Self {
        Self::verdict(false, "not invertible".into(), json!({ "invertible": false }))
    }

    /// Output that is already JSON.
    pub fn raw(text: String) -> Self {
        Report { code: 0, text, json: None }
    }

    pub fn emit(self, as_json: bool) -> ExitCode {
        match (&self.json, as_json) {
            (Some(v), true) => println!("{}", serde_json::to_string_pretty(v).expect("values serialize")),
            _ => println!("{}", self.text),
        }
        ExitCode::from(self.code)
    }
}

/// Catalog name of an isomorphic builtin, or a size-based placeholder.
pub fn factor_name(l: &FiniteLattice) -> String {
    catalog::LATTICES
        .iter()
        .find(|name| catalog::lattice(name).is_some_and(|c| are_isomorphic(&c, l)))
        .map(|name| name.to_string())
        .unwrap_or_else(|| format!("L{}", l.len()))
}

pub fn factor_names(factors: &[FiniteLattice]) -> Vec<String> {
    factors.iter().map(factor_name).collect()
}

pub fn lattice_summary(l: &FiniteLattice) -> String {
    format!(
        "{} elements, {} covers, bottom {}, top {}",
        l.len(),
        l.covers().len(),
        l.label(l.bottom()),
        l.label(l.top())
    )
}

pub fn map_labels(f: &ResiduatedMap) -> Vec<String> {
    f.values().iter().map(|&v| f.lattice().label(v).to_owned()).collect()
}

pub fn certificate(m: &ResMatrix, f: &Factorization, cert: Option<&InvertibilityCertificate>) -> Report {
    let Some(cert) = cert else {
        return Report::singular();
    };
    let names = factor_names(f.factors());
    let mut text = format!(
        "invertible\nfactors: {}\nsigma: {}",
        if names.is_empty() { "none".to_owned() } else { names.join(" × ") },
        cert.cycle_notation()
    );
    let mut maps = Vec::new();
    for p in cert.coordinates() {
        let q = cert.sigma_inverse(p);
        let (src, dst) = (&f.factors()[p.factor], &f.factors()[q.factor]);
        let pairs: Vec<(String, String)> = cert
            .iso_map(p)
            .iter()
            .enumerate()
            .map(|(a, &b)| (src.label(a).to_owned(), dst.label(b).to_owned()))
            .collect();
        let shown: Vec<String> = pairs.iter().map(|(a, b)| format!("{a}->{b}")).collect();
        text.push_str(&format!("\nphi{p} -> {q}: {}", shown.join(" ")));
        maps.push(json!({ "input": p.to_string(), "output": q.to_string(), "table": pairs }));
    }
    Report::verdict(
        true,
        text,
        json!({
            "invertible": true,
            "n": m.size(),
            "factors": names,
            "sigma": cert.cycle_notation(),
            "maps": maps,
        }),
    )
}
