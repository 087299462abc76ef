//! Decision reports as JSON and as text.

use std::fmt::Write as _;

use serde::Serialize;
use wqo_core::decision::{Bound, RBounds};
use wqo_core::{Certificate, DecisionReport, Word};

fn plain(w: &Word) -> String {
    w.iter().collect()
}

fn plain_all(ws: &[Word]) -> Vec<String> {
    ws.iter().map(plain).collect()
}

#[derive(Serialize)]
struct BoundsJson {
    n: usize,
    m: usize,
    n0: usize,
    b1: usize,
    b2: usize,
}

impl From<&RBounds> for BoundsJson {
    fn from(b: &RBounds) -> Self {
        BoundsJson { n: b.n, m: b.m, n0: b.n0, b1: b.b1, b2: b.b2 }
    }
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum CertificateJson {
    ChainDecomposition { chain_count: usize, anchors: Vec<String>, branching: Vec<String> },
    RInclusion { bounds: BoundsJson, words: Vec<String>, periods: Vec<String> },
    AntichainSample { antichain: Vec<String> },
    Unboundedness { location: String, u: String, v: String, antichain: Vec<String> },
    EscapeWord { word: String, bounds: BoundsJson, antichain: Vec<String> },
    Higman {},
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        match c {
            Certificate::ChainDecomposition { anchors, branching, chain_count } => CertificateJson::ChainDecomposition {
                chain_count: *chain_count,
                anchors: plain_all(anchors),
                branching: plain_all(branching),
            },
            Certificate::RInclusion { bounds, words, periods } => CertificateJson::RInclusion {
                bounds: bounds.into(),
                words: plain_all(words),
                periods: plain_all(periods),
            },
            Certificate::AntichainSample { words } => CertificateJson::AntichainSample { antichain: plain_all(words) },
            Certificate::Unboundedness { location, u, v, antichain } => CertificateJson::Unboundedness {
                location: location.clone(),
                u: plain(u),
                v: plain(v),
                antichain: plain_all(antichain),
            },
            Certificate::EscapeWord { word, bounds, antichain } => CertificateJson::EscapeWord {
                word: plain(word),
                bounds: bounds.into(),
                antichain: plain_all(antichain),
            },
            Certificate::Higman => CertificateJson::Higman {},
        }
    }
}

#[derive(Serialize)]
struct OrdinalBoundsJson {
    height: String,
    height_strict: bool,
    width: String,
    width_strict: bool,
    mot: String,
    mot_strict: bool,
}

#[derive(Serialize)]
struct ReportJson {
    relation: &'static str,
    verdict: &'static str,
    certificate: CertificateJson,
    ordinal_bounds: Option<OrdinalBoundsJson>,
}

pub fn report_json(r: &DecisionReport) -> String {
    let json = ReportJson {
        relation: r.relation.name(),
        verdict: r.verdict.name(),
        certificate: (&r.certificate).into(),
        ordinal_bounds: r.ordinal_bounds.map(|b| OrdinalBoundsJson {
            height: b.height.value.to_string(),
            height_strict: b.height.strict,
            width: b.width.value.to_string(),
            width_strict: b.width.strict,
            mot: b.mot.value.to_string(),
            mot_strict: b.mot.strict,
        }),
    };
    serde_json::to_string_pretty(&json).expect("report serializes")
}

fn bound(b: &Bound) -> String {
    format!("{} {}", if b.strict { "<" } else { "<=" }, b.value)
}

fn list(ws: &[Word]) -> String {
    ws.iter().map(Word::display_eps).collect::<Vec<_>>().join(" ")
}

fn bounds_line(b: &RBounds) -> String {
    format!("n={} m={} n0={} b1={} b2={}", b.n, b.m, b.n0, b.b1, b.b2)
}

pub fn report_text(r: &DecisionReport) -> String {
    let mut out = String::new();
    writeln!(out, "relation: {}", r.relation.name()).unwrap();
    writeln!(out, "verdict: {}", r.verdict.name()).unwrap();
    writeln!(out, "certificate: {}", r.certificate.kind()).unwrap();
    match &r.certificate {
        Certificate::ChainDecomposition { anchors, branching, chain_count } => {
            writeln!(out, "  chains: {chain_count}").unwrap();
            writeln!(out, "  anchors: {}", list(anchors)).unwrap();
            writeln!(out, "  branching: {}", list(branching)).unwrap();
        }
        Certificate::RInclusion { bounds, words, periods } => {
            writeln!(out, "  bounding words: {}", list(words)).unwrap();
            writeln!(out, "  bounds: {}", bounds_line(bounds)).unwrap();
            writeln!(out, "  periods: {}", periods.len()).unwrap();
        }
        Certificate::Unboundedness { location, u, v, .. } => {
            writeln!(out, "  cycles at {location}: {} and {}", u.display_eps(), v.display_eps()).unwrap();
        }
        Certificate::EscapeWord { word, bounds, .. } => {
            writeln!(out, "  escape word: {}", word.display_eps()).unwrap();
            writeln!(out, "  bounds: {}", bounds_line(bounds)).unwrap();
        }
        Certificate::AntichainSample { .. } | Certificate::Higman => {}
    }
    if let Some(ac) = r.certificate.antichain() {
        writeln!(out, "antichain ({}): {}", ac.len(), list(ac)).unwrap();
    }
    if let Some(b) = &r.ordinal_bounds {
        writeln!(out, "ordinal bounds: height {}, width {}, mot {}", bound(&b.height), bound(&b.width), bound(&b.mot))
            .unwrap();
    }
    out
}
