//! Plain-text reports with a fixed field order.

use std::fmt::Write;

use logsync_core::certify::{Certificate, Verdict};
use logsync_core::simulate::BoundReport;

pub fn format_vec(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

/// Fields in the order c, p, Q, lambda, D, basis, samples, argmax_state,
/// argmax_time, verdict, caveat.
pub fn render_certificate(cert: &Certificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "c: {}", cert.c);
    let _ = writeln!(s, "p: {}", cert.norm.p().label());
    let _ = writeln!(s, "Q: diag{}", format_vec(cert.norm.weights()));
    let _ = writeln!(s, "lambda: {}", cert.lambda);
    match &cert.diffusion {
        Some(d) => {
            let _ = writeln!(s, "D: diag{}", format_vec(d.coefficients()));
        }
        None => s.push_str("D: none\n"),
    }
    if let Some(b) = &cert.basis {
        let _ = writeln!(s, "basis: {b}");
    }
    let _ = writeln!(s, "samples: {}", cert.sample_count);
    let _ = writeln!(s, "argmax_state: {}", format_vec(&cert.argmax_state));
    let _ = writeln!(s, "argmax_time: {}", cert.argmax_time);
    match cert.verdict {
        Verdict::Contractive => {
            let _ = writeln!(s, "verdict: CONTRACTIVE (c = {})", cert.c);
        }
        Verdict::Inconclusive => {
            let _ = writeln!(
                s,
                "verdict: INCONCLUSIVE (c = {} >= 0, attained at state {} and t = {})",
                cert.c,
                format_vec(&cert.argmax_state),
                cert.argmax_time
            );
        }
    }
    if cert.sampled {
        let _ = writeln!(
            s,
            "caveat: supremum over {} samples; it bounds the true supremum over the box from below",
            cert.sample_count
        );
    }
    s
}

/// Fields in the order series, kind, parameters, slack, samples, max_ratio,
/// argmax_t, verdict.
pub fn render_bound(series: &str, report: &BoundReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "series: {series}");
    let _ = writeln!(s, "kind: {}", report.kind());
    for (name, value) in report.bound.parameters() {
        let _ = writeln!(s, "{name}: {value}");
    }
    let _ = writeln!(s, "slack: {}", report.slack);
    let _ = writeln!(s, "samples: {}", report.samples);
    let _ = writeln!(s, "max_ratio: {}", report.max_ratio);
    let _ = writeln!(s, "argmax_t: {}", report.argmax_t);
    if report.pass {
        s.push_str("verdict: PASS\n");
    } else {
        let _ = writeln!(
            s,
            "verdict: FAIL (max violation ratio {} at t = {})",
            report.max_ratio, report.argmax_t
        );
    }
    s
}
