//! Human-readable output.

use std::fmt::Write;

use kselfdual::claims::{Status, VerifyReport};
use kselfdual::dualdim::DualDimReport;
use kselfdual::search::SearchOutcome;
use kselfdual::selfdual::{Diagnostic, Reason};
use kselfdual::{LatticeConfiguration, SelfdualVerdict};

fn list<T: ToString>(v: &[T]) -> String {
    let s: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", s.join(", "))
}

fn reason_text(r: Reason) -> &'static str {
    match r {
        Reason::EmptyKernel => "EmptyKernel (c_k = 0, no hyperplane osculates to this order)",
        Reason::NotKnap => "NotKnap (the kernel of A^(k) vanishes on some coordinate)",
        Reason::LineIndicatorOutsideRowspan => "LineIndicatorOutsideRowspan (some e_L is not in the rowspan of A)",
    }
}

pub fn verdict(cfg: &LatticeConfiguration, v: &SelfdualVerdict) -> String {
    let k = v.k;
    let mut s = String::new();
    let label = cfg.label().map(|l| format!("{l}: ")).unwrap_or_default();
    let _ = writeln!(
        s,
        "configuration: {label}{} points in dimension {}",
        v.points,
        cfg.dim()
    );
    if let Some(t) = &v.normalization {
        let _ = writeln!(
            s,
            "normalized: lattice index {}{}",
            t.index,
            if t.reembedded {
                ", re-embedded in its affine span"
            } else {
                ""
            }
        );
    }
    let _ = writeln!(s, "k = {k}, n = {}", v.n);
    let _ = writeln!(s, "d_{k} = {}, c_{k} = {}", v.d_k, v.c_k);
    for (i, b) in v.kernel.vectors().iter().enumerate() {
        let _ = writeln!(s, "kernel[{i}] = {}", list(b));
    }
    if v.knap.is_knap {
        let w = v.knap.torus_witness.as_deref().unwrap_or_default();
        let _ = writeln!(s, "knap: yes, torus witness {}", list(w));
    } else {
        let _ = writeln!(
            s,
            "knap: no, e_i in the rowspan for i in {}",
            list(&v.knap.offending_indices)
        );
    }
    if let Some(p) = &v.partition {
        let _ = writeln!(s, "lines: {}", p.r());
        for (line, cert) in p.lines.iter().zip(&v.el_certificates) {
            let _ = writeln!(
                s,
                "  direction {} members {} multipliers {}: e_L {}",
                list(&line.direction),
                list(&line.members),
                list(&line.multipliers),
                if cert.member { "in rowspan" } else { "NOT in rowspan" }
            );
        }
    }
    if let Some(r) = v.cayley_r.filter(|&r| r >= 2) {
        let _ = writeln!(s, "the lines make the configuration {r}-Cayley");
    }
    if let Some(d) = &v.dual_dim_check {
        s.push_str(&dual(d));
    }
    for d in &v.diagnostics {
        match d {
            Diagnostic::TheoremViolation { check, detail } => {
                let _ = writeln!(s, "THEOREM VIOLATION: {check}: {detail}");
            }
            Diagnostic::Inconsistency { detail } => {
                let _ = writeln!(s, "INCONSISTENCY: {detail}");
            }
            Diagnostic::Normalized { .. } | Diagnostic::EmptyKernel => {}
        }
    }
    match (v.selfdual, v.reason) {
        (true, _) => {
            let _ = writeln!(s, "verdict: {k}-selfdual");
        }
        (false, Some(r)) => {
            let _ = writeln!(s, "verdict: not {k}-selfdual");
            let _ = writeln!(s, "reason: {}", reason_text(r));
        }
        (false, None) => {
            let _ = writeln!(s, "verdict: not {k}-selfdual");
        }
    }
    s
}

pub fn dual(d: &DualDimReport) -> String {
    format!(
        "dual dimension: computed {} (expected {} if selfdual, n + c_k - 1 = {}) over {} trials, seed {}{}; {}\n",
        d.computed_dim,
        d.n,
        d.expected_dim,
        d.trials,
        d.seed,
        if d.degenerate { ", degenerate" } else { "" },
        if d.agrees_with_verdict {
            "agrees with the verdict"
        } else {
            "DISAGREES with the verdict"
        }
    )
}

pub fn hilbert(values: &[usize]) -> String {
    let mut s = String::from("k\tH(k)\n");
    for (i, h) in values.iter().enumerate() {
        let _ = writeln!(s, "{}\t{h}", i + 1);
    }
    s
}

pub fn search(out: &SearchOutcome) -> String {
    let mut s = String::new();
    for h in &out.hits {
        let pts: Vec<String> = h
            .points
            .iter()
            .map(|p| format!("({})", list(p).trim_matches(['[', ']'])))
            .collect();
        let _ = writeln!(
            s,
            "{}\tc_k={}\t{}\t{}",
            list(&h.indices),
            h.c_k,
            if h.selfdual { "selfdual" } else { "knap" },
            pts.join(" ")
        );
    }
    let _ = writeln!(
        s,
        "# {} hits among {} subsets{}",
        out.hits.len(),
        out.examined,
        if out.removed_duplicates > 0 {
            format!(", {} duplicates removed", out.removed_duplicates)
        } else {
            String::new()
        }
    );
    s
}

pub fn report(r: &VerifyReport) -> String {
    let mut s = String::new();
    for c in &r.results {
        let tag = match c.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Quarantined => "QUARANTINED",
        };
        let _ = writeln!(s, "{tag:<11} {}: {}", c.id, c.statement);
        if c.status != Status::Pass {
            let _ = writeln!(s, "            {}", c.detail);
        }
    }
    for n in &r.notes {
        let _ = writeln!(s, "note: {n}");
    }
    let failed = r.failures().count();
    let quarantined = r.results.iter().filter(|c| c.status == Status::Quarantined).count();
    let _ = writeln!(
        s,
        "{} claims: {} passed, {failed} failed, {quarantined} quarantined",
        r.results.len(),
        r.results.len() - failed - quarantined
    );
    s
}
