//! The sufficient-degree table printed by `swcp threshold`.

use std::fmt::Write as _;

use swcp_core::branching::{threshold_check, ThresholdCheck};

pub fn rows(max_d: u64) -> Vec<ThresholdCheck> {
    (2..=max_d.max(2)).map(threshold_check).collect()
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "fails"
    }
}

pub fn table_text(rows: &[ThresholdCheck]) -> String {
    let mut out = format!(
        "{:>4}  {:>14}  {:>14}  {:>14}  {:>8}  {:>8}\n",
        "d", "eta(d-1,1/4)", "d*eta", "closed_form", "verdict", "closed"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>4}  {:>14.10}  {:>14.10}  {:>14.10}  {:>8}  {:>8}",
            r.degree,
            r.eta,
            r.lhs_fixed_point,
            r.lhs_closed_form,
            verdict(r.condition_holds),
            verdict(r.closed_form_holds())
        );
    }
    out
}

pub fn table_csv(rows: &[ThresholdCheck]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(["d", "eta", "lhs_fixed_point", "lhs_closed_form", "condition_holds", "closed_form_holds"])
        .expect("in-memory write");
    for r in rows {
        w.write_record([
            r.degree.to_string(),
            r.eta.to_string(),
            r.lhs_fixed_point.to_string(),
            r.lhs_closed_form.to_string(),
            r.condition_holds.to_string(),
            r.closed_form_holds().to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shapes() {
        let r = rows(12);
        assert_eq!(r.len(), 11);
        let text = table_text(&r);
        assert_eq!(text.lines().count(), 12);
        assert!(text.lines().nth(10).unwrap().trim_end().ends_with("holds"));
        let csv = table_csv(&r);
        assert!(csv.starts_with("d,eta,"));
        assert!(csv.lines().nth(1).unwrap().starts_with("2,1,2,"));
    }
}
