use std::fmt::Write;

use hitomezashi_core::verify::TheoremReport;

pub const HEADER: &str = "#hitomezashi-report v1";

/// Line-delimited report. Timing sits on `time` lines only.
pub fn report_text(reports: &[TheoremReport], with_time: bool) -> String {
    let mut s = String::new();
    s.push_str(HEADER);
    s.push('\n');
    for r in reports {
        for line in r.lines(with_time) {
            s.push_str(&line);
            s.push('\n');
        }
    }
    s
}

pub fn summary_table(reports: &[TheoremReport]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<12} {:>10} {:>10} {:>9} {:>9}  status",
        "theorem", "instances", "violations", "failures", "seconds"
    );
    for r in reports {
        let status = if !r.schedule_failures.is_empty() {
            "SCHEDULE"
        } else if !r.violations.is_empty() {
            "FAIL"
        } else {
            "ok"
        };
        let _ = writeln!(
            s,
            "{:<12} {:>10} {:>10} {:>9} {:>9.3}  {status}",
            r.theorem,
            r.instances,
            r.violations.len(),
            r.schedule_failures.len(),
            r.wall_time.as_secs_f64()
        );
    }
    s
}

/// 0 clean, 1 violations, 3 schedule failures.
pub fn exit_code(reports: &[TheoremReport]) -> u8 {
    if reports.iter().any(|r| !r.schedule_failures.is_empty()) {
        3
    } else if reports.iter().any(|r| !r.violations.is_empty()) {
        1
    } else {
        0
    }
}
