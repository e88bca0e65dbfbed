//! Per-iteration run records and their CSV serialization.

use std::fmt::Write as _;

/// Cumulative oracle-call counters carried through a run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Counters {
    /// Linear minimization oracle calls (NEP calls count here too).
    pub lmo_calls: u64,
    /// First-order oracle calls (exact gradient evaluations).
    pub foo_calls: u64,
    /// Stochastic first-order oracle calls (single gradient samples).
    pub sfo_calls: u64,
}

/// One recorded iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub t: u64,
    pub f_value: f64,
    pub fw_gap: f64,
    pub primal_gap: f64,
    pub step_size: f64,
    pub lmo_calls: u64,
    pub foo_calls: u64,
    pub sfo_calls: u64,
    pub active_set_size: u64,
    pub wall_time_ns: u64,
}

/// A run trace: one row per recorded iteration.
///
/// `primal_gap` is `f(x_t) - f(x*)` when the objective declares its optimal
/// value and otherwise stores the Frank-Wolfe gap, which certifiably upper
/// bounds it. Runners that cannot compute a gap without extra oracle calls
/// record NaN there.
#[derive(Debug, Clone, Default)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
}

pub const TRACE_HEADER: &str =
    "t,f_value,fw_gap,primal_gap,step_size,lmo_calls,foo_calls,sfo_calls,active_set_size,wall_time_ns";

/// Floats with 17 significant digits, enough to round-trip any f64.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{:.16e}", v)
    }
}

impl RunTrace {
    pub fn push(&mut self, row: TraceRow) {
        debug_assert!(self.rows.last().is_none_or(|r| r.t < row.t), "t must increase");
        self.rows.push(row);
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    /// Serialize as CSV: one header row then numeric rows.
    /// `strip_wall_time` zeroes the timing column so that reruns with the
    /// same seed emit byte-identical files.
    pub fn to_csv(&self, strip_wall_time: bool) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(TRACE_HEADER);
        out.push('\n');
        for r in &self.rows {
            let wall = if strip_wall_time { 0 } else { r.wall_time_ns };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.t,
                format_float(r.f_value),
                format_float(r.fw_gap),
                format_float(r.primal_gap),
                format_float(r.step_size),
                r.lmo_calls,
                r.foo_calls,
                r.sfo_calls,
                r.active_set_size,
                wall
            );
        }
        out
    }

    /// Counter monotonicity and strictly increasing t; used by tests.
    pub fn check_invariants(&self) -> bool {
        self.rows.windows(2).all(|w| {
            w[0].t < w[1].t
                && w[0].lmo_calls <= w[1].lmo_calls
                && w[0].foo_calls <= w[1].foo_calls
                && w[0].sfo_calls <= w[1].sfo_calls
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_shape() {
        let mut tr = RunTrace::default();
        tr.push(TraceRow {
            t: 0,
            f_value: 1.0 / 3.0,
            fw_gap: 2.0,
            primal_gap: f64::NAN,
            step_size: 0.5,
            lmo_calls: 1,
            foo_calls: 1,
            sfo_calls: 0,
            active_set_size: 1,
            wall_time_ns: 12345,
        });
        let csv = tr.to_csv(true);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), TRACE_HEADER);
        let row = lines.next().unwrap();
        assert!(row.starts_with("0,3.3333333333333331e-1,2.0000000000000000e0,nan,"));
        assert!(row.ends_with(",0")); // wall time stripped
    }

    #[test]
    fn float_formatting_is_17_significant_digits() {
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        let x = 0.1f64;
        assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }
}
