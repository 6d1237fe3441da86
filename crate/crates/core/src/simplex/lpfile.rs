//! CPLEX LP text export, for cross-checking with external solvers.

use std::io::Write;

use super::{LinearProgram, Sense};
use crate::error::Result;

fn term(out: &mut String, coef: f64, j: usize, first: bool) {
    if coef < 0.0 {
        out.push_str(if first { "- " } else { " - " });
    } else if !first {
        out.push_str(" + ");
    }
    let a = coef.abs();
    if a != 1.0 {
        out.push_str(&format!("{a} "));
    }
    out.push_str(&format!("x{j}"));
}

/// Writes `lp` in CPLEX LP format. Variables in `integer_vars` go to a `General` section.
pub fn write_lp_format<W: Write>(lp: &LinearProgram, integer_vars: &[usize], mut w: W) -> Result<()> {
    let mut obj = String::new();
    let mut first = true;
    for (j, &c) in lp.objective.iter().enumerate() {
        if c != 0.0 {
            term(&mut obj, c, j, first);
            first = false;
        }
    }
    if first {
        obj.push('0');
    }
    writeln!(w, "\\ constant offset {}", lp.constant)?;
    writeln!(w, "Minimize")?;
    writeln!(w, " obj: {obj}")?;
    writeln!(w, "Subject To")?;
    for (i, row) in lp.active_rows().enumerate() {
        let mut s = String::new();
        let mut first = true;
        for &(j, a) in &row.terms {
            if a != 0.0 {
                term(&mut s, a, j, first);
                first = false;
            }
        }
        if first {
            s.push_str("0 x0");
        }
        let op = match row.sense {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        };
        writeln!(w, " c{i}: {s} {op} {}", row.rhs)?;
    }
    writeln!(w, "Bounds")?;
    for j in 0..lp.num_vars() {
        writeln!(w, " {} <= x{j} <= {}", lp.lower[j], lp.upper[j])?;
    }
    if !integer_vars.is_empty() {
        writeln!(w, "General")?;
        for &j in integer_vars {
            writeln!(w, " x{j}")?;
        }
    }
    writeln!(w, "End")?;
    Ok(())
}
