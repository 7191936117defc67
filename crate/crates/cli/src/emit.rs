//! Deterministic artifact writers.
//!
//! CSV: a header block of `# key: value` lines followed by comma-separated
//! rows. JSON: `{"meta": {...}, "data": {"columns": [...], "rows": [...]}}`.
//! Every float is printed with 17 significant digits so parsed values
//! round-trip bit-exactly, and nothing time- or host-dependent is written:
//! rerunning a fixed configuration reproduces the file byte for byte.

use std::io::Write;

/// 17 significant digits: enough to reconstruct any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Str(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Str(s) => s.clone(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Num(x) => fmt_f64(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Str(s) => format!("\"{}\"", escape_json(s)),
        }
    }
}

fn escape_json(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

/// One tabular artifact: ordered metadata plus a column-labelled table.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn push_meta(&mut self, key: &str, value: impl Into<String>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn push_meta_f64(&mut self, key: &str, value: f64) {
        self.meta.push((key.to_string(), fmt_f64(value)));
    }

    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> std::io::Result<()> {
        for (k, v) in &self.meta {
            writeln!(w, "# {k}: {v}")?;
        }
        writeln!(w, "# columns: {}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn write_json<W: Write + ?Sized>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "{{")?;
        writeln!(w, "  \"meta\": {{")?;
        for (i, (k, v)) in self.meta.iter().enumerate() {
            let comma = if i + 1 < self.meta.len() { "," } else { "" };
            writeln!(
                w,
                "    \"{}\": \"{}\"{comma}",
                escape_json(k),
                escape_json(v)
            )?;
        }
        writeln!(w, "  }},")?;
        writeln!(w, "  \"data\": {{")?;
        let cols: Vec<String> = self.columns.iter().map(|c| format!("\"{c}\"")).collect();
        writeln!(w, "    \"columns\": [{}],", cols.join(", "))?;
        writeln!(w, "    \"rows\": [")?;
        for (i, row) in self.rows.iter().enumerate() {
            let line: Vec<String> = row.iter().map(Cell::json).collect();
            let comma = if i + 1 < self.rows.len() { "," } else { "" };
            writeln!(w, "      [{}]{comma}", line.join(", "))?;
        }
        writeln!(w, "    ]")?;
        writeln!(w, "  }}")?;
        writeln!(w, "}}")?;
        Ok(())
    }
}

/// Grid emitted as a gnuplot-compatible whitespace matrix: one line per P
/// row, values ordered by Q; the meta block rides along as `#` comments.
pub fn write_gnuplot_matrix<W: Write + ?Sized>(
    w: &mut W,
    meta: &[(String, String)],
    grid: &morse_wigner::DensityGrid,
) -> std::io::Result<()> {
    for (k, v) in meta {
        writeln!(w, "# {k}: {v}")?;
    }
    writeln!(
        w,
        "# matrix: rows are P from p-min to p-max, columns Q from q-min to q-max"
    )?;
    for j in 0..grid.np {
        let mut line = String::with_capacity(grid.nq * 24);
        for i in 0..grid.nq {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&fmt_f64(grid.value(i, j)));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}
