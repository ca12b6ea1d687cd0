use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use paritynest::{DenseOperator, FidelityCurve, C64};
use serde_json::Value;

/// Row-major nested `[re, im]` pairs.
pub fn matrix_to_json(m: &DenseOperator) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|r| {
            let row: Vec<Value> = (0..m.ncols())
                .map(|c| Value::from(vec![m[(r, c)].re, m[(r, c)].im]))
                .collect();
            Value::Array(row)
        })
        .collect();
    Value::Array(rows)
}

pub fn matrix_from_json(v: &Value) -> Result<DenseOperator, String> {
    let rows = v.as_array().ok_or("matrix must be an array of rows")?;
    let dim = rows.len();
    let mut m = DenseOperator::zeros(dim, dim);
    for (r, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| format!("row {r} is not an array"))?;
        if row.len() != dim {
            return Err(format!("row {r} has {} entries, expected {dim}", row.len()));
        }
        for (c, entry) in row.iter().enumerate() {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| format!("entry ({r}, {c}) is not a [re, im] pair"))?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| format!("entry ({r}, {c}) re is not a number"))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| format!("entry ({r}, {c}) im is not a number"))?;
            m[(r, c)] = C64::new(re, im);
        }
    }
    Ok(m)
}

/// Reads the matrix from a `build` document, or from a bare `{"matrix": ...}` object.
pub fn read_hamiltonian(path: &Path) -> Result<DenseOperator, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let matrix = doc
        .pointer("/data/matrix")
        .or_else(|| doc.get("matrix"))
        .ok_or_else(|| format!("{}: no matrix field", path.display()))?;
    matrix_from_json(matrix)
}

pub fn document(meta: Value, data: Value) -> String {
    let mut s = serde_json::to_string_pretty(&serde_json::json!({ "meta": meta, "data": data }))
        .expect("json values always serialize");
    s.push('\n');
    s
}

pub fn curve_csv(curve: &FidelityCurve) -> String {
    let mut s = String::from("kappa,gamma,infidelity\n");
    for p in &curve.points {
        writeln!(s, "{:.15e},{:.15e},{:.15e}", p.kappa, p.gamma, p.infidelity).unwrap();
    }
    s
}

pub fn gnuplot_script(curves: &[FidelityCurve]) -> String {
    let mut s = String::new();
    s.push_str("set logscale xy\nset xlabel \"gamma\"\nset ylabel \"1 - F\"\nset key left top\n");
    for (i, curve) in curves.iter().enumerate() {
        writeln!(s, "$c{i} << EOD").unwrap();
        for p in curve.points.iter().filter(|p| p.infidelity > 0.0) {
            writeln!(s, "{:.15e} {:.15e}", p.gamma, p.infidelity).unwrap();
        }
        s.push_str("EOD\n");
    }
    let plots: Vec<String> = curves
        .iter()
        .enumerate()
        .map(|(i, c)| format!("$c{i} using 1:2 with linespoints title \"{}\"", c.label))
        .collect();
    writeln!(s, "plot {}", plots.join(", \\\n     ")).unwrap();
    s
}

/// `out/stem.csv` becomes `out/stem-label.csv`.
pub fn labeled_path(base: &Path, label: &str) -> PathBuf {
    let stem = base
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}-{label}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{label}"),
    };
    base.with_file_name(name)
}

pub fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| format!("stdout: {e}"))
        }
    }
}
