//! Output rendering: aligned text, JSON (the machine contract), and CSV.

use drwitt_core::cohomology::{OracleStatus, TableCell, TableRequest};
use drwitt_core::complex::RComplex;
use drwitt_core::fq::FieldDesc;
use drwitt_core::witt::WittVec;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl core::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(format!("unknown format {other:?} (text|json|csv)")),
        }
    }
}

#[derive(Serialize)]
struct RequestJson<'a> {
    variety: &'a str,
    p: u64,
    f: usize,
    n: usize,
    i_min: i64,
    i_max: i64,
    r_min: i64,
    r_max: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mod_pm: Option<usize>,
    oracle: bool,
}

#[derive(Serialize)]
struct CellJson<'a> {
    i: i64,
    r: i64,
    factors: &'a [usize],
    #[serde(skip_serializing_if = "Option::is_none")]
    limit: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<&'static str>,
}

#[derive(Serialize)]
struct TableJson<'a> {
    request: RequestJson<'a>,
    cells: Vec<CellJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<ComplexJson>,
}

/// `{p, f, n, coords}` with coordinates little-endian in the polynomial
/// basis.
#[derive(Serialize)]
pub struct WittVecJson {
    p: u64,
    f: usize,
    n: usize,
    coords: Vec<Vec<u64>>,
}

impl WittVecJson {
    pub fn from_witt(w: &WittVec) -> Self {
        WittVecJson {
            p: w.field().p(),
            f: w.field().f(),
            n: w.len(),
            coords: w.coords().iter().map(|c| c.coeffs().to_vec()).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct FieldJson {
    p: u64,
    f: usize,
    modulus: Vec<u64>,
}

impl FieldJson {
    pub fn from_field(field: &FieldDesc) -> Self {
        FieldJson {
            p: field.p(),
            f: field.f(),
            modulus: field.modulus().to_vec(),
        }
    }
}

#[derive(Serialize)]
pub struct OpJson {
    matrix: Vec<Vec<WittVecJson>>,
    twist: i64,
}

fn op_json(op: &drwitt_core::SemilinearMap) -> OpJson {
    let entries = op.entries();
    let matrix = (0..entries.rows())
        .map(|i| {
            (0..entries.cols())
                .map(|j| WittVecJson::from_witt(entries.at(i, j)))
                .collect()
        })
        .collect();
    OpJson {
        matrix,
        twist: op.twist(),
    }
}

/// A bicomplex in JSON: components and operators keyed by `"i,j"`.
#[derive(Serialize)]
pub struct ComplexJson {
    field: FieldJson,
    n: usize,
    components: std::collections::BTreeMap<String, Vec<usize>>,
    ops: std::collections::BTreeMap<String, ComplexOpsJson>,
}

#[derive(Serialize)]
pub struct ComplexOpsJson {
    #[serde(rename = "F")]
    f: OpJson,
    #[serde(rename = "V")]
    v: OpJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<OpJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    del: Option<OpJson>,
}

impl ComplexJson {
    pub fn from_complex(c: &RComplex) -> Self {
        let mut components = std::collections::BTreeMap::new();
        let mut ops = std::collections::BTreeMap::new();
        for (i, j) in c.entry_keys() {
            let key = format!("{i},{j}");
            components.insert(key.clone(), c.entry_shape(i, j).to_vec());
            ops.insert(
                key,
                ComplexOpsJson {
                    f: op_json(c.f_op(i, j).expect("entry has F")),
                    v: op_json(c.v_op(i, j).expect("entry has V")),
                    d: c.d_h_op(i, j).map(op_json),
                    del: c.d_v_op(i, j).map(op_json),
                },
            );
        }
        ComplexJson {
            field: FieldJson::from_field(c.field()),
            n: c.n(),
            components,
            ops,
        }
    }
}

fn oracle_str(status: OracleStatus) -> &'static str {
    match status {
        OracleStatus::Agree => "agree",
        OracleStatus::Skipped => "skipped",
    }
}

pub fn render_json(req: &TableRequest, cells: &[TableCell], model: Option<&RComplex>) -> String {
    let table = TableJson {
        request: RequestJson {
            variety: &req.variety,
            p: req.p,
            f: req.f,
            n: req.n,
            i_min: req.i_min,
            i_max: req.i_max,
            r_min: req.r_min,
            r_max: req.r_max,
            mod_pm: req.mod_pm,
            oracle: req.oracle,
        },
        cells: cells
            .iter()
            .map(|c| CellJson {
                i: c.i,
                r: c.r,
                factors: c.group.factors(),
                limit: c.limit.as_deref(),
                oracle: c.oracle.map(oracle_str),
            })
            .collect(),
        model: model.map(ComplexJson::from_complex),
    };
    let mut out = serde_json::to_string_pretty(&table).expect("serializable table");
    out.push('\n');
    out
}

pub fn render_csv(req: &TableRequest, cells: &[TableCell]) -> String {
    let mut out = String::from("i,r,factors,limit,oracle\n");
    for c in cells {
        let factors = c
            .group
            .factors()
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(";");
        let limit = c.limit.as_deref().unwrap_or("");
        let oracle = c.oracle.map(oracle_str).unwrap_or("");
        out.push_str(&format!("{},{},{},{},{}\n", c.i, c.r, factors, limit, oracle));
    }
    let _ = req;
    out
}

pub fn render_text(req: &TableRequest, cells: &[TableCell]) -> String {
    let mode = match req.mod_pm {
        Some(m) => format!("H^i(X, Z/{}^{}(r))", req.p, m),
        None => String::from("H^i(X, Z_p(r))"),
    };
    let mut out = format!(
        "{} for {} over F_{} (f={}), Witt precision n={}\n",
        mode,
        req.variety,
        req.p.pow(req.f as u32),
        req.f,
        req.n
    );
    let mut headers = vec!["i", "r", "group"];
    if cells.iter().any(|c| c.limit.is_some()) {
        headers.push("limit");
    }
    if req.oracle {
        headers.push("oracle");
    }
    let rows: Vec<Vec<String>> = cells
        .iter()
        .map(|c| {
            let mut row = vec![c.i.to_string(), c.r.to_string(), c.group.to_string()];
            if headers.contains(&"limit") {
                row.push(c.limit.clone().unwrap_or_default());
            }
            if headers.contains(&"oracle") {
                row.push(c.oracle.map(oracle_str).unwrap_or("").to_string());
            }
            row
        })
        .collect();
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.len());
        }
    }
    let fmt_row = |cells: &[String]| -> String {
        cells
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{:<width$}", c, width = widths[k]))
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let header_cells: Vec<String> = headers.iter().map(|h| h.to_string()).collect();
    out.push_str(&fmt_row(&header_cells));
    out.push('\n');
    for row in &rows {
        out.push_str(&fmt_row(row));
        out.push('\n');
    }
    let nonzero = cells.iter().filter(|c| !c.group.is_trivial()).count();
    out.push_str(&format!("{nonzero} nonzero of {} cells\n", cells.len()));
    out
}
