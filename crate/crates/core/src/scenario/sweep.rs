use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::config::{parse_scalar, set_path, ScenarioConfig};
use super::run::{run, run_in_memory, CheckResult};
use crate::error::{Error, Result};

/// One swept key with its values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepParam {
    pub key: String,
    pub values: Vec<Value>,
}

impl SweepParam {
    /// Parses `key=v1,v2,...`; each value is JSON if it parses, else a string.
    pub fn parse(spec: &str) -> Result<Self> {
        let (key, vals) = spec
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("parameter '{spec}' is not key=v1,v2,...")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Config(format!("parameter '{spec}' has an empty key")));
        }
        let values = vals.split(',').map(str::trim).filter(|v| !v.is_empty()).map(parse_scalar).collect();
        Ok(Self { key: key.to_string(), values })
    }
}

/// Cartesian product of the parameters, or element-wise pairing when `zip` is set.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SweepGrid {
    pub params: Vec<SweepParam>,
    pub zip: bool,
}

impl SweepGrid {
    pub fn new(params: Vec<SweepParam>, zip: bool) -> Self {
        Self { params, zip }
    }

    pub fn points(&self) -> Result<Vec<Vec<(String, Value)>>> {
        if self.params.is_empty() || self.params.iter().any(|p| p.values.is_empty()) {
            return Ok(Vec::new());
        }
        if self.zip {
            let n = self.params[0].values.len();
            if let Some(p) = self.params.iter().find(|p| p.values.len() != n) {
                return Err(Error::Config(format!("zipped parameter '{}' has {} values, expected {n}", p.key, p.values.len())));
            }
            return Ok((0..n)
                .map(|i| self.params.iter().map(|p| (p.key.clone(), p.values[i].clone())).collect())
                .collect());
        }
        let mut out: Vec<Vec<(String, Value)>> = vec![Vec::new()];
        for p in &self.params {
            out = out
                .into_iter()
                .flat_map(|pt| {
                    p.values.iter().map(move |v| {
                        let mut q = pt.clone();
                        q.push((p.key.clone(), v.clone()));
                        q
                    })
                })
                .collect();
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub params: Vec<(String, Value)>,
    /// `completed`, `gradient_cap`, `aborted`, or `failed` when the point did not run.
    pub status: String,
    pub passed: bool,
    pub error: Option<String>,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SweepTable {
    pub keys: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.passed).count()
    }

    /// Check labels in first-seen order across all rows.
    pub fn check_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = Vec::new();
        for r in &self.rows {
            for c in &r.checks {
                if !labels.contains(&c.check) {
                    labels.push(c.check.clone());
                }
            }
        }
        labels
    }

    /// One row per point: the swept values, status, then value and verdict per check.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        let labels = self.check_labels();
        let mut head = vec!["index".to_string()];
        head.extend(self.keys.iter().cloned());
        head.extend(["status".into(), "passed".into()]);
        for l in &labels {
            head.push(format!("{l}.value"));
            head.push(format!("{l}.passed"));
        }
        head.push("error".into());
        writeln!(w, "{}", head.join(","))?;
        for r in &self.rows {
            let mut cells = vec![r.index.to_string()];
            for k in &self.keys {
                let v = r.params.iter().find(|(pk, _)| pk == k).map(|(_, v)| v);
                cells.push(match v {
                    Some(Value::String(s)) => quote(s),
                    Some(v) => quote(&v.to_string()),
                    None => String::new(),
                });
            }
            cells.push(r.status.clone());
            cells.push(r.passed.to_string());
            for l in &labels {
                let c = r.checks.iter().find(|c| &c.check == l);
                cells.push(c.and_then(|c| c.value).map(|v| format!("{v:.17e}")).unwrap_or_default());
                cells.push(c.and_then(|c| c.passed).map(|p| p.to_string()).unwrap_or_default());
            }
            cells.push(r.error.as_deref().map(quote).unwrap_or_default());
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn point_config(template: &ScenarioConfig, point: &[(String, Value)]) -> Result<ScenarioConfig> {
    let mut v = template.to_value()?;
    for (k, val) in point {
        set_path(&mut v, k, val.clone())?;
    }
    ScenarioConfig::from_value(v)
}

/// Runs every point of `grid` on `jobs` threads. Failed points are recorded
/// and the sweep carries on. With `out_dir`, point `i` writes into
/// `out_dir/point_{i:04}` and the table goes to `out_dir/sweep.csv`.
pub fn sweep(template: &ScenarioConfig, grid: &SweepGrid, jobs: usize, out_dir: Option<&Path>) -> Result<SweepTable> {
    let points = grid.points()?;
    let keys = grid.params.iter().map(|p| p.key.clone()).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(index, point)| {
                let outcome = point_config(template, point).and_then(|cfg| match out_dir {
                    Some(dir) => run(&cfg, &dir.join(format!("point_{index:04}"))),
                    None => run_in_memory(&cfg).map(|(r, _)| r),
                });
                match outcome {
                    Ok(r) => SweepRow {
                        index,
                        params: point.clone(),
                        status: r.status.label().to_string(),
                        passed: r.passed,
                        error: match &r.status {
                            super::run::RunStatus::Aborted { reason, .. } => Some(reason.clone()),
                            _ => None,
                        },
                        checks: r.checks,
                    },
                    Err(e) => {
                        log::warn!("sweep point {index} failed: {e}");
                        SweepRow {
                            index,
                            params: point.clone(),
                            status: "failed".into(),
                            passed: false,
                            error: Some(e.to_string()),
                            checks: Vec::new(),
                        }
                    }
                }
            })
            .collect()
    });
    let table = SweepTable { keys, rows };
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        table.write_csv(std::io::BufWriter::new(std::fs::File::create(dir.join("sweep.csv"))?))?;
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn grid(specs: &[&str], zip: bool) -> SweepGrid {
        SweepGrid::new(specs.iter().map(|s| SweepParam::parse(s).unwrap()).collect(), zip)
    }

    #[test]
    fn product_and_zip() {
        let g = grid(&["a=1,2", "b=x,y,z"], false);
        let pts = g.points().unwrap();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[1], vec![("a".to_string(), json!(1)), ("b".to_string(), json!("y"))]);
        let z = grid(&["a=1,2", "b=3,4"], true).points().unwrap();
        assert_eq!(z.len(), 2);
        assert_eq!(z[1][1].1, json!(4));
        assert!(grid(&["a=1,2", "b=3"], true).points().is_err());
        assert!(SweepGrid::default().points().unwrap().is_empty());
        assert!(SweepParam::parse("novalue").is_err());
    }

    #[test]
    fn csv_quotes_errors() {
        let t = SweepTable {
            keys: vec!["k".into()],
            rows: vec![SweepRow {
                index: 0,
                params: vec![("k".into(), json!(2))],
                status: "failed".into(),
                passed: false,
                error: Some("bad, \"worse\"".into()),
                checks: Vec::new(),
            }],
        };
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "0,2,failed,false,\"bad, \"\"worse\"\"\"");
    }
}
