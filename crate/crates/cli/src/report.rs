use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Row {
    pub label: String,
    pub inputs: BTreeMap<String, Value>,
    pub value: f64,
    pub oracle: Option<f64>,
    pub abs_error: Option<f64>,
    pub rel_error: Option<f64>,
    pub tail_bound: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, f64>,
}

impl Row {
    pub fn new(label: impl Into<String>, value: f64) -> Self {
        Self {
            label: label.into(),
            inputs: BTreeMap::new(),
            value,
            oracle: None,
            abs_error: None,
            rel_error: None,
            tail_bound: None,
            extras: BTreeMap::new(),
        }
    }

    pub fn input(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.inputs.insert(key.into(), v.into());
        self
    }

    /// Sets the oracle and the absolute and relative errors against it.
    pub fn oracle(self, oracle: f64) -> Self {
        let err = (self.value - oracle).abs();
        self.oracle_with_error(oracle, err)
    }

    pub fn oracle_with_error(mut self, oracle: f64, abs_error: f64) -> Self {
        self.oracle = Some(oracle);
        self.abs_error = Some(abs_error);
        self.rel_error = Some(if oracle != 0.0 { abs_error / oracle.abs() } else { abs_error });
        self
    }

    pub fn tail(mut self, bound: f64) -> Self {
        self.tail_bound = Some(bound);
        self
    }

    pub fn extra(mut self, key: &str, v: f64) -> Self {
        self.extras.insert(key.into(), v);
        self
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub rows: Vec<Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_slope: Option<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub method_slopes: BTreeMap<String, f64>,
    pub runtime_ms: f64,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            parameters: BTreeMap::new(),
            rows: Vec::new(),
            fitted_slope: None,
            method_slopes: BTreeMap::new(),
            runtime_ms: 0.0,
        }
    }

    pub fn param(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.parameters.insert(key.into(), v.into());
        self
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)
            }
            Format::Csv => self.write_csv(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let inputs: BTreeSet<&String> = self.rows.iter().flat_map(|r| r.inputs.keys()).collect();
        let extras: BTreeSet<&String> = self.rows.iter().flat_map(|r| r.extras.keys()).collect();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["label".to_string()];
        header.extend(inputs.iter().map(|k| k.to_string()));
        header.extend(["value", "oracle", "abs_error", "rel_error", "tail_bound"].map(String::from));
        header.extend(extras.iter().map(|k| k.to_string()));
        w.write_record(&header)?;
        let opt = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
        for r in &self.rows {
            let mut rec = vec![r.label.clone()];
            for k in &inputs {
                rec.push(match r.inputs.get(*k) {
                    Some(Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                    None => String::new(),
                });
            }
            rec.push(format!("{:?}", r.value));
            rec.extend([r.oracle, r.abs_error, r.rel_error, r.tail_bound].map(opt));
            for k in &extras {
                rec.push(opt(r.extras.get(*k).copied()));
            }
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        out.write_all(&bytes)?;
        if let Some(s) = self.fitted_slope {
            writeln!(out, "# fitted_slope,{s}")?;
        }
        for (m, s) in &self.method_slopes {
            writeln!(out, "# slope[{m}],{s}")?;
        }
        writeln!(out, "# runtime_ms,{}", self.runtime_ms)
    }
}
