//! Flat key-value config files with section headers: one `[case NAME]`
//! section per verification case plus optional `[quadrature]` and
//! `[output]` sections. Values for s, p, q accept either a number or a
//! `lo:hi:step` grid that the runner expands.

use anyhow::{anyhow, bail, Context, Result};
use std::collections::BTreeMap;

use hardy_verify::inequalities::Theorem;
use hardy_verify::weights::{RadialWeight, WeightSpec};
use hardy_verify::{QuadratureConfig, SpaceDescriptor};

#[derive(Debug, Clone)]
pub struct GridValue {
    pub values: Vec<f64>,
}

impl GridValue {
    fn parse(raw: &str, line: usize, key: &str) -> Result<Self> {
        if let Some((lo, rest)) = raw.split_once(':') {
            let (hi, step) = rest
                .split_once(':')
                .ok_or_else(|| anyhow!("line {line}: key '{key}': grid needs lo:hi:step"))?;
            let lo: f64 = lo.trim().parse().context(format!("line {line}: key '{key}'"))?;
            let hi: f64 = hi.trim().parse().context(format!("line {line}: key '{key}'"))?;
            let step: f64 = step.trim().parse().context(format!("line {line}: key '{key}'"))?;
            if !(step > 0.0) || hi < lo {
                bail!("line {line}: key '{key}': need lo <= hi and step > 0");
            }
            let mut values = Vec::new();
            let mut i = 0u32;
            loop {
                let v = lo + i as f64 * step;
                if v > hi + 1e-12 {
                    break;
                }
                // snap to 12 decimals so 0.7:0.9:0.1 yields 0.8 rather
                // than 0.7999999999999999 in ids and tables
                let snapped: f64 = format!("{v:.12}").parse().expect("fixed decimal");
                values.push(snapped);
                i += 1;
            }
            Ok(GridValue { values })
        } else {
            Ok(GridValue {
                values: vec![raw
                    .trim()
                    .parse()
                    .context(format!("line {line}: key '{key}'"))?],
            })
        }
    }

}

/// One `[case ...]` section, grids not yet expanded.
#[derive(Debug, Clone)]
pub struct CaseSpec {
    pub id: String,
    pub theorem: Theorem,
    pub space: String,
    pub s: GridValue,
    pub p: GridValue,
    pub q: Option<GridValue>,
    pub function: String,
    pub weights: String,
    pub weight_g: Option<String>,
    pub weight_h: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct OutputSpec {
    pub json: Option<String>,
    pub csv: Option<String>,
}

#[derive(Debug)]
pub struct RunConfig {
    pub cases: Vec<CaseSpec>,
    pub quadrature: QuadratureConfig,
    pub output: OutputSpec,
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cases: Vec<(String, usize, BTreeMap<String, (String, usize)>)> = Vec::new();
    let mut quad: BTreeMap<String, (String, usize)> = BTreeMap::new();
    let mut output: BTreeMap<String, (String, usize)> = BTreeMap::new();
    let mut section: Option<String> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.split_once('#') {
            Some((before, _)) => before.trim(),
            None => raw.trim(),
        };
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            if !line.ends_with(']') {
                bail!("line {line_no}: unterminated section header '{raw}'");
            }
            let name = line[1..line.len() - 1].trim();
            if name == "quadrature" || name == "output" {
                section = Some(name.to_string());
            } else if let Some(case_name) = name.strip_prefix("case") {
                let case_name = case_name.trim();
                if case_name.is_empty() {
                    bail!("line {line_no}: case sections need a name: [case NAME]");
                }
                cases.push((case_name.to_string(), line_no, BTreeMap::new()));
                section = Some("case".into());
            } else {
                bail!("line {line_no}: unknown section '[{name}]' (expected [case NAME], [quadrature] or [output])");
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("line {line_no}: expected 'key = value', got '{raw}'"))?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        match section.as_deref() {
            Some("quadrature") => {
                quad.insert(key, (value, line_no));
            }
            Some("output") => {
                output.insert(key, (value, line_no));
            }
            Some("case") => {
                cases
                    .last_mut()
                    .expect("inside a case section")
                    .2
                    .insert(key, (value, line_no));
            }
            _ => bail!("line {line_no}: key '{key}' outside any section"),
        }
    }

    if cases.is_empty() {
        bail!("config has no [case ...] sections");
    }

    let mut parsed_cases = Vec::new();
    for (name, sect_line, keys) in &cases {
        let get = |k: &str| -> Option<(String, usize)> { keys.get(k).cloned() };
        let require = |k: &str| -> Result<(String, usize)> {
            get(k).ok_or_else(|| {
                anyhow!("case '{name}' (line {sect_line}): missing required key '{k}'")
            })
        };
        let (theorem_raw, theorem_line) = require("theorem")?;
        let theorem = Theorem::parse(&theorem_raw)
            .map_err(|e| anyhow!("line {theorem_line}: {e}"))?;
        let (space_raw, space_line) = require("space")?;
        SpaceDescriptor::from_config_str(&space_raw)
            .map_err(|e| anyhow!("line {space_line}: {e}"))?;
        let (s_raw, s_line) = require("s")?;
        let (p_raw, p_line) = require("p")?;
        let q = match get("q") {
            Some((q_raw, q_line)) => Some(GridValue::parse(&q_raw, q_line, "q")?),
            None => None,
        };
        let function = get("u").map(|v| v.0).unwrap_or_else(|| "gaussian(1)".into());
        hardy_verify::corpus::builtin(&function)
            .map_err(|e| anyhow!("case '{name}': {e}"))?;
        let weights = get("weights").map(|v| v.0).unwrap_or_else(|| "unit".into());
        WeightSpec::from_family(&weights).map_err(|e| anyhow!("case '{name}': {e}"))?;
        for k in ["weight_g", "weight_h"] {
            if let Some((v, l)) = get(k) {
                RadialWeight::from_family(&v).map_err(|e| anyhow!("line {l}: {e}"))?;
            }
        }
        // reject unknown keys so typos are caught, naming the line
        for (k, (_, l)) in keys {
            if ![
                "theorem", "space", "s", "p", "q", "u", "weights", "weight_g", "weight_h",
            ]
            .contains(&k.as_str())
            {
                bail!("line {l}: unknown case key '{k}'");
            }
        }
        parsed_cases.push(CaseSpec {
            id: name.clone(),
            theorem,
            space: space_raw,
            s: GridValue::parse(&s_raw, s_line, "s")?,
            p: GridValue::parse(&p_raw, p_line, "p")?,
            q,
            function,
            weights,
            weight_g: get("weight_g").map(|v| v.0),
            weight_h: get("weight_h").map(|v| v.0),
        });
    }

    let mut qc = QuadratureConfig::default();
    for (key, (value, line_no)) in &quad {
        let ctx = format!("line {line_no}: quadrature key '{key}'");
        match key.as_str() {
            "radius" => {
                let r: f64 = value.parse().context(ctx)?;
                qc = qc.with_radius(r);
            }
            "samples" => qc.mc_samples = value.parse().context(ctx)?,
            "seed" => qc.seed = value.parse().context(ctx)?,
            "radial_nodes" => qc.radial_nodes = value.parse().context(ctx)?,
            "sphere_nodes" => qc.sphere_nodes = value.parse().context(ctx)?,
            "diagonal_split" => qc.diagonal_split = value.parse().context(ctx)?,
            "rel_tolerance" => qc.rel_tolerance = value.parse().context(ctx)?,
            _ => bail!("line {line_no}: unknown quadrature key '{key}'"),
        }
    }
    qc.validate()
        .map_err(|e| anyhow!("quadrature section: {e}"))?;

    let mut out = OutputSpec::default();
    for (key, (value, line_no)) in &output {
        match key.as_str() {
            "json" => out.json = Some(value.clone()),
            "csv" => out.csv = Some(value.clone()),
            _ => bail!("line {line_no}: unknown output key '{key}'"),
        }
    }

    Ok(RunConfig {
        cases: parsed_cases,
        quadrature: qc,
        output: out,
    })
}

/// Fully expanded single run: one (s, p, q) point of one case.
#[derive(Debug, Clone)]
pub struct CaseInstance {
    pub id: String,
    pub spec: CaseSpec,
    pub s: f64,
    pub p: f64,
    pub q: Option<f64>,
}

pub fn expand(cases: &[CaseSpec]) -> Result<Vec<CaseInstance>> {
    let mut out = Vec::new();
    for spec in cases {
        let qs: Vec<Option<f64>> = match &spec.q {
            Some(grid) => grid.values.iter().copied().map(Some).collect(),
            None => vec![None],
        };
        let single = spec.s.values.len() == 1 && spec.p.values.len() == 1 && qs.len() == 1;
        for &s in &spec.s.values {
            for &p in &spec.p.values {
                for &q in &qs {
                    let id = if single {
                        spec.id.clone()
                    } else {
                        match q {
                            Some(q) => format!("{}[s={s},p={p},q={q}]", spec.id),
                            None => format!("{}[s={s},p={p}]", spec.id),
                        }
                    };
                    out.push(CaseInstance {
                        id,
                        spec: spec.clone(),
                        s,
                        p,
                        q,
                    });
                }
            }
        }
    }
    Ok(out)
}

impl GridValue {
    /// Command-line variant of [`parse`](Self::parse) without a config line.
    pub fn parse_cli(raw: &str, key: &str) -> Result<Self> {
        Self::parse(raw, 0, key).map_err(|e| {
            anyhow!("--{key} '{raw}': {}", e.to_string().replace("line 0: ", ""))
        })
    }
}
