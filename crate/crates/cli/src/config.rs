//! JSON configuration files: exact rationals as "num/den" strings, row-major matrices.

use std::sync::Arc;

use adhm_core::adhm::{AdhmConfig, AdhmParams, GroupElement};
use adhm_core::monad::ScanPlan;
use adhm_core::rational::{format_rational, parse_rational};
use adhm_core::sections::BlowupPoints;
use adhm_core::{Error, Matrix, Result};
use serde::{Deserialize, Serialize};

pub type RawMatrix = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub r: usize,
    pub a: Vec<i64>,
    pub k: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlocksFile {
    pub a00: RawMatrix,
    pub a0i: Vec<RawMatrix>,
    pub ai0: Vec<RawMatrix>,
    pub aii: Vec<RawMatrix>,
    #[serde(rename = "aA00")]
    pub a_a00: [RawMatrix; 2],
    pub c: RawMatrix,
    pub d: RawMatrix,
    #[serde(rename = "cA", default, skip_serializing_if = "Option::is_none")]
    pub c_a: Option<[Vec<RawMatrix>; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanFile {
    #[serde(default)]
    pub generic_samples: Option<usize>,
    #[serde(default)]
    pub per_divisor_samples: Option<usize>,
    #[serde(default)]
    pub exact_below_dim: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub params: ParamsFile,
    pub points: Vec<[String; 2]>,
    pub blocks: BlocksFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub g00: RawMatrix,
    pub g0i: Vec<RawMatrix>,
    pub h00: RawMatrix,
    pub hii: Vec<RawMatrix>,
}

pub fn matrix_to_raw(m: &Matrix) -> RawMatrix {
    m.to_rows().iter().map(|row| row.iter().map(format_rational).collect()).collect()
}

/// Parses a matrix of the given shape; a matrix with no rows is written `[]`.
pub fn raw_to_matrix(raw: &RawMatrix, rows: usize, cols: usize, name: &str) -> Result<Matrix> {
    if raw.len() != rows {
        return Err(Error::Dimension(format!("{name}: {} rows, expected {rows}", raw.len())));
    }
    let mut entries = Vec::with_capacity(rows);
    for (i, row) in raw.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Dimension(format!("{name}: row {i} has {} entries, expected {cols}", row.len())));
        }
        entries.push(row.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?);
    }
    Matrix::from_rows(rows, cols, entries)
}

fn blocks_len<T>(v: &[T], n: usize, name: &str) -> Result<()> {
    if v.len() != n {
        return Err(Error::Dimension(format!("{name} has {} blocks, expected {n}", v.len())));
    }
    Ok(())
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("config serializes");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn from_config(cfg: &AdhmConfig, seed: Option<u64>) -> ConfigFile {
        let raw_vec = |v: &[Matrix]| v.iter().map(matrix_to_raw).collect::<Vec<_>>();
        ConfigFile {
            params: ParamsFile { r: cfg.params.r, a: cfg.params.a.clone(), k: cfg.params.k },
            points: cfg.points.all().iter().map(|p| [format_rational(&p[0]), format_rational(&p[1])]).collect(),
            blocks: BlocksFile {
                a00: matrix_to_raw(&cfg.a00),
                a0i: raw_vec(&cfg.a0i),
                ai0: raw_vec(&cfg.ai0),
                aii: raw_vec(&cfg.aii),
                a_a00: [matrix_to_raw(&cfg.a_a00[0]), matrix_to_raw(&cfg.a_a00[1])],
                c: matrix_to_raw(&cfg.c),
                d: matrix_to_raw(&cfg.d),
                c_a: cfg.c_a.as_ref().map(|ca| [raw_vec(&ca[0]), raw_vec(&ca[1])]),
            },
            seed,
            scan: None,
        }
    }

    pub fn to_config(&self) -> Result<AdhmConfig> {
        let params = AdhmParams::new(self.params.r, self.params.a.clone(), self.params.k);
        let n = params.n();
        let points = self
            .points
            .iter()
            .map(|[x, y]| Ok([parse_rational(x)?, parse_rational(y)?]))
            .collect::<Result<Vec<_>>>()?;
        let points = Arc::new(BlowupPoints::new(points)?);
        let mut cfg = AdhmConfig::zeros(params, points)?;
        let (k, l, r) = (cfg.dims.dim_k.clone(), cfg.dims.dim_l.clone(), cfg.r());
        let b = &self.blocks;
        cfg.a00 = raw_to_matrix(&b.a00, l[0], k[0], "a00")?;
        blocks_len(&b.a0i, n, "a0i")?;
        blocks_len(&b.ai0, n, "ai0")?;
        blocks_len(&b.aii, n, "aii")?;
        for i in 1..=n {
            cfg.a0i[i - 1] = raw_to_matrix(&b.a0i[i - 1], l[0], k[i], &format!("a0i[{}]", i - 1))?;
            cfg.ai0[i - 1] = raw_to_matrix(&b.ai0[i - 1], l[i], k[0], &format!("ai0[{}]", i - 1))?;
            cfg.aii[i - 1] = raw_to_matrix(&b.aii[i - 1], l[i], k[i], &format!("aii[{}]", i - 1))?;
        }
        cfg.a_a00 = [
            raw_to_matrix(&b.a_a00[0], l[0], k[0], "aA00[0]")?,
            raw_to_matrix(&b.a_a00[1], l[0], k[0], "aA00[1]")?,
        ];
        cfg.c = raw_to_matrix(&b.c, r, k[0], "c")?;
        cfg.d = raw_to_matrix(&b.d, l[0], r, "d")?;
        if let Some(ca) = &b.c_a {
            let mut parsed: [Vec<Matrix>; 2] = [Vec::new(), Vec::new()];
            for x in 0..2 {
                blocks_len(&ca[x], n + 1, "cA")?;
                for (i, m) in ca[x].iter().enumerate() {
                    parsed[x].push(raw_to_matrix(m, r, k[i], &format!("cA[{x}][{i}]"))?);
                }
            }
            cfg.c_a = Some(parsed);
        }
        cfg.check_shapes()?;
        Ok(cfg)
    }

    pub fn scan_plan(&self, seed: u64) -> ScanPlan {
        let mut plan = ScanPlan { seed, ..ScanPlan::default() };
        if let Some(s) = &self.scan {
            plan.generic_samples = s.generic_samples.unwrap_or(plan.generic_samples);
            plan.per_divisor_samples = s.per_divisor_samples.unwrap_or(plan.per_divisor_samples);
            plan.exact_below_dim = s.exact_below_dim.unwrap_or(plan.exact_below_dim);
        }
        plan
    }
}

impl WitnessFile {
    pub fn parse(text: &str) -> Result<WitnessFile> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_element(&self, cfg: &AdhmConfig) -> Result<GroupElement> {
        let (k, l, n) = (&cfg.dims.dim_k, &cfg.dims.dim_l, cfg.n());
        blocks_len(&self.g0i, n, "g0i")?;
        blocks_len(&self.hii, n, "hii")?;
        Ok(GroupElement {
            g00: raw_to_matrix(&self.g00, l[0], l[0], "g00")?,
            g0i: (1..=n)
                .map(|i| raw_to_matrix(&self.g0i[i - 1], l[0], l[i], &format!("g0i[{}]", i - 1)))
                .collect::<Result<_>>()?,
            h00: raw_to_matrix(&self.h00, k[0], k[0], "h00")?,
            hii: (1..=n)
                .map(|i| raw_to_matrix(&self.hii[i - 1], k[i], k[i], &format!("hii[{}]", i - 1)))
                .collect::<Result<_>>()?,
        })
    }
}
