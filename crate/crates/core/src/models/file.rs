//! JSON model files.
//!
//! ```json
//! { "model": "jaynes_cummings", "epsilon": 10, "lambda": 0.19635, "alpha": 8, "tau": 1, "fock_dim": "auto" }
//! { "model": "generic", "dim_s": 2, "dim_e": 2, "h_s": [[[1,0],[0,0]],[[0,0],[0,0]]], ... }
//! ```
//!
//! Matrices are row-major arrays of rows, each entry a `[re, im]` pair.
//! Composite operators use the `S ⊗ E` ordering: row `s * dim_e + e`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::jc::{jc_model, FockDim, JcParams};
use super::Model;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::quantum::{DensityMatrix, ImplementationSet};

pub type MatrixSpec = Vec<Vec<[f64; 2]>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    JaynesCummings {
        epsilon: f64,
        lambda: f64,
        alpha: f64,
        tau: f64,
        #[serde(default)]
        fock_dim: FockDimSpec,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        allow_large_tail: bool,
    },
    Generic {
        dim_s: usize,
        dim_e: usize,
        h_s: MatrixSpec,
        h_e: MatrixSpec,
        h_se: MatrixSpec,
        sigma_e: MatrixSpec,
        u_target: MatrixSpec,
        tau: f64,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FockDimSpec {
    #[default]
    #[serde(with = "auto_word")]
    Auto,
    Fixed(usize),
}

mod auto_word {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("auto")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        match String::deserialize(d)?.as_str() {
            "auto" => Ok(()),
            other => Err(D::Error::custom(format!("expected \"auto\" or an integer, got {other:?}"))),
        }
    }
}

impl ModelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model specs always serialize")
    }

    pub fn jaynes_cummings(p: &JcParams) -> Self {
        ModelSpec::JaynesCummings {
            epsilon: p.epsilon,
            lambda: p.lambda,
            alpha: p.alpha,
            tau: p.tau,
            fock_dim: match p.fock_dim {
                FockDim::Auto => FockDimSpec::Auto,
                FockDim::Fixed(n) => FockDimSpec::Fixed(n),
            },
            allow_large_tail: p.allow_large_tail,
        }
    }

    /// Writes any model out in the generic matrix form.
    pub fn generic(model: &Model) -> Self {
        let sigma = model.imp().sigma_e().matrix();
        ModelSpec::Generic {
            dim_s: model.dim_s(),
            dim_e: model.dim_e(),
            h_s: to_spec(model.h_s()),
            h_e: to_spec(model.imp().h_e()),
            h_se: to_spec(model.imp().h_se()),
            sigma_e: to_spec(sigma),
            u_target: to_spec(model.u_target()),
            tau: model.imp().tau(),
        }
    }

    /// Builds and validates the model.
    pub fn build(&self) -> Result<Model> {
        match self {
            ModelSpec::JaynesCummings {
                epsilon,
                lambda,
                alpha,
                tau,
                fock_dim,
                allow_large_tail,
            } => jc_model(&JcParams {
                epsilon: *epsilon,
                lambda: *lambda,
                alpha: *alpha,
                tau: *tau,
                fock_dim: match fock_dim {
                    FockDimSpec::Auto => FockDim::Auto,
                    FockDimSpec::Fixed(n) => FockDim::Fixed(*n),
                },
                allow_large_tail: *allow_large_tail,
            }),
            ModelSpec::Generic {
                dim_s,
                dim_e,
                h_s,
                h_e,
                h_se,
                sigma_e,
                u_target,
                tau,
            } => {
                let (ds, de) = (*dim_s, *dim_e);
                if ds == 0 || de == 0 {
                    return Err(Error::invalid("dim_s and dim_e are positive", format!("{ds}, {de}")));
                }
                let h_s = from_spec("h_s", h_s, ds)?;
                let h_e = from_spec("h_e", h_e, de)?;
                let h_se = from_spec("h_se", h_se, ds * de)?;
                let sigma = from_spec("sigma_e", sigma_e, de)?;
                let u = from_spec("u_target", u_target, ds)?;
                let sigma = DensityMatrix::new(sigma)
                    .map_err(|e| Error::invalid("sigma_e is a density matrix", e.to_string()))?;
                let imp = ImplementationSet::new(h_e, sigma, h_se, *tau)?;
                Model::new(h_s, imp, u)
            }
        }
    }
}

fn to_spec(m: &ComplexMatrix) -> MatrixSpec {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn from_spec(name: &str, rows: &MatrixSpec, dim: usize) -> Result<ComplexMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        let shape = format!("{} rows of lengths {:?}", rows.len(), rows.iter().map(Vec::len).collect::<Vec<_>>());
        return Err(Error::invalid(format!("{name} is {dim}x{dim}"), shape));
    }
    let data: Vec<C64> = rows.iter().flatten().map(|&[re, im]| C64::new(re, im)).collect();
    ComplexMatrix::new(dim, dim, data).map_err(|e| Error::invalid(format!("{name} entries are finite"), e.to_string()))
}

/// Reads, parses and validates a model file.
pub fn load_model(path: impl AsRef<Path>) -> Result<Model> {
    let text = std::fs::read_to_string(path)?;
    ModelSpec::from_json(&text)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fock_dim_forms() {
        let auto = ModelSpec::from_json(
            r#"{"model":"jaynes_cummings","epsilon":10,"lambda":0.5,"alpha":2,"tau":1,"fock_dim":"auto"}"#,
        )
        .unwrap();
        let fixed = ModelSpec::from_json(
            r#"{"model":"jaynes_cummings","epsilon":10,"lambda":0.5,"alpha":2,"tau":1,"fock_dim":40}"#,
        )
        .unwrap();
        assert!(matches!(auto, ModelSpec::JaynesCummings { fock_dim: FockDimSpec::Auto, .. }));
        assert!(matches!(fixed, ModelSpec::JaynesCummings { fock_dim: FockDimSpec::Fixed(40), .. }));
        assert_eq!(ModelSpec::from_json(&fixed.to_json()).unwrap(), fixed);
        assert_eq!(ModelSpec::from_json(&auto.to_json()).unwrap(), auto);
        assert!(ModelSpec::from_json(
            r#"{"model":"jaynes_cummings","epsilon":10,"lambda":0.5,"alpha":2,"tau":1,"fock_dim":"big"}"#
        )
        .is_err());
    }

    #[test]
    fn generic_round_trip() {
        let model = jc_model(&JcParams {
            fock_dim: FockDim::Fixed(12),
            ..JcParams::flip(1.0, 1.0, 1.0)
        })
        .unwrap();
        let spec = ModelSpec::generic(&model);
        let back = ModelSpec::from_json(&spec.to_json()).unwrap().build().unwrap();
        assert_eq!(back.h_s(), model.h_s());
        assert_eq!(back.imp().h_se(), model.imp().h_se());
    }

    #[test]
    fn non_hermitian_h_e_names_the_invariant() {
        let z = [0.0, 0.0];
        let one = [1.0, 0.0];
        let spec = ModelSpec::Generic {
            dim_s: 1,
            dim_e: 2,
            h_s: vec![vec![z]],
            h_e: vec![vec![z, one], vec![z, z]],
            h_se: vec![vec![z, z], vec![z, z]],
            sigma_e: vec![vec![one, z], vec![z, z]],
            u_target: vec![vec![one]],
            tau: 1.0,
        };
        let err = spec.build().unwrap_err();
        assert!(matches!(err, Error::Validation { .. }));
        assert!(err.to_string().contains("H_E is Hermitian"), "{err}");
    }
}
