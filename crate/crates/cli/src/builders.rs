//! Named QP builders shared by the command line and the HTTP service.

use serde::{Deserialize, Serialize};

use qpcat_core::constructions::{self, ConstructionError};
use qpcat_core::{Qp, Scalar};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuilderParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Scalar>,
    /// Parameters of the points beyond the third for `squid`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambdas: Vec<Scalar>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BuilderInfo {
    pub kind: &'static str,
    pub params: &'static [&'static str],
    pub description: &'static str,
}

pub const CATALOG: &[BuilderInfo] = &[
    BuilderInfo { kind: "five-vertex", params: &[], description: "five-vertex quiver with its cubic potential" },
    BuilderInfo { kind: "squid", params: &["weights", "lambdas"], description: "squid quiver with Keller's potential" },
    BuilderInfo { kind: "q2222", params: &["lambda"], description: "six-vertex quiver of weight type (2,2,2,2) with W_lambda" },
    BuilderInfo { kind: "ct", params: &["weights"], description: "quiver of the canonical tilting object for three weights, zero potential" },
    BuilderInfo { kind: "keller", params: &["lambda"], description: "Keller's QP of the tubular algebra of type (2,2,2,2)" },
];

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("unknown builder {0}")]
    UnknownKind(String),
    #[error("builder {0} needs parameter {1}")]
    Missing(&'static str, &'static str),
    #[error("builder {0} expects exactly three weights")]
    ThreeWeights(&'static str),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

pub fn build(kind: &str, p: &BuilderParams) -> Result<Qp, BuildError> {
    let lambda = |k: &'static str| p.lambda.clone().ok_or(BuildError::Missing(k, "lambda"));
    let weights = |k: &'static str| p.weights.clone().ok_or(BuildError::Missing(k, "weights"));
    Ok(match kind {
        "five-vertex" => constructions::five_vertex_qp(),
        "squid" => constructions::squid_qp(&weights("squid")?, &p.lambdas)?,
        "q2222" => constructions::q2222_qp(&lambda("q2222")?)?,
        "ct" => {
            let w = weights("ct")?;
            let arr: [u32; 3] = w.try_into().map_err(|_| BuildError::ThreeWeights("ct"))?;
            Qp::zero(constructions::canonical_ct_quiver(arr)?)
        }
        "keller" => constructions::keller_qp(&constructions::tubular_algebra(&lambda("keller")?)?)?,
        other => return Err(BuildError::UnknownKind(other.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_catalog_entry_builds() {
        let p = BuilderParams { weights: Some(vec![2, 3, 4]), lambda: Some(Scalar::from_int(2)), lambdas: vec![] };
        for b in CATALOG {
            build(b.kind, &p).unwrap();
        }
        assert!(matches!(build("q2222", &BuilderParams::default()), Err(BuildError::Missing(..))));
        assert!(matches!(build("nope", &p), Err(BuildError::UnknownKind(_))));
    }
}
