//! JSON state files.
//!
//! ```json
//! {"dims": [m, n], "re": [[...], ...], "im": [[...], ...]}
//! ```
//!
//! `re` and `im` are `(m*n) x (m*n)` with composite index `i*n + j` for
//! `|ij>`. Floats are written in shortest round-trip form, so a state
//! survives a write/read cycle bit for bit.

use std::fs;
use std::path::Path;

use cohcorr_core::{ComplexMatrix, DensityMatrix, Dims, C64};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: [usize; 2],
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn from_matrix(m: &ComplexMatrix, dims: Dims) -> Self {
        let n = m.rows();
        let part = |f: fn(&C64) -> f64| (0..n).map(|i| (0..n).map(|j| f(&m[(i, j)])).collect()).collect();
        StateFile {
            dims: [dims.a, dims.b],
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }

    pub fn from_state(rho: &DensityMatrix) -> Self {
        Self::from_matrix(rho.matrix(), rho.dims())
    }

    /// Checks shape and finiteness and assembles the raw matrix. Physical
    /// validity is left to [`StateFile::into_state`].
    pub fn into_matrix(self) -> Result<(ComplexMatrix, Dims), CliError> {
        let dims = Dims::new(self.dims[0], self.dims[1])?;
        let n = dims.total();
        for (name, part) in [("re", &self.re), ("im", &self.im)] {
            if part.len() != n {
                return Err(CliError::Format(format!(
                    "shape mismatch: \"{name}\" has {} rows, dims {dims} need {n}",
                    part.len()
                )));
            }
            if let Some((i, row)) = part.iter().enumerate().find(|(_, r)| r.len() != n) {
                return Err(CliError::Format(format!(
                    "shape mismatch: \"{name}\" row {i} has {} entries, dims {dims} need {n}",
                    row.len()
                )));
            }
        }
        let mut data = Vec::with_capacity(n * n);
        for (re_row, im_row) in self.re.iter().zip(&self.im) {
            data.extend(re_row.iter().zip(im_row).map(|(&re, &im)| C64::new(re, im)));
        }
        // Rejects non-finite entries.
        Ok((ComplexMatrix::new(n, n, data)?, dims))
    }

    pub fn into_state(self) -> Result<DensityMatrix, CliError> {
        let (m, dims) = self.into_matrix()?;
        Ok(DensityMatrix::validate(m, dims)?)
    }
}

pub fn parse_state(text: &str) -> Result<DensityMatrix, CliError> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| CliError::Format(e.to_string()))?;
    file.into_state()
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    let mut s = serde_json::to_string(&StateFile::from_state(rho)).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn read_state(path: &Path) -> Result<DensityMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_state(&text)
}

pub fn write_state(rho: &DensityMatrix, path: &Path) -> Result<(), CliError> {
    fs::write(path, state_to_json(rho)).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use cohcorr_core::random;

    #[test]
    fn round_trip_is_bit_exact() {
        for seed in 0..20 {
            let rho = random::random_mixed(Dims::new(2, 3).unwrap(), 3, seed).unwrap();
            let back = parse_state(&state_to_json(&rho)).unwrap();
            assert_eq!(back.dims(), rho.dims());
            assert_eq!(back.matrix().as_slice(), rho.matrix().as_slice());
        }
    }

    proptest::proptest! {
        #[test]
        fn json_round_trip(a in 1usize..4, b in 1usize..4, seed in proptest::prelude::any::<u64>()) {
            let dims = Dims::new(a, b).unwrap();
            let rho = random::random_mixed(dims, dims.total(), seed).unwrap();
            let back = parse_state(&state_to_json(&rho)).unwrap();
            proptest::prop_assert_eq!(back.matrix().as_slice(), rho.matrix().as_slice());
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        let err = parse_state(r#"{"dims":[2,2],"re":[[1]],"im":[[0]]}"#).unwrap_err();
        assert!(err.to_string().contains("shape"), "{err}");
        let err = parse_state(
            r#"{"dims":[1,2],"re":[[0.5,0],[0,0.5]],"im":[[0,0],[0]]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("shape"), "{err}");
        assert!(parse_state(r#"{"dims":[0,2],"re":[],"im":[]}"#).is_err());
    }

    #[test]
    fn rejects_non_finite_and_unphysical() {
        // JSON has no NaN literal; out-of-range numbers are refused by the parser.
        assert!(parse_state(r#"{"dims":[1,1],"re":[[NaN]],"im":[[0]]}"#).is_err());
        assert!(parse_state(r#"{"dims":[1,1],"re":[[1e400]],"im":[[0]]}"#).is_err());
        let err = parse_state(r#"{"dims":[1,2],"re":[[0.5,0],[0,0.6]],"im":[[0,0],[0,0]]}"#).unwrap_err();
        assert!(err.to_string().contains("trace"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse_state(r#"{"dims":[1,1],"re":[[1]],"im":[[0]],"extra":1}"#).is_err());
    }
}
