//! JSON interchange. One matrix format is shared by every producer and
//! consumer: {"n": …, "entries": [[[re, im], …], …]} row-major; real
//! matrices use plain numbers instead of pairs. Model files carry a
//! "model" tag. Floats are printed with 17 significant digits so equal
//! values serialize to equal bytes.

use serde::{Deserialize, Serialize};

use crate::combinatorics::LemmaReport;
use crate::degree::DegreeReport;
use crate::error::{Error, Result};
use crate::linalg::{Complex, ComplexMatrix, RealMatrix};
use crate::models::{AntiSympInvolution, SymmetricUnitary};
use crate::search::SearchOutcome;

struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serialize with fixed float formatting: 17 significant digits in
/// scientific notation, so output bytes are a pure function of the value.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(out).expect("serializer emits UTF-8"))
}

/// A complex square matrix on the wire.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self { n, entries }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.n {
            return Err(Error::DimensionMismatch(self.entries.len(), self.n));
        }
        let mut flat = Vec::with_capacity(self.n * self.n);
        for row in &self.entries {
            if row.len() != self.n {
                return Err(Error::DimensionMismatch(row.len(), self.n));
            }
            flat.extend(row.iter().map(|&[re, im]| Complex::new(re, im)));
        }
        ComplexMatrix::from_entries(self.n, flat)
    }
}

/// A tagged point of the Grassmannian on disk, in either model. The
/// involution entries are the real 2n×2n matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "model")]
pub enum ModelFile {
    #[serde(rename = "symmetric_unitary")]
    SymmetricUnitary {
        n: usize,
        entries: Vec<Vec<[f64; 2]>>,
    },
    #[serde(rename = "involution")]
    Involution { n: usize, entries: Vec<Vec<f64>> },
}

impl ModelFile {
    pub fn model_name(&self) -> &'static str {
        match self {
            ModelFile::SymmetricUnitary { .. } => "symmetric_unitary",
            ModelFile::Involution { .. } => "involution",
        }
    }

    pub fn from_unitary(a: &SymmetricUnitary) -> Self {
        let m = MatrixJson::from_matrix(a.matrix());
        ModelFile::SymmetricUnitary {
            n: m.n,
            entries: m.entries,
        }
    }

    pub fn from_involution(r: &AntiSympInvolution) -> Self {
        let m = r.matrix();
        let entries = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect())
            .collect();
        ModelFile::Involution {
            n: r.n(),
            entries,
        }
    }

    /// Decode as a symmetric unitary, revalidating the invariants.
    pub fn into_unitary(self) -> Result<SymmetricUnitary> {
        match self {
            ModelFile::SymmetricUnitary { n, entries } => {
                let m = MatrixJson { n, entries }.to_matrix()?;
                SymmetricUnitary::new(m)
            }
            ModelFile::Involution { .. } => Err(Error::ModelMismatch {
                expected: "symmetric_unitary",
                found: "involution",
            }),
        }
    }

    /// Decode as an involution, revalidating the invariants.
    pub fn into_involution(self) -> Result<AntiSympInvolution> {
        match self {
            ModelFile::Involution { n, entries } => {
                if entries.len() != 2 * n {
                    return Err(Error::DimensionMismatch(entries.len(), 2 * n));
                }
                let mut m = RealMatrix::zeros(2 * n, 2 * n);
                for (i, row) in entries.iter().enumerate() {
                    if row.len() != 2 * n {
                        return Err(Error::DimensionMismatch(row.len(), 2 * n));
                    }
                    for (j, &x) in row.iter().enumerate() {
                        if !x.is_finite() {
                            return Err(Error::NonFinite);
                        }
                        m[(i, j)] = x;
                    }
                }
                AntiSympInvolution::new(m)
            }
            ModelFile::SymmetricUnitary { .. } => Err(Error::ModelMismatch {
                expected: "involution",
                found: "symmetric_unitary",
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PreimagePointJson {
    pub eps: Vec<u8>,
    pub sign: i8,
    pub residual: f64,
    pub log_abs_det: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeReportJson {
    pub n: usize,
    pub m: usize,
    pub degree: i64,
    pub closed_form: i64,
    pub all_regular: bool,
    pub points: Vec<PreimagePointJson>,
}

impl From<&DegreeReport> for DegreeReportJson {
    fn from(r: &DegreeReport) -> Self {
        Self {
            n: r.n,
            m: r.m,
            degree: r.degree_signed_sum,
            closed_form: r.degree_closed_form,
            all_regular: r.all_regular,
            points: r
                .points
                .iter()
                .map(|p| PreimagePointJson {
                    eps: p.eps.bits().to_vec(),
                    sign: p.sign_numeric,
                    residual: p.residual,
                    log_abs_det: p.log_abs_det,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchOutcomeJson {
    pub solutions: Vec<MatrixJson>,
    pub coverage: f64,
    pub strays: usize,
    pub matched: Vec<Option<Vec<u8>>>,
}

impl From<&SearchOutcome> for SearchOutcomeJson {
    fn from(o: &SearchOutcome) -> Self {
        Self {
            solutions: o
                .solutions
                .iter()
                .map(|s| MatrixJson::from_matrix(s.matrix()))
                .collect(),
            coverage: o.coverage,
            strays: o.strays,
            matched: o
                .matched
                .iter()
                .map(|m| m.as_ref().map(|e| e.bits().to_vec()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaReportJson {
    pub n: usize,
    pub d_brute: i64,
    pub d_rec: i64,
    pub d_closed: i64,
    pub m: Vec<u64>,
    pub p: Vec<u64>,
}

impl From<&LemmaReport> for LemmaReportJson {
    fn from(r: &LemmaReport) -> Self {
        Self {
            n: r.n,
            d_brute: r.d_brute,
            d_rec: r.d_rec,
            d_closed: r.d_closed,
            m: r.m.clone(),
            p: r.p.clone(),
        }
    }
}

pub fn read_model_file(path: &std::path::Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{random_lagrangian, unitary_to_involution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matrix_json_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        let m = crate::linalg::random_unitary(3, &mut rng);
        let json = to_json_string(&MatrixJson::from_matrix(&m)).unwrap();
        let parsed: MatrixJson = serde_json::from_str(&json).unwrap();
        let back = parsed.to_matrix().unwrap();
        assert_eq!(back.frobenius_dist(&m).unwrap(), 0.0);
    }

    #[test]
    fn floats_carry_seventeen_digits() {
        let m = ComplexMatrix::from_diagonal(&[Complex::new(1.0 / 3.0, 0.0)]);
        let json = to_json_string(&MatrixJson::from_matrix(&m)).unwrap();
        assert!(json.contains("3.3333333333333331e-1"), "{json}");
    }

    #[test]
    fn serialization_is_byte_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let a = random_lagrangian(2, &mut rng);
        let f = ModelFile::from_unitary(&a);
        assert_eq!(to_json_string(&f).unwrap(), to_json_string(&f).unwrap());
    }

    #[test]
    fn model_files_round_trip_both_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let a = random_lagrangian(2, &mut rng);
        let r = unitary_to_involution(&a).unwrap();

        let fa = ModelFile::from_unitary(&a);
        let json = to_json_string(&fa).unwrap();
        let back: ModelFile = serde_json::from_str(&json).unwrap();
        let a2 = back.into_unitary().unwrap();
        assert_eq!(a2.dist(&a).unwrap(), 0.0);

        let fr = ModelFile::from_involution(&r);
        let json = to_json_string(&fr).unwrap();
        let back: ModelFile = serde_json::from_str(&json).unwrap();
        let r2 = back.into_involution().unwrap();
        assert_eq!(r2.matrix().sub(r.matrix()).frobenius_norm(), 0.0);
    }

    #[test]
    fn wrong_model_tag_is_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(63);
        let a = random_lagrangian(2, &mut rng);
        let f = ModelFile::from_unitary(&a);
        assert!(matches!(
            f.into_involution(),
            Err(Error::ModelMismatch { .. })
        ));
    }

    #[test]
    fn corrupt_entries_fail_validation() {
        let f = ModelFile::SymmetricUnitary {
            n: 2,
            entries: vec![
                vec![[1.0, 0.0], [0.5, 0.0]],
                vec![[0.0, 0.0], [1.0, 0.0]],
            ],
        };
        assert!(matches!(
            f.into_unitary(),
            Err(Error::InvariantViolation { .. })
        ));
    }

    #[test]
    fn degree_report_serializes_with_stable_keys() {
        let report = degree_fixture();
        let json = to_json_string(&DegreeReportJson::from(&report)).unwrap();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        for key in ["n", "m", "degree", "closed_form", "all_regular", "points"] {
            assert!(value.get(key).is_some(), "missing {key}");
        }
        let p0 = &value["points"][0];
        for key in ["eps", "sign", "residual", "log_abs_det"] {
            assert!(p0.get(key).is_some(), "missing point key {key}");
        }
    }

    fn degree_fixture() -> DegreeReport {
        crate::degree::degree(&crate::degree::AngleSpec::default_angles(1)).unwrap()
    }
}
