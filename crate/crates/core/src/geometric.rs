//! The geometric (Tits) representation and element enumeration by BFS.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::classification::ClassificationError;
use crate::fingroup::{coxeter_perm_model, PermModel};
use crate::matrix::{CoxeterMatrix, Label};

/// Decimal places kept when hashing matrix entries.
pub const HASH_DECIMALS: i32 = 9;

/// Reflection matrices `σ_s(v) = v − 2B(v, α_s)α_s` over the cosine form
/// `B(α_s, α_t) = −cos(π/m(s,t))` (and `−1` for `m = ∞`).
#[derive(Clone, Debug)]
pub struct GeometricRepresentation {
    n: usize,
    reflections: Vec<Vec<f64>>,
}

/// Row-major `n × n` matrix.
pub type Matrix = Vec<f64>;

pub fn cosine_form(m: &CoxeterMatrix) -> Vec<Vec<f64>> {
    let n = m.rank();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match m.get(i, j) {
                    Label::Finite(k) => -(PI / k as f64).cos(),
                    Label::Infinite => -1.0,
                })
                .collect()
        })
        .collect()
}

impl GeometricRepresentation {
    pub fn new(m: &CoxeterMatrix) -> Self {
        let n = m.rank();
        let b = cosine_form(m);
        let reflections = (0..n)
            .map(|s| {
                let mut r = identity(n);
                // Column j is σ_s(α_j) = α_j − 2B(α_j, α_s)α_s.
                for j in 0..n {
                    r[s * n + j] -= 2.0 * b[j][s];
                }
                r
            })
            .collect();
        GeometricRepresentation { n, reflections }
    }

    pub fn identity(&self) -> Matrix {
        identity(self.n)
    }

    pub fn reflection(&self, s: usize) -> &Matrix {
        &self.reflections[s]
    }

    pub fn multiply(&self, a: &Matrix, b: &Matrix) -> Matrix {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x != 0.0 {
                    for j in 0..n {
                        out[i * n + j] += x * b[k * n + j];
                    }
                }
            }
        }
        out
    }

    /// Image of a word, letters multiplied left to right.
    pub fn evaluate(&self, word: &[usize]) -> Matrix {
        word.iter().fold(self.identity(), |acc, &s| self.multiply(&acc, &self.reflections[s]))
    }

    /// Entries rounded to [`HASH_DECIMALS`] places.
    pub fn key(&self, x: &Matrix) -> Vec<i64> {
        let scale = 10f64.powi(HASH_DECIMALS);
        x.iter().map(|v| (v * scale).round() as i64).collect()
    }
}

fn identity(n: usize) -> Matrix {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricElement {
    /// Shortlex-first geodesic word reaching the element (0-based letters).
    pub word: Vec<usize>,
    /// Row-major matrix in the geometric representation.
    pub matrix: Matrix,
}

/// All elements of `W` when `|W| ≤ bound`, in BFS (length, then shortlex)
/// order; `None` once more than `bound` elements are found.
///
/// Matrices are identified by their rounded entries. When the system has a
/// permutation model, every identification is checked against it and a
/// disagreement is reported as `ToleranceCollision`.
pub fn enumerate_elements(m: &CoxeterMatrix, bound: usize) -> Result<Option<Vec<GeometricElement>>, ClassificationError> {
    let rep = GeometricRepresentation::new(m);
    let model: Option<PermModel> = coxeter_perm_model(m).ok();
    let id = rep.identity();
    let mut seen: HashMap<Vec<i64>, usize> = HashMap::from([(rep.key(&id), 0)]);
    let mut elements = vec![GeometricElement { word: Vec::new(), matrix: id }];
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for s in 0..m.rank() {
            let matrix = rep.multiply(&elements[k].matrix, rep.reflection(s));
            let mut word = elements[k].word.clone();
            word.push(s);
            match seen.get(&rep.key(&matrix)) {
                Some(&old) => {
                    if let Some(model) = &model {
                        if model.evaluate(&word) != model.evaluate(&elements[old].word) {
                            return Err(ClassificationError::ToleranceCollision {
                                first: elements[old].word.clone(),
                                second: word,
                            });
                        }
                    }
                }
                None => {
                    if elements.len() >= bound {
                        return Ok(None);
                    }
                    seen.insert(rep.key(&matrix), elements.len());
                    queue.push_back(elements.len());
                    elements.push(GeometricElement { word, matrix });
                }
            }
        }
    }
    Ok(Some(elements))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::parse_system;

    fn count(text: &str, bound: usize) -> Option<usize> {
        enumerate_elements(&parse_system(text).unwrap(), bound).unwrap().map(|e| e.len())
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(count("rank 2; m 1 2 = 4", 100), Some(8));
        assert_eq!(count("rank 3; m 1 2 = 5; m 2 3 = 3", 200), Some(120));
        assert_eq!(count("rank 2; m 1 2 = inf", 1000), None);
        assert_eq!(count("rank 1", 10), Some(2));
    }

    #[test]
    fn reflections_are_involutions() {
        let m = parse_system("rank 3; m 1 2 = 5; m 2 3 = 3").unwrap();
        let rep = GeometricRepresentation::new(&m);
        for s in 0..3 {
            let sq = rep.evaluate(&[s, s]);
            assert_eq!(rep.key(&sq), rep.key(&rep.identity()));
        }
    }
}
