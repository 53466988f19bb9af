//! Words in the generators: braid-move reduction, the Deletion Condition,
//! equality oracles and the retractions `π_I` of even systems.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::classification::is_spherical;
use crate::fingroup::coxeter_perm_model;
use crate::geometric::GeometricRepresentation;
use crate::matrix::{CoxeterMatrix, GenSubset, Label};

/// Default number of words the braid closure may visit.
pub const DEFAULT_WORD_BUDGET: usize = 100_000;

/// A sequence of 0-based generator indices; the empty word is the identity.
pub type Word = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordsError {
    #[error("braid closure exceeded the budget of {budget} words")]
    BudgetExhausted { budget: usize },
    #[error("the system is not even")]
    NotEven,
    #[error("letter {letter} is out of range for rank {rank}")]
    OutOfRange { letter: usize, rank: usize },
    #[error("word is empty")]
    Empty,
}

fn check_word(m: &CoxeterMatrix, w: &[usize]) -> Result<(), WordsError> {
    match w.iter().find(|&&s| s >= m.rank()) {
        Some(&letter) => Err(WordsError::OutOfRange { letter, rank: m.rank() }),
        None => Ok(()),
    }
}

/// Cancel adjacent equal letters until none remain.
pub fn free_reduce(w: &[usize]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &s in w {
        if out.last() == Some(&s) {
            out.pop();
        } else {
            out.push(s);
        }
    }
    out
}

/// Words obtained from `w` by one braid move.
fn braid_neighbors(m: &CoxeterMatrix, w: &[usize]) -> Vec<Word> {
    let mut out = Vec::new();
    for i in 0..w.len().saturating_sub(1) {
        let (s, t) = (w[i], w[i + 1]);
        if s == t {
            continue;
        }
        let Label::Finite(k) = m.get(s, t) else { continue };
        let k = k as usize;
        if i + k > w.len() {
            continue;
        }
        let alternating = (0..k).all(|j| w[i + j] == if j % 2 == 0 { s } else { t });
        if alternating {
            let mut v = w.to_vec();
            for j in 0..k {
                v[i + j] = if j % 2 == 0 { t } else { s };
            }
            out.push(v);
        }
    }
    out
}

fn adjacent_pair(w: &[usize]) -> Option<usize> {
    w.windows(2).position(|p| p[0] == p[1])
}

/// A geodesic word for the same element (Tits' solution to the word
/// problem): free cancellation, then closure under braid moves; a word in
/// the class with two equal adjacent letters is cancelled and the search
/// restarts. Returns the lexicographically least geodesic of the final
/// braid class. `budget` caps the total number of words visited.
pub fn reduce_word(m: &CoxeterMatrix, w: &[usize], budget: usize) -> Result<Word, WordsError> {
    check_word(m, w)?;
    let mut current = free_reduce(w);
    let mut visited_total = 0usize;
    'restart: loop {
        let mut seen: HashSet<Word> = HashSet::from([current.clone()]);
        let mut queue = VecDeque::from([current.clone()]);
        visited_total += 1;
        while let Some(x) = queue.pop_front() {
            if let Some(i) = adjacent_pair(&x) {
                let mut y = x.clone();
                y.drain(i..i + 2);
                current = free_reduce(&y);
                continue 'restart;
            }
            for y in braid_neighbors(m, &x) {
                if !seen.contains(&y) {
                    visited_total += 1;
                    if visited_total > budget {
                        return Err(WordsError::BudgetExhausted { budget });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        return Ok(seen.into_iter().min().expect("class contains the start word"));
    }
}

/// `ℓ(w)`.
pub fn word_length(m: &CoxeterMatrix, w: &[usize], budget: usize) -> Result<usize, WordsError> {
    Ok(reduce_word(m, w, budget)?.len())
}

pub fn is_reduced(m: &CoxeterMatrix, w: &[usize], budget: usize) -> Result<bool, WordsError> {
    Ok(word_length(m, w, budget)? == w.len())
}

/// Do `u` and `v` represent the same element?
///
/// When the letters involved generate a finite special subgroup the answer
/// comes from a faithful finite representation (a permutation model, or
/// the geometric representation otherwise); in general `u·v⁻¹` is reduced
/// by braid closure.
pub fn words_equal(m: &CoxeterMatrix, u: &[usize], v: &[usize], budget: usize) -> Result<bool, WordsError> {
    check_word(m, u)?;
    check_word(m, v)?;
    let support = GenSubset::from_indices(u.iter().chain(v).copied());
    if is_spherical(m, support) {
        let induced = m.induced_system(support).expect("letters are in range");
        let local = |w: &[usize]| -> Word {
            w.iter().map(|s| induced.indices.iter().position(|x| x == s).expect("in support")).collect()
        };
        let (lu, lv) = (local(u), local(v));
        if let Ok(model) = coxeter_perm_model(&induced.matrix) {
            return Ok(model.evaluate(&lu) == model.evaluate(&lv));
        }
        let rep = GeometricRepresentation::new(&induced.matrix);
        return Ok(rep.key(&rep.evaluate(&lu)) == rep.key(&rep.evaluate(&lv)));
    }
    let mut w = u.to_vec();
    w.extend(v.iter().rev());
    Ok(reduce_word(m, &w, budget)?.is_empty())
}

/// The lexicographically first pair `i < j` (0-based) such that deleting
/// letters `i` and `j` keeps the element; `None` iff `w` is reduced.
pub fn deletion_witness(m: &CoxeterMatrix, w: &[usize], budget: usize) -> Result<Option<(usize, usize)>, WordsError> {
    if w.is_empty() {
        return Err(WordsError::Empty);
    }
    if is_reduced(m, w, budget)? {
        return Ok(None);
    }
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            let shorter: Word =
                w.iter().enumerate().filter(|&(k, _)| k != i && k != j).map(|(_, &s)| s).collect();
            if words_equal(m, &shorter, w, budget)? {
                return Ok(Some((i, j)));
            }
        }
    }
    unreachable!("the Deletion Condition guarantees a pair for non-reduced words")
}

/// `π_I(w)`: keep the letters in `I`. Only a homomorphism for even systems.
pub fn even_retraction(m: &CoxeterMatrix, i: GenSubset, w: &[usize]) -> Result<Word, WordsError> {
    if !m.is_even() {
        return Err(WordsError::NotEven);
    }
    check_word(m, w)?;
    Ok(w.iter().copied().filter(|&s| i.contains(s)).collect())
}

/// Checks `π_I ∘ π_J = π_J ∘ π_I` on the samples.
pub fn retraction_commutes(m: &CoxeterMatrix, i: GenSubset, j: GenSubset, samples: &[Word]) -> Result<bool, WordsError> {
    for w in samples {
        let ij = even_retraction(m, i, &even_retraction(m, j, w)?)?;
        let ji = even_retraction(m, j, &even_retraction(m, i, w)?)?;
        if ij != ji {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::parse_system;

    const B: usize = DEFAULT_WORD_BUDGET;

    fn sys(s: &str) -> CoxeterMatrix {
        parse_system(s).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let s3 = sys("rank 2; m 1 2 = 3");
        assert_eq!(reduce_word(&s3, &[0, 1, 0, 1], B).unwrap(), vec![1, 0]);
        assert_eq!(reduce_word(&s3, &[0, 0], B).unwrap(), Vec::<usize>::new());
        let d = sys("rank 2; m 1 2 = inf");
        assert_eq!(reduce_word(&d, &[0, 1, 0, 1, 0, 1], B).unwrap(), vec![0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn budget_is_reported() {
        let a4 = sys("rank 4; m 1 2 = 3; m 2 3 = 3; m 3 4 = 3");
        let w = [0, 1, 2, 3, 0, 1, 2, 0, 1, 0];
        assert_eq!(reduce_word(&a4, &w, 3), Err(WordsError::BudgetExhausted { budget: 3 }));
        assert_eq!(reduce_word(&a4, &w, B).unwrap().len(), 10);
    }

    #[test]
    fn equality_examples() {
        let s3 = sys("rank 2; m 1 2 = 3");
        assert!(words_equal(&s3, &[0, 1, 0], &[1, 0, 1], B).unwrap());
        assert!(!words_equal(&s3, &[0], &[1], B).unwrap());
        let w3 = CoxeterMatrix::universal(3);
        for n in 1..=5 {
            let w: Word = (0..n).flat_map(|_| [0, 1]).collect();
            assert!(!words_equal(&w3, &w, &[], B).unwrap());
        }
    }

    #[test]
    fn deletion_examples() {
        let s3 = sys("rank 2; m 1 2 = 3");
        assert_eq!(deletion_witness(&s3, &[0, 1, 0, 1], B).unwrap(), Some((0, 3)));
        assert_eq!(deletion_witness(&s3, &[0, 0], B).unwrap(), Some((0, 1)));
        assert_eq!(deletion_witness(&s3, &[0, 1, 0], B).unwrap(), None);
    }

    #[test]
    fn retraction_examples() {
        let t442 = sys("rank 3; m 1 2 = 4; m 1 3 = 4");
        let i = GenSubset::from_one_based([1]);
        assert_eq!(even_retraction(&t442, i, &[0, 1, 0, 2]).unwrap(), vec![0, 0]);
        assert_eq!(even_retraction(&t442, t442.full(), &[0, 1, 0, 2]).unwrap(), vec![0, 1, 0, 2]);
        let pgl = sys("rank 3; m 1 3 = 3; m 2 3 = inf");
        assert_eq!(even_retraction(&pgl, i, &[0]), Err(WordsError::NotEven));
        let j = GenSubset::from_one_based([2, 3]);
        assert!(retraction_commutes(&t442, i, j, &[vec![0, 1, 2, 1, 0]]).unwrap());
    }
}
