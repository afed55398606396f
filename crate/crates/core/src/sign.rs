//! Permutations, unshuffles and Koszul signs.
//!
//! Permutations are stored as 1-based image lists, so `images[i - 1] = σ(i)`.
//! A permutation acts on a word `(m_1, ..., m_k)` by producing
//! `(m_σ(1), ..., m_σ(k))`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        for &i in &images {
            if i == 0 || i > k || seen[i - 1] {
                return Err(Error::Argument(format!(
                    "{images:?} is not a permutation of 1..={k}"
                )));
            }
            seen[i - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(k: usize) -> Self {
        Permutation {
            images: (1..=k).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// σ(i), 1-based.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::Argument("composing permutations of different sizes".into()));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&j| self.images[j - 1]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// The word `(w_σ(1), ..., w_σ(k))`. Note that
    /// `permute(permute(w, σ), τ) = permute(w, σ ∘ τ)`.
    pub fn permute<T: Clone>(&self, word: &[T]) -> Vec<T> {
        self.images.iter().map(|&j| word[j - 1].clone()).collect()
    }

    /// Adjacent transpositions `s_p` (swapping positions p and p+1, 1-based)
    /// whose left-to-right product, applied to the identity arrangement,
    /// yields the arrangement `(σ(1), ..., σ(k))`. Bubble sort order.
    pub fn adjacent_decomposition(&self) -> Vec<usize> {
        // Sort the arrangement back to identity, then reverse the swaps.
        let mut arr = self.images.clone();
        let mut swaps = Vec::new();
        let k = arr.len();
        for pass in 0..k {
            for p in 0..k.saturating_sub(1 + pass) {
                if arr[p] > arr[p + 1] {
                    arr.swap(p, p + 1);
                    swaps.push(p + 1);
                }
            }
        }
        swaps.reverse();
        swaps
    }
}

/// The sign ε with `m_σ(1) ⊙ … ⊙ m_σ(k) = ε · m_1 ⊙ … ⊙ m_k` in a graded
/// symmetric algebra, for homogeneous `m_i` of the given degrees.
///
/// Computed by realizing the arrangement through adjacent transpositions, each
/// contributing `(-1)^{|a||b|}` for the two elements it swaps.
pub fn koszul_sign(degrees: &[i32], sigma: &Permutation) -> Result<i32> {
    if degrees.len() != sigma.len() {
        return Err(Error::Argument(format!(
            "degree list has length {} but permutation has length {}",
            degrees.len(),
            sigma.len()
        )));
    }
    // Start from the identity arrangement of labels and apply swaps.
    let mut arr: Vec<usize> = (1..=degrees.len()).collect();
    let mut sign = 1;
    for p in sigma.adjacent_decomposition() {
        let (a, b) = (arr[p - 1], arr[p]);
        if degrees[a - 1].rem_euclid(2) == 1 && degrees[b - 1].rem_euclid(2) == 1 {
            sign = -sign;
        }
        arr.swap(p - 1, p);
    }
    debug_assert_eq!(arr, sigma.images);
    Ok(sign)
}

/// Sign of arranging odd elements of a word, computed directly by counting
/// inversions among odd-degree positions. Used internally where the
/// arrangement is already available as indices.
#[cfg(test)]
pub(crate) fn inversion_sign(degrees_in_order: &[i32], positions: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..positions.len() {
        if degrees_in_order[i].rem_euclid(2) == 0 {
            continue;
        }
        for j in (i + 1)..positions.len() {
            if degrees_in_order[j].rem_euclid(2) == 1 && positions[i] > positions[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// All (l, m)-unshuffles: σ ∈ Σ_{l+m} with σ(1) < … < σ(l) and
/// σ(l+1) < … < σ(l+m), in lexicographic order of their image lists.
pub fn unshuffles(l: usize, m: usize) -> Vec<Permutation> {
    let n = l + m;
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(l);
    choose(1, n, l, &mut chosen, &mut |first: &[usize]| {
        let mut images = first.to_vec();
        images.extend((1..=n).filter(|i| !first.contains(i)));
        out.push(Permutation { images });
    });
    out
}

fn choose(start: usize, n: usize, l: usize, acc: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if acc.len() == l {
        emit(acc);
        return;
    }
    for i in start..=n {
        if n - i + 1 < l - acc.len() {
            break;
        }
        acc.push(i);
        choose(i + 1, n, l, acc, emit);
        acc.pop();
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
