//! The (affine) Weyl group acting on `Z x Lambda x Z`.
//!
//! Simple reflections s_i(x) = x - <x, av_i> alpha_i, the dot action
//! w.x = w(x + rho) - rho, dominance, reduction to the fundamental domain,
//! and the bounded breadth-first enumeration of the Weyl elements that
//! contribute to the alternating sum
//!
//!   C^lambda_mu(q) = sum_{w} (-1)^{l(w)} K_{w.lambda - mu}(q).
//!
//! Termination of the enumeration at positive level comes from a coefficient
//! box: along the left weak order, w(lambda + rho) = lambda + rho - c(w) with
//! c(w) componentwise nondecreasing, so a branch dies for good once some
//! coordinate of c(w) overshoots the root coordinates of lambda - mu.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::root_system::{Algebra, Weight};

/// A Weyl group element as a reduced word in simple reflections. Words are
/// produced by breadth-first search, so the stored word has minimal length.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeylElement {
    word: Vec<usize>,
}

impl WeylElement {
    pub fn identity() -> Self {
        WeylElement { word: vec![] }
    }

    /// Wrap a word without checking reducedness. The length and sign of the
    /// result refer to the given word, so only use this where any
    /// representative word will do (plain and dot actions).
    pub fn from_word_unchecked(word: Vec<usize>) -> Self {
        WeylElement { word }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    /// (-1)^{l(w)} as +1 / -1.
    pub fn sign(&self) -> i64 {
        if self.word.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.word.iter().map(|i| format!("s{i}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Apply s_i. Errors on an index outside the node range of the algebra.
pub fn reflect(alg: &Algebra, node: usize, x: &Weight) -> Result<Weight> {
    if !alg.valid_node(node) {
        return Err(Error::IndexOutOfRange { index: node, rank: alg.rank() });
    }
    Ok(reflect_unchecked(alg, node, x))
}

pub(crate) fn reflect_unchecked(alg: &Algebra, node: usize, x: &Weight) -> Weight {
    let c = alg.pairing(x, node);
    x.sub(&alg.simple_root(node).scale(c))
}

/// Plain action of a word, last letter applied first.
pub fn apply(alg: &Algebra, w: &WeylElement, x: &Weight) -> Weight {
    let mut y = x.clone();
    for &i in w.word.iter().rev() {
        y = reflect_unchecked(alg, i, &y);
    }
    y
}

/// Dot action w.x = w(x + rho) - rho.
pub fn dot_action(alg: &Algebra, w: &WeylElement, x: &Weight) -> Weight {
    apply(alg, w, &x.add(alg.rho())).sub(alg.rho())
}

/// True iff <x, av_i> >= 0 for every node i.
pub fn is_dominant(alg: &Algebra, x: &Weight) -> bool {
    alg.nodes().iter().all(|&i| alg.pairing(x, i) >= 0)
}

/// Result of reducing a weight into the dominant chamber.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub weight: Weight,
    pub word: WeylElement,
    /// Some pairing of the reduced weight vanishes (the orbit touches a wall).
    pub on_wall: bool,
}

/// Plain reduction to the dominant chamber; at positive level (or for finite
/// algebras) this terminates and the representative is unique.
pub fn reduce_to_dominant(alg: &Algebra, x: &Weight) -> Result<Reduction> {
    // orbits at negative level, and level-0 orbits with nonzero finite part,
    // never reach the chamber; the walk would spin
    if alg.is_affine()
        && (x.level < 0 || (x.level == 0 && !x.finite.iter().all(|&v| v == 0)))
    {
        return Err(Error::NonPositiveLevel);
    }
    let mut y = x.clone();
    let mut word = Vec::new();
    'outer: loop {
        for &i in &alg.nodes() {
            if alg.pairing(&y, i) < 0 {
                y = reflect_unchecked(alg, i, &y);
                word.push(i);
                continue 'outer;
            }
        }
        break;
    }
    word.reverse(); // stored as w with w(x) dominant, last letter applied first
    let on_wall = alg.nodes().iter().any(|&i| alg.pairing(&y, i) == 0);
    Ok(Reduction { weight: y, word: WeylElement { word }, on_wall })
}

/// Parity of a Weyl group element realizing a reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    fn of_len(l: usize) -> Parity {
        if l.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Unique representative of the W_{aff,k} = W x kLambda orbit of a finite
/// weight inside the level-k alcove, with the parity of the reducing element.
pub fn to_level_k_dominant(alg: &Algebra, finite: &[i64], k: i64) -> Result<(Vec<i64>, Parity)> {
    if !alg.is_affine() {
        return Err(Error::InvalidInput("level-k reduction needs an affine algebra".into()));
    }
    if k < 1 {
        return Err(Error::NonPositiveLevel);
    }
    if finite.len() != alg.rank() {
        return Err(Error::InvalidInput("finite weight has wrong rank".into()));
    }
    let lift = Weight::new(k, finite.to_vec(), 0);
    let red = reduce_to_dominant(alg, &lift)?;
    Ok((red.weight.finite, Parity::of_len(red.word.length())))
}

/// Outcome of the rho-shifted (dot) variant of level-k reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DotReduction {
    Regular { finite: Vec<i64>, parity: Parity },
    Singular,
}

/// Dot variant: reduce the rho-shifted weight; translations act at level
/// k + dual Coxeter number. Reports singularity when the shifted orbit meets
/// a wall (used by the Racah-Speiser tensor oracle).
pub fn to_level_k_dominant_dot(alg: &Algebra, finite: &[i64], k: i64) -> Result<DotReduction> {
    if !alg.is_affine() {
        return Err(Error::InvalidInput("level-k reduction needs an affine algebra".into()));
    }
    if k < 1 {
        return Err(Error::NonPositiveLevel);
    }
    let lift = Weight::new(k, finite.to_vec(), 0).add(alg.rho());
    let red = reduce_to_dominant(alg, &lift)?;
    if red.on_wall {
        return Ok(DotReduction::Singular);
    }
    let back = red.weight.sub(alg.rho());
    Ok(DotReduction::Regular { finite: back.finite, parity: Parity::of_len(red.word.length()) })
}

/// The Weyl elements w with w.lambda - mu a nonnegative integer combination
/// of simple roots with delta-coefficient <= depth, together with those
/// combinations. Output is sorted by (length, word).
pub fn enumerate_contributing(
    alg: &Algebra,
    lambda: &Weight,
    mu: &Weight,
    depth: i64,
) -> Result<Vec<(WeylElement, Weight)>> {
    if !is_dominant(alg, lambda) {
        return Err(Error::InvalidInput("lambda must be dominant".into()));
    }
    if lambda.level != mu.level {
        return Err(Error::InvalidInput("lambda and mu must have equal level".into()));
    }
    if alg.is_affine() && lambda.level <= 0 {
        return Err(Error::NonPositiveLevel);
    }

    let diff = lambda.sub(mu);
    let Some(bound) = alg.root_coords(&diff) else {
        return Ok(vec![]); // lambda - mu not in the root lattice: empty sum
    };
    if bound.iter().any(|&b| b < 0) {
        return Ok(vec![]);
    }
    if alg.is_affine() && bound[0] > depth {
        return Err(Error::DepthExceeded { needed: bound[0], depth });
    }

    let shifted = lambda.add(alg.rho());
    let nodes = alg.nodes();
    let n = nodes.len();
    let zero = vec![0i64; n];

    // BFS over the left weak order; state = (w, w(lambda+rho), c(w)) where
    // w(lambda+rho) = lambda+rho - sum c_i alpha_i. Dedupe on the image,
    // which is faithful because lambda+rho is regular dominant.
    let mut out: Vec<(WeylElement, Weight)> = Vec::new();
    let mut seen: HashMap<Weight, ()> = HashMap::new();
    let mut frontier: Vec<(WeylElement, Weight, Vec<i64>)> =
        vec![(WeylElement::identity(), shifted.clone(), zero)];
    seen.insert(shifted, ());

    let mu_shifted = mu.add(alg.rho());
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (w, img, c) in &frontier {
            // c(w) <= bound means w contributes: w.lambda - mu = img - (mu + rho)
            if c.iter().zip(&bound).all(|(ci, bi)| ci <= bi) {
                out.push((w.clone(), img.sub(&mu_shifted)));
            }
            for (pos, &i) in nodes.iter().enumerate() {
                let p = alg.pairing(img, i);
                if p > 0 {
                    // length increases; coefficient of alpha_i grows by p
                    let mut c2 = c.clone();
                    c2[pos] += p;
                    if c2.iter().zip(&bound).all(|(ci, bi)| ci <= bi) {
                        let img2 = reflect_unchecked(alg, i, img);
                        if !seen.contains_key(&img2) {
                            seen.insert(img2.clone(), ());
                            let mut word = vec![i];
                            word.extend_from_slice(w.word());
                            next.push((WeylElement { word }, img2, c2));
                        }
                    }
                }
            }
        }
        frontier = next;
    }

    out.sort_by(|a, b| (a.0.length(), a.0.word()).cmp(&(b.0.length(), b.0.word())));
    Ok(out)
}
