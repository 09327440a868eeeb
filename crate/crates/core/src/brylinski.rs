//! Explicit small-depth construction of integrable modules L(lambda) with
//! exact Chevalley generator actions, and the principal filtration
//!
//!   F^i L(lambda)_mu = { x : e^i x = 0 },   e = e_0 + ... + e_r,
//!
//! whose graded dimensions give ^eC^lambda_mu(q) = sum_i dim(F^{i+1}/F^i) q^i.
//!
//! Construction: each weight space of the Verma module is spanned by
//! f-monomials f_{j_1}...f_{j_l} v; the contravariant (Shapovalov) form is
//! computed exactly on that spanning set by commuting e's through f's, and
//! L(lambda) is the quotient by its radical. No Serre-relation normal forms
//! are needed; correctness is certified by checking every quotient dimension
//! against the Freudenthal oracle.
//!
//! All matrices are exact: the Shapovalov grams are integral, the quotient
//! generator actions rational.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freudenthal::MultiplicityTable;
use crate::linalg::{self, Rat};
use crate::qpoly::QPolynomial;
use crate::root_system::{Algebra, AlgebraKind, FiniteType, Weight};
use crate::weyl;

/// Default ceiling on the number of f-monomials in a single weight space.
pub const DEFAULT_DIMENSION_GUARD: usize = 20_000;

struct Space {
    /// all f-monomial words for lambda - mu, sorted lexicographically
    monomials: Vec<Vec<u8>>,
    /// full Shapovalov gram on the monomial spanning set (integral)
    gram: Vec<Vec<BigInt>>,
    /// monomial indices whose residue classes form a basis of L(lambda)_mu
    basis: Vec<usize>,
    /// inverse of the gram restricted to `basis`
    gram_basis_inv: Vec<Vec<Rat>>,
}

impl Space {
    fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Weight spaces of L(lambda) down to an energy cutoff, with exact matrices
/// of every Chevalley generator between adjacent spaces.
pub struct ModuleSlice {
    lambda: Weight,
    depth: i64,
    spaces: BTreeMap<Weight, Space>,
    /// quotient action of e_i: key (mu, node), matrix dim(mu + alpha_i) x dim(mu)
    e_actions: BTreeMap<(Weight, usize), Vec<Vec<Rat>>>,
    /// quotient action of f_i: key (mu, node), matrix dim(mu - alpha_i) x dim(mu)
    f_actions: BTreeMap<(Weight, usize), Vec<Vec<Rat>>>,
}

fn multiset_words(counts: &[(usize, i64)]) -> Vec<Vec<u8>> {
    fn rec(counts: &mut Vec<(usize, i64)>, word: &mut Vec<u8>, total: i64, out: &mut Vec<Vec<u8>>) {
        if total == 0 {
            out.push(word.clone());
            return;
        }
        for idx in 0..counts.len() {
            if counts[idx].1 > 0 {
                counts[idx].1 -= 1;
                word.push(counts[idx].0 as u8);
                rec(counts, word, total - 1, out);
                word.pop();
                counts[idx].1 += 1;
            }
        }
    }
    let mut counts = counts.to_vec();
    let total: i64 = counts.iter().map(|c| c.1).sum();
    let mut out = Vec::new();
    rec(&mut counts, &mut Vec::new(), total, &mut out);
    out
}

fn word_count(content: &[i64]) -> Option<usize> {
    // multinomial (sum c_i)! / prod c_i!, saturating to None past usize
    let mut value = 1u128;
    let mut k = 0i64;
    for &c in content {
        for j in 1..=c {
            value = value.checked_mul((k + j) as u128)? / j as u128;
        }
        k += c;
    }
    usize::try_from(value).ok()
}

/// Apply e_node to a Verma vector given as monomial coefficients at `mu`.
/// `lambda` is the highest weight; output is indexed by `target_monomials`.
fn apply_e_monomial(
    alg: &Algebra,
    lambda: &Weight,
    node: usize,
    word: &[u8],
    out: &mut BTreeMap<Vec<u8>, BigInt>,
    coeff: &BigInt,
) {
    // weight below position p is lambda - sum_{q>p} alpha_{j_q}
    let mut tail_weight = lambda.clone();
    for p in (0..word.len()).rev() {
        if word[p] as usize == node {
            let c = alg.pairing(&tail_weight, node);
            if c != 0 {
                let mut reduced = Vec::with_capacity(word.len() - 1);
                reduced.extend_from_slice(&word[..p]);
                reduced.extend_from_slice(&word[p + 1..]);
                *out.entry(reduced).or_insert_with(BigInt::zero) += coeff * BigInt::from(c);
            }
        }
        tail_weight = tail_weight.sub(alg.simple_root(word[p] as usize));
    }
}

impl ModuleSlice {
    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn weights(&self) -> impl Iterator<Item = &Weight> {
        self.spaces.keys()
    }

    pub fn dimension(&self, mu: &Weight) -> usize {
        self.spaces.get(mu).map_or(0, Space::dim)
    }

    /// Quotient matrix of e_node from mu to mu + alpha_node, if both spaces
    /// are nonzero.
    pub fn e_matrix(&self, mu: &Weight, node: usize) -> Option<&Vec<Vec<Rat>>> {
        self.e_actions.get(&(mu.clone(), node))
    }

    pub fn f_matrix(&self, mu: &Weight, node: usize) -> Option<&Vec<Vec<Rat>>> {
        self.f_actions.get(&(mu.clone(), node))
    }

    /// ^eC^lambda_mu(q): graded dimensions of the principal filtration by
    /// kernels of powers of e = sum_i e_i on L(lambda)_mu.
    pub fn principal_filtration(&self, alg: &Algebra, mu: &Weight) -> Result<QPolynomial> {
        if alg.is_affine() && self.lambda.energy - mu.energy > self.depth {
            return Err(Error::DepthExceeded {
                needed: self.lambda.energy - mu.energy,
                depth: self.depth,
            });
        }
        let dim = self.dimension(mu);
        if dim == 0 {
            return Ok(QPolynomial::zero());
        }
        // iterate blocks of e^j: weight -> matrix (dim of that space x dim)
        let identity: Vec<Vec<Rat>> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { linalg::rat_int(1) } else { Rat::zero() })
                    .collect()
            })
            .collect();
        let mut blocks: BTreeMap<Weight, Vec<Vec<Rat>>> = BTreeMap::new();
        blocks.insert(mu.clone(), identity);
        let mut kernel_dims: Vec<usize> = vec![0]; // dim ker e^0
        // e^j shifts mu up by j simple roots, so e^{H+1} = 0 on L(lambda)_mu
        let height: i64 = alg
            .root_coords(&self.lambda.sub(mu))
            .map(|c| c.iter().sum())
            .unwrap_or(0);
        loop {
            let mut next: BTreeMap<Weight, Vec<Vec<Rat>>> = BTreeMap::new();
            for (nu, mat) in &blocks {
                for &i in &alg.nodes() {
                    if let Some(e) = self.e_actions.get(&(nu.clone(), i)) {
                        let target = nu.add(alg.simple_root(i));
                        let rows = e.len();
                        let entry = next.entry(target).or_insert_with(|| {
                            vec![vec![Rat::zero(); dim]; rows]
                        });
                        for (r, erow) in e.iter().enumerate() {
                            for c in 0..dim {
                                let mut acc = entry[r][c].clone();
                                for (m, ev) in erow.iter().enumerate() {
                                    if !ev.is_zero() && !mat[m][c].is_zero() {
                                        acc += ev.clone() * mat[m][c].clone();
                                    }
                                }
                                entry[r][c] = acc;
                            }
                        }
                    }
                }
            }
            // rank of the stacked map e^{j+1}
            let stacked: Vec<Vec<Rat>> = next.values().flat_map(|m| m.iter().cloned()).collect();
            let (rank, _) = linalg::rank_with_pivots(&stacked);
            if dim - rank < *kernel_dims.last().unwrap() {
                return Err(Error::Internal("kernel dimensions must be nondecreasing".into()));
            }
            kernel_dims.push(dim - rank);
            if rank == 0 {
                break;
            }
            if kernel_dims.len() as i64 > height + 2 {
                return Err(Error::Internal(
                    "principal filtration failed to exhaust the weight space".into(),
                ));
            }
            blocks = next;
        }
        let coeffs: Vec<i64> = kernel_dims
            .windows(2)
            .map(|w| (w[1] - w[0]) as i64)
            .collect();
        Ok(QPolynomial::from_i64s(&coeffs))
    }

    /// Serializable dump (dimensions and generator matrices as rational
    /// strings) for regression fixtures.
    pub fn dump(&self, alg: &Algebra) -> SliceDump {
        let spaces = self
            .spaces
            .iter()
            .map(|(w, s)| SpaceDump {
                weight: w.clone(),
                dim: s.dim(),
                monomials: s
                    .basis
                    .iter()
                    .map(|&i| s.monomials[i].iter().map(|&b| b as usize).collect())
                    .collect(),
            })
            .collect();
        let mut e_actions = Vec::new();
        for ((w, node), m) in &self.e_actions {
            e_actions.push(ActionDump {
                weight: w.clone(),
                node: *node,
                matrix: m.iter().map(|row| row.iter().map(Rat::to_string).collect()).collect(),
            });
        }
        let mut f_actions = Vec::new();
        for ((w, node), m) in &self.f_actions {
            f_actions.push(ActionDump {
                weight: w.clone(),
                node: *node,
                matrix: m.iter().map(|row| row.iter().map(Rat::to_string).collect()).collect(),
            });
        }
        SliceDump {
            algebra: alg.label().to_string(),
            lambda: self.lambda.clone(),
            depth: self.depth,
            spaces,
            e_actions,
            f_actions,
        }
    }
}

#[derive(Serialize)]
pub struct SliceDump {
    pub algebra: String,
    pub lambda: Weight,
    pub depth: i64,
    pub spaces: Vec<SpaceDump>,
    pub e_actions: Vec<ActionDump>,
    pub f_actions: Vec<ActionDump>,
}

#[derive(Serialize)]
pub struct SpaceDump {
    pub weight: Weight,
    pub dim: usize,
    pub monomials: Vec<Vec<usize>>,
}

#[derive(Serialize)]
pub struct ActionDump {
    pub weight: Weight,
    pub node: usize,
    pub matrix: Vec<Vec<String>>,
}

/// Build the weight spaces of L(lambda) with delta-drop at most `depth`
/// (finite types: the whole module), with the default dimension guard.
pub fn construct_slice(alg: &Algebra, lambda: &Weight, depth: i64) -> Result<ModuleSlice> {
    construct_slice_guarded(alg, lambda, depth, DEFAULT_DIMENSION_GUARD)
}

pub fn construct_slice_guarded(
    alg: &Algebra,
    lambda: &Weight,
    depth: i64,
    guard: usize,
) -> Result<ModuleSlice> {
    if !weyl::is_dominant(alg, lambda) {
        return Err(Error::InvalidInput("lambda must be dominant".into()));
    }
    if alg.is_affine() && lambda.level <= 0 {
        return Err(Error::NonPositiveLevel);
    }
    let table = MultiplicityTable::new(alg, lambda, depth)?;
    let mut weights: Vec<(Weight, u64)> = table.support_weights(alg)?;
    // process by height of lambda - mu so gram DP parents exist
    weights.sort_by_key(|(w, _)| {
        let coords = alg.root_coords(&lambda.sub(w)).expect("support weight below lambda");
        (coords.iter().sum::<i64>(), coords)
    });

    let mut spaces: BTreeMap<Weight, Space> = BTreeMap::new();
    let mut monomial_index: BTreeMap<Weight, BTreeMap<Vec<u8>, usize>> = BTreeMap::new();

    for (mu, expected_dim) in &weights {
        let coords = alg
            .root_coords(&lambda.sub(mu))
            .ok_or_else(|| Error::Internal("support weight outside root lattice".into()))?;
        let counts: Vec<(usize, i64)> = alg
            .nodes()
            .iter()
            .enumerate()
            .map(|(pos, &node)| (node, coords[pos]))
            .collect();
        if let Some(n) = word_count(&coords) {
            if n > guard {
                return Err(Error::ResourceGuard { dim: n, limit: guard });
            }
        } else {
            return Err(Error::ResourceGuard { dim: usize::MAX, limit: guard });
        }
        let monomials = multiset_words(&counts);
        let n = monomials.len();
        let index: BTreeMap<Vec<u8>, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();

        // Shapovalov gram by first-letter recursion:
        // S(f_i I', J) = sum_{M'} S(I', M') E_i[M', J]
        let mut gram = vec![vec![BigInt::zero(); n]; n];
        if coords.iter().all(|&c| c == 0) {
            gram = vec![vec![BigInt::from(1)]];
        } else {
            // e_i images of every monomial, computed once per column
            let mut e_images: BTreeMap<usize, Vec<BTreeMap<Vec<u8>, BigInt>>> = BTreeMap::new();
            for &(node, count) in &counts {
                if count > 0 {
                    let images: Vec<BTreeMap<Vec<u8>, BigInt>> = monomials
                        .iter()
                        .map(|word| {
                            let mut out = BTreeMap::new();
                            apply_e_monomial(alg, lambda, node, word, &mut out, &BigInt::from(1));
                            out
                        })
                        .collect();
                    e_images.insert(node, images);
                }
            }
            for (row, word) in monomials.iter().enumerate() {
                let first = word[0] as usize;
                let tail = word[1..].to_vec();
                let up = mu.add(alg.simple_root(first));
                let up_space = spaces.get(&up);
                let up_index = monomial_index.get(&up);
                for col in 0..n {
                    let mut acc = BigInt::zero();
                    for (m_word, c) in &e_images[&first][col] {
                        if let (Some(sp), Some(ix)) = (up_space, up_index) {
                            let mi = ix[m_word];
                            let ti = ix[&tail];
                            acc += c * &sp.gram[ti][mi];
                        } else if tail == *m_word && up == *lambda {
                            // adjacent to the highest weight line
                            acc += c;
                        }
                    }
                    gram[row][col] = acc;
                }
            }
        }

        // certify against the Freudenthal oracle and pick a quotient basis
        let gram_rat: Vec<Vec<Rat>> = gram
            .iter()
            .map(|row| row.iter().map(|v| Rat::from_integer(v.clone())).collect())
            .collect();
        let (rank, pivots) = linalg::rank_with_pivots(&gram_rat);
        if rank as u64 != *expected_dim {
            return Err(Error::Internal(format!(
                "Shapovalov rank {rank} disagrees with Freudenthal multiplicity {expected_dim} at {mu}"
            )));
        }
        let basis = pivots;
        let sub: Vec<Vec<Rat>> = basis
            .iter()
            .map(|&i| basis.iter().map(|&j| gram_rat[i][j].clone()).collect())
            .collect();
        let gram_basis_inv = if basis.is_empty() {
            vec![]
        } else {
            linalg::invert(&sub)
                .ok_or_else(|| Error::Internal("gram basis block not invertible".into()))?
        };

        monomial_index.insert(mu.clone(), index);
        spaces.insert(
            mu.clone(),
            Space { monomials, gram, basis, gram_basis_inv },
        );
    }

    let mut slice = ModuleSlice {
        lambda: lambda.clone(),
        depth,
        spaces,
        e_actions: BTreeMap::new(),
        f_actions: BTreeMap::new(),
    };

    // quotient matrices: class coordinates of a Verma vector y at nu are
    // gram_basis^{-1} * (S_nu[basis, :] y)
    let project = |slice: &ModuleSlice, nu: &Weight, y: &BTreeMap<Vec<u8>, BigInt>| -> Vec<Rat> {
        let sp = &slice.spaces[nu];
        let ix = &monomial_index[nu];
        let mut pairings = vec![Rat::zero(); sp.basis.len()];
        for (word, c) in y {
            let j = ix[word];
            for (bpos, &bi) in sp.basis.iter().enumerate() {
                let g = &sp.gram[bi][j];
                if !g.is_zero() {
                    pairings[bpos] =
                        pairings[bpos].clone() + Rat::from_integer(c * g);
                }
            }
        }
        (0..sp.basis.len())
            .map(|r| {
                let mut acc = Rat::zero();
                for (c, p) in pairings.iter().enumerate() {
                    if !p.is_zero() {
                        acc += sp.gram_basis_inv[r][c].clone() * p.clone();
                    }
                }
                acc
            })
            .collect()
    };

    let mu_list: Vec<Weight> = slice.spaces.keys().cloned().collect();
    for mu in &mu_list {
        let dim = slice.spaces[mu].dim();
        if dim == 0 {
            continue;
        }
        for &node in &alg.nodes() {
            // e_node: mu -> mu + alpha_node
            let up = mu.add(alg.simple_root(node));
            if slice.spaces.get(&up).is_some_and(|s| s.dim() > 0) {
                let mut cols = Vec::with_capacity(dim);
                for &bi in &slice.spaces[mu].basis.clone() {
                    let word = slice.spaces[mu].monomials[bi].clone();
                    let mut y = BTreeMap::new();
                    apply_e_monomial(alg, lambda, node, &word, &mut y, &BigInt::from(1));
                    cols.push(project(&slice, &up, &y));
                }
                let rows = slice.spaces[&up].dim();
                let matrix: Vec<Vec<Rat>> = (0..rows)
                    .map(|r| cols.iter().map(|c| c[r].clone()).collect())
                    .collect();
                slice.e_actions.insert((mu.clone(), node), matrix);
            }
            // f_node: mu -> mu - alpha_node
            let down = mu.sub(alg.simple_root(node));
            if slice.spaces.get(&down).is_some_and(|s| s.dim() > 0) {
                let mut cols = Vec::with_capacity(dim);
                for &bi in &slice.spaces[mu].basis.clone() {
                    let mut word = vec![node as u8];
                    word.extend_from_slice(&slice.spaces[mu].monomials[bi]);
                    let mut y = BTreeMap::new();
                    y.insert(word, BigInt::from(1));
                    cols.push(project(&slice, &down, &y));
                }
                let rows = slice.spaces[&down].dim();
                let matrix: Vec<Vec<Rat>> = (0..rows)
                    .map(|r| cols.iter().map(|c| c[r].clone()).collect())
                    .collect();
                slice.f_actions.insert((mu.clone(), node), matrix);
            }
        }
    }
    Ok(slice)
}

/// The finite part of an affine algebra as a standalone finite algebra with
/// aligned node labels (1..=r).
pub fn finite_part(alg: &Algebra) -> Result<Algebra> {
    let base = alg.base();
    match alg.kind() {
        AlgebraKind::Finite => Err(Error::InvalidInput("algebra is already finite".into())),
        AlgebraKind::Affine { dual, .. } => {
            let fin = if dual {
                // finite block of the transposed GCM is the dual finite type
                match base.series {
                    crate::root_system::Series::B => FiniteType::new(crate::root_system::Series::C, base.rank)?,
                    crate::root_system::Series::C => FiniteType::new(crate::root_system::Series::B, base.rank)?,
                    _ => base,
                }
            } else {
                base
            };
            if dual && matches!(base.series, crate::root_system::Series::F | crate::root_system::Series::G) {
                return Err(Error::InvalidInput(
                    "finite part of this twisted dual is not supported with aligned labels".into(),
                ));
            }
            Algebra::finite(fin)
        }
    }
}

/// True iff the affine Brylinski polynomial at the top of the mu_bar string
/// equals the finite-type one for the finite parts: the affine principal
/// nilpotent differs from the finite one by e_0, which kills the top energy
/// layer, so both filtrations agree there.
pub fn principal_vs_finite(
    alg: &Algebra,
    slice: &ModuleSlice,
    lambda_bar: &[i64],
    mu_bar: &[i64],
    k: i64,
) -> Result<bool> {
    if !alg.is_affine() {
        return Err(Error::InvalidInput("affine algebra required".into()));
    }
    if slice.lambda().level != k || slice.lambda().finite != lambda_bar {
        return Err(Error::InvalidInput("slice does not match (k, lambda_bar)".into()));
    }
    let mu_aff = Weight::new(k, mu_bar.to_vec(), slice.lambda().energy);
    let affine_poly = slice.principal_filtration(alg, &mu_aff)?;

    let fin = finite_part(alg)?;
    let lam_fin = Weight::new(0, lambda_bar.to_vec(), 0);
    let mu_fin = Weight::new(0, mu_bar.to_vec(), 0);
    if !weyl::is_dominant(&fin, &lam_fin) || !weyl::is_dominant(&fin, &mu_fin) {
        return Err(Error::InvalidInput("lambda_bar and mu_bar must be dominant".into()));
    }
    if !fin.dominates(&lam_fin, &mu_fin) {
        return Err(Error::InvalidInput("lambda_bar must dominate mu_bar".into()));
    }
    let fin_slice = construct_slice(&fin, &lam_fin, 0)?;
    let finite_poly = fin_slice.principal_filtration(&fin, &mu_fin)?;
    Ok(affine_poly == finite_poly)
}
