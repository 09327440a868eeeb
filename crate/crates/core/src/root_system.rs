//! Root-system data for finite simple and affine Kac-Moody algebras.
//!
//! An [`Algebra`] bundles everything downstream code needs about one algebra:
//! the (generalized) Cartan matrix, a symmetrizer, marks and comarks, the
//! normalized invariant bilinear form, the finite positive roots, and the
//! imaginary-root multiplicities.
//!
//! Weights live on the lattice `Z x Lambda x Z` as (level, finite, energy).
//! The finite coordinates of a weight `x` are the integers `<x, av_i>` against
//! the finite simple coroots (Dynkin labels), so
//!
//!   delta  = (0, 0, 1),      Lambda_0 = (1, 0, 0),
//!   <x, av_0> = level(x) - sum_i comark_i * finite_i(x).
//!
//! Supported affine constructions: the untwisted extension `X_r^(1)` of any
//! simple finite type, and its Langlands dual (the transposed GCM). For
//! non-simply-laced base types the dual is a twisted algebra:
//!
//!   dual B_r = A_{2r-1}^(2),  dual C_r = D_{r+1}^(2),
//!   dual F_4 = E_6^(2),       dual G_2 = D_4^(3).
//!
//! The invariant form is normalized so short finite roots of the algebra have
//! squared length 2, extended by (delta, delta) = 0, (Lambda_0, Lambda_0) = 0,
//! (Lambda_0, delta) = 1.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, rat_int, Rat};

/// Simple finite series symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        };
        write!(f, "{c}")
    }
}

/// A finite simple type such as `A2` or `F4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FiniteType {
    pub series: Series,
    pub rank: usize,
}

impl FiniteType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A => rank >= 1,
            Series::B => rank >= 2,
            Series::C => rank >= 2,
            Series::D => rank >= 4,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(FiniteType { series, rank })
        } else {
            Err(Error::InvalidType(format!(
                "{series}{rank} is not a simple finite type (A>=1, B,C>=2, D>=4, E6..E8, F4, G2)"
            )))
        }
    }

    /// Parse a symbol like "A1", "D4", "E8".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let series = match chars.next() {
            Some('A') | Some('a') => Series::A,
            Some('B') | Some('b') => Series::B,
            Some('C') | Some('c') => Series::C,
            Some('D') | Some('d') => Series::D,
            Some('E') | Some('e') => Series::E,
            Some('F') | Some('f') => Series::F,
            Some('G') | Some('g') => Series::G,
            _ => return Err(Error::InvalidType(format!("cannot parse type symbol {s:?}"))),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidType(format!("cannot parse rank in {s:?}")))?;
        FiniteType::new(series, rank)
    }

    pub fn is_simply_laced(&self) -> bool {
        matches!(self.series, Series::A | Series::D | Series::E)
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

/// A point of `Z x Lambda x Z`: (level, finite Dynkin labels, energy).
/// Finite-type algebras use level = energy = 0 throughout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Weight {
    pub level: i64,
    pub finite: Vec<i64>,
    pub energy: i64,
}

impl Weight {
    pub fn new(level: i64, finite: Vec<i64>, energy: i64) -> Self {
        Weight { level, finite, energy }
    }

    pub fn zero(rank: usize) -> Self {
        Weight { level: 0, finite: vec![0; rank], energy: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.level == 0 && self.energy == 0 && self.finite.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        assert_eq!(self.finite.len(), other.finite.len());
        Weight {
            level: self.level + other.level,
            finite: self
                .finite
                .iter()
                .zip(&other.finite)
                .map(|(a, b)| a + b)
                .collect(),
            energy: self.energy + other.energy,
        }
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        self.add(&other.scale(-1))
    }

    pub fn scale(&self, c: i64) -> Weight {
        Weight {
            level: c * self.level,
            finite: self.finite.iter().map(|v| c * v).collect(),
            energy: c * self.energy,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?}, {})", self.level, self.finite, self.energy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    Finite,
    /// Untwisted extension or its Langlands dual; `twist` is the order of the
    /// diagram automorphism in the loop realization (1 for untwisted types).
    Affine {
        dual: bool,
        twist: u32,
    },
}

/// A positive root of the finite part, kept in both label and simple-root
/// coordinates, with its squared length under the invariant form.
#[derive(Debug, Clone)]
pub struct FiniteRoot {
    pub labels: Vec<i64>,
    pub coeffs: Vec<i64>,
    pub norm: Rat,
    /// delta-period at which the real-root family `root + n*delta` occurs:
    /// 1 for short roots, the twist order for long roots of twisted duals.
    pub period: u32,
}

/// Immutable root-system data for one algebra. All operations are pure.
pub struct Algebra {
    label: String,
    base: FiniteType,
    kind: AlgebraKind,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    symmetrizer: Vec<Rat>,
    marks: Vec<i64>,
    comarks: Vec<i64>,
    dual_coxeter: i64,
    simple_roots: Vec<Weight>,
    rho: Weight,
    gram: Vec<Vec<Rat>>,
    fin_inverse: Vec<Vec<Rat>>,
    fin_pos_roots: Vec<FiniteRoot>,
    imag_cycles: Vec<u32>,
}

/// Finite Cartan matrix in Bourbaki numbering together with the symmetrizer
/// d_i = (alpha_i, alpha_i)/2 normalized so long roots have d = 1.
fn finite_cartan(t: FiniteType) -> (Vec<Vec<i64>>, Vec<Rat>) {
    let r = t.rank;
    let mut a = vec![vec![0i64; r]; r];
    for i in 0..r {
        a[i][i] = 2;
    }
    let mut chain = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match t.series {
        Series::A => {
            for i in 0..r - 1 {
                chain(i, i + 1);
            }
        }
        Series::B => {
            // alpha_1..alpha_{r-1} long, alpha_r short
            for i in 0..r - 1 {
                chain(i, i + 1);
            }
            a[r - 2][r - 1] = -1;
            a[r - 1][r - 2] = -2;
        }
        Series::C => {
            // alpha_1..alpha_{r-1} short, alpha_r long
            for i in 0..r - 1 {
                chain(i, i + 1);
            }
            a[r - 2][r - 1] = -2;
            a[r - 1][r - 2] = -1;
        }
        Series::D => {
            for i in 0..r - 2 {
                chain(i, i + 1);
            }
            chain(r - 3, r - 1);
        }
        Series::E => {
            // Bourbaki: path 1-3-4-5-...: node 2 hangs off node 4
            chain(0, 2);
            chain(2, 3);
            chain(1, 3);
            for i in 3..r - 1 {
                chain(i, i + 1);
            }
        }
        Series::F => {
            chain(0, 1);
            chain(2, 3);
            a[1][2] = -1;
            a[2][1] = -2;
        }
        Series::G => {
            // alpha_1 short, alpha_2 long
            a[0][1] = -3;
            a[1][0] = -1;
        }
    }
    let d: Vec<Rat> = match t.series {
        Series::A | Series::D | Series::E => vec![rat_int(1); r],
        Series::B => {
            let mut d = vec![rat_int(1); r];
            d[r - 1] = Rat::new(1.into(), 2.into());
            d
        }
        Series::C => {
            let mut d = vec![Rat::new(1.into(), 2.into()); r];
            d[r - 1] = rat_int(1);
            d
        }
        Series::F => vec![
            rat_int(1),
            rat_int(1),
            Rat::new(1.into(), 2.into()),
            Rat::new(1.into(), 2.into()),
        ],
        Series::G => vec![Rat::new(1.into(), 3.into()), rat_int(1)],
    };
    (a, d)
}

/// Positive roots of a finite Cartan matrix as simple-root coefficient
/// vectors, generated with the usual root-string closure by height.
fn finite_positive_root_coeffs(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = a.len();
    let mut roots: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let mut v = vec![0i64; r];
            v[i] = 1;
            v
        })
        .collect();
    let mut frontier = roots.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for beta in &frontier {
            for i in 0..r {
                // <beta, av_i> = sum_j beta_j A_ij
                let pairing: i64 = (0..r).map(|j| beta[j] * a[i][j]).sum();
                // p = largest integer with beta - p*alpha_i a root
                let mut p = 0i64;
                loop {
                    let mut down = beta.clone();
                    down[i] -= p + 1;
                    if down[i] >= 0 && (roots.contains(&down) || down.iter().all(|&v| v == 0)) {
                        if down.iter().all(|&v| v == 0) {
                            break; // beta = alpha_i itself; string below is not a root
                        }
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pairing > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !roots.contains(&up) && !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        frontier = next;
    }
    roots.sort_by_key(|v| (v.iter().sum::<i64>(), v.clone()));
    roots
}

/// Diagram automorphism of the simply laced algebra `g'` appearing in the
/// loop realization of the dual of an untwisted non-simply-laced algebra.
/// Returns (permutation of the g' nodes as 0-based images, order m).
fn dual_realization_automorphism(base: FiniteType) -> (Vec<usize>, u32) {
    let r = base.rank;
    match base.series {
        // dual(B_r) = A_{2r-1}^(2): sigma flips the A_{2r-1} path
        Series::B => {
            let n = 2 * r - 1;
            ((0..n).map(|i| n - 1 - i).collect(), 2)
        }
        // dual(C_r) = D_{r+1}^(2): sigma swaps the two fork nodes of D_{r+1}
        Series::C => {
            let n = r + 1;
            let mut perm: Vec<usize> = (0..n).collect();
            perm.swap(n - 2, n - 1);
            (perm, 2)
        }
        // dual(F_4) = E_6^(2): sigma is the E_6 diagram flip (1<->6, 3<->5)
        Series::F => (vec![5, 1, 4, 3, 2, 0], 2),
        // dual(G_2) = D_4^(3): triality rotating the three outer nodes of D_4
        // (Bourbaki D4: nodes 1, 3, 4 attach to node 2)
        Series::G => (vec![2, 1, 3, 0], 3),
        // simply laced: dual is isomorphic, identity automorphism on g itself
        _ => ((0..r).collect(), 1),
    }
}

fn cycle_lengths(perm: &[usize]) -> Vec<u32> {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0u32;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = perm[cur];
            len += 1;
        }
        cycles.push(len);
    }
    cycles
}

impl Algebra {
    /// The untwisted affine extension of `base`, or (with `dual = true`) its
    /// Langlands dual. For simply laced base types the two coincide.
    pub fn affine(base: FiniteType, dual: bool) -> Result<Algebra> {
        let r = base.rank;
        let (a_fin, d_fin) = finite_cartan(base);
        let root_coeffs = finite_positive_root_coeffs(&a_fin);

        // highest root: unique root dominating all others coefficientwise
        let theta = root_coeffs
            .iter()
            .max_by_key(|v| v.iter().sum::<i64>())
            .unwrap()
            .clone();
        for v in &root_coeffs {
            for i in 0..r {
                if v[i] > theta[i] {
                    return Err(Error::Internal("highest root not dominant".into()));
                }
            }
        }
        // coroot of theta: theta_vee = sum_i (theta_i d_i) av_i
        let theta_vee: Vec<i64> = (0..r)
            .map(|i| {
                let c = rat_int(theta[i]) * d_fin[i].clone();
                c.to_integer()
                    .to_i64()
                    .expect("coroot coefficient fits i64")
            })
            .collect();

        // untwisted GCM with node 0 adjoined
        let n = r + 1;
        let mut cartan = vec![vec![0i64; n]; n];
        cartan[0][0] = 2;
        for i in 1..n {
            for j in 1..n {
                cartan[i][j] = a_fin[i - 1][j - 1];
            }
        }
        for j in 1..n {
            // A_0j = -<alpha_j, theta_vee>
            cartan[0][j] = -(0..r).map(|i| theta_vee[i] * a_fin[i][j - 1]).sum::<i64>();
            // A_j0 = -<theta, av_j>
            cartan[j][0] = -(0..r).map(|k| theta[k] * a_fin[j - 1][k]).sum::<i64>();
        }
        let mut symmetrizer: Vec<Rat> = std::iter::once(rat_int(1))
            .chain(d_fin.iter().cloned())
            .collect();

        let (twist, imag_cycles) = if dual {
            let (perm, order) = dual_realization_automorphism(base);
            cartan = transpose(&cartan);
            for d in &mut symmetrizer {
                *d = rat_int(1) / d.clone();
            }
            (order, cycle_lengths(&perm))
        } else {
            (1, vec![1; r])
        };

        let marks = linalg::primitive_kernel(&cartan)
            .ok_or_else(|| Error::Internal("GCM kernel is not one-dimensional".into()))?;
        let comarks = linalg::primitive_kernel(&transpose(&cartan))
            .ok_or_else(|| Error::Internal("transposed GCM kernel is not one-dimensional".into()))?;
        let to_i64 = |v: &[num_bigint::BigInt]| -> Result<Vec<i64>> {
            v.iter()
                .map(|x| x.to_i64().ok_or_else(|| Error::Internal("mark overflow".into())))
                .collect()
        };
        let marks = to_i64(&marks)?;
        let comarks = to_i64(&comarks)?;
        if marks[0] != 1 || comarks[0] != 1 {
            return Err(Error::Internal("affine node mark normalization failed".into()));
        }
        let dual_coxeter: i64 = comarks.iter().sum();

        let dual_name = match (base.series, dual) {
            (_, false) => format!("{base}^(1)"),
            (Series::B, true) => format!("A{}^(2)", 2 * r - 1),
            (Series::C, true) => format!("D{}^(2)", r + 1),
            (Series::F, true) => "E6^(2)".to_string(),
            (Series::G, true) => "D4^(3)".to_string(),
            (_, true) => format!("{base}^(1)"),
        };
        let label = if dual && !base.is_simply_laced() {
            format!("{dual_name} = dual of {base}^(1)")
        } else {
            dual_name
        };

        Self::assemble(
            label,
            base,
            AlgebraKind::Affine { dual, twist },
            r,
            cartan,
            symmetrizer,
            marks,
            comarks,
            dual_coxeter,
            imag_cycles,
        )
    }

    /// Finite simple root data (no affine node, no level or energy).
    pub fn finite(base: FiniteType) -> Result<Algebra> {
        let (cartan, symmetrizer) = finite_cartan(base);
        Self::assemble(
            base.to_string(),
            base,
            AlgebraKind::Finite,
            base.rank,
            cartan,
            symmetrizer,
            vec![],
            vec![],
            0,
            vec![],
        )
    }

    /// Parse-and-build convenience used by the CLI: "A1" etc.
    pub fn affine_from_symbol(symbol: &str, dual: bool) -> Result<Algebra> {
        Algebra::affine(FiniteType::parse(symbol)?, dual)
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        label: String,
        base: FiniteType,
        kind: AlgebraKind,
        rank: usize,
        cartan: Vec<Vec<i64>>,
        symmetrizer: Vec<Rat>,
        marks: Vec<i64>,
        comarks: Vec<i64>,
        dual_coxeter: i64,
        imag_cycles: Vec<u32>,
    ) -> Result<Algebra> {
        let affine = kind != AlgebraKind::Finite;
        let off = if affine { 0 } else { 1 };

        // finite block of this algebra's own Cartan matrix
        let fin_block: Vec<Vec<i64>> = (0..rank)
            .map(|i| (0..rank).map(|j| cartan[i + 1 - off][j + 1 - off]).collect())
            .collect();
        let fin_rat: Vec<Vec<Rat>> = fin_block
            .iter()
            .map(|row| row.iter().map(|&v| rat_int(v)).collect())
            .collect();
        let fin_inverse = linalg::invert(&fin_rat)
            .ok_or_else(|| Error::Internal("finite Cartan block is singular".into()))?;
        let d_fin: Vec<Rat> = (0..rank).map(|i| symmetrizer[i + 1 - off].clone()).collect();
        // gram matrix of fundamental weights: F_ij = (omega_i, omega_j) = (A^-1)_ji d_j
        let gram: Vec<Vec<Rat>> = (0..rank)
            .map(|i| (0..rank).map(|j| fin_inverse[j][i].clone() * d_fin[j].clone()).collect())
            .collect();

        // simple roots in (level, labels, energy) coordinates
        let nodes: Vec<usize> = if affine { (0..=rank).collect() } else { (1..=rank).collect() };
        let mut simple_roots = Vec::new();
        for &node in &nodes {
            let j = node + 1 - off - 1; // column index into cartan
            let labels: Vec<i64> = (0..rank).map(|i| cartan[i + 1 - off][j]).collect();
            let energy = i64::from(affine && node == 0);
            simple_roots.push(Weight::new(0, labels, energy));
        }

        // finite positive roots with norms and delta-periods
        let twist = match kind {
            AlgebraKind::Affine { twist, .. } => twist,
            AlgebraKind::Finite => 1,
        };
        let mut fin_pos_roots = Vec::new();
        for coeffs in finite_positive_root_coeffs(&fin_block) {
            let labels: Vec<i64> = (0..rank)
                .map(|i| (0..rank).map(|j| fin_block[i][j] * coeffs[j]).sum())
                .collect();
            let mut norm = Rat::zero();
            for i in 0..rank {
                for j in 0..rank {
                    norm += rat_int(coeffs[i] * cartan[i + 1 - off][j + 1 - off])
                            * d_fin[i].clone()
                            * rat_int(coeffs[j]);
                }
            }
            let period = if twist == 1 {
                1
            } else {
                let half = norm.clone() / rat_int(2);
                
                half
                    .to_integer()
                    .to_u32()
                    .filter(|p| *p == 1 || *p == twist)
                    .ok_or_else(|| Error::Internal("unexpected root norm in twisted type".into()))?
            };
            fin_pos_roots.push(FiniteRoot { labels, coeffs, norm, period });
        }

        let rho = Weight::new(if affine { dual_coxeter } else { 0 }, vec![1; rank], 0);

        Ok(Algebra {
            label,
            base,
            kind,
            rank,
            cartan,
            symmetrizer,
            marks,
            comarks,
            dual_coxeter,
            simple_roots,
            rho,
            gram,
            fin_inverse,
            fin_pos_roots,
            imag_cycles,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn base(&self) -> FiniteType {
        self.base
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn is_affine(&self) -> bool {
        self.kind != AlgebraKind::Finite
    }

    /// Rank of the finite part (the affine algebra has rank + 1 nodes).
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Node indices carrying simple reflections: 0..=r affine, 1..=r finite.
    pub fn nodes(&self) -> Vec<usize> {
        if self.is_affine() {
            (0..=self.rank).collect()
        } else {
            (1..=self.rank).collect()
        }
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// Cartan matrix entry A_ij = <alpha_j, av_i> by node index.
    pub fn cartan_entry(&self, i: usize, j: usize) -> i64 {
        let off = if self.is_affine() { 0 } else { 1 };
        self.cartan[i - off][j - off]
    }

    pub fn symmetrizer(&self) -> &[Rat] {
        &self.symmetrizer
    }

    pub fn marks(&self) -> &[i64] {
        &self.marks
    }

    pub fn comarks(&self) -> &[i64] {
        &self.comarks
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.dual_coxeter
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn simple_root(&self, node: usize) -> &Weight {
        let off = if self.is_affine() { 0 } else { 1 };
        &self.simple_roots[node - off]
    }

    pub fn delta(&self) -> Weight {
        assert!(self.is_affine());
        Weight::new(0, vec![0; self.rank], 1)
    }

    pub fn fundamental_weight(&self, node: usize) -> Weight {
        if self.is_affine() && node == 0 {
            return Weight::new(1, vec![0; self.rank], 0);
        }
        let mut finite = vec![0i64; self.rank];
        finite[node - 1] = 1;
        let level = if self.is_affine() { self.comarks[node] } else { 0 };
        Weight::new(level, finite, 0)
    }

    pub fn finite_positive_roots(&self) -> &[FiniteRoot] {
        &self.fin_pos_roots
    }

    /// `<x, av_node>` for a simple coroot of this algebra.
    pub fn pairing(&self, x: &Weight, node: usize) -> i64 {
        if self.is_affine() && node == 0 {
            let tail: i64 = (1..=self.rank).map(|i| self.comarks[i] * x.finite[i - 1]).sum();
            x.level - tail
        } else {
            x.finite[node - 1]
        }
    }

    pub fn valid_node(&self, node: usize) -> bool {
        if self.is_affine() {
            node <= self.rank
        } else {
            (1..=self.rank).contains(&node)
        }
    }

    /// The normalized invariant symmetric bilinear form.
    pub fn bilinear_form(&self, x: &Weight, y: &Weight) -> Rat {
        let mut v = rat_int(x.level * y.energy + y.level * x.energy);
        for i in 0..self.rank {
            for j in 0..self.rank {
                if x.finite[i] != 0 && y.finite[j] != 0 {
                    v += rat_int(x.finite[i]) * self.gram[i][j].clone() * rat_int(y.finite[j]);
                }
            }
        }
        v
    }

    /// Multiplicity of the imaginary root n*delta.
    pub fn imag_mult(&self, n: i64) -> u32 {
        if !self.is_affine() || n <= 0 {
            return 0;
        }
        let twist = match self.kind {
            AlgebraKind::Affine { twist, .. } => twist,
            AlgebraKind::Finite => unreachable!(),
        };
        self.imag_cycles
            .iter()
            .filter(|&&c| (c as i64 * n) % twist as i64 == 0)
            .count() as u32
    }

    /// Cycle structure of the realization automorphism (identity for
    /// untwisted types); exposed so tests can recompute imag_mult directly.
    pub fn realization_cycles(&self) -> &[u32] {
        &self.imag_cycles
    }

    /// All positive roots with delta-coefficient <= depth, with multiplicities.
    /// For finite algebras this is the finite positive root list.
    pub fn positive_roots_up_to(&self, depth: i64) -> Result<Vec<(Weight, u32)>> {
        if depth < 0 {
            return Err(Error::InvalidInput("depth must be nonnegative".into()));
        }
        let mut out = Vec::new();
        for root in &self.fin_pos_roots {
            out.push((Weight::new(0, root.labels.clone(), 0), 1));
        }
        if self.is_affine() {
            for n in 1..=depth {
                for root in &self.fin_pos_roots {
                    if n % root.period as i64 == 0 {
                        for sign in [1i64, -1] {
                            let labels: Vec<i64> = root.labels.iter().map(|&v| sign * v).collect();
                            out.push((Weight::new(0, labels, n), 1));
                        }
                    }
                }
                let m = self.imag_mult(n);
                if m > 0 {
                    out.push((Weight::new(0, vec![0; self.rank], n), m));
                }
            }
        }
        out.sort_by(|a, b| (a.0.energy, &a.0.finite).cmp(&(b.0.energy, &b.0.finite)));
        Ok(out)
    }

    /// Express a level-0 weight in simple-root coordinates (node-ordered,
    /// affine node first for affine algebras). None when not an integral
    /// combination.
    pub fn root_coords(&self, beta: &Weight) -> Option<Vec<i64>> {
        if beta.level != 0 {
            return None;
        }
        let mut coords = Vec::new();
        let mut labels = beta.finite.clone();
        if self.is_affine() {
            let c0 = beta.energy;
            coords.push(c0);
            let alpha0 = self.simple_root(0);
            for i in 0..self.rank {
                labels[i] -= c0 * alpha0.finite[i];
            }
        } else if beta.energy != 0 {
            return None;
        }
        let rhs: Vec<Rat> = labels.iter().map(|&v| rat_int(v)).collect();
        for i in 0..self.rank {
            let mut v = Rat::zero();
            for j in 0..self.rank {
                v += self.fin_inverse[i][j].clone() * rhs[j].clone();
            }
            if !v.is_integer() {
                return None;
            }
            coords.push(v.to_integer().to_i64()?);
        }
        Some(coords)
    }

    /// True when `hi - lo` is a nonnegative integer combination of simple roots.
    pub fn dominates(&self, hi: &Weight, lo: &Weight) -> bool {
        if hi.level != lo.level {
            return false;
        }
        match self.root_coords(&hi.sub(lo)) {
            Some(c) => c.iter().all(|&v| v >= 0),
            None => false,
        }
    }

    /// Dominant finite parts of level-k weights (the level-k alcove):
    /// labels >= 0 with sum comark_i * label_i <= k.
    pub fn level_alcove_points(&self, k: i64) -> Vec<Vec<i64>> {
        assert!(self.is_affine());
        fn rec(comarks: &[i64], budget: i64, acc: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
            if acc.len() == comarks.len() {
                out.push(acc.clone());
                return;
            }
            let c = comarks[acc.len()];
            let mut v = 0;
            while c * v <= budget {
                acc.push(v);
                rec(comarks, budget - c * v, acc, out);
                acc.pop();
                v += 1;
            }
        }
        let comarks: Vec<i64> = (1..=self.rank).map(|i| self.comarks[i]).collect();
        let mut out = Vec::new();
        rec(&comarks, k.max(0), &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// Render a weight in the fundamental-weight / delta basis, e.g. "L0 - 2*L1 + 3*d".
    pub fn weight_string(&self, x: &Weight) -> String {
        let mut terms: Vec<(i64, String)> = Vec::new();
        for &node in &self.nodes() {
            terms.push((self.pairing(x, node), format!("L{node}")));
        }
        if self.is_affine() {
            terms.push((x.energy, "d".to_string()));
        }
        let mut s = String::new();
        for (c, name) in terms {
            if c == 0 {
                continue;
            }
            if s.is_empty() {
                if c < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(if c < 0 { " - " } else { " + " });
            }
            let a = c.abs();
            if a == 1 {
                s.push_str(&name);
            } else {
                s.push_str(&format!("{a}*{name}"));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect()
}

/// Serializable dump of the root data, used by the CLI `rootdata` command.
#[derive(Serialize)]
pub struct RootDataDump {
    pub label: String,
    pub base: FiniteType,
    pub dual: bool,
    pub twist: u32,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    pub symmetrizer: Vec<String>,
    pub marks: Vec<i64>,
    pub comarks: Vec<i64>,
    pub dual_coxeter: i64,
    pub imag_mult: Vec<u32>,
    pub positive_roots: Vec<RootEntry>,
}

#[derive(Serialize)]
pub struct RootEntry {
    pub weight: Weight,
    pub mult: u32,
}

impl Algebra {
    pub fn dump(&self, depth: i64) -> Result<RootDataDump> {
        let (dual, twist) = match self.kind {
            AlgebraKind::Affine { dual, twist } => (dual, twist),
            AlgebraKind::Finite => (false, 0),
        };
        Ok(RootDataDump {
            label: self.label.clone(),
            base: self.base,
            dual,
            twist,
            rank: self.rank,
            cartan: self.cartan.clone(),
            symmetrizer: self.symmetrizer.iter().map(|d| d.to_string()).collect(),
            marks: self.marks.clone(),
            comarks: self.comarks.clone(),
            dual_coxeter: self.dual_coxeter,
            imag_mult: (1..=depth.max(0)).map(|n| self.imag_mult(n)).collect(),
            positive_roots: self
                .positive_roots_up_to(depth)?
                .into_iter()
                .map(|(weight, mult)| RootEntry { weight, mult })
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aff(sym: &str, dual: bool) -> Algebra {
        Algebra::affine_from_symbol(sym, dual).unwrap()
    }

    #[test]
    fn a1_affine_data() {
        let g = aff("A1", false);
        assert_eq!(g.cartan(), &[vec![2, -2], vec![-2, 2]]);
        assert_eq!(g.marks(), &[1, 1]);
        assert_eq!(g.comarks(), &[1, 1]);
        assert_eq!(g.dual_coxeter(), 2);
        assert_eq!(g.imag_mult(1), 1);
        assert_eq!(g.imag_mult(5), 1);
    }

    #[test]
    fn simply_laced_self_dual() {
        let g = aff("A2", false);
        let gd = aff("A2", true);
        assert_eq!(g.cartan(), gd.cartan());
        assert_eq!(g.marks(), gd.marks());
        assert_eq!(g.symmetrizer(), gd.symmetrizer());
        assert_eq!(g.dual_coxeter(), 3); // dual Coxeter number of sl(3)
    }

    #[test]
    fn dual_of_b2_is_twisted() {
        let g = aff("B2", true);
        assert!(g.label().starts_with("A3^(2)"));
        // alternating imaginary multiplicities r, r-1 from the A3 flip
        assert_eq!(g.imag_mult(1), 1);
        assert_eq!(g.imag_mult(2), 2);
        assert_eq!(g.imag_mult(3), 1);
        assert_eq!(g.imag_mult(4), 2);
        // recompute dim t'_n directly from the automorphism cycles
        let cycles = g.realization_cycles();
        assert_eq!(cycles.len(), 2);
        for n in 1..=4i64 {
            let direct = cycles.iter().filter(|&&c| (c as i64 * n) % 2 == 0).count() as u32;
            assert_eq!(direct, g.imag_mult(n));
        }
    }

    #[test]
    fn twisted_dual_tables() {
        // dual(C2) = D3^(2), dual(G2) = D4^(3), dual(F4) = E6^(2)
        let c2 = aff("C2", true);
        assert_eq!((c2.imag_mult(1), c2.imag_mult(2)), (1, 2));
        let g2 = aff("G2", true);
        assert_eq!(
            (g2.imag_mult(1), g2.imag_mult(2), g2.imag_mult(3)),
            (1, 1, 2)
        );
        let f4 = aff("F4", true);
        assert_eq!((f4.imag_mult(1), f4.imag_mult(2)), (2, 4));
    }

    #[test]
    fn marks_annihilated_for_supported_types() {
        let mut algebras = Vec::new();
        for sym in ["A1", "A2", "A3", "A4", "D4", "D5", "E6", "E7", "E8"] {
            algebras.push(aff(sym, false));
        }
        for sym in ["B2", "B3", "B4", "C2", "C3", "C4", "F4", "G2"] {
            algebras.push(aff(sym, true));
        }
        for g in &algebras {
            let n = g.rank() + 1;
            for i in 0..n {
                let row: i64 = (0..n).map(|j| g.cartan()[i][j] * g.marks()[j]).sum();
                assert_eq!(row, 0, "A*marks != 0 for {}", g.label());
                let col: i64 = (0..n).map(|j| g.cartan()[j][i] * g.comarks()[j]).sum();
                assert_eq!(col, 0, "A^T*comarks != 0 for {}", g.label());
            }
            for &node in &g.nodes() {
                let alpha = g.simple_root(node).clone();
                let norm = g.bilinear_form(&alpha, &alpha);
                let off = usize::from(!g.is_affine());
                assert_eq!(norm, g.symmetrizer()[node - off].clone() * rat_int(2));
            }
        }
    }

    #[test]
    fn dual_coxeter_of_a_series_is_n() {
        for n in 2..=5i64 {
            let g = aff(&format!("A{}", n - 1), false);
            assert_eq!(g.dual_coxeter(), n);
        }
    }

    #[test]
    fn dual_coxeter_numbers_match_classical_table() {
        for (sym, expected) in [
            ("A1", 2i64),
            ("A4", 5),
            ("B3", 5),  // 2r - 1
            ("B5", 9),
            ("C3", 4),  // r + 1
            ("C5", 6),
            ("D4", 6),  // 2r - 2
            ("D6", 10),
            ("E6", 12),
            ("E7", 18),
            ("E8", 30),
            ("F4", 9),
            ("G2", 4),
        ] {
            let g = aff(sym, false);
            assert_eq!(g.dual_coxeter(), expected, "h-check of {sym}");
        }
        // the dual algebra's number is the Coxeter number of the base
        for (sym, coxeter) in [("B3", 6i64), ("C4", 8), ("F4", 12), ("G2", 6)] {
            let g = aff(sym, true);
            assert_eq!(g.dual_coxeter(), coxeter, "Coxeter number of {sym}");
        }
    }

    #[test]
    fn form_conventions() {
        let g = aff("A1", false);
        let delta = g.delta();
        let l0 = g.fundamental_weight(0);
        assert_eq!(g.bilinear_form(&delta, &delta), rat_int(0));
        assert_eq!(g.bilinear_form(&l0, &l0), rat_int(0));
        assert_eq!(g.bilinear_form(&l0, &delta), rat_int(1));
        let a1 = g.simple_root(1).clone();
        assert_eq!(g.bilinear_form(&a1, &a1), rat_int(2));
    }

    #[test]
    fn positive_roots_a1_depths() {
        let g = aff("A1", false);
        let d0 = g.positive_roots_up_to(0).unwrap();
        assert_eq!(d0.len(), 1);
        assert_eq!(d0[0].0, Weight::new(0, vec![2], 0));

        let d1 = g.positive_roots_up_to(1).unwrap();
        // alpha_1, alpha_0 = delta - alpha_1, delta (mult 1), delta + alpha_1
        assert_eq!(d1.len(), 4);
        let total_mult: u32 = d1.iter().map(|r| r.1).sum();
        assert_eq!(total_mult, 4);
        assert!(d1.contains(&(Weight::new(0, vec![-2], 1), 1)));
        assert!(d1.contains(&(Weight::new(0, vec![0], 1), 1)));
        assert!(d1.contains(&(Weight::new(0, vec![2], 1), 1)));
    }

    #[test]
    fn positive_roots_a2_depth1() {
        let g = aff("A2", false);
        let roots = g.positive_roots_up_to(1).unwrap();
        let finite: Vec<_> = roots.iter().filter(|r| r.0.energy == 0).collect();
        let reals: Vec<_> = roots
            .iter()
            .filter(|r| r.0.energy == 1 && r.0.finite.iter().any(|&v| v != 0))
            .collect();
        let imag: Vec<_> = roots
            .iter()
            .filter(|r| r.0.energy == 1 && r.0.finite.iter().all(|&v| v == 0))
            .collect();
        assert_eq!(finite.len(), 3);
        assert_eq!(reals.len(), 6);
        assert_eq!(imag.len(), 1);
        assert_eq!(imag[0].1, 2);
    }

    #[test]
    fn truncation_is_nested() {
        let g = aff("B2", true);
        let d2 = g.positive_roots_up_to(2).unwrap();
        let d3 = g.positive_roots_up_to(3).unwrap();
        for r in &d2 {
            assert!(d3.contains(r));
        }
        // real-root count at each existing level matches the period rule
        for n in 1..=3i64 {
            let count = d3.iter().filter(|r| r.0.energy == n && r.1 == 1 && r.0.finite.iter().any(|&v| v != 0)).count();
            let expected = 2 * g
                .finite_positive_roots()
                .iter()
                .filter(|root| n % root.period as i64 == 0)
                .count();
            assert_eq!(count, expected);
        }
    }

    #[test]
    fn root_coords_round_trip() {
        let g = aff("A2", false);
        let beta = g.simple_root(0).add(g.simple_root(2)).add(&g.simple_root(2).scale(1));
        let coords = g.root_coords(&beta).unwrap();
        assert_eq!(coords, vec![1, 0, 2]);
        let outside = Weight::new(0, vec![1, 0], 0);
        assert_eq!(g.root_coords(&outside), None);
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(FiniteType::parse("D3").is_err());
        assert!(FiniteType::parse("E9").is_err());
        assert!(FiniteType::parse("H4").is_err());
        assert!(FiniteType::parse("B1").is_err());
    }

    #[test]
    fn finite_a2_roots() {
        let g = Algebra::finite(FiniteType::parse("A2").unwrap()).unwrap();
        assert_eq!(g.finite_positive_roots().len(), 3);
        assert_eq!(g.nodes(), vec![1, 2]);
        let theta = &g.finite_positive_roots().last().unwrap().labels;
        assert_eq!(theta, &vec![1, 1]);
    }

    #[test]
    fn g2_has_six_positive_roots() {
        let g = Algebra::finite(FiniteType::parse("G2").unwrap()).unwrap();
        assert_eq!(g.finite_positive_roots().len(), 6);
    }
}
