//! Freudenthal's multiplicity recursion for integrable highest-weight
//! modules over symmetrizable Kac-Moody algebras:
//!
//!   (|lambda+rho|^2 - |mu+rho|^2) m_mu
//!       = 2 sum_{alpha > 0} mult(alpha) sum_{j >= 1} (mu + j alpha, alpha) m_{mu + j alpha},
//!
//! with imaginary roots n*delta entering through their multiplicities.
//! This is the independent multiplicity oracle the rest of the crate checks
//! against. The table stores dominant weights; arbitrary weights are looked
//! up through Weyl reduction (multiplicity is W-invariant).

use std::collections::{BTreeMap, HashSet};

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{rat_int, Rat};
use crate::qpoly::QPolynomial;
use crate::root_system::{Algebra, Weight};
use crate::weyl;

/// Weight multiplicities of L(lambda), complete for every weight whose
/// delta-drop below lambda is at most `depth` (finite types ignore depth and
/// are complete outright).
pub struct MultiplicityTable {
    lambda: Weight,
    depth: i64,
    dominant: BTreeMap<(i64, Vec<i64>), u64>,
}

impl MultiplicityTable {
    pub fn new(alg: &Algebra, lambda: &Weight, depth: i64) -> Result<Self> {
        if !weyl::is_dominant(alg, lambda) {
            return Err(Error::InvalidInput("lambda must be dominant".into()));
        }
        if alg.is_affine() && lambda.level <= 0 {
            return Err(Error::NonPositiveLevel);
        }
        if depth < 0 {
            return Err(Error::InvalidInput("depth must be nonnegative".into()));
        }

        // candidate dominant weights mu <= lambda within the depth window
        let mut candidates: Vec<(Vec<i64>, Weight)> = Vec::new();
        if alg.is_affine() {
            for drop in 0..=depth {
                for finite in alg.level_alcove_points(lambda.level) {
                    let mu = Weight::new(lambda.level, finite, lambda.energy - drop);
                    if let Some(coords) = alg.root_coords(&lambda.sub(&mu)) {
                        if coords.iter().all(|&c| c >= 0) {
                            candidates.push((coords, mu));
                        }
                    }
                }
            }
        } else {
            // box bound: lambda - mu <= lambda - w0(lambda) for dominant mu
            let lowest_neg = weyl::reduce_to_dominant(alg, &lambda.scale(-1))?.weight;
            let bound = alg
                .root_coords(&lambda.add(&lowest_neg))
                .ok_or_else(|| Error::Internal("lambda + lambda* outside root lattice".into()))?;
            let rank = alg.rank();
            let mut coords = vec![0i64; rank];
            loop {
                let mut beta = Weight::zero(rank);
                for (i, &c) in coords.iter().enumerate() {
                    beta = beta.add(&alg.simple_root(i + 1).scale(c));
                }
                let mu = lambda.sub(&beta);
                if weyl::is_dominant(alg, &mu) {
                    candidates.push((coords.clone(), mu));
                }
                // odometer over the box
                let mut pos = 0;
                loop {
                    if pos == rank {
                        break;
                    }
                    coords[pos] += 1;
                    if coords[pos] <= bound[pos] {
                        break;
                    }
                    coords[pos] = 0;
                    pos += 1;
                }
                if pos == rank {
                    break;
                }
            }
        }
        candidates.sort_by_key(|(coords, _)| (coords.iter().sum::<i64>(), coords.clone()));

        let roots = alg.positive_roots_up_to(if alg.is_affine() { depth } else { 0 })?;
        let roots: Vec<(Weight, Vec<i64>, u32)> = roots
            .into_iter()
            .map(|(w, m)| {
                let coords = alg.root_coords(&w).expect("positive root has root coordinates");
                (w, coords, m)
            })
            .collect();

        let shifted_top = lambda.add(alg.rho());
        let top_norm = alg.bilinear_form(&shifted_top, &shifted_top);

        let mut table = MultiplicityTable {
            lambda: lambda.clone(),
            depth,
            dominant: BTreeMap::new(),
        };

        for (beta_coords, mu) in candidates {
            let height: i64 = beta_coords.iter().sum();
            if height == 0 {
                table.insert(&mu, 1);
                continue;
            }
            let mut num = Rat::zero();
            for (alpha, alpha_coords, mult) in &roots {
                // largest j with mu + j*alpha still <= lambda
                let j_hi = alpha_coords
                    .iter()
                    .zip(&beta_coords)
                    .filter(|(a, _)| **a > 0)
                    .map(|(a, b)| b / a)
                    .min()
                    .unwrap_or(0);
                for j in 1..=j_hi {
                    if alpha_coords.iter().zip(&beta_coords).any(|(a, b)| j * a > *b) {
                        continue;
                    }
                    let nu = mu.add(&alpha.scale(j));
                    let m = table.lookup_reduced(alg, &nu)?;
                    if m > 0 {
                        let inner = alg.bilinear_form(&nu, alpha);
                        num += rat_int(*mult as i64) * inner * rat_int(m as i64);
                    }
                }
            }
            num *= rat_int(2);
            let shifted = mu.add(alg.rho());
            let denom = top_norm.clone() - alg.bilinear_form(&shifted, &shifted);
            let m = if denom.is_zero() {
                // on the norm shell of lambda+rho only lambda itself is a
                // weight, so the right side must vanish here too
                if !num.is_zero() {
                    return Err(Error::Internal(format!(
                        "Freudenthal denominator vanished at {mu} with nonzero numerator"
                    )));
                }
                0
            } else {
                let v = num / denom;
                if !v.is_integer() || v.is_negative() {
                    return Err(Error::Internal(format!(
                        "Freudenthal produced a non-integral multiplicity at {mu}"
                    )));
                }
                v.to_integer().to_u64().ok_or_else(|| {
                    Error::Internal("multiplicity exceeds u64".into())
                })?
            };
            if m > 0 {
                table.insert(&mu, m);
            }
        }
        Ok(table)
    }

    fn insert(&mut self, mu: &Weight, m: u64) {
        self.dominant.insert((mu.energy, mu.finite.clone()), m);
    }

    fn lookup_reduced(&self, alg: &Algebra, nu: &Weight) -> Result<u64> {
        let red = weyl::reduce_to_dominant(alg, nu)?;
        Ok(self
            .dominant
            .get(&(red.weight.energy, red.weight.finite.clone()))
            .copied()
            .unwrap_or(0))
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    /// dim L(lambda)_mu, for any mu with delta-drop within the table depth.
    pub fn multiplicity(&self, alg: &Algebra, mu: &Weight) -> Result<u64> {
        if mu.level != self.lambda.level {
            return Err(Error::InvalidInput("mu has a different level than lambda".into()));
        }
        if alg.is_affine() {
            let drop = self.lambda.energy - mu.energy;
            if drop > self.depth {
                return Err(Error::DepthExceeded { needed: drop, depth: self.depth });
            }
            if drop < 0 {
                return Ok(0);
            }
        }
        self.lookup_reduced(alg, mu)
    }

    /// Dominant entries sorted by (drop, labels); the full table up to Weyl
    /// symmetry.
    pub fn dominant_entries(&self) -> impl Iterator<Item = (i64, &Vec<i64>, u64)> {
        self.dominant.iter().map(|((e, f), m)| (*e, f, *m))
    }

    /// Every weight of nonzero multiplicity within the depth window,
    /// including non-dominant ones (Weyl images of the dominant entries).
    pub fn support_weights(&self, alg: &Algebra) -> Result<Vec<(Weight, u64)>> {
        let min_energy = self.lambda.energy - self.depth;
        let mut out: Vec<(Weight, u64)> = Vec::new();
        let mut seen: HashSet<Weight> = HashSet::new();
        for ((e, f), m) in &self.dominant {
            let start = Weight::new(self.lambda.level, f.clone(), *e);
            let mut frontier = vec![start.clone()];
            if seen.insert(start) {
                out.push((frontier[0].clone(), *m));
            }
            while let Some(x) = frontier.pop() {
                for &i in &alg.nodes() {
                    let y = weyl::reflect_unchecked(alg, i, &x);
                    if (!alg.is_affine() || y.energy >= min_energy) && !seen.contains(&y) {
                        seen.insert(y.clone());
                        out.push((y.clone(), *m));
                        frontier.push(y);
                    }
                }
            }
        }
        out.sort_by(|a, b| {
            (std::cmp::Reverse(a.0.energy), &a.0.finite)
                .cmp(&(std::cmp::Reverse(b.0.energy), &b.0.finite))
        });
        Ok(out)
    }

    /// CSV rows (level, finite coords..., energy, multiplicity) over the
    /// dominant entries, highest energy first.
    pub fn to_csv(&self) -> String {
        let rank = self.lambda.finite.len();
        let mut s = String::from("level");
        for i in 1..=rank {
            s.push_str(&format!(",f{i}"));
        }
        s.push_str(",energy,multiplicity\n");
        let mut rows: Vec<(i64, &Vec<i64>, u64)> = self.dominant_entries().collect();
        rows.sort_by(|a, b| (std::cmp::Reverse(a.0), a.1).cmp(&(std::cmp::Reverse(b.0), b.1)));
        for (e, f, m) in rows {
            s.push_str(&self.lambda.level.to_string());
            for v in f {
                s.push_str(&format!(",{v}"));
            }
            s.push_str(&format!(",{e},{m}\n"));
        }
        s
    }
}

/// dim L(lambda)_mu via a fresh Freudenthal table.
pub fn weight_multiplicity(alg: &Algebra, lambda: &Weight, mu: &Weight, depth: i64) -> Result<u64> {
    let table = MultiplicityTable::new(alg, lambda, depth)?;
    table.multiplicity(alg, mu)
}

/// sum_{n=0..depth} dim L(lambda)_{mu_top - n delta} q^n for the string below
/// the maximal lift `mu_top`.
pub fn string_q_character(
    alg: &Algebra,
    lambda: &Weight,
    mu_top: &Weight,
    depth: i64,
) -> Result<QPolynomial> {
    if !alg.is_affine() {
        return Err(Error::InvalidInput("strings need an affine algebra".into()));
    }
    let table = MultiplicityTable::new(alg, lambda, lambda.energy - mu_top.energy + depth)?;
    // mu_top must head its string: nonzero multiplicity, zero one step up
    if table.multiplicity(alg, mu_top)? == 0 {
        return Err(Error::InvalidInput("mu_top has zero multiplicity".into()));
    }
    let up = mu_top.add(&alg.delta());
    let up_mult = if lambda.energy < up.energy { 0 } else { table.multiplicity(alg, &up)? };
    if up_mult != 0 {
        return Err(Error::InvalidInput("mu_top is not the maximal lift of its string".into()));
    }
    let mut coeffs = Vec::new();
    for n in 0..=depth {
        let mu = mu_top.sub(&alg.delta().scale(n));
        coeffs.push(table.multiplicity(alg, &mu)? as i64);
    }
    Ok(QPolynomial::from_i64s(&coeffs))
}

/// The unique maximal lift mu_0 of a level-k dominant finite weight into the
/// support of L(lambda): scan energies downward from lambda's and return the
/// first weight of nonzero multiplicity. `Ok(None)` when no lift exists
/// within `depth` (in particular when mu_bar is not in lambda's weight
/// lattice coset).
pub fn maximal_lift(
    alg: &Algebra,
    lambda: &Weight,
    mu_bar: &[i64],
    depth: i64,
) -> Result<Option<Weight>> {
    if !alg.is_affine() {
        return Err(Error::InvalidInput("lifts need an affine algebra".into()));
    }
    let k = lambda.level;
    let probe = Weight::new(k, mu_bar.to_vec(), lambda.energy);
    if !weyl::is_dominant(alg, &probe) {
        return Err(Error::InvalidInput("mu_bar must lie in the level-k alcove".into()));
    }
    // lattice test: some lift differs from lambda by a root-lattice element
    // iff the energy-0 one does (alpha_0's finite part is a root combination)
    let fin_ok = {
        let diff = lambda.sub(&probe);
        alg.root_coords(&Weight::new(0, diff.finite.clone(), 0)).is_some()
            || alg.root_coords(&diff).is_some()
    };
    if !fin_ok {
        return Ok(None);
    }
    let table = MultiplicityTable::new(alg, lambda, depth)?;
    for drop in 0..=depth {
        let mu = Weight::new(k, mu_bar.to_vec(), lambda.energy - drop);
        if table.multiplicity(alg, &mu)? > 0 {
            return Ok(Some(mu));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kostant;
    use crate::root_system::FiniteType;

    fn a1aff() -> Algebra {
        Algebra::affine_from_symbol("A1", false).unwrap()
    }

    fn a2aff() -> Algebra {
        Algebra::affine_from_symbol("A2", false).unwrap()
    }

    /// r-colored partition counts: prod_n (1 - q^n)^{-r} up to q^depth.
    fn colored_partitions(r: usize, depth: usize) -> Vec<u64> {
        let mut coeffs = vec![0u64; depth + 1];
        coeffs[0] = 1;
        for _ in 0..r {
            for part in 1..=depth {
                for n in part..=depth {
                    coeffs[n] += coeffs[n - part];
                }
            }
        }
        coeffs
    }

    #[test]
    fn colored_partition_oracle_sane() {
        assert_eq!(colored_partitions(1, 6), vec![1, 1, 2, 3, 5, 7, 11]);
        assert_eq!(colored_partitions(2, 4), vec![1, 2, 5, 10, 20]);
    }

    #[test]
    fn highest_weight_line() {
        let g = a1aff();
        let l0 = g.fundamental_weight(0);
        assert_eq!(weight_multiplicity(&g, &l0, &l0, 0).unwrap(), 1);
    }

    #[test]
    fn basic_string_is_partition_counts() {
        let g = a1aff();
        let l0 = g.fundamental_weight(0);
        let mu = l0.sub(&g.delta().scale(4));
        assert_eq!(weight_multiplicity(&g, &l0, &mu, 4).unwrap(), 5); // p(4)
        let string = string_q_character(&g, &l0, &l0, 4).unwrap();
        let expected: Vec<i64> = colored_partitions(1, 4).iter().map(|&v| v as i64).collect();
        assert_eq!(string, QPolynomial::from_i64s(&expected));
    }

    #[test]
    fn rank_two_string_is_two_colored() {
        let g = a2aff();
        let l0 = g.fundamental_weight(0);
        let string = string_q_character(&g, &l0, &l0, 2).unwrap();
        assert_eq!(string, QPolynomial::from_i64s(&[1, 2, 5]));
    }

    #[test]
    fn finite_adjoint_zero_weight_sl3() {
        let g = Algebra::finite(FiniteType::parse("A2").unwrap()).unwrap();
        let adjoint = Weight::new(0, vec![1, 1], 0);
        let zero = Weight::zero(2);
        assert_eq!(weight_multiplicity(&g, &adjoint, &zero, 0).unwrap(), 2);
    }

    #[test]
    fn multiplicity_constant_on_orbits() {
        let g = a1aff();
        let lambda = Weight::new(2, vec![1], 0);
        let table = MultiplicityTable::new(&g, &lambda, 3).unwrap();
        for (w, m) in table.support_weights(&g).unwrap() {
            assert_eq!(table.multiplicity(&g, &w).unwrap(), m);
            for &i in &g.nodes() {
                let img = weyl::reflect_unchecked(&g, i, &w);
                if lambda.energy - img.energy <= 3 {
                    assert_eq!(table.multiplicity(&g, &img).unwrap(), m);
                }
            }
        }
    }

    #[test]
    fn agrees_with_q_multiplicity_at_one() {
        let g = a1aff();
        let lambda = Weight::new(2, vec![2], 0);
        let table = MultiplicityTable::new(&g, &lambda, 3).unwrap();
        for finite in [vec![0i64], vec![2]] {
            for drop in 0..=3i64 {
                let mu = Weight::new(2, finite.clone(), -drop);
                let c = kostant::q_multiplicity(&g, &lambda, &mu, drop).unwrap();
                assert_eq!(
                    c.eval_one(),
                    num_bigint::BigInt::from(table.multiplicity(&g, &mu).unwrap()),
                    "mu = {mu}"
                );
            }
        }
    }

    #[test]
    fn maximal_lift_examples() {
        let g = a1aff();
        // mu_bar = lambda_bar tops its own string
        let lambda = Weight::new(2, vec![0], 0);
        let lift = maximal_lift(&g, &lambda, &[0], 3).unwrap().unwrap();
        assert_eq!(lift, lambda);
        // k = 2, lambda = 2*Lambda_0, mu_bar = [2]: first nonzero at energy -1
        let lift = maximal_lift(&g, &lambda, &[2], 3).unwrap().unwrap();
        assert_eq!(lift, Weight::new(2, vec![2], -1));
        // basic module contains no odd finite labels
        let l0 = g.fundamental_weight(0);
        assert_eq!(maximal_lift(&g, &l0, &[1], 3).unwrap(), None);
        // lambda_bar >= mu_bar: the lift tops out at lambda's own energy
        let lam = Weight::new(3, vec![2], 0);
        let lift = maximal_lift(&g, &lam, &[0], 3).unwrap().unwrap();
        assert_eq!(lift, Weight::new(3, vec![0], 0));
    }

    #[test]
    fn finite_restriction_at_energy_zero() {
        // dim L((k, lambda_bar, 0))_{(k, mu_bar, 0)} = dim L(lambda_bar)_{mu_bar}
        let gaff = a2aff();
        let gfin = Algebra::finite(FiniteType::parse("A2").unwrap()).unwrap();
        for (lb, mb) in [(vec![1i64, 1], vec![0i64, 0]), (vec![2, 0], vec![0, 1]), (vec![1, 1], vec![1, 1])] {
            let fin_mult = weight_multiplicity(
                &gfin,
                &Weight::new(0, lb.clone(), 0),
                &Weight::new(0, mb.clone(), 0),
                0,
            )
            .unwrap();
            for k in [3i64, 5] {
                let aff_mult = weight_multiplicity(
                    &gaff,
                    &Weight::new(k, lb.clone(), 0),
                    &Weight::new(k, mb.clone(), 0),
                    0,
                )
                .unwrap();
                assert_eq!(aff_mult, fin_mult, "lb={lb:?} mb={mb:?} k={k}");
            }
        }
    }

    #[test]
    fn twisted_dual_basic_strings() {
        // the basic string of a dual algebra has generating function
        // prod_n (1 - q^n)^{-mult(n delta)} (the symmetric algebra of the
        // graded Cartan loop directions)
        for sym in ["B2", "C2", "G2"] {
            let g = Algebra::affine_from_symbol(sym, true).unwrap();
            let depth = 4usize;
            let mut expected = vec![0i64; depth + 1];
            expected[0] = 1;
            for n in 1..=depth {
                for _ in 0..g.imag_mult(n as i64) {
                    for m in n..=depth {
                        expected[m] += expected[m - n];
                    }
                }
            }
            let l0 = g.fundamental_weight(0);
            let string = string_q_character(&g, &l0, &l0, depth as i64).unwrap();
            assert_eq!(
                string,
                QPolynomial::from_i64s(&expected),
                "twisted string mismatch for {}",
                g.label()
            );
        }
    }

    #[test]
    fn csv_export_shape() {
        let g = a1aff();
        let l0 = g.fundamental_weight(0);
        let table = MultiplicityTable::new(&g, &l0, 2).unwrap();
        let csv = table.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "level,f1,energy,multiplicity");
        assert!(csv.contains("1,0,0,1"));
        assert!(csv.contains("1,0,-2,2")); // p(2) = 2
    }

    #[test]
    fn depth_guard() {
        let g = a1aff();
        let l0 = g.fundamental_weight(0);
        let table = MultiplicityTable::new(&g, &l0, 2).unwrap();
        let deep = l0.sub(&g.delta().scale(3));
        assert!(matches!(
            table.multiplicity(&g, &deep),
            Err(Error::DepthExceeded { .. })
        ));
    }
}
