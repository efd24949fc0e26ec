//! Exact characteristic-class arithmetic for five-manifolds carrying an
//! SO(3) structure with tangent bundle `S^2_0(E^3)`, plus the four-manifold
//! splitting arithmetic.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

/// Polynomial over GF(2) in the Stiefel-Whitney roots `x1, x2, x3` of `E^3`,
/// reduced by `x3 = x1 + x2`. Stored as the set of monomials `x1^a x2^b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Mod2Poly(BTreeSet<(u32, u32)>);

impl Mod2Poly {
    pub fn zero() -> Self {
        Mod2Poly(BTreeSet::new())
    }

    pub fn one() -> Self {
        Self::monomial(0, 0)
    }

    pub fn monomial(a: u32, b: u32) -> Self {
        Mod2Poly(BTreeSet::from([(a, b)]))
    }

    /// The root `x_i`, `i` in `1..=3`.
    pub fn root(i: usize) -> Self {
        match i {
            1 => Self::monomial(1, 0),
            2 => Self::monomial(0, 1),
            3 => &Self::monomial(1, 0) + &Self::monomial(0, 1),
            _ => panic!("root index {i} out of range 1..=3"),
        }
    }

    /// `w2(E^3) = x1 x2 + x1 x3 + x2 x3`.
    pub fn e2() -> Self {
        let (x1, x2, x3) = (Self::root(1), Self::root(2), Self::root(3));
        &(&(&x1 * &x2) + &(&x1 * &x3)) + &(&x2 * &x3)
    }

    /// `w3(E^3) = x1 x2 x3`.
    pub fn e3() -> Self {
        &(&Self::root(1) * &Self::root(2)) * &Self::root(3)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn monomials(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Degree-`d` part (cohomological degree = polynomial degree).
    pub fn graded(&self, d: u32) -> Self {
        Mod2Poly(self.0.iter().copied().filter(|(a, b)| a + b == d).collect())
    }

    pub fn max_degree(&self) -> u32 {
        self.0.iter().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    /// Value with all roots set to zero.
    pub fn constant_term(&self) -> bool {
        self.0.contains(&(0, 0))
    }

    /// Total Steenrod square, from `Sq(x) = x + x^2` on each root.
    pub fn total_square(&self) -> Self {
        let sx1 = &Self::monomial(1, 0) + &Self::monomial(2, 0);
        let sx2 = &Self::monomial(0, 1) + &Self::monomial(0, 2);
        self.0
            .iter()
            .fold(Self::zero(), |acc, &(a, b)| &acc + &(&sx1.pow(a) * &sx2.pow(b)))
    }

    /// Rewrite a symmetric polynomial in `e2, e3`; returns the exponent pairs
    /// `(p, q)` of `e2^p e3^q`, or `None` if the polynomial is not symmetric.
    pub fn in_elementary(&self) -> Option<Vec<(u32, u32)>> {
        let mut out = Vec::new();
        for d in 0..=self.max_degree() {
            let target = self.graded(d);
            if target.is_zero() {
                continue;
            }
            let gens: Vec<(u32, u32)> = (0..=d / 2)
                .filter(|p| (d - 2 * p) % 3 == 0)
                .map(|p| (p, (d - 2 * p) / 3))
                .collect();
            let images: Vec<Mod2Poly> = gens
                .iter()
                .map(|&(p, q)| &Self::e2().pow(p) * &Self::e3().pow(q))
                .collect();
            out.extend(solve_gf2(&images, &target)?.into_iter().map(|i| gens[i]));
        }
        Some(out)
    }
}

/// Subset of `images` summing to `target` over GF(2), by leading-monomial
/// elimination.
fn solve_gf2(images: &[Mod2Poly], target: &Mod2Poly) -> Option<Vec<usize>> {
    type Row = (Mod2Poly, BTreeSet<usize>);
    fn reduce(mut p: Row, pivots: &[((u32, u32), Row)]) -> (Row, Option<(u32, u32)>) {
        while let Some(&lead) = p.0 .0.iter().next_back() {
            match pivots.iter().find(|(l, _)| *l == lead) {
                Some((_, (q, t))) => {
                    p.0 = &p.0 + q;
                    p.1 = p.1.symmetric_difference(t).copied().collect();
                }
                None => return (p, Some(lead)),
            }
        }
        (p, None)
    }
    let mut pivots: Vec<((u32, u32), Row)> = Vec::new();
    for (i, img) in images.iter().enumerate() {
        let (row, lead) = reduce((img.clone(), BTreeSet::from([i])), &pivots);
        if let Some(lead) = lead {
            pivots.push((lead, row));
        }
    }
    match reduce((target.clone(), BTreeSet::new()), &pivots) {
        ((_, used), None) => Some(used.into_iter().collect()),
        (_, Some(_)) => None,
    }
}

impl Add for &Mod2Poly {
    type Output = Mod2Poly;
    fn add(self, rhs: &Mod2Poly) -> Mod2Poly {
        Mod2Poly(self.0.symmetric_difference(&rhs.0).copied().collect())
    }
}

impl Mul for &Mod2Poly {
    type Output = Mod2Poly;
    fn mul(self, rhs: &Mod2Poly) -> Mod2Poly {
        let mut out = BTreeSet::new();
        for &(a, b) in &self.0 {
            for &(c, d) in &rhs.0 {
                let m = (a + c, b + d);
                if !out.remove(&m) {
                    out.insert(m);
                }
            }
        }
        Mod2Poly(out)
    }
}

impl fmt::Display for Mod2Poly {
    /// Shown in `w2, w3` of `E^3` when symmetric, otherwise in the roots.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = match self.in_elementary() {
            Some(mut gens) => {
                gens.sort_by_key(|&(p, q)| (2 * p + 3 * q, q));
                gens.into_iter()
                    .map(|(p, q)| monomial_string(&[("w2", p), ("w3", q)]))
                    .collect()
            }
            None => self.0.iter().map(|&(a, b)| monomial_string(&[("x1", a), ("x2", b)])).collect(),
        };
        write!(f, "{}", terms.join(" + "))
    }
}

fn monomial_string(factors: &[(&str, u32)]) -> String {
    let parts: Vec<String> = factors
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|&(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

/// Graded Stiefel-Whitney classes `w_0..w_5` of `S^2_0(E^3)`, from
/// `prod_{i <= j} (1 + x_i + x_j)`.
pub fn sw_classes_s20() -> Vec<Mod2Poly> {
    let total = sw_total_s20();
    (0..=5).map(|d| total.graded(d)).collect()
}

pub fn sw_total_s20() -> Mod2Poly {
    let mut total = Mod2Poly::one();
    for i in 1..=3 {
        for j in i..=3 {
            let factor = &(&Mod2Poly::one() + &Mod2Poly::root(i)) + &Mod2Poly::root(j);
            total = &total * &factor;
        }
    }
    total
}

/// Total class `prod (1 + x_i)` of `E^3`.
pub fn sw_total_e3() -> Mod2Poly {
    (1..=3).fold(Mod2Poly::one(), |acc, i| &acc * &(&Mod2Poly::one() + &Mod2Poly::root(i)))
}

/// Comparison of `w(M^5)` with `Sq(v)` for the Wu class `v = 1 + w2`.
#[derive(Debug, Clone, Serialize)]
pub struct WuCheck {
    pub w: String,
    pub sq_wu: String,
    /// `Sq(v)` and `w` agree through degree 3.
    pub agree_below_4: bool,
    /// `Sq^1 w2 = w3`.
    pub sq1_w2_is_w3: bool,
    /// Degree-4 part of `Sq(v) - w`; it must vanish in `H^4(M^5; Z2)`.
    pub forced_relation: String,
    /// The forced relation is `w2 u w2`.
    pub forces_w2_squared_zero: bool,
}

pub fn wu_check() -> WuCheck {
    let w = sw_total_s20();
    let v = &Mod2Poly::one() + &w.graded(2);
    let sq = v.total_square();
    let agree = (0..4).all(|d| sq.graded(d) == w.graded(d));
    let diff = &sq.graded(4) + &w.graded(4);
    WuCheck {
        w: w.to_string(),
        sq_wu: sq.to_string(),
        agree_below_4: agree,
        sq1_w2_is_w3: w.graded(2).total_square().graded(3) == w.graded(3),
        forces_w2_squared_zero: diff == w.graded(2).pow(2),
        forced_relation: diff.to_string(),
    }
}

/// `p1 = (sum k_i^2) omega^2` for an SO(3) bundle splitting with weights
/// `k_i omega`; returns the factor.
pub fn pontrjagin_factor(weights: &[i64]) -> i64 {
    weights.iter().map(|k| k * k).sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct PontrjaginRelation {
    pub weights: Vec<i64>,
    pub factor: i64,
    /// `p1` evaluated on sample values of `omega` matches `factor * omega^2`.
    pub identity_holds: bool,
}

/// The relation for `S^2_0` of an SO(3) bundle with weights `(omega, 2 omega)`.
pub fn pontrjagin_relation() -> PontrjaginRelation {
    pontrjagin_relation_for(&[1, 2])
}

pub fn pontrjagin_relation_for(weights: &[i64]) -> PontrjaginRelation {
    let factor = pontrjagin_factor(weights);
    let identity_holds = (-5i64..=5).all(|w| weights.iter().map(|k| (k * w).pow(2)).sum::<i64>() == factor * w * w);
    PontrjaginRelation {
        weights: weights.to_vec(),
        factor,
        identity_holds,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Semicharacteristics {
    pub k: u8,
    pub chi_hat2: u8,
    pub lmp_consistent: bool,
}

/// Real and mod-2 semicharacteristics of a closed five-manifold from Betti
/// data `(b0, b2, b4)` and mod-2 homology dimensions `(beta0, beta1, beta2)`,
/// checked against the pairing `<w2 u w3, [M]>`.
pub fn semicharacteristics(real_betti: [u64; 3], z2_betti: [u64; 3], w2w3_pairing: u8) -> Semicharacteristics {
    let k = (real_betti.iter().sum::<u64>() % 2) as u8;
    let chi_hat2 = (z2_betti.iter().sum::<u64>() % 2) as u8;
    Semicharacteristics {
        k,
        chi_hat2,
        lmp_consistent: (k + 2 - chi_hat2) % 2 == w2w3_pairing % 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitConditions {
    pub p1: i128,
    /// `chi = 2 c^2` and `p1 = 5 c^2`.
    pub cond2: bool,
    /// `chi = 2 c^2` and `6 sigma = 5 chi`.
    pub cond3: bool,
    pub equivalent: bool,
}

/// Conditions for `TX^4 = R^2 + L` with `p1 = 3 sigma`.
pub fn split_conditions(chi: i64, sigma: i64, csq: i64) -> SplitConditions {
    let (chi, sigma, csq) = (chi as i128, sigma as i128, csq as i128);
    let p1 = 3 * sigma;
    let euler = chi == 2 * csq;
    let cond2 = euler && p1 == 5 * csq;
    let cond3 = euler && 6 * sigma == 5 * chi;
    SplitConditions {
        p1,
        cond2,
        cond3,
        equivalent: cond2 == cond3,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinObstruction {
    pub p: u64,
    pub q: Ratio<i128>,
    /// `q` is not an integer or `p < q`, so `11/8` fails.
    pub violates_11_8: bool,
}

/// For a spin `X^4 = p K3 # q (S^2 x S^2)` with `8q = 10p + 10`.
pub fn spin_split_obstruction(p: u64) -> SpinObstruction {
    let q = Ratio::new(10 * p as i128 + 10, 8);
    let violates_11_8 = !q.is_integer() || Ratio::from_integer(p as i128) < q;
    SpinObstruction { p, q, violates_11_8 }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct IntersectionSolution {
    pub s: u64,
    pub t: u64,
    pub a: u64,
    pub b: u64,
}

impl IntersectionSolution {
    pub fn satisfies(&self) -> bool {
        let (s, t, a, b) = (self.s as u128, self.t as u128, self.a as u128, self.b as u128);
        s == 10 + 11 * t && a % 2 == 1 && b % 2 == 1 && s * a * a == t * b * b + 6 + 6 * t
    }
}

/// All `(s, t, a, b)` with `s = 10 + 11 t`, `t <= t_max`, odd `a <= a_max`,
/// odd `b <= b_max` and `s a^2 - t b^2 = 6 + 6 t`, sorted by `(t, a, b)`.
pub fn uniform_intersection_solutions(t_max: u64, a_max: u64, b_max: u64) -> Vec<IntersectionSolution> {
    let mut out: Vec<IntersectionSolution> = (0..=t_max)
        .into_par_iter()
        .flat_map_iter(|t| {
            let s = 10 + 11 * t;
            (1..=a_max).step_by(2).filter_map(move |a| {
                let lhs = s as u128 * a as u128 * a as u128;
                let rhs0 = 6 + 6 * t as u128;
                if t == 0 {
                    // no b enters; any odd b works only if s a^2 = 6, impossible for s = 10
                    return (lhs == rhs0 && b_max >= 1).then_some(IntersectionSolution { s, t, a, b: 1 });
                }
                let num = lhs.checked_sub(rhs0)?;
                if num % t as u128 != 0 {
                    return None;
                }
                let b = isqrt(num / t as u128)?;
                (b % 2 == 1 && b <= b_max as u128).then_some(IntersectionSolution { s, t, a, b: b as u64 })
            })
        })
        .collect();
    out.sort_by_key(|x| (x.t, x.a, x.b));
    out
}

fn isqrt(n: u128) -> Option<u128> {
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    (r * r == n).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s20_classes() {
        let w = sw_classes_s20();
        assert!(w[0] == Mod2Poly::one());
        assert!(w[1].is_zero() && w[4].is_zero() && w[5].is_zero());
        assert_eq!(w[2], Mod2Poly::e2());
        assert_eq!(w[3], Mod2Poly::e3());
        assert_eq!(sw_total_s20(), sw_total_e3());
        assert_eq!(w[2].to_string(), "w2");
    }

    #[test]
    fn wu() {
        let c = wu_check();
        assert!(c.agree_below_4 && c.sq1_w2_is_w3 && c.forces_w2_squared_zero);
        assert_eq!(c.forced_relation, "w2^2");
    }

    #[test]
    fn elementary_rewrite() {
        let p = &Mod2Poly::e2().pow(3) + &Mod2Poly::e3().pow(2);
        let mut g = p.in_elementary().unwrap();
        g.sort();
        assert_eq!(g, vec![(0, 2), (3, 0)]);
        assert!(Mod2Poly::root(1).in_elementary().is_none());
    }

    #[test]
    fn diophantine_examples() {
        let sols = uniform_intersection_solutions(20, 20, 60);
        for want in [(21, 1, 1, 3), (43, 3, 3, 11), (197, 17, 15, 51)] {
            let w = IntersectionSolution {
                s: want.0,
                t: want.1,
                a: want.2,
                b: want.3,
            };
            assert!(sols.contains(&w), "{want:?}");
        }
        assert!(sols.iter().all(IntersectionSolution::satisfies));
        assert!(uniform_intersection_solutions(0, 1, 1).is_empty());
    }

    #[test]
    fn spin_obstruction() {
        assert_eq!(spin_split_obstruction(3).q, Ratio::from_integer(5));
        assert!(!spin_split_obstruction(0).q.is_integer());
        assert!((0..1000).all(|p| spin_split_obstruction(p).violates_11_8));
    }
}
