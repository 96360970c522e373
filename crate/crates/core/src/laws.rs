//! Finite-support joint laws of opinion vectors, plus constructors for the
//! classical example distributions.
//!
//! Laws are stored over explicit atoms rather than grids, because the
//! example laws have off-grid rational support. Construction normalizes
//! weights to total mass one, merges duplicate atoms by exact coordinate
//! equality, drops zero-weight atoms, and sorts atoms lexicographically by
//! point, which doubles as the canonical JSON order. Laws are immutable
//! after construction.

use crate::numeric::Rational;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LawError {
    #[error("law has no atoms with positive weight")]
    TotalWeightZero,
    #[error("atom weight is negative")]
    NegativeWeight,
    #[error("coordinate {0} outside [0,1]")]
    CoordinateOutOfRange(String),
    #[error("atom has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires a pair law (k = 2), got k = {0}")]
    PairOnly(usize),
    #[error("operation requires a marginal law (k = 1), got k = {0}")]
    MarginalOnly(usize),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("mixture weights must be nonnegative and sum to 1")]
    BadMixtureWeights,
    #[error("coordinate {0} has zero variance")]
    ZeroVariance(usize),
}

/// One support point with its probability mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub point: Vec<Rational>,
    pub weight: Rational,
}

/// Finite-support joint distribution of `k` opinion coordinates in `[0,1]`.
///
/// Invariants: weights are positive and sum to exactly one, coordinates lie
/// in `[0,1]`, and atoms are pairwise distinct and sorted lexicographically
/// by point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteJointLaw {
    k: usize,
    atoms: Vec<Atom>,
}

impl DiscreteJointLaw {
    /// Builds a law from raw `(point, weight)` pairs: validates coordinates
    /// and weights, merges duplicates, drops zero weights, and rescales the
    /// total mass to one.
    pub fn new(atoms: Vec<(Vec<Rational>, Rational)>) -> Result<Self, LawError> {
        let k = match atoms.first() {
            Some((p, _)) => p.len(),
            None => return Err(LawError::TotalWeightZero),
        };
        let mut merged: Vec<Atom> = Vec::new();
        for (point, weight) in atoms {
            if point.len() != k {
                return Err(LawError::DimensionMismatch { expected: k, got: point.len() });
            }
            if weight.is_negative() {
                return Err(LawError::NegativeWeight);
            }
            for c in &point {
                if !c.in_unit_interval() {
                    return Err(LawError::CoordinateOutOfRange(c.to_string()));
                }
            }
            if weight.is_zero() {
                continue;
            }
            match merged.iter_mut().find(|a| a.point == point) {
                Some(a) => a.weight = &a.weight + &weight,
                None => merged.push(Atom { point, weight }),
            }
        }
        let total: Rational = merged.iter().map(|a| &a.weight).sum();
        if total.is_zero() {
            return Err(LawError::TotalWeightZero);
        }
        if total != Rational::one() {
            for a in &mut merged {
                a.weight = &a.weight / &total;
            }
        }
        merged.sort_by(|a, b| a.point.cmp(&b.point));
        Ok(DiscreteJointLaw { k, atoms: merged })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn num_atoms(&self) -> usize {
        self.atoms.len()
    }

    /// Expectation of an arbitrary exact function of the point.
    pub fn expectation(&self, f: impl Fn(&[Rational]) -> Rational) -> Rational {
        self.atoms.iter().map(|a| &a.weight * &f(&a.point)).sum()
    }

    /// Total mass of atoms satisfying the predicate.
    pub fn prob_where(&self, pred: impl Fn(&[Rational]) -> bool) -> Rational {
        self.atoms.iter().filter(|a| pred(&a.point)).map(|a| &a.weight).sum()
    }

    /// Exact mean of every coordinate.
    pub fn means(&self) -> Vec<Rational> {
        (0..self.k).map(|i| self.expectation(|p| p[i].clone())).collect()
    }

    /// Marginal law of one coordinate, as a `k = 1` law.
    pub fn marginal(&self, coord: usize) -> DiscreteJointLaw {
        assert!(coord < self.k);
        DiscreteJointLaw::new(
            self.atoms.iter().map(|a| (vec![a.point[coord].clone()], a.weight.clone())).collect(),
        )
        .expect("marginal of a valid law is valid")
    }

    pub fn marginals(&self) -> Vec<DiscreteJointLaw> {
        (0..self.k).map(|i| self.marginal(i)).collect()
    }

    /// Distinct values of one coordinate, ascending.
    pub fn marginal_support(&self, coord: usize) -> Vec<Rational> {
        let mut values: Vec<Rational> = self.atoms.iter().map(|a| a.point[coord].clone()).collect();
        values.sort();
        values.dedup();
        values
    }

    /// Pearson correlation data for a pair law. The exact part is the pair
    /// (covariance, variance product); the float rendering divides by the
    /// square root, which is irrational in general.
    pub fn correlation(&self) -> Result<Correlation, LawError> {
        if self.k != 2 {
            return Err(LawError::PairOnly(self.k));
        }
        let means = self.means();
        let cov = self.expectation(|p| &(&p[0] - &means[0]) * &(&p[1] - &means[1]));
        let var_x = self.expectation(|p| (&p[0] - &means[0]).pow(2));
        let var_y = self.expectation(|p| (&p[1] - &means[1]).pow(2));
        if var_x.is_zero() {
            return Err(LawError::ZeroVariance(0));
        }
        if var_y.is_zero() {
            return Err(LawError::ZeroVariance(1));
        }
        let variance_product = &var_x * &var_y;
        let float = cov.to_f64() / variance_product.to_f64().sqrt();
        Ok(Correlation { covariance: cov, variance_product, float })
    }

    /// True when the correlation equals `r` exactly, decided without square
    /// roots: cov and r must share a sign and cov^2 == r^2 var_x var_y.
    pub fn correlation_equals(&self, r: &Rational) -> Result<bool, LawError> {
        let c = self.correlation()?;
        Ok(c.covariance.signum() == r.signum() && c.covariance.pow(2) == r.pow(2) * &c.variance_product)
    }
}

/// Exact correlation report: `rho = covariance / sqrt(variance_product)`.
#[derive(Debug, Clone)]
pub struct Correlation {
    pub covariance: Rational,
    pub variance_product: Rational,
    pub float: f64,
}

// ---------------------------------------------------------------------------
// Example constructions
// ---------------------------------------------------------------------------

/// Three-point coherent pair law with `P(X=Y) = (1-d)/(1+d)` at
/// `(1-d, 1-d)` and mass `d/(1+d)` at each of `(0, 1-d)` and `(1-d, 0)`.
/// Its correlation is exactly `-d`.
pub fn deldis(delta: &Rational) -> Result<DiscreteJointLaw, LawError> {
    if !delta.is_positive() || delta >= &Rational::one() {
        return Err(LawError::ParameterOutOfRange(format!("delta = {delta}, need 0 < delta < 1")));
    }
    let one = Rational::one();
    let v = &one - delta;
    let denom = &one + delta;
    DiscreteJointLaw::new(vec![
        (vec![v.clone(), v.clone()], &v / &denom),
        (vec![Rational::zero(), v.clone()], delta / &denom),
        (vec![v.clone(), Rational::zero()], delta / &denom),
    ])
}

/// The 1x2 law putting mass 1/2 at `(1/2, 0)` and `(1/2, 1)`:
/// `X = E(Y) = 1/2` for Bernoulli(1/2) `Y`. Attains probability one of
/// `|X-Y| >= 1-d` for every `d >= 1/2`.
pub fn bernoulli_center() -> DiscreteJointLaw {
    let half = Rational::new(1, 2);
    DiscreteJointLaw::new(vec![
        (vec![half.clone(), Rational::zero()], half.clone()),
        (vec![half.clone(), Rational::one()], half.clone()),
    ])
    .expect("static law")
}

/// Petal observer value `p_n = np / (np - p + 1)` of the n-petal daisy.
pub fn daisy_pn(n: u32, p: &Rational) -> Rational {
    let np = Rational::from(n) * p;
    let denom = &np - p + Rational::one();
    np / denom
}

/// The `(n, p)`-daisy: an exchangeable coherent family of `n` opinions with
/// an atom `(p_n, ..., p_n)` of mass `p` (the center) and `n` atoms
/// `p_n e_i` of mass `(1-p)/n` each.
pub fn daisy(n: u32, p: &Rational) -> Result<DiscreteJointLaw, LawError> {
    if n < 1 {
        return Err(LawError::ParameterOutOfRange("daisy needs n >= 1".into()));
    }
    if !p.in_unit_interval() {
        return Err(LawError::ParameterOutOfRange(format!("p = {p} outside [0,1]")));
    }
    let k = n as usize;
    let pn = daisy_pn(n, p);
    let petal_weight = (Rational::one() - p) / Rational::from(n);
    let mut atoms = vec![(vec![pn.clone(); k], p.clone())];
    for i in 0..k {
        let mut point = vec![Rational::zero(); k];
        point[i] = pn.clone();
        atoms.push((point, petal_weight.clone()));
    }
    DiscreteJointLaw::new(atoms)
}

/// The law attaining `E max_i X_i = p(n-p)/(1+p(n-2))`: the first `n-1`
/// coordinates are the `(n-1, p)`-daisy and the last is the indicator of
/// the daisy center.
pub fn dp80_attaining(n: u32, p: &Rational) -> Result<DiscreteJointLaw, LawError> {
    if n < 2 {
        return Err(LawError::ParameterOutOfRange("dp80_attaining needs n >= 2".into()));
    }
    if !p.in_unit_interval() {
        return Err(LawError::ParameterOutOfRange(format!("p = {p} outside [0,1]")));
    }
    let petals = (n - 1) as usize;
    let q = daisy_pn(n - 1, p);
    let petal_weight = (Rational::one() - p) / Rational::from(n - 1);
    let mut center = vec![q.clone(); petals];
    center.push(Rational::one());
    let mut atoms = vec![(center, p.clone())];
    for i in 0..petals {
        let mut point = vec![Rational::zero(); petals + 1];
        point[i] = q.clone();
        atoms.push((point, petal_weight.clone()));
    }
    DiscreteJointLaw::new(atoms)
}

/// Marginal law (`k = 1`) of `scale * Bernoulli(p)`.
pub fn scaled_bernoulli(scale: &Rational, p: &Rational) -> Result<DiscreteJointLaw, LawError> {
    if !p.in_unit_interval() || !scale.in_unit_interval() {
        return Err(LawError::ParameterOutOfRange(format!("scale = {scale}, p = {p}")));
    }
    DiscreteJointLaw::new(vec![
        (vec![scale.clone()], p.clone()),
        (vec![Rational::zero()], Rational::one() - p),
    ])
}

/// Product law of two marginal (`k = 1`) laws.
pub fn product_law(mu_x: &DiscreteJointLaw, mu_y: &DiscreteJointLaw) -> Result<DiscreteJointLaw, LawError> {
    if mu_x.k() != 1 {
        return Err(LawError::MarginalOnly(mu_x.k()));
    }
    if mu_y.k() != 1 {
        return Err(LawError::MarginalOnly(mu_y.k()));
    }
    let mut atoms = Vec::new();
    for ax in mu_x.atoms() {
        for ay in mu_y.atoms() {
            atoms.push((vec![ax.point[0].clone(), ay.point[0].clone()], &ax.weight * &ay.weight));
        }
    }
    DiscreteJointLaw::new(atoms)
}

/// Independent coherent pair attaining `P(|X-Y| >= 1-d) = 2d(1-d)`:
/// the product law of two copies of `(1-d) * Bernoulli(1-d)`.
pub fn independent_attaining(delta: &Rational) -> Result<DiscreteJointLaw, LawError> {
    let half = Rational::new(1, 2);
    if !delta.is_positive() || delta >= &half {
        return Err(LawError::ParameterOutOfRange(format!("delta = {delta}, need 0 < delta < 1/2")));
    }
    let m = independent_attaining_marginal(delta)?;
    product_law(&m, &m)
}

/// The marginal `(1-d) * Bernoulli(1-d)` used by [`independent_attaining`].
pub fn independent_attaining_marginal(delta: &Rational) -> Result<DiscreteJointLaw, LawError> {
    let v = Rational::one() - delta;
    scaled_bernoulli(&v, &v)
}

/// Reflection symmetries preserving coherence of a pair law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReflectMode {
    /// `(X, Y) -> (Y, X)`.
    Swap,
    /// `(X, Y) -> (1-X, 1-Y)`.
    Complement,
    /// `(X, Y) -> (1-Y, 1-X)`.
    Both,
}

/// Image of a pair law under a reflection symmetry.
pub fn reflect(law: &DiscreteJointLaw, mode: ReflectMode) -> Result<DiscreteJointLaw, LawError> {
    if law.k() != 2 {
        return Err(LawError::PairOnly(law.k()));
    }
    let one = Rational::one();
    let atoms = law
        .atoms()
        .iter()
        .map(|a| {
            let (x, y) = (&a.point[0], &a.point[1]);
            let point = match mode {
                ReflectMode::Swap => vec![y.clone(), x.clone()],
                ReflectMode::Complement => vec![&one - x, &one - y],
                ReflectMode::Both => vec![&one - y, &one - x],
            };
            (point, a.weight.clone())
        })
        .collect();
    DiscreteJointLaw::new(atoms)
}

/// Convex mixture of laws with the same number of coordinates. Weights must
/// be nonnegative and sum to exactly one.
pub fn mix(laws: &[&DiscreteJointLaw], weights: &[Rational]) -> Result<DiscreteJointLaw, LawError> {
    if laws.is_empty() || laws.len() != weights.len() {
        return Err(LawError::BadMixtureWeights);
    }
    if weights.iter().any(Rational::is_negative) || weights.iter().sum::<Rational>() != Rational::one() {
        return Err(LawError::BadMixtureWeights);
    }
    let k = laws[0].k();
    for law in laws {
        if law.k() != k {
            return Err(LawError::DimensionMismatch { expected: k, got: law.k() });
        }
    }
    let mut atoms = Vec::new();
    for (law, w) in laws.iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        for a in law.atoms() {
            atoms.push((a.point.clone(), &a.weight * w));
        }
    }
    DiscreteJointLaw::new(atoms)
}

// ---------------------------------------------------------------------------
// Event-split witness
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("witness length differs from the law's atom count")]
    ShapeMismatch,
    #[error("atom {0}: masses are negative or do not sum to the weight")]
    MassSplit(usize),
    #[error("coordinate {coord} value {value}: event mass does not match the marginal equation")]
    MarginalEquation { coord: usize, value: String },
}

/// Decomposition of each atom's mass into the part on the common event and
/// the part on its complement. The per-atom fraction `mass_on_a / weight` is
/// the `[0,1]`-valued function certifying coherence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventSplitWitness {
    /// `(mass_on_a, mass_on_ac)` aligned with the law's atoms.
    pub masses: Vec<(Rational, Rational)>,
}

impl EventSplitWitness {
    /// Probability of the common event: total mass on it.
    pub fn event_probability(&self) -> Rational {
        self.masses.iter().map(|(a, _)| a).sum()
    }

    /// Per-atom event fraction `mass_on_a / weight`, in `[0,1]`.
    pub fn phi(&self, law: &DiscreteJointLaw) -> Vec<Rational> {
        self.masses.iter().zip(law.atoms()).map(|((a, _), atom)| a / &atom.weight).collect()
    }

    /// Exact verification: the split reproduces the law's weights, and for
    /// every coordinate `i` and support value `v` the event mass over atoms
    /// with `i`-th coordinate `v` equals `v` times their total mass.
    pub fn verify(&self, law: &DiscreteJointLaw) -> Result<(), WitnessError> {
        if self.masses.len() != law.num_atoms() {
            return Err(WitnessError::ShapeMismatch);
        }
        for (idx, ((on_a, on_ac), atom)) in self.masses.iter().zip(law.atoms()).enumerate() {
            if on_a.is_negative() || on_ac.is_negative() || &(on_a + on_ac) != &atom.weight {
                return Err(WitnessError::MassSplit(idx));
            }
        }
        for coord in 0..law.k() {
            for value in law.marginal_support(coord) {
                let mut event_mass = Rational::zero();
                let mut total_mass = Rational::zero();
                for ((on_a, _), atom) in self.masses.iter().zip(law.atoms()) {
                    if atom.point[coord] == value {
                        event_mass = event_mass + on_a;
                        total_mass = total_mass + &atom.weight;
                    }
                }
                if event_mass != &value * &total_mass {
                    return Err(WitnessError::MarginalEquation { coord, value: value.to_string() });
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// JSON format
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct AtomJson {
    point: Vec<Rational>,
    weight: Rational,
}

#[derive(Serialize, Deserialize)]
struct LawJson {
    k: usize,
    atoms: Vec<AtomJson>,
}

impl Serialize for DiscreteJointLaw {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LawJson {
            k: self.k,
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomJson { point: a.point.clone(), weight: a.weight.clone() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DiscreteJointLaw {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = LawJson::deserialize(deserializer)?;
        let law = DiscreteJointLaw::new(raw.atoms.into_iter().map(|a| (a.point, a.weight)).collect())
            .map_err(D::Error::custom)?;
        if law.k() != raw.k {
            return Err(D::Error::custom(format!("declared k = {} but atoms have k = {}", raw.k, law.k())));
        }
        Ok(law)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;
    use proptest::prelude::*;

    fn rat(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn single_atom_degenerate_law() {
        let law = DiscreteJointLaw::new(vec![(vec![rat("1/2"), rat("1/2")], rat("1"))]).unwrap();
        assert_eq!(law.k(), 2);
        assert_eq!(law.num_atoms(), 1);
        assert_eq!(law.means(), vec![rat("1/2"), rat("1/2")]);
    }

    #[test]
    fn duplicate_atoms_merge() {
        let law = DiscreteJointLaw::new(vec![
            (vec![rat("0"), rat("0")], rat("1/4")),
            (vec![rat("0"), rat("0")], rat("1/4")),
            (vec![rat("1"), rat("1")], rat("1/2")),
        ])
        .unwrap();
        assert_eq!(law.num_atoms(), 2);
        assert_eq!(law.atoms()[0].weight, rat("1/2"));
    }

    #[test]
    fn weights_normalize_to_one() {
        let law = DiscreteJointLaw::new(vec![
            (vec![rat("0")], rat("2")),
            (vec![rat("1")], rat("2")),
            (vec![rat("1/2")], rat("2")),
        ])
        .unwrap();
        let total: Rational = law.atoms().iter().map(|a| &a.weight).sum();
        assert_eq!(total, rat("1"));
        assert_eq!(law.atoms()[0].weight, rat("1/3"));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(DiscreteJointLaw::new(vec![]).unwrap_err(), LawError::TotalWeightZero);
        assert_eq!(
            DiscreteJointLaw::new(vec![(vec![rat("0")], rat("0"))]).unwrap_err(),
            LawError::TotalWeightZero
        );
        assert!(matches!(
            DiscreteJointLaw::new(vec![(vec![rat("3/2")], rat("1"))]),
            Err(LawError::CoordinateOutOfRange(_))
        ));
        assert!(matches!(
            DiscreteJointLaw::new(vec![(vec![rat("0")], rat("1")), (vec![rat("0"), rat("0")], rat("1"))]),
            Err(LawError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn deldis_exact_weights() {
        // delta = 1/3: masses 1/2, 1/4, 1/4 at (2/3,2/3), (0,2/3), (2/3,0).
        let law = deldis(&rat("1/3")).unwrap();
        assert_eq!(law.num_atoms(), 3);
        assert_eq!(law.prob_where(|p| p[0] == p[1]), rat("1/2"));
        assert_eq!(law.prob_where(|p| p[0].is_zero()), rat("1/4"));
        let half = deldis(&rat("1/2")).unwrap();
        assert_eq!(half.prob_where(|p| p[0] == p[1]), rat("1/3"));
    }

    #[test]
    fn deldis_means_and_correlation() {
        // Hand summation: E X = (1-d)/(1+d) [(1-d) + d] ... = (1-d)/(1+d).
        for d in ["1/10", "1/3", "2/5", "7/10"] {
            let d = rat(d);
            let law = deldis(&d).unwrap();
            let expect = (Rational::one() - &d) / (Rational::one() + &d);
            assert_eq!(law.means(), vec![expect.clone(), expect]);
            assert!(law.correlation_equals(&-&d).unwrap());
        }
    }

    #[test]
    fn deldis_rejects_bad_delta() {
        assert!(deldis(&rat("0")).is_err());
        assert!(deldis(&rat("1")).is_err());
    }

    #[test]
    fn bernoulli_center_means() {
        let law = bernoulli_center();
        assert_eq!(law.means(), vec![rat("1/2"), rat("1/2")]);
        // |X - Y| = 1/2 with probability 1.
        assert_eq!(law.prob_where(|p| (&p[0] - &p[1]).abs() == rat("1/2")), rat("1"));
    }

    #[test]
    fn daisy_petal_value_and_means() {
        assert_eq!(daisy_pn(2, &rat("1/2")), rat("2/3"));
        for n in 1..=6u32 {
            for p in ["1/10", "1/2", "9/10"] {
                let p = rat(p);
                let law = daisy(n, &p).unwrap();
                assert_eq!(law.k(), n as usize);
                for mean in law.means() {
                    assert_eq!(mean, p);
                }
                // The coordinate maximum is the constant p_n at every atom.
                let pn = daisy_pn(n, &p);
                for atom in law.atoms() {
                    let max = atom.point.iter().cloned().fold(Rational::zero(), |m, v| Rational::max_of(&m, &v));
                    assert_eq!(max, pn);
                }
            }
        }
    }

    #[test]
    fn daisy_single_petal_is_constant() {
        let law = daisy(1, &rat("3/7")).unwrap();
        assert_eq!(law.num_atoms(), 1);
        assert_eq!(law.atoms()[0].point, vec![rat("3/7")]);
    }

    #[test]
    fn daisy_pair_matches_deldis() {
        // (2, p)-daisy with p = (1-d)/(1+d) has p_2 = 1-d and equals deldis(d).
        let d = rat("1/3");
        let p = (Rational::one() - &d) / (Rational::one() + &d);
        assert_eq!(daisy_pn(2, &p), Rational::one() - &d);
        assert_eq!(daisy(2, &p).unwrap(), deldis(&d).unwrap());
    }

    #[test]
    fn dp80_pair_is_center_indicator() {
        let law = dp80_attaining(2, &rat("1/2")).unwrap();
        assert_eq!(
            law.atoms().iter().map(|a| (a.point.clone(), a.weight.clone())).collect::<Vec<_>>(),
            vec![
                (vec![rat("1/2"), rat("0")], rat("1/2")),
                (vec![rat("1/2"), rat("1")], rat("1/2")),
            ]
        );
        // E max = 3/4 and E|X1 - X2| = 2p(1-p) = 1/2.
        let e_max = law.expectation(|p| Rational::max_of(&p[0], &p[1]));
        assert_eq!(e_max, rat("3/4"));
        let e_absdiff = law.expectation(|p| (&p[0] - &p[1]).abs());
        assert_eq!(e_absdiff, rat("1/2"));
    }

    #[test]
    fn dp80_abs_diff_is_two_p_one_minus_p() {
        for p in ["1/10", "1/4", "1/2", "3/4"] {
            let p = rat(p);
            let law = dp80_attaining(2, &p).unwrap();
            let expect = rat("2") * &p * (Rational::one() - &p);
            assert_eq!(law.expectation(|pt| (&pt[0] - &pt[1]).abs()), expect);
        }
    }

    #[test]
    fn independent_attaining_probability() {
        let law = independent_attaining(&rat("1/4")).unwrap();
        let gap = rat("3/4");
        assert_eq!(law.prob_where(|p| (&p[0] - &p[1]).abs() >= gap), rat("3/8"));
        // Product structure: P(X=a, Y=b) = P(X=a) P(Y=b) on all atoms.
        let mx = law.marginal(0);
        let my = law.marginal(1);
        assert_eq!(product_law(&mx, &my).unwrap(), law);
    }

    #[test]
    fn reflect_symmetries() {
        let d = rat("2/7");
        let law = deldis(&d).unwrap();
        assert_eq!(reflect(&law, ReflectMode::Swap).unwrap(), law);
        let complemented = reflect(&law, ReflectMode::Complement).unwrap();
        assert_eq!(reflect(&complemented, ReflectMode::Complement).unwrap(), law);
        assert!(reflect(&daisy(3, &rat("1/2")).unwrap(), ReflectMode::Swap).is_err());
    }

    #[test]
    fn mixture_identity_and_validation() {
        let law = deldis(&rat("1/3")).unwrap();
        assert_eq!(mix(&[&law], &[rat("1")]).unwrap(), law);
        assert!(mix(&[&law], &[rat("1/2")]).is_err());
        let other = bernoulli_center();
        let mixed = mix(&[&law, &other], &[rat("1/2"), rat("1/2")]).unwrap();
        assert_eq!(mixed.prob_where(|p| p[0] == rat("1/2")), rat("1/2"));
    }

    #[test]
    fn correlation_errors_on_constant_coordinate() {
        let law = DiscreteJointLaw::new(vec![
            (vec![rat("1/2"), rat("0")], rat("1/2")),
            (vec![rat("1/2"), rat("1")], rat("1/2")),
        ])
        .unwrap();
        assert_eq!(law.means(), vec![rat("1/2"), rat("1/2")]);
        assert_eq!(law.correlation().unwrap_err(), LawError::ZeroVariance(0));
    }

    #[test]
    fn json_schema_shape() {
        let law = deldis(&rat("1/3")).unwrap();
        let json = serde_json::to_string(&law).unwrap();
        assert_eq!(
            json,
            "{\"k\":2,\"atoms\":[{\"point\":[\"0\",\"2/3\"],\"weight\":\"1/4\"},\
             {\"point\":[\"2/3\",\"0\"],\"weight\":\"1/4\"},\
             {\"point\":[\"2/3\",\"2/3\"],\"weight\":\"1/2\"}]}"
        );
        let back: DiscreteJointLaw = serde_json::from_str(&json).unwrap();
        assert_eq!(back, law);
    }

    #[test]
    fn json_rejects_wrong_k() {
        let bad = "{\"k\":3,\"atoms\":[{\"point\":[\"0\",\"1\"],\"weight\":\"1\"}]}";
        assert!(serde_json::from_str::<DiscreteJointLaw>(bad).is_err());
    }

    proptest! {
        #[test]
        fn json_round_trip(seed in 0u64..500) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(1..6usize);
            let atoms: Vec<(Vec<Rational>, Rational)> = (0..n)
                .map(|_| {
                    let point = vec![
                        Rational::new(rng.gen_range(0..=8), 8),
                        Rational::new(rng.gen_range(0..=8), 8),
                    ];
                    (point, Rational::new(rng.gen_range(1..9), 9))
                })
                .collect();
            let law = DiscreteJointLaw::new(atoms).unwrap();
            let json = serde_json::to_string(&law).unwrap();
            let back: DiscreteJointLaw = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, law);
        }

        #[test]
        fn generators_always_satisfy_invariants(num in 1i64..20, den in 20i64..21, n in 1u32..6) {
            let p = Rational::new(num, den);
            for law in [daisy(n, &p).unwrap(), dp80_attaining(n + 1, &p).unwrap()] {
                let total: Rational = law.atoms().iter().map(|a| &a.weight).sum();
                prop_assert_eq!(total, Rational::one());
                for a in law.atoms() {
                    prop_assert!(a.weight.is_positive());
                    for c in &a.point {
                        prop_assert!(c.in_unit_interval());
                    }
                }
                for w in law.atoms().windows(2) {
                    prop_assert!(w[0].point < w[1].point);
                }
            }
        }
    }
}
