//! Linearly reductive group schemes in characteristic p >= 0, modeled by the
//! pair (p, associated abstract group) together with characteristic-zero
//! matrix representations. The specialization bijection makes every
//! computation here finite exact linear algebra: lambda-invariants,
//! determinant characters, and the adjoint character on the connected part.

use std::collections::BTreeSet;
use std::sync::Arc;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{lcm_u64, CycMatrix, CycNum, Rational, CONDUCTOR_CAP};
use crate::groups::{AbelianStructure, FiniteMatrixGroup};

/// A finite linearly reductive group scheme over an algebraically closed
/// field of characteristic `p`, given by its associated abstract group.
/// Validity: p = 0, or the group has a unique abelian p-Sylow subgroup.
/// The p-Sylow models the connected part, the quotient the etale part.
#[derive(Clone)]
pub struct LrGroupScheme {
    p: u64,
    abs: Arc<FiniteMatrixGroup>,
    /// sorted element indices of the p-Sylow ([0] alone when p is trivial)
    sylow: Vec<usize>,
    sylow_invariants: AbelianStructure,
}

impl LrGroupScheme {
    pub fn new(p: u64, abs: FiniteMatrixGroup) -> Result<Self> {
        Self::from_arc(p, Arc::new(abs))
    }

    pub fn from_arc(p: u64, abs: Arc<FiniteMatrixGroup>) -> Result<Self> {
        if p != 0 && !crate::exactmath::is_prime(p) {
            return Err(Error::BadInput(format!("characteristic {p} is not 0 or prime")));
        }
        let (sylow, sylow_invariants) = if p == 0 {
            (vec![0], AbelianStructure::trivial())
        } else {
            let Some(s) = abs.unique_abelian_sylow_subgroup(p) else {
                return Err(Error::NotLinearlyReductive {
                    p,
                    order: abs.order(),
                });
            };
            let invariants = if s.len() == 1 {
                AbelianStructure::trivial()
            } else {
                let sub = abs.table().subgroup(&s);
                AbelianStructure::new(sub.abelian_invariants())
            };
            (s, invariants)
        };
        Ok(LrGroupScheme {
            p,
            abs,
            sylow,
            sylow_invariants,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn abs(&self) -> &FiniteMatrixGroup {
        &self.abs
    }

    pub fn abs_arc(&self) -> Arc<FiniteMatrixGroup> {
        Arc::clone(&self.abs)
    }

    pub fn length(&self) -> usize {
        self.abs.order()
    }

    /// Length of the connected part G°: the p-part of |G|.
    pub fn connected_length(&self) -> usize {
        self.sylow.len()
    }

    /// Length of the etale part: prime-to-p part of |G|.
    pub fn etale_length(&self) -> usize {
        self.abs.order() / self.sylow.len()
    }

    pub fn is_etale(&self) -> bool {
        self.connected_length() == 1
    }

    /// Element indices of the p-Sylow subgroup (identity alone for p = 0).
    pub fn sylow_elements(&self) -> &[usize] {
        &self.sylow
    }

    /// Cyclic decomposition of the p-Sylow: the mu_{p^{n_i}} factors of the
    /// connected part in Nagata's normal form.
    pub fn connected_invariants(&self) -> &AbelianStructure {
        &self.sylow_invariants
    }

    /// The etale quotient G/G°: order, abelianization, and the cosets hit by
    /// the group generators.
    pub fn etale_quotient(&self) -> EtaleQuotient {
        let (quot, coset_of, _) = self.abs.table().quotient(&self.sylow);
        let derived = quot.commutator_subgroup();
        let (ab, _, _) = quot.quotient(&derived);
        EtaleQuotient {
            order: quot.order(),
            abelianization: AbelianStructure::new(ab.abelian_invariants()),
            generator_cosets: self
                .abs
                .generator_indices()
                .iter()
                .map(|&g| coset_of[g])
                .collect(),
        }
    }
}

impl std::fmt::Debug for LrGroupScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "LrGroupScheme(p = {}, length {} = {} x {})",
            self.p,
            self.length(),
            self.connected_length(),
            self.etale_length()
        )
    }
}

/// Description of the etale part G^et = G/G°.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaleQuotient {
    pub order: usize,
    pub abelianization: AbelianStructure,
    pub generator_cosets: Vec<usize>,
}

/// A finite-dimensional representation of the scheme, stored as the
/// characteristic-zero matrix representation of the associated abstract
/// group (one matrix per element, extended multiplicatively from the
/// generator images and verified against the multiplication table).
#[derive(Clone, Debug)]
pub struct LrRepresentation {
    scheme: LrGroupScheme,
    dim: usize,
    images: Vec<CycMatrix>,
}

impl LrRepresentation {
    pub fn new(scheme: LrGroupScheme, gen_images: Vec<CycMatrix>) -> Result<Self> {
        let abs = scheme.abs();
        let gen_count = abs.generator_indices().len();
        if gen_images.len() != gen_count {
            return Err(Error::NotHomomorphism(format!(
                "expected {gen_count} generator images, got {}",
                gen_images.len()
            )));
        }
        if gen_images.is_empty() {
            if abs.order() != 1 {
                return Err(Error::NotHomomorphism("no images for a nontrivial group".into()));
            }
            return Err(Error::BadInput(
                "the trivial group needs an explicit dimension; use trivial_rep".into(),
            ));
        }
        let dim = gen_images[0].rows();
        let mut conductor = 1u64;
        for img in &gen_images {
            if !img.is_square() || img.rows() != dim {
                return Err(Error::NotHomomorphism("generator images have mixed shapes".into()));
            }
            conductor = lcm_u64(conductor, img.conductor());
            if conductor > CONDUCTOR_CAP {
                return Err(Error::ConductorCapExceeded(conductor));
            }
        }
        let gen_images: Vec<CycMatrix> = gen_images
            .into_iter()
            .map(|m| m.promote(conductor))
            .collect::<Result<Vec<_>>>()?;

        // extend along BFS words, then verify all (element, generator) pairs:
        // by induction on words this is the full homomorphism property
        let n = abs.order();
        let mut images = Vec::with_capacity(n);
        images.push(CycMatrix::identity(dim, conductor));
        for j in 1..n {
            let (pj, kj) = abs.word(j);
            let img = images[pj].mul(&gen_images[kj])?;
            images.push(img);
        }
        for i in 0..n {
            for (k, gk) in gen_images.iter().enumerate() {
                let target = abs.mul(i, abs.generator_indices()[k]);
                if images[i].mul(gk)? != images[target] {
                    return Err(Error::NotHomomorphism(format!(
                        "image mismatch at element {i}, generator {k}"
                    )));
                }
            }
        }
        Ok(LrRepresentation { scheme, dim, images })
    }

    /// The d-dimensional trivial representation (every element acts as the
    /// identity); also covers the trivial group.
    pub fn trivial_rep(scheme: LrGroupScheme, dim: usize) -> Self {
        let n = scheme.abs().order();
        LrRepresentation {
            scheme,
            dim,
            images: vec![CycMatrix::identity(dim, 1); n],
        }
    }

    /// The representation that realizes the group by its own matrices.
    pub fn tautological(scheme: LrGroupScheme) -> Self {
        let abs = scheme.abs();
        let dim = abs.dim();
        let images = abs.elements().to_vec();
        LrRepresentation { scheme, dim, images }
    }

    pub fn scheme(&self) -> &LrGroupScheme {
        &self.scheme
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn image(&self, i: usize) -> &CycMatrix {
        &self.images[i]
    }

    pub fn generator_images(&self) -> Vec<CycMatrix> {
        self.scheme
            .abs()
            .generator_indices()
            .iter()
            .map(|&g| self.images[g].clone())
            .collect()
    }

    /// Block sum with the trivial representation of dimension `extra`.
    pub fn direct_sum_trivial(&self, extra: usize) -> Result<LrRepresentation> {
        let pad = CycMatrix::identity(extra, 1);
        let images = self
            .images
            .iter()
            .map(|m| m.block_diagonal(&pad))
            .collect::<Result<Vec<_>>>()?;
        Ok(LrRepresentation {
            scheme: self.scheme.clone(),
            dim: self.dim + extra,
            images,
        })
    }
}

/// The lambda-invariant: the maximal dimension of the fixed space of a
/// nontrivial cyclic subgroup, computed as max over non-identity elements g
/// of dim ker(rho(g) - 1) = d - rank(rho(g) - 1). Zero for the trivial
/// group (empty max).
pub fn lambda(rep: &LrRepresentation) -> usize {
    let n = rep.scheme().abs().order();
    let d = rep.dim();
    let mut best = 0usize;
    for i in 1..n {
        let diff = rep
            .image(i)
            .sub(&CycMatrix::identity(d, rep.image(i).conductor()))
            .expect("shape is square");
        best = best.max(d - diff.rank());
        if best == d {
            break; // cannot grow further
        }
    }
    best
}

/// Independent route to lambda: the fixed-space dimension of <g> is the
/// averaged character sum (1/|<g>|) * sum_j trace(rho(g^j)), an exact
/// rational that must be a nonnegative integer. Maximized over distinct
/// nontrivial cyclic subgroups.
pub fn lambda_via_character_sum(rep: &LrRepresentation) -> Result<usize> {
    let abs = rep.scheme().abs();
    let n = abs.order();
    if n == 1 {
        return Ok(0);
    }
    let conductor = rep.image(0).conductor();
    let traces: Vec<CycNum> = (0..n).map(|i| rep.image(i).trace()).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut best = 0usize;
    for g in 1..n {
        let members = abs.table().subgroup_closure(&[g]);
        if !seen.insert(members.clone()) {
            continue;
        }
        let mut sum = CycNum::zero(conductor);
        for &x in &members {
            sum = sum.add(&traces[x].promote(conductor)?);
        }
        let avg = sum.scale(&Rational::new(1.into(), (members.len() as i64).into()));
        let q = avg.as_rational().ok_or_else(|| {
            Error::BadInput("character sum did not average to a rational".into())
        })?;
        if !q.denom().is_one() || q.numer() < &num::BigInt::zero() {
            return Err(Error::BadInput(format!(
                "character sum averaged to {q}, not a nonnegative integer"
            )));
        }
        let dim_fixed: usize = q.numer().try_into().expect("fixed dimension fits usize");
        best = best.max(dim_fixed);
    }
    Ok(best)
}

/// The standard predicate bundle on a representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RepPredicates {
    pub very_small: bool,
    pub small: bool,
    pub faithful: bool,
    pub gorenstein: bool,
}

pub fn predicates(rep: &LrRepresentation) -> RepPredicates {
    let l = lambda(rep);
    let d = rep.dim();
    let n = rep.scheme().abs().order();
    let faithful = (1..n).all(|i| !rep.image(i).is_identity());
    let gorenstein = det_character(rep).is_trivial();
    RepPredicates {
        very_small: l == 0,
        small: l + 2 <= d,
        faithful,
        gorenstein,
    }
}

/// A one-dimensional character of the associated abstract group, stored as
/// one root of unity per element index.
#[derive(Clone, Debug)]
pub struct SchemeCharacter {
    values: Vec<CycNum>,
}

impl SchemeCharacter {
    pub fn values(&self) -> &[CycNum] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &CycNum {
        &self.values[i]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|v| v.is_one())
    }
}

/// The determinant character of a representation, element-wise.
pub fn det_character(rep: &LrRepresentation) -> SchemeCharacter {
    let abs = rep.scheme().abs();
    let n = abs.order();
    let gen_dets: Vec<CycNum> = rep
        .generator_images()
        .iter()
        .map(|m| m.det().expect("images are square"))
        .collect();
    let conductor = gen_dets
        .iter()
        .fold(1u64, |m, d| lcm_u64(m, d.conductor()));
    let mut values = Vec::with_capacity(n);
    values.push(CycNum::one(conductor));
    for j in 1..n {
        let (pj, kj) = abs.word(j);
        let v = values[pj].mul(&gen_dets[kj].promote(conductor).expect("lcm divides"));
        values.push(v);
    }
    debug_assert!({
        let gi = abs.generator_indices().to_vec();
        (0..n).all(|i| {
            gi.iter().enumerate().all(|(k, &ge)| {
                values[abs.mul(i, ge)] == values[i].mul(&gen_dets[k].promote(conductor).unwrap())
            })
        })
    });
    SchemeCharacter { values }
}

/// The adjoint character on Lie(G°): the action of each group generator by
/// conjugation on a fixed generator of the (cyclic) p-Sylow, recorded as an
/// exponent in the multiplicative group of the prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdCharacter {
    pub p: u64,
    /// true when p does not divide |G|: Lie(G) = 0 and the character is
    /// trivial by convention.
    pub etale: bool,
    /// c(g) mod p per group generator (empty when etale).
    pub generator_values: Vec<u64>,
}

impl AdCharacter {
    pub fn is_trivial(&self) -> bool {
        self.etale || self.generator_values.iter().all(|&c| c == 1)
    }
}

pub fn ad_character(scheme: &LrGroupScheme) -> Result<AdCharacter> {
    let p = scheme.characteristic();
    if p == 0 || scheme.connected_length() == 1 {
        return Ok(AdCharacter {
            p,
            etale: true,
            generator_values: vec![],
        });
    }
    let abs = scheme.abs();
    let sylow = scheme.sylow_elements();
    let sylow_order = sylow.len();
    // the connected part must be a single mu_{p^n}: the Sylow is cyclic
    let x = sylow
        .iter()
        .copied()
        .filter(|&i| abs.element_order(i) == sylow_order)
        .min_by_key(|&i| i)
        .ok_or(Error::ConnectedPartNotCyclic)?;
    // powers of x, for discrete logs in <x>
    let mut power_index = std::collections::HashMap::new();
    let mut cur = 0usize; // x^0
    for e in 0..sylow_order {
        power_index.insert(cur, e as u64);
        cur = abs.mul(cur, x);
    }
    let exponent_of = |elem: usize| -> Result<u64> {
        power_index
            .get(&elem)
            .copied()
            .ok_or(Error::ConnectedPartNotCyclic)
    };
    let mut generator_values = Vec::new();
    for &g in abs.generator_indices() {
        let c = exponent_of(abs.table().conjugate(g, x))?;
        // conjugation is an automorphism of a cyclic p-group: the exponent is
        // a unit mod p^n and is independent of the chosen generator of the
        // Sylow; assert that on a second generator when one exists.
        debug_assert!(c % p != 0);
        if sylow_order > 1 {
            if let Some(&x2) = sylow
                .iter()
                .find(|&&i| i != x && abs.element_order(i) == sylow_order)
            {
                let mut idx2 = std::collections::HashMap::new();
                let mut cur2 = 0usize;
                for e in 0..sylow_order {
                    idx2.insert(cur2, e as u64);
                    cur2 = abs.mul(cur2, x2);
                }
                let c2 = idx2
                    .get(&abs.table().conjugate(g, x2))
                    .copied()
                    .ok_or(Error::ConnectedPartNotCyclic)?;
                assert_eq!(
                    c % sylow_order as u64,
                    c2 % sylow_order as u64,
                    "conjugation exponent must not depend on the Sylow generator"
                );
            }
        }
        generator_values.push(c % p);
    }
    Ok(AdCharacter {
        p,
        etale: false,
        generator_values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{root_of_unity, CycNum};

    fn diag(entries: Vec<CycNum>) -> CycMatrix {
        CycMatrix::diagonal(entries).unwrap()
    }

    fn mu_group(n: u64, weights: &[i64]) -> FiniteMatrixGroup {
        let gens = vec![diag(
            weights.iter().map(|&w| root_of_unity(n, w)).collect(),
        )];
        FiniteMatrixGroup::close(weights.len(), gens, 4096).unwrap()
    }

    fn s3_group() -> FiniteMatrixGroup {
        let gens = vec![
            diag(vec![root_of_unity(3, 1), root_of_unity(3, 2)]),
            CycMatrix::new(
                2,
                2,
                vec![
                    CycNum::zero(1),
                    CycNum::one(1),
                    CycNum::one(1),
                    CycNum::zero(1),
                ],
            )
            .unwrap(),
        ];
        FiniteMatrixGroup::close(2, gens, 64).unwrap()
    }

    #[test]
    fn scheme_validation_and_lengths() {
        // mu_3 rtimes C_2 at p = 3: connected length 3, etale length 2
        let s = LrGroupScheme::new(3, s3_group()).unwrap();
        assert_eq!(s.length(), 6);
        assert_eq!(s.connected_length(), 3);
        assert_eq!(s.etale_length(), 2);
        assert_eq!(s.connected_invariants().factors(), &[3]);
        let q = s.etale_quotient();
        assert_eq!(q.order, 2);

        // same group at p = 2: three 2-Sylows, not linearly reductive
        let err = LrGroupScheme::new(2, s3_group()).unwrap_err();
        assert!(matches!(err, Error::NotLinearlyReductive { p: 2, order: 6 }));

        // p = 0 is always valid and etale
        let s0 = LrGroupScheme::new(0, s3_group()).unwrap();
        assert!(s0.is_etale());
        assert_eq!(s0.etale_length(), 6);
    }

    #[test]
    fn lambda_examples() {
        // mu_{5,2}: diag(z5, z5^2) has no eigenvalue 1 away from the identity
        let s = LrGroupScheme::new(0, mu_group(5, &[1, 2])).unwrap();
        let rep = LrRepresentation::tautological(s);
        assert_eq!(lambda(&rep), 0);
        assert_eq!(lambda_via_character_sum(&rep).unwrap(), 0);

        // C2 as diag(1, -1) fixes a line
        let s = LrGroupScheme::new(0, mu_group(2, &[0, 1])).unwrap();
        let rep = LrRepresentation::tautological(s);
        assert_eq!(lambda(&rep), 1);
        assert_eq!(lambda_via_character_sum(&rep).unwrap(), 1);

        // trivial group in dimension 3: empty max
        let s = LrGroupScheme::new(0, FiniteMatrixGroup::trivial(3)).unwrap();
        let rep = LrRepresentation::tautological(s);
        assert_eq!(lambda(&rep), 0);
        assert_eq!(lambda_via_character_sum(&rep).unwrap(), 0);
    }

    #[test]
    fn lambda_direct_sum_with_trivial_line() {
        let s = LrGroupScheme::new(0, mu_group(5, &[1, 2])).unwrap();
        let rep = LrRepresentation::tautological(s);
        let padded = rep.direct_sum_trivial(1).unwrap();
        assert_eq!(lambda(&padded), lambda(&rep) + 1);
    }

    #[test]
    fn predicate_examples() {
        // mu_{5,2}: very small, small, faithful, not Gorenstein (det = z5^3)
        let s = LrGroupScheme::new(0, mu_group(5, &[1, 2])).unwrap();
        let rep = LrRepresentation::tautological(s);
        let p = predicates(&rep);
        assert_eq!(
            (p.very_small, p.small, p.faithful, p.gorenstein),
            (true, true, true, false)
        );
        // oracle: the determinant of the generator is z5^3 directly
        let det = rep.generator_images()[0].det().unwrap();
        assert_eq!(det, root_of_unity(5, 3));

        // mu_5 in SL2 as diag(a, a^-1)
        let s = LrGroupScheme::new(0, mu_group(5, &[1, 4])).unwrap();
        let p = predicates(&LrRepresentation::tautological(s));
        assert_eq!(
            (p.very_small, p.small, p.faithful, p.gorenstein),
            (true, true, true, true)
        );

        // diag(1, -1) on C2: a pseudo-reflection
        let s = LrGroupScheme::new(0, mu_group(2, &[0, 1])).unwrap();
        let p = predicates(&LrRepresentation::tautological(s));
        assert_eq!(
            (p.very_small, p.small, p.faithful, p.gorenstein),
            (false, false, true, false)
        );
    }

    #[test]
    fn det_character_examples() {
        // 1/7(1,2,4): 1+2+4 = 7 = 0 mod 7, so the determinant character is trivial
        let s = LrGroupScheme::new(0, mu_group(7, &[1, 2, 4])).unwrap();
        let rep = LrRepresentation::tautological(s);
        assert!(det_character(&rep).is_trivial());

        // diag(1,-1): the nontrivial element has determinant -1
        let s = LrGroupScheme::new(0, mu_group(2, &[0, 1])).unwrap();
        let rep = LrRepresentation::tautological(s);
        let chi = det_character(&rep);
        assert!(!chi.is_trivial());
        assert_eq!(*chi.value(1), CycNum::from_int(2, -1));
    }

    #[test]
    fn ad_character_examples() {
        // cyclic 1/n(1,q1,q2): abelian group, conjugation is trivial
        let s = LrGroupScheme::new(7, mu_group(7, &[1, 2, 4])).unwrap();
        let chi = ad_character(&s).unwrap();
        assert!(!chi.etale);
        assert!(chi.is_trivial());

        // mu_3 rtimes C2 at p = 3: the swap inverts the Sylow: c = -1 = 2 mod 3
        let s = LrGroupScheme::new(3, s3_group()).unwrap();
        let chi = ad_character(&s).unwrap();
        assert!(!chi.etale);
        assert_eq!(chi.generator_values, vec![1, 2]);
        assert!(!chi.is_trivial());

        // p not dividing |G|: trivial with the etale flag
        let s = LrGroupScheme::new(5, s3_group()).unwrap();
        let chi = ad_character(&s).unwrap();
        assert!(chi.etale && chi.is_trivial());
    }

    #[test]
    fn rep_rejects_non_homomorphic_images() {
        // order-4 generator sent to an order-3 matrix: g^4 = e would have to
        // map to the identity, but the image has order 3
        let s = LrGroupScheme::new(0, mu_group(4, &[1, 3])).unwrap();
        let bad = diag(vec![root_of_unity(3, 1), root_of_unity(3, 2)]);
        let err = LrRepresentation::new(s, vec![bad]).unwrap_err();
        assert!(matches!(err, Error::NotHomomorphism(_)));
        // an order-4 generator mapped to an order-2 matrix is a genuine
        // (non-faithful) homomorphism and must be accepted
        let fold = diag(vec![CycNum::from_int(2, -1), CycNum::from_int(2, -1)]);
        let s = LrGroupScheme::new(0, mu_group(4, &[1, 3])).unwrap();
        let rep = LrRepresentation::new(s, vec![fold]).unwrap();
        assert!(!predicates(&rep).faithful);
    }

    #[test]
    fn non_tautological_representation_extends_correctly() {
        // send the generator of C4 = <diag(i, -i)> to diag(i, i): a genuine
        // homomorphism with a different image group
        let s = LrGroupScheme::new(0, mu_group(4, &[1, 3])).unwrap();
        let img = diag(vec![root_of_unity(4, 1), root_of_unity(4, 1)]);
        let rep = LrRepresentation::new(s, vec![img]).unwrap();
        assert_eq!(lambda(&rep), 0);
        assert!(!predicates(&rep).gorenstein);
    }
}
