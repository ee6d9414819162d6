//! Constructors and exhaustive catalogs of finite, very small, linearly
//! reductive subgroup schemes of SL2, GL2, SL3, GL3 per characteristic.
//! Entries are built from explicit generators, closure-verified to their
//! stated lengths, and lambda-verified to be very small; nothing is taken
//! on faith from the tables.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactmath::{
    gcd_u64, is_prime, mod_inverse, multiplicative_order, root_of_unity, CycMatrix, CycNum,
};
use crate::groups::FiniteMatrixGroup;
use crate::lrgs::{lambda, predicates, LrGroupScheme, LrRepresentation};
use crate::singularity::canonical_cyclic_weights;

/// Family tags for catalog entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// diagonal mu_n (SL2 as diag(a, a^-1); SL3/GL3 with explicit weights)
    Mu,
    /// mu_n in GL2 as diag(a, a^q)
    MuNQ,
    /// binary dihedral of length 4n
    BD,
    /// binary tetrahedral of length 24
    BT,
    /// binary octahedral of length 48
    BO,
    /// binary icosahedral of length 120
    BI,
    /// GL2 fibered products, cases (2a)-(5)
    Brieskorn2a,
    Brieskorn2b,
    Brieskorn3a,
    Brieskorn3b,
    Brieskorn4,
    Brieskorn5,
    /// split metacyclic mu(m, 3^f N, r) in GL3
    Metacyclic3,
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Mu => "Mu",
            Family::MuNQ => "MuNQ",
            Family::BD => "BD",
            Family::BT => "BT",
            Family::BO => "BO",
            Family::BI => "BI",
            Family::Brieskorn2a => "Brieskorn2a",
            Family::Brieskorn2b => "Brieskorn2b",
            Family::Brieskorn3a => "Brieskorn3a",
            Family::Brieskorn3b => "Brieskorn3b",
            Family::Brieskorn4 => "Brieskorn4",
            Family::Brieskorn5 => "Brieskorn5",
            Family::Metacyclic3 => "Metacyclic3",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One classified subgroup scheme: family, parameters, validated scheme and
/// its very small tautological representation.
pub struct CatalogEntry {
    pub family: Family,
    /// named parameters in display order
    pub params: Vec<(&'static str, u64)>,
    pub scheme: LrGroupScheme,
    pub rep: LrRepresentation,
    pub length: usize,
    pub gorenstein: bool,
}

impl CatalogEntry {
    fn build(
        family: Family,
        params: Vec<(&'static str, u64)>,
        p: u64,
        dim: usize,
        generators: Vec<CycMatrix>,
        expected_length: usize,
    ) -> Result<Self> {
        let group = FiniteMatrixGroup::close(dim, generators, expected_length)?;
        assert_eq!(
            group.order(),
            expected_length,
            "{family} {params:?}: closure has order {} but the classification says {expected_length}",
            group.order()
        );
        let scheme = LrGroupScheme::new(p, group)?;
        let rep = LrRepresentation::tautological(scheme.clone());
        let preds = predicates(&rep);
        assert!(
            preds.very_small && preds.faithful,
            "{family} {params:?}: catalog entry must be very small and faithful (lambda = {})",
            lambda(&rep)
        );
        Ok(CatalogEntry {
            family,
            params,
            scheme,
            rep,
            length: expected_length,
            gorenstein: preds.gorenstein,
        })
    }

    pub fn is_smooth(&self) -> bool {
        self.length == 1
    }

    pub fn param(&self, name: &str) -> Option<u64> {
        self.params.iter().find(|(k, _)| *k == name).map(|(_, v)| *v)
    }
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?} (length {})", self.family, self.params, self.length)
    }
}

fn sort_catalog(entries: &mut Vec<CatalogEntry>) {
    entries.sort_by(|a, b| {
        (a.length, a.family, a.params.iter().map(|&(_, v)| v).collect::<Vec<_>>()).cmp(&(
            b.length,
            b.family,
            b.params.iter().map(|&(_, v)| v).collect::<Vec<_>>(),
        ))
    });
}

/// Characteristic gate "p >= min or p = 0", exactly as the classification
/// prints it.
fn gate(p: u64, min: u64) -> bool {
    p == 0 || p >= min
}

// ---------------------------------------------------------------------------
// Explicit generators from the classification theorems
// ---------------------------------------------------------------------------

fn antidiag_zeta4() -> CycMatrix {
    let z4 = root_of_unity(4, 1);
    CycMatrix::new(2, 2, vec![CycNum::zero(4), z4.clone(), z4, CycNum::zero(4)]).unwrap()
}

/// mu_n in SL2: diag(a, a^-1).
pub fn mu_sl2_generators(n: u64) -> Vec<CycMatrix> {
    if n == 1 {
        return vec![CycMatrix::identity(2, 1)];
    }
    vec![CycMatrix::diagonal(vec![root_of_unity(n, 1), root_of_unity(n, -1)]).unwrap()]
}

/// mu_{n,q} in GL2: diag(a, a^q).
pub fn mu_nq_generators(n: u64, q: u64) -> Vec<CycMatrix> {
    if n == 1 {
        return vec![CycMatrix::identity(2, 1)];
    }
    vec![CycMatrix::diagonal(vec![root_of_unity(n, 1), root_of_unity(n, q as i64)]).unwrap()]
}

/// Binary dihedral BD_n (length 4n): mu_2n diagonal and the antidiagonal
/// zeta_4 matrix.
pub fn bd_generators(n: u64) -> Vec<CycMatrix> {
    let mut gens = mu_sl2_generators(2 * n);
    gens.push(antidiag_zeta4());
    gens
}

/// Binary tetrahedral BT_24: BD_2 plus (1/sqrt 2) [[z8^7, z8^7], [z8^5, z8]].
pub fn bt_generators() -> Vec<CycMatrix> {
    let z8 = |k| root_of_unity(8, k);
    let sqrt2_inv = z8(1).add(&z8(7)).invert().expect("sqrt 2 is invertible");
    let extra = CycMatrix::new(2, 2, vec![z8(7), z8(7), z8(5), z8(1)])
        .unwrap()
        .scale(&sqrt2_inv)
        .unwrap();
    let mut gens = bd_generators(2);
    gens.push(extra);
    gens
}

/// Binary octahedral BO_48: BT_24 plus mu_8 diagonal.
pub fn bo_generators() -> Vec<CycMatrix> {
    let mut gens = bt_generators();
    gens.push(CycMatrix::diagonal(vec![root_of_unity(8, 1), root_of_unity(8, -1)]).unwrap());
    gens
}

/// Binary icosahedral BI_120: mu_10 diagonal, the rotation [[0,1],[-1,0]],
/// and (1/(z5^2 - z5^3)) [[z5 + z5^-1, 1], [1, -(z5 + z5^-1)]].
pub fn bi_generators() -> Vec<CycMatrix> {
    let z5 = |k| root_of_unity(5, k);
    let rot = CycMatrix::new(
        2,
        2,
        vec![
            CycNum::zero(1),
            CycNum::one(1),
            CycNum::from_int(1, -1),
            CycNum::zero(1),
        ],
    )
    .unwrap();
    let s = z5(1).add(&z5(-1));
    let scale = z5(2).sub(&z5(3)).invert().expect("z5^2 - z5^3 is invertible");
    let third = CycMatrix::new(2, 2, vec![s.clone(), CycNum::one(5), CycNum::one(5), s.neg()])
        .unwrap()
        .scale(&scale)
        .unwrap();
    let mut gens = mu_sl2_generators(10);
    gens.push(rot);
    gens.push(third);
    gens
}

/// Diagonal mu_m in GL3 with weights (1, q1, q2).
pub fn mu_diag3_generators(m: u64, q1: u64, q2: u64) -> Vec<CycMatrix> {
    if m == 1 {
        return vec![CycMatrix::identity(3, 1)];
    }
    vec![CycMatrix::diagonal(vec![
        root_of_unity(m, 1),
        root_of_unity(m, q1 as i64),
        root_of_unity(m, q2 as i64),
    ])
    .unwrap()]
}

/// Split metacyclic mu(m, 3^f N, r) in GL3: mu_m as diag(a, a^r, a^r2),
/// scalars mu_N, and the order-3^f cyclic permutation with corner entry a
/// primitive 3^(f-1)-th root of unity.
pub fn metacyclic3_generators(m: u64, f: u32, big_n: u64, r: u64) -> Vec<CycMatrix> {
    let mut gens = Vec::new();
    if m > 1 {
        gens.push(
            CycMatrix::diagonal(vec![
                root_of_unity(m, 1),
                root_of_unity(m, r as i64),
                root_of_unity(m, (r * r % m) as i64),
            ])
            .unwrap(),
        );
    }
    let corner = root_of_unity(3u64.pow(f - 1), 1);
    let zero = CycNum::zero(corner.conductor());
    let one = CycNum::one(corner.conductor());
    gens.push(
        CycMatrix::new(
            3,
            3,
            vec![
                zero.clone(),
                one.clone(),
                zero.clone(),
                zero.clone(),
                zero.clone(),
                one,
                corner,
                zero.clone(),
                zero,
            ],
        )
        .unwrap(),
    );
    if big_n > 1 {
        let z = root_of_unity(big_n, 1);
        gens.push(CycMatrix::diagonal(vec![z.clone(), z.clone(), z]).unwrap());
    }
    gens
}

// ---------------------------------------------------------------------------
// Split metacyclic parameter validation
// ---------------------------------------------------------------------------

/// Parameters of the split metacyclic group scheme mu(m, n, r) = mu_m x| mu_n
/// with mu_n acting through the power map r.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MetacyclicParams {
    pub m: u64,
    pub n: u64,
    pub r: u64,
    /// multiplicative order of r mod m
    pub e: u64,
}

impl MetacyclicParams {
    pub fn new(m: u64, n: u64, r: u64) -> Result<Self> {
        if m < 1 || n < 1 || r < 1 || r > m {
            return Err(Error::BadInput(format!(
                "metacyclic parameters need m, n >= 1 and 0 < r <= m; got ({m}, {n}, {r})"
            )));
        }
        let prod = (n as u128) * ((r - 1) as u128);
        if num::integer::gcd(prod, m as u128) != 1 {
            return Err(Error::BadInput(format!(
                "gcd(n(r-1), m) must be 1; got gcd({prod}, {m}) != 1"
            )));
        }
        if mod_pow(r, n, m) != 1 % m {
            return Err(Error::BadInput(format!("r^n must be 1 mod m: {r}^{n} mod {m}")));
        }
        let e = if m == 1 { 1 } else { multiplicative_order(r % m, m) };
        Ok(MetacyclicParams { m, n, r, e })
    }

    /// Very small iff every prime divisor of e divides n/e.
    pub fn is_very_small(&self) -> bool {
        debug_assert_eq!(self.n % self.e, 0);
        let quot = self.n / self.e;
        let mut e = self.e;
        let mut p = 2u64;
        while p * p <= e {
            if e % p == 0 {
                if quot % p != 0 {
                    return false;
                }
                while e % p == 0 {
                    e /= p;
                }
            }
            p += 1;
        }
        if e > 1 && quot % e != 0 {
            return false;
        }
        true
    }

    /// The group scheme exists over characteristic p iff p does not divide e.
    pub fn valid_in_characteristic(&self, p: u64) -> bool {
        p == 0 || self.e % p != 0
    }

    pub fn length(&self) -> u64 {
        self.m * self.n
    }
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let mut acc: u128 = 1;
    let mut b: u128 = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % modulus as u128;
        }
        b = b * b % modulus as u128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

// ---------------------------------------------------------------------------
// The fibered-product construction (H1, N1; H2, N2)
// ---------------------------------------------------------------------------

/// Generators of psi(H1 x_{H1/N1 = H2/N2} H2) inside GL2, where H1 = mu_a is
/// scalar, N1 = mu_b with c := a/b <= 3 the quotient order, H2 is a matrix
/// group and N2 a normal subgroup of index c. The cyclic quotients are
/// matched by sending the first non-N2 coset (in element order) to the
/// class of zeta_a; for quotients of order <= 3 the result is independent
/// of this choice up to conjugacy.
fn fibered_product_generators(
    a: u64,
    b: u64,
    h2: &FiniteMatrixGroup,
    n2_members: &[usize],
    n2_gens: &[usize],
) -> Vec<CycMatrix> {
    assert!(a % b == 0);
    let c = a / b;
    assert!(c <= 3, "the construction fixes phi only for quotients of order <= 3");
    let scalar = |k: i64, d: u64| {
        CycMatrix::diagonal(vec![root_of_unity(d, k), root_of_unity(d, k)]).unwrap()
    };
    if c == 1 {
        let mut gens = vec![scalar(1, a)];
        gens.extend(h2.generator_matrices());
        return gens;
    }
    // label H2-cosets by discrete log in the cyclic quotient
    let (quot, coset_of, _) = h2.table().quotient(n2_members);
    assert_eq!(quot.order() as u64, c, "|H2/N2| must equal a/b");
    // quotient element 1 is the first non-identity coset in element order;
    // its discrete logs label the cosets 0..c
    let mut label_of_coset = vec![0usize; c as usize];
    let mut x = 0usize;
    for l in 0..c as usize {
        label_of_coset[x] = l;
        x = quot.mul(x, 1);
    }
    let h1 = (0..h2.order())
        .find(|&i| label_of_coset[coset_of[i]] == 1)
        .expect("a coset of label 1 exists");

    let mut gens = Vec::new();
    if b > 1 {
        gens.push(scalar(c as i64, a)); // generates the scalar mu_b
    }
    for &g in n2_gens {
        gens.push(h2.element(g).clone());
    }
    // one mixed element: zeta_a times a label-1 representative
    gens.push(
        h2.element(h1)
            .scale(&root_of_unity(a, 1))
            .expect("scaling stays under the conductor cap"),
    );
    gens
}

/// The diagonal cyclic subgroup mu_2n of BD_n, located as the subgroup
/// generated by an element of maximal order (2n; unique for the n that
/// occur in case 2b, where n is odd and >= 3).
fn bd_diagonal_subgroup(bd: &FiniteMatrixGroup, n: u64) -> (Vec<usize>, Vec<usize>) {
    let target = (2 * n) as usize;
    let gen = (0..bd.order())
        .find(|&i| bd.element_order(i) == target)
        .expect("BD_n contains an element of order 2n");
    let members = bd.table().subgroup_closure(&[gen]);
    assert_eq!(members.len(), target);
    (members, vec![gen])
}

/// The unique 2-Sylow (a copy of BD_2) inside BT_24: all elements of
/// 2-power order; generated by two order-4 elements not in a common cyclic.
fn bt_quaternion_subgroup(bt: &FiniteMatrixGroup) -> (Vec<usize>, Vec<usize>) {
    let members = bt.table().p_power_order_elements(2);
    assert_eq!(members.len(), 8);
    assert!(bt.table().is_subgroup(&members));
    let x = *members
        .iter()
        .find(|&&i| bt.element_order(i) == 4)
        .expect("order-4 element");
    let cyc = bt.table().subgroup_closure(&[x]);
    let y = *members
        .iter()
        .find(|&&i| bt.element_order(i) == 4 && !cyc.contains(&i))
        .expect("a second maximal cyclic");
    debug_assert_eq!(bt.table().subgroup_closure(&[x, y]).len(), 8);
    (members, vec![x, y])
}

// ---------------------------------------------------------------------------
// Catalogs
// ---------------------------------------------------------------------------

/// All finite, very small, linearly reductive subgroup schemes of SL2 valid
/// in characteristic p, up to the given length.
pub fn sl2_catalog(p: u64, max_length: usize) -> Result<Vec<CatalogEntry>> {
    check_char(p)?;
    let mut out = Vec::new();
    for n in 1..=max_length as u64 {
        out.push(CatalogEntry::build(
            Family::Mu,
            vec![("n", n)],
            p,
            2,
            mu_sl2_generators(n),
            n as usize,
        )?);
    }
    if gate(p, 3) {
        let mut n = 2u64;
        while (4 * n) as usize <= max_length {
            out.push(CatalogEntry::build(
                Family::BD,
                vec![("n", n)],
                p,
                2,
                bd_generators(n),
                (4 * n) as usize,
            )?);
            n += 1;
        }
    }
    if gate(p, 5) && max_length >= 24 {
        out.push(CatalogEntry::build(Family::BT, vec![], p, 2, bt_generators(), 24)?);
    }
    if gate(p, 5) && max_length >= 48 {
        out.push(CatalogEntry::build(Family::BO, vec![], p, 2, bo_generators(), 48)?);
    }
    if gate(p, 7) && max_length >= 120 {
        out.push(CatalogEntry::build(Family::BI, vec![], p, 2, bi_generators(), 120)?);
    }
    sort_catalog(&mut out);
    Ok(out)
}

/// All finite, very small, linearly reductive subgroup schemes of GL2 valid
/// in characteristic p, up to the given length. Cyclic entries carry one
/// representative per conjugacy class (q and its inverse mod n coincide).
pub fn gl2_catalog(p: u64, max_length: usize) -> Result<Vec<CatalogEntry>> {
    check_char(p)?;
    let mut out = Vec::new();
    // (1) cyclic mu_{n,q}
    if max_length >= 1 {
        out.push(CatalogEntry::build(
            Family::MuNQ,
            vec![("n", 1), ("q", 0)],
            p,
            2,
            mu_nq_generators(1, 0),
            1,
        )?);
    }
    for n in 2..=max_length as u64 {
        for q in 1..n {
            if gcd_u64(q, n) != 1 {
                continue;
            }
            let q_inv = mod_inverse(q, n).expect("q is a unit");
            if q > q_inv {
                continue; // conjugate to the entry with the smaller exponent
            }
            out.push(CatalogEntry::build(
                Family::MuNQ,
                vec![("n", n), ("q", q)],
                p,
                2,
                mu_nq_generators(n, q),
                n as usize,
            )?);
        }
    }
    // (2a) (mu_{2m,1}, mu_{2m,1}; BD_n, BD_n): m odd, coprime to n, n >= 2
    if gate(p, 3) {
        let mut bd_cache: std::collections::BTreeMap<u64, FiniteMatrixGroup> =
            std::collections::BTreeMap::new();
        for n in 2..=(max_length as u64 / 4).max(1) {
            if (4 * n) as usize <= max_length {
                bd_cache.insert(
                    n,
                    FiniteMatrixGroup::close(2, bd_generators(n), (4 * n) as usize)?,
                );
            }
        }
        for m in (1..=max_length as u64).step_by(2) {
            for n in 2..=max_length as u64 {
                let len = 4 * m * n;
                if len as usize > max_length {
                    break;
                }
                if gcd_u64(m, n) != 1 {
                    continue;
                }
                let bd = &bd_cache[&n];
                let all: Vec<usize> = (0..bd.order()).collect();
                let gens = fibered_product_generators(2 * m, 2 * m, bd, &all, &[]);
                out.push(CatalogEntry::build(
                    Family::Brieskorn2a,
                    vec![("m", m), ("n", n)],
                    p,
                    2,
                    gens,
                    len as usize,
                )?);
            }
        }
        // (2b) (mu_{4m,1}, mu_{2m,1}; BD_n, mu_{2n,2n-1}): m even, coprime to n
        for m in (2..=max_length as u64).step_by(2) {
            for n in 2..=max_length as u64 {
                let len = 4 * m * n;
                if len as usize > max_length {
                    break;
                }
                if gcd_u64(m, n) != 1 {
                    continue;
                }
                let bd = &bd_cache[&n];
                let (n2, n2_gens) = bd_diagonal_subgroup(bd, n);
                let gens = fibered_product_generators(4 * m, 2 * m, bd, &n2, &n2_gens);
                out.push(CatalogEntry::build(
                    Family::Brieskorn2b,
                    vec![("m", m), ("n", n)],
                    p,
                    2,
                    gens,
                    len as usize,
                )?);
            }
        }
    }
    if gate(p, 5) {
        let bt = FiniteMatrixGroup::close(2, bt_generators(), 24)?;
        // (3a) (mu_{2m,1}, mu_{2m,1}; BT, BT): gcd(m, 6) = 1
        let mut m = 1u64;
        while (24 * m) as usize <= max_length {
            if gcd_u64(m, 6) == 1 {
                let all: Vec<usize> = (0..bt.order()).collect();
                let gens = fibered_product_generators(2 * m, 2 * m, &bt, &all, &[]);
                out.push(CatalogEntry::build(
                    Family::Brieskorn3a,
                    vec![("m", m)],
                    p,
                    2,
                    gens,
                    (24 * m) as usize,
                )?);
            }
            m += 1;
        }
        // (3b) (mu_{6m,1}, mu_{2m,1}; BT, BD_2): gcd(m, 6) = 3
        let mut m = 3u64;
        while (24 * m) as usize <= max_length {
            if gcd_u64(m, 6) == 3 {
                let (n2, n2_gens) = bt_quaternion_subgroup(&bt);
                let gens = fibered_product_generators(6 * m, 2 * m, &bt, &n2, &n2_gens);
                out.push(CatalogEntry::build(
                    Family::Brieskorn3b,
                    vec![("m", m)],
                    p,
                    2,
                    gens,
                    (24 * m) as usize,
                )?);
            }
            m += 3;
        }
        // (4) (mu_{2m,1}, mu_{2m,1}; BO, BO): gcd(m, 6) = 1
        let bo = FiniteMatrixGroup::close(2, bo_generators(), 48)?;
        let mut m = 1u64;
        while (48 * m) as usize <= max_length {
            if gcd_u64(m, 6) == 1 {
                let all: Vec<usize> = (0..bo.order()).collect();
                let gens = fibered_product_generators(2 * m, 2 * m, &bo, &all, &[]);
                out.push(CatalogEntry::build(
                    Family::Brieskorn4,
                    vec![("m", m)],
                    p,
                    2,
                    gens,
                    (48 * m) as usize,
                )?);
            }
            m += 1;
        }
    }
    // (5) (mu_{2m,1}, mu_{2m,1}; BI, BI): gcd(m, 30) = 1
    if gate(p, 7) && max_length >= 120 {
        let bi = FiniteMatrixGroup::close(2, bi_generators(), 120)?;
        let mut m = 1u64;
        while (120 * m) as usize <= max_length {
            if gcd_u64(m, 30) == 1 {
                let all: Vec<usize> = (0..bi.order()).collect();
                let gens = fibered_product_generators(2 * m, 2 * m, &bi, &all, &[]);
                out.push(CatalogEntry::build(
                    Family::Brieskorn5,
                    vec![("m", m)],
                    p,
                    2,
                    gens,
                    (120 * m) as usize,
                )?);
            }
            m += 1;
        }
    }
    sort_catalog(&mut out);
    Ok(out)
}

/// Canonical representatives of GL3 diagonal weight triples (1, q1, q2)
/// with all weights prime to m, one per orbit under unit scaling and
/// coordinate permutation.
fn canonical_diag3_triples(m: u64) -> Vec<(u64, u64)> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for q1 in 1..m.max(2) {
        if gcd_u64(q1, m) != 1 {
            continue;
        }
        for q2 in q1..m.max(2) {
            if gcd_u64(q2, m) != 1 {
                continue;
            }
            let canon = canonical_cyclic_weights(m, &[1, q1, q2]);
            if seen.insert(canon.clone()) {
                out.push((canon[1], canon[2]));
            }
        }
    }
    if m == 1 {
        out.push((1, 1));
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// All finite, very small, linearly reductive subgroup schemes of GL3 valid
/// in characteristic p, up to the given length: diagonal mu_m with weights
/// prime to m, and very small split metacyclic mu(m, 3^f N, r) with
/// ord(r) = 3, f >= 2, 3 not dividing N (excluded entirely when p = 3).
pub fn gl3_catalog(p: u64, max_length: usize) -> Result<Vec<CatalogEntry>> {
    check_char(p)?;
    let mut out = Vec::new();
    // (a) cyclic diagonal entries, canonicalized
    for m in 1..=max_length as u64 {
        for (q1, q2) in canonical_diag3_triples(m) {
            out.push(CatalogEntry::build(
                Family::Mu,
                vec![("m", m), ("q1", q1), ("q2", q2)],
                p,
                3,
                mu_diag3_generators(m, q1, q2),
                m as usize,
            )?);
        }
    }
    // (b) split metacyclic entries: p != 3 (also forced by p not dividing e = 3)
    if p != 3 {
        for m in 2..=max_length as u64 {
            for r in 2..m {
                if gcd_u64(r, m) != 1 || multiplicative_order(r, m) != 3 {
                    continue;
                }
                let mut f = 2u32;
                while (m * 3u64.pow(f)) as usize <= max_length {
                    let mut big_n = 1u64;
                    loop {
                        let len = m * 3u64.pow(f) * big_n;
                        if len as usize > max_length {
                            break;
                        }
                        if big_n % 3 != 0 {
                            let params = MetacyclicParams::new(m, 3u64.pow(f) * big_n, r);
                            if let Ok(mp) = params {
                                if mp.is_very_small() && mp.valid_in_characteristic(p) {
                                    out.push(CatalogEntry::build(
                                        Family::Metacyclic3,
                                        vec![("m", m), ("f", f as u64), ("N", big_n), ("r", r)],
                                        p,
                                        3,
                                        metacyclic3_generators(m, f, big_n, r),
                                        len as usize,
                                    )?);
                                }
                            }
                        }
                        big_n += 1;
                    }
                    f += 1;
                }
            }
        }
    }
    sort_catalog(&mut out);
    Ok(out)
}

/// All finite, very small, linearly reductive subgroup schemes of SL3:
/// diagonal mu_m with weights (1, q1, q2) prime to m and
/// 1 + q1 + q2 = 0 mod m. The determinant character of every entry is
/// verified trivial.
pub fn sl3_catalog(p: u64, max_m: usize) -> Result<Vec<CatalogEntry>> {
    check_char(p)?;
    let mut out = Vec::new();
    for m in 1..=max_m as u64 {
        for (q1, q2) in canonical_diag3_triples(m) {
            if (1 + q1 + q2) % m.max(1) != 0 {
                continue;
            }
            let entry = CatalogEntry::build(
                Family::Mu,
                vec![("m", m), ("q1", q1), ("q2", q2)],
                p,
                3,
                mu_diag3_generators(m, q1, q2),
                m as usize,
            )?;
            assert!(
                entry.gorenstein,
                "SL3 entries must have trivial determinant character"
            );
            out.push(entry);
        }
    }
    sort_catalog(&mut out);
    Ok(out)
}

fn check_char(p: u64) -> Result<()> {
    if p != 0 && !is_prime(p) {
        return Err(Error::BadInput(format!("characteristic {p} is not 0 or prime")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_lengths_by_closure() {
        // BD_2 from the stated generators has order 8
        let bd2 = FiniteMatrixGroup::close(2, bd_generators(2), 64).unwrap();
        assert_eq!(bd2.order(), 8);
        // BT, BO, BI close to 24, 48, 120
        assert_eq!(FiniteMatrixGroup::close(2, bt_generators(), 64).unwrap().order(), 24);
        assert_eq!(FiniteMatrixGroup::close(2, bo_generators(), 64).unwrap().order(), 48);
        assert_eq!(FiniteMatrixGroup::close(2, bi_generators(), 256).unwrap().order(), 120);
    }

    #[test]
    fn sl2_catalog_at_p5_up_to_24() {
        let cat = sl2_catalog(5, 24).unwrap();
        let mus: Vec<u64> = cat
            .iter()
            .filter(|e| e.family == Family::Mu)
            .map(|e| e.param("n").unwrap())
            .collect();
        assert_eq!(mus, (1..=24).collect::<Vec<u64>>());
        let bds: Vec<u64> = cat
            .iter()
            .filter(|e| e.family == Family::BD)
            .map(|e| e.param("n").unwrap())
            .collect();
        assert_eq!(bds, vec![2, 3, 4, 5, 6]);
        assert_eq!(cat.iter().filter(|e| e.family == Family::BT).count(), 1);
        assert_eq!(cat.iter().filter(|e| e.family == Family::BO).count(), 0); // 48 > 24
        assert_eq!(cat.iter().filter(|e| e.family == Family::BI).count(), 0); // p < 7
    }

    #[test]
    fn sl2_catalog_at_p2_is_cyclic_only() {
        let cat = sl2_catalog(2, 48).unwrap();
        assert!(cat.iter().all(|e| e.family == Family::Mu));
        assert_eq!(cat.len(), 48);
    }

    #[test]
    fn gl2_cyclic_conjugacy_dedup() {
        let cat = gl2_catalog(0, 5).unwrap();
        // mu_{5,2} and mu_{5,3} are the same entry: 2*3 = 6 = 1 mod 5
        let fives: Vec<u64> = cat
            .iter()
            .filter(|e| e.family == Family::MuNQ && e.param("n") == Some(5))
            .map(|e| e.param("q").unwrap())
            .collect();
        assert_eq!(fives, vec![1, 2, 4]); // q = 3 is conjugate to q = 2; q = 4 is self-inverse
    }

    #[test]
    fn gl2_fibered_product_lengths() {
        // (mu_{2m}, mu_{2m}; BD_n, BD_n) has length 4mn: m = 3, n = 2 -> 24
        let cat = gl2_catalog(3, 24).unwrap();
        let e = cat
            .iter()
            .find(|e| e.family == Family::Brieskorn2a && e.param("m") == Some(3))
            .expect("entry (m=3, n=2) present");
        assert_eq!(e.length, 24);
        assert_eq!(e.param("n"), Some(2));
        // case 2b smallest: m = 2, n = 3 -> 24
        let e = cat
            .iter()
            .find(|e| e.family == Family::Brieskorn2b)
            .expect("entry (m=2, n=3) present");
        assert_eq!((e.param("m"), e.param("n"), e.length), (Some(2), Some(3), 24));
    }

    #[test]
    fn gl2_catalog_at_p3_excludes_tetrahedral_families() {
        let cat = gl2_catalog(3, 60).unwrap();
        assert!(cat.iter().all(|e| !matches!(
            e.family,
            Family::Brieskorn3a | Family::Brieskorn3b | Family::Brieskorn4 | Family::Brieskorn5
        )));
        // 2a entries all have m odd and coprime to n
        for e in cat.iter().filter(|e| e.family == Family::Brieskorn2a) {
            let (m, n) = (e.param("m").unwrap(), e.param("n").unwrap());
            assert_eq!(m % 2, 1);
            assert_eq!(gcd_u64(m, n), 1);
        }
    }

    #[test]
    fn gl2_catalog_at_p2_is_cyclic_only() {
        let cat = gl2_catalog(2, 48).unwrap();
        assert!(cat.iter().all(|e| e.family == Family::MuNQ));
        assert!(cat.iter().all(|e| e.scheme.abs().is_cyclic()));
    }

    #[test]
    fn metacyclic_validation() {
        // mu(7, 9, 2): ord_7(2) = 3, e = 3 divides n/e = 3 -> very small
        let mp = MetacyclicParams::new(7, 9, 2).unwrap();
        assert_eq!(mp.e, 3);
        assert!(mp.is_very_small());
        assert!(mp.valid_in_characteristic(7));
        assert!(!mp.valid_in_characteristic(3));
        // mu(m, 3, r) with ord(r) = 3: rejected (3 does not divide n/e = 1)
        let mp = MetacyclicParams::new(7, 3, 2).unwrap();
        assert!(!mp.is_very_small());
        // gcd(n(r-1), m) = 1 violations are rejected outright
        assert!(MetacyclicParams::new(9, 3, 4).is_err());
    }

    #[test]
    fn gl3_catalog_contains_mu_7_9_2() {
        let cat = gl3_catalog(7, 63).unwrap();
        let e = cat
            .iter()
            .find(|e| e.family == Family::Metacyclic3)
            .expect("mu(7, 9, 2) has length 63");
        assert_eq!(
            (e.param("m"), e.param("f"), e.param("N"), e.param("r")),
            (Some(7), Some(2), Some(1), Some(2))
        );
        assert_eq!(e.length, 63);
        // its sibling with r = 4 = 2^2 is a separate entry of the same length
        let siblings = cat
            .iter()
            .filter(|e| e.family == Family::Metacyclic3)
            .count();
        assert_eq!(siblings, 2);
    }

    #[test]
    fn gl3_catalog_at_p3_is_cyclic_only() {
        let cat = gl3_catalog(3, 63).unwrap();
        assert!(cat.iter().all(|e| e.family == Family::Mu));
        assert!(cat.iter().all(|e| e.scheme.abs().is_cyclic()));
    }

    #[test]
    fn sl3_catalog_examples() {
        let cat = sl3_catalog(0, 7).unwrap();
        // m = 7, (2, 4): 1 + 2 + 4 = 7
        assert!(cat
            .iter()
            .any(|e| e.param("m") == Some(7) && e.param("q1") == Some(2) && e.param("q2") == Some(4)));
        // m = 5, (1, 1): 3 != 0 mod 5 — excluded
        assert!(!cat
            .iter()
            .any(|e| e.param("m") == Some(5) && e.param("q1") == Some(1) && e.param("q2") == Some(1)));
        // m = 1: the smooth entry is flagged
        let triv = cat.iter().find(|e| e.param("m") == Some(1)).unwrap();
        assert!(triv.is_smooth());
    }
}
