//! Finite groups realized concretely from cyclotomic matrix generators:
//! breadth-first closure, multiplication table, element orders, Sylow
//! analysis, commutator subgroup, abelianization.

mod table;

pub use table::TableGroup;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactmath::{lcm_u64, p_valuation, CycMatrix, CONDUCTOR_CAP};

/// Default closure cap; the CLI lets LRQ_CAP override it.
pub const DEFAULT_CLOSURE_CAP: usize = 1024;

/// Invariant factors d_1 | d_2 | ... | d_k of a finite abelian group
/// (empty = trivial group).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbelianStructure {
    factors: Vec<u64>,
}

impl AbelianStructure {
    pub fn new(factors: Vec<u64>) -> Self {
        for w in factors.windows(2) {
            assert!(w[1] % w[0] == 0, "invariant factors must form a divisibility chain");
        }
        assert!(factors.iter().all(|&d| d >= 2));
        AbelianStructure { factors }
    }

    pub fn trivial() -> Self {
        AbelianStructure { factors: vec![] }
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product::<u64>().max(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }
}

impl fmt::Display for AbelianStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// A finite matrix group, closure-complete over its generators, with the
/// full multiplication table. Element 0 is the identity and the element
/// ordering is the (deterministic) BFS discovery order.
pub struct FiniteMatrixGroup {
    dim: usize,
    conductor: u64,
    elements: Vec<CycMatrix>,
    table: TableGroup,
    /// element index of each input generator
    gen_elems: Vec<usize>,
    /// for j > 0: elements[j] = elements[word[j].0] * gen(word[j].1)
    word: Vec<(usize, usize)>,
}

impl FiniteMatrixGroup {
    /// Breadth-first closure of the generator list. Deterministic: elements
    /// are numbered in discovery order, scanning existing elements in order
    /// and generators in the order given.
    pub fn close(dim: usize, generators: Vec<CycMatrix>, cap: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadDimension(0));
        }
        // promote all generators to the least common conductor
        let mut conductor = 1u64;
        for g in &generators {
            if !g.is_square() || g.rows() != dim {
                return Err(Error::BadInput(format!(
                    "generator is {}x{}, expected {dim}x{dim}",
                    g.rows(),
                    g.cols()
                )));
            }
            conductor = lcm_u64(conductor, g.conductor());
            if conductor > CONDUCTOR_CAP {
                return Err(Error::ConductorCapExceeded(conductor));
            }
        }
        let gens: Vec<CycMatrix> = generators
            .into_iter()
            .map(|g| g.promote(conductor))
            .collect::<Result<Vec<_>>>()?;
        for g in &gens {
            if g.det()?.is_zero() {
                return Err(Error::NotInvertible);
            }
        }

        let identity = CycMatrix::identity(dim, conductor);
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<CycMatrix, usize> = HashMap::new();
        index.insert(identity, 0);
        let mut word: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX)];
        // gen_cols[i][k] = index of elements[i] * gens[k]
        let mut gen_cols: Vec<Vec<usize>> = Vec::new();

        let mut i = 0usize;
        while i < elements.len() {
            let mut row = Vec::with_capacity(gens.len());
            for (k, g) in gens.iter().enumerate() {
                let prod = elements[i].mul(g)?;
                let idx = match index.get(&prod) {
                    Some(&idx) => idx,
                    None => {
                        let idx = elements.len();
                        if idx >= cap {
                            return Err(Error::CapExceeded(cap));
                        }
                        elements.push(prod.clone());
                        index.insert(prod, idx);
                        word.push((i, k));
                        idx
                    }
                };
                row.push(idx);
            }
            gen_cols.push(row);
            i += 1;
        }

        let n = elements.len();
        // Full table by induction on BFS words:
        //   e_i * e_j = (e_i * e_parent(j)) * gen(k_j)
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            table[i * n] = i as u32;
        }
        for j in 1..n {
            let (pj, kj) = word[j];
            for i in 0..n {
                let t = table[i * n + pj] as usize;
                table[i * n + j] = gen_cols[t][kj] as u32;
            }
        }
        let table = TableGroup::from_table(n, table);
        let gen_elems: Vec<usize> = (0..gens.len()).map(|k| gen_cols[0][k]).collect();

        Ok(FiniteMatrixGroup {
            dim,
            conductor,
            elements,
            table,
            gen_elems,
            word,
        })
    }

    pub fn trivial(dim: usize) -> Self {
        Self::close(dim, vec![], 1).expect("trivial closure cannot fail")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn element(&self, i: usize) -> &CycMatrix {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[CycMatrix] {
        &self.elements
    }

    pub fn table(&self) -> &TableGroup {
        &self.table
    }

    /// Element indices of the input generators, in input order.
    pub fn generator_indices(&self) -> &[usize] {
        &self.gen_elems
    }

    pub fn generator_matrices(&self) -> Vec<CycMatrix> {
        self.gen_elems.iter().map(|&i| self.elements[i].clone()).collect()
    }

    /// BFS word data: for j > 0, elements[j] = elements[word(j).0] * gen(word(j).1).
    pub fn word(&self, j: usize) -> (usize, usize) {
        self.word[j]
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table.mul(i, j)
    }

    pub fn inv(&self, i: usize) -> usize {
        self.table.inv(i)
    }

    pub fn element_order(&self, i: usize) -> usize {
        self.table.element_order(i)
    }

    /// The set of elements of p-power order, when it is the unique abelian
    /// p-Sylow subgroup; None otherwise.
    pub fn unique_abelian_sylow_subgroup(&self, p: u64) -> Option<Vec<usize>> {
        assert!(p >= 2);
        let s = self.table.p_power_order_elements(p);
        let (_, p_part) = p_valuation(self.order() as u64, p);
        if s.len() as u64 != p_part {
            return None;
        }
        if !self.table.is_subgroup(&s) || !self.table.is_abelian_subset(&s) {
            return None;
        }
        Some(s)
    }

    /// True iff the elements of p-power order number exactly the p-part of
    /// |G|, form a subgroup, and that subgroup is abelian.
    pub fn unique_abelian_sylow(&self, p: u64) -> bool {
        self.unique_abelian_sylow_subgroup(p).is_some()
    }

    pub fn commutator_subgroup(&self) -> Vec<usize> {
        self.table.commutator_subgroup()
    }

    /// Invariant factors of G / [G, G].
    pub fn abelianization(&self) -> AbelianStructure {
        let derived = self.table.commutator_subgroup();
        let (quot, _, _) = self.table.quotient(&derived);
        AbelianStructure::new(quot.abelian_invariants())
    }

    /// True iff every abelian subgroup is cyclic, checked on two-generator
    /// subgroups: for every commuting pair (g, h) the subgroup <g, h> must
    /// contain an element whose order equals its cardinality.
    pub fn all_abelian_subgroups_cyclic(&self) -> bool {
        let n = self.order();
        for g in 1..n {
            let cyc = self.table.subgroup_closure(&[g]);
            let in_cyc: Vec<bool> = {
                let mut v = vec![false; n];
                for &x in &cyc {
                    v[x] = true;
                }
                v
            };
            for h in g + 1..n {
                if in_cyc[h] || !self.table.commutes(g, h) {
                    continue;
                }
                let sub = self.table.subgroup_closure(&[g, h]);
                let size = sub.len();
                if !sub.iter().any(|&x| self.element_order(x) == size) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff the whole group is cyclic.
    pub fn is_cyclic(&self) -> bool {
        let n = self.order();
        (0..n).any(|i| self.element_order(i) == n)
    }
}

impl fmt::Debug for FiniteMatrixGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteMatrixGroup(order {}, dim {}, conductor {})",
            self.order(),
            self.dim,
            self.conductor
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{root_of_unity, CycNum};

    fn diag(entries: Vec<CycNum>) -> CycMatrix {
        CycMatrix::diagonal(entries).unwrap()
    }

    /// mu_4 diagonal plus the antidiagonal zeta_4 matrix: the binary
    /// dihedral group of order 8.
    fn bd2_generators() -> Vec<CycMatrix> {
        let z4 = root_of_unity(4, 1);
        vec![
            diag(vec![z4.clone(), root_of_unity(4, 3)]),
            CycMatrix::new(
                2,
                2,
                vec![CycNum::zero(4), z4.clone(), z4, CycNum::zero(4)],
            )
            .unwrap(),
        ]
    }

    /// S3 realized by permutation-like matrices: a 3-cycle as a rotation of
    /// order 3 (diagonal over zeta_3 after conjugation is avoided on purpose:
    /// we use the regular 2-dimensional realization).
    fn s3_generators() -> Vec<CycMatrix> {
        let z3 = root_of_unity(3, 1);
        let z32 = root_of_unity(3, 2);
        // order-3 rotation diag(z3, z3^2) and the coordinate swap
        vec![
            diag(vec![z3, z32]),
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
        ]
    }

    #[test]
    fn closure_of_bd2_has_order_8() {
        let g = FiniteMatrixGroup::close(2, bd2_generators(), 64).unwrap();
        assert_eq!(g.order(), 8);
        // Lagrange
        for i in 0..g.order() {
            assert_eq!(8 % g.element_order(i), 0);
        }
    }

    #[test]
    fn trivial_group_from_empty_generators() {
        let g = FiniteMatrixGroup::close(3, vec![], 16).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.is_cyclic());
        assert!(g.abelianization().is_trivial());
    }

    #[test]
    fn cap_and_invertibility_errors() {
        let err = FiniteMatrixGroup::close(2, bd2_generators(), 4).unwrap_err();
        assert_eq!(err, Error::CapExceeded(4));
        let singular = CycMatrix::new(2, 2, vec![CycNum::zero(1); 4]).unwrap();
        let err = FiniteMatrixGroup::close(2, vec![singular], 4).unwrap_err();
        assert_eq!(err, Error::NotInvertible);
    }

    #[test]
    fn s3_sylow_structure() {
        let g = FiniteMatrixGroup::close(2, s3_generators(), 64).unwrap();
        assert_eq!(g.order(), 6);
        // unique C3 (the rotations), three 2-Sylows
        assert!(g.unique_abelian_sylow(3));
        assert!(!g.unique_abelian_sylow(2));
        // p not dividing |G|: trivially true
        assert!(g.unique_abelian_sylow(5));
        // oracle: enumerate all order-3 subgroups directly
        let mut order3_subgroups = std::collections::BTreeSet::new();
        for i in 0..g.order() {
            if g.element_order(i) == 3 {
                order3_subgroups.insert(g.table().subgroup_closure(&[i]));
            }
        }
        assert_eq!(order3_subgroups.len(), 1);
        // oracle: count involutions (three > the 2-part would allow in a unique Sylow)
        let involutions = (0..g.order()).filter(|&i| g.element_order(i) == 2).count();
        assert_eq!(involutions, 3);
    }

    #[test]
    fn s3_abelianization_is_c2() {
        let g = FiniteMatrixGroup::close(2, s3_generators(), 64).unwrap();
        assert_eq!(g.abelianization().factors(), &[2]);
    }

    #[test]
    fn klein_four_group_is_not_cyclic_friendly() {
        let one = CycNum::one(2);
        let m1 = CycNum::from_int(2, -1);
        let gens = vec![
            diag(vec![m1.clone(), one.clone()]),
            diag(vec![one, m1]),
        ];
        let g = FiniteMatrixGroup::close(2, gens, 16).unwrap();
        assert_eq!(g.order(), 4);
        assert!(!g.all_abelian_subgroups_cyclic());
        assert!(!g.is_cyclic());
        assert_eq!(g.abelianization().factors(), &[2, 2]);
    }

    #[test]
    fn cyclic_groups_pass_abelian_cyclic_check() {
        let g = FiniteMatrixGroup::close(
            2,
            vec![diag(vec![root_of_unity(12, 1), root_of_unity(12, 11)])],
            32,
        )
        .unwrap();
        assert_eq!(g.order(), 12);
        assert!(g.is_cyclic());
        assert!(g.all_abelian_subgroups_cyclic());
    }

    #[test]
    fn table_is_consistent_with_matrix_products() {
        let g = FiniteMatrixGroup::close(2, bd2_generators(), 64).unwrap();
        for i in 0..g.order() {
            for j in 0..g.order() {
                let prod = g.element(i).mul(g.element(j)).unwrap();
                assert_eq!(&prod, g.element(g.mul(i, j)), "table[{i}][{j}]");
            }
        }
    }
}
