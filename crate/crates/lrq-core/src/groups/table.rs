//! Abstract finite groups given by a full multiplication table. Everything
//! here is index arithmetic; no matrix work. Used both by the matrix-group
//! layer and for quotients (which have no natural matrix realization).

/// A finite group on elements 0..n with element 0 the identity.
#[derive(Clone, Debug)]
pub struct TableGroup {
    n: usize,
    table: Vec<u32>, // row-major: table[i*n + j] = i * j
    inv: Vec<u32>,
    orders: Vec<u32>,
}

impl TableGroup {
    pub fn from_table(n: usize, table: Vec<u32>) -> Self {
        assert_eq!(table.len(), n * n);
        let mut inv = vec![u32::MAX; n];
        for i in 0..n {
            for j in 0..n {
                if table[i * n + j] == 0 {
                    inv[i] = j as u32;
                }
            }
        }
        assert!(inv.iter().all(|&x| x != u32::MAX), "missing inverses");
        let mut orders = vec![0u32; n];
        for i in 0..n {
            let mut x = i;
            let mut k = 1u32;
            while x != 0 {
                x = table[x * n + i] as usize;
                k += 1;
            }
            orders[i] = k;
        }
        TableGroup { n, table, inv, orders }
    }

    pub fn trivial() -> Self {
        TableGroup {
            n: 1,
            table: vec![0],
            inv: vec![0],
            orders: vec![1],
        }
    }

    /// Direct product of cyclic groups of the given orders (element index is
    /// mixed-radix over the factors). Test and oracle helper.
    pub fn product_of_cyclics(orders: &[u32]) -> Self {
        let n: usize = orders.iter().map(|&d| d as usize).product::<usize>().max(1);
        let decode = |mut x: usize| -> Vec<u32> {
            orders
                .iter()
                .map(|&d| {
                    let r = (x % d as usize) as u32;
                    x /= d as usize;
                    r
                })
                .collect()
        };
        let encode = |v: &[u32]| -> usize {
            let mut x = 0usize;
            for (k, &d) in orders.iter().enumerate().rev() {
                x = x * d as usize + v[k] as usize;
            }
            x
        };
        let mut table = vec![0u32; n * n];
        for i in 0..n {
            let a = decode(i);
            for j in 0..n {
                let b = decode(j);
                let s: Vec<u32> = a
                    .iter()
                    .zip(&b)
                    .zip(orders)
                    .map(|((&x, &y), &d)| (x + y) % d)
                    .collect();
                table[i * n + j] = encode(&s) as u32;
            }
        }
        Self::from_table(n, table)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i * self.n + j] as usize
    }

    pub fn inv(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    pub fn element_order(&self, i: usize) -> usize {
        self.orders[i] as usize
    }

    pub fn commutes(&self, i: usize, j: usize) -> bool {
        self.mul(i, j) == self.mul(j, i)
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commutator(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.mul(self.inv(g), self.inv(h)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|i| (i..self.n).all(|j| self.commutes(i, j)))
    }

    /// Sorted list of elements of the subgroup generated by `seed`.
    pub fn subgroup_closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.n];
        in_set[0] = true;
        let mut members = vec![0usize];
        for &s in seed {
            if !in_set[s] {
                in_set[s] = true;
                members.push(s);
            }
        }
        // close under right-multiplication by the seed
        let mut head = 0usize;
        while head < members.len() {
            let x = members[head];
            head += 1;
            for &g in seed {
                let y = self.mul(x, g);
                if !in_set[y] {
                    in_set[y] = true;
                    members.push(y);
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// Elements whose order is a power of p (p-torsion candidates for the
    /// Sylow test); includes the identity.
    pub fn p_power_order_elements(&self, p: u64) -> Vec<usize> {
        (0..self.n)
            .filter(|&i| {
                let mut d = self.element_order(i) as u64;
                while d % p == 0 {
                    d /= p;
                }
                d == 1
            })
            .collect()
    }

    pub fn is_subgroup(&self, sorted_members: &[usize]) -> bool {
        let in_set: std::collections::HashSet<usize> = sorted_members.iter().copied().collect();
        if !in_set.contains(&0) {
            return false;
        }
        sorted_members.iter().all(|&a| {
            in_set.contains(&self.inv(a))
                && sorted_members.iter().all(|&b| in_set.contains(&self.mul(a, b)))
        })
    }

    pub fn is_abelian_subset(&self, members: &[usize]) -> bool {
        members
            .iter()
            .all(|&a| members.iter().all(|&b| self.commutes(a, b)))
    }

    pub fn is_normal(&self, sorted_members: &[usize]) -> bool {
        let in_set: std::collections::HashSet<usize> = sorted_members.iter().copied().collect();
        (0..self.n).all(|g| sorted_members.iter().all(|&x| in_set.contains(&self.conjugate(g, x))))
    }

    /// The commutator subgroup [G, G] (normal because the set of commutators
    /// is closed under conjugation).
    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let mut comms: Vec<usize> = Vec::new();
        let mut seen = vec![false; self.n];
        for g in 0..self.n {
            for h in 0..self.n {
                let c = self.commutator(g, h);
                if !seen[c] {
                    seen[c] = true;
                    comms.push(c);
                }
            }
        }
        self.subgroup_closure(&comms)
    }

    /// Quotient by a normal subgroup; returns the quotient group together
    /// with the coset index of every element and one representative per
    /// coset (the smallest element index, so the ordering is deterministic).
    pub fn quotient(&self, normal_sorted: &[usize]) -> (TableGroup, Vec<usize>, Vec<usize>) {
        debug_assert!(self.is_subgroup(normal_sorted) && self.is_normal(normal_sorted));
        let mut coset_of = vec![usize::MAX; self.n];
        let mut reps: Vec<usize> = Vec::new();
        for g in 0..self.n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            for &x in normal_sorted {
                coset_of[self.mul(g, x)] = idx;
            }
            reps.push(g);
        }
        let k = reps.len();
        let mut table = vec![0u32; k * k];
        for (i, &gi) in reps.iter().enumerate() {
            for (j, &gj) in reps.iter().enumerate() {
                table[i * k + j] = coset_of[self.mul(gi, gj)] as u32;
            }
        }
        (TableGroup::from_table(k, table), coset_of, reps)
    }

    /// Restrict to a subgroup: a TableGroup on the given (sorted) members.
    pub fn subgroup(&self, sorted_members: &[usize]) -> TableGroup {
        debug_assert!(self.is_subgroup(sorted_members));
        let pos: std::collections::HashMap<usize, usize> = sorted_members
            .iter()
            .enumerate()
            .map(|(k, &g)| (g, k))
            .collect();
        let k = sorted_members.len();
        let mut table = vec![0u32; k * k];
        for (i, &gi) in sorted_members.iter().enumerate() {
            for (j, &gj) in sorted_members.iter().enumerate() {
                table[i * k + j] = pos[&self.mul(gi, gj)] as u32;
            }
        }
        TableGroup::from_table(k, table)
    }

    /// Invariant factors d_1 | d_2 | ... | d_k of an abelian group, by
    /// repeatedly extracting a cyclic subgroup of maximal order.
    pub fn abelian_invariants(&self) -> Vec<u64> {
        assert!(self.is_abelian(), "abelian_invariants needs an abelian group");
        let mut factors_desc: Vec<u64> = Vec::new();
        let mut current = self.clone();
        while current.order() > 1 {
            let x = (0..current.order())
                .max_by_key(|&i| current.element_order(i))
                .unwrap();
            factors_desc.push(current.element_order(x) as u64);
            let sub = current.subgroup_closure(&[x]);
            let (q, _, _) = current.quotient(&sub);
            current = q;
        }
        factors_desc.reverse();
        factors_desc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_product_basics() {
        let g = TableGroup::product_of_cyclics(&[2, 3]);
        assert_eq!(g.order(), 6);
        assert!(g.is_abelian());
        assert_eq!(g.abelian_invariants(), vec![6]); // C2 x C3 = C6
        let h = TableGroup::product_of_cyclics(&[2, 2]);
        assert_eq!(h.abelian_invariants(), vec![2, 2]);
        let k = TableGroup::product_of_cyclics(&[2, 4]);
        assert_eq!(k.abelian_invariants(), vec![2, 4]);
        let l = TableGroup::product_of_cyclics(&[6, 4]);
        assert_eq!(l.abelian_invariants(), vec![2, 12]);
    }

    #[test]
    fn quotient_of_c6_by_c3() {
        let g = TableGroup::product_of_cyclics(&[6]);
        let c3 = g.subgroup_closure(&[2]); // element of order 3
        assert_eq!(c3.len(), 3);
        let (q, _, _) = g.quotient(&c3);
        assert_eq!(q.order(), 2);
        assert_eq!(q.element_order(1), 2);
    }
}
