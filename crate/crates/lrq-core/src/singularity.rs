//! Invariants of linearly reductive quotient singularities and the full
//! toric/cyclic pipeline: Hilbert bases of the invariant monoid,
//! Hirzebruch-Jung continued fractions, resolution chains, the F-regularity
//! graph test, and the rational-double-point correspondence table.

use num::{BigInt, One};

use crate::error::{Error, Result};
use crate::exactmath::{
    gcd_u64, p_valuation, root_of_unity, CycMatrix, Rational,
};
use crate::groups::{AbelianStructure, FiniteMatrixGroup};
use crate::lrgs::{det_character, lambda, EtaleQuotient, LrGroupScheme, LrRepresentation};

// ---------------------------------------------------------------------------
// Cyclic (toric) quotient types
// ---------------------------------------------------------------------------

/// Weighted cyclic quotient data: mu_n acting as diag(z^q1, ..., z^qd) with
/// every weight prime to n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicType {
    n: u64,
    weights: Vec<u64>,
}

/// Canonical representative of a weight tuple: the lexicographically least
/// sorted tuple (a*q_1 mod n, ..., a*q_d mod n) over units a mod n. The
/// result is idempotent, permutation-invariant and unit-scaling-invariant,
/// and always starts with weight 1 when n >= 2.
pub fn canonical_cyclic_weights(n: u64, weights: &[u64]) -> Vec<u64> {
    if n == 1 {
        return vec![1; weights.len()];
    }
    let reduce = |a: u64, w: u64| -> u64 { (a as u128 * w as u128 % n as u128) as u64 };
    let mut best: Option<Vec<u64>> = None;
    for a in 1..n {
        if gcd_u64(a, n) != 1 {
            continue;
        }
        let mut t: Vec<u64> = weights.iter().map(|&w| reduce(a, w)).collect();
        t.sort_unstable();
        if best.as_ref().map_or(true, |b| &t < b) {
            best = Some(t);
        }
    }
    best.expect("n >= 2 has at least the unit a = 1")
}

impl CyclicType {
    pub fn new(n: u64, weights: Vec<u64>) -> Result<Self> {
        if n < 1 || weights.is_empty() {
            return Err(Error::BadInput(
                "cyclic type needs n >= 1 and at least one weight".into(),
            ));
        }
        let weights: Vec<u64> = weights
            .into_iter()
            .map(|w| if n == 1 { 1 } else { w % n })
            .collect();
        for &w in &weights {
            if n > 1 && (w == 0 || gcd_u64(w, n) != 1) {
                return Err(Error::BadInput(format!(
                    "weight {w} is not prime to n = {n}"
                )));
            }
        }
        Ok(CyclicType { n, weights })
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Canonical form (sorted, unit-scaled; first weight 1 for n >= 2).
    pub fn canonical(&self) -> CyclicType {
        CyclicType {
            n: self.n,
            weights: canonical_cyclic_weights(self.n, &self.weights),
        }
    }

    /// Standard display: 1/n(q1, ..., qd).
    pub fn type_string(&self) -> String {
        let ws: Vec<String> = self.weights.iter().map(|w| w.to_string()).collect();
        format!("1/{}({})", self.n, ws.join(","))
    }

    /// The class group of the quotient: cyclic of order n.
    pub fn class_group(&self) -> AbelianStructure {
        if self.n == 1 {
            AbelianStructure::trivial()
        } else {
            AbelianStructure::new(vec![self.n])
        }
    }

    /// The diagonal matrix realization and its scheme at characteristic p.
    pub fn representation(&self, p: u64) -> Result<LrRepresentation> {
        let gens = if self.n == 1 {
            vec![CycMatrix::identity(self.dim(), 1)]
        } else {
            vec![CycMatrix::diagonal(
                self.weights
                    .iter()
                    .map(|&w| root_of_unity(self.n, w as i64))
                    .collect(),
            )?]
        };
        let group = FiniteMatrixGroup::close(self.dim(), gens, self.n as usize)?;
        let scheme = LrGroupScheme::new(p, group)?;
        Ok(LrRepresentation::tautological(scheme))
    }

    /// Minimal generating set of the invariant-exponent monoid
    /// M = { e in N^d : sum q_i e_i = 0 mod n }, i.e. the minimal nonzero
    /// elements of M. All generators live in the box [0, n]^d because
    /// e - n*unit_i stays in M.
    pub fn hilbert_basis(&self) -> Vec<Vec<u64>> {
        let n = self.n;
        let d = self.dim();
        let mut members: Vec<Vec<u64>> = Vec::new();
        let mut e = vec![0u64; d];
        'outer: loop {
            let s: u128 = e
                .iter()
                .zip(&self.weights)
                .map(|(&ei, &w)| ei as u128 * w as u128)
                .sum();
            if s % n as u128 == 0 && e.iter().any(|&x| x > 0) {
                members.push(e.clone());
            }
            // odometer over [0, n]^d
            for i in 0..d {
                if e[i] < n {
                    e[i] += 1;
                    continue 'outer;
                }
                e[i] = 0;
            }
            break;
        }
        let mut basis: Vec<Vec<u64>> = members
            .iter()
            .filter(|e| {
                !members
                    .iter()
                    .any(|f| *f != **e && f.iter().zip(e.iter()).all(|(a, b)| a <= b))
            })
            .cloned()
            .collect();
        basis.sort_unstable();
        basis
    }

    /// Hilbert-Kunz multiplicity of the toric quotient:
    /// (1/n) * #{ e in [0,n)^d : e is not componentwise >= any nonzero
    /// invariant exponent }, the count being length(S/m_R S).
    pub fn hilbert_kunz(&self) -> Rational {
        let n = self.n;
        let d = self.dim();
        let basis = self.hilbert_basis();
        // the box bound is backed by u_i^n being invariant: every pure power
        // n*unit_i must dominate a basis element
        for i in 0..d {
            let covered = basis
                .iter()
                .any(|b| b.iter().enumerate().all(|(j, &bj)| if j == i { bj <= n } else { bj == 0 }));
            assert!(covered, "pure power u_{i}^{n} must lie in the invariant monoid");
        }
        let mut count: u64 = 0;
        let mut e = vec![0u64; d];
        'outer: loop {
            let dominated = basis
                .iter()
                .any(|b| b.iter().zip(&e).all(|(&bi, &ei)| bi <= ei));
            if !dominated {
                count += 1;
            }
            for i in 0..d {
                if e[i] + 1 < n {
                    e[i] += 1;
                    continue 'outer;
                }
                e[i] = 0;
            }
            break;
        }
        Rational::new(BigInt::from(count), BigInt::from(n))
    }
}

// ---------------------------------------------------------------------------
// Hirzebruch-Jung continued fractions and continuants
// ---------------------------------------------------------------------------

/// The Hirzebruch-Jung expansion n/q = a1 - 1/(a2 - 1/(...)) with all
/// a_i >= 2; requires 0 < q < n and gcd(n, q) = 1.
pub fn hj_fraction(n: u64, q: u64) -> Result<Vec<u64>> {
    if !(q > 0 && q < n && gcd_u64(n, q) == 1) {
        return Err(Error::BadInput(format!(
            "hj fraction needs 0 < q < n with gcd(n, q) = 1; got n = {n}, q = {q}"
        )));
    }
    let mut out = Vec::new();
    let (mut n, mut q) = (n, q);
    while q > 0 {
        let a = n.div_ceil(q);
        out.push(a);
        let next = a * q - n;
        n = q;
        q = next;
    }
    debug_assert!(out.iter().all(|&a| a >= 2));
    Ok(out)
}

/// Continuants A_0..A_k of a coefficient sequence under
/// A_i = a_i * A_{i-1} - A_{i-2}, A_0 = 1, A_{-1} = 0. For the HJ expansion
/// of n/q the final continuant is n.
pub fn continuants(a: &[u64]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(a.len() + 1);
    out.push(BigInt::one());
    let mut prev = BigInt::from(0);
    for &ai in a {
        let next = BigInt::from(ai) * out.last().unwrap() - &prev;
        prev = out.last().unwrap().clone();
        out.push(next);
    }
    out
}

/// Exact continued-fraction evaluation a1 - 1/(a2 - 1/(...)); None for the
/// empty sequence. Independent check for hj_fraction.
pub fn evaluate_hj(a: &[u64]) -> Option<Rational> {
    let mut it = a.iter().rev();
    let first = it.next()?;
    let mut acc = Rational::from(BigInt::from(*first));
    for &ai in it {
        acc = Rational::from(BigInt::from(ai)) - acc.recip();
    }
    Some(acc)
}

// ---------------------------------------------------------------------------
// Resolution graphs and the F-regularity criterion
// ---------------------------------------------------------------------------

/// Dual graph of a resolution: vertices weighted by self-intersection
/// numbers (all <= -2), with an undirected edge list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    selfint: Vec<i64>,
    edges: Vec<(usize, usize)>,
}

/// Shape classification for the F-regularity test: a chain, a star with
/// three branch discriminants (sorted), or anything else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphShape {
    Chain,
    Star([u64; 3]),
    Other,
}

impl DualGraph {
    pub fn new(selfint: Vec<i64>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = selfint.len();
        for &w in &selfint {
            if w > -2 {
                return Err(Error::BadInput(format!(
                    "self-intersection {w} is not <= -2"
                )));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for &(u, v) in &edges {
            if u >= n || v >= n || u == v || !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::BadInput("bad edge list".into()));
            }
        }
        Ok(DualGraph { selfint, edges })
    }

    /// The chain with the given self-intersections.
    pub fn chain(selfint: Vec<i64>) -> Result<Self> {
        let edges = (1..selfint.len()).map(|i| (i - 1, i)).collect();
        DualGraph::new(selfint, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.selfint.len()
    }

    pub fn self_intersections(&self) -> &[i64] {
        &self.selfint
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.selfint.len()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    fn is_connected(&self) -> bool {
        let n = self.selfint.len();
        if n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut cnt = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    cnt += 1;
                    stack.push(w);
                }
            }
        }
        cnt == n
    }

    /// Discriminant of a chain: the top continuant of its (negated)
    /// self-intersections; direction-independent.
    fn branch_discriminant(&self, branch: &[usize]) -> u64 {
        let coeffs: Vec<u64> = branch.iter().map(|&v| (-self.selfint[v]) as u64).collect();
        let cont = continuants(&coeffs);
        u64::try_from(cont.last().unwrap().clone()).expect("branch discriminant fits u64")
    }

    pub fn shape(&self) -> GraphShape {
        let n = self.selfint.len();
        if !self.is_connected() {
            return GraphShape::Other;
        }
        let adj = self.adjacency();
        let max_deg = adj.iter().map(|a| a.len()).max().unwrap_or(0);
        if max_deg <= 2 {
            // a connected graph with degrees <= 2 and no duplicate edges is a
            // path unless it is a cycle
            if self.edges.len() == n.saturating_sub(1) {
                return GraphShape::Chain;
            }
            return GraphShape::Other;
        }
        if max_deg > 3 {
            return GraphShape::Other;
        }
        let centers: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 3).collect();
        if centers.len() != 1 {
            return GraphShape::Other;
        }
        let center = centers[0];
        // walk each branch away from the center; each must be a simple path
        let mut discs = Vec::with_capacity(3);
        for &start in &adj[center] {
            let mut branch = vec![start];
            let mut prev = center;
            let mut cur = start;
            loop {
                let next: Vec<usize> = adj[cur].iter().copied().filter(|&w| w != prev).collect();
                match next.len() {
                    0 => break,
                    1 => {
                        prev = cur;
                        cur = next[0];
                        branch.push(cur);
                    }
                    _ => return GraphShape::Other,
                }
            }
            discs.push(self.branch_discriminant(&branch));
        }
        let mut d: [u64; 3] = [discs[0], discs[1], discs[2]];
        d.sort_unstable();
        GraphShape::Star(d)
    }
}

/// The resolution chain of the cyclic quotient 1/n(1, q): vertices with
/// self-intersections -a_i from the HJ expansion of n/q.
pub fn resolution_chain(n: u64, q: u64) -> Result<DualGraph> {
    let a = hj_fraction(n, q)?;
    DualGraph::chain(a.into_iter().map(|x| -(x as i64)).collect())
}

/// Outcome of the F-regularity graph test. Rationality of the singularity is
/// an assumed precondition, recorded in the flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FRegularityReport {
    pub f_regular: bool,
    pub shape: GraphShape,
    pub reason: String,
    pub assumes_rational: bool,
}

/// The four-clause classification of F-regular rational surface
/// singularities by the shape of the minimal resolution graph:
/// chains always; stars of type (2,2,d) for p != 2; (2,3,3) and (2,3,4)
/// for p not in {2,3}; (2,3,5) for p not in {2,3,5}.
pub fn is_f_regular_graph(g: &DualGraph, p: u64) -> FRegularityReport {
    let shape = g.shape();
    let (f_regular, reason) = match &shape {
        GraphShape::Chain => (true, "chain".to_string()),
        GraphShape::Star([a, b, c]) => match (a, b, c) {
            (2, 2, d) => {
                if p != 2 {
                    (true, format!("star (2,2,{d}), p != 2"))
                } else {
                    (false, format!("star (2,2,{d}) needs p != 2"))
                }
            }
            (2, 3, 3) | (2, 3, 4) => {
                if p != 2 && p != 3 {
                    (true, format!("star (2,3,{c}), p not in {{2,3}}"))
                } else {
                    (false, format!("star (2,3,{c}) needs p not in {{2,3}}"))
                }
            }
            (2, 3, 5) => {
                if p != 2 && p != 3 && p != 5 {
                    (true, "star (2,3,5), p not in {2,3,5}".to_string())
                } else {
                    (false, "star (2,3,5) needs p not in {2,3,5}".to_string())
                }
            }
            _ => (false, format!("star ({a},{b},{c}) is not in the classification")),
        },
        GraphShape::Other => (false, "neither a chain nor a 3-branch star".to_string()),
    };
    FRegularityReport {
        f_regular,
        shape,
        reason,
        assumes_rational: true,
    }
}

// ---------------------------------------------------------------------------
// Rational double points and their group schemes
// ---------------------------------------------------------------------------

/// ADE types with their validity ranges (A_n: n >= 1, D_n: n >= 4).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AdeType {
    A(u64),
    D(u64),
    E6,
    E7,
    E8,
}

impl AdeType {
    pub fn new_a(n: u64) -> Result<Self> {
        if n >= 1 {
            Ok(AdeType::A(n))
        } else {
            Err(Error::BadInput("A_n needs n >= 1".into()))
        }
    }

    pub fn new_d(n: u64) -> Result<Self> {
        if n >= 4 {
            Ok(AdeType::D(n))
        } else {
            Err(Error::BadInput("D_n needs n >= 4".into()))
        }
    }

    pub fn rank(&self) -> u64 {
        match *self {
            AdeType::A(n) => n,
            AdeType::D(n) => n,
            AdeType::E6 => 6,
            AdeType::E7 => 7,
            AdeType::E8 => 8,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            AdeType::A(n) => format!("A{n}"),
            AdeType::D(n) => format!("D{n}"),
            AdeType::E6 => "E6".into(),
            AdeType::E7 => "E7".into(),
            AdeType::E8 => "E8".into(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::BadInput(format!("not an ADE type: `{s}`"));
        if let Some(rest) = s.strip_prefix(['A', 'a']) {
            return AdeType::new_a(rest.parse().map_err(|_| bad())?);
        }
        if let Some(rest) = s.strip_prefix(['D', 'd']) {
            return AdeType::new_d(rest.parse().map_err(|_| bad())?);
        }
        match s {
            "E6" | "e6" => Ok(AdeType::E6),
            "E7" | "e7" => Ok(AdeType::E7),
            "E8" | "e8" => Ok(AdeType::E8),
            _ => Err(bad()),
        }
    }

    /// The dual resolution graph (all self-intersections -2).
    pub fn graph(&self) -> DualGraph {
        let minus2 = |k: u64| vec![-2i64; k as usize];
        match *self {
            AdeType::A(n) => DualGraph::chain(minus2(n)).unwrap(),
            AdeType::D(n) => {
                // path 0..n-3 with two extra leaves on vertex n-3
                let n = n as usize;
                let mut edges: Vec<(usize, usize)> = (1..n - 2).map(|i| (i - 1, i)).collect();
                edges.push((n - 3, n - 2));
                edges.push((n - 3, n - 1));
                DualGraph::new(minus2(n as u64), edges).unwrap()
            }
            AdeType::E6 => {
                // chain 0-1-2-3-4 with a leaf 5 on vertex 2
                DualGraph::new(minus2(6), vec![(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)]).unwrap()
            }
            AdeType::E7 => DualGraph::new(
                minus2(7),
                vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 6)],
            )
            .unwrap(),
            AdeType::E8 => DualGraph::new(
                minus2(8),
                vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)],
            )
            .unwrap(),
        }
    }
}

/// The group scheme realizing an ADE rational double point as a linearly
/// reductive quotient, when the characteristic permits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RdpRealization {
    Realized {
        /// family name: "Mu", "BD", "BT", "BO", "BI"
        family: &'static str,
        /// the family parameter (n for Mu/BD), when there is one
        param: Option<u64>,
        length: u64,
        etale: bool,
    },
    Unrealizable { reason: String },
}

/// The correspondence table: A_n by mu_{n+1} (all p; etale iff p does not
/// divide n+1), D_n by BD_{n-2} (p != 2; etale iff p does not divide n-2),
/// E6/E7/E8 by BT/BO/BI (p outside 2,3 resp. 2,3,5; always etale).
pub fn rdp_group_for(t: AdeType, p: u64) -> RdpRealization {
    let etale_iff = |k: u64| p == 0 || k % p != 0;
    match t {
        AdeType::A(n) => RdpRealization::Realized {
            family: "Mu",
            param: Some(n + 1),
            length: n + 1,
            etale: etale_iff(n + 1),
        },
        AdeType::D(n) => {
            if p == 2 {
                RdpRealization::Unrealizable {
                    reason: "D_n needs p != 2".into(),
                }
            } else {
                RdpRealization::Realized {
                    family: "BD",
                    param: Some(n - 2),
                    length: 4 * (n - 2),
                    etale: etale_iff(n - 2),
                }
            }
        }
        AdeType::E6 | AdeType::E7 => {
            if p == 2 || p == 3 {
                RdpRealization::Unrealizable {
                    reason: format!("{} needs p not in {{2,3}}", t.label()),
                }
            } else {
                let (family, length) = if t == AdeType::E6 { ("BT", 24) } else { ("BO", 48) };
                RdpRealization::Realized {
                    family,
                    param: None,
                    length,
                    etale: true,
                }
            }
        }
        AdeType::E8 => {
            if p == 2 || p == 3 || p == 5 {
                RdpRealization::Unrealizable {
                    reason: "E8 needs p not in {2,3,5}".into(),
                }
            } else {
                RdpRealization::Realized {
                    family: "BI",
                    param: None,
                    length: 120,
                    etale: true,
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Lrq singularities and their invariants
// ---------------------------------------------------------------------------

/// A linearly reductive quotient singularity: a very small representation in
/// dimension >= 2.
pub struct LrqSingularity {
    rep: LrRepresentation,
}

/// The invariant bundle of an lrq singularity.
#[derive(Clone, Debug)]
pub struct LrqInvariants {
    pub length: usize,
    /// F-signature: exactly 1/|G|.
    pub f_signature: Rational,
    /// Class group as an abstract abelian group (isomorphic to the Cartier
    /// dual of the abelianization).
    pub class_group: AbelianStructure,
    /// Order of the p-primary part of the class group: the dual of the
    /// mu-part of G^ab; 1 in characteristic zero.
    pub class_group_p_part: u64,
    /// The etale local fundamental group: the etale quotient of the scheme.
    pub pi1_etale: EtaleQuotient,
    pub gorenstein: bool,
}

impl LrqSingularity {
    pub fn new(rep: LrRepresentation) -> Result<Self> {
        let l = lambda(&rep);
        if l != 0 {
            return Err(Error::NotVerySmall(l));
        }
        if rep.dim() < 2 {
            return Err(Error::BadDimension(rep.dim()));
        }
        Ok(LrqSingularity { rep })
    }

    pub fn rep(&self) -> &LrRepresentation {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn characteristic(&self) -> u64 {
        self.rep.scheme().characteristic()
    }

    pub fn invariants(&self) -> LrqInvariants {
        let scheme = self.rep.scheme();
        let length = scheme.length();
        let class_group = scheme.abs().abelianization();
        let p = scheme.characteristic();
        let class_group_p_part = if p == 0 {
            1
        } else {
            class_group
                .factors()
                .iter()
                .map(|&d| p_valuation(d, p).1)
                .product()
        };
        LrqInvariants {
            length,
            f_signature: Rational::new(BigInt::one(), BigInt::from(length)),
            class_group,
            class_group_p_part,
            pi1_etale: scheme.etale_quotient(),
            gorenstein: det_character(&self.rep).is_trivial(),
        }
    }

    /// Recover the weighted cyclic data when the action is cyclic and
    /// diagonal (the toric case).
    pub fn as_cyclic_type(&self) -> Option<CyclicType> {
        let scheme = self.rep.scheme();
        let abs = scheme.abs();
        if !abs.is_cyclic() {
            return None;
        }
        let n = abs.order() as u64;
        if n == 1 {
            return CyclicType::new(1, vec![1; self.dim()]).ok();
        }
        let g = (0..abs.order()).find(|&i| abs.element_order(i) == abs.order())?;
        let img = self.rep.image(g);
        if !img.is_diagonal() {
            return None;
        }
        let conductor = img.conductor();
        let mut weights = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let entry = img.at(i, i);
            let mut k = 0u64;
            let mut pow = crate::exactmath::CycNum::one(conductor);
            let zeta = root_of_unity(n, 1).promote(conductor).ok()?;
            loop {
                if &pow == entry {
                    break;
                }
                pow = pow.mul(&zeta);
                k += 1;
                if k >= n {
                    return None;
                }
            }
            weights.push(k);
        }
        CyclicType::new(n, weights).ok()
    }

    /// Hilbert-Kunz multiplicity; only the toric/cyclic case is computable
    /// (the general formula needs fundamental invariants of the group).
    pub fn hilbert_kunz(&self) -> Result<Rational> {
        match self.as_cyclic_type() {
            Some(t) => Ok(t.hilbert_kunz()),
            None => Err(Error::NotImplementedForNonAbelian),
        }
    }
}

/// Convenience: the lrq singularity of a weighted cyclic type at
/// characteristic p (errors when a weight shares a factor with n, i.e. the
/// action is not very small).
pub fn cyclic_lrq(t: &CyclicType, p: u64) -> Result<LrqSingularity> {
    LrqSingularity::new(t.representation(p)?)
}

/// Canonical parse of the "1/n(q1,...,qd)" type string.
pub fn parse_type_string(s: &str) -> Result<CyclicType> {
    let bad = || Error::BadInput(format!("cannot parse cyclic type `{s}`"));
    let s = s.trim();
    let rest = s.strip_prefix("1/").ok_or_else(bad)?;
    let open = rest.find('(').ok_or_else(bad)?;
    if !rest.ends_with(')') {
        return Err(bad());
    }
    let n: u64 = rest[..open].parse().map_err(|_| bad())?;
    let weights = rest[open + 1..rest.len() - 1]
        .split(',')
        .map(|w| w.trim().parse::<u64>().map_err(|_| bad()))
        .collect::<Result<Vec<u64>>>()?;
    CyclicType::new(n, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn hilbert_basis_examples() {
        // 1/3(1,2): x y = z^3 relations
        let t = CyclicType::new(3, vec![1, 2]).unwrap();
        assert_eq!(t.hilbert_basis(), vec![vec![0, 3], vec![1, 1], vec![3, 0]]);
        // 1/2(1,1)
        let t = CyclicType::new(2, vec![1, 1]).unwrap();
        assert_eq!(t.hilbert_basis(), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        // n = 1: the full polynomial ring
        let t = CyclicType::new(1, vec![1, 1, 1]).unwrap();
        assert_eq!(
            t.hilbert_basis(),
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]
        );
    }

    #[test]
    fn hilbert_kunz_closed_forms() {
        for n in 2..=12u64 {
            let cone = CyclicType::new(n, vec![1, 1]).unwrap();
            assert_eq!(cone.hilbert_kunz(), rat((n + 1) as i64, 2), "cone n = {n}");
            let rdp = CyclicType::new(n, vec![1, n - 1]).unwrap();
            assert_eq!(rdp.hilbert_kunz(), rat((2 * n - 1) as i64, n as i64), "A_(n-1)");
        }
        let smooth = CyclicType::new(1, vec![1, 1]).unwrap();
        assert_eq!(smooth.hilbert_kunz(), rat(1, 1));
    }

    #[test]
    fn hj_fraction_examples() {
        assert_eq!(hj_fraction(2, 1).unwrap(), vec![2]);
        assert_eq!(hj_fraction(5, 2).unwrap(), vec![3, 2]);
        assert_eq!(hj_fraction(12, 5).unwrap(), vec![3, 2, 3]);
        assert!(hj_fraction(4, 2).is_err());
        assert!(hj_fraction(3, 0).is_err());
        assert!(hj_fraction(3, 3).is_err());
        // oracle: exact continued-fraction evaluation returns n/q
        assert_eq!(evaluate_hj(&[3, 2]).unwrap(), rat(5, 2));
        assert_eq!(evaluate_hj(&[3, 2, 3]).unwrap(), rat(12, 5));
    }

    #[test]
    fn continuant_examples() {
        let to_i64 = |v: Vec<BigInt>| -> Vec<i64> {
            v.into_iter().map(|x| i64::try_from(x).unwrap()).collect()
        };
        assert_eq!(to_i64(continuants(&[2])), vec![1, 2]);
        assert_eq!(to_i64(continuants(&[3, 2])), vec![1, 3, 5]);
        assert_eq!(to_i64(continuants(&[3, 2, 3])), vec![1, 3, 5, 12]);
    }

    #[test]
    fn resolution_chains() {
        // 1/(n, n-1) is the A_(n-1) chain of -2 curves
        let g = resolution_chain(5, 4).unwrap();
        assert_eq!(g.self_intersections(), &[-2, -2, -2, -2]);
        assert_eq!(g.shape(), GraphShape::Chain);
        let g = resolution_chain(5, 2).unwrap();
        assert_eq!(g.self_intersections(), &[-3, -2]);
        let g = resolution_chain(2, 1).unwrap();
        assert_eq!(g.self_intersections(), &[-2]);
    }

    #[test]
    fn ade_graph_shapes() {
        assert_eq!(AdeType::A(4).graph().shape(), GraphShape::Chain);
        assert_eq!(AdeType::D(4).graph().shape(), GraphShape::Star([2, 2, 2]));
        assert_eq!(AdeType::D(6).graph().shape(), GraphShape::Star([2, 2, 4]));
        assert_eq!(AdeType::E6.graph().shape(), GraphShape::Star([2, 3, 3]));
        assert_eq!(AdeType::E7.graph().shape(), GraphShape::Star([2, 3, 4]));
        assert_eq!(AdeType::E8.graph().shape(), GraphShape::Star([2, 3, 5]));
    }

    #[test]
    fn f_regularity_gates() {
        let e8 = AdeType::E8.graph();
        assert!(is_f_regular_graph(&e8, 7).f_regular);
        assert!(!is_f_regular_graph(&e8, 5).f_regular);
        let d4 = AdeType::D(4).graph();
        assert!(!is_f_regular_graph(&d4, 2).f_regular);
        assert!(is_f_regular_graph(&d4, 3).f_regular);
        for p in [0u64, 2, 3, 5, 7, 11] {
            assert!(is_f_regular_graph(&AdeType::A(7).graph(), p).f_regular);
        }
    }

    #[test]
    fn rdp_table_rows() {
        assert_eq!(
            rdp_group_for(AdeType::A(4), 5),
            RdpRealization::Realized {
                family: "Mu",
                param: Some(5),
                length: 5,
                etale: false
            }
        );
        assert_eq!(
            rdp_group_for(AdeType::E8, 7),
            RdpRealization::Realized {
                family: "BI",
                param: None,
                length: 120,
                etale: true
            }
        );
        assert!(matches!(
            rdp_group_for(AdeType::E6, 2),
            RdpRealization::Unrealizable { .. }
        ));
        assert!(matches!(
            rdp_group_for(AdeType::D(5), 2),
            RdpRealization::Unrealizable { .. }
        ));
        assert_eq!(
            rdp_group_for(AdeType::D(6), 3),
            RdpRealization::Realized {
                family: "BD",
                param: Some(4),
                length: 16,
                etale: false
            }
        );
    }

    #[test]
    fn canonicalization_properties() {
        // 1/7: (3,5,6) ~ (1,2,4) under unit scaling
        assert_eq!(canonical_cyclic_weights(7, &[3, 5, 6]), vec![1, 2, 4]);
        assert_eq!(canonical_cyclic_weights(7, &[1, 2, 4]), vec![1, 2, 4]);
        // dimension 2: (n, q) and (n, q') with q q' = 1 mod n coincide
        assert_eq!(
            canonical_cyclic_weights(5, &[1, 2]),
            canonical_cyclic_weights(5, &[1, 3])
        );
        assert_ne!(
            canonical_cyclic_weights(5, &[1, 1]),
            canonical_cyclic_weights(5, &[1, 2])
        );
    }

    #[test]
    fn cyclic_invariants() {
        // A_4 = 1/5(1,4) at p = 7: f-signature 1/5, class group [5], pi1 = C5
        let t = CyclicType::new(5, vec![1, 4]).unwrap();
        let x = cyclic_lrq(&t, 7).unwrap();
        let inv = x.invariants();
        assert_eq!(inv.length, 5);
        assert_eq!(inv.f_signature, rat(1, 5));
        assert_eq!(inv.class_group.factors(), &[5]);
        assert_eq!(inv.class_group_p_part, 1);
        assert_eq!(inv.pi1_etale.order, 5);
        assert!(inv.gorenstein);
        // same type at p = 5: the quotient is purely infinitesimal
        let x = cyclic_lrq(&t, 5).unwrap();
        let inv = x.invariants();
        assert_eq!(inv.pi1_etale.order, 1);
        assert_eq!(inv.class_group_p_part, 5);
        // a weight sharing a factor with n is rejected
        assert!(CyclicType::new(6, vec![1, 2]).is_err());
    }

    #[test]
    fn hilbert_kunz_via_lrq_and_the_nonabelian_fence() {
        let t = CyclicType::new(4, vec![1, 3]).unwrap();
        let x = cyclic_lrq(&t, 0).unwrap();
        assert_eq!(x.hilbert_kunz().unwrap(), rat(7, 4));
    }

    #[test]
    fn type_string_round_trip() {
        let t = parse_type_string("1/7(1,2,4)").unwrap();
        assert_eq!(t.order(), 7);
        assert_eq!(t.weights(), &[1, 2, 4]);
        assert_eq!(t.type_string(), "1/7(1,2,4)");
        assert!(parse_type_string("7(1,2)").is_err());
        assert!(parse_type_string("1/6(1,2)").is_err()); // weight not prime to 6
    }
}
